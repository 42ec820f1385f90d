#ifndef ZFILT_NCPOLY_HPP
#define ZFILT_NCPOLY_HPP

// Truncated free associative algebra F_p<X_1, ..., X_r> / (degree > T).
//
// Monomials (words) are packed into a single 64-bit code: the letters of a
// word of length d are the base-r digits of the code, most significant first.
// Together with the degree this gives a total order (degree, then
// lexicographic) that is used as the storage order of terms.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fp.hpp"

namespace zfilt {

/// A word in the generators X_0, ..., X_{r-1}; letters are generator indices.
using Word = std::vector<std::uint8_t>;

inline constexpr int kInfiniteValuation = std::numeric_limits<int>::max();

/// Parameters of the truncated algebra: rank r, field F_p, truncation degree T.
/// Cheap to copy; the power table is shared.
class AlgebraSpec {
   public:
    AlgebraSpec(unsigned rank, std::uint32_t p, unsigned trunc) {
        if (rank < 1 || rank > 255) throw std::invalid_argument("AlgebraSpec: rank must be in [1, 255]");
        // r^T must fit the packed code comfortably.
        long double span = 1;
        for (unsigned i = 0; i < trunc; ++i) span *= rank;
        if (span > static_cast<long double>(std::uint64_t{1} << 62))
            throw std::invalid_argument("AlgebraSpec: rank^T too large to pack words into 64 bits");
        auto d = std::make_shared<Data>(Data{rank, PrimeField(p), trunc, {}});
        d->powers.assign(trunc + 1, 1);
        for (unsigned i = 1; i <= trunc; ++i) d->powers[i] = d->powers[i - 1] * rank;
        data_ = std::move(d);
    }

    unsigned rank() const noexcept { return data_->rank; }
    const PrimeField& field() const noexcept { return data_->field; }
    std::uint32_t p() const noexcept { return data_->field.p(); }
    unsigned trunc() const noexcept { return data_->trunc; }

    /// Same rank and prime, different truncation.
    AlgebraSpec with_trunc(unsigned trunc) const { return AlgebraSpec(rank(), p(), trunc); }

    /// r^d for d <= T.
    std::uint64_t words_of_degree(unsigned d) const { return data_->powers.at(d); }

    std::uint64_t encode(const Word& w) const {
        std::uint64_t code = 0;
        for (auto letter : w) {
            if (letter >= rank()) throw std::invalid_argument("Word letter out of range");
            code = code * rank() + letter;
        }
        return code;
    }

    Word decode(unsigned degree, std::uint64_t code) const {
        Word w(degree);
        for (unsigned i = degree; i-- > 0;) {
            w[i] = static_cast<std::uint8_t>(code % rank());
            code /= rank();
        }
        return w;
    }

    friend bool operator==(const AlgebraSpec& a, const AlgebraSpec& b) {
        return a.data_ == b.data_ ||
               (a.rank() == b.rank() && a.field() == b.field() && a.trunc() == b.trunc());
    }

   private:
    struct Data {
        unsigned rank;
        PrimeField field;
        unsigned trunc;
        std::vector<std::uint64_t> powers;
    };
    std::shared_ptr<const Data> data_;
};

struct Term {
    unsigned degree;
    std::uint64_t code;
    Elem coef;

    friend bool operator==(const Term&, const Term&) = default;
};

inline bool term_order(const Term& a, const Term& b) noexcept {
    return a.degree != b.degree ? a.degree < b.degree : a.code < b.code;
}

class NcPoly {
   public:
    explicit NcPoly(AlgebraSpec spec) : spec_(std::move(spec)) {}

    static NcPoly constant(const AlgebraSpec& spec, std::int64_t c) {
        NcPoly out(spec);
        Elem e = spec.field().reduce(c);
        if (e) out.terms_.push_back({0, 0, e});
        return out;
    }
    static NcPoly one(const AlgebraSpec& spec) { return constant(spec, 1); }

    /// c * w; dropped if |w| > T.
    static NcPoly monomial(const AlgebraSpec& spec, const Word& w, std::int64_t c = 1) {
        NcPoly out(spec);
        Elem e = spec.field().reduce(c);
        if (e && w.size() <= spec.trunc()) out.terms_.push_back({static_cast<unsigned>(w.size()), spec.encode(w), e});
        return out;
    }
    static NcPoly generator(const AlgebraSpec& spec, unsigned i) {
        return monomial(spec, Word{static_cast<std::uint8_t>(i)});
    }

    const AlgebraSpec& spec() const noexcept { return spec_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    Elem constant_term() const noexcept {
        return !terms_.empty() && terms_.front().degree == 0 ? terms_.front().coef : 0;
    }

    Elem coefficient(const Word& w) const {
        Term key{static_cast<unsigned>(w.size()), spec_.encode(w), 0};
        auto it = std::lower_bound(terms_.begin(), terms_.end(), key, term_order);
        return it != terms_.end() && it->degree == key.degree && it->code == key.code ? it->coef : 0;
    }

    /// Highest degree of a stored term; -1 for the zero polynomial.
    int degree() const noexcept { return terms_.empty() ? -1 : static_cast<int>(terms_.back().degree); }

    /// Lowest degree >= 1 carrying a nonzero coefficient, i.e. the largest k
    /// with a - const(a) in the k-th power of the augmentation ideal.
    int aug_valuation() const noexcept {
        for (const Term& t : terms_)
            if (t.degree >= 1) return static_cast<int>(t.degree);
        return kInfiniteValuation;
    }

    /// Dense coefficient vector of the degree-d part, indexed by word code
    /// (lexicographic order of the r^d words).
    std::vector<Elem> homogeneous_component(unsigned d) const {
        if (d > spec_.trunc()) throw std::invalid_argument("homogeneous_component: degree exceeds truncation");
        std::vector<Elem> out(spec_.words_of_degree(d), 0);
        for (const Term& t : terms_)
            if (t.degree == d) out[t.code] = t.coef;
        return out;
    }

    /// Degree-d part as a polynomial.
    NcPoly homogeneous_part(unsigned d) const {
        NcPoly out(spec_);
        for (const Term& t : terms_)
            if (t.degree == d) out.terms_.push_back(t);
        return out;
    }

    NcPoly& operator+=(const NcPoly& b) { return *this = combine(*this, b, false); }
    NcPoly& operator-=(const NcPoly& b) { return *this = combine(*this, b, true); }
    friend NcPoly operator+(const NcPoly& a, const NcPoly& b) { return combine(a, b, false); }
    friend NcPoly operator-(const NcPoly& a, const NcPoly& b) { return combine(a, b, true); }

    NcPoly operator-() const {
        NcPoly out = *this;
        for (Term& t : out.terms_) t.coef = spec_.field().neg(t.coef);
        return out;
    }

    NcPoly scaled(Elem c) const {
        NcPoly out(spec_);
        c %= spec_.p();
        if (c == 0) return out;
        out.terms_ = terms_;
        for (Term& t : out.terms_) t.coef = spec_.field().mul(t.coef, c);
        return out;
    }

    friend NcPoly operator*(const NcPoly& a, const NcPoly& b) {
        check_compatible(a, b);
        const AlgebraSpec& s = a.spec_;
        const PrimeField& f = s.field();
        const unsigned T = s.trunc();
        std::vector<Term> raw;
        raw.reserve(a.terms_.size() * std::min<std::size_t>(b.terms_.size(), 64));
        for (const Term& ta : a.terms_) {
            const unsigned room = T - ta.degree;
            for (const Term& tb : b.terms_) {
                if (tb.degree > room) break;
                raw.push_back({ta.degree + tb.degree, ta.code * s.words_of_degree(tb.degree) + tb.code,
                               f.mul(ta.coef, tb.coef)});
            }
        }
        NcPoly out(s);
        out.terms_ = normalize(f, std::move(raw));
        return out;
    }
    NcPoly& operator*=(const NcPoly& b) { return *this = *this * b; }

    NcPoly pow(std::uint64_t e) const {
        NcPoly result = one(spec_);
        NcPoly base = *this;
        while (e) {
            if (e & 1) result *= base;
            e >>= 1;
            if (e) base *= base;
        }
        return result;
    }

    /// Inverse of a unit 1 + a' (a' without constant term) as the truncated
    /// geometric series sum_{k=0}^{T} (1 - u)^k.
    NcPoly invert_unit() const {
        if (constant_term() != 1) throw std::invalid_argument("invert_unit: constant term must be 1");
        NcPoly q = one(spec_) - *this;  // no constant term
        NcPoly result = one(spec_);
        NcPoly power = one(spec_);
        for (unsigned k = 1; k <= spec_.trunc(); ++k) {
            power *= q;
            if (power.is_zero()) break;
            result += power;
        }
        return result;
    }

    /// Algebra endomorphism X_i -> images[i], applied to this polynomial.
    NcPoly substitute(const std::vector<NcPoly>& images) const {
        if (images.size() != spec_.rank()) throw std::invalid_argument("substitute: need one image per generator");
        for (const NcPoly& im : images) check_compatible(*this, im);
        NcPoly out(spec_);
        std::vector<Term> acc;
        for (const Term& t : terms_) {
            NcPoly prod = constant(spec_, t.coef);
            Word w = spec_.decode(t.degree, t.code);
            for (auto letter : w) {
                prod *= images[letter];
                if (prod.is_zero()) break;
            }
            acc.insert(acc.end(), prod.terms_.begin(), prod.terms_.end());
        }
        out.terms_ = normalize(spec_.field(), std::move(acc));
        return out;
    }

    friend bool operator==(const NcPoly& a, const NcPoly& b) { return a.spec_ == b.spec_ && a.terms_ == b.terms_; }

    /// Human-readable form, e.g. "1 + X1 + 2*X1X2". Letters are 1-based.
    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const Term& t : terms_) {
            if (!first) os << " + ";
            first = false;
            if (t.degree == 0) {
                os << t.coef;
                continue;
            }
            if (t.coef != 1) os << t.coef << '*';
            for (auto letter : spec_.decode(t.degree, t.code)) os << 'X' << int(letter) + 1;
        }
        return os.str();
    }

    friend std::ostream& operator<<(std::ostream& os, const NcPoly& a) { return os << a.to_string(); }

   private:
    static void check_compatible(const NcPoly& a, const NcPoly& b) {
        if (!(a.spec_ == b.spec_)) throw std::invalid_argument("NcPoly: mismatched algebra parameters");
    }

    static std::vector<Term> normalize(const PrimeField& f, std::vector<Term> raw) {
        std::sort(raw.begin(), raw.end(), term_order);
        std::vector<Term> out;
        out.reserve(raw.size());
        for (const Term& t : raw) {
            if (!out.empty() && out.back().degree == t.degree && out.back().code == t.code)
                out.back().coef = f.add(out.back().coef, t.coef);
            else
                out.push_back(t);
        }
        std::erase_if(out, [](const Term& t) { return t.coef == 0; });
        return out;
    }

    static NcPoly combine(const NcPoly& a, const NcPoly& b, bool subtract) {
        check_compatible(a, b);
        const PrimeField& f = a.spec_.field();
        NcPoly out(a.spec_);
        auto& o = out.terms_;
        o.reserve(a.terms_.size() + b.terms_.size());
        auto ia = a.terms_.begin(), ib = b.terms_.begin();
        while (ia != a.terms_.end() || ib != b.terms_.end()) {
            if (ib == b.terms_.end() || (ia != a.terms_.end() && term_order(*ia, *ib))) {
                o.push_back(*ia++);
            } else if (ia == a.terms_.end() || term_order(*ib, *ia)) {
                o.push_back({ib->degree, ib->code, subtract ? f.neg(ib->coef) : ib->coef});
                ++ib;
            } else {
                Elem c = subtract ? f.sub(ia->coef, ib->coef) : f.add(ia->coef, ib->coef);
                if (c) o.push_back({ia->degree, ia->code, c});
                ++ia;
                ++ib;
            }
        }
        return out;
    }

    AlgebraSpec spec_;
    std::vector<Term> terms_;  // sorted by term_order, coef != 0, degree <= T
};

/// Lie bracket [a, b] = ab - ba.
inline NcPoly lie_bracket(const NcPoly& a, const NcPoly& b) { return a * b - b * a; }

}  // namespace zfilt

#endif  // ZFILT_NCPOLY_HPP
