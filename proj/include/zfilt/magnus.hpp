#ifndef ZFILT_MAGNUS_HPP
#define ZFILT_MAGNUS_HPP

// Group arithmetic in F_r / D_{T+1}(F_r) through the Magnus embedding
// x_i -> 1 + X_i into the truncated free associative algebra over F_p.
//
// Membership in the Zassenhaus filtration is decided by the augmentation
// valuation: g lies in D_k iff embed(g) - 1 has no terms of degree < k
// (dimension subgroups of the group algebra over F_p).

#include <cctype>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "liegraded.hpp"
#include "ncpoly.hpp"

namespace zfilt {

struct Letter {
    std::uint8_t gen;  // 0-based generator index
    std::int8_t exp;   // +1 or -1

    friend bool operator==(const Letter&, const Letter&) = default;
};

/// Error in the textual word syntax; carries the 0-based character offset.
class WordParseError : public std::invalid_argument {
   public:
    WordParseError(const std::string& what, std::size_t position)
        : std::invalid_argument(what + " at position " + std::to_string(position)), position_(position) {}
    std::size_t position() const noexcept { return position_; }

   private:
    std::size_t position_;
};

/// Freely reduced word in the free group on x_1, ..., x_r.
class FreeWord {
   public:
    FreeWord() = default;
    explicit FreeWord(const std::vector<Letter>& letters) {
        for (const Letter& l : letters) push(l);
    }

    static FreeWord generator(unsigned i, int exp = 1) {
        FreeWord w;
        w.push({static_cast<std::uint8_t>(i), static_cast<std::int8_t>(exp)});
        return w;
    }

    /// Parses "x1*x1*x2*x1^-1*x2^-1". Whitespace is ignored; "1" or an
    /// empty string denote the identity; x_i^k repeats the letter |k| times.
    static FreeWord parse(const std::string& text, unsigned rank) {
        std::string s;
        std::vector<std::size_t> pos;  // original offsets of the kept characters
        for (std::size_t i = 0; i < text.size(); ++i)
            if (!std::isspace(static_cast<unsigned char>(text[i]))) {
                s += text[i];
                pos.push_back(i);
            }
        if (s.empty() || s == "1") return {};
        auto at = [&](std::size_t i) { return i < pos.size() ? pos[i] : text.size(); };

        FreeWord w;
        std::size_t i = 0;
        while (true) {
            if (i >= s.size() || s[i] != 'x') throw WordParseError("expected generator 'x<index>'", at(i));
            const std::size_t letter_start = i++;
            std::size_t digits = i;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            if (i == digits) throw WordParseError("expected generator index after 'x'", at(i));
            if (i - digits > 6) throw WordParseError("generator index too long", at(digits));
            const unsigned index = static_cast<unsigned>(std::stoul(s.substr(digits, i - digits)));
            if (index < 1 || index > rank)
                throw WordParseError("generator x" + std::to_string(index) + " out of range for rank " +
                                         std::to_string(rank),
                                     at(letter_start));
            long exp = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                bool negative = false;
                if (i < s.size() && s[i] == '-') {
                    negative = true;
                    ++i;
                }
                std::size_t e0 = i;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
                if (i == e0) throw WordParseError("expected exponent after '^'", at(i));
                if (i - e0 > 4) throw WordParseError("exponent too large", at(e0));
                exp = std::stol(s.substr(e0, i - e0));
                if (negative) exp = -exp;
            }
            for (long k = 0; k < (exp < 0 ? -exp : exp); ++k)
                w.push({static_cast<std::uint8_t>(index - 1), static_cast<std::int8_t>(exp < 0 ? -1 : 1)});
            if (i == s.size()) break;
            if (s[i] != '*') throw WordParseError("expected '*' between letters", at(i));
            ++i;
        }
        return w;
    }

    const std::vector<Letter>& letters() const noexcept { return letters_; }
    std::size_t length() const noexcept { return letters_.size(); }
    bool is_identity() const noexcept { return letters_.empty(); }

    FreeWord inverse() const {
        FreeWord w;
        for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
            w.letters_.push_back({it->gen, static_cast<std::int8_t>(-it->exp)});
        return w;
    }

    friend FreeWord operator*(const FreeWord& a, const FreeWord& b) {
        FreeWord w = a;
        for (const Letter& l : b.letters_) w.push(l);
        return w;
    }

    FreeWord pow(std::uint64_t e) const {
        FreeWord w;
        for (std::uint64_t i = 0; i < e; ++i) w = w * *this;
        return w;
    }

    friend bool operator==(const FreeWord&, const FreeWord&) = default;

    std::string to_string() const {
        if (letters_.empty()) return "1";
        std::string s;
        for (std::size_t i = 0; i < letters_.size(); ++i) {
            if (i) s += '*';
            s += "x" + std::to_string(int(letters_[i].gen) + 1);
            if (letters_[i].exp < 0) s += "^-1";
        }
        return s;
    }

   private:
    void push(const Letter& l) {
        if (!letters_.empty() && letters_.back().gen == l.gen && letters_.back().exp == -l.exp)
            letters_.pop_back();
        else
            letters_.push_back(l);
    }

    std::vector<Letter> letters_;
};

/// Group commutator [a, b] = a b a^-1 b^-1.
inline FreeWord commutator(const FreeWord& a, const FreeWord& b) { return a * b * a.inverse() * b.inverse(); }

/// Unit of the truncated algebra with constant term 1.
class MagnusElement {
   public:
    explicit MagnusElement(NcPoly poly) : poly_(std::move(poly)) {
        if (poly_.constant_term() != 1) throw std::invalid_argument("MagnusElement: constant term must be 1");
    }
    static MagnusElement identity(const AlgebraSpec& spec) { return MagnusElement(NcPoly::one(spec)); }

    const NcPoly& poly() const noexcept { return poly_; }
    const AlgebraSpec& spec() const noexcept { return poly_.spec(); }

    /// Largest k <= T with the element in D_k (kInfiniteValuation if trivial mod D_{T+1}).
    int valuation() const noexcept { return poly_.aug_valuation(); }

    MagnusElement inverse() const { return MagnusElement(poly_.invert_unit()); }
    MagnusElement pow(std::uint64_t e) const { return MagnusElement(poly_.pow(e)); }

    friend MagnusElement operator*(const MagnusElement& a, const MagnusElement& b) {
        return MagnusElement(a.poly_ * b.poly_);
    }
    friend bool operator==(const MagnusElement&, const MagnusElement&) = default;

   private:
    NcPoly poly_;
};

inline MagnusElement commutator(const MagnusElement& a, const MagnusElement& b) {
    return a * b * a.inverse() * b.inverse();
}

/// The Magnus image of a free word.
inline MagnusElement embed(const FreeWord& w, const AlgebraSpec& spec) {
    if (spec.trunc() < 1) throw std::invalid_argument("embed: truncation must be >= 1");
    std::vector<NcPoly> pos, neg;
    for (unsigned i = 0; i < spec.rank(); ++i) {
        pos.push_back(NcPoly::one(spec) + NcPoly::generator(spec, i));
        neg.push_back(pos.back().invert_unit());
    }
    NcPoly acc = NcPoly::one(spec);
    for (const Letter& l : w.letters()) {
        if (l.gen >= spec.rank()) throw std::invalid_argument("embed: generator out of range");
        acc *= l.exp > 0 ? pos[l.gen] : neg[l.gen];
    }
    return MagnusElement(std::move(acc));
}

inline int zassenhaus_valuation(const MagnusElement& g) { return g.valuation(); }

/// gamma(u): the group commutator bracketing of a Lyndon word that mirrors
/// its standard Lie bracketing.
inline FreeWord commutator_bracketing(const Word& u) {
    if (!is_lyndon(u)) throw std::invalid_argument("commutator_bracketing: word is not Lyndon");
    if (u.size() == 1) return FreeWord::generator(u[0]);
    auto [v, w] = standard_factorization(u);
    return commutator(commutator_bracketing(v), commutator_bracketing(w));
}

/// gamma(u)^(p^j): a group element of D_n whose image in D_n/D_{n+1} is the basis vector b.
inline FreeWord group_realization(const GradedBasisElement& b, std::uint32_t p) {
    std::uint64_t q = 1;
    for (unsigned i = 0; i < b.p_exponent; ++i) q *= p;
    return commutator_bracketing(b.lyndon).pow(q);
}

/// Checks the group/Lie contract for a realization: valuation exactly n and
/// degree-n component equal to the basis polynomial.
inline bool realization_matches(const GradedBasisElement& b, const FreeWord& g, const AlgebraSpec& spec) {
    const unsigned n = static_cast<unsigned>(b.realization.degree());
    if (spec.trunc() < n) throw std::invalid_argument("realization_matches: truncation below layer degree");
    MagnusElement e = embed(g, spec);
    return e.valuation() == static_cast<int>(n) &&
           e.poly().homogeneous_component(n) == b.realization.homogeneous_component(n);
}

/// A group endomorphism of F_r given by the images of the generators.
struct Endomorphism {
    std::vector<FreeWord> images;

    unsigned rank() const noexcept { return static_cast<unsigned>(images.size()); }

    static Endomorphism identity(unsigned r) {
        Endomorphism phi;
        for (unsigned i = 0; i < r; ++i) phi.images.push_back(FreeWord::generator(i));
        return phi;
    }

    /// Inner automorphism w -> c w c^-1.
    static Endomorphism conjugation(unsigned r, const FreeWord& c) {
        Endomorphism phi;
        for (unsigned i = 0; i < r; ++i) phi.images.push_back(c * FreeWord::generator(i) * c.inverse());
        return phi;
    }

    std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < images.size(); ++i)
            s += (i ? ", " : "") + std::string("x") + std::to_string(i + 1) + " -> " + images[i].to_string();
        return s;
    }
};

inline FreeWord apply_endomorphism(const Endomorphism& phi, const FreeWord& w) {
    FreeWord out;
    for (const Letter& l : w.letters()) {
        if (l.gen >= phi.rank()) throw std::invalid_argument("apply_endomorphism: generator out of range");
        out = out * (l.exp > 0 ? phi.images[l.gen] : phi.images[l.gen].inverse());
    }
    return out;
}

/// True iff phi(x_i) x_i^-1 lies in D_2 = F^p [F, F] for every generator.
inline bool is_trivial_mod_D2(const Endomorphism& phi, std::uint32_t p) {
    AlgebraSpec spec(phi.rank(), p, 2);
    for (unsigned i = 0; i < phi.rank(); ++i) {
        FreeWord d = phi.images[i] * FreeWord::generator(i).inverse();
        if (zassenhaus_valuation(embed(d, spec)) < 2) return false;
    }
    return true;
}

struct Lemma22Entry {
    unsigned n;
    std::string basis_element;
    int valuation;  // of phi(g) g^-1; kInfiniteValuation when trivial mod D_{T+1}
    bool pass;
};

struct Lemma22Report {
    std::string phi;
    unsigned rank = 0;
    std::uint32_t p = 0;
    unsigned n_max = 0;
    unsigned trunc = 0;
    bool precondition_ok = false;
    std::vector<Lemma22Entry> entries;

    std::size_t violations() const {
        std::size_t v = 0;
        for (const auto& e : entries) v += !e.pass;
        return v;
    }
    bool pass() const { return precondition_ok && violations() == 0; }
};

/// For every graded basis element b of layers 1..n_max with group realization
/// g, checks phi(g) g^-1 in D_{n+1}. Works for arbitrary endomorphisms; only
/// the homomorphism property is used.
inline Lemma22Report check_graded_triviality(const Endomorphism& phi, std::uint32_t p, unsigned n_max,
                                             unsigned trunc = 0) {
    Lemma22Report rep;
    rep.phi = phi.to_string();
    rep.rank = phi.rank();
    rep.p = p;
    rep.n_max = n_max;
    rep.trunc = trunc ? trunc : n_max + 1;
    if (rep.trunc < n_max + 1) throw std::invalid_argument("check_graded_triviality: need T >= n_max + 1");
    rep.precondition_ok = is_trivial_mod_D2(phi, p);
    if (!rep.precondition_ok) return rep;

    AlgebraSpec spec(phi.rank(), p, rep.trunc);
    for (unsigned n = 1; n <= n_max; ++n) {
        GradedLayer layer = graded_basis(phi.rank(), n, p);
        for (const auto& b : layer.basis()) {
            FreeWord g = group_realization(b, p);
            MagnusElement diff = embed(apply_endomorphism(phi, g), spec) * embed(g, spec).inverse();
            int v = diff.valuation();
            rep.entries.push_back({n, b.label(), v, v >= static_cast<int>(n + 1)});
        }
    }
    return rep;
}

struct GradedRankCheck {
    unsigned r, n;
    std::uint32_t p;
    std::size_t expected;     // c_n
    std::size_t group_rank;   // rank of degree-n components of embed(g_b) - 1
    bool contract_ok;         // every g_b has valuation n and the right leading term
    bool spans_agree;         // group-level span == Lie-level span
    bool pass() const { return contract_ok && spans_agree && group_rank == expected; }
};

/// Rank of the leading terms of the group realizations of the layer-n basis.
inline GradedRankCheck graded_rank_check(unsigned r, unsigned n, std::uint32_t p) {
    GradedLayer layer = graded_basis(r, n, p);
    AlgebraSpec spec(r, p, n);
    GradedRankCheck out{r, n, p, layer.dim(), 0, true, true};
    std::vector<std::vector<Elem>> comps;
    for (const auto& b : layer.basis()) {
        MagnusElement e = embed(group_realization(b, p), spec);
        if (e.valuation() != static_cast<int>(n)) out.contract_ok = false;
        comps.push_back(e.poly().homogeneous_component(n));
        if (comps.back() != b.realization.homogeneous_component(n)) out.contract_ok = false;
    }
    const std::size_t dim = spec.words_of_degree(n);
    SpanSolver group_span(spec.field(), comps, dim);
    out.group_rank = group_span.rank();
    for (const auto& b : layer.basis())
        if (!group_span.solve(b.realization.homogeneous_component(n))) out.spans_agree = false;
    for (const auto& c : comps)
        if (!layer.coordinates(c)) out.spans_agree = false;
    return out;
}

struct RecursionCheck {
    unsigned n;
    std::string kind;  // "power" or "commutator j+k"
    std::size_t samples = 0;
    std::size_t violations = 0;
    int min_valuation = kInfiniteValuation;
};

struct RecursionReport {
    unsigned rank = 0;
    std::uint32_t p = 0;
    unsigned n_max = 0;
    unsigned trunc = 0;
    std::uint64_t seed = 0;
    std::vector<RecursionCheck> checks;
    bool pass() const {
        for (const auto& c : checks)
            if (c.violations) return false;
        return true;
    }
};

/// Deterministic sampler of words guaranteed (by construction) to lie in D_k.
class FiltrationSampler {
   public:
    FiltrationSampler(unsigned r, std::uint32_t p, unsigned max_layer, std::uint64_t seed)
        : r_(r), p_(p), max_layer_(max_layer), rng_(seed) {}

    std::uint64_t below(std::uint64_t n) { return rng_() % n; }

    FreeWord random_word(std::size_t max_len) {
        std::vector<Letter> ls;
        std::size_t len = 1 + below(max_len);
        for (std::size_t i = 0; i < len; ++i)
            ls.push_back({static_cast<std::uint8_t>(below(r_)), static_cast<std::int8_t>(below(2) ? 1 : -1)});
        return FreeWord(ls);
    }

    /// Product of one to three conjugates of realizations of basis elements
    /// from layers >= k (each with a random sign).
    FreeWord sample_at_depth(unsigned k) {
        if (k <= 1 && below(3) == 0) return random_word(4);
        FreeWord out;
        const std::size_t factors = 1 + below(3);
        for (std::size_t f = 0; f < factors; ++f) {
            unsigned lo = std::max(k, 1u);
            unsigned hi = std::min(max_layer_, lo + 1);
            unsigned layer = lo + static_cast<unsigned>(below(hi - lo + 1));
            const auto& reps = realizations(layer);
            FreeWord g = reps[below(reps.size())];
            if (below(2)) g = g.inverse();
            FreeWord c = below(2) ? random_word(2) : FreeWord{};
            out = out * c * g * c.inverse();
        }
        return out;
    }

   private:
    const std::vector<FreeWord>& realizations(unsigned n) {
        auto it = cache_.find(n);
        if (it != cache_.end()) return it->second;
        std::vector<FreeWord> reps;
        GradedLayer layer = graded_basis(r_, n, p_);
        for (const auto& b : layer.basis()) reps.push_back(group_realization(b, p_));
        return cache_.emplace(n, std::move(reps)).first->second;
    }

    unsigned r_;
    std::uint32_t p_;
    unsigned max_layer_;
    std::mt19937_64 rng_;
    std::map<unsigned, std::vector<FreeWord>> cache_;
};

/// One-sided check of the recursive description of D_n: for sampled
/// a in D_ceil(n/p), a^p in D_n; for sampled a in D_j, b in D_k with
/// j + k = n, [a, b] in D_n. Sampled elements are also checked to lie in the
/// filtration step they were drawn from.
inline RecursionReport verify_recursive_filtration(unsigned r, std::uint32_t p, unsigned n_max,
                                                   std::size_t samples_per_split = 200, unsigned trunc = 0,
                                                   std::uint64_t seed = 1) {
    RecursionReport rep;
    rep.rank = r;
    rep.p = p;
    rep.n_max = n_max;
    rep.trunc = trunc ? trunc : n_max;
    rep.seed = seed;
    if (rep.trunc < n_max) throw std::invalid_argument("verify_recursive_filtration: need T >= n_max");
    AlgebraSpec spec(r, p, rep.trunc);
    FiltrationSampler sampler(r, p, rep.trunc, seed);

    auto draw = [&](unsigned depth, RecursionCheck& chk) {
        MagnusElement e = embed(sampler.sample_at_depth(depth), spec);
        if (e.valuation() < static_cast<int>(depth)) ++chk.violations;
        return e;
    };

    for (unsigned n = 2; n <= n_max; ++n) {
        RecursionCheck pw{n, "power", 0, 0, kInfiniteValuation};
        const unsigned depth = (n + p - 1) / p;
        for (std::size_t s = 0; s < samples_per_split; ++s) {
            MagnusElement a = draw(depth, pw);
            int v = a.pow(p).valuation();
            pw.min_valuation = std::min(pw.min_valuation, v);
            pw.violations += v < static_cast<int>(n);
            ++pw.samples;
        }
        rep.checks.push_back(pw);
        for (unsigned j = 1; j < n; ++j) {
            const unsigned k = n - j;
            if (j > k) break;
            RecursionCheck cm{n, "commutator " + std::to_string(j) + "+" + std::to_string(k), 0, 0,
                              kInfiniteValuation};
            for (std::size_t s = 0; s < samples_per_split; ++s) {
                MagnusElement a = draw(j, cm);
                MagnusElement b = draw(k, cm);
                int v = commutator(a, b).valuation();
                cm.min_valuation = std::min(cm.min_valuation, v);
                cm.violations += v < static_cast<int>(n);
                ++cm.samples;
            }
            rep.checks.push_back(cm);
        }
    }
    return rep;
}

}  // namespace zfilt

#endif  // ZFILT_MAGNUS_HPP
