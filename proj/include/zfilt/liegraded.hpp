#ifndef ZFILT_LIEGRADED_HPP
#define ZFILT_LIEGRADED_HPP

// Graded layers L_n ~ D_n(F_r)/D_{n+1}(F_r) realized inside the free
// associative algebra over F_p, with basis { sigma(u)^(p^j) : |u| p^j = n,
// u Lyndon }, and the matrices of the linear action of GL_r(F_p) (or its
// determinant +-1 subgroup) on them.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "arith.hpp"
#include "fp.hpp"
#include "ncpoly.hpp"

namespace zfilt {

/// A word is Lyndon iff it is strictly smaller than every proper rotation.
inline bool is_lyndon(const Word& u) {
    if (u.empty()) return false;
    const std::size_t n = u.size();
    for (std::size_t s = 1; s < n; ++s) {
        // compare u with its rotation starting at s
        for (std::size_t i = 0; i < n; ++i) {
            auto a = u[i], b = u[(s + i) % n];
            if (a < b) break;
            if (a > b) return false;
            if (i + 1 == n) return false;  // equal to a rotation: periodic
        }
    }
    return true;
}

/// All Lyndon words of length exactly d over {0, ..., r-1}, lexicographically
/// sorted (Duval's generation algorithm, filtered by length).
inline std::vector<Word> lyndon_words(unsigned r, unsigned d) {
    if (r < 1 || d < 1) throw std::invalid_argument("lyndon_words: r and d must be >= 1");
    std::vector<Word> out;
    std::vector<int> w{0};
    while (!w.empty()) {
        if (w.size() == d) out.emplace_back(w.begin(), w.end());
        const std::size_t m = w.size();
        while (w.size() < d) w.push_back(w[w.size() - m]);
        while (!w.empty() && w.back() == static_cast<int>(r) - 1) w.pop_back();
        if (!w.empty()) ++w.back();
    }
    return out;
}

/// u = v w with w the longest proper suffix of u that is Lyndon.
inline std::pair<Word, Word> standard_factorization(const Word& u) {
    if (u.size() < 2 || !is_lyndon(u)) throw std::invalid_argument("standard_factorization: need a Lyndon word of length >= 2");
    for (std::size_t split = 1; split < u.size(); ++split) {
        Word suffix(u.begin() + split, u.end());
        if (is_lyndon(suffix)) return {Word(u.begin(), u.begin() + split), suffix};
    }
    throw std::logic_error("standard_factorization: unreachable");
}

/// The Lie polynomial sigma(u) = [sigma(v), sigma(w)] of a Lyndon word.
inline NcPoly standard_bracketing(const AlgebraSpec& spec, const Word& u) {
    if (!is_lyndon(u)) throw std::invalid_argument("standard_bracketing: word is not Lyndon");
    if (u.size() == 1) return NcPoly::generator(spec, u[0]);
    auto [v, w] = standard_factorization(u);
    return lie_bracket(standard_bracketing(spec, v), standard_bracketing(spec, w));
}

inline std::string word_to_string(const Word& w) {
    std::string s;
    for (auto letter : w) s += "x" + std::to_string(int(letter) + 1);
    return s;
}

struct GradedBasisElement {
    Word lyndon;
    unsigned p_exponent = 0;  // j: realization is sigma(u)^(p^j)
    NcPoly realization;       // homogeneous of degree |u| * p^j

    std::string label() const { return "(" + word_to_string(lyndon) + "," + std::to_string(p_exponent) + ")"; }
};

class GradedLayer {
   public:
    GradedLayer(AlgebraSpec spec, unsigned n, std::vector<GradedBasisElement> basis)
        : spec_(std::move(spec)), n_(n), basis_(std::move(basis)) {
        std::vector<std::vector<Elem>> vecs;
        for (const auto& b : basis_) vecs.push_back(b.realization.homogeneous_component(n_));
        solver_ = SpanSolver(spec_.field(), std::move(vecs), spec_.words_of_degree(n_));
    }

    const AlgebraSpec& spec() const noexcept { return spec_; }
    unsigned degree() const noexcept { return n_; }
    std::size_t dim() const noexcept { return basis_.size(); }
    std::size_t rank() const noexcept { return solver_.rank(); }
    const std::vector<GradedBasisElement>& basis() const noexcept { return basis_; }

    /// Basis coordinates of a degree-n coefficient vector, or nullopt if it
    /// lies outside the layer.
    std::optional<std::vector<Elem>> coordinates(std::span<const Elem> component) const {
        return solver_.solve(component);
    }

    std::vector<Elem> component_of(std::span<const Elem> coords) const {
        if (coords.size() != dim()) throw std::invalid_argument("component_of: coordinate length mismatch");
        const PrimeField& f = spec_.field();
        std::vector<Elem> out(spec_.words_of_degree(n_), 0);
        for (std::size_t i = 0; i < dim(); ++i) {
            if (coords[i] == 0) continue;
            auto v = basis_[i].realization.homogeneous_component(n_);
            for (std::size_t k = 0; k < v.size(); ++k) out[k] = f.add(out[k], f.mul(coords[i], v[k]));
        }
        return out;
    }

   private:
    AlgebraSpec spec_;
    unsigned n_;
    std::vector<GradedBasisElement> basis_;
    SpanSolver solver_;
};

/// Thrown when a built-in self-check fails (rank defect, image outside layer).
class SelfCheckError : public std::logic_error {
   public:
    using std::logic_error::logic_error;
};

/// Basis of L_n: all (u, j) with |u| p^j = n, ordered by |u| then u.
inline GradedLayer graded_basis(unsigned r, unsigned n, std::uint32_t p) {
    if (n < 1) throw std::invalid_argument("graded_basis: n must be >= 1");
    AlgebraSpec spec(r, p, n);
    std::vector<unsigned> exponents;  // j with p^j | n, largest first (shortest u first)
    {
        unsigned j = 0;
        for (std::uint64_t q = 1; n % q == 0; q *= p, ++j) exponents.push_back(j);
        std::reverse(exponents.begin(), exponents.end());
    }
    std::vector<GradedBasisElement> basis;
    for (unsigned j : exponents) {
        std::uint64_t q = 1;
        for (unsigned i = 0; i < j; ++i) q *= p;
        const unsigned d = static_cast<unsigned>(n / q);
        for (const Word& u : lyndon_words(r, d))
            basis.push_back({u, j, standard_bracketing(spec, u).pow(q)});
    }
    GradedLayer layer(spec, n, std::move(basis));
    if (ArbInt(layer.dim()) != zassenhaus_dim(r, n, p))
        throw SelfCheckError("graded_basis: basis size differs from the dimension formula");
    if (layer.rank() != layer.dim()) throw SelfCheckError("graded_basis: realizations are linearly dependent");
    return layer;
}

/// Elementary matrix I + E_{ij}.
inline FpMatrix transvection(const PrimeField& f, unsigned r, unsigned i, unsigned j) {
    FpMatrix m = FpMatrix::identity(f, r);
    m(i, j) = 1;
    return m;
}

/// Generators of SL^{+-1}_r(F_p): every transvection I + E_ij (i != j) and diag(-1, 1, ..., 1).
inline std::vector<FpMatrix> sl_pm_generators(unsigned r, std::uint32_t p) {
    if (r < 2) throw std::invalid_argument("sl_pm_generators: r must be >= 2");
    PrimeField f(p);
    std::vector<FpMatrix> gens;
    for (unsigned i = 0; i < r; ++i)
        for (unsigned j = 0; j < r; ++j)
            if (i != j) gens.push_back(transvection(f, r, i, j));
    FpMatrix d = FpMatrix::identity(f, r);
    d(0, 0) = f.neg(1);
    gens.push_back(d);
    return gens;
}

enum class ActingGroup { SignedSpecialLinear, GeneralLinear };

inline std::vector<FpMatrix> acting_group_generators(unsigned r, std::uint32_t p, ActingGroup which) {
    auto gens = sl_pm_generators(r, p);
    if (which == ActingGroup::GeneralLinear) {
        PrimeField f(p);
        gens.back()(0, 0) = f.primitive_root();
    }
    return gens;
}

/// Order of the matrix group generated by gens, by closure enumeration.
inline std::uint64_t matrix_group_order(const std::vector<FpMatrix>& gens, std::uint64_t cap = 1'000'000) {
    if (gens.empty()) return 1;
    std::set<FpMatrix> seen;
    std::deque<FpMatrix> queue;
    FpMatrix id = FpMatrix::identity(gens.front().field(), gens.front().rows());
    seen.insert(id);
    queue.push_back(id);
    while (!queue.empty()) {
        FpMatrix g = std::move(queue.front());
        queue.pop_front();
        for (const FpMatrix& s : gens) {
            FpMatrix h = g * s;
            if (seen.insert(h).second) {
                if (seen.size() > cap) throw std::length_error("matrix_group_order: cap exceeded");
                queue.push_back(std::move(h));
            }
        }
    }
    return seen.size();
}

/// Matrix of the linear substitution X_i -> sum_k g(k, i) X_k on the layer,
/// in basis coordinates (columns are images of basis vectors). Satisfies
/// action_matrix(g h) = action_matrix(g) action_matrix(h).
inline FpMatrix action_matrix(const FpMatrix& g, const GradedLayer& layer) {
    const AlgebraSpec& spec = layer.spec();
    const unsigned r = spec.rank();
    if (g.rows() != r || g.cols() != r) throw std::invalid_argument("action_matrix: g must be r x r");
    if (!(g.field() == spec.field())) throw std::invalid_argument("action_matrix: field mismatch");
    if (g.determinant() == 0) throw std::invalid_argument("action_matrix: g is singular");

    std::vector<NcPoly> images;
    for (unsigned i = 0; i < r; ++i) {
        NcPoly img(spec);
        for (unsigned k = 0; k < r; ++k)
            if (g(k, i)) img += NcPoly::generator(spec, k).scaled(g(k, i));
        images.push_back(std::move(img));
    }
    const std::size_t c = layer.dim();
    FpMatrix out(spec.field(), c, c);
    for (std::size_t i = 0; i < c; ++i) {
        NcPoly img = layer.basis()[i].realization.substitute(images);
        auto coords = layer.coordinates(img.homogeneous_component(layer.degree()));
        if (!coords) throw SelfCheckError("action_matrix: image left the layer");
        for (std::size_t k = 0; k < c; ++k) out(k, i) = (*coords)[k];
    }
    return out;
}

}  // namespace zfilt

#endif  // ZFILT_LIEGRADED_HPP
