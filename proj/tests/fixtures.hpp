#ifndef ZFILT_TESTS_FIXTURES_HPP
#define ZFILT_TESTS_FIXTURES_HPP

// Shared test inputs: the small-module matrix and the quaternion-kernel check.

#include <random>
#include <string>
#include <utility>
#include <vector>

#include <zfilt/magnus.hpp>
#include <zfilt/modlat.hpp>

#include "oracles.hpp"

namespace fixtures {

using namespace zfilt;

inline oracle::IntMatrix to_int(const FpMatrix& m) {
    oracle::IntMatrix out(m.rows(), std::vector<unsigned>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
    return out;
}

inline std::size_t oracle_count(const ModuleSpec& m) {
    std::vector<oracle::IntMatrix> gens;
    for (const auto& g : m.generators) gens.push_back(to_int(g));
    return oracle::count_invariant_subspaces({m.field.p(), static_cast<unsigned>(m.dim)}, gens);
}

inline FpMatrix random_invertible(const PrimeField& f, std::size_t d, std::mt19937_64& rng) {
    while (true) {
        FpMatrix g(f, d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) g(i, j) = static_cast<Elem>(rng() % f.p());
        if (g.invertible()) return g;
    }
}

inline FpMatrix random_unipotent(const PrimeField& f, std::size_t d, std::mt19937_64& rng) {
    FpMatrix g = FpMatrix::identity(f, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) g(i, j) = static_cast<Elem>(rng() % f.p());
    return g;
}

inline FpMatrix permutation_matrix(const PrimeField& f, const std::vector<std::size_t>& img) {
    FpMatrix g(f, img.size(), img.size());
    for (std::size_t j = 0; j < img.size(); ++j) g(img[j], j) = 1;
    return g;
}

/// The test matrix of modules of dimension <= 5.
inline std::vector<std::pair<std::string, ModuleSpec>> small_modules() {
    std::vector<std::pair<std::string, ModuleSpec>> out;
    PrimeField f2(2), f3(3), f5(5);
    for (std::size_t d = 0; d <= 5; ++d) out.emplace_back("trivial F2^" + std::to_string(d), ModuleSpec::trivial(f2, d));
    for (std::size_t d = 1; d <= 4; ++d) out.emplace_back("trivial F3^" + std::to_string(d), ModuleSpec::trivial(f3, d));
    out.emplace_back("trivial F5^2", ModuleSpec::trivial(f5, 2));

    for (unsigned n = 1; n <= 3; ++n)
        out.emplace_back("L" + std::to_string(n) + " r=2 p=2", layer_module(graded_basis(2, n, 2), sl_pm_generators(2, 2)));
    out.emplace_back("L1 r=3 p=2", layer_module(graded_basis(3, 1, 2), sl_pm_generators(3, 2)));
    out.emplace_back("L1 r=2 p=3", layer_module(graded_basis(2, 1, 3), sl_pm_generators(2, 3)));
    out.emplace_back("L2 r=2 p=3", layer_module(graded_basis(2, 2, 3), sl_pm_generators(2, 3)));
    out.emplace_back("L1 r=2 p=3 GL",
                     layer_module(graded_basis(2, 1, 3), acting_group_generators(2, 3, ActingGroup::GeneralLinear)));
    out.emplace_back("L1^2 r=2 p=2",
                     direct_power(layer_module(graded_basis(2, 1, 2), sl_pm_generators(2, 2)), 2));

    for (std::size_t n = 2; n <= 5; ++n) {
        std::vector<std::size_t> cyc(n), tr(n);
        for (std::size_t i = 0; i < n; ++i) cyc[i] = (i + 1) % n, tr[i] = i;
        std::swap(tr[0], tr[1]);
        out.emplace_back("S" + std::to_string(n) + " perm F2", ModuleSpec(f2, n, {permutation_matrix(f2, cyc), permutation_matrix(f2, tr)}));
        if (n <= 4)
            out.emplace_back("C" + std::to_string(n) + " perm F3", ModuleSpec(f3, n, {permutation_matrix(f3, cyc)}));
    }

    std::mt19937_64 rng(2024);
    for (int i = 0; i < 6; ++i) {
        const std::size_t d = 3 + i % 3;
        out.emplace_back("unipotent F2 #" + std::to_string(i), ModuleSpec(f2, d, {random_unipotent(f2, d, rng)}));
        out.emplace_back("random F2 #" + std::to_string(i), ModuleSpec(f2, d, {random_invertible(f2, d, rng)}));
    }
    for (int i = 0; i < 4; ++i) {
        const std::size_t d = 2 + i % 3;
        out.emplace_back("unipotent F3 #" + std::to_string(i), ModuleSpec(f3, d, {random_unipotent(f3, d, rng)}));
        out.emplace_back("random F3 #" + std::to_string(i),
                         ModuleSpec(f3, d, {random_invertible(f3, d, rng), random_invertible(f3, d, rng)}));
    }
    return out;
}

// Q8 = {+-1, +-i, +-j, +-k}; element (sign, unit) coded as 4*sign + unit.
inline int qmul(int a, int b) {
    static const int unit[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    static const int sign[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
    const int ua = a % 4, ub = b % 4;
    return 4 * ((a / 4 + b / 4 + sign[ua][ub]) % 2) + unit[ua][ub];
}
inline int qinv(int a) { return a % 4 == 0 ? a : qmul(a, 4); }  // unit^-1 = -unit

struct QuaternionCheck {
    bool u_is_submodule = false;
    ArbInt index_exponent;
    std::size_t words = 0, in_kernel = 0, mismatches = 0;
    std::string first_mismatch;
    bool named_elements_ok = true;
};

/// F_2 -> Q8, x -> i, y -> j. Its kernel should be the lift of
/// U = <X^2 + B, Y^2 + B> (B = XY + YX) from layer 2 at p = 2: compares
/// membership with triviality of the image for every reduced word of length
/// <= max_len.
inline QuaternionCheck quaternion_kernel_check(std::size_t max_len) {
    QuaternionCheck out;
    auto layer = graded_basis(2, 2, 2);
    PrimeField f(2);
    Subspace u = Subspace::span(f, 3, {{1, 0, 1}, {0, 1, 1}});
    auto lat = enumerate_submodules(layer_module(layer, sl_pm_generators(2, 2)));
    out.u_is_submodule = std::binary_search(lat.submodules.begin(), lat.submodules.end(), u);
    out.index_exponent = cumulative_log_index(2, 2, 2) - ArbInt(u.dim());

    LiftedSubgroup h{&layer, u};
    AlgebraSpec spec(2, 2, 2);
    const int image[2] = {1, 2};

    std::vector<FreeWord> words{FreeWord()};
    for (std::size_t len = 0, start = 0; len < max_len; ++len) {
        const std::size_t end = words.size();
        for (std::size_t w = start; w < end; ++w)
            for (unsigned g = 0; g < 2; ++g)
                for (int e : {1, -1}) {
                    FreeWord next = words[w] * FreeWord::generator(g, e);
                    if (next.length() == len + 1) words.push_back(next);
                }
        start = end;
    }
    out.words = words.size();
    for (const auto& w : words) {
        int q = 0;
        for (const auto& l : w.letters()) q = qmul(q, l.exp > 0 ? image[l.gen] : qinv(image[l.gen]));
        const bool trivial = q == 0;
        out.in_kernel += trivial;
        if (h.contains(embed(w, spec)) != trivial && out.mismatches++ == 0) out.first_mismatch = w.to_string();
    }

    FreeWord x = FreeWord::generator(0), y = FreeWord::generator(1), c = commutator(x, y);
    for (const auto& k : {x.pow(2) * c.inverse(), y.pow(2) * c.inverse(), x.pow(2) * y.pow(2).inverse()})
        out.named_elements_ok &= h.contains(embed(k, spec));
    for (const auto& k : {x.pow(2), y.pow(2), c, x}) out.named_elements_ok &= !h.contains(embed(k, spec));
    return out;
}

}  // namespace fixtures

#endif  // ZFILT_TESTS_FIXTURES_HPP
