#ifndef ZFILT_MODLAT_HPP
#define ZFILT_MODLAT_HPP

// Linear algebra over group actions on F_p^d: canonical subspaces, cyclic
// submodules by spinning, submodule lattices by join-closure, and the census
// of characteristic subgroups D_{n+1} <= H < D_n obtained by lifting
// invariant subspaces of the graded layers.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <thread>
#include <vector>

#include "arith.hpp"
#include "fp.hpp"
#include "liegraded.hpp"
#include "magnus.hpp"

namespace zfilt {

/// Subspace of F_p^d stored as its reduced row echelon basis. Two subspaces
/// are equal iff their canonical matrices are equal.
class Subspace {
   public:
    Subspace() = default;
    Subspace(PrimeField f, std::size_t ambient) : field_(f), ambient_(ambient) {}

    static Subspace zero(PrimeField f, std::size_t ambient) { return Subspace(f, ambient); }
    static Subspace full(PrimeField f, std::size_t ambient) {
        std::vector<std::vector<Elem>> rows(ambient, std::vector<Elem>(ambient, 0));
        for (std::size_t i = 0; i < ambient; ++i) rows[i][i] = 1;
        return span(f, ambient, rows);
    }

    static Subspace span(PrimeField f, std::size_t ambient, const std::vector<std::vector<Elem>>& vectors) {
        Subspace s(f, ambient);
        if (vectors.empty()) return s;
        FpMatrix m(f, vectors.size(), ambient);
        for (std::size_t i = 0; i < vectors.size(); ++i) {
            if (vectors[i].size() != ambient) throw std::invalid_argument("Subspace::span: dimension mismatch");
            for (std::size_t j = 0; j < ambient; ++j) m(i, j) = vectors[i][j] % f.p();
        }
        s.pivots_ = rref_in_place(m);
        s.rows_.assign(m.data().begin(), m.data().begin() + s.pivots_.size() * ambient);
        return s;
    }

    const PrimeField& field() const noexcept { return field_; }
    std::size_t ambient() const noexcept { return ambient_; }
    std::size_t dim() const noexcept { return pivots_.size(); }
    const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }

    std::vector<Elem> row(std::size_t i) const {
        return {rows_.begin() + i * ambient_, rows_.begin() + (i + 1) * ambient_};
    }
    std::vector<std::vector<Elem>> basis() const {
        std::vector<std::vector<Elem>> out;
        for (std::size_t i = 0; i < dim(); ++i) out.push_back(row(i));
        return out;
    }

    bool contains(std::span<const Elem> v) const {
        if (v.size() != ambient_) throw std::invalid_argument("Subspace::contains: dimension mismatch");
        std::vector<Elem> w(v.begin(), v.end());
        for (std::size_t i = 0; i < dim(); ++i) {
            Elem c = w[pivots_[i]];
            if (c == 0) continue;
            for (std::size_t j = 0; j < ambient_; ++j)
                w[j] = field_.sub(w[j], field_.mul(c, rows_[i * ambient_ + j]));
        }
        return std::all_of(w.begin(), w.end(), [](Elem e) { return e == 0; });
    }

    bool contains(const Subspace& other) const {
        for (std::size_t i = 0; i < other.dim(); ++i)
            if (!contains(other.row(i))) return false;
        return true;
    }

    friend Subspace operator+(const Subspace& a, const Subspace& b) {
        auto rows = a.basis();
        for (auto& r : b.basis()) rows.push_back(std::move(r));
        return span(a.field_, a.ambient_, rows);
    }

    /// Intersection by the Zassenhaus sum-intersection algorithm.
    friend Subspace intersect(const Subspace& a, const Subspace& b) {
        const std::size_t d = a.ambient_;
        const PrimeField& f = a.field_;
        FpMatrix m(f, a.dim() + b.dim(), 2 * d);
        for (std::size_t i = 0; i < a.dim(); ++i)
            for (std::size_t j = 0; j < d; ++j) m(i, j) = m(i, d + j) = a.rows_[i * d + j];
        for (std::size_t i = 0; i < b.dim(); ++i)
            for (std::size_t j = 0; j < d; ++j) m(a.dim() + i, j) = b.rows_[i * d + j];
        auto piv = rref_in_place(m);
        std::vector<std::vector<Elem>> meet;
        for (std::size_t i = 0; i < piv.size(); ++i)
            if (piv[i] >= d) meet.emplace_back(m.row(i).begin() + d, m.row(i).end());
        return span(f, d, meet);
    }

    friend bool operator==(const Subspace& a, const Subspace& b) {
        return a.ambient_ == b.ambient_ && a.rows_ == b.rows_ && a.pivots_ == b.pivots_;
    }
    /// Orders by dimension, then by canonical matrix.
    friend std::strong_ordering operator<=>(const Subspace& a, const Subspace& b) {
        if (auto c = a.ambient_ <=> b.ambient_; c != 0) return c;
        if (auto c = a.dim() <=> b.dim(); c != 0) return c;
        return a.rows_ <=> b.rows_;
    }

   private:
    PrimeField field_{};
    std::size_t ambient_ = 0;
    std::vector<std::size_t> pivots_;
    std::vector<Elem> rows_;  // dim x ambient, row-major
};

/// F_p[G]-module F_p^d given by matrices of generators of G acting on columns.
struct ModuleSpec {
    PrimeField field;
    std::size_t dim = 0;
    std::vector<FpMatrix> generators;

    ModuleSpec(PrimeField f, std::size_t d, std::vector<FpMatrix> gens)
        : field(f), dim(d), generators(std::move(gens)) {
        for (const auto& g : generators) {
            if (g.rows() != d || g.cols() != d) throw std::invalid_argument("ModuleSpec: generator has wrong shape");
            if (!(g.field() == f)) throw std::invalid_argument("ModuleSpec: field mismatch");
            if (!g.invertible()) throw std::invalid_argument("ModuleSpec: generator is not invertible");
        }
    }

    /// Trivial action of the trivial group.
    static ModuleSpec trivial(PrimeField f, std::size_t d) { return ModuleSpec(f, d, {}); }
};

/// Block-diagonal action on the k-fold direct sum M^k.
inline ModuleSpec direct_power(const ModuleSpec& m, std::size_t k) {
    std::vector<FpMatrix> gens;
    const std::size_t d = m.dim;
    for (const auto& g : m.generators) {
        FpMatrix big(m.field, d * k, d * k);
        for (std::size_t b = 0; b < k; ++b)
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) big(b * d + i, b * d + j) = g(i, j);
        gens.push_back(std::move(big));
    }
    return ModuleSpec(m.field, d * k, std::move(gens));
}

inline bool is_invariant(const Subspace& u, const ModuleSpec& m) {
    for (std::size_t i = 0; i < u.dim(); ++i) {
        auto v = u.row(i);
        for (const auto& g : m.generators)
            if (!u.contains(g.apply(v))) return false;
    }
    return true;
}

/// Cyclic submodule generated by v: the smallest invariant subspace containing v.
inline Subspace spin(std::span<const Elem> v, const ModuleSpec& m) {
    if (v.size() != m.dim) throw std::invalid_argument("spin: dimension mismatch");
    const PrimeField& f = m.field;
    std::vector<std::vector<Elem>> echelon;  // semi-echelon rows, pivot = first nonzero, normalized to 1
    std::vector<std::size_t> pivots;
    std::vector<std::vector<Elem>> found;  // original vectors, spun in order
    auto insert = [&](std::vector<Elem> w) {
        std::vector<Elem> orig = w;
        for (std::size_t i = 0; i < echelon.size(); ++i) {
            Elem c = w[pivots[i]];
            if (c == 0) continue;
            for (std::size_t j = 0; j < w.size(); ++j) w[j] = f.sub(w[j], f.mul(c, echelon[i][j]));
        }
        auto it = std::find_if(w.begin(), w.end(), [](Elem e) { return e != 0; });
        if (it == w.end()) return;
        const std::size_t piv = static_cast<std::size_t>(it - w.begin());
        Elem s = f.inv(*it);
        for (auto& e : w) e = f.mul(e, s);
        echelon.push_back(std::move(w));
        pivots.push_back(piv);
        found.push_back(std::move(orig));
    };
    insert(std::vector<Elem>(v.begin(), v.end()));
    for (std::size_t next = 0; next < found.size(); ++next)
        for (const auto& g : m.generators) insert(g.apply(found[next]));
    return Subspace::span(f, m.dim, found);
}

struct SubmoduleLattice {
    std::vector<Subspace> submodules;  // sorted by (dim, canonical matrix)
    std::size_t cyclic_count = 0;
    bool exact = true;  // false: budget hit, submodules is a lower bound

    std::size_t count() const noexcept { return submodules.size(); }
};

inline constexpr std::size_t kMaxLatticeDim = 14;

/// All submodules: join-closure of the cyclic submodules spin(v), v != 0.
/// Stops once more than `budget` submodules are known; the partial result is
/// flagged and is a lower bound.
inline SubmoduleLattice enumerate_submodules(const ModuleSpec& m, std::size_t budget = 1'000'000,
                                             unsigned threads = 1, std::size_t max_dim = kMaxLatticeDim) {
    const std::size_t d = m.dim;
    const PrimeField& f = m.field;
    if (d > max_dim) throw std::invalid_argument("enumerate_submodules: dimension exceeds configured maximum");
    SubmoduleLattice out;
    std::set<Subspace> lattice{Subspace::zero(f, d)};
    if (d == 0) {
        out.submodules.assign(lattice.begin(), lattice.end());
        return out;
    }

    // One seed per projective point: first nonzero coordinate equal to 1.
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < d; ++i) total *= f.p();
    auto seed_vector = [&](std::uint64_t idx) {
        std::vector<Elem> v(d);
        for (std::size_t i = d; i-- > 0;) {
            v[i] = static_cast<Elem>(idx % f.p());
            idx /= f.p();
        }
        return v;
    };
    auto is_normalized = [](const std::vector<Elem>& v) {
        for (Elem e : v)
            if (e != 0) return e == 1;
        return false;
    };

    threads = std::max(1u, threads);
    std::vector<std::set<Subspace>> partial(threads);
    auto work = [&](unsigned t) {
        for (std::uint64_t idx = 1 + t; idx < total; idx += threads) {
            auto v = seed_vector(idx);
            if (is_normalized(v)) partial[t].insert(spin(v, m));
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }
    std::set<Subspace> cyclic_set;
    for (auto& s : partial) cyclic_set.merge(s);
    std::vector<Subspace> cyclic(cyclic_set.begin(), cyclic_set.end());
    out.cyclic_count = cyclic.size();

    std::vector<Subspace> frontier;
    for (const auto& c : cyclic)
        if (lattice.insert(c).second) frontier.push_back(c);
    if (lattice.size() > budget) out.exact = false;

    while (!frontier.empty() && out.exact) {
        std::vector<Subspace> next;
        for (const auto& a : frontier) {
            for (const auto& c : cyclic) {
                if (a.contains(c)) continue;
                Subspace s = a + c;
                if (lattice.insert(s).second) next.push_back(std::move(s));
                if (lattice.size() > budget) {
                    out.exact = false;
                    break;
                }
            }
            if (!out.exact) break;
        }
        frontier = std::move(next);
    }
    out.submodules.assign(lattice.begin(), lattice.end());
    return out;
}

struct SubmoduleCount {
    std::size_t count = 0;
    bool exact = true;
};

inline SubmoduleCount count_submodules_power(const ModuleSpec& m, std::size_t k, std::size_t budget = 1'000'000) {
    if (k < 1) throw std::invalid_argument("count_submodules_power: k must be >= 1");
    auto lat = enumerate_submodules(direct_power(m, k), budget);
    return {lat.count(), lat.exact};
}

/// Module structure of the graded layer L_n under the acting group.
inline ModuleSpec layer_module(const GradedLayer& layer, const std::vector<FpMatrix>& group_gens) {
    std::vector<FpMatrix> mats;
    for (const auto& g : group_gens) mats.push_back(action_matrix(g, layer));
    return ModuleSpec(layer.spec().field(), layer.dim(), std::move(mats));
}

/// A lifted characteristic subgroup D_{n+1} <= H <= D_n, represented by the
/// invariant subspace U = H / D_{n+1} of the layer.
struct LiftedSubgroup {
    const GradedLayer* layer;
    Subspace u;

    /// g in H iff g in D_n and the layer coordinates of g D_{n+1} lie in U.
    bool contains(const MagnusElement& g) const {
        const unsigned n = layer->degree();
        if (g.spec().trunc() < n) throw std::invalid_argument("LiftedSubgroup: truncation below layer degree");
        const int v = g.valuation();
        if (v < static_cast<int>(n)) return false;
        if (v > static_cast<int>(n)) return true;
        auto coords = layer->coordinates(g.poly().homogeneous_component(n));
        if (!coords) throw SelfCheckError("LiftedSubgroup: leading term outside the layer");
        return u.contains(*coords);
    }
};

struct CensusRow {
    unsigned n;
    std::size_t dim_u;
    ArbInt index_exponent;  // log_p [F_r : H]
    std::size_t count;
    bool exact;
};

struct CensusLayer {
    unsigned n;
    std::size_t layer_dim;
    ArbInt cumlog;  // log_p [F_r : D_{n+1}]
    SubmoduleLattice lattice;
};

struct Census {
    unsigned r = 0;
    std::uint32_t p = 0;
    ActingGroup group = ActingGroup::SignedSpecialLinear;
    std::vector<CensusRow> rows;
    std::vector<CensusLayer> layers;

    bool exact() const {
        for (const auto& l : layers)
            if (!l.lattice.exact) return false;
        return true;
    }
};

/// Counts characteristic subgroups between consecutive filtration steps by
/// lifting the invariant subspaces of each layer. The full layer is skipped:
/// its lift is D_n, already counted as the zero subspace of layer n - 1.
inline Census characteristic_census(unsigned r, std::uint32_t p, unsigned n_lo, unsigned n_hi,
                                    std::size_t budget = 1'000'000,
                                    ActingGroup group = ActingGroup::SignedSpecialLinear, unsigned threads = 1) {
    if (n_lo < 1 || n_hi < n_lo) throw std::invalid_argument("characteristic_census: bad layer range");
    Census c;
    c.r = r;
    c.p = p;
    c.group = group;
    const auto gens = acting_group_generators(r, p, group);
    for (unsigned n = n_lo; n <= n_hi; ++n) {
        GradedLayer layer = graded_basis(r, n, p);
        ModuleSpec mod = layer_module(layer, gens);
        SubmoduleLattice lat = enumerate_submodules(mod, budget, threads);
        ArbInt cum = cumulative_log_index(r, n, p);
        std::map<std::size_t, std::size_t> by_dim;
        for (const auto& u : lat.submodules)
            if (u.dim() < layer.dim()) ++by_dim[u.dim()];
        for (auto [dim, count] : by_dim)
            c.rows.push_back({n, dim, cum - ArbInt(dim), count, lat.exact});
        c.layers.push_back({n, layer.dim(), cum, std::move(lat)});
    }
    return c;
}

struct GrowthFit {
    bool sufficient = false;
    std::vector<std::uint64_t> exponents;    // distinct index exponents e, ascending
    std::vector<std::uint64_t> cumulative;   // # subgroups with index <= p^e
    double intercept = 0, coefficient = 0;   // log2 C ~ intercept + coefficient * (log2 index)^2
    std::vector<double> residuals;
};

/// Least-squares fit of log2(cumulative count) against (log2 index)^2.
inline GrowthFit fit_growth(const std::vector<CensusRow>& rows, std::uint32_t p) {
    GrowthFit fit;
    std::map<std::uint64_t, std::uint64_t> at;
    for (const auto& row : rows) at[row.index_exponent.convert_to<std::uint64_t>()] += row.count;
    std::uint64_t running = 0;
    for (auto [e, c] : at) {
        running += c;
        fit.exponents.push_back(e);
        fit.cumulative.push_back(running);
    }
    const std::size_t n = fit.exponents.size();
    if (n < 2) return fit;
    fit.sufficient = true;
    std::vector<double> x(n), y(n);
    const double lp = std::log2(static_cast<double>(p));
    for (std::size_t i = 0; i < n; ++i) {
        double li = static_cast<double>(fit.exponents[i]) * lp;
        x[i] = li * li;
        y[i] = std::log2(static_cast<double>(fit.cumulative[i]));
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    fit.coefficient = sxy / sxx;
    fit.intercept = my - fit.coefficient * mx;
    for (std::size_t i = 0; i < n; ++i) fit.residuals.push_back(y[i] - (fit.intercept + fit.coefficient * x[i]));
    return fit;
}

}  // namespace zfilt

#endif  // ZFILT_MODLAT_HPP
