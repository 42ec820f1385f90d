#ifndef ZFILT_PERMW_HPP
#define ZFILT_PERMW_HPP

// Small permutation groups by full element enumeration: conjugacy classes,
// normal subgroup lattices, permutational wreath products, the normal
// subgroup dichotomy for H wr K with H a power of a non-abelian simple group,
// and the normal subgroup count of iterated wreath towers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "arith.hpp"
#include "fp.hpp"
#include "liegraded.hpp"

namespace zfilt {

/// Raised when an enumeration would exceed its element cap.
class CapExceeded : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

using Point = std::uint16_t;

/// Permutation of {0, ..., N-1} as a one-line image array.
class Perm {
   public:
    Perm() = default;
    explicit Perm(std::vector<Point> images) : img_(std::move(images)) {
        std::vector<bool> hit(img_.size(), false);
        for (Point x : img_) {
            if (x >= img_.size() || hit[x]) throw std::invalid_argument("Perm: not a bijection");
            hit[x] = true;
        }
    }

    static Perm identity(std::size_t n) {
        Perm p;
        p.img_.resize(n);
        std::iota(p.img_.begin(), p.img_.end(), Point{0});
        return p;
    }

    /// Product of disjoint or overlapping cycles, applied right to left.
    static Perm from_cycles(std::size_t n, const std::vector<std::vector<Point>>& cycles) {
        Perm out = identity(n);
        for (auto it = cycles.rbegin(); it != cycles.rend(); ++it) {
            Perm c = identity(n);
            for (std::size_t i = 0; i < it->size(); ++i) {
                if ((*it)[i] >= n) throw std::invalid_argument("Perm::from_cycles: point out of range");
                c.img_[(*it)[i]] = (*it)[(i + 1) % it->size()];
            }
            out = c * out;
        }
        return out;
    }

    std::size_t degree() const noexcept { return img_.size(); }
    Point operator()(Point x) const { return img_[x]; }
    const std::vector<Point>& images() const noexcept { return img_; }
    bool is_identity() const noexcept {
        for (std::size_t i = 0; i < img_.size(); ++i)
            if (img_[i] != i) return false;
        return true;
    }

    /// (a * b)(x) = a(b(x)).
    friend Perm operator*(const Perm& a, const Perm& b) {
        if (a.degree() != b.degree()) throw std::invalid_argument("Perm: degree mismatch");
        Perm c;
        c.img_.resize(a.degree());
        for (std::size_t x = 0; x < a.degree(); ++x) c.img_[x] = a.img_[b.img_[x]];
        return c;
    }

    Perm inverse() const {
        Perm c;
        c.img_.resize(degree());
        for (std::size_t x = 0; x < degree(); ++x) c.img_[img_[x]] = static_cast<Point>(x);
        return c;
    }

    friend auto operator<=>(const Perm&, const Perm&) = default;
    friend bool operator==(const Perm&, const Perm&) = default;

    /// One-line image array, e.g. "[1 2 0]".
    std::string to_string() const {
        std::string s = "[";
        for (std::size_t i = 0; i < img_.size(); ++i) s += (i ? " " : "") + std::to_string(img_[i]);
        return s + "]";
    }

   private:
    std::vector<Point> img_;
};

struct PermHash {
    std::size_t operator()(const Perm& p) const noexcept {
        std::uint64_t h = 1469598103934665603ull;
        for (Point x : p.images()) {
            h ^= x;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

using ElementSet = std::vector<std::uint32_t>;  // sorted element indices

/// A fully enumerated permutation group. Element 0 is the identity.
class PermGroupTable {
   public:
    std::size_t degree() const noexcept { return degree_; }
    std::size_t order() const noexcept { return elements_.size(); }
    const std::vector<Perm>& generators() const noexcept { return gens_; }
    const std::vector<Perm>& elements() const noexcept { return elements_; }
    const Perm& element(std::uint32_t i) const { return elements_.at(i); }
    const std::vector<ElementSet>& classes() const noexcept { return classes_; }

    std::optional<std::uint32_t> index_of(const Perm& g) const {
        auto it = index_.find(g);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const { return at(elements_[a] * elements_[b]); }
    std::uint32_t inv(std::uint32_t a) const { return at(elements_[a].inverse()); }
    std::uint32_t conj(std::uint32_t g, std::uint32_t x) const {  // g x g^-1
        return at(elements_[g] * elements_[x] * elements_[g].inverse());
    }

    bool is_abelian() const {
        for (const auto& a : gens_)
            for (const auto& b : gens_)
                if (a * b != b * a) return false;
        return true;
    }

    ElementSet center() const {
        ElementSet z;
        for (std::uint32_t i = 0; i < order(); ++i) {
            bool central = true;
            for (const auto& g : gens_)
                if (g * elements_[i] != elements_[i] * g) {
                    central = false;
                    break;
                }
            if (central) z.push_back(i);
        }
        return z;
    }

    bool is_transitive() const {
        if (degree_ == 0) return true;
        std::vector<bool> seen(degree_, false);
        std::deque<Point> q{0};
        seen[0] = true;
        while (!q.empty()) {
            Point x = q.front();
            q.pop_front();
            for (const auto& g : gens_)
                if (!seen[g(x)]) {
                    seen[g(x)] = true;
                    q.push_back(g(x));
                }
        }
        return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
    }

    /// Subgroup generated by the given elements, as a sorted index set.
    ElementSet closure(const std::vector<std::uint32_t>& gens) const {
        std::vector<char> member(order(), 0);
        ElementSet out{0};
        member[0] = 1;
        for (std::size_t head = 0; head < out.size(); ++head)
            for (std::uint32_t g : gens) {
                std::uint32_t h = mul(out[head], g);
                if (!member[h]) {
                    member[h] = 1;
                    out.push_back(h);
                }
            }
        std::sort(out.begin(), out.end());
        return out;
    }

    friend PermGroupTable enumerate_elements(const std::vector<Perm>& gens, std::size_t degree, std::size_t cap);

   private:
    std::uint32_t at(const Perm& g) const {
        auto it = index_.find(g);
        if (it == index_.end()) throw std::logic_error("PermGroupTable: element outside the group");
        return it->second;
    }

    std::size_t degree_ = 0;
    std::vector<Perm> gens_;
    std::vector<Perm> elements_;
    std::unordered_map<Perm, std::uint32_t, PermHash> index_;
    std::vector<ElementSet> classes_;
};

inline constexpr std::size_t kDefaultElementCap = 1'000'000;

/// Breadth-first closure of the generators, then conjugacy classes as
/// orbits under conjugation by the generators.
inline PermGroupTable enumerate_elements(const std::vector<Perm>& gens, std::size_t degree,
                                         std::size_t cap = kDefaultElementCap) {
    PermGroupTable t;
    t.degree_ = degree;
    for (const auto& g : gens)
        if (g.degree() != degree) throw std::invalid_argument("enumerate_elements: generator degree mismatch");
    t.gens_ = gens;
    t.elements_.push_back(Perm::identity(degree));
    t.index_.emplace(t.elements_.back(), 0);
    for (std::size_t head = 0; head < t.elements_.size(); ++head)
        for (const auto& g : gens) {
            Perm h = t.elements_[head] * g;
            if (t.index_.contains(h)) continue;
            if (t.elements_.size() >= cap) throw CapExceeded("enumerate_elements: group order exceeds cap " + std::to_string(cap));
            t.index_.emplace(h, static_cast<std::uint32_t>(t.elements_.size()));
            t.elements_.push_back(std::move(h));
        }

    std::vector<Perm> gen_inv;
    for (const auto& g : gens) gen_inv.push_back(g.inverse());
    std::vector<char> assigned(t.order(), 0);
    for (std::uint32_t i = 0; i < t.order(); ++i) {
        if (assigned[i]) continue;
        ElementSet cls{i};
        assigned[i] = 1;
        for (std::size_t head = 0; head < cls.size(); ++head)
            for (std::size_t k = 0; k < gens.size(); ++k) {
                std::uint32_t c = t.at(gens[k] * t.elements_[cls[head]] * gen_inv[k]);
                if (!assigned[c]) {
                    assigned[c] = 1;
                    cls.push_back(c);
                }
            }
        std::sort(cls.begin(), cls.end());
        t.classes_.push_back(std::move(cls));
    }
    return t;
}

struct NormalSubgroup {
    ElementSet elements;
    std::vector<std::uint32_t> generators;
    std::size_t order() const noexcept { return elements.size(); }
};

inline bool is_subset(const ElementSet& a, const ElementSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

/// Full membership check: identity, closure under the subgroup's own
/// generators, and invariance under conjugation by the group generators.
inline bool verify_normal_subgroup(const PermGroupTable& g, const NormalSubgroup& n) {
    std::vector<char> member(g.order(), 0);
    for (auto i : n.elements) member[i] = 1;
    if (!member[0]) return false;
    for (auto s : n.generators)
        if (!member[s]) return false;
    std::vector<std::uint32_t> ggens;
    for (const auto& p : g.generators()) ggens.push_back(*g.index_of(p));
    for (auto x : n.elements) {
        for (auto s : n.generators)
            if (!member[g.mul(x, s)]) return false;
        if (!member[g.inv(x)]) return false;
        for (auto t : ggens)
            if (!member[g.conj(t, x)]) return false;
    }
    return true;
}

/// All normal subgroups: join-closure of the normal closures of single
/// conjugacy classes, plus the trivial subgroup. Sorted by (order, elements).
inline std::vector<NormalSubgroup> normal_subgroups(const PermGroupTable& g) {
    std::map<ElementSet, std::vector<std::uint32_t>> found;
    found.emplace(ElementSet{0}, std::vector<std::uint32_t>{});

    auto grow = [&](std::vector<std::uint32_t> gens, const ElementSet& candidates, ElementSet current) {
        std::vector<char> member(g.order(), 0);
        for (auto i : current) member[i] = 1;
        for (auto c : candidates) {
            if (member[c]) continue;
            gens.push_back(c);
            current = g.closure(gens);
            std::fill(member.begin(), member.end(), 0);
            for (auto i : current) member[i] = 1;
        }
        return std::make_pair(std::move(current), std::move(gens));
    };

    std::vector<std::pair<ElementSet, std::vector<std::uint32_t>>> class_closures;
    for (const auto& cls : g.classes()) {
        if (cls.size() == 1 && cls.front() == 0) continue;
        auto nc = grow({}, cls, ElementSet{0});
        if (found.emplace(nc.first, nc.second).second) class_closures.push_back(nc);
    }

    std::vector<std::pair<ElementSet, std::vector<std::uint32_t>>> frontier = class_closures;
    while (!frontier.empty()) {
        decltype(frontier) next;
        for (const auto& [a, agens] : frontier)
            for (const auto& [c, cgens] : class_closures) {
                if (is_subset(c, a)) continue;
                auto joined = grow(agens, c, a);
                if (found.emplace(joined.first, joined.second).second) next.push_back(std::move(joined));
            }
        frontier = std::move(next);
    }

    std::vector<NormalSubgroup> out;
    for (auto& [els, gens] : found) out.push_back({els, gens});
    std::sort(out.begin(), out.end(), [](const NormalSubgroup& a, const NormalSubgroup& b) {
        return a.order() != b.order() ? a.order() < b.order() : a.elements < b.elements;
    });
    for (const auto& n : out)
        if (!verify_normal_subgroup(g, n)) throw SelfCheckError("normal_subgroups: result failed verification");
    return out;
}

/// Generators of H wr K on n*m points; point (i, block b) is b*n + i.
/// H's generators act on block 0, K's generators permute the blocks.
inline std::vector<Perm> wreath_product(const PermGroupTable& h, const PermGroupTable& k,
                                        std::size_t cap = kDefaultElementCap) {
    const std::size_t n = h.degree(), m = k.degree();
    if (n * m > 65535) throw CapExceeded("wreath_product: too many points");
    long double projected = std::pow(static_cast<long double>(h.order()), static_cast<long double>(m)) * k.order();
    if (projected > static_cast<long double>(cap))
        throw CapExceeded("wreath_product: projected order exceeds cap " + std::to_string(cap));
    std::vector<Perm> gens;
    for (const auto& hg : h.generators()) {
        std::vector<Point> img(n * m);
        std::iota(img.begin(), img.end(), Point{0});
        for (std::size_t i = 0; i < n; ++i) img[i] = hg(static_cast<Point>(i));
        gens.emplace_back(std::move(img));
    }
    for (const auto& kg : k.generators()) {
        std::vector<Point> img(n * m);
        for (std::size_t b = 0; b < m; ++b)
            for (std::size_t i = 0; i < n; ++i) img[b * n + i] = static_cast<Point>(kg(static_cast<Point>(b)) * n + i);
        gens.emplace_back(std::move(img));
    }
    return gens;
}

/// Standard small groups used by the wreath experiments.
namespace groups {

inline PermGroupTable cyclic(std::size_t n) {
    std::vector<Point> cyc(n);
    std::iota(cyc.begin(), cyc.end(), Point{0});
    return enumerate_elements({Perm::from_cycles(n, {cyc})}, n);
}

inline PermGroupTable trivial(std::size_t degree = 1) { return enumerate_elements({}, degree); }

inline PermGroupTable alternating4() {
    return enumerate_elements({Perm::from_cycles(4, {{0, 1, 2}}), Perm::from_cycles(4, {{1, 2, 3}})}, 4);
}

inline PermGroupTable alternating5() {
    return enumerate_elements({Perm::from_cycles(5, {{0, 1, 2, 3, 4}}), Perm::from_cycles(5, {{0, 1, 2}})}, 5);
}

/// GL_3(F_2) acting on the 7 nonzero vectors of F_2^3 (vector v has index v - 1).
inline PermGroupTable l3_2() {
    std::vector<Perm> gens;
    for (const auto& m : sl_pm_generators(3, 2)) {
        std::vector<Point> img(7);
        for (unsigned v = 1; v < 8; ++v) {
            unsigned w = 0;
            for (unsigned i = 0; i < 3; ++i) {
                unsigned bit = 0;
                for (unsigned j = 0; j < 3; ++j) bit ^= m(i, j) & ((v >> j) & 1u);
                w |= bit << i;
            }
            img[v - 1] = static_cast<Point>(w - 1);
        }
        Perm p(img);
        if (!p.is_identity()) gens.push_back(p);
    }
    return enumerate_elements(gens, 7);
}

/// S^m acting intransitively on m disjoint copies of S's points.
inline PermGroupTable direct_power(const PermGroupTable& s, std::size_t m, std::size_t cap = kDefaultElementCap) {
    const std::size_t n = s.degree();
    std::vector<Perm> gens;
    for (std::size_t b = 0; b < m; ++b)
        for (const auto& g : s.generators()) {
            std::vector<Point> img(n * m);
            std::iota(img.begin(), img.end(), Point{0});
            for (std::size_t i = 0; i < n; ++i) img[b * n + i] = static_cast<Point>(b * n + g(static_cast<Point>(i)));
            gens.emplace_back(std::move(img));
        }
    return enumerate_elements(gens, n * m, cap);
}

inline PermGroupTable by_label(const std::string& label) {
    if (label == "A5") return alternating5();
    if (label == "L3(2)") return l3_2();
    throw std::invalid_argument("unknown simple group label '" + label + "' (known: A5, L3(2))");
}

}  // namespace groups

struct SimplicityHeuristic {
    bool non_abelian = false;
    bool no_prime_index_normal = false;
    bool centerless = false;
    bool ok() const { return non_abelian && no_prime_index_normal && centerless; }
};

inline SimplicityHeuristic check_simple_power_hypothesis(const PermGroupTable& h) {
    SimplicityHeuristic s;
    s.non_abelian = !h.is_abelian();
    s.centerless = h.center().size() == 1;
    s.no_prime_index_normal = true;
    for (const auto& n : normal_subgroups(h))
        if (is_prime(h.order() / n.order()) && n.order() != h.order()) s.no_prime_index_normal = false;
    return s;
}

struct WreathNormalEntry {
    std::size_t order;
    std::size_t index;
    std::string kind;  // "contains-base", "block-diagonal", "violation"
    std::size_t block_order = 0;  // |N| for block-diagonal entries
};

struct WreathDichotomyReport {
    std::size_t h_order = 0, k_order = 0, blocks = 0, group_order = 0;
    SimplicityHeuristic hypothesis;
    bool k_transitive = false;
    std::vector<WreathNormalEntry> entries;
    std::size_t violations = 0;
    // Every normal subgroup not containing the base has index at least
    // |K| * min_{N < H normal} |H : N|^m.
    bool index_bound_ok = true;
    std::optional<std::size_t> min_index_without_base;

    bool hypotheses_ok() const { return hypothesis.ok() && k_transitive; }
    bool dichotomy_holds() const { return violations == 0; }
};

/// Classifies every normal subgroup M of H wr K as containing the base H^m,
/// or equal to N^m (block-diagonal) for a normal subgroup N of H.
inline WreathDichotomyReport verify_wreath_dichotomy(const PermGroupTable& h, const PermGroupTable& k,
                                                     std::size_t cap = kDefaultElementCap) {
    WreathDichotomyReport rep;
    const std::size_t n = h.degree(), m = k.degree();
    rep.h_order = h.order();
    rep.k_order = k.order();
    rep.blocks = m;
    rep.hypothesis = check_simple_power_hypothesis(h);
    rep.k_transitive = k.is_transitive();

    PermGroupTable g = enumerate_elements(wreath_product(h, k, cap), n * m, cap);
    rep.group_order = g.order();
    auto h_normals = normal_subgroups(h);
    std::map<ElementSet, std::size_t> h_normal_order;
    for (const auto& nn : h_normals) h_normal_order.emplace(nn.elements, nn.order());

    std::size_t base_order = 1;
    for (std::size_t b = 0; b < m; ++b) base_order *= h.order();
    std::size_t min_proper_quotient = 0;
    for (const auto& nn : h_normals)
        if (nn.order() < h.order()) {
            std::size_t q = h.order() / nn.order();
            if (!min_proper_quotient || q < min_proper_quotient) min_proper_quotient = q;
        }

    auto block_preserving = [&](const Perm& x) {
        for (std::size_t pt = 0; pt < n * m; ++pt)
            if (x(static_cast<Point>(pt)) / n != pt / n) return false;
        return true;
    };
    auto restrict_to = [&](const Perm& x, std::size_t b) {
        std::vector<Point> img(n);
        for (std::size_t i = 0; i < n; ++i) img[i] = static_cast<Point>(x(static_cast<Point>(b * n + i)) - b * n);
        return Perm(img);
    };

    for (const auto& mm : normal_subgroups(g)) {
        WreathNormalEntry e{mm.order(), g.order() / mm.order(), "violation", 0};
        std::size_t in_base = 0;
        for (auto i : mm.elements) in_base += block_preserving(g.element(i));
        if (in_base == base_order) {
            e.kind = "contains-base";
        } else if (in_base == mm.order()) {
            ElementSet proj;
            bool ok = true;
            for (std::size_t b = 0; b < m && ok; ++b) {
                std::set<std::uint32_t> pb;
                for (auto i : mm.elements) pb.insert(*h.index_of(restrict_to(g.element(i), b)));
                ElementSet s(pb.begin(), pb.end());
                if (b == 0)
                    proj = s;
                else if (s != proj)
                    ok = false;
            }
            auto it = h_normal_order.find(proj);
            std::size_t power = 1;
            for (std::size_t b = 0; b < m; ++b) power *= proj.size();
            if (ok && it != h_normal_order.end() && power == mm.order()) {
                e.kind = "block-diagonal";
                e.block_order = proj.size();
            }
        }
        if (e.kind == "violation") ++rep.violations;
        if (e.kind != "contains-base") {
            if (!rep.min_index_without_base || e.index < *rep.min_index_without_base) rep.min_index_without_base = e.index;
            std::size_t bound = k.order();
            for (std::size_t b = 0; b < m; ++b) bound *= min_proper_quotient;
            if (e.index < bound) rep.index_bound_ok = false;
        }
        rep.entries.push_back(e);
    }
    return rep;
}

struct TowerLevel {
    std::string label = "A5";  // the simple group S_k
    unsigned power = 1;        // m_k
    std::uint64_t degree = 0;  // l_k, informational
};

using TowerSpec = std::vector<TowerLevel>;

/// 1 + sum_k (2^{m_k} - 1).
inline ArbInt tower_normal_count(const TowerSpec& spec) {
    ArbInt total = 1;
    for (const auto& lvl : spec) {
        if (lvl.power < 1) throw std::invalid_argument("tower_normal_count: powers must be >= 1");
        total += int_pow(2, lvl.power) - 1;
    }
    return total;
}

/// Level-by-level count: each level adds the proper normal subgroups of
/// H_k = S_k^{m_k}, counted by brute force. Relies on the wreath dichotomy
/// (every normal subgroup of W_k contains the base or is block-diagonal).
inline ArbInt tower_structural_count(const TowerSpec& spec, std::size_t cap = 100'000) {
    std::map<std::pair<std::string, unsigned>, std::size_t> cache;
    ArbInt total = 1;
    for (const auto& lvl : spec) {
        auto key = std::make_pair(lvl.label, lvl.power);
        auto it = cache.find(key);
        if (it == cache.end()) {
            auto s = groups::by_label(lvl.label);
            long double projected = std::pow(static_cast<long double>(s.order()), static_cast<long double>(lvl.power));
            if (projected > static_cast<long double>(cap))
                throw CapExceeded("tower_structural_count: |S^m| exceeds cap " + std::to_string(cap));
            auto hk = groups::direct_power(s, lvl.power, cap);
            it = cache.emplace(key, normal_subgroups(hk).size()).first;
        }
        total += ArbInt(it->second) - 1;
    }
    return total;
}

}  // namespace zfilt

#endif  // ZFILT_PERMW_HPP
