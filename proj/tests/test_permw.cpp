#include <gtest/gtest.h>

#include <zfilt/permw.hpp>

#include "oracles.hpp"

using namespace zfilt;

namespace {

oracle::RawPerm raw(const Perm& p) { return {p.images().begin(), p.images().end()}; }

std::vector<oracle::RawPerm> raw_elements(const PermGroupTable& g) {
    std::vector<oracle::RawPerm> out;
    for (const auto& e : g.elements()) out.push_back(raw(e));
    return out;
}

std::set<std::vector<oracle::RawPerm>> as_raw_sets(const PermGroupTable& g, const std::vector<NormalSubgroup>& ns) {
    std::set<std::vector<oracle::RawPerm>> out;
    for (const auto& n : ns) {
        std::vector<oracle::RawPerm> s;
        for (auto i : n.elements) s.push_back(raw(g.element(i)));
        std::sort(s.begin(), s.end());
        out.insert(s);
    }
    return out;
}

PermGroupTable symmetric(std::size_t n) {
    std::vector<Point> cyc(n);
    std::iota(cyc.begin(), cyc.end(), Point{0});
    return enumerate_elements({Perm::from_cycles(n, {cyc}), Perm::from_cycles(n, {{0, 1}})}, n);
}

PermGroupTable wreath(const PermGroupTable& h, const PermGroupTable& k) {
    return enumerate_elements(wreath_product(h, k), h.degree() * k.degree());
}

}  // namespace

TEST(Perm, CompositionAndCycles) {
    Perm a = Perm::from_cycles(3, {{0, 1, 2}});
    Perm b = Perm::from_cycles(3, {{0, 1}});
    EXPECT_EQ(a.to_string(), "[1 2 0]");
    EXPECT_EQ((a * b)(0), a(b(0)));
    EXPECT_EQ((a * b).to_string(), "[2 1 0]");
    EXPECT_TRUE((a * a.inverse()).is_identity());
    EXPECT_THROW(Perm(std::vector<Point>{0, 0}), std::invalid_argument);
}

TEST(Enumerate, Examples) {
    auto a4 = groups::alternating4();
    EXPECT_EQ(a4.order(), 12u);
    EXPECT_EQ(a4.classes().size(), 4u);
    EXPECT_EQ(groups::cyclic(5).order(), 5u);
    auto a5 = groups::alternating5();
    EXPECT_EQ(a5.order(), 60u);
    EXPECT_EQ(a5.classes().size(), 5u);
    EXPECT_EQ(groups::l3_2().order(), 168u);
    EXPECT_EQ(groups::l3_2().classes().size(), 6u);
    EXPECT_THROW(enumerate_elements(symmetric(6).generators(), 6, 100), CapExceeded);
}

TEST(Enumerate, ClassesPartitionAndAreConjugationOrbits) {
    for (const auto& g : {groups::alternating4(), groups::alternating5(), symmetric(4)}) {
        std::size_t total = 0;
        for (const auto& c : g.classes()) {
            total += c.size();
            for (auto x : c)
                for (std::uint32_t h = 0; h < g.order(); ++h)
                    ASSERT_TRUE(std::binary_search(c.begin(), c.end(), g.conj(h, x)));
        }
        EXPECT_EQ(total, g.order());
    }
}

TEST(NormalSubgroups, Examples) {
    EXPECT_EQ(normal_subgroups(groups::alternating5()).size(), 2u);
    auto a4 = normal_subgroups(groups::alternating4());
    ASSERT_EQ(a4.size(), 3u);
    EXPECT_EQ(a4[0].order(), 1u);
    EXPECT_EQ(a4[1].order(), 4u);
    EXPECT_EQ(a4[2].order(), 12u);
}

TEST(NormalSubgroups, MatchIndependentOracles) {
    std::vector<std::pair<std::string, PermGroupTable>> cases{
        {"A4", groups::alternating4()},
        {"A5", groups::alternating5()},
        {"S3", symmetric(3)},
        {"S4", symmetric(4)},
        {"C6", groups::cyclic(6)},
        {"L3(2)", groups::l3_2()},
        {"C2 wr C2", wreath(groups::cyclic(2), groups::cyclic(2))},
        {"C3 wr C2", wreath(groups::cyclic(3), groups::cyclic(2))},
        {"C2 wr C3", wreath(groups::cyclic(2), groups::cyclic(3))},
        {"S3 wr C2", wreath(symmetric(3), groups::cyclic(2))},
    };
    for (const auto& [name, g] : cases) {
        ASSERT_LE(g.order(), 200u) << name;
        auto ns = normal_subgroups(g);
        for (const auto& n : ns) EXPECT_TRUE(verify_normal_subgroup(g, n)) << name;
        auto elems = raw_elements(g);
        EXPECT_EQ(ns.size(), oracle::count_normal_subgroups(elems)) << name;
        auto found = as_raw_sets(g, ns);
        EXPECT_EQ(found.size(), ns.size()) << name;
        for (const auto& s : oracle::two_generated_normal_subgroups(elems)) EXPECT_TRUE(found.count(s)) << name;
    }
}

TEST(Wreath, Examples) {
    auto d8 = wreath(groups::cyclic(2), groups::cyclic(2));
    EXPECT_EQ(d8.order(), 8u);
    EXPECT_EQ(d8.degree(), 4u);
    EXPECT_EQ(normal_subgroups(d8).size(), 6u);
    auto big = wreath(groups::alternating5(), groups::cyclic(2));
    EXPECT_EQ(big.order(), 7200u);
    EXPECT_EQ(big.degree(), 10u);
    auto h = groups::alternating5();
    EXPECT_EQ(wreath(h, groups::trivial(1)).order(), h.order());
    EXPECT_THROW(wreath_product(h, groups::cyclic(3), 1000), CapExceeded);
}

TEST(Wreath, BlockIndexing) {
    auto gens = wreath_product(groups::cyclic(3), groups::cyclic(2));
    ASSERT_EQ(gens.size(), 2u);
    EXPECT_EQ(gens[0].to_string(), "[1 2 0 3 4 5]");
    EXPECT_EQ(gens[1].to_string(), "[3 4 5 0 1 2]");
}

TEST(Dichotomy, HoldsForA5WreathC2) {
    auto rep = verify_wreath_dichotomy(groups::alternating5(), groups::cyclic(2));
    EXPECT_TRUE(rep.hypotheses_ok());
    EXPECT_TRUE(rep.dichotomy_holds());
    EXPECT_TRUE(rep.index_bound_ok);
    ASSERT_EQ(rep.entries.size(), 3u);
    EXPECT_EQ(rep.entries[0].kind, "block-diagonal");
    EXPECT_EQ(rep.entries[1].kind, "contains-base");
    EXPECT_EQ(rep.entries[1].order, 3600u);
    EXPECT_EQ(rep.entries[2].kind, "contains-base");
}

TEST(Dichotomy, NegativeControlFails) {
    auto rep = verify_wreath_dichotomy(groups::cyclic(2), groups::cyclic(2));
    EXPECT_FALSE(rep.hypothesis.non_abelian);
    EXPECT_FALSE(rep.hypotheses_ok());
    EXPECT_EQ(rep.entries.size(), 6u);
    EXPECT_FALSE(rep.dichotomy_holds());
    EXPECT_GT(rep.violations, 0u);
}

TEST(Hypothesis, Heuristic) {
    EXPECT_TRUE(check_simple_power_hypothesis(groups::alternating5()).ok());
    EXPECT_TRUE(check_simple_power_hypothesis(groups::l3_2()).ok());
    EXPECT_FALSE(check_simple_power_hypothesis(groups::alternating4()).ok());
    EXPECT_FALSE(check_simple_power_hypothesis(groups::cyclic(2)).ok());
}

TEST(Tower, FormulaExamples) {
    EXPECT_EQ(tower_normal_count({}), 1);
    EXPECT_EQ(tower_normal_count({{"A5", 1}, {"A5", 1}}), 3);
    EXPECT_EQ(tower_normal_count({{"A5", 2}, {"A5", 3}}), 11);
}

TEST(Tower, StructuralMatchesFormula) {
    std::vector<TowerSpec> towers{
        {{"A5", 1}}, {{"A5", 2}}, {{"A5", 1}, {"A5", 1}}, {{"A5", 2}, {"A5", 1}},
        {{"A5", 1}, {"A5", 2}, {"A5", 2}}, {{"L3(2)", 2}, {"A5", 1}, {"L3(2)", 1}},
    };
    for (const auto& t : towers) EXPECT_EQ(tower_structural_count(t), tower_normal_count(t));
    EXPECT_THROW(tower_structural_count({{"A5", 3}}), CapExceeded);
}
