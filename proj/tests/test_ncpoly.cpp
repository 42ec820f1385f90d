#include <gtest/gtest.h>

#include <random>

#include <zfilt/ncpoly.hpp>

using namespace zfilt;

namespace {
NcPoly X(const AlgebraSpec& s) { return NcPoly::generator(s, 0); }
NcPoly Y(const AlgebraSpec& s) { return NcPoly::generator(s, 1); }
NcPoly one(const AlgebraSpec& s) { return NcPoly::one(s); }

NcPoly random_poly(const AlgebraSpec& s, std::mt19937_64& rng, unsigned max_terms, bool unit = false) {
    NcPoly out = unit ? one(s) : NcPoly::constant(s, static_cast<std::int64_t>(rng() % s.p()));
    const unsigned terms = static_cast<unsigned>(rng() % (max_terms + 1));
    for (unsigned t = 0; t < terms; ++t) {
        Word w(1 + rng() % s.trunc());
        for (auto& l : w) l = static_cast<std::uint8_t>(rng() % s.rank());
        out += NcPoly::monomial(s, w, static_cast<std::int64_t>(rng() % s.p()));
    }
    return out;
}
}  // namespace

TEST(NcPolyAdd, CharacteristicAndCancellation) {
    AlgebraSpec s3(2, 3, 3), s2(2, 2, 3);
    EXPECT_TRUE((X(s3) + X(s3).scaled(2)).is_zero());
    EXPECT_EQ((X(s3) + Y(s3)).to_string(), "X1 + X2");
    EXPECT_EQ((X(s2) + X(s2) * Y(s2)) + X(s2) * Y(s2), X(s2));
}

TEST(NcPolyAdd, MismatchedParametersRejected) {
    AlgebraSpec a(2, 3, 3), b(2, 5, 3), c(2, 3, 4);
    EXPECT_THROW(X(a) + X(b), std::invalid_argument);
    EXPECT_THROW(X(a) * X(c), std::invalid_argument);
}

TEST(NcPolyMul, Examples) {
    AlgebraSpec s(2, 3, 4);
    NcPoly a = X(s) + Y(s) * X(s);
    EXPECT_EQ(one(s) * a, a);
    EXPECT_NE(X(s) * Y(s), Y(s) * X(s));
    EXPECT_EQ((X(s) * Y(s)).coefficient({0, 1}), 1u);
    EXPECT_EQ((one(s) + X(s)) * (one(s) + Y(s)), one(s) + X(s) + Y(s) + X(s) * Y(s));
}

TEST(NcPolyMul, Truncates) {
    AlgebraSpec s(2, 5, 3);
    EXPECT_TRUE((X(s) * X(s) * Y(s) * Y(s)).is_zero());
    EXPECT_EQ(X(s).pow(3).degree(), 3);
}

TEST(NcPolyInvert, Examples) {
    AlgebraSpec s2(1, 2, 2), s3(1, 3, 2);
    EXPECT_EQ(one(s2).invert_unit(), one(s2));
    NcPoly x2 = NcPoly::generator(s2, 0), x3 = NcPoly::generator(s3, 0);
    EXPECT_EQ((one(s2) + x2).invert_unit(), one(s2) + x2 + x2 * x2);
    EXPECT_EQ((one(s3) + x3).invert_unit(), one(s3) + x3.scaled(2) + x3 * x3);
    EXPECT_THROW(x3.invert_unit(), std::invalid_argument);
}

TEST(NcPolyValuation, Examples) {
    AlgebraSpec s3(2, 3, 3), s4(2, 3, 4);
    EXPECT_EQ(one(s3).aug_valuation(), kInfiniteValuation);
    EXPECT_EQ((one(s3) + X(s3) * Y(s3) - Y(s3) * X(s3)).aug_valuation(), 2);
    EXPECT_EQ((one(s4) + X(s4).pow(3)).aug_valuation(), 3);
}

TEST(NcPolyComponent, Examples) {
    AlgebraSpec s(2, 2, 3);
    NcPoly a = one(s) + X(s) + X(s) * Y(s);
    EXPECT_EQ(a.homogeneous_component(1), (std::vector<Elem>{1, 0}));
    // word codes in degree 2: XX, XY, YX, YY
    EXPECT_EQ(a.homogeneous_component(2), (std::vector<Elem>{0, 1, 0, 0}));
    EXPECT_EQ(lie_bracket(X(s), Y(s)).homogeneous_component(2), (std::vector<Elem>{0, 1, 1, 0}));
    EXPECT_THROW(a.homogeneous_component(4), std::invalid_argument);
}

TEST(NcPolyProperty, RingAxiomsOnRandomTriples) {
    std::mt19937_64 rng(7);
    std::size_t cases = 0;
    for (std::uint32_t p : {2u, 3u, 5u})
        for (unsigned r : {1u, 2u, 3u}) {
            AlgebraSpec s(r, p, 4);
            for (int i = 0; i < 1200; ++i, ++cases) {
                NcPoly a = random_poly(s, rng, 5), b = random_poly(s, rng, 5), c = random_poly(s, rng, 5);
                ASSERT_EQ((a * b) * c, a * (b * c));
                ASSERT_EQ(a * (b + c), a * b + a * c);
                ASSERT_EQ((a + b) * c, a * c + b * c);
                ASSERT_EQ(a + b, b + a);
            }
        }
    EXPECT_GE(cases, 10000u);
}

TEST(NcPolyProperty, UnitValuationAndInverse) {
    std::mt19937_64 rng(11);
    for (std::uint32_t p : {2u, 3u}) {
        AlgebraSpec s(2, p, 5);
        for (int i = 0; i < 500; ++i) {
            NcPoly u = random_poly(s, rng, 4, true), v = random_poly(s, rng, 4, true);
            ASSERT_GE((u * v).aug_valuation(), std::min(u.aug_valuation(), v.aug_valuation()));
            NcPoly ui = u.invert_unit();
            ASSERT_EQ(u * ui, one(s));
            ASSERT_EQ(ui * u, one(s));
        }
    }
}

TEST(NcPolyProperty, NoStoredZeroOrOverlongTerms) {
    std::mt19937_64 rng(3);
    AlgebraSpec s(3, 3, 3);
    for (int i = 0; i < 300; ++i) {
        NcPoly a = random_poly(s, rng, 6) * random_poly(s, rng, 6) - random_poly(s, rng, 6);
        for (const auto& t : a.terms()) {
            ASSERT_NE(t.coef, 0u);
            ASSERT_LE(t.degree, s.trunc());
        }
        ASSERT_TRUE(std::is_sorted(a.terms().begin(), a.terms().end(), term_order));
    }
}

TEST(NcPolySubstitute, LinearChangeOfVariables) {
    AlgebraSpec s(2, 2, 2);
    NcPoly sq = X(s) * X(s);
    NcPoly img = sq.substitute({X(s) + Y(s), Y(s)});
    EXPECT_EQ(img, X(s) * X(s) + X(s) * Y(s) + Y(s) * X(s) + Y(s) * Y(s));
}

TEST(AlgebraSpec, EncodeDecodeRoundTrip) {
    AlgebraSpec s(3, 2, 5);
    for (unsigned d = 0; d <= 5; ++d)
        for (std::uint64_t c = 0; c < s.words_of_degree(d); ++c) ASSERT_EQ(s.encode(s.decode(d, c)), c);
    EXPECT_THROW(AlgebraSpec(4, 2, 40), std::invalid_argument);
}
