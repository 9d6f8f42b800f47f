#include <random>

#include <gtest/gtest.h>

#include <cubus/green.hpp>

using namespace cubus;

namespace {

// distance to the nearest multiple of 2 pi i
double mod_two_pi_i(cplx z)
{
    double im = z.imag() - two_pi * std::round(z.imag() / two_pi);
    return std::hypot(z.real(), im);
}

}  // namespace

TEST(Green, QuadraticAtOrigin)
{
    auto g = green(QuadParam{0.0}, 2.0, 100);
    EXPECT_TRUE(g.escaped);
    EXPECT_NEAR(g.green, std::log(2.0), 1e-12);
    auto inside = green(QuadParam{0.0}, 0.5, 100);
    EXPECT_FALSE(inside.escaped);
    EXPECT_EQ(inside.green, 0.0);
    EXPECT_THROW(green(QuadParam{0.0}, 2.0, 0), std::invalid_argument);
}

TEST(Green, FunctionalEquation)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-2.5, 2.5);
    const std::vector<CubicAD> fams{CubicAD(1.0, 0.0), CubicAD(-0.5, 0.0), CubicAD(cplx(0.3, 0.4), cplx(0.2, -0.6))};
    for (const auto& f : fams) {
        int used = 0;
        while (used < 100) {
            cplx z(U(rng), U(rng));
            auto g0 = green(f, z, 2000);
            if (!g0.escaped || g0.green < 1e-6) continue;
            auto g1 = green(f, eval(f, z), 2000);
            EXPECT_NEAR(g1.green, 3.0 * g0.green, 1e-9 * g1.green);
            ++used;
        }
    }
}

TEST(Green, EscapeFlagMatchesPositivity)
{
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    CubicAD f(cplx(-0.4, 0.1), cplx(0.1, 0.2));
    for (int k = 0; k < 200; ++k) {
        auto g = green(f, cplx(U(rng), U(rng)), 500);
        EXPECT_EQ(g.escaped, g.green > 0.0);
    }
}

TEST(Boettcher, IdentityForSquare)
{
    for (cplx z : {cplx(1.5, 0.2), cplx(-3.0, 1.0), cplx(0.1, 1.2)}) {
        auto b = boettcher(QuadParam{0.0}, z);
        ASSERT_TRUE(b.valid);
        EXPECT_LT(std::abs(std::exp(b.logB) - z), 1e-12);
    }
}

TEST(Boettcher, ModulusAndFunctionalEquation)
{
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> U(-2.5, 2.5);
    CubicAD f(cplx(0.6, -0.2), cplx(0.3, 0.1));
    int used = 0;
    while (used < 50) {
        cplx z(U(rng), U(rng));
        auto g = green(f, z, 2000);
        if (!g.escaped || g.green < 0.05) continue;
        auto b = boettcher(f, z);
        auto b1 = boettcher(f, eval(f, z));
        ASSERT_TRUE(b.valid && b1.valid);
        EXPECT_NEAR(std::abs(std::exp(b.logB)), std::exp(g.green), 1e-8 * std::exp(g.green));
        EXPECT_NEAR(b.logB.real(), g.green, 1e-8);
        EXPECT_LT(mod_two_pi_i(b1.logB - 3.0 * b.logB), 1e-8);
        ++used;
    }
}

TEST(Boettcher, InvalidInsideFilledSet)
{
    EXPECT_FALSE(boettcher(CubicAD(-0.5, 0.0), 0.0).valid);
}

TEST(Connectedness, Examples)
{
    EXPECT_TRUE(is_connected(CubicAD(-0.5, 0.0)));
    EXPECT_FALSE(is_connected(CubicAD(5.0, 0.0)));
    EXPECT_FALSE(is_connected(QuadParam{1.0}));
    EXPECT_TRUE(is_connected(QuadParam{-1.0}));
}

TEST(Connectedness, MonotoneInBudget)
{
    for (cplx c : {cplx(0.26, 0.0), cplx(-0.75, 0.05), cplx(0.3, 0.55)}) {
        bool seen_false = false;
        for (int budget : {1, 5, 20, 100, 500, 2000}) {
            bool conn = is_connected(QuadParam{c}, budget);
            if (seen_false) EXPECT_FALSE(conn);
            seen_false = seen_false || !conn;
        }
    }
}
