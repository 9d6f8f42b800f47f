#include <random>

#include <gtest/gtest.h>

#include <cubus/poly.hpp>

using namespace cubus;

namespace {

std::mt19937_64 rng(7);
cplx random_point(double r)
{
    std::uniform_real_distribution<double> U(-r, r);
    return {U(rng), U(rng)};
}

}  // namespace

TEST(Poly, EvalExamples)
{
    EXPECT_NEAR(std::abs(eval(CubicAD(-0.5, 0.0), 1.0) - 1.0), 0.0, 1e-15);
    EXPECT_EQ(eval(CubicAD(cplx(0.3, 1.0), cplx(2.0, -1.0)), 0.0), cplx(2.0, -1.0));
    EXPECT_EQ(eval(CubicAD(1.0, 0.0), 2.0), cplx(2.0));
}

TEST(Poly, RejectsTinyA)
{
    EXPECT_THROW(CubicAD(1e-13, 0.0), std::invalid_argument);
    EXPECT_THROW(ParabolicParams(1.0, -0.1), std::invalid_argument);
}

TEST(Poly, CriticalOrbits)
{
    auto o = critical_orbit(CubicAD(-0.5, 0.0), -1, 3);
    ASSERT_EQ(o.points.size(), 3u);
    for (cplx z : o.points) EXPECT_NEAR(std::abs(z + 1.0), 0.0, 1e-15);
    EXPECT_FALSE(o.escaped);

    auto e = critical_orbit(CubicAD(5.0, 0.0), 1, 10);
    EXPECT_TRUE(e.escaped);
    EXPECT_LE(e.points.size(), 10u);

    auto q = critical_orbit(QuadParam{0.0}, 0, 5);
    for (cplx z : q.points) EXPECT_EQ(z, cplx(0.0));

    EXPECT_THROW(critical_orbit(CubicAD(1.0, 0.0), 0, 3), std::invalid_argument);
    EXPECT_THROW(critical_orbit(QuadParam{0.0}, 1, 3), std::invalid_argument);
    EXPECT_THROW(critical_orbit(QuadParam{0.0}, 0, 0), std::invalid_argument);
}

TEST(Poly, MonicExamples)
{
    auto m = to_monic(CubicAD(1.0, 0.0));
    EXPECT_NEAR(std::abs(m.p + 3.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(m.q), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(m.scale - 1.0), 0.0, 1e-15);

    m = to_monic(CubicAD(1.0, 2.0));
    EXPECT_NEAR(std::abs(m.q - 2.0), 0.0, 1e-15);

    m = to_monic(CubicAD(-0.5, 0.0));
    EXPECT_NEAR(std::abs(m.p - 1.5), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(m.scale - cplx(0.0, 1.0 / std::sqrt(2.0))), 0.0, 1e-15);
}

TEST(Poly, ConjugacyProperty)
{
    for (int k = 0; k < 100; ++k) {
        cplx A = random_point(2.0), D = random_point(2.0);
        if (std::abs(A) < 1e-3) continue;
        CubicAD f(A, D);
        auto m = to_monic(f);
        for (int j = 0; j < 10; ++j) {
            cplx w = random_point(1.4);
            double err = std::abs(m.to_plane(eval(f, w)) - m(m.to_plane(w)));
            EXPECT_LT(err, 1e-10 * (1.0 + std::norm(w) * std::abs(w)));
        }
    }
}

TEST(Poly, OddSymmetry)
{
    for (int k = 0; k < 50; ++k) {
        CubicAD f(random_point(2.0) + 0.01, random_point(2.0));
        CubicAD g(f.A, -f.D);
        cplx w = random_point(2.0);
        EXPECT_LT(std::abs(eval(g, -w) + eval(f, w)), 1e-12);
    }
}

TEST(Poly, DerivativeMatchesDifference)
{
    const double h = 1e-5;
    for (int k = 0; k < 50; ++k) {
        CubicAD f(random_point(2.0) + 0.01, random_point(2.0));
        cplx w = random_point(2.0);
        cplx fd = (eval(f, w + h) - eval(f, w - h)) / (2.0 * h);
        EXPECT_LT(std::abs(fd - derivative(f, w)), 1e-6 * (1.0 + std::abs(derivative(f, w))));
        QuadParam q{random_point(1.0)};
        EXPECT_LT(std::abs((eval(q, w + h) - eval(q, w - h)) / (2.0 * h) - derivative(q, w)), 1e-6);
    }
}

TEST(Poly, AdToAb)
{
    auto [A0, B0] = ad_to_ab(CubicAD(cplx(0.3, 0.2), 0.0));
    EXPECT_EQ(A0, cplx(0.3, 0.2));
    EXPECT_EQ(B0, cplx(0.0));
    EXPECT_NEAR(std::abs(ad_to_ab(CubicAD(1.0, 2.0)).second - 4.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(ad_to_ab(CubicAD(-0.5, cplx(0.0, 1.0))).second - 0.5), 0.0, 1e-15);
}

TEST(Poly, DepressParabolic)
{
    auto z3 = depress_parabolic(ParabolicParams(0.0, 0.0));
    EXPECT_EQ(z3.p, cplx(0.0));
    EXPECT_EQ(z3.q, cplx(0.0));

    auto f = depress_parabolic(ParabolicParams(1.0, 0.0));
    EXPECT_NEAR(std::abs(f.p + 1.0 / 3.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(f.q - 2.0 / 27.0), 0.0, 1e-15);

    ParabolicParams Q(1.0, 0.01);
    auto g = depress_parabolic(Q);
    EXPECT_NEAR(std::abs(g.q - (2.0 / 27.0 + 0.01)), 0.0, 1e-15);
    auto conj = g.conjugate();
    for (int k = 0; k < 10; ++k) {
        cplx z = random_point(1.0);
        // displacement and translation conjugate
        EXPECT_LT(std::abs(g(z + g.shift) - (eval(Q, z) - z)), 1e-12);
        EXPECT_LT(std::abs(conj.from_plane(conj(conj.to_plane(z))) - eval(Q, z)), 1e-12);
    }
}
