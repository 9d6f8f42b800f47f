#include <gtest/gtest.h>

#include <cubus/rays.hpp>

using namespace cubus;

TEST(Angles, Cycles)
{
    auto c0 = angle_cycle(Angle(0, 1), 3);
    ASSERT_EQ(c0.size(), 1u);
    EXPECT_EQ(c0[0], Angle(0, 1));
    auto c1 = angle_cycle(Angle(1, 2), 3);
    ASSERT_EQ(c1.size(), 1u);
    auto c8 = angle_cycle(Angle(1, 8), 3);
    ASSERT_EQ(c8.size(), 2u);
    EXPECT_EQ(c8[1], Angle(3, 8));
}

TEST(Angles, ExactArithmetic)
{
    Angle a(5, 26);
    EXPECT_EQ(a.times(3), Angle(15, 26));
    EXPECT_EQ(a.times_pow(3, 3), a);
    EXPECT_EQ(Angle(4, 8), Angle(1, 2));
    EXPECT_EQ(parse_angle("2/6"), Angle(1, 3));
    EXPECT_THROW(parse_angle("1/0"), std::invalid_argument);
    EXPECT_THROW(Rotation(2, 2), std::invalid_argument);
    EXPECT_EQ(parse_rotation("2/4"), Rotation(1, 2));
    EXPECT_EQ(Rotation(0, 5), Rotation());
}

TEST(Angles, RotationNumbers)
{
    EXPECT_EQ(rotation_number({Angle(0, 1)}, 3), Rotation());
    EXPECT_EQ(rotation_number({Angle(1, 3), Angle(2, 3)}, 2), Rotation(1, 2));
    EXPECT_EQ(rotation_number({Angle(1, 8), Angle(3, 8)}, 3), Rotation(1, 2));
    EXPECT_THROW(rotation_number({Angle(1, 3)}, 3), std::invalid_argument);
}

TEST(Rays, SquareMapRealRay)
{
    auto r = trace_ray(QuadParam{0.0}, Angle(0, 1));
    ASSERT_TRUE(r.landed);
    EXPECT_NEAR(std::abs(r.endpoint - 1.0), 0.0, 1e-6);
    for (cplx z : r.points) EXPECT_NEAR(z.imag(), 0.0, 1e-9);
    for (std::size_t k = 1; k < r.potentials.size(); ++k) EXPECT_LT(r.potentials[k], r.potentials[k - 1]);
}

TEST(Rays, BasilicaAlpha)
{
    const double alpha = (1.0 - std::sqrt(5.0)) / 2.0;
    for (Angle t : {Angle(1, 3), Angle(2, 3)}) {
        auto r = trace_ray(QuadParam{-1.0}, t);
        ASSERT_TRUE(r.landed);
        EXPECT_LT(std::abs(r.endpoint - alpha), 1e-6);
    }
}

TEST(Rays, CubicFixedRaysLandAtOrigin)
{
    for (Angle t : {Angle(0, 1), Angle(1, 2)}) {
        auto r = trace_ray(CubicAD(-0.5, 0.0), t);
        ASSERT_TRUE(r.landed);
        EXPECT_LT(std::abs(r.endpoint), 1e-6);
    }
}

TEST(Rays, Pushforward)
{
    // samples of r_t carry Boettcher argument t, their images carry 3t
    CubicAD f(cplx(-0.45, 0.05), cplx(0.05, 0.1));
    auto m = to_monic(f);
    Angle t(1, 8);
    auto r = trace_ray(f, t);
    ASSERT_TRUE(r.complete);
    auto turn_error = [](cplx logB, double angle) {
        double d = logB.imag() / two_pi - angle;
        return std::abs(d - std::round(d));
    };
    int checked = 0;
    for (std::size_t k = 0; k < r.points.size(); ++k) {
        if (r.potentials[k] < 0.02) break;
        auto b = boettcher(m, r.points[k]);
        auto b3 = boettcher(m, m(r.points[k]));  // m is read in its own plane
        ASSERT_TRUE(b.valid && b3.valid);
        EXPECT_LT(turn_error(b.logB, t.value()), 1e-6);
        EXPECT_LT(turn_error(b3.logB, t.times(3).value()), 1e-6);
        EXPECT_NEAR(b3.logB.real(), 3.0 * r.potentials[k], 1e-6);
        ++checked;
    }
    EXPECT_GT(checked, 8);
}

TEST(Sectors, ZeroSlopeIsTheRay)
{
    auto [lo, hi] = trace_sector(QuadParam{-1.0}, Angle(1, 3), 0.0, 0.5);
    ASSERT_EQ(lo.points.size(), hi.points.size());
    int checked = 0;
    for (std::size_t k = 0; k < lo.points.size(); ++k) {
        EXPECT_LT(std::abs(lo.points[k] - hi.points[k]), 1e-9);
        if (lo.potentials[k] < 0.02) continue;
        auto b = boettcher(QuadParam{-1.0}, lo.points[k]);
        ASSERT_TRUE(b.valid);
        double d = b.logB.imag() / two_pi - 1.0 / 3.0;
        EXPECT_LT(std::abs(d - std::round(d)), 1e-6);
        EXPECT_NEAR(b.logB.real(), lo.potentials[k], 1e-8);
        ++checked;
    }
    EXPECT_GT(checked, 8);
}

TEST(Sectors, LogSpiralForSquare)
{
    const double t = 0.3;
    auto [lo, hi] = trace_sector(QuadParam{0.0}, Angle(1, 3), t, 0.5);
    for (std::size_t k = 0; k < lo.points.size(); ++k) {
        double r = lo.potentials[k];
        if (r > 0.5) continue;
        EXPECT_LT(std::abs(lo.points[k] - std::exp(cplx(r, two_pi * (1.0 / 3.0 - t * r)))), 1e-8);
        EXPECT_LT(std::abs(hi.points[k] - std::exp(cplx(r, two_pi * (1.0 / 3.0 + t * r)))), 1e-8);
    }
}

TEST(Sectors, RejectsOverlap)
{
    EXPECT_THROW(trace_sector(QuadParam{-1.0}, Angle(1, 3), 2.0, 0.5), std::invalid_argument);
    EXPECT_THROW(trace_sector(QuadParam{-1.0}, Angle(1, 3), -0.1, 0.5), std::invalid_argument);
}

TEST(Portrait, CenterOfMainComponent)
{
    auto P = fixed_ray_portrait(CubicAD(-0.5, 0.0));
    ASSERT_TRUE(P.has_value());
    ASSERT_EQ(P->angles.size(), 2u);
    EXPECT_EQ(P->angles[0], Angle(0, 1));
    EXPECT_EQ(P->angles[1], Angle(1, 2));
    EXPECT_EQ(P->rotation, Rotation());
    EXPECT_EQ(P->m, 1);
    EXPECT_LT(std::abs(P->zeta), 1e-6);
    EXPECT_LT(P->landing_error, 1e-6);
}

TEST(Portrait, HalfComponentCenter)
{
    auto P = fixed_ray_portrait(CubicAD(0.25, cplx(0.0, 1.3228756555322954)));
    ASSERT_TRUE(P.has_value());
    EXPECT_EQ(P->rotation, Rotation(1, 2));
    ASSERT_EQ(P->angles.size(), 4u);
    for (const auto& a : P->angles) EXPECT_EQ(8 % a.den, 0u);
}

TEST(Portrait, InvariantAngleSetAndOddM)
{
    const std::vector<CubicAD> samples{CubicAD(-0.5, 0.1), CubicAD(-0.45, cplx(0.05, 0.1)),
                                       CubicAD(cplx(0.25, 0.0), cplx(0.0, 1.3228756555322954)),
                                       CubicAD(cplx(-0.55, 0.02), cplx(0.1, -0.05))};
    for (const auto& f : samples) {
        auto P = fixed_ray_portrait(f);
        ASSERT_TRUE(P.has_value());
        EXPECT_EQ(P->angles.size(), 2u * P->rotation.q);
        for (const auto& a : P->angles)
            EXPECT_NE(std::find(P->angles.begin(), P->angles.end(), a.times(3)), P->angles.end());
        EXPECT_EQ(P->m % 2, 1);
        auto Q = fixed_ray_portrait(CubicAD(f.A, -f.D));
        ASSERT_TRUE(Q.has_value());
        EXPECT_EQ(Q->m, 2 * int(P->rotation.q) - P->m);
        EXPECT_LT(P->landing_error, 1e-6);
    }
}

TEST(Portrait, RequiresConnectedness)
{
    EXPECT_THROW(fixed_ray_portrait(CubicAD(5.0, 0.0)), std::invalid_argument);
}
