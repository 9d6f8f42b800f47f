#include <gtest/gtest.h>

#include <cubus/intertwine.hpp>
#include <cubus/renorm.hpp>

using namespace cubus;

namespace {

const RayPortrait& center_portrait()
{
    static const RayPortrait P = *fixed_ray_portrait(CubicAD(-0.5, 0.0));
    return P;
}

}  // namespace

TEST(Renorm, SeparatingAngles)
{
    auto l = separating_angles(center_portrait(), Side::left);
    auto r = separating_angles(center_portrait(), Side::right);
    EXPECT_EQ(l.first, Angle(1, 2));
    EXPECT_EQ(l.second, Angle(0, 1));
    EXPECT_EQ(r.first, Angle(0, 1));
    EXPECT_EQ(r.second, Angle(1, 2));
}

TEST(Renorm, CenterIsRenormalizable)
{
    CubicAD f(-0.5, 0.0);
    EXPECT_TRUE(is_renormalizable(f, center_portrait(), Side::left));
    EXPECT_TRUE(is_renormalizable(f, center_portrait(), Side::right));
    for (Side s : {Side::left, Side::right}) {
        auto r = straighten_hyperbolic(f, center_portrait(), s);
        EXPECT_EQ(r.cycle_period, 1);
        EXPECT_LT(std::abs(r.cycle_multiplier), 1e-10);
        ASSERT_TRUE(r.c.has_value());
        EXPECT_LT(std::abs(*r.c), 1e-10);
    }
}

TEST(Renorm, CenterPair)
{
    auto p = renorm_pair(CubicAD(-0.5, 0.0));
    ASSERT_TRUE(p.c && p.c_tilde);
    EXPECT_LT(std::abs(*p.c) + std::abs(*p.c_tilde), 1e-8);
}

TEST(Renorm, EscapingSideIsNotRenormalizable)
{
    // +1 escapes, so no portrait of its own; sidedness alone already rules it out
    CubicAD g(-0.5, 3.0);
    EXPECT_FALSE(is_connected(g));
    EXPECT_FALSE(is_renormalizable(g, center_portrait(), Side::right));
}

TEST(Renorm, DSymmetrySwapsSides)
{
    for (auto pair : {MultiplierPair{0.2, -0.3}, MultiplierPair{cplx(0.1, 0.2), 0.4}, MultiplierPair{-0.4, cplx(0.0, 0.3)},
                      MultiplierPair{0.0, 0.5}, MultiplierPair{cplx(-0.2, -0.2), cplx(0.3, 0.1)}}) {
        auto f = lambda_inverse(Rotation(), 1, pair);
        auto a = renorm_pair(f), b = renorm_pair(CubicAD(f.A, -f.D));
        ASSERT_TRUE(a.c && a.c_tilde && b.c && b.c_tilde);
        EXPECT_LT(std::abs(*a.c - *b.c_tilde), 1e-8);
        EXPECT_LT(std::abs(*a.c_tilde - *b.c), 1e-8);
    }
}

TEST(Renorm, QuadMultiplierInverse)
{
    EXPECT_NEAR(std::abs(quad_multiplier_inverse(Rotation(1, 2), 0.0) + 1.0), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(quad_multiplier_inverse(Rotation(1, 2), 1.0) + 0.75), 0.0, 1e-9);
    for (cplx l : {cplx(0.3, 0.0), cplx(-0.5, 0.2), cplx(0.0, 0.9)})
        EXPECT_LT(std::abs(quad_multiplier_inverse(Rotation(), l) - (l / 2.0 - l * l / 4.0)), 1e-10);
}

TEST(Renorm, MultiplierInverseRoundTrip)
{
    for (Rotation pq : {Rotation(1, 2), Rotation(1, 3), Rotation(2, 3)}) {
        for (cplx l : {cplx(0.0), cplx(0.3, 0.2), cplx(-0.5, 0.0), cplx(0.1, -0.6)}) {
            cplx c = quad_multiplier_inverse(pq, l);
            auto cyc = quad_attracting_cycle(c);
            ASSERT_TRUE(cyc.found);
            EXPECT_EQ(cyc.period, pq.q);
            EXPECT_LT(std::abs(cyc.multiplier - l), 1e-8);
        }
    }
}

TEST(Renorm, QuadTune)
{
    EXPECT_LT(std::abs(quad_tune(Rotation(1, 2), 0.0) + 1.0), 1e-10);
    EXPECT_EQ(quad_tune(Rotation(), cplx(0.1, 0.2)), cplx(0.1, 0.2));
    // lambda = 1/2 has c = 1/4 - 1/16 in the main cardioid
    EXPECT_LT(std::abs(quad_tune(Rotation(1, 2), 0.25 - 1.0 / 16.0) + 0.875), 1e-9);
}

TEST(Renorm, MultiplierOutsideDiscRejected)
{
    EXPECT_THROW(quad_multiplier_inverse(Rotation(), 1.5), std::invalid_argument);
    EXPECT_THROW(quad_tune(Rotation(1, 2), 0.5), std::invalid_argument);
}
