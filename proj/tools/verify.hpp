#pragma once

#include <random>
#include <string>
#include <vector>

#include <cubus/cubus.hpp>

namespace cubus::verify {

struct Check {
    std::string name;
    double measured = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::string note;
};

inline Json to_json(const Check& c)
{
    Json j{{"name", c.name}, {"measured", c.measured}, {"threshold", c.threshold}, {"pass", c.pass}};
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

inline Check below(std::string name, double measured, double threshold, std::string note = {})
{
    return {std::move(name), measured, threshold, measured < threshold, std::move(note)};
}

inline Check holds(std::string name, bool ok, std::string note = {})
{
    return {std::move(name), ok ? 0.0 : 1.0, 0.5, ok, std::move(note)};
}

inline Json angles_json(const std::vector<Angle>& a)
{
    Json j = Json::array();
    for (const auto& x : a) j.push_back(x.str());
    return j;
}

struct Suite {
    std::vector<Check> checks;
    Json extra = Json::object();

    bool pass() const
    {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

inline Suite portrait_suite()
{
    Suite s;
    auto P = fixed_ray_portrait(CubicAD(-0.5, 0.0));
    if (!P) {
        s.checks.push_back(holds("portrait found at (-0.5, 0)", false));
        return s;
    }
    s.extra["angles"] = angles_json(P->angles);
    s.extra["pq"] = P->rotation.str();
    s.extra["m"] = P->m;
    bool ok = P->angles.size() == 2 && P->angles[0] == Angle(0, 1) && P->angles[1] == Angle(1, 2) &&
              P->rotation == Rotation() && P->m == 1;
    s.checks.push_back(holds("portrait of (-0.5, 0) is {0, 1/2}, 0/1, m = 1", ok));
    s.checks.push_back(below("landing error at (-0.5, 0)", P->landing_error, 1e-6));
    const std::vector<CubicAD> samples{CubicAD(-0.5, 0.1), CubicAD(-0.45, cplx(0.05, 0.1)),
                                       CubicAD(cplx(0.25, 0.0), cplx(0.0, 1.3228756555322954)),
                                       CubicAD(cplx(-0.55, 0.02), cplx(0.1, -0.05)), CubicAD(-0.6, cplx(0.0, 0.2))};
    int flips = 0;
    for (const auto& f : samples) {
        try {
            auto a = fixed_ray_portrait(f), b = fixed_ray_portrait(CubicAD(f.A, -f.D));
            if (a && b && a->rotation == b->rotation && b->m == 2 * int(a->rotation.q) - a->m) ++flips;
        } catch (const std::exception&) {
        }
    }
    s.checks.push_back(holds("m -> 2q - m under D -> -D on 5 samples", flips == 5, std::to_string(flips) + "/5"));
    return s;
}

inline Suite renorm_suite()
{
    Suite s;
    auto r = renorm_pair(CubicAD(-0.5, 0.0));
    double e = (r.c && r.c_tilde) ? std::abs(*r.c) + std::abs(*r.c_tilde) : 1.0;
    s.checks.push_back(below("renorm_pair(-0.5, 0) = (0, 0)", e, 1e-8));
    s.checks.push_back(below("quad_multiplier_inverse(1/2, 1) = -3/4", std::abs(quad_multiplier_inverse(Rotation(1, 2), 1.0) + 0.75), 1e-9));
    s.checks.push_back(below("quad_multiplier_inverse(1/2, 0) = -1", std::abs(quad_multiplier_inverse(Rotation(1, 2), 0.0) + 1.0), 1e-10));
    double swap = 0.0;
    for (auto pair : {MultiplierPair{0.2, -0.3}, MultiplierPair{cplx(0.1, 0.2), 0.4}, MultiplierPair{-0.4, cplx(0.0, 0.3)}}) {
        auto f = lambda_inverse(Rotation(), 1, pair);
        auto a = renorm_pair(f), b = renorm_pair(CubicAD(f.A, -f.D));
        swap = std::max(swap, std::abs(*a.c - *b.c_tilde) + std::abs(*a.c_tilde - *b.c));
    }
    s.checks.push_back(below("renorm_pair(A, -D) = swap(renorm_pair(A, D))", swap, 1e-8));
    return s;
}

inline Suite intertwine_suite()
{
    Suite s;
    const std::vector<cplx> vals{0.0, 0.4, -0.4, cplx(0.0, 0.3)};
    const std::vector<std::pair<Rotation, int>> types{{Rotation(), 1}, {Rotation(1, 2), 1}, {Rotation(1, 2), 3}};
    double worst = 0.0;
    for (auto [pq, m] : types)
        for (cplx a : vals)
            for (cplx b : vals) {
                auto back = lambda_map(lambda_inverse(pq, m, {a, b}));
                worst = std::max(worst, std::max(std::abs(back.lm - a), std::abs(back.lp - b)));
            }
    s.checks.push_back(below("max round-trip error of lambda_map(lambda_inverse(pair))", worst, 1e-6));
    s.extra["max_round_trip_error"] = worst;
    auto c = center_dqq(Rotation(), 1);
    s.checks.push_back(below("center 0/1 1 = (-1/2, 0)", std::abs(c.AD.A + 0.5) + std::abs(c.AD.D), 1e-10));
    double diag = 0.0;
    for (double t : {0.2, 0.5, 0.8}) {
        auto f = lambda_inverse(Rotation(), 1, {t, t});
        diag = std::max(diag, std::abs(f.A - (t - 3.0) / 6.0) + std::abs(f.D));
    }
    s.checks.push_back(below("diagonal image is ((t-3)/6, 0)", diag, 1e-8));
    return s;
}

inline Suite parabolic_suite()
{
    Suite s;
    double fe = 0.0;
    FatouOptions wide;
    wide.radius = 40.0;
    for (double a : {0.8, 1.0, 1.2})
        for (int j = 0; j < 10; ++j) {
            cplx z = std::polar(0.04 + 0.01 * j, pi + 0.25 * (j - 4.5) / 4.5);
            cplx qz = z + a * z * z + z * z * z;
            fe = std::max(fe, std::abs(fatou_attracting(a, qz, wide).phi - fatou_attracting(a, z).phi - 1.0));
        }
    s.checks.push_back(below("Fatou functional equation residual", fe, 1e-6));
    for (double a : {0.8, 1.0}) {
        auto p = product_identity(a);
        s.checks.push_back(below("eigenvalue product identity, a = " + std::to_string(a).substr(0, 3), p.err, 1e-2));
    }
    std::vector<double> gaps;
    for (double eps : {1e-2, 1e-4, 1e-6}) {
        auto e = eigprod_check(0.8, eps);
        gaps.push_back(std::abs(e.product - e.target));
    }
    s.checks.push_back(holds("eigprod converges monotonically as eps -> 0", gaps[0] > gaps[1] && gaps[1] > gaps[2]));
    return s;
}

inline Suite index_suite()
{
    Suite s;
    double worst = 0.0;
    for (double a : {0.7, 1.0, 1.3}) {
        auto v = holomorphic_index(ParabolicParams(a, 0.0), 0.0);
        worst = std::max(worst, std::abs(v.eta - 1.0 / (a * a)));
    }
    s.checks.push_back(below("|eta - 1/a^2| at a in {0.7, 1, 1.3}", worst, 1e-8));
    std::mt19937_64 rng(20261015);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double sum = 0.0;
    int used = 0;
    while (used < 20) {
        CubicAD f(cplx(U(rng), U(rng)), cplx(U(rng), U(rng)));
        auto fixed = find_periodic(f, 1);
        bool ok = fixed.size() == 3;
        cplx total = 0.0;
        for (const auto& o : fixed) {
            if (std::abs(o.multiplier - 1.0) <= 1e-3) ok = false;
            total += 1.0 / (1.0 - o.multiplier);
        }
        if (!ok) continue;
        sum = std::max(sum, std::abs(total));
        ++used;
    }
    s.checks.push_back(below("fixed-point index sum over 20 random cubics", sum, 1e-8));
    return s;
}

inline Suite run_suite(const std::string& name)
{
    if (name == "portrait") return portrait_suite();
    if (name == "renorm") return renorm_suite();
    if (name == "intertwine") return intertwine_suite();
    if (name == "parabolic") return parabolic_suite();
    if (name == "index") return index_suite();
    throw std::invalid_argument("unknown verify suite " + name);
}

}  // namespace cubus::verify
