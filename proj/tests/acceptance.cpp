// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include <cubus/cubus.hpp>

using namespace cubus;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Outcome center_identity()
{
    auto t0 = Clock::now();
    auto c = center_dqq(Rotation(), 1);
    double dt = seconds_since(t0);
    double err = std::abs(c.AD.A + 0.5) + std::abs(c.AD.D);
    auto r = renorm_pair(c.AD);
    double rerr = (r.c && r.c_tilde) ? std::abs(*r.c) + std::abs(*r.c_tilde) : 1.0;
    return {err < 1e-10 && dt < 1.0 && rerr < 1e-8, fmt("center err %.2e in %.3f s, renorm err %.2e", err, dt, rerr)};
}

Outcome round_trip()
{
    auto t0 = Clock::now();
    const std::vector<cplx> vals{0.0, 0.4, -0.4, cplx(0.0, 0.3)};
    auto implied = [](Rotation pq, cplx l) { return pq.q == 1 ? l / 2.0 - l * l / 4.0 : l / 4.0 - 1.0; };
    double worst = 0.0;
    int failures = 0;
    for (auto [pq, m] : std::vector<std::pair<Rotation, int>>{{Rotation(), 1}, {Rotation(1, 2), 1}, {Rotation(1, 2), 3}})
        for (cplx a : vals)
            for (cplx b : vals) {
                try {
                    auto r = renorm_pair(lambda_inverse(pq, m, {a, b}));
                    if (!r.tuned || !r.tuned_tilde) {
                        ++failures;
                        continue;
                    }
                    worst = std::max(worst, std::abs(*r.tuned - implied(pq, a)) + std::abs(*r.tuned_tilde - implied(pq, b)));
                } catch (const std::exception&) {
                    ++failures;
                }
            }
    double dt = seconds_since(t0);
    return {failures == 0 && worst < 1e-6 && dt < 120.0,
            fmt("48 pairs, max error %.2e, %d failures, %.1f s", worst, failures, dt)};
}

Outcome quadratic_anchors()
{
    double e1 = std::abs(quad_multiplier_inverse(Rotation(1, 2), 1.0) + 0.75);
    double e0 = std::abs(quad_multiplier_inverse(Rotation(1, 2), 0.0) + 1.0);
    return {e1 < 1e-9 && e0 < 1e-10, fmt("root err %.2e, center err %.2e", e1, e0)};
}

Outcome yoccoz()
{
    auto b = yoccoz_check(2, 1.0 - std::sqrt(5.0), Rotation(1, 2), 1);
    auto c = yoccoz_check(3, 1.5, Rotation(), 2);
    bool ok = b.holds && std::abs(b.lhs - 4.718) < 1e-3 && std::abs(b.rhs - 1.4427) < 1e-3 && c.holds &&
              std::abs(c.lhs - 2.466) < 1e-3 && std::abs(c.rhs - 0.910) < 1e-3;
    return {ok, fmt("basilica %.4f >= %.4f, cubic %.4f >= %.4f", b.lhs, b.rhs, c.lhs, c.rhs)};
}

Outcome holomorphic_index_check()
{
    double worst = 0.0;
    for (double a : {0.7, 1.0, 1.3})
        worst = std::max(worst, std::abs(holomorphic_index(ParabolicParams(a, 0.0), 0.0).eta - 1.0 / (a * a)));
    // scan a along rays from the origin; the class flips where |a^2 - 1/2| = 1/2
    double flip = 0.0;
    int rays = 0;
    for (double th = 0.1; th < 0.75; th += 0.1) {
        cplx dir = std::polar(1.0, th);
        double lo = 0.1, hi = 2.0;
        for (int k = 0; k < 80; ++k) {
            double mid = 0.5 * (lo + hi);
            cplx a = mid * dir;
            cplx eta = holomorphic_index(ParabolicParams(a, 0.0), 0.0).eta;
            (classify_parabolic(eta, 0.0) == ParabolicClass::attracting ? lo : hi) = mid;
        }
        cplx a = lo * dir;
        flip = std::max(flip, std::abs(std::abs(a * a - 0.5) - 0.5));
        ++rays;
    }
    return {worst < 1e-8 && flip < 1e-9, fmt("max |eta - 1/a^2| %.2e, boundary offset %.2e over %d rays", worst, flip, rays)};
}

Outcome index_sum()
{
    std::mt19937_64 rng(20261015);
    std::uniform_real_distribution<double> U(-1.5, 1.5);
    double worst = 0.0;
    int used = 0;
    while (used < 20) {
        CubicAD f(cplx(U(rng), U(rng)), cplx(U(rng), U(rng)));
        auto fixed = find_periodic(f, 1);
        if (fixed.size() != 3) continue;
        cplx s = 0.0;
        bool ok = true;
        for (const auto& o : fixed) {
            ok = ok && std::abs(o.multiplier - 1.0) > 1e-3;
            s += 1.0 / (1.0 - o.multiplier);
        }
        if (!ok) continue;
        worst = std::max(worst, std::abs(s));
        ++used;
    }
    return {worst < 1e-8, fmt("max |sum| %.2e over %d cubics", worst, used)};
}

Outcome nu_consistency()
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> Re(-1.5, 0.9), Im(0.05, 1.2);
    double worst = 0.0, printed_gap = 0.0;
    for (int k = 0; k < 10; ++k) {
        cplx mu(Re(rng), (k % 2 ? 1.0 : -1.0) * Im(rng));
        auto c = real_cubic_from_mu(mu);
        double best = 1e9;
        for (cplx l : c.fixed_multipliers)
            if (std::abs(l - mu) > 1e-6 && std::abs(l - std::conj(mu)) > 1e-6) best = std::min(best, std::abs(l - c.nu));
        worst = std::max(worst, best);
        printed_gap = std::max(printed_gap, std::abs(nu_printed_form(mu) - c.nu));
    }
    return {worst < 1e-8, fmt("max |nu - third multiplier| %.2e; printed form (denominator 2Re(mu-1)) differs by up to %.3f",
                              worst, printed_gap)};
}

Outcome fatou()
{
    auto t0 = Clock::now();
    FatouOptions wide;
    wide.radius = 40.0;
    double worst = 0.0;
    for (double a : {0.8, 1.0, 1.2})
        for (int j = 0; j < 10; ++j) {
            cplx z = std::polar(0.04 + 0.01 * j, pi + 0.25 * (j - 4.5) / 4.5);
            cplx qz = z + a * z * z + z * z * z;
            worst = std::max(worst, std::abs(fatou_attracting(a, qz, wide).phi - fatou_attracting(a, z).phi - 1.0));
        }
    double dt = seconds_since(t0);
    return {worst < 1e-6 && dt < 30.0, fmt("max residual %.2e in %.2f s", worst, dt)};
}

Outcome eigenvalue_product()
{
    auto p8 = product_identity(0.8), p1 = product_identity(1.0);
    std::vector<double> gaps;
    for (double eps : {1e-2, 1e-4, 1e-6}) {
        auto e = eigprod_check(0.8, eps);
        gaps.push_back(std::abs(e.product - e.target));
    }
    bool mono = gaps[0] > gaps[1] && gaps[1] > gaps[2];
    return {p8.err < 1e-2 && p1.err < 1e-2 && mono,
            fmt("err(0.8) %.2e, err(1.0) %.2e, eigprod gaps %.2e > %.2e > %.2e", p8.err, p1.err, gaps[0], gaps[1], gaps[2])};
}

Outcome root_probe()
{
    auto pts = root_limit_probe(Rotation(), {0.7, 0.9, 0.97});
    bool dec = pts[0].distance > pts[1].distance && pts[1].distance > pts[2].distance;
    return {dec && pts[2].distance < 0.1,
            fmt("distances %.3e, %.3e, %.3e", pts[0].distance, pts[1].distance, pts[2].distance)};
}

Outcome portrait()
{
    auto P = fixed_ray_portrait(CubicAD(-0.5, 0.0));
    bool base = P && P->angles.size() == 2 && P->angles[0] == Angle(0, 1) && P->angles[1] == Angle(1, 2) &&
                P->rotation == Rotation() && P->m == 1 && P->landing_error < 1e-6;
    const std::vector<CubicAD> samples{CubicAD(-0.5, 0.1), CubicAD(-0.45, cplx(0.05, 0.1)),
                                       CubicAD(cplx(0.25, 0.0), cplx(0.0, 1.3228756555322954)),
                                       CubicAD(cplx(-0.55, 0.02), cplx(0.1, -0.05)), CubicAD(-0.6, cplx(0.0, 0.2))};
    int flips = 0;
    for (const auto& f : samples) {
        try {
            auto a = fixed_ray_portrait(f), b = fixed_ray_portrait(CubicAD(f.A, -f.D));
            if (a && b && a->rotation == b->rotation && b->m == 2 * a->rotation.q - a->m) ++flips;
        } catch (const std::exception&) {
        }
    }
    return {base && flips == 5, fmt("center portrait %s (landing %.1e), m flips %d/5", base ? "ok" : "wrong",
                                    P ? P->landing_error : -1.0, flips)};
}

Outcome symmetries()
{
    double swap = 0.0, conj = 0.0;
    int bad = 0;
    for (auto pair : {MultiplierPair{0.2, -0.3}, MultiplierPair{cplx(0.1, 0.2), 0.4}, MultiplierPair{-0.4, cplx(0.0, 0.3)},
                      MultiplierPair{0.0, 0.5}, MultiplierPair{cplx(-0.2, -0.2), cplx(0.3, 0.1)}}) {
        auto f = lambda_inverse(Rotation(), 1, pair);
        auto a = renorm_pair(f), b = renorm_pair(CubicAD(f.A, -f.D));
        if (!(a.c && a.c_tilde && b.c && b.c_tilde)) {
            ++bad;
            continue;
        }
        swap = std::max(swap, std::abs(*a.c - *b.c_tilde) + std::abs(*a.c_tilde - *b.c));
    }
    for (cplx l : {cplx(0.3, 0.2), cplx(-0.1, 0.5), cplx(0.0, -0.4)}) {
        auto f = lambda_inverse(Rotation(), 1, {l, std::conj(l)});
        CubicAD g(f.A.real(), cplx(0.0, f.D.imag()));
        auto r = renorm_pair(g);
        if (!(r.c && r.c_tilde)) {
            ++bad;
            continue;
        }
        conj = std::max(conj, std::abs(*r.c_tilde - std::conj(*r.c)));
    }
    return {bad == 0 && swap < 1e-8 && conj < 1e-8, fmt("swap err %.2e on 5, conj err %.2e on 3", swap, conj)};
}

Outcome render_determinism()
{
    ImageSpec spec;
    spec.width = spec.height = 200;
    spec.window = {-1.5, 1.5, -1.5, 1.5};
    auto t0 = Clock::now();
    auto a = render_param(spec, ParamFamily::real_ab, 500, 1);
    double dt = seconds_since(t0);
    auto b = render_param(spec, ParamFamily::real_ab, 500, 1);
    auto c = render_param(spec, ParamFamily::real_ab, 500, 4);
    auto center = classify_parameter(ParamFamily::real_ab, {-0.5, 0.0}, 500);
    auto far = classify_parameter(ParamFamily::real_ab, {5.0, 0.0}, 500);
    bool ok = dt < 30.0 && a.rgb == b.rgb && a.rgb == c.rgb && !center.escaped && far.escaped;
    return {ok, fmt("%.2f s single thread, identical %s, (-0.5,0) %s, (5,0) %s", dt,
                    a.rgb == b.rgb && a.rgb == c.rgb ? "yes" : "no", center.escaped ? "escaped" : "bounded",
                    far.escaped ? "escaped" : "bounded")};
}

}  // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"center identity", center_identity},
        {"multiplier round trip", round_trip},
        {"quadratic anchors", quadratic_anchors},
        {"yoccoz inequality", yoccoz},
        {"holomorphic index", holomorphic_index_check},
        {"fixed-point index sum", index_sum},
        {"nu consistency", nu_consistency},
        {"fatou functional equation", fatou},
        {"eigenvalue product", eigenvalue_product},
        {"root-limit probe", root_probe},
        {"fixed-ray portrait", portrait},
        {"symmetries", symmetries},
        {"render determinism", render_determinism},
    };
    int failed = 0, k = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", ++k, name, o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
