#pragma once

#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "dual.hpp"
#include "renorm.hpp"

namespace cubus {

struct MultiplierPair {
    cplx lm{};  // cycle attracting -1
    cplx lp{};  // cycle attracting +1
};

struct DqqCenter {
    Rotation pq;
    int m = 1;
    CubicAD AD;
};

struct CenterOptions {
    int grid = 0;          // seeds per real axis; 0 picks 7 for q <= 2 and 9 for q = 3
    double extent = 1.5;   // seeds in [-extent, extent] for Re/Im of A and D
    int newton_max = 60;
    double tol = 1e-13;
    PortraitOptions portrait{};
};

namespace detail {

// P^q(w) as a jet in (A, D) and optionally the start point.
template <std::size_t N>
Dual<N> cubic_iterate(const Dual<N>& A, const Dual<N>& D, Dual<N> w, int q)
{
    for (int k = 0; k < q; ++k) w = A * (w * w * w - 3.0 * w) + D;
    return w;
}

inline bool has_lower_period(const CubicAD& f, cplx c, int q, double tol)
{
    cplx w = c;
    for (int k = 1; k < q; ++k) {
        w = eval(f, w);
        if (q % k == 0 && std::abs(w - c) < tol) return true;
    }
    return false;
}

inline std::vector<cplx> orbit_points(const CubicAD& f, cplx c, int q)
{
    std::vector<cplx> pts{c};
    for (int k = 1; k < q; ++k) pts.push_back(eval(f, pts.back()));
    return pts;
}

}  // namespace detail

// All (A, D) with P^q(-1) = -1 and P^q(+1) = +1 of exact period q and disjoint cycles,
// from a multistart Newton search; sorted and deduplicated.
inline std::vector<CubicAD> dqq_center_candidates(int q, const CenterOptions& opt = {})
{
    if (q < 1 || q > 3) throw std::invalid_argument("center search supports 1 <= q <= 3");
    const int g = opt.grid > 0 ? opt.grid : (q <= 2 ? 7 : 9);
    std::vector<double> axis;
    for (int i = 0; i < g; ++i) axis.push_back(g == 1 ? 0.0 : -opt.extent + 2.0 * opt.extent * i / (g - 1) + 1e-3);
    std::vector<CubicAD> sols;
    for (double ar : axis)
        for (double ai : axis)
            for (double dr : axis)
                for (double di : axis) {
                    cplx A(ar, ai), D(dr, di);
                    bool ok = false;
                    for (int it = 0; it < opt.newton_max; ++it) {
                        auto a = Dual<2>::var(A, 0), d = Dual<2>::var(D, 1);
                        auto wm = detail::cubic_iterate(a, d, Dual<2>(-1.0), q);
                        auto wp = detail::cubic_iterate(a, d, Dual<2>(1.0), q);
                        Eigen::Matrix2cd J;
                        J << wm.d[0], wm.d[1], wp.d[0], wp.d[1];
                        Eigen::Vector2cd F(wm.v + 1.0, wp.v - 1.0);
                        Eigen::Vector2cd dx = J.fullPivLu().solve(F);
                        if (!finite(dx[0]) || !finite(dx[1])) break;
                        A -= dx[0];
                        D -= dx[1];
                        if (std::abs(A) > 1e3 || std::abs(D) > 1e3) break;
                        if (std::abs(dx[0]) + std::abs(dx[1]) < opt.tol * (1.0 + std::abs(A) + std::abs(D))) {
                            ok = true;
                            break;
                        }
                    }
                    if (!ok || std::abs(A) < 1e-6) continue;
                    CubicAD f(A, D);
                    if (std::abs(detail::cubic_iterate(Dual<0>(A), Dual<0>(D), Dual<0>(-1.0), q).v + 1.0) > 1e-10 ||
                        std::abs(detail::cubic_iterate(Dual<0>(A), Dual<0>(D), Dual<0>(1.0), q).v - 1.0) > 1e-10)
                        continue;
                    if (detail::has_lower_period(f, -1.0, q, 1e-6) || detail::has_lower_period(f, 1.0, q, 1e-6)) continue;
                    auto om = detail::orbit_points(f, -1.0, q), op = detail::orbit_points(f, 1.0, q);
                    double sep = std::numeric_limits<double>::infinity();
                    for (cplx x : om)
                        for (cplx y : op) sep = std::min(sep, std::abs(x - y));
                    if (sep <= 1e-6) continue;
                    // the system is real, and w -> -w swaps the critical points
                    for (auto [a2, d2] : {std::pair{A, D}, std::pair{std::conj(A), std::conj(D)},
                                          std::pair{A, -D}, std::pair{std::conj(A), -std::conj(D)}}) {
                        bool dup = false;
                        for (const auto& s : sols)
                            if (std::abs(s.A - a2) + std::abs(s.D - d2) < 1e-8) dup = true;
                        if (!dup) sols.push_back(CubicAD(a2, d2));
                    }
                }
    auto key = [](const CubicAD& f) {
        auto r = [](double x) { return std::round(x * 1e9) / 1e9; };
        return std::tuple{r(f.A.real()), r(f.A.imag()), r(f.D.real()), r(f.D.imag())};
    };
    std::sort(sols.begin(), sols.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
    return sols;
}

inline DqqCenter center_dqq(Rotation pq, int m, const CenterOptions& opt = {})
{
    const int q = pq.q;
    if (m < 1 || m > 2 * q - 1 || m % 2 == 0) throw std::invalid_argument("m must be odd in [1, 2q-1]");
    auto popt = opt.portrait;
    popt.qmax = q;
    for (const auto& f : dqq_center_candidates(q, opt)) {
        // necessary condition: some fixed point satisfies the Yoccoz inequality for p/q
        bool plausible = false;
        for (const auto& o : find_periodic(f, 1))
            if (o.multiplier != 0.0 && yoccoz_check(3, o.multiplier, pq, 1).holds) plausible = true;
        if (!plausible) continue;
        std::optional<RayPortrait> P;
        try {
            P = fixed_ray_portrait(f, popt);
        } catch (const std::exception&) {
            continue;
        }
        if (P && P->rotation == pq && P->m == m) return {pq, m, f};
    }
    throw NumericError("no center of type (" + pq.str() + ", " + std::to_string(m) + ") found in the seed grid");
}

namespace detail {
inline DqqCenter cached_center(Rotation pq, int m)
{
    static std::mutex mu;
    static std::map<std::tuple<int, int, int>, DqqCenter> cache;
    auto key = std::tuple{pq.p, pq.q, m};
    {
        std::lock_guard<std::mutex> lock(mu);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    auto c = center_dqq(pq, m);
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(key, c);
    return c;
}
}  // namespace detail

struct LambdaOptions {
    CycleOptions cycle{};
    double shared_tol = 1e-6;
};

inline MultiplierPair lambda_map(const CubicAD& f, const LambdaOptions& opt = {})
{
    auto cm = attracting_cycle_of(f, -1.0, opt.cycle);
    auto cp = attracting_cycle_of(f, 1.0, opt.cycle);
    if (!cm.found || !cp.found) throw NumericError("critical orbit does not converge to an attracting cycle");
    for (cplx x : cm.points)
        for (cplx y : cp.points)
            if (std::abs(x - y) < opt.shared_tol) throw NumericError("both critical points share one attracting cycle");
    return {cm.multiplier, cp.multiplier};
}

struct InverseOptions {
    int steps = 32;
    int max_halvings = 30;
    int newton_max = 30;
    double tol = 1e-14;
};

// Newton continuation from the D_{q,q} center along t -> t (lm, lp).
inline CubicAD lambda_inverse(Rotation pq, int m, MultiplierPair pair, const InverseOptions& opt = {})
{
    if (!(std::abs(pair.lm) < 1.0 && std::abs(pair.lp) < 1.0))
        throw std::invalid_argument("multiplier pair must lie in the open polydisc");
    const int q = pq.q;
    auto center = detail::cached_center(pq, m);
    Eigen::Vector4cd x(center.AD.A, center.AD.D, -1.0, 1.0);

    auto solve = [&](cplx lm, cplx lp, Eigen::Vector4cd& y) {
        for (int it = 0; it < opt.newton_max; ++it) {
            Eigen::Matrix4cd J = Eigen::Matrix4cd::Zero();
            Eigen::Vector4cd F;
            for (int s = 0; s < 2; ++s) {
                auto A = Dual<3>::var(y[0], 0), D = Dual<3>::var(y[1], 1);
                auto w = Dual<3>::var(y[2 + s], 2);
                Dual<3> u(1.0);
                for (int k = 0; k < q; ++k) {
                    u = u * (A * (3.0 * w * w - 3.0));
                    w = A * (w * w * w - 3.0 * w) + D;
                }
                F[s] = w.v - y[2 + s];
                F[2 + s] = u.v - (s == 0 ? lm : lp);
                J(s, 0) = w.d[0], J(s, 1) = w.d[1], J(s, 2 + s) = w.d[2] - 1.0;
                J(2 + s, 0) = u.d[0], J(2 + s, 1) = u.d[1], J(2 + s, 2 + s) = u.d[2];
            }
            Eigen::Vector4cd dx = J.partialPivLu().solve(F);
            for (int i = 0; i < 4; ++i)
                if (!finite(dx[i])) return false;
            y -= dx;
            if (dx.norm() < opt.tol * (1.0 + y.norm())) return std::abs(y[0]) > 1e-10;
        }
        return false;
    };

    const double lmax = std::max(std::abs(pair.lm), std::abs(pair.lp));
    double t = 0.0, dt = 1.0 / opt.steps;
    int halvings = 0;
    while (t < 1.0) {
        double cap = lmax > 0.0 ? 0.05 * (1.0 - lmax * t) / lmax : 1.0;
        double tn = std::min({1.0, t + dt, t + std::max(cap, 1e-9)});
        Eigen::Vector4cd y = x;
        if (!solve(tn * pair.lm, tn * pair.lp, y) || (y - x).norm() > 0.5) {
            dt = 0.5 * (tn - t);
            if (++halvings > opt.max_halvings)
                throw NumericError("lambda_inverse continuation failed after t = " + std::to_string(t));
            continue;
        }
        x = y;
        t = tn;
        dt = std::min(1.0 / opt.steps, 2.0 * dt);
    }
    return CubicAD(x[0], x[1]);
}

// Multiplier of the attracting q-cycle of z^2 + c, checked to lie in the p/q component.
inline cplx quad_component_multiplier(Rotation pq, cplx c)
{
    auto cyc = quad_attracting_cycle(c);
    if (!cyc.found || cyc.period != pq.q)
        throw std::invalid_argument("parameter is not in a hyperbolic component of period " + std::to_string(pq.q));
    if (std::abs(quad_multiplier_inverse(pq, cyc.multiplier) - c) > 1e-6)
        throw std::invalid_argument("parameter is not in the " + pq.str() + " component");
    return cyc.multiplier;
}

inline CubicAD intertwine_h(Rotation pq, int m, cplx c, cplx c_tilde)
{
    return lambda_inverse(pq, m, {quad_component_multiplier(pq, c), quad_component_multiplier(pq, c_tilde)});
}

struct ProbePoint {
    double t = 0.0;
    CubicAD AD;
    double distance = 0.0;  // to (A_{p/q}, 0)
};

inline cplx root_limit_A(Rotation pq) { return -std::polar(1.0, two_pi * pq.value()) / 3.0; }

inline std::vector<ProbePoint> root_limit_probe(Rotation pq, const std::vector<double>& ts)
{
    if (pq.q % 2 == 0) throw std::invalid_argument("root_limit_probe needs odd q");
    std::vector<ProbePoint> out;
    const cplx Alim = root_limit_A(pq);
    for (double t : ts) {
        if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("probe parameters must lie in (0,1)");
        auto f = lambda_inverse(pq, pq.q, {t, t});
        out.push_back({t, f, std::sqrt(std::norm(f.A - Alim) + std::norm(f.D))});
    }
    return out;
}

struct UpsilonValue {
    cplx mu{};
    double nu = 0.0;        // third fixed multiplier, computed directly
    double nu_index = 0.0;  // from the index relation
    CubicAD AD;
};

// Conjugate-pair fixed multiplier of the antidiagonal image h(c, conj c).
inline UpsilonValue upsilon(cplx c)
{
    auto f = intertwine_h(Rotation{}, 1, c, std::conj(c));
    auto lm = lambda_map(f).lm;
    auto fixed = find_periodic(f, 1);
    if (fixed.size() != 3) throw NumericError("expected three distinct fixed points");
    std::size_t best = 0;
    for (std::size_t i = 1; i < fixed.size(); ++i)
        if (std::abs(fixed[i].multiplier - lm) < std::abs(fixed[best].multiplier - lm)) best = i;
    UpsilonValue out;
    out.AD = f;
    out.mu = fixed[best].multiplier;
    bool pair = false;
    for (std::size_t i = 0; i < fixed.size(); ++i) {
        if (i == best) continue;
        if (std::abs(fixed[i].multiplier - std::conj(out.mu)) < 1e-6 && !pair) {
            pair = true;
            continue;
        }
        out.nu = fixed[i].multiplier.real();
    }
    if (!pair) throw NumericError("no conjugate fixed pair at the antidiagonal image");
    out.nu_index = nu_from_mu(out.mu);
    return out;
}

}  // namespace cubus
