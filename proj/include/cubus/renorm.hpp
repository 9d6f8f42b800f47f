#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dual.hpp"
#include "orbits.hpp"
#include "rays.hpp"

namespace cubus {

enum class Side { left, right };

inline const char* to_string(Side s) { return s == Side::left ? "left" : "right"; }

struct RenormOptions {
    int budget = 200;          // iterates of P^q tested for sidedness
    CycleOptions cycle{};      // attracting-cycle search for straightening
    double root_tol = 1e-8;
    double eps_angle = 1e-3;   // thickening offset in turns
    double equipotential = 0.125;
    PortraitOptions portrait{};
};

struct SeparatingAngles {
    Angle first;   // the sector runs counterclockwise from first to second
    Angle second;
};

inline SeparatingAngles separating_angles(const RayPortrait& P, Side side)
{
    int s = side == Side::left ? P.sector_minus : P.sector_plus;
    if (s < 0 || P.angles.empty()) throw std::invalid_argument("portrait has no sector data");
    const int n = int(P.angles.size());
    return {P.angles[std::size_t(s)], P.angles[std::size_t((s + 1) % n)]};
}

namespace detail {
inline std::vector<cplx> side_polygon(const MonicDepressed& f, const RayPortrait& P, Side side)
{
    int s = side == Side::left ? P.sector_minus : P.sector_plus;
    const std::size_t n = P.angles.size();
    const std::size_t a = std::size_t(s), b = (a + 1) % n;
    return sector_polygon(f, P.angles[a], P.angles[b], P.rays[a], P.rays[b], P.zeta_monic);
}
}  // namespace detail

struct Sidedness {
    bool renormalizable = false;
    int budget = 0;
    int checked = 0;
    std::string reason;
};

// Semi-decision: P^{nq}(-+1), n <= budget, stay bounded and inside the sector cut out by
// the separating rays.
inline Sidedness renormalizability(const CubicAD& params, const RayPortrait& P, Side side, int budget)
{
    if (budget < 1) throw std::invalid_argument("budget must be >= 1");
    auto f = to_monic(params);
    const double R = f.escape_radius();
    const int q = P.rotation.q;
    auto poly = detail::side_polygon(f, P, side);
    int s = side == Side::left ? P.sector_minus : P.sector_plus;
    const std::size_t n = P.angles.size();
    const auto& ra = P.rays[std::size_t(s)];
    const auto& rb = P.rays[(std::size_t(s) + 1) % n];
    Sidedness out;
    out.budget = budget;
    cplx x = f.to_plane(side == Side::left ? -1.0 : 1.0);
    for (int k = 0; k <= budget; ++k) {
        if (std::abs(x) > R) {
            out.reason = "critical orbit escapes";
            return out;
        }
        if (distance_to_polyline(x, ra.points) < 1e-6 || distance_to_polyline(x, rb.points) < 1e-6)
            throw NumericError("critical orbit within 1e-6 of a separating ray (indeterminate)");
        if (winding_number(poly, x) == 0) {
            out.reason = "critical orbit leaves its sector";
            return out;
        }
        out.checked = k;
        for (int j = 0; j < q; ++j) x = f(x);
    }
    out.renormalizable = true;
    return out;
}

inline bool is_renormalizable(const CubicAD& params, const RayPortrait& P, Side side, int budget = 200)
{
    return renormalizability(params, P, side, budget).renormalizable;
}

// Thickened sector around the fixed point: equipotential arc, two slightly rotated rays and
// the arc of the linearizing circle that goes around zeta outside the sector.
struct ThickenedDomain {
    cplx zeta{};  // monic plane
    Angle theta1, theta2;
    double eps_angle = 0.0;
    double equipotential = 0.0;
    double lin_radius = 0.0;
    std::vector<cplx> boundary;  // closed polygon, monic plane
    double separation = 0.0;     // min distance of P^q(boundary) to the closure of the domain
    bool verified = false;
};

inline ThickenedDomain thicken(const CubicAD& params, const RayPortrait& P, Side side, const RenormOptions& opt = {})
{
    auto f = to_monic(params);
    auto sep = separating_angles(P, side);
    ThickenedDomain T;
    T.zeta = P.zeta_monic;
    T.theta1 = sep.first;
    T.theta2 = sep.second;
    T.eps_angle = opt.eps_angle;
    T.equipotential = opt.equipotential;
    double nearest = std::numeric_limits<double>::infinity();
    for (cplx p : monic_fixed_points(f))
        if (std::abs(p - T.zeta) > 1e-6) nearest = std::min(nearest, std::abs(p - T.zeta));
    T.lin_radius = 0.5 * nearest;

    const auto& ray_opt = opt.portrait.ray;
    auto cut_curve = [&](const Angle& base, double offset) {
        auto table = detail::angle_table(base, 3, ray_opt.max_levels + 2);
        auto at = [&](int m, double) { return frac(table[std::size_t(m)] + offset * std::pow(3.0, m)); };
        auto tr = trace_curve(f, at, 0, ray_opt, opt.equipotential);
        if (tr.points.empty()) throw NumericError("thickened ray trace failed");
        std::vector<cplx> pts;
        for (std::size_t i = 0; i < tr.points.size(); ++i) {
            cplx z = tr.points[i];
            if (std::abs(z - T.zeta) <= T.lin_radius) {
                if (i == 0) throw NumericError("equipotential inside the linearizing disc");
                // crossing of the circle on the last segment
                cplx a = tr.points[i - 1];
                double lo = 0.0, hi = 1.0;
                for (int it = 0; it < 60; ++it) {
                    double mid = 0.5 * (lo + hi);
                    (std::abs(a + mid * (z - a) - T.zeta) > T.lin_radius ? lo : hi) = mid;
                }
                pts.push_back(a + lo * (z - a));
                return pts;
            }
            pts.push_back(z);
        }
        throw NumericError("thickened ray never reaches the linearizing disc");
    };
    auto ca = cut_curve(T.theta1, -T.eps_angle);
    auto cb = cut_curve(T.theta2, +T.eps_angle);

    double phi_a = T.theta1.value() - T.eps_angle;
    double span = frac(T.theta2.value() - T.theta1.value());
    if (span == 0.0) span = 1.0;
    span += 2.0 * T.eps_angle;
    auto arc = equipotential_arc(f, opt.equipotential, ca.front(), phi_a, span,
                                 std::max(16, int(span * 256)), ray_opt);

    // boundary: arc a->b, curve b inward, circle the long way round, curve a outward
    auto& B = T.boundary;
    B.insert(B.end(), arc.begin(), arc.end() - 1);
    B.insert(B.end(), cb.begin(), cb.end());
    double alpha_b = std::arg(cb.back() - T.zeta), alpha_a = std::arg(ca.back() - T.zeta);
    double sweep = alpha_a - alpha_b;
    while (sweep <= 0.0) sweep += two_pi;
    // counterclockwise from b to a is the arc outside the sector
    const int nc = 128;
    for (int i = 1; i < nc; ++i) B.push_back(T.zeta + std::polar(T.lin_radius, alpha_b + sweep * i / nc));
    B.insert(B.end(), ca.rbegin(), ca.rend());

    // P^q maps the boundary outside the closed domain
    const int q = P.rotation.q;
    T.separation = std::numeric_limits<double>::infinity();
    T.verified = true;
    for (cplx x : B) {
        cplx y = x;
        for (int j = 0; j < q; ++j) y = f(y);
        if (winding_number(B, y) != 0) {
            T.verified = false;
            T.separation = 0.0;
            continue;
        }
        T.separation = std::min(T.separation, distance_to_polygon(y, B));
    }
    if (T.separation <= 1e-4) T.verified = false;
    return T;
}

// Quadratic side --------------------------------------------------------------------

inline cplx quad_root(Rotation pq)
{
    cplx e = std::polar(1.0, two_pi * pq.value());
    return e / 2.0 - e * e / 4.0;
}

// Attracting cycle of z^2 + c found from the critical orbit.
inline AttractingCycle quad_attracting_cycle(cplx c, const CycleOptions& opt = {})
{
    return attracting_cycle_of(QuadParam{c}, 0.0, opt);
}

// Center of the hyperbolic component attached to the main cardioid at internal angle p/q.
inline cplx quad_center(Rotation pq)
{
    const int q = pq.q;
    if (q == 1) return 0.0;
    if (q > 10) throw std::invalid_argument("quad_center supports q <= 10");
    // coefficients of f_c^q(0) as a polynomial in c
    std::vector<cplx> g{0.0, 1.0};
    for (int k = 1; k < q; ++k) {
        std::vector<cplx> sq(2 * g.size() - 1, 0.0);
        for (std::size_t i = 0; i < g.size(); ++i)
            for (std::size_t j = 0; j < g.size(); ++j) sq[i + j] += g[i] * g[j];
        sq[1] += 1.0;
        g = std::move(sq);
    }
    auto roots = polynomial_roots(g);
    cplx target = quad_root(pq), best = 0.0;
    double bd = std::numeric_limits<double>::infinity();
    for (cplx c : roots) {
        // exact period q
        cplx z = 0.0;
        bool lower = false;
        for (int k = 1; k < q; ++k) {
            z = z * z + c;
            if (std::abs(z) < 1e-8 && q % k == 0) lower = true;
        }
        if (lower) continue;
        // Newton polish on f_c^q(0) = 0
        for (int it = 0; it < 5; ++it) {
            cplx w = 0.0, dw = 0.0;
            for (int k = 0; k < q; ++k) {
                dw = 2.0 * w * dw + 1.0;
                w = w * w + c;
            }
            if (dw != 0.0) c -= w / dw;
        }
        if (std::abs(c - target) < bd) bd = std::abs(c - target), best = c;
    }
    return best;
}

struct QuadInverseOptions {
    int steps = 32;
    int max_halvings = 20;
    int newton_max = 30;
    double tol = 1e-14;
};

// Parameter c in the p/q component whose attracting q-cycle has multiplier lambda.
inline cplx quad_multiplier_inverse(Rotation pq, cplx lambda, const QuadInverseOptions& opt = {})
{
    if (std::abs(lambda) > 1.0 + 1e-12) throw std::invalid_argument("multiplier must lie in the closed unit disc");
    if (std::abs(lambda - 1.0) < 1e-9) return quad_root(pq);
    const int q = pq.q;
    // unknowns (z, c): f_c^q(z) = z and (f_c^q)'(z) = lambda_t
    cplx z = 0.0, c = quad_center(pq);
    auto solve = [&](cplx lam, cplx& z1, cplx& c1) {
        for (int it = 0; it < opt.newton_max; ++it) {
            auto w = Dual<2>::var(z1, 0);
            auto cc = Dual<2>::var(c1, 1);
            Dual<2> u(1.0);
            for (int k = 0; k < q; ++k) {
                u = 2.0 * w * u;
                w = w * w + cc;
            }
            Eigen::Vector2cd F(w.v - z1, u.v - lam);
            Eigen::Matrix2cd J;
            J << w.d[0] - 1.0, w.d[1], u.d[0], u.d[1];
            Eigen::Vector2cd dx = J.fullPivLu().solve(F);
            if (!finite(dx[0]) || !finite(dx[1])) return false;
            z1 -= dx[0];
            c1 -= dx[1];
            if (std::abs(dx[0]) + std::abs(dx[1]) < opt.tol * (1.0 + std::abs(z1) + std::abs(c1))) return true;
        }
        return false;
    };
    double t = 0.0, dt = 1.0 / opt.steps;
    int halvings = 0;
    while (t < 1.0) {
        double tn = std::min(1.0, t + dt);
        cplx z1 = z, c1 = c;
        if (!solve(tn * lambda, z1, c1) || std::abs(c1 - c) > 0.5) {
            dt *= 0.5;
            if (++halvings > opt.max_halvings) throw NumericError("quad_multiplier_inverse continuation failed");
            continue;
        }
        z = z1, c = c1, t = tn;
    }
    return c;
}

// c' in the p/q component with cycle multiplier equal to the fixed multiplier of c_target.
inline cplx quad_tune(Rotation pq, cplx c_target)
{
    cplx lam = 1.0 - principal_sqrt(1.0 - 4.0 * c_target);
    if (!(std::abs(lam) < 1.0)) throw std::invalid_argument("c_target is outside the main component");
    if (pq.q == 1) return c_target;
    return quad_multiplier_inverse(pq, lam);
}

// Straightening -----------------------------------------------------------------------

struct RenormResult {
    Side side = Side::left;
    bool renormalizable = false;
    int budget = 0;
    int cycle_period = 0;
    cplx cycle_multiplier{};
    std::optional<cplx> c;  // absent when the combinatorics are unresolved
    std::string note;
};

inline RenormResult straighten_hyperbolic(const CubicAD& params, const RayPortrait& P, Side side,
                                          const RenormOptions& opt = {})
{
    RenormResult r;
    r.side = side;
    auto sd = renormalizability(params, P, side, opt.budget);
    r.renormalizable = sd.renormalizable;
    r.budget = opt.budget;
    if (!sd.renormalizable) {
        r.note = sd.reason;
        return r;
    }
    const int q = P.rotation.q;
    auto step = [&](cplx w, cplx& dw) {
        dw = 1.0;
        for (int j = 0; j < q; ++j) {
            dw *= derivative(params, w);
            w = eval(params, w);
        }
        return w;
    };
    auto cyc = attracting_cycle(step, side == Side::left ? -1.0 : 1.0, opt.cycle);
    if (!cyc.found) throw NumericError("no attracting cycle of the renormalization within budget");
    r.cycle_period = cyc.period;
    r.cycle_multiplier = cyc.multiplier;
    cplx lam = cyc.multiplier;
    if (std::abs(lam - 1.0) < opt.root_tol) throw NumericError("root excluded: multiplier within tolerance of 1");
    if (cyc.period == 1) r.c = lam / 2.0 - lam * lam / 4.0;
    else if (cyc.period == 2) r.c = lam / 4.0 - 1.0;
    else r.note = "combinatorics unresolved for renormalized cycle period >= 3";
    return r;
}

struct RenormPair {
    RayPortrait portrait;
    RenormResult left, right;
    std::optional<cplx> c, c_tilde;              // straightened parameters
    std::optional<cplx> tuned, tuned_tilde;      // their images in the p/q component
};

inline RenormPair renorm_pair(const CubicAD& params, const RenormOptions& opt = {})
{
    auto P = fixed_ray_portrait(params, opt.portrait);
    if (!P) throw NumericError("no fixed-ray portrait within qmax");
    RenormPair out;
    out.left = straighten_hyperbolic(params, *P, Side::left, opt);
    out.right = straighten_hyperbolic(params, *P, Side::right, opt);
    out.c = out.left.c;
    out.c_tilde = out.right.c;
    auto tune = [&](const RenormResult& r) -> std::optional<cplx> {
        if (!r.c || r.cycle_period != 1) return std::nullopt;
        return quad_tune(P->rotation, *r.c);
    };
    out.tuned = tune(out.left);
    out.tuned_tilde = tune(out.right);
    out.portrait = std::move(*P);
    return out;
}

}  // namespace cubus
