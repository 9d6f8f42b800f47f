#pragma once

#include <optional>
#include <string>
#include <vector>

#include "angle.hpp"
#include "geometry.hpp"
#include "green.hpp"
#include "roots.hpp"

namespace cubus {

struct RayOptions {
    int steps_per_level = 8;
    double potential_floor = 1e-7;
    double landing_step = 1e-9;
    double landing_tol = 1e-6;
    int max_levels = 60;
    int newton_max = 40;
    int max_halvings = 14;
    double start_factor = 4.0;  // top level G0 = log(start_factor * R_esc)
};

// Samples of a ray (or slanted curve) in the monic plane, top level first.
struct RayTrace {
    std::vector<cplx> points;
    std::vector<double> potentials;
    bool landed = false;
    cplx endpoint{};
    double potential_floor = 0.0;
    bool complete = true;  // false after Newton stagnation
    std::string failure;
};

inline double top_potential(const MonicDepressed& f, const RayOptions& opt)
{
    return std::log(opt.start_factor * f.escape_radius());
}

namespace detail {

inline bool iterate_d(const MonicDepressed& f, cplx z, int m, cplx& v, cplx& dv)
{
    v = z;
    dv = 1.0;
    for (int i = 0; i < m; ++i) {
        dv *= f.derivative(v);
        v = f(v);
        if (!finite(v) || std::abs(v) > 1e150) return false;
    }
    return true;
}

// Damped Newton for f^m(z) = u starting from z.
inline bool solve_preimage(const MonicDepressed& f, int m, cplx u, cplx& z, int max_it)
{
    if (m == 0) {
        z = u;
        return true;
    }
    cplx v, dv;
    if (!iterate_d(f, z, m, v, dv)) return false;
    double res = std::abs(v - u);
    for (int it = 0; it < max_it; ++it) {
        if (res <= 1e-14 * std::abs(u)) return true;
        if (dv == 0.0) return false;
        cplx step = (v - u) / dv;
        double lam = 1.0;
        bool moved = false;
        for (int h = 0; h < 12; ++h, lam *= 0.5) {
            cplx zt = z - lam * step, vt, dvt;
            if (!iterate_d(f, zt, m, vt, dvt)) continue;
            double rt = std::abs(vt - u);
            if (rt < res) {
                z = zt, v = vt, dv = dvt, res = rt;
                moved = true;
                break;
            }
        }
        if (!moved) return res <= 1e-11 * std::abs(u);
        if (std::abs(lam * step) <= 1e-15 * (1.0 + std::abs(z))) return true;
    }
    return res <= 1e-11 * std::abs(u);
}

// Repeated-multiplication angle table: table[m] = frac(d^m theta) exactly.
inline std::vector<double> angle_table(const Angle& theta, int d, int mmax)
{
    std::vector<double> t;
    Angle a = theta;
    for (int m = 0; m <= mmax; ++m) {
        t.push_back(a.value());
        a = a.times(std::uint64_t(d));
    }
    return t;
}

inline int eventual_period(const Angle& theta, int d)
{
    auto orbit = angle_cycle(theta, d);
    Angle next = orbit.back().times(std::uint64_t(d));
    auto it = std::find(orbit.begin(), orbit.end(), next);
    return int(orbit.end() - it);
}

// Newton on f^n(z) = z; succeeds only at a point that is not attracting.
inline bool polish_periodic(const MonicDepressed& f, int n, cplx& z)
{
    for (int it = 0; it < 60; ++it) {
        cplx v, dv;
        if (!iterate_d(f, z, n, v, dv) || dv == 1.0) return false;
        cplx step = (v - z) / (dv - 1.0);
        if (!finite(step)) return false;
        z -= step;
        if (std::abs(step) < 1e-13 * (1.0 + std::abs(z))) {
            iterate_d(f, z, n, v, dv);
            return std::abs(dv) >= 1.0 - 1e-9;
        }
    }
    return false;
}

}  // namespace detail

// Descends the curve t -> B^{-1}(exp(G(t) + 2 pi i angle)) with G(t) = G_top d^{-t}.
// angle_at(m, Gm) returns the fractional B-angle after m iterations at potential Gm.
// period > 0 enables landing detection by Aitken extrapolation over one period.
template <class AngleAt>
RayTrace trace_curve(const MonicDepressed& f, AngleAt&& angle_at, int period, const RayOptions& opt,
                     double start_potential = 0.0, double stop_potential = 0.0, bool periodic = false)
{
    if (opt.steps_per_level < 1 || opt.max_levels < 1) throw std::invalid_argument("bad ray options");
    const int S = opt.steps_per_level;
    const double d = f.degree;
    const double G_top = std::max(top_potential(f, opt), start_potential);
    const double t_first = start_potential > 0.0 ? std::log(G_top / start_potential) / std::log(d) : 0.0;
    const double floor = std::max(opt.potential_floor, stop_potential);
    const double t_stop = stop_potential > 0.0 ? std::log(G_top / stop_potential) / std::log(d) : 1e300;

    auto potential = [&](double t) { return G_top * std::pow(d, -t); };
    auto target = [&](double t, int& m) {
        m = t <= 1e-12 ? 0 : int(std::ceil(t - 1e-12));
        double Gm = G_top * std::pow(d, m - t);
        return inverse_boettcher_far(f, cplx(Gm, two_pi * angle_at(m, Gm)));
    };

    RayTrace out;
    out.potential_floor = opt.potential_floor;
    int m0;
    cplx z = target(0.0, m0);
    double t = 0.0;
    double prev_step = 0.0;

    auto advance = [&](double t_goal) -> bool {
        double dt = std::min(t_goal - t, 1.0 / S);
        cplx zc = z;
        double tc = t;
        int halvings = 0;
        while (tc < t_goal - 1e-14) {
            double tn = std::min(t_goal, tc + dt);
            int m;
            cplx u = target(tn, m);
            cplx zn = zc;
            bool ok = detail::solve_preimage(f, m, u, zn, opt.newton_max);
            if (ok && prev_step > 0.0 &&
                std::abs(zn - zc) > 10.0 * prev_step * (tn - tc) * S + 1e-12)
                ok = false;
            if (!ok) {
                dt *= 0.5;
                if (++halvings > opt.max_halvings) return false;
                continue;
            }
            zc = zn;
            tc = tn;
        }
        prev_step = std::abs(zc - z) / std::max((t_goal - t) * S, 1e-300);
        z = zc;
        t = t_goal;
        return true;
    };

    auto fail = [&]() {
        out.complete = false;
        out.failure = "Newton stagnation at potential " + std::to_string(potential(t));
    };

    if (t_first > 0.0 && !advance(t_first)) {
        fail();
        out.endpoint = z;
        return out;
    }
    prev_step = 0.0;
    out.points.push_back(z);
    out.potentials.push_back(potential(t));

    std::vector<cplx> estimates;
    const int P = period * S;
    const int kmax = opt.max_levels * S;
    for (int k = 1; k <= kmax; ++k) {
        double t_goal = t_first + double(k) / S;
        bool last = false;
        if (t_goal >= t_stop) {
            t_goal = t_stop;
            last = true;
            if (t_goal <= t + 1e-14) break;
        }
        if (!advance(t_goal)) {
            fail();
            break;
        }
        const double G = potential(t);
        out.points.push_back(z);
        out.potentials.push_back(G);
        if (last) break;
        if (period > 0) {
            const int n = int(out.points.size()) - 1;
            if (n >= 2 * P) {
                cplx a = out.points[n - 2 * P], b = out.points[n - P], c = out.points[n];
                cplx den = (c - b) - (b - a);
                cplx est = std::abs(den) > 1e-300 ? c - (c - b) * (c - b) / den : c;
                if (finite(est)) estimates.push_back(est);
            }
            if (G < floor && estimates.size() >= 2 &&
                std::abs(estimates.back() - estimates[estimates.size() - 2]) < opt.landing_step) {
                out.landed = true;
                break;
            }
        } else if (G < floor) {
            break;
        }
    }
    out.endpoint = estimates.empty() ? z : estimates.back();
    if (periodic && !out.landed && out.complete && !estimates.empty()) {
        // weakly repelling landing points: Aitken stalls, so finish on f^period(z) = z
        cplx zeta = out.endpoint;
        if (detail::polish_periodic(f, period, zeta) && std::abs(zeta - out.endpoint) < 0.25 * std::abs(out.endpoint - z)) {
            out.endpoint = zeta;
            out.landed = true;
        }
    }
    if (period == 0 && out.points.size() >= 2 &&
        std::abs(out.points.back() - out.points[out.points.size() - 2]) < opt.landing_step)
        out.landed = true;
    return out;
}

// Ray of rational angle theta, traced in the monic plane of the family.
template <Family F>
RayTrace trace_ray(const F& fam, const Angle& theta, const RayOptions& opt = {})
{
    auto f = to_monic(fam);
    auto table = detail::angle_table(theta, f.degree, opt.max_levels + 2);
    auto at = [&](int m, double) { return table[std::size_t(m)]; };
    const int period = detail::eventual_period(theta, f.degree);
    const bool periodic = theta.times_pow(std::uint64_t(f.degree), period) == theta;
    return trace_curve(f, at, period, opt, 0.0, 0.0, periodic);
}

// Boundary curves B^{-1}(exp(r + 2 pi i (theta +- t r))), r < rho, of the sector S_t(r_theta).
inline std::pair<RayTrace, RayTrace> trace_sector(const QuadParam& c, const Angle& theta, double slope,
                                                  double rho, const RayOptions& opt = {})
{
    if (slope < 0.0 || rho <= 0.0) throw std::invalid_argument("sector needs slope >= 0 and rho > 0");
    if (slope * rho >= 0.5) throw std::invalid_argument("sector boundaries overlap at the top level");
    auto f = to_monic(c);
    auto table = detail::angle_table(theta, 2, opt.max_levels + 2);
    auto make = [&](double sign) {
        auto at = [&](int m, double Gm) { return frac(table[std::size_t(m)] + sign * slope * Gm); };
        return trace_curve(f, at, 0, opt, rho);
    };
    return {make(-1.0), make(+1.0)};
}

namespace detail {
inline int level_depth(const MonicDepressed& f, double level, const RayOptions& opt)
{
    const double G0 = top_potential(f, opt);
    return level >= G0 ? 0 : int(std::ceil(std::log(G0 / level) / std::log(double(f.degree)) - 1e-12));
}
}  // namespace detail

// n+1 points of {G = level} from angle phi0 counterclockwise through span turns,
// continued from z0, which must be the point of potential level and angle phi0.
inline std::vector<cplx> equipotential_arc(const MonicDepressed& f, double level, cplx z0, double phi0,
                                           double span, int n, const RayOptions& opt = {})
{
    const double d = f.degree;
    const int m = detail::level_depth(f, level, opt);
    const double Gm = level * std::pow(d, m);
    auto angle_m = [&](double phi) {
        phi = frac(phi);
        for (int i = 0; i < m; ++i) phi = frac(phi * d);
        return phi;
    };
    cplx z = z0;
    std::vector<cplx> out{z};
    double s = 0.0, ds = 1.0 / n;
    int halvings = 0;
    for (int j = 1; j <= n;) {
        double goal = double(j) / n;
        double sn = std::min(goal, s + ds);
        cplx u = inverse_boettcher_far(f, cplx(Gm, two_pi * angle_m(phi0 + span * sn)));
        cplx zn = z;
        if (!detail::solve_preimage(f, m, u, zn, opt.newton_max)) {
            ds *= 0.5;
            if (++halvings > 30) throw NumericError("equipotential continuation failed");
            continue;
        }
        z = zn;
        s = sn;
        if (s >= goal - 1e-15) {
            out.push_back(z);
            ++j;
            ds = 1.0 / n;
            halvings = 0;
        }
    }
    return out;
}

// Closed equipotential {G = level} in the monic plane, n points ccw starting at angle 0.
template <Family F>
std::vector<cplx> equipotential(const F& fam, double level, int n = 512, const RayOptions& opt = {})
{
    if (level <= 1e-6) throw std::invalid_argument("equipotential level too small");
    auto f = to_monic(fam);
    cplx z;
    if (detail::level_depth(f, level, opt) == 0) {
        z = inverse_boettcher_far(f, cplx(level, 0.0));
    } else {
        auto tr = trace_curve(f, [](int, double) { return 0.0; }, 0, opt, 0.0, level);
        if (!tr.complete) throw NumericError("equipotential seed trace failed: " + tr.failure);
        z = tr.points.back();
    }
    auto arc = equipotential_arc(f, level, z, 0.0, 1.0, n, opt);
    arc.pop_back();
    return arc;
}

// Fixed points of the monic map, Newton-polished.
inline std::vector<cplx> monic_fixed_points(const MonicDepressed& f)
{
    std::vector<cplx> c(std::size_t(f.degree + 1), 0.0);
    c[0] = f.q;
    c[1] = f.p - 1.0;
    c[std::size_t(f.degree)] += 1.0;
    return polynomial_roots(c);
}

struct SectorCount {
    int m = 0;
    int sector_minus = -1;
    int sector_plus = -1;
};

// Closed curve bounding the sector between consecutive rays a (ray_a) and b (ray_b),
// counterclockwise from a to b, capped by the equipotential through the rays' top samples.
inline std::vector<cplx> sector_polygon(const MonicDepressed& f, const Angle& a, const Angle& b,
                                        const RayTrace& ray_a, const RayTrace& ray_b, cplx zeta)
{
    std::vector<cplx> poly{zeta};
    for (auto it = ray_a.points.rbegin(); it != ray_a.points.rend(); ++it) poly.push_back(*it);
    double span = frac(b.value() - a.value());
    if (span == 0.0) span = 1.0;
    const double G = ray_a.potentials.front();
    const int n = std::max(8, int(std::ceil(span * 256)));
    for (int i = 1; i < n; ++i)
        poly.push_back(inverse_boettcher_far(f, cplx(G, two_pi * (a.value() + span * i / n))));
    for (cplx p : ray_b.points) poly.push_back(p);
    return poly;
}

// Counts portrait rays met counterclockwise from the sector of the marked critical point
// -1 to that of +1. Angles sorted; rays parallel to angles.
inline SectorCount m_count(const MonicDepressed& f, const std::vector<Angle>& angles,
                           const std::vector<RayTrace>& rays, cplx zeta, cplx crit_minus, cplx crit_plus)
{
    const int n = int(angles.size());
    if (n < 2 || rays.size() != angles.size()) throw std::invalid_argument("m_count needs at least two rays");
    for (const auto& r : rays)
        for (cplx c : {crit_minus, crit_plus})
            if (distance_to_polyline(c, r.points) < 1e-6)
                throw NumericError("critical point lies on a traced ray (indeterminate)");
    SectorCount out;
    for (int j = 0; j < n; ++j) {
        auto poly = sector_polygon(f, angles[j], angles[(j + 1) % n], rays[j], rays[(j + 1) % n], zeta);
        for (auto [c, slot] : {std::pair{crit_minus, &out.sector_minus}, std::pair{crit_plus, &out.sector_plus}}) {
            if (winding_number(poly, c) != 0) {
                if (*slot >= 0) throw NumericError("critical point found in two sectors");
                *slot = j;
            }
        }
    }
    if (out.sector_minus < 0 || out.sector_plus < 0) throw NumericError("critical point not located in any sector");
    out.m = ((out.sector_plus - out.sector_minus) % n + n) % n;
    return out;
}

struct RayPortrait {
    cplx zeta{};        // fixed point in family coordinates
    cplx zeta_monic{};  // same point in the monic plane
    std::vector<Angle> angles;
    Rotation rotation;
    int m = 0;
    int sector_minus = -1;
    int sector_plus = -1;
    std::vector<RayTrace> rays;  // parallel to angles
    double landing_error = 0.0;
};

struct PortraitOptions {
    int qmax = 4;
    int connect_budget = 1000;
    RayOptions ray;
};

// Portrait of the fixed point carrying 2q rays of period q <= qmax, with its sector count m.
inline std::optional<RayPortrait> fixed_ray_portrait(const CubicAD& params, const PortraitOptions& opt = {})
{
    if (!is_connected(params, opt.connect_budget))
        throw std::invalid_argument("fixed_ray_portrait needs a connected Julia set");
    auto f = to_monic(params);
    auto fixed = monic_fixed_points(f);
    const double tol = opt.ray.landing_tol;
    for (int q = 1; q <= opt.qmax; ++q) {
        auto cand = periodic_angles(3, q);
        std::vector<std::vector<std::size_t>> at(fixed.size());
        std::vector<RayTrace> traces;
        for (std::size_t i = 0; i < cand.size(); ++i) {
            traces.push_back(trace_ray(f, cand[i], opt.ray));
            const auto& tr = traces.back();
            if (!tr.complete) continue;
            std::size_t hit = fixed.size();
            for (std::size_t j = 0; j < fixed.size(); ++j) {
                if (std::abs(tr.endpoint - fixed[j]) < tol) {
                    if (hit != fixed.size()) throw NumericError("ambiguous ray grouping: fixed points closer than tolerance");
                    hit = j;
                }
            }
            if (hit != fixed.size()) at[hit].push_back(i);
        }
        std::optional<RayPortrait> found;
        for (std::size_t j = 0; j < fixed.size(); ++j) {
            if (int(at[j].size()) != 2 * q) continue;
            std::vector<Angle> angs;
            for (auto i : at[j]) angs.push_back(cand[i]);
            Rotation rot;
            try {
                rot = rotation_number(angs, 3);
            } catch (const std::invalid_argument&) {
                continue;
            }
            if (rot.q != q) continue;
            if (found) throw NumericError("ambiguous portrait: two fixed points carry 2q rays");
            RayPortrait P;
            P.zeta_monic = fixed[j];
            P.zeta = f.from_plane(fixed[j]);
            P.rotation = rot;
            for (auto i : at[j]) {  // cand is sorted, so angles come out sorted
                P.angles.push_back(cand[i]);
                P.rays.push_back(traces[i]);
                P.landing_error = std::max(P.landing_error, std::abs(traces[i].endpoint - fixed[j]));
            }
            found = std::move(P);
        }
        if (found) {
            auto sc = m_count(f, found->angles, found->rays, found->zeta_monic, f.to_plane(-1.0), f.to_plane(1.0));
            found->m = sc.m;
            found->sector_minus = sc.sector_minus;
            found->sector_plus = sc.sector_plus;
            return found;
        }
    }
    return std::nullopt;
}

}  // namespace cubus
