#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "angle.hpp"
#include "poly.hpp"
#include "roots.hpp"

namespace cubus {

enum class Stability { attracting, repelling, indifferent };

inline const char* to_string(Stability s)
{
    switch (s) {
    case Stability::attracting: return "attracting";
    case Stability::repelling: return "repelling";
    default: return "indifferent";
    }
}

struct PeriodicOrbit {
    std::vector<cplx> points;  // family coordinates
    int period = 1;
    cplx multiplier{};
    Stability stability = Stability::indifferent;
};

struct PeriodicOptions {
    AberthOptions aberth{};
    double merge = 1e-6;  // multiple roots only converge to ~sqrt(eps)
    double period_tol = 1e-8;
    double stability_band = 1e-9;
};

inline Stability classify_multiplier(cplx lambda, double band = 1e-9)
{
    double r = std::abs(lambda);
    if (r < 1.0 - band) return Stability::attracting;
    if (r > 1.0 + band) return Stability::repelling;
    return Stability::indifferent;
}

template <Family F>
cplx cycle_multiplier(const F& fam, const std::vector<cplx>& cycle)
{
    cplx lam = 1.0;
    for (cplx z : cycle) lam *= derivative(fam, z);
    return lam;
}

// All cycles whose period divides n, from the roots of f^n(z) - z in the monic plane.
template <Family F>
std::vector<PeriodicOrbit> find_periodic(const F& fam, int n, const PeriodicOptions& opt = {})
{
    auto f = to_monic(fam);
    if (n < 1) throw std::invalid_argument("period bound must be >= 1");
    std::size_t N = 1;
    for (int i = 0; i < n; ++i) N *= std::size_t(f.degree);
    if (N > 256) throw std::invalid_argument("find_periodic limited to degree 3^5 / 2^8");
    const double d = f.degree;

    auto ratio = [&](cplx z) -> cplx {
        cplx w = z, dw = 1.0;
        for (int k = 0; k < n; ++k) {
            if (std::abs(w) > 1e40) {
                // x^d dominates from here on: w/dw shrinks by d per step
                return w / dw * std::pow(d, -(n - k));
            }
            dw *= f.derivative(w);
            w = f(w);
        }
        return (w - z) / (dw - 1.0);
    };
    auto roots = aberth(ratio, N, f.escape_radius(), opt.aberth);
    for (auto& r : roots)
        for (int it = 0; it < 3; ++it) {
            cplx s = ratio(r);
            if (finite(s) && std::abs(s) < 1e-6 * (1.0 + std::abs(r))) r -= s;
        }

    auto exact_period = [&](cplx x) {
        cplx y = x;
        for (int k = 1; k <= n; ++k) {
            y = f(y);
            if (n % k == 0 && std::abs(y - x) < opt.period_tol * (1.0 + std::abs(x))) return k;
        }
        return n;
    };

    std::vector<char> used(roots.size(), 0);
    std::vector<PeriodicOrbit> out;
    std::vector<std::size_t> order(roots.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) {
        return std::pair{roots[a].real(), roots[a].imag()} < std::pair{roots[b].real(), roots[b].imag()};
    });
    for (auto i : order) {
        if (used[i]) continue;
        cplx x = roots[i];
        int k = exact_period(x);
        std::vector<cplx> cyc_monic{x};
        for (int j = 1; j < k; ++j) cyc_monic.push_back(f(cyc_monic.back()));
        // roots within the merge radius of a cycle point are the same point
        used[i] = 1;
        for (std::size_t j = 0; j < roots.size(); ++j) {
            if (used[j]) continue;
            for (cplx y : cyc_monic)
                if (std::abs(roots[j] - y) < opt.merge * (1.0 + std::abs(y))) {
                    used[j] = 1;
                    break;
                }
        }
        PeriodicOrbit orb;
        orb.period = k;
        for (cplx y : cyc_monic) orb.points.push_back(f.from_plane(y));
        orb.multiplier = cycle_multiplier(fam, orb.points);
        orb.stability = classify_multiplier(orb.multiplier, opt.stability_band);
        out.push_back(std::move(orb));
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.period < b.period; });
    return out;
}

struct IndexValue {
    cplx eta{};
    double radius = 0.0;
};

struct IndexOptions {
    int nodes = 2048;
    double radius = 0.0;   // 0: half the distance to the nearest other fixed point
    double cluster = 1e-6;  // fixed points this close to zeta count as zeta itself
};

// (1/2 pi i) \oint dz / (z - g(z)) on a circle around zeta, trapezoidal rule.
template <Family F>
IndexValue holomorphic_index(const F& fam, cplx zeta, const IndexOptions& opt = {})
{
    if (opt.nodes < 8) throw std::invalid_argument("index quadrature needs at least 8 nodes");
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& o : find_periodic(fam, 1))
        for (cplx p : o.points) {
            double dist = std::abs(p - zeta);
            if (dist > opt.cluster) nearest = std::min(nearest, dist);
        }
    double r = opt.radius > 0.0 ? opt.radius : 0.5 * nearest;
    if (!std::isfinite(r)) r = 0.5;
    if (r >= nearest) throw std::invalid_argument("another fixed point lies inside the index contour");
    cplx sum = 0.0;
    for (int k = 0; k < opt.nodes; ++k) {
        cplx e = std::polar(1.0, two_pi * k / opt.nodes);
        cplx z = zeta + r * e;
        sum += r * e / (z - eval(fam, z));
    }
    return {sum / double(opt.nodes), r};
}

enum class ParabolicClass { attracting, indifferent, repelling };

inline const char* to_string(ParabolicClass c)
{
    switch (c) {
    case ParabolicClass::attracting: return "parabolic-attracting";
    case ParabolicClass::repelling: return "parabolic-repelling";
    default: return "parabolic-indifferent";
    }
}

inline ParabolicClass classify_parabolic(cplx eta, double band = 1e-10)
{
    double s = eta.real() - 1.0;
    if (s > band) return ParabolicClass::attracting;
    if (s < -band) return ParabolicClass::repelling;
    return ParabolicClass::indifferent;
}

struct YoccozResult {
    bool holds = false;
    double lhs = 0.0;
    double rhs = 0.0;
    cplx rho{};
};

// Re rho / |rho - 2 pi i p/q|^2 >= m q / (2 log d), rho = log lambda on the branch nearest 2 pi p/q.
inline YoccozResult yoccoz_check(int d, cplx lambda, Rotation pq, int m)
{
    if (lambda == 0.0) throw std::invalid_argument("yoccoz_check needs a nonzero multiplier");
    if (d < 2 || m < 1) throw std::invalid_argument("yoccoz_check needs d >= 2 and m >= 1");
    const double target = two_pi * pq.value();
    double im = std::arg(lambda);
    im += two_pi * std::ceil((target - pi - im) / two_pi);
    if (im <= target - pi) im += two_pi;
    YoccozResult r;
    r.rho = cplx(std::log(std::abs(lambda)), im);
    cplx off = r.rho - cplx(0.0, target);
    r.lhs = r.rho.real() / std::norm(off);
    r.rhs = double(m) * pq.q / (2.0 * std::log(double(d)));
    r.holds = std::abs(lambda) > 1.0 && r.lhs >= r.rhs;
    return r;
}

// Third fixed multiplier from the index relation sum 1/(1 - lambda_i) = 0 with the pair mu, conj(mu).
inline double nu_from_mu(cplx mu)
{
    double den = 2.0 * (1.0 - mu).real();
    if (std::abs(den) < 1e-14) throw std::invalid_argument("nu_from_mu is singular at Re(1-mu) = 0");
    return 1.0 + std::norm(1.0 - mu) / den;
}

// Same relation with the opposite denominator sign; reports show both values side by side.
inline double nu_printed_form(cplx mu)
{
    double den = 2.0 * (mu - 1.0).real();
    if (std::abs(den) < 1e-14) throw std::invalid_argument("printed nu form is singular at Re(mu-1) = 0");
    return 1.0 + std::norm(mu - 1.0) / den;
}

struct RealCubic {
    double A = 0.0;
    double B = 0.0;
    MonicDepressed monic;  // x^3 + p x + q with real p, q
    double nu = 0.0;
    std::vector<cplx> fixed_multipliers;
};

// Real cubic whose conjugate fixed pair has multipliers mu, conj(mu).
// Fixed points 2u and -u +- i v, with Re mu = 1 - 2 v^2 and Im mu = -6 u v.
inline RealCubic real_cubic_from_mu(cplx mu)
{
    if (mu.imag() == 0.0) throw std::invalid_argument("real_cubic_from_mu needs nonreal mu");
    if (!((1.0 - mu).real() > 0.0)) throw std::invalid_argument("real_cubic_from_mu needs Re(1-mu) > 0");
    double v = std::sqrt((1.0 - mu.real()) / 2.0);
    double u = -mu.imag() / (6.0 * v);
    // invariant under mu -> conj(mu) up to x -> -x, which leaves (A, B) alone
    RealCubic out;
    out.monic = MonicDepressed{3, 1.0 + v * v - 3.0 * u * u, -2.0 * u * (u * u + v * v), 1.0, 0.0};
    out.A = -out.monic.p.real() / 3.0;
    out.B = std::norm(out.monic.q);
    out.nu = nu_from_mu(mu);
    auto fixed = find_periodic(out.monic, 1);
    bool pair = false;
    for (const auto& o : fixed) {
        out.fixed_multipliers.push_back(o.multiplier);
        if (std::abs(o.multiplier - mu) < 1e-8 || std::abs(o.multiplier - std::conj(mu)) < 1e-8) pair = true;
    }
    if (!pair) throw NumericError("no conjugate fixed pair with the requested multiplier");
    return out;
}

struct AttractingCycle {
    bool found = false;
    bool escaped = false;
    std::vector<cplx> points;
    int period = 0;
    cplx multiplier{};
    int iterations = 0;
};

struct CycleOptions {
    int budget = 200000;
    int max_period = 32;
    double detect = 1e-7;
    double cauchy_tol = 1e-10;
    double escape = 1e8;
};

// Attracting cycle of a map g (value and derivative via step(z, &dz)) that attracts z0.
// Detection by recurrence |z_k - z_{k-n}|, then Newton refinement on g^n(z) = z.
template <class Step>
AttractingCycle attracting_cycle(Step&& step, cplx z0, const CycleOptions& opt = {})
{
    AttractingCycle out;
    std::vector<cplx> ring(std::size_t(opt.max_period + 1));
    const std::size_t L = ring.size();
    cplx z = z0;
    ring[0] = z;
    auto g = [&](cplx x) {
        cplx dx;
        return step(x, dx);
    };
    for (int k = 1; k <= opt.budget; ++k) {
        z = g(z);
        if (!finite(z) || std::abs(z) > opt.escape) {
            out.escaped = true;
            out.iterations = k;
            return out;
        }
        ring[std::size_t(k) % L] = z;
        if (k < 2 * opt.max_period) continue;
        for (int n = 1; n <= opt.max_period; ++n) {
            cplx prev = ring[std::size_t(k - n) % L];
            if (std::abs(z - prev) > opt.detect * (1.0 + std::abs(z))) continue;
            // Newton on g^n(x) - x from the current point
            cplx x = z;
            bool ok = false;
            for (int it = 0; it < 60; ++it) {
                cplx v = x, dv = 1.0;
                for (int j = 0; j < n; ++j) {
                    cplx dj;
                    v = step(v, dj);
                    dv *= dj;
                }
                cplx corr = (v - x) / (dv - 1.0);
                if (!finite(corr)) break;
                x -= corr;
                if (std::abs(corr) <= opt.cauchy_tol * 1e-3 * (1.0 + std::abs(x))) {
                    ok = true;
                    break;
                }
            }
            if (!ok) continue;
            std::vector<cplx> pts{x};
            cplx lam = 1.0;
            for (int j = 0; j < n; ++j) {
                cplx dj;
                cplx y = step(pts.back(), dj);
                lam *= dj;
                if (j + 1 < n) pts.push_back(y);
            }
            if (!(std::abs(lam) < 1.0)) continue;
            double gap = std::abs(z - x);
            for (cplx p : pts) gap = std::min(gap, std::abs(z - p));
            if (gap > 1e-4 * (1.0 + std::abs(x))) continue;
            out.found = true;
            out.points = std::move(pts);
            out.period = n;
            out.multiplier = lam;
            out.iterations = k;
            return out;
        }
    }
    out.iterations = opt.budget;
    return out;
}

template <Family F>
AttractingCycle attracting_cycle_of(const F& fam, cplx z0, const CycleOptions& opt = {})
{
    auto step = [&](cplx x, cplx& dx) {
        dx = derivative(fam, x);
        return eval(fam, x);
    };
    return attracting_cycle(step, z0, opt);
}

}  // namespace cubus
