#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "roots.hpp"
#include "types.hpp"

namespace cubus {

// Q_a(z) = z + a z^2 + z^3 near its parabolic point 0, in the chart W = -1/(a z)
// where Q_a becomes W -> W + 1 + (1 - 1/a^2)/W + O(W^-2).

enum class PetalKind { attracting, repelling };

inline std::string to_string(PetalKind k) { return k == PetalKind::attracting ? "attracting" : "repelling"; }

template <class Real = double>
struct FatouValue {
    std::complex<Real> phi{};
    PetalKind kind = PetalKind::attracting;
    long n_used = 0;
    Real residual = 0;  // |Phi(Q z) - Phi(z) - 1| of the series at the evaluation point
};

struct FatouOptions {
    int terms = 20;
    double radius = 0.0;  // 0: automatic from the coefficient growth
    long max_steps = 1000000;
    double escape = 10.0;  // |z| beyond this leaves every petal
};

template <class Real = double>
class ParabolicChart {
public:
    using C = std::complex<Real>;

    explicit ParabolicChart(Real a, const FatouOptions& opt = {}) : a_(a), opt_(opt)
    {
        if (!(a > 0)) throw std::invalid_argument("parabolic chart needs a > 0");
        if (opt.terms < 1 || opt.terms > 60) throw std::invalid_argument("series terms must be in [1, 60]");
        beta_ = 1 - 1 / (a * a);
        solve_series();
        Real growth = 0;
        for (std::size_t k = 1; k < e_.size(); ++k)
            if (e_[k] != 0) growth = std::max(growth, std::pow(std::abs(e_[k]), Real(1) / Real(k)));
        radius_ = opt.radius > 0 ? Real(opt.radius) : std::max(Real(16), 6 * growth);
    }

    Real a() const { return a_; }
    Real beta() const { return beta_; }
    Real radius() const { return radius_; }
    const std::vector<Real>& coefficients() const { return e_; }  // e_[k] multiplies W^-k

    C to_chart(C z) const { return Real(-1) / (a_ * z); }
    C from_chart(C W) const { return Real(-1) / (a_ * W); }
    C q(C z) const { return z + a_ * z * z + z * z * z; }

    // Q_a in the chart; the displacement form keeps the unit step exact for large W.
    C step(C W) const
    {
        if (std::abs(W) > 1) {
            C u = Real(1) / W;
            return W + (Real(1) - u / (a_ * a_)) / (Real(1) - u + u * u / (a_ * a_));
        }
        return to_chart(q(from_chart(W)));
    }

    C step_derivative(C W) const
    {
        C u = Real(1) / W;
        C n = Real(1) - u / (a_ * a_), d = Real(1) - u + u * u / (a_ * a_);
        C dg = (-(Real(1) / (a_ * a_)) * d - n * (Real(-1) + Real(2) * u / (a_ * a_))) / (d * d);
        return Real(1) - dg * u * u;
    }

    // Preimage near W - 1; throws when Newton does not settle on a unique branch.
    C step_inverse(C W) const
    {
        C v = W - Real(1);
        for (int it = 0; it < 60; ++it) {
            C dv = (step(v) - W) / step_derivative(v);
            v -= dv;
            if (std::abs(dv) <= Real(1e-15) * (1 + std::abs(v))) break;
        }
        if (!(std::abs(step(v) - W) <= Real(1e-10) * (1 + std::abs(W))))
            throw NumericError("inverse branch ambiguity in the repelling petal");
        return v;
    }

    C log_branch(C W, PetalKind k) const { return k == PetalKind::attracting ? std::log(W) : std::log(-W); }

    // Asymptotic Fatou coordinate W - beta log W + sum e_k W^-k.
    C series(C W, PetalKind k) const
    {
        C u = Real(1) / W, s = 0, p = u;
        for (std::size_t j = 1; j < e_.size(); ++j, p *= u) s += e_[j] * p;
        return W - beta_ * log_branch(W, k) + s;
    }

    C series_derivative(C W) const
    {
        C u = Real(1) / W, s = 0, p = u * u;
        for (std::size_t j = 1; j < e_.size(); ++j, p *= u) s -= Real(j) * e_[j] * p;
        return Real(1) - beta_ * u + s;
    }

    C series_inverse(C t, PetalKind k) const
    {
        C W = t + beta_ * log_branch(t, k);
        for (int it = 0; it < 60; ++it) {
            C dW = (series(W, k) - t) / series_derivative(W);
            W -= dW;
            if (std::abs(dW) <= Real(1e-15) * (1 + std::abs(W))) return W;
        }
        if (!(std::abs(series(W, k) - t) <= Real(1e-10) * (1 + std::abs(t))))
            throw NumericError("Fatou series inversion did not converge");
        return W;
    }

    bool in_region(C W, PetalKind k) const
    {
        Real re = k == PetalKind::attracting ? W.real() : -W.real();
        return std::abs(W) >= radius_ && re > std::abs(W.imag());
    }

    const FatouOptions& options() const { return opt_; }

private:
    // Order-by-order solution of Phi(F(W)) = Phi(W) + 1 in u = 1/W.
    void solve_series()
    {
        const int K = opt_.terms, N = K + 2;
        using S = std::vector<Real>;
        auto mul = [N](const S& x, const S& y) {
            S r(N + 1, 0);
            for (int i = 0; i <= N; ++i)
                if (x[i] != 0)
                    for (int j = 0; i + j <= N; ++j) r[i + j] += x[i] * y[j];
            return r;
        };
        auto inv = [N](const S& x) {
            S r(N + 1, 0);
            r[0] = 1 / x[0];
            for (int n = 1; n <= N; ++n) {
                Real s = 0;
                for (int j = 1; j <= n; ++j) s += x[j] * r[n - j];
                r[n] = -s / x[0];
            }
            return r;
        };
        const Real ia = 1 / (a_ * a_);
        S num(N + 1, 0), den(N + 1, 0);
        num[0] = 1, num[1] = -ia;
        den[0] = 1, den[1] = -1, den[2] = ia;
        S g = mul(num, inv(den));
        S ug(N + 1, 0);  // u g(u)
        for (int i = 0; i < N; ++i) ug[i + 1] = g[i];
        S lg(N + 1, 0), pw = ug;  // log(1 + u g)
        for (int j = 1; j <= N; ++j) {
            for (int i = 0; i <= N; ++i) lg[i] += (j % 2 ? Real(1) : Real(-1)) * pw[i] / Real(j);
            pw = mul(pw, ug);
        }
        S one_ug = ug;
        one_ug[0] += 1;
        S h = inv(one_ug);  // u'/u
        S res(N + 1, 0);
        for (int i = 0; i <= N; ++i) res[i] = g[i] - beta_ * lg[i];
        res[0] -= 1;
        e_.assign(K + 1, 0);
        S hk = h;
        for (int k = 1; k <= K; ++k) {
            e_[k] = res[k + 1] / Real(k);
            S term = hk;  // u^k (h^k - 1)
            term[0] -= 1;
            for (int i = k; i <= N; ++i) res[i] += e_[k] * term[i - k];
            hk = mul(hk, h);
        }
    }

    Real a_, beta_, radius_ = 16;
    FatouOptions opt_;
    std::vector<Real> e_;
};

namespace detail {
template <class Real>
FatouValue<Real> fatou_eval(const ParabolicChart<Real>& ch, std::complex<Real> z, PetalKind kind)
{
    using C = std::complex<Real>;
    if (z == C(0)) throw std::invalid_argument("Fatou coordinate is undefined at the parabolic point");
    C W = ch.to_chart(z);
    long n = 0;
    const auto& opt = ch.options();
    while (!ch.in_region(W, kind)) {
        W = kind == PetalKind::attracting ? ch.step(W) : ch.step_inverse(W);
        if (++n > opt.max_steps) throw NumericError("Fatou coordinate did not converge within the step budget");
        if (!finite(cplx(double(W.real()), double(W.imag()))) || std::abs(ch.from_chart(W)) > Real(opt.escape))
            throw NumericError("orbit leaves the petal");
    }
    FatouValue<Real> out;
    out.kind = kind;
    out.n_used = n;
    Real sign = kind == PetalKind::attracting ? Real(1) : Real(-1);
    out.phi = ch.series(W, kind) - sign * Real(n);
    C next = kind == PetalKind::attracting ? ch.step(W) : ch.step_inverse(W);
    out.residual = std::abs(sign * (ch.series(next, kind) - ch.series(W, kind)) - Real(1));
    return out;
}
}  // namespace detail

template <class Real = double>
FatouValue<Real> fatou_attracting(Real a, std::complex<Real> z, const FatouOptions& opt = {})
{
    return detail::fatou_eval(ParabolicChart<Real>(a, opt), z, PetalKind::attracting);
}

template <class Real = double>
FatouValue<Real> fatou_repelling(Real a, std::complex<Real> z, const FatouOptions& opt = {})
{
    return detail::fatou_eval(ParabolicChart<Real>(a, opt), z, PetalKind::repelling);
}

struct EcalleOptions {
    long max_steps = 100000;
    double escape = 10.0;
};

// Orbit of the lift of w from deep in the repelling petal until it enters the attracting region.
template <class Real>
struct LiftedOrbit {
    std::complex<Real> start{};  // chart point with repelling coordinate w - shift
    long shift = 0;
    long steps = 0;
    std::complex<Real> end{};
};

template <class Real>
LiftedOrbit<Real> lift_orbit(const ParabolicChart<Real>& ch, std::complex<Real> w, const EcalleOptions& opt = {})
{
    using C = std::complex<Real>;
    LiftedOrbit<Real> L;
    L.shift = std::max<long>(0, long(std::ceil(double(w.real() + std::abs(w.imag()) + 2 * ch.radius() + 4))));
    L.start = ch.series_inverse(w - Real(L.shift), PetalKind::repelling);
    C W = L.start;
    while (!(L.steps >= L.shift && ch.in_region(W, PetalKind::attracting))) {
        W = ch.step(W);
        if (++L.steps > opt.max_steps + L.shift) throw NumericError("lift does not reach the attracting petal");
        if (!(std::abs(W) > Real(1e-300)) || std::abs(ch.from_chart(W)) > Real(opt.escape))
            throw NumericError("lift escapes the basin");
    }
    L.end = W;
    return L;
}

// Horn map E_a: repelling cylinder -> attracting cylinder, defined modulo 1.
template <class Real = double>
std::complex<Real> ecalle_return(const ParabolicChart<Real>& ch, std::complex<Real> w, const EcalleOptions& opt = {})
{
    auto L = lift_orbit(ch, w, opt);
    return ch.series(L.end, PetalKind::attracting) - Real(L.steps - L.shift);
}

template <class Real = double>
std::complex<Real> ecalle_return(Real a, std::complex<Real> w, const EcalleOptions& opt = {})
{
    return ecalle_return(ParabolicChart<Real>(a), w, opt);
}

template <class Real = double>
struct HornAsymptotics {
    std::complex<Real> c_plus{}, c_minus{};
    std::vector<double> heights;
    std::vector<std::complex<Real>> plus_by_height, minus_by_height;
    Real residual = 0;  // change between the two largest heights
};

struct HornOptions {
    int samples = 16;  // equispaced points per horizontal line; their mean is the constant Fourier mode
    double max_residual = 1e-3;
    EcalleOptions ecalle{};
};

template <class Real = double>
HornAsymptotics<Real> horn_asymptotics(Real a, std::vector<double> heights, const HornOptions& opt = {})
{
    using C = std::complex<Real>;
    if (heights.size() < 2) throw std::invalid_argument("horn asymptotics needs at least two heights");
    if (opt.samples < 1) throw std::invalid_argument("horn asymptotics needs samples >= 1");
    std::sort(heights.begin(), heights.end());
    if (heights.front() <= 0) throw std::invalid_argument("heights must be positive");
    ParabolicChart<Real> ch(a);
    HornAsymptotics<Real> out;
    out.heights = heights;
    for (double h : heights) {
        for (Real sign : {Real(1), Real(-1)}) {
            C mean = 0;
            for (int j = 0; j < opt.samples; ++j) {
                C w(Real(j) / Real(opt.samples), sign * Real(h));
                mean += ecalle_return(ch, w, opt.ecalle) - w;
            }
            mean /= Real(opt.samples);
            (sign > 0 ? out.plus_by_height : out.minus_by_height).push_back(mean);
        }
    }
    const std::size_t n = heights.size();
    out.c_plus = out.plus_by_height[n - 1];
    out.c_minus = out.minus_by_height[n - 1];
    out.residual = std::max(std::abs(out.plus_by_height[n - 1] - out.plus_by_height[n - 2]),
                            std::abs(out.minus_by_height[n - 1] - out.minus_by_height[n - 2]));
    if (out.residual > Real(opt.max_residual))
        throw NumericError("horn map constants still vary with height (residual " + std::to_string(double(out.residual)) + ")");
    return out;
}

struct ProductIdentity {
    cplx lhs{}, rhs{};
    double err = 0.0;
};

inline double eigenvalue_product_target(double a) { return std::exp(-4.0 * pi * pi * (1.0 / (a * a) - 1.0)); }

template <class Real = double>
ProductIdentity product_identity(Real a, const std::vector<double>& heights = {4, 6, 8}, const HornOptions& opt = {})
{
    auto H = horn_asymptotics<Real>(a, heights, opt);
    auto d = H.c_plus - H.c_minus;
    ProductIdentity out;
    out.lhs = std::exp(cplx(0.0, two_pi) * cplx(double(d.real()), double(d.imag())));
    out.rhs = eigenvalue_product_target(double(a));
    out.err = std::abs(out.lhs - out.rhs) / std::abs(out.rhs);
    return out;
}

struct EigprodValue {
    cplx lambda_plus{}, lambda_minus{};
    cplx rho_plus{}, rho_minus{};
    double product = 0.0;          // rho+ rho- with rho = exp(4 pi^2 / log lambda)
    double product_printed = 0.0;  // same with rho = exp(-4 pi^2 / log lambda)
    double target = 0.0;
    double asymptotic_ratio = 0.0;  // max |lambda -+ (1 +- 2i sqrt(a eps))| / eps
};

// Multipliers of the two fixed points born from 0 under z -> Q_a(z) + eps.
inline EigprodValue eigprod_check(double a, double eps)
{
    if (!(a > 0.0) || !(eps > 0.0)) throw std::invalid_argument("eigprod needs a > 0 and eps > 0");
    auto roots = polynomial_roots({cplx(eps), 0.0, cplx(a), 1.0});
    std::optional<cplx> zp, zm;
    for (cplx z : roots) {
        if (z.imag() > 1e-12) zp = z;
        if (z.imag() < -1e-12) zm = z;
    }
    if (!zp || !zm) throw NumericError("no nonreal pair of fixed points (eps too large)");
    EigprodValue out;
    out.lambda_plus = 1.0 + 2.0 * a * *zp + 3.0 * *zp * *zp;
    out.lambda_minus = 1.0 + 2.0 * a * *zm + 3.0 * *zm * *zm;
    const double k = 4.0 * pi * pi;
    cplx ip = 1.0 / std::log(out.lambda_plus), im = 1.0 / std::log(out.lambda_minus);
    out.rho_plus = std::exp(k * ip);
    out.rho_minus = std::exp(k * im);
    out.product = std::exp(k * (ip + im)).real();
    out.product_printed = std::exp(-k * (ip + im)).real();
    out.target = eigenvalue_product_target(a);
    const cplx lead(0.0, 2.0 * std::sqrt(a * eps));
    out.asymptotic_ratio = std::max(std::abs(out.lambda_plus - 1.0 - lead), std::abs(out.lambda_minus - 1.0 + lead)) / eps;
    return out;
}

struct PathSample {
    double t = 0.0;
    cplx lambda{}, lambda_tilde{};
    double sum_error = 0.0;  // |1/(1-lambda) + 1/(1-lambda~) - eta|
    double defect = 0.0;     // 1 - |lambda|^2
};

// Paths with 1/(1-lambda) = 1/s + eta/2 and 1/(1-lambda~) = -1/s + eta/2, s = i(1-t).
inline std::vector<PathSample> perturb_paths(cplx eta, const std::vector<double>& ts)
{
    if (!(eta.real() > 1.0)) throw std::invalid_argument("perturbation paths need Re eta > 1");
    std::vector<PathSample> out;
    for (double t : ts) {
        if (!(t >= 0.0 && t < 1.0)) throw std::invalid_argument("path parameter must lie in [0, 1)");
        cplx s(0.0, 1.0 - t);
        cplx w = 1.0 / s + 0.5 * eta, wt = -1.0 / s + 0.5 * eta;
        PathSample p;
        p.t = t;
        p.lambda = 1.0 - 1.0 / w;
        p.lambda_tilde = 1.0 - 1.0 / wt;
        p.sum_error = std::abs(1.0 / (1.0 - p.lambda) + 1.0 / (1.0 - p.lambda_tilde) - eta);
        p.defect = 1.0 - std::norm(p.lambda);
        if (!(std::abs(p.lambda) < 1.0 && std::abs(p.lambda_tilde) < 1.0))
            throw NumericError("perturbation path leaves the unit disc at t = " + std::to_string(t));
        out.push_back(p);
    }
    return out;
}

inline double cylinder_distance(cplx x, cplx y)
{
    cplx d = x - y;
    double re = d.real() - std::round(d.real());
    return std::hypot(re, d.imag());
}

struct GapSample {
    double a = 0.0;
    double gap = 0.0;
    cplx critical_point{};  // upper point of the symmetric pair of critical points of E_a
    cplx critical_value{};  // Phi^A at the upper critical point of Q_a
};

struct ConargOptions {
    int seeds_re = 8;
    int seeds_im = 40;
    double max_height = 3.0;
    double tol = 1e-4;
    EcalleOptions ecalle{};
};

// Outermost critical point of E_a in the upper half cylinder: Q^k(lift(w)) hits a critical point of Q_a.
inline cplx horn_critical_point(const ParabolicChart<double>& ch, const ConargOptions& opt = {})
{
    const double a = ch.a();
    const cplx omega[2] = {cplx(-a, std::sqrt(3.0 - a * a)) / 3.0, cplx(-a, -std::sqrt(3.0 - a * a)) / 3.0};
    // k-th orbit point of the lift and its w-derivative, in the z chart
    auto orbit_at = [&](cplx w, long k, cplx& dz) {
        long shift = std::max<long>(0, long(std::ceil(w.real() + std::abs(w.imag()) + 2 * ch.radius() + 4)));
        cplx V = ch.series_inverse(w - double(shift), PetalKind::repelling);
        cplx z = ch.from_chart(V);
        dz = (1.0 / (a * V * V)) / ch.series_derivative(V);
        for (long j = 0; j < k; ++j) {
            dz *= 1.0 + 2.0 * a * z + 3.0 * z * z;
            z = ch.q(z);
        }
        return z;
    };
    std::optional<cplx> best;
    for (int i = 0; i < opt.seeds_re; ++i)
        for (int j = 1; j <= opt.seeds_im; ++j) {
            cplx w(double(i) / opt.seeds_re, opt.max_height * j / opt.seeds_im);
            LiftedOrbit<double> L;
            try {
                L = lift_orbit(ch, w, opt.ecalle);
            } catch (const NumericError&) {
                continue;
            }
            // closest approach to a critical point along the lifted orbit
            cplx z = ch.from_chart(L.start);
            long kbest = 0;
            int obest = 0;
            double dbest = 1e300;
            for (long k = 0; k <= L.steps; ++k) {
                for (int o = 0; o < 2; ++o)
                    if (std::abs(z - omega[o]) < dbest) dbest = std::abs(z - omega[o]), kbest = k, obest = o;
                z = ch.q(z);
            }
            if (dbest > 0.5) continue;
            long shift0 = std::max<long>(0, long(std::ceil(w.real() + std::abs(w.imag()) + 2 * ch.radius() + 4)));
            for (int it = 0; it < 40; ++it) {
                long shift = std::max<long>(0, long(std::ceil(w.real() + std::abs(w.imag()) + 2 * ch.radius() + 4)));
                long k = kbest + (shift - shift0);
                cplx dz;
                cplx zk;
                try {
                    zk = orbit_at(w, k, dz);
                } catch (const NumericError&) {
                    break;
                }
                cplx step = (zk - omega[obest]) / dz;
                if (!finite(step) || std::abs(step) > 0.25) break;
                w -= step;
                if (std::abs(step) < 1e-13) {
                    w = cplx(w.real() - std::floor(w.real()), w.imag());
                    if (w.imag() > 1e-6 && (!best || w.imag() > best->imag() + 1e-9)) best = w;
                    break;
                }
            }
        }
    if (!best) throw NumericError("no critical point of the horn map found on the seed lines");
    return *best;
}

inline GapSample conarg_gap(double a, const ConargOptions& opt = {})
{
    if (!(a > 0.0 && a < std::sqrt(3.0))) throw std::invalid_argument("conarg needs 0 < a < sqrt(3)");
    ParabolicChart<double> ch(a);
    GapSample s;
    s.a = a;
    s.critical_point = horn_critical_point(ch, opt);
    const cplx omega(-a / 3.0, std::sqrt(3.0 - a * a) / 3.0);
    s.critical_value = detail::fatou_eval(ch, omega, PetalKind::attracting).phi;
    double values = cylinder_distance(s.critical_value, std::conj(s.critical_value));
    double points = cylinder_distance(s.critical_point, std::conj(s.critical_point));
    s.gap = values - points;
    return s;
}

struct ConargResult {
    std::optional<double> a_star;
    double gap_at_star = 0.0;
    std::vector<GapSample> table;
};

// Sign change of conarg_gap on a grid over [lo, hi], refined by bisection.
inline ConargResult conarg_search(double lo, double hi, int grid = 16, const ConargOptions& opt = {})
{
    if (!(0.0 < lo && lo < hi && hi < std::sqrt(3.0))) throw std::invalid_argument("conarg interval must lie in (0, sqrt 3)");
    if (grid < 16) throw std::invalid_argument("conarg grid needs at least 16 points");
    ConargResult out;
    for (int i = 0; i < grid; ++i) out.table.push_back(conarg_gap(lo + (hi - lo) * i / (grid - 1), opt));
    for (int i = 0; i + 1 < grid; ++i) {
        double g0 = out.table[i].gap, g1 = out.table[i + 1].gap;
        if (g0 == 0.0) {
            out.a_star = out.table[i].a;
            return out;
        }
        if ((g0 > 0) == (g1 > 0)) continue;
        double x0 = out.table[i].a, x1 = out.table[i + 1].a;
        double gx0 = g0, gm = g1;
        while (x1 - x0 > opt.tol) {
            double xm = 0.5 * (x0 + x1);
            gm = conarg_gap(xm, opt).gap;
            if ((gm > 0) == (gx0 > 0)) x0 = xm, gx0 = gm;
            else x1 = xm;
        }
        out.a_star = 0.5 * (x0 + x1);
        out.gap_at_star = conarg_gap(*out.a_star, opt).gap;
        return out;
    }
    return out;
}

}  // namespace cubus
