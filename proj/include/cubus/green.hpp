#pragma once

#include "poly.hpp"

namespace cubus {

struct EscapeResult {
    bool escaped = false;
    int iterations = 0;
    double green = 0.0;
};

struct BoettcherValue {
    cplx logB{};
    bool valid = false;
};

struct LogBoettcher {
    cplx value{};
    cplx derivative{};  // d/dz of log B
};

// log B and its derivative for |x| > 2 R_esc, where every factor x_{k+1}/x_k^d stays
// near 1 and principal logarithms are safe.
inline LogBoettcher log_boettcher_far(const MonicDepressed& f, cplx x)
{
    const double d = f.degree;
    cplx value = std::log(x);
    cplx ratio = 1.0 / x;  // d^-k x_k' / x_k
    double w = 1.0;
    for (int k = 0; k < 200; ++k) {
        cplx xd1 = f.degree == 2 ? x : x * x;  // x^(d-1)
        cplx u = f.p / xd1 + f.q / (xd1 * x);
        cplx v = f.p / (d * xd1);
        w /= d;
        value += w * std::log(1.0 + u);
        cplx next_ratio = ratio * (1.0 + v) / (1.0 + u);
        x = x * xd1 * (1.0 + u);
        ratio = next_ratio;
        if (std::abs(u) < 1e-18) break;
    }
    return {value, ratio};
}

// Solve log B(x) = L for x with Re L comfortably above log(2 R_esc).
inline cplx inverse_boettcher_far(const MonicDepressed& f, cplx L)
{
    cplx x = std::exp(L);
    for (int it = 0; it < 60; ++it) {
        auto lb = log_boettcher_far(f, x);
        cplx r = lb.value - L;
        // keep the imaginary residual on the branch nearest zero
        r = cplx(r.real(), std::remainder(r.imag(), two_pi));
        cplx step = r / lb.derivative;
        x -= step;
        if (std::abs(step) <= 1e-15 * std::abs(x)) break;
    }
    return x;
}

template <Family F>
EscapeResult green(const F& fam, cplx z, int budget)
{
    if (budget < 1) throw std::invalid_argument("budget must be >= 1");
    auto f = to_monic(fam);
    const double R = f.escape_radius();
    cplx x = f.to_plane(z);
    EscapeResult out;
    int n = 0;
    while (std::abs(x) <= R) {
        if (n >= budget) return out;
        x = f(x);
        ++n;
    }
    out.escaped = true;
    out.iterations = n;
    int extra = 0;
    while (std::abs(x) <= 2.0 * R) {
        x = f(x);
        ++extra;
    }
    out.green = log_boettcher_far(f, x).value.real() * std::pow(double(f.degree), -(n + extra));
    return out;
}

// Principal-branch series for log B; exact modulo 2 pi i / d^k ambiguities near K.
template <Family F>
BoettcherValue boettcher(const F& fam, cplx z, int budget = 1000)
{
    auto f = to_monic(fam);
    const double R = f.escape_radius();
    const double d = f.degree;
    cplx x = f.to_plane(z);
    cplx value = std::log(x);
    double w = 1.0;
    int n = 0;
    while (std::abs(x) <= 2.0 * R) {
        if (n++ >= budget) return {};
        cplx xd = f.degree == 2 ? x * x : x * x * x;
        cplx nx = f(x);
        if (xd == 0.0 || nx == 0.0) return {};
        w /= d;
        value += w * std::log(nx / xd);
        x = nx;
    }
    auto far = log_boettcher_far(f, x);
    value += w * (far.value - std::log(x));
    if (!finite(value)) return {};
    return {value, true};
}

template <Family F>
bool is_connected(const F& fam, int budget = 1000)
{
    if (budget < 1) throw std::invalid_argument("budget must be >= 1");
    auto f = to_monic(fam);
    const double R = f.escape_radius();
    for (cplx x : f.critical_points()) {
        for (int k = 0; k < budget; ++k) {
            if (std::abs(x) > R) return false;
            x = f(x);
        }
        if (std::abs(x) > R) return false;
    }
    return true;
}

}  // namespace cubus
