#pragma once

#include <algorithm>
#include <vector>

#include "types.hpp"

namespace cubus {

struct AberthOptions {
    int max_sweeps = 500;
    double tol = 1e-14;
};

// Simultaneous root refinement (Aberth-Ehrlich) for a degree-n polynomial known only
// through its Newton correction f/f'. Seeds sit on a slightly perturbed circle.
template <class Ratio>
std::vector<cplx> aberth(Ratio&& newton_ratio, std::size_t n, double radius,
                         const AberthOptions& opt = {})
{
    std::vector<cplx> z(n);
    for (std::size_t k = 0; k < n; ++k) {
        double ang = two_pi * (double(k) + 0.25) / double(n) + 0.4;
        double rad = radius * (1.0 + 0.03 * std::sin(3.7 * double(k) + 1.0));
        z[k] = std::polar(rad, ang);
    }
    std::vector<char> done(n, 0);
    for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
        bool all = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i]) continue;
            cplx r = newton_ratio(z[i]);
            if (!finite(r)) {
                all = false;
                continue;
            }
            cplx s = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) s += 1.0 / (z[i] - z[j]);
            cplx w = r / (1.0 - r * s);
            if (!finite(w)) w = r;
            z[i] -= w;
            if (std::abs(w) <= opt.tol * (1.0 + std::abs(z[i])))
                done[i] = 1;
            else
                all = false;
        }
        if (all) return z;
    }
    // Accept near-converged roots of multiple zeros, which converge only linearly.
    for (std::size_t i = 0; i < n; ++i) {
        cplx r = newton_ratio(z[i]);
        if (!finite(r) || std::abs(r) > 1e-6 * (1.0 + std::abs(z[i])))
            throw NumericError("root refinement did not converge after " +
                               std::to_string(opt.max_sweeps) + " sweeps");
    }
    return z;
}

// Roots of sum c[k] z^k (lowest degree first).
inline std::vector<cplx> polynomial_roots(const std::vector<cplx>& c, const AberthOptions& opt = {})
{
    std::size_t n = c.size() - 1;
    while (n > 0 && c[n] == 0.0) --n;
    if (n == 0) return {};
    auto horner = [&](cplx z) {
        cplx p = c[n], dp = 0.0;
        for (std::size_t k = n; k-- > 0;) {
            dp = dp * z + p;
            p = p * z + c[k];
        }
        return p / dp;
    };
    double bound = 0.0;
    for (std::size_t k = 0; k < n; ++k) bound = std::max(bound, std::abs(c[k] / c[n]));
    auto z = aberth(horner, n, 0.5 * (1.0 + bound), opt);
    for (auto& r : z)
        for (int it = 0; it < 3; ++it) {
            cplx s = horner(r);
            if (finite(s)) r -= s;
        }
    return z;
}

}  // namespace cubus
