#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cubus {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

// Raised when an iteration, root search or continuation does not converge.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// sqrt with a signed-zero-free imaginary part, so real negatives map to +i*r.
inline cplx principal_sqrt(cplx z)
{
    if (z.imag() == 0.0) z = cplx(z.real(), 0.0);
    return std::sqrt(z);
}

inline double frac(double x) { return x - std::floor(x); }

}  // namespace cubus
