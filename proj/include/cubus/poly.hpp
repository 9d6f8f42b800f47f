#pragma once

#include <algorithm>
#include <concepts>
#include <utility>
#include <vector>

#include "types.hpp"

namespace cubus {

// f_c(z) = z^2 + c
struct QuadParam {
    cplx c{};
};

// P(w) = A (w^3 - 3w) + D, critical points -1 and +1.
struct CubicAD {
    cplx A{1.0};
    cplx D{};

    CubicAD() = default;
    CubicAD(cplx a, cplx d) : A(a), D(d)
    {
        if (!(std::abs(A) >= 1e-12)) throw std::invalid_argument("CubicAD requires A != 0");
    }
};

// F(z) = z^3 - 3a^2 z + b, critical points +-a.
struct NormalFormAB {
    cplx a{};
    cplx b{};
};

// Q(z) = eps + z + a z^2 + z^3
struct ParabolicParams {
    cplx a{1.0};
    double eps = 0.0;

    ParabolicParams() = default;
    ParabolicParams(cplx a_, double e) : a(a_), eps(e)
    {
        if (!(eps >= 0.0)) throw std::invalid_argument("ParabolicParams requires eps >= 0");
    }
};

// M(x) = x^d + p x + q, together with the affine chart x = scale*z + shift that
// conjugates the originating family to M.
struct MonicDepressed {
    int degree = 3;
    cplx p{};
    cplx q{};
    cplx scale{1.0};
    cplx shift{};

    cplx operator()(cplx x) const
    {
        return degree == 2 ? x * x + p * x + q : x * x * x + p * x + q;
    }
    cplx derivative(cplx x) const { return degree == 2 ? 2.0 * x + p : 3.0 * x * x + p; }
    cplx to_plane(cplx z) const { return scale * z + shift; }
    cplx from_plane(cplx x) const { return (x - shift) / scale; }
    double escape_radius() const { return std::max(2.0, 1.0 + std::abs(p) + std::abs(q)); }
    std::vector<cplx> critical_points() const
    {
        if (degree == 2) return {-0.5 * p};
        cplx r = principal_sqrt(-p / 3.0);
        return {-r, r};
    }
};

inline cplx eval(const QuadParam& f, cplx z) { return z * z + f.c; }
inline cplx derivative(const QuadParam&, cplx z) { return 2.0 * z; }
inline int degree(const QuadParam&) { return 2; }

inline cplx eval(const CubicAD& f, cplx w) { return f.A * (w * w * w - 3.0 * w) + f.D; }
inline cplx derivative(const CubicAD& f, cplx w) { return 3.0 * f.A * (w * w - 1.0); }
inline int degree(const CubicAD&) { return 3; }

inline cplx eval(const NormalFormAB& f, cplx z) { return z * z * z - 3.0 * f.a * f.a * z + f.b; }
inline cplx derivative(const NormalFormAB& f, cplx z) { return 3.0 * (z * z - f.a * f.a); }
inline int degree(const NormalFormAB&) { return 3; }

inline cplx eval(const ParabolicParams& f, cplx z) { return f.eps + z * (1.0 + z * (f.a + z)); }
inline cplx derivative(const ParabolicParams& f, cplx z) { return 1.0 + z * (2.0 * f.a + 3.0 * z); }
inline int degree(const ParabolicParams&) { return 3; }

inline cplx eval(const MonicDepressed& f, cplx z) { return f(z); }
inline cplx derivative(const MonicDepressed& f, cplx z) { return f.derivative(z); }
inline int degree(const MonicDepressed& f) { return f.degree; }

inline MonicDepressed to_monic(const QuadParam& f) { return {2, 0.0, f.c, 1.0, 0.0}; }

inline MonicDepressed to_monic(const CubicAD& f)
{
    if (!(std::abs(f.A) >= 1e-12)) throw std::invalid_argument("to_monic requires A != 0");
    cplx s = principal_sqrt(f.A);
    return {3, -3.0 * f.A, f.D * s, s, 0.0};
}

inline MonicDepressed to_monic(const NormalFormAB& f) { return {3, -3.0 * f.a * f.a, f.b, 1.0, 0.0}; }

// x = z + a/3 turns Q into x^3 + (1 - a^2/3) x + 2a^3/27 + eps.
inline MonicDepressed to_monic(const ParabolicParams& f)
{
    cplx a = f.a;
    return {3, 1.0 - a * a / 3.0, 2.0 * a * a * a / 27.0 + f.eps, 1.0, a / 3.0};
}

// a monic map is its own family: points are read in its own plane
inline MonicDepressed to_monic(const MonicDepressed& f) { return {f.degree, f.p, f.q, 1.0, 0.0}; }

template <class F>
concept Family = requires(const F& f, cplx z) {
    { eval(f, z) } -> std::convertible_to<cplx>;
    { derivative(f, z) } -> std::convertible_to<cplx>;
    { degree(f) } -> std::convertible_to<int>;
    { to_monic(f) } -> std::convertible_to<MonicDepressed>;
};

// (A, D) -> (A, B) with B = A D^2.
inline std::pair<cplx, cplx> ad_to_ab(const CubicAD& f) { return {f.A, f.A * f.D * f.D}; }

// Displacement form z^3 + p z + q of the parabolic family, with F(z + a/3) = Q(z) - z.
// The translation conjugate of Q is F(x) + x, available through conjugate().
struct DisplacementForm {
    cplx p{};
    cplx q{};
    cplx shift{};

    cplx operator()(cplx z) const { return z * z * z + p * z + q; }
    MonicDepressed conjugate() const { return {3, p + 1.0, q, 1.0, shift}; }
};

inline DisplacementForm depress_parabolic(const ParabolicParams& f)
{
    cplx a = f.a;
    return {-a * a / 3.0, 2.0 * a * a * a / 27.0 + f.eps, a / 3.0};
}

struct CriticalOrbit {
    std::vector<cplx> points;
    bool escaped = false;
};

namespace detail {
template <class F>
CriticalOrbit orbit_from(const F& f, cplx z, int n)
{
    if (n < 1) throw std::invalid_argument("critical_orbit requires n >= 1");
    auto m = to_monic(f);
    double R = m.escape_radius();
    CriticalOrbit out;
    for (int k = 0; k < n; ++k) {
        out.points.push_back(z);
        if (std::abs(m.to_plane(z)) > R) {
            out.escaped = true;
            break;
        }
        z = eval(f, z);
    }
    return out;
}
}  // namespace detail

inline CriticalOrbit critical_orbit(const CubicAD& f, int which, int n)
{
    if (which != -1 && which != 1) throw std::invalid_argument("cubic critical label must be -1 or +1");
    return detail::orbit_from(f, cplx(which), n);
}

inline CriticalOrbit critical_orbit(const QuadParam& f, int which, int n)
{
    if (which != 0) throw std::invalid_argument("quadratic critical label must be 0");
    return detail::orbit_from(f, 0.0, n);
}

// Critical points in the family's own coordinates.
inline std::vector<cplx> critical_points(const QuadParam&) { return {0.0}; }
inline std::vector<cplx> critical_points(const CubicAD&) { return {-1.0, 1.0}; }
inline std::vector<cplx> critical_points(const NormalFormAB& f) { return {-f.a, f.a}; }
inline std::vector<cplx> critical_points(const ParabolicParams& f)
{
    cplx r = principal_sqrt(f.a * f.a - 3.0);
    return {(-f.a - r) / 3.0, (-f.a + r) / 3.0};
}
inline std::vector<cplx> critical_points(const MonicDepressed& f) { return f.critical_points(); }

}  // namespace cubus
