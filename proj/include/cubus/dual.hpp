#pragma once

#include <array>

#include "types.hpp"

namespace cubus {

// Forward-mode jet: value plus N complex partial derivatives.
template <std::size_t N>
struct Dual {
    cplx v{};
    std::array<cplx, N> d{};

    Dual() = default;
    Dual(cplx value) : v(value) {}

    static Dual var(cplx value, std::size_t index)
    {
        Dual r(value);
        r.d[index] = 1.0;
        return r;
    }

    Dual& operator+=(const Dual& o)
    {
        v += o.v;
        for (std::size_t i = 0; i < N; ++i) d[i] += o.d[i];
        return *this;
    }
    Dual& operator-=(const Dual& o)
    {
        v -= o.v;
        for (std::size_t i = 0; i < N; ++i) d[i] -= o.d[i];
        return *this;
    }
    Dual& operator*=(const Dual& o)
    {
        for (std::size_t i = 0; i < N; ++i) d[i] = d[i] * o.v + v * o.d[i];
        v *= o.v;
        return *this;
    }
};

template <std::size_t N> Dual<N> operator+(Dual<N> a, const Dual<N>& b) { return a += b; }
template <std::size_t N> Dual<N> operator-(Dual<N> a, const Dual<N>& b) { return a -= b; }
template <std::size_t N> Dual<N> operator*(Dual<N> a, const Dual<N>& b) { return a *= b; }
template <std::size_t N> Dual<N> operator+(Dual<N> a, cplx b) { a.v += b; return a; }
template <std::size_t N> Dual<N> operator-(Dual<N> a, cplx b) { a.v -= b; return a; }
template <std::size_t N> Dual<N> operator*(Dual<N> a, cplx b)
{
    a.v *= b;
    for (auto& x : a.d) x *= b;
    return a;
}
template <std::size_t N> Dual<N> operator*(cplx b, Dual<N> a) { return a * b; }

}  // namespace cubus
