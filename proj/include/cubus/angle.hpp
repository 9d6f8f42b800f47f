#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "types.hpp"

namespace cubus {

// Exact rational angle num/den in [0, 1), always reduced.
struct Angle {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    Angle() = default;
    Angle(std::uint64_t n, std::uint64_t d)
    {
        if (d == 0) throw std::invalid_argument("angle denominator must be positive");
        n %= d;
        std::uint64_t g = std::gcd(n, d);
        num = n / g;
        den = d / g;
    }

    double value() const { return double(num) / double(den); }

    Angle times(std::uint64_t d) const
    {
        unsigned __int128 n = (unsigned __int128)num * d % den;
        return Angle(std::uint64_t(n), den);
    }

    Angle times_pow(std::uint64_t d, int m) const
    {
        Angle a = *this;
        for (int i = 0; i < m; ++i) a = a.times(d);
        return a;
    }

    std::string str() const { return num == 0 ? "0" : std::to_string(num) + "/" + std::to_string(den); }

    friend bool operator==(const Angle& a, const Angle& b) { return a.num == b.num && a.den == b.den; }
    friend bool operator<(const Angle& a, const Angle& b)
    {
        return (unsigned __int128)a.num * b.den < (unsigned __int128)b.num * a.den;
    }
};

// Combinatorial rotation number p/q in lowest terms.
struct Rotation {
    int p = 0;
    int q = 1;

    Rotation() = default;
    Rotation(int p_, int q_)
    {
        if (q_ <= 0 || p_ < 0 || p_ >= q_)
            throw std::invalid_argument("rotation number must satisfy 0 <= p < q");
        int g = std::gcd(p_, q_);
        p = p_ / g;
        q = q_ / g;
        if (p == 0) q = 1;
    }

    double value() const { return double(p) / double(q); }
    std::string str() const { return std::to_string(p) + "/" + std::to_string(q); }
    friend bool operator==(const Rotation&, const Rotation&) = default;
};

inline Rotation parse_rotation(const std::string& s)
{
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            int v = std::stoi(s);
            if (v != 0) throw std::invalid_argument("rotation must be p/q with p < q");
            return {};
        }
        return Rotation(std::stoi(s.substr(0, slash)), std::stoi(s.substr(slash + 1)));
    } catch (const std::logic_error&) {
        throw std::invalid_argument("cannot parse rotation '" + s + "'");
    }
}

inline Angle parse_angle(const std::string& s)
{
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            auto n = std::stoull(s);
            if (n != 0) throw std::invalid_argument("angle must lie in [0,1)");
            return {};
        }
        auto n = std::stoull(s.substr(0, slash));
        auto d = std::stoull(s.substr(slash + 1));
        if (d == 0 || n >= d) throw std::invalid_argument("angle must lie in [0,1)");
        return Angle(n, d);
    } catch (const std::logic_error&) {
        throw std::invalid_argument("cannot parse angle '" + s + "'");
    }
}

// Forward orbit of theta under multiplication by d, up to the first repeat.
inline std::vector<Angle> angle_cycle(const Angle& theta, int d)
{
    std::vector<Angle> out{theta};
    Angle a = theta;
    for (;;) {
        a = a.times(std::uint64_t(d));
        if (std::find(out.begin(), out.end(), a) != out.end()) break;
        out.push_back(a);
        if (out.size() > 4096) throw std::invalid_argument("angle orbit too long");
    }
    return out;
}

// Exact period of theta under multiplication by d (0 when strictly preperiodic).
inline int angle_period(const Angle& theta, int d)
{
    Angle a = theta;
    for (int k = 1; k <= 64; ++k) {
        a = a.times(std::uint64_t(d));
        if (a == theta) return k;
    }
    return 0;
}

inline std::uint64_t ipow(std::uint64_t b, int e)
{
    std::uint64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

// All angles of exact period q under multiplication by d, sorted.
inline std::vector<Angle> periodic_angles(int d, int q)
{
    std::uint64_t den = ipow(std::uint64_t(d), q) - 1;
    std::vector<Angle> out;
    for (std::uint64_t k = 0; k < den; ++k) {
        Angle a(k, den);
        if (angle_period(a, d) == q) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline Rotation rotation_number(std::vector<Angle> angles, int d)
{
    if (angles.empty()) throw std::invalid_argument("empty angle set");
    std::sort(angles.begin(), angles.end());
    angles.erase(std::unique(angles.begin(), angles.end()), angles.end());
    const int n = int(angles.size());
    int shift = -1;
    for (int i = 0; i < n; ++i) {
        Angle img = angles[i].times(std::uint64_t(d));
        auto it = std::find(angles.begin(), angles.end(), img);
        if (it == angles.end()) throw std::invalid_argument("angle set is not invariant");
        int k = ((int(it - angles.begin()) - i) % n + n) % n;
        if (shift < 0) shift = k;
        else if (shift != k) throw std::invalid_argument("angle map does not preserve cyclic order");
    }
    return Rotation(shift, n);
}

}  // namespace cubus
