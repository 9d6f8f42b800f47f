#pragma once

#include <algorithm>
#include <limits>
#include <vector>

#include "types.hpp"

namespace cubus {

// Winding number of the closed polygon (last vertex joined to the first) around p.
inline int winding_number(const std::vector<cplx>& poly, cplx p)
{
    double total = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        cplx a = poly[i] - p, b = poly[(i + 1) % n] - p;
        if (a == 0.0 || b == 0.0) continue;
        total += std::arg(b / a);
    }
    return int(std::lround(total / two_pi));
}

inline double distance_to_segment(cplx p, cplx a, cplx b)
{
    cplx ab = b - a;
    double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(p - a);
    double t = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

inline double distance_to_polyline(cplx p, const std::vector<cplx>& line)
{
    if (line.empty()) return std::numeric_limits<double>::infinity();
    if (line.size() == 1) return std::abs(p - line[0]);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < line.size(); ++i)
        best = std::min(best, distance_to_segment(p, line[i], line[i + 1]));
    return best;
}

inline double distance_to_polygon(cplx p, std::vector<cplx> poly)
{
    if (!poly.empty()) poly.push_back(poly.front());
    return distance_to_polyline(p, poly);
}

}  // namespace cubus
