#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include "orbits.hpp"
#include "poly.hpp"

namespace cubus {

struct Window {
    double re_min = -2.0, re_max = 2.0, im_min = -2.0, im_max = 2.0;
};

struct ImageSpec {
    int width = 400;
    int height = 400;
    Window window{};
    std::string palette = "classic";

    void validate() const
    {
        if (width < 16 || width > 8192 || height < 16 || height > 8192)
            throw std::invalid_argument("image width and height must lie in [16, 8192]");
        if (!(window.re_max > window.re_min) || !(window.im_max > window.im_min))
            throw std::invalid_argument("image window is degenerate");
        if (palette != "classic" && palette != "gray") throw std::invalid_argument("unknown palette " + palette);
    }

    // pixel centers, rows top to bottom
    cplx point(int i, int j) const
    {
        return {window.re_min + (i + 0.5) / width * (window.re_max - window.re_min),
                window.im_max - (j + 0.5) / height * (window.im_max - window.im_min)};
    }

    std::pair<double, double> pixel(cplx z) const
    {
        return {(z.real() - window.re_min) / (window.re_max - window.re_min) * width - 0.5,
                (window.im_max - z.imag()) / (window.im_max - window.im_min) * height - 0.5};
    }
};

using Rgb = std::array<std::uint8_t, 3>;

struct Image {
    int width = 0, height = 0;
    std::vector<std::uint8_t> rgb;

    Image(int w, int h) : width(w), height(h), rgb(std::size_t(w) * h * 3, 0) {}

    void set(int i, int j, Rgb c)
    {
        if (i < 0 || j < 0 || i >= width || j >= height) return;
        auto* p = &rgb[(std::size_t(j) * width + i) * 3];
        p[0] = c[0], p[1] = c[1], p[2] = c[2];
    }

    Rgb get(int i, int j) const
    {
        const auto* p = &rgb[(std::size_t(j) * width + i) * 3];
        return {p[0], p[1], p[2]};
    }

    void write_ppm(const std::string& path) const
    {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot open " + path + " for writing");
        out << "P6\n" << width << ' ' << height << "\n255\n";
        out.write(reinterpret_cast<const char*>(rgb.data()), std::streamsize(rgb.size()));
        if (!out) throw IoError("write failed for " + path);
    }
};

// --threads, then CUBUS_THREADS, then the hardware count.
inline int resolve_threads(int requested)
{
    if (requested > 0) return requested;
    if (const char* env = std::getenv("CUBUS_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v <= 1024) return int(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// Rows are claimed from a shared counter; each row owns a disjoint slice of the buffer.
template <class RowFn>
void parallel_rows(int height, int threads, RowFn&& row)
{
    threads = std::clamp(threads, 1, height);
    std::atomic<int> next{0};
    auto work = [&] {
        for (int j = next++; j < height; j = next++) row(j);
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
}

inline Rgb escape_color(int iterations, int budget, const std::string& palette)
{
    double s = std::sqrt(double(iterations) / std::max(budget, 1));
    if (palette == "gray") {
        auto v = std::uint8_t(255 - std::lround(200 * s));
        return {v, v, v};
    }
    double t = std::fmod(0.08 * iterations, 1.0);
    return {std::uint8_t(40 + 215 * (1 - s) * t), std::uint8_t(60 + 150 * (1 - s)), std::uint8_t(120 + 135 * (1 - t))};
}

// dark tints keep the connectedness locus visually black
inline Rgb period_color(int qm, int qp)
{
    static const Rgb table[] = {{0, 0, 0}, {70, 10, 10}, {10, 60, 10}, {10, 10, 80}, {60, 50, 0}, {50, 0, 60}, {0, 50, 60}};
    if (qm <= 0 || qp <= 0) return {0, 0, 0};
    const Rgb& a = table[std::min(qm, 6)];
    const Rgb& b = table[std::min(qp, 6)];
    return {std::uint8_t((a[0] + b[0]) / 2), std::uint8_t((a[1] + b[1]) / 2), std::uint8_t((a[2] + b[2]) / 2)};
}

enum class ParamFamily { real_ab, symmetry_locus };

inline ParamFamily parse_param_family(const std::string& s)
{
    if (s == "real-AB") return ParamFamily::real_ab;
    if (s == "symmetry-locus") return ParamFamily::symmetry_locus;
    throw std::invalid_argument("unknown parameter family " + s + " (real-AB or symmetry-locus)");
}

struct ParamPixel {
    bool escaped = false;
    bool degenerate = false;  // A = 0
    int iterations = 0;       // escape time of the faster critical orbit
    int q_minus = 0, q_plus = 0;
};

// real-AB: (A, B) = (x, y) real with B = A D^2; symmetry-locus: A = x + iy, D = 0.
inline ParamPixel classify_parameter(ParamFamily fam, cplx point, int budget)
{
    ParamPixel out;
    cplx A, D;
    if (fam == ParamFamily::real_ab) {
        A = point.real();
        D = std::abs(A) > 0.0 ? principal_sqrt(cplx(point.imag()) / A) : 0.0;
    } else {
        A = point;
        D = 0.0;
    }
    if (!(std::abs(A) >= 1e-12)) {
        out.degenerate = true;
        return out;
    }
    CubicAD f(A, D);
    auto m = to_monic(f);
    const double R = (m.escape_radius() + std::abs(m.shift)) / std::abs(m.scale);
    CycleOptions opt;
    opt.budget = budget;
    opt.max_period = 12;
    opt.escape = R;
    int q[2] = {0, 0};
    for (int s = 0; s < 2; ++s) {
        auto c = attracting_cycle_of(f, s == 0 ? -1.0 : 1.0, opt);
        if (c.escaped) {
            out.iterations = out.escaped ? std::min(out.iterations, c.iterations) : c.iterations;
            out.escaped = true;
        } else if (c.found) {
            q[s] = c.period;
        }
    }
    if (!out.escaped) out.q_minus = q[0], out.q_plus = q[1];
    return out;
}

inline Image render_param(const ImageSpec& spec, ParamFamily fam, int budget, int threads)
{
    spec.validate();
    if (budget < 1) throw std::invalid_argument("budget must be positive");
    Image img(spec.width, spec.height);
    parallel_rows(spec.height, threads, [&](int j) {
        for (int i = 0; i < spec.width; ++i) {
            auto px = classify_parameter(fam, spec.point(i, j), budget);
            if (px.degenerate) img.set(i, j, {128, 128, 128});
            else if (px.escaped) img.set(i, j, escape_color(px.iterations, budget, spec.palette));
            else img.set(i, j, period_color(px.q_minus, px.q_plus));
        }
    });
    return img;
}

// Escape time in the monicized plane.
inline Image render_julia(const ImageSpec& spec, const MonicDepressed& f, int budget, int threads)
{
    spec.validate();
    if (budget < 1) throw std::invalid_argument("budget must be positive");
    Image img(spec.width, spec.height);
    const double R = f.escape_radius();
    parallel_rows(spec.height, threads, [&](int j) {
        for (int i = 0; i < spec.width; ++i) {
            cplx x = spec.point(i, j);
            int k = 0;
            while (k < budget && std::abs(x) <= R) x = f(x), ++k;
            img.set(i, j, k < budget ? escape_color(k, budget, spec.palette) : Rgb{0, 0, 0});
        }
    });
    return img;
}

inline void draw_polyline(Image& img, const ImageSpec& spec, const std::vector<cplx>& pts, Rgb color)
{
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        auto [x0, y0] = spec.pixel(pts[k]);
        auto [x1, y1] = spec.pixel(pts[k + 1]);
        double len = std::max(std::abs(x1 - x0), std::abs(y1 - y0));
        if (!std::isfinite(len) || len > 4.0 * (spec.width + spec.height)) continue;
        int n = std::max(1, int(std::ceil(len)));
        for (int s = 0; s <= n; ++s) {
            double t = double(s) / n;
            img.set(int(std::lround(x0 + t * (x1 - x0))), int(std::lround(y0 + t * (y1 - y0))), color);
        }
    }
}

inline Rgb overlay_color(std::size_t index)
{
    static const Rgb table[] = {{255, 60, 60}, {60, 220, 60}, {80, 140, 255}, {255, 200, 40}, {230, 80, 230}, {40, 220, 220}};
    return table[index % 6];
}

}  // namespace cubus
