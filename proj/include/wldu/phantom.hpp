#ifndef WLDU_PHANTOM_HPP
#define WLDU_PHANTOM_HPP

// Synthetic thorax-like test sequences: smooth background, a body outline,
// two lungs, a spine, and a pulsating "heart" (ellipse with a blood-pool
// cavity plus an attached vessel) whose radii and centre oscillate over one
// period per sequence. Additive pseudo-Gaussian noise on top.
//
// Everything here is computed with basic IEEE operations and std::mt19937_64,
// so a given spec produces the same samples on every platform.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "wldu/detail/arith.hpp"
#include "wldu/error.hpp"
#include "wldu/frame.hpp"

namespace wldu {

struct PhantomSpec {
    int width = 128;
    int height = 128;
    int frames = 10;
    double motion_amplitude = 4.0; ///< peak radial deformation, pixels
    double noise_sigma = 0.0;      ///< gray levels
    std::uint64_t seed = 1;
    int bit_depth = 12;
};

namespace detail {

struct Ellipse {
    double cx, cy, rx, ry;
    double value;
};

inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

/// Irwin-Hall approximation: sum of 12 uniforms minus 6 has unit variance.
inline double pseudo_gaussian(std::mt19937_64& rng)
{
    double s = 0.0;
    for (int i = 0; i < 12; ++i)
        s += uniform01(rng);
    return s - 6.0;
}

/// Coverage in [0, 1] of pixel (x, y) by an ellipse, with a ~1.5 px soft edge.
inline double coverage(const Ellipse& e, double x, double y)
{
    const double u = (x - e.cx) / e.rx;
    const double v = (y - e.cy) / e.ry;
    const double rho = std::sqrt(u * u + v * v);
    const double edge_px = (1.0 - rho) * std::min(e.rx, e.ry);
    return std::clamp(0.5 + edge_px / 1.5, 0.0, 1.0);
}

inline double blend(double under, const Ellipse& e, double x, double y)
{
    const double w = coverage(e, x, y);
    return under + w * (e.value - under);
}

struct PhantomGeometry {
    double jitter[8];
};

inline PhantomGeometry draw_geometry(std::uint64_t seed)
{
    std::mt19937_64 rng(seed ^ 0x9E3779B97F4A7C15ull);
    PhantomGeometry g{};
    for (double& j : g.jitter)
        j = 2.0 * uniform01(rng) - 1.0;
    return g;
}

} // namespace detail

inline void validate(const PhantomSpec& spec)
{
    if (spec.width < 32 || spec.height < 32)
        throw ConfigError("phantom: width and height must be at least 32");
    if (spec.frames < 1)
        throw ConfigError("phantom: at least one frame required");
    if (spec.noise_sigma < 0.0 || spec.motion_amplitude < 0.0)
        throw ConfigError("phantom: noise sigma and motion amplitude must be non-negative");
    if (spec.bit_depth < 8 || spec.bit_depth > 16)
        throw ConfigError("phantom: bit depth must be in [8, 16]");
}

/// Noise-free intensity of frame t before rounding.
inline double phantom_intensity(const PhantomSpec& spec, const detail::PhantomGeometry& g, int t, double x, double y)
{
    using detail::Ellipse;
    const double W = spec.width;
    const double H = spec.height;
    const double scale = static_cast<double>((1 << spec.bit_depth) - 1) / 4095.0;
    const double phase = 2.0 * detail::kPi * static_cast<double>(t) / static_cast<double>(spec.frames);
    const double beat = detail::det_sin(phase);
    const double sway = detail::det_cos(phase);
    const double a = spec.motion_amplitude;

    double v = 300.0 + 80.0 * (x / W) + 40.0 * (y / H);

    const Ellipse body{0.5 * W, 0.52 * H, 0.44 * W, 0.38 * H, 1100.0 + 60.0 * (x / W) - 40.0 * (y / H)};
    v = detail::blend(v, body, x, y);

    const Ellipse lung_l{0.30 * W + g.jitter[0], 0.45 * H, 0.13 * W, 0.20 * H, 520.0};
    const Ellipse lung_r{0.71 * W + g.jitter[1], 0.45 * H, 0.12 * W, 0.19 * H, 480.0};
    v = detail::blend(v, lung_l, x, y);
    v = detail::blend(v, lung_r, x, y);

    const Ellipse spine{0.5 * W, 0.82 * H + g.jitter[2], 0.07 * W, 0.055 * H, 3300.0};
    v = detail::blend(v, spine, x, y);

    const double hx = 0.52 * W + 2.0 * g.jitter[3] + 0.5 * a * beat;
    const double hy = 0.56 * H + 2.0 * g.jitter[4] + 0.3 * a * sway;
    const double hrx = 0.15 * W * (1.0 + 0.05 * g.jitter[5]) + a * beat;
    const double hry = 0.13 * H * (1.0 + 0.05 * g.jitter[6]) + a * beat;
    const Ellipse heart{hx, hy, hrx, hry, 1900.0};
    v = detail::blend(v, heart, x, y);

    const Ellipse cavity{hx - 0.02 * W, hy + 0.01 * H, 0.55 * hrx + 0.3 * a * beat, 0.5 * hry + 0.3 * a * beat, 2600.0};
    v = detail::blend(v, cavity, x, y);

    const Ellipse vessel{0.63 * W + g.jitter[7] + 0.5 * a * beat, 0.36 * H + 0.4 * a * sway, 0.045 * W, 0.045 * W,
                         2900.0};
    v = detail::blend(v, vessel, x, y);

    return v * scale;
}

/// The phantom without noise; handy as ground truth.
inline Sequence generate_clean_phantom(const PhantomSpec& spec)
{
    validate(spec);
    const auto geom = detail::draw_geometry(spec.seed);
    const Sample hi = (Sample{1} << spec.bit_depth) - 1;
    Sequence seq;
    for (int t = 0; t < spec.frames; ++t) {
        Frame f(spec.width, spec.height, spec.bit_depth);
        for (int y = 0; y < spec.height; ++y)
            for (int x = 0; x < spec.width; ++x) {
                const auto v = detail::round_half_away(phantom_intensity(spec, geom, t, x, y));
                f(x, y) = static_cast<Sample>(std::clamp<std::int64_t>(v, 0, hi));
            }
        seq.frames.push_back(std::move(f));
    }
    return seq;
}

inline Sequence generate_phantom(const PhantomSpec& spec)
{
    Sequence seq = generate_clean_phantom(spec);
    if (spec.noise_sigma == 0.0)
        return seq;
    std::mt19937_64 rng(spec.seed);
    const Sample hi = (Sample{1} << spec.bit_depth) - 1;
    for (Frame& f : seq.frames)
        for (Sample& s : f.samples()) {
            const double n = spec.noise_sigma * detail::pseudo_gaussian(rng);
            const auto v = static_cast<std::int64_t>(s) + detail::round_half_away(n);
            s = static_cast<Sample>(std::clamp<std::int64_t>(v, 0, hi));
        }
    return seq;
}

} // namespace wldu

#endif
