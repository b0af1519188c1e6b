#ifndef WLDU_DENOISE_HPP
#define WLDU_DENOISE_HPP

// Update-step denoisers. Strength h = xi * sigma_n^2 where sigma_n^2 comes
// from the fast Laplacian-mask noise estimator applied to the frame being
// filtered, so the decoder can recompute it from the HP frame alone.
//
// Fixed-point format: every kernel weight / gain is an integer in Q16
// (1.0 == 65536). Per-pixel accumulation is int64; the final division rounds
// half away from zero. Floating point appears only where a per-frame or
// per-pixel parameter is derived, and only through basic IEEE operations and
// detail::det_exp, so outputs are bit-identical across platforms.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <string_view>
#include <vector>

#include "wldu/detail/arith.hpp"
#include "wldu/error.hpp"
#include "wldu/frame.hpp"

namespace wldu {

enum class FilterKind : std::uint8_t { identity = 0, zero = 1, gauss = 2, awf = 3, nlm = 4, gif = 5, bm3d = 6 };

inline constexpr std::array<FilterKind, 6> kImplementedFilters{FilterKind::identity, FilterKind::zero,
                                                               FilterKind::gauss,    FilterKind::awf,
                                                               FilterKind::nlm,      FilterKind::gif};

inline std::string_view to_string(FilterKind k)
{
    switch (k) {
    case FilterKind::identity: return "identity";
    case FilterKind::zero: return "zero";
    case FilterKind::gauss: return "gauss";
    case FilterKind::awf: return "awf";
    case FilterKind::nlm: return "nlm";
    case FilterKind::gif: return "gif";
    case FilterKind::bm3d: return "bm3d";
    }
    return "?";
}

inline FilterKind parse_filter_kind(std::string_view s)
{
    for (FilterKind k : kImplementedFilters)
        if (to_string(k) == s)
            return k;
    if (s == "bm3d")
        return FilterKind::bm3d;
    throw ConfigError("unknown filter kind '" + std::string(s) + "'");
}

struct FilterSpec {
    FilterKind kind = FilterKind::identity;
    int xi = 1;

    void validate() const
    {
        if (kind == FilterKind::bm3d)
            throw ConfigError("filter 'bm3d' is reserved but not implemented");
        if (static_cast<std::uint8_t>(kind) > static_cast<std::uint8_t>(FilterKind::bm3d))
            throw ConfigError("unknown filter kind");
        if (xi < 1 || xi > 65535)
            throw ConfigError("filter strength factor xi must be in [1, 65535]");
    }

    friend bool operator==(const FilterSpec&, const FilterSpec&) = default;
};

struct NoiseEstimate {
    double sigma2 = 0.0;
};

inline constexpr std::int64_t kQ16 = 65536;

/// Fast noise estimation: sigma = sqrt(pi/2) / (6 (W-2)(H-2)) * sum |I * M|
/// with M = [1 -2 1; -2 4 -2; 1 -2 1] over the valid region.
inline NoiseEstimate estimate_noise(const Frame& frame)
{
    const int W = frame.width();
    const int H = frame.height();
    if (W < 3 || H < 3)
        throw DimensionError("estimate_noise: frame must be at least 3x3");
    std::int64_t total = 0;
    for (int y = 1; y < H - 1; ++y) {
        const auto up = frame.row(y - 1);
        const auto mid = frame.row(y);
        const auto dn = frame.row(y + 1);
        for (int x = 1; x < W - 1; ++x) {
            const auto ux = static_cast<std::size_t>(x);
            const std::int64_t r = std::int64_t{up[ux - 1]} - 2 * up[ux] + up[ux + 1] - 2 * mid[ux - 1] + 4 * mid[ux] -
                                   2 * mid[ux + 1] + dn[ux - 1] - 2 * dn[ux] + dn[ux + 1];
            total += r < 0 ? -r : r;
        }
    }
    const double n = static_cast<double>(W - 2) * static_cast<double>(H - 2);
    const double sigma = std::sqrt(detail::kPi / 2.0) * static_cast<double>(total) / (6.0 * n);
    return NoiseEstimate{sigma * sigma};
}

namespace detail {

/// Q16 weight for exp(-t), t >= 0.
inline std::int64_t q16_exp_neg(double t)
{
    if (!(t < 40.0))
        return 0;
    return static_cast<std::int64_t>(std::floor(det_exp(-t) * static_cast<double>(kQ16) + 0.5));
}

/// Q16 value of num / den for 0 <= num <= den, den > 0.
inline std::int64_t q16_ratio(double num, double den)
{
    const auto q = static_cast<std::int64_t>(std::floor(num / den * static_cast<double>(kQ16)));
    return std::clamp<std::int64_t>(q, 0, kQ16);
}

/// Sum / squared sum of a (2r+1)^2 neighbourhood with reflective borders.
inline void box_moments(const Frame& f, int radius, std::vector<std::int64_t>& sum, std::vector<std::int64_t>& sq)
{
    const int W = f.width();
    const int H = f.height();
    std::vector<std::int64_t> hs(f.size()), hq(f.size());
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x) {
            std::int64_t s = 0, q = 0;
            for (int k = -radius; k <= radius; ++k) {
                const std::int64_t v = f(reflect(x + k, W), y);
                s += v;
                q += v * v;
            }
            hs[static_cast<std::size_t>(y) * W + x] = s;
            hq[static_cast<std::size_t>(y) * W + x] = q;
        }
    sum.assign(f.size(), 0);
    sq.assign(f.size(), 0);
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x) {
            std::int64_t s = 0, q = 0;
            for (int k = -radius; k <= radius; ++k) {
                const std::size_t i = static_cast<std::size_t>(reflect(y + k, H)) * W + x;
                s += hs[i];
                q += hq[i];
            }
            sum[static_cast<std::size_t>(y) * W + x] = s;
            sq[static_cast<std::size_t>(y) * W + x] = q;
        }
}

} // namespace detail

/// Q16 taps of a unit-sum Gaussian, index 0 is the centre; taps[k] == taps[-k].
/// Std sigma_g, radius max(1, ceil(3 sigma_g)). The centre tap absorbs the
/// quantisation remainder so the taps sum to exactly 65536.
inline std::vector<std::int64_t> gauss_taps(double sigma_g)
{
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma_g)));
    std::vector<double> w(static_cast<std::size_t>(radius) + 1);
    double total = 0.0;
    for (int k = 0; k <= radius; ++k) {
        w[static_cast<std::size_t>(k)] = detail::det_exp(-static_cast<double>(k) * k / (2.0 * sigma_g * sigma_g));
        total += (k == 0 ? 1.0 : 2.0) * w[static_cast<std::size_t>(k)];
    }
    std::vector<std::int64_t> q(static_cast<std::size_t>(radius) + 1);
    std::int64_t side = 0;
    for (int k = 1; k <= radius; ++k) {
        q[static_cast<std::size_t>(k)] =
            static_cast<std::int64_t>(std::floor(w[static_cast<std::size_t>(k)] / total * kQ16 + 0.5));
        side += q[static_cast<std::size_t>(k)];
    }
    q[0] = kQ16 - 2 * side;
    return q;
}

/// Separable Gaussian blur, kernel std sqrt(h) / 8, reflective borders.
inline Frame gauss_filter(const Frame& frame, double h)
{
    if (h < 0.0)
        throw ConfigError("gauss_filter: negative strength");
    if (h == 0.0)
        return frame;
    const auto taps = gauss_taps(std::sqrt(h) / 8.0);
    const int radius = static_cast<int>(taps.size()) - 1;
    const int W = frame.width();
    const int H = frame.height();

    // horizontal pass kept in Q16, vertical pass brings it to Q32
    std::vector<std::int64_t> tmp(frame.size());
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x) {
            std::int64_t acc = taps[0] * frame(x, y);
            for (int k = 1; k <= radius; ++k)
                acc += taps[static_cast<std::size_t>(k)] *
                       (frame(detail::reflect(x - k, W), y) + frame(detail::reflect(x + k, W), y));
            tmp[static_cast<std::size_t>(y) * W + x] = acc;
        }
    Frame out(W, H, frame.bit_depth());
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x) {
            std::int64_t acc = taps[0] * tmp[static_cast<std::size_t>(y) * W + x];
            for (int k = 1; k <= radius; ++k)
                acc += taps[static_cast<std::size_t>(k)] *
                       (tmp[static_cast<std::size_t>(detail::reflect(y - k, H)) * W + x] +
                        tmp[static_cast<std::size_t>(detail::reflect(y + k, H)) * W + x]);
            out(x, y) = static_cast<Sample>(detail::div_round(acc, kQ16 * kQ16));
        }
    return out;
}

/// Adaptive Wiener filter on a 3x3 window:
/// out = mu + max(v - h, 0) / max(v, 1) * (x - mu).
inline Frame awf_filter(const Frame& frame, double h)
{
    if (h < 0.0)
        throw ConfigError("awf_filter: negative strength");
    if (h == 0.0)
        return frame;
    std::vector<std::int64_t> sum, sq;
    detail::box_moments(frame, 1, sum, sq);
    Frame out(frame.width(), frame.height(), frame.bit_depth());
    auto o = out.samples();
    auto in = frame.samples();
    const double h81 = 81.0 * h;
    for (std::size_t i = 0; i < o.size(); ++i) {
        const std::int64_t s = sum[i];
        const std::int64_t var81 = 9 * sq[i] - s * s; // 81 * local variance
        const double num = std::max(static_cast<double>(var81) - h81, 0.0);
        const double den = std::max(static_cast<double>(var81), 81.0);
        const std::int64_t gain = detail::q16_ratio(num, den);
        // 9 * 65536 * out = 65536 * s + gain * (9x - s)
        const std::int64_t acc = kQ16 * s + gain * (9 * std::int64_t{in[i]} - s);
        o[i] = static_cast<Sample>(detail::div_round(acc, 9 * kQ16));
    }
    return out;
}

/// Non-local means: 5x5 search window, 3x3 patches,
/// w = exp(-max(D - 2 sigma2, 0) / h), D = mean squared patch difference.
/// The centre pixel gets the largest neighbour weight.
inline Frame nlm_filter(const Frame& frame, double h, double sigma2)
{
    if (h < 0.0)
        throw ConfigError("nlm_filter: negative strength");
    if (h == 0.0)
        return frame;
    const int W = frame.width();
    const int H = frame.height();
    // padded copy so patch reads need no reflection: 2 (search) + 1 (patch)
    const int pad = 3;
    const int PW = W + 2 * pad;
    std::vector<std::int64_t> p(static_cast<std::size_t>(PW) * (H + 2 * pad));
    for (int y = -pad; y < H + pad; ++y)
        for (int x = -pad; x < W + pad; ++x)
            p[static_cast<std::size_t>(y + pad) * PW + (x + pad)] = frame.reflected(x, y);
    auto at = [&](int x, int y) { return p[static_cast<std::size_t>(y + pad) * PW + (x + pad)]; };

    Frame out(W, H, frame.bit_depth());
    const double two_sigma2 = 2.0 * sigma2;
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x) {
            std::int64_t wsum = 0;
            std::int64_t acc = 0;
            std::int64_t wmax = 0;
            for (int dy = -2; dy <= 2; ++dy)
                for (int dx = -2; dx <= 2; ++dx) {
                    if (dx == 0 && dy == 0)
                        continue;
                    std::int64_t d9 = 0;
                    for (int py = -1; py <= 1; ++py)
                        for (int px = -1; px <= 1; ++px) {
                            const std::int64_t diff = at(x + px, y + py) - at(x + dx + px, y + dy + py);
                            d9 += diff * diff;
                        }
                    const double t = std::max(static_cast<double>(d9) / 9.0 - two_sigma2, 0.0) / h;
                    const std::int64_t w = detail::q16_exp_neg(t);
                    wsum += w;
                    acc += w * at(x + dx, y + dy);
                    wmax = std::max(wmax, w);
                }
            wsum += wmax;
            acc += wmax * at(x, y);
            out(x, y) = wsum == 0 ? frame(x, y) : static_cast<Sample>(detail::div_round(acc, wsum));
        }
    return out;
}

/// Self-guided filter with 5x5 windows: a_k = v_k / (v_k + h),
/// b_k = (1 - a_k) mu_k, output = mean over covering windows of a_k x + b_k.
inline Frame gif_filter(const Frame& frame, double h)
{
    if (h < 0.0)
        throw ConfigError("gif_filter: negative strength");
    if (h == 0.0)
        return frame;
    const int W = frame.width();
    const int H = frame.height();
    std::vector<std::int64_t> sum, sq;
    detail::box_moments(frame, 2, sum, sq);
    // per-window a (Q16) and b numerator B = (65536 - a) * S, where b = B / (25 * 65536)
    std::vector<std::int64_t> a(frame.size()), b(frame.size());
    const double h625 = 625.0 * h;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::int64_t var625 = 25 * sq[i] - sum[i] * sum[i];
        a[i] = detail::q16_ratio(static_cast<double>(var625), static_cast<double>(var625) + h625);
        b[i] = (kQ16 - a[i]) * sum[i];
    }
    Frame out(W, H, frame.bit_depth());
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x) {
            std::int64_t asum = 0, bsum = 0;
            for (int ky = -2; ky <= 2; ++ky)
                for (int kx = -2; kx <= 2; ++kx) {
                    const std::size_t k =
                        static_cast<std::size_t>(detail::reflect(y + ky, H)) * W + detail::reflect(x + kx, W);
                    asum += a[k];
                    bsum += b[k];
                }
            // out = (25 * asum * x + bsum) / (625 * 65536)
            const std::int64_t acc = 25 * asum * frame(x, y) + bsum;
            out(x, y) = static_cast<Sample>(detail::div_round(acc, 625 * kQ16));
        }
    return out;
}

/// Filter strength for a frame: xi * estimated noise variance.
inline double filter_strength(const FilterSpec& spec, const NoiseEstimate& noise)
{
    return static_cast<double>(spec.xi) * noise.sigma2;
}

/// DN(frame). Identity returns the input bit-exactly, zero returns zeros.
inline Frame denoise(const Frame& frame, const FilterSpec& spec)
{
    spec.validate();
    switch (spec.kind) {
    case FilterKind::identity: return frame;
    case FilterKind::zero: return Frame(frame.width(), frame.height(), frame.bit_depth());
    default: break;
    }
    if (frame.width() < 3 || frame.height() < 3)
        return frame;
    const NoiseEstimate noise = estimate_noise(frame);
    const double h = filter_strength(spec, noise);
    switch (spec.kind) {
    case FilterKind::gauss: return gauss_filter(frame, h);
    case FilterKind::awf: return awf_filter(frame, h);
    case FilterKind::nlm: return nlm_filter(frame, h, noise.sigma2);
    case FilterKind::gif: return gif_filter(frame, h);
    default: break;
    }
    throw ConfigError("denoise: unsupported filter kind");
}

} // namespace wldu

#endif
