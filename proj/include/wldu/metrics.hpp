#ifndef WLDU_METRICS_HPP
#define WLDU_METRICS_HPP

// Lowpass-quality metrics. An LP frame stands in for both frames of its
// pair, so it is compared against the odd frame directly and against the
// even frame after motion compensation with the pair's own field:
//
//   sigma_e^2 = 1/2 (MSE(odd, LP) + MSE(even, MC(LP)))
//   PSNR_LP   = 10 log10(A_max^2 / sigma_e^2),  A_max = 2^bit_depth - 1
//   SSIM_LP   = 1/2 (SSIM(odd, LP) + SSIM(even, MC(LP)))

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <vector>

#include "wldu/detail/arith.hpp"
#include "wldu/error.hpp"
#include "wldu/frame.hpp"
#include "wldu/motion.hpp"

namespace wldu {

/// Sentinel for a zero error signal.
inline constexpr double kInfinitePsnr = std::numeric_limits<double>::infinity();

inline double mse(const Frame& a, const Frame& b)
{
    require_same_shape(a, b, "mse");
    std::int64_t acc = 0;
    auto sa = a.samples();
    auto sb = b.samples();
    for (std::size_t i = 0; i < sa.size(); ++i) {
        const std::int64_t d = std::int64_t{sa[i]} - sb[i];
        acc += d * d;
    }
    return static_cast<double>(acc) / static_cast<double>(sa.size());
}

/// PSNR in dB for an error variance; +infinity when the error is zero.
inline double psnr_from_error(double error_variance, int bit_depth)
{
    if (error_variance <= 0.0)
        return kInfinitePsnr;
    const double amax = static_cast<double>((std::int64_t{1} << bit_depth) - 1);
    return 10.0 * std::log10(amax * amax / error_variance);
}

inline double lp_error_variance(const Frame& odd, const Frame& even, const Frame& lp, const MotionField& field)
{
    require_same_shape(odd, lp, "psnr_lp");
    require_same_shape(even, lp, "psnr_lp");
    return 0.5 * (mse(odd, lp) + mse(even, warp(lp, field)));
}

inline double psnr_lp(const Frame& odd, const Frame& even, const Frame& lp, const MotionField& field, int bit_depth)
{
    return psnr_from_error(lp_error_variance(odd, even, lp, field), bit_depth);
}

namespace detail {

inline std::array<double, 11> ssim_window()
{
    std::array<double, 11> w{};
    double total = 0.0;
    for (int k = -5; k <= 5; ++k) {
        w[static_cast<std::size_t>(k + 5)] = det_exp(-static_cast<double>(k * k) / (2.0 * 1.5 * 1.5));
        total += w[static_cast<std::size_t>(k + 5)];
    }
    for (double& v : w)
        v /= total;
    return w;
}

/// 11x11 separable Gaussian weighted mean over every valid window position.
inline std::vector<double> windowed_mean(const std::vector<double>& plane, int W, int H,
                                         const std::array<double, 11>& w)
{
    const int OW = W - 10;
    const int OH = H - 10;
    std::vector<double> tmp(static_cast<std::size_t>(OW) * H);
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < OW; ++x) {
            double s = 0.0;
            for (int k = 0; k < 11; ++k)
                s += w[static_cast<std::size_t>(k)] * plane[static_cast<std::size_t>(y) * W + x + k];
            tmp[static_cast<std::size_t>(y) * OW + x] = s;
        }
    std::vector<double> out(static_cast<std::size_t>(OW) * OH);
    for (int y = 0; y < OH; ++y)
        for (int x = 0; x < OW; ++x) {
            double s = 0.0;
            for (int k = 0; k < 11; ++k)
                s += w[static_cast<std::size_t>(k)] * tmp[static_cast<std::size_t>(y + k) * OW + x];
            out[static_cast<std::size_t>(y) * OW + x] = s;
        }
    return out;
}

} // namespace detail

/// Mean SSIM over all valid 11x11 Gaussian (sigma 1.5) windows,
/// K1 = 0.01, K2 = 0.03, L = 2^bit_depth - 1.
inline double ssim(const Frame& a, const Frame& b, int bit_depth)
{
    require_same_shape(a, b, "ssim");
    const int W = a.width();
    const int H = a.height();
    if (W < 11 || H < 11)
        throw DimensionError("ssim: frames must be at least 11x11");
    const double L = static_cast<double>((std::int64_t{1} << bit_depth) - 1);
    const double c1 = (0.01 * L) * (0.01 * L);
    const double c2 = (0.03 * L) * (0.03 * L);
    const auto w = detail::ssim_window();

    const std::size_t n = a.size();
    std::vector<double> pa(n), pb(n), paa(n), pbb(n), pab(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double va = a.samples()[i];
        const double vb = b.samples()[i];
        pa[i] = va;
        pb[i] = vb;
        paa[i] = va * va;
        pbb[i] = vb * vb;
        pab[i] = va * vb;
    }
    const auto ma = detail::windowed_mean(pa, W, H, w);
    const auto mb = detail::windowed_mean(pb, W, H, w);
    const auto maa = detail::windowed_mean(paa, W, H, w);
    const auto mbb = detail::windowed_mean(pbb, W, H, w);
    const auto mab = detail::windowed_mean(pab, W, H, w);

    double total = 0.0;
    for (std::size_t i = 0; i < ma.size(); ++i) {
        const double mu_ab = ma[i] * mb[i];
        const double va = maa[i] - ma[i] * ma[i];
        const double vb = mbb[i] - mb[i] * mb[i];
        const double cov = mab[i] - mu_ab;
        const double num = (2.0 * mu_ab + c1) * (2.0 * cov + c2);
        const double den = (ma[i] * ma[i] + mb[i] * mb[i] + c1) * (va + vb + c2);
        total += num / den;
    }
    return total / static_cast<double>(ma.size());
}

inline double ssim_lp(const Frame& odd, const Frame& even, const Frame& lp, const MotionField& field, int bit_depth)
{
    require_same_shape(odd, lp, "ssim_lp");
    require_same_shape(even, lp, "ssim_lp");
    return 0.5 * (ssim(odd, lp, bit_depth) + ssim(even, warp(lp, field), bit_depth));
}

/// Zeroth-order empirical entropy of the sample values, bits per sample.
inline double sample_entropy(const Frame& frame)
{
    if (frame.empty())
        return 0.0;
    std::map<Sample, std::size_t> hist;
    for (Sample s : frame.samples())
        ++hist[s];
    const double n = static_cast<double>(frame.size());
    double h = 0.0;
    for (const auto& [value, count] : hist) {
        const double p = static_cast<double>(count) / n;
        h -= p * std::log2(p);
    }
    return h == 0.0 ? 0.0 : h;
}

} // namespace wldu

#endif
