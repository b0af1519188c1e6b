#ifndef WLDU_DWT53_HPP
#define WLDU_DWT53_HPP

// Reversible LeGall 5/3 integer wavelet, Mallat layout, whole-sample
// symmetric extension:
//
//   d[i] = x[2i+1] - floor((x[2i] + x[2i+2]) / 2)
//   s[i] = x[2i]   + floor((d[i-1] + d[i] + 2) / 4)

#include <cstdint>
#include <string>
#include <vector>

#include "wldu/error.hpp"
#include "wldu/frame.hpp"

namespace wldu {

/// Wavelet coefficients in Mallat layout: after `levels` steps the LL band
/// occupies the top-left corner. levels == 0 means untransformed samples.
struct CoefficientPlanes {
    int width = 0;
    int height = 0;
    int levels = 0;
    std::vector<std::int32_t> coeffs;

    std::int32_t& at(int x, int y) { return coeffs[static_cast<std::size_t>(y) * width + x]; }
    std::int32_t at(int x, int y) const { return coeffs[static_cast<std::size_t>(y) * width + x]; }

    friend bool operator==(const CoefficientPlanes&, const CoefficientPlanes&) = default;
};

struct SubbandRect {
    int x0, y0, x1, y1; // half-open
    std::size_t count() const noexcept
    {
        return static_cast<std::size_t>(x1 - x0) * static_cast<std::size_t>(y1 - y0);
    }
};

/// Subband rectangles in coding order: LL, then HL/LH/HH from the coarsest
/// level to the finest.
inline std::vector<SubbandRect> subband_layout(int width, int height, int levels)
{
    std::vector<int> w{width}, h{height};
    for (int l = 1; l <= levels; ++l) {
        w.push_back((w.back() + 1) / 2);
        h.push_back((h.back() + 1) / 2);
    }
    std::vector<SubbandRect> out;
    out.push_back({0, 0, w[static_cast<std::size_t>(levels)], h[static_cast<std::size_t>(levels)]});
    for (int l = levels; l >= 1; --l) {
        const auto L = static_cast<std::size_t>(l);
        out.push_back({w[L], 0, w[L - 1], h[L]});        // HL
        out.push_back({0, h[L], w[L], h[L - 1]});        // LH
        out.push_back({w[L], h[L], w[L - 1], h[L - 1]}); // HH
    }
    return out;
}

/// Largest level count <= max_levels such that both axes have at least
/// 2^levels samples.
inline int max_dwt_levels(int width, int height, int max_levels)
{
    int l = max_levels;
    while (l > 0 && (width < (1 << l) || height < (1 << l)))
        --l;
    return l;
}

namespace detail {

/// In-place 1-D forward 5/3 on n >= 2 samples with stride; output is
/// lows then highs. `tmp` must hold n values.
inline void lift53_forward(std::int32_t* x, int n, int stride, std::vector<std::int32_t>& tmp)
{
    const int nl = (n + 1) / 2;
    const int nh = n / 2;
    tmp.resize(static_cast<std::size_t>(n));
    std::int32_t* s = tmp.data();
    std::int32_t* d = tmp.data() + nl;
    auto X = [&](int i) { return x[i * stride]; };
    for (int i = 0; i < nh; ++i) {
        const int right = (2 * i + 2 < n) ? 2 * i + 2 : 2 * i; // x[n] mirrors to x[n-2]
        d[i] = X(2 * i + 1) - ((X(2 * i) + X(right)) >> 1);
    }
    for (int i = 0; i < nl; ++i) {
        const std::int32_t dl = d[i > 0 ? i - 1 : 0];
        const std::int32_t dr = d[i < nh ? i : nh - 1];
        s[i] = X(2 * i) + ((dl + dr + 2) >> 2);
    }
    for (int i = 0; i < n; ++i)
        x[i * stride] = tmp[static_cast<std::size_t>(i)];
}

inline void lift53_inverse(std::int32_t* x, int n, int stride, std::vector<std::int32_t>& tmp)
{
    const int nl = (n + 1) / 2;
    const int nh = n / 2;
    tmp.resize(static_cast<std::size_t>(n));
    std::vector<std::int32_t> s(static_cast<std::size_t>(nl)), d(static_cast<std::size_t>(nh));
    for (int i = 0; i < nl; ++i)
        s[static_cast<std::size_t>(i)] = x[i * stride];
    for (int i = 0; i < nh; ++i)
        d[static_cast<std::size_t>(i)] = x[(nl + i) * stride];
    std::int32_t* out = tmp.data();
    for (int i = 0; i < nl; ++i) {
        const std::int32_t dl = d[static_cast<std::size_t>(i > 0 ? i - 1 : 0)];
        const std::int32_t dr = d[static_cast<std::size_t>(i < nh ? i : nh - 1)];
        out[2 * i] = s[static_cast<std::size_t>(i)] - ((dl + dr + 2) >> 2);
    }
    for (int i = 0; i < nh; ++i) {
        const int right = (2 * i + 2 < n) ? 2 * i + 2 : 2 * i;
        out[2 * i + 1] = d[static_cast<std::size_t>(i)] + ((out[2 * i] + out[right]) >> 1);
    }
    for (int i = 0; i < n; ++i)
        x[i * stride] = out[i];
}

inline void check_levels(int width, int height, int levels)
{
    if (levels < 1)
        throw ConfigError("dwt53: at least one decomposition level required");
    if (levels > 30 || width < (1 << levels) || height < (1 << levels))
        throw DimensionError("dwt53: " + std::to_string(width) + "x" + std::to_string(height) +
                             " frame too small for " + std::to_string(levels) + " levels");
}

} // namespace detail

inline CoefficientPlanes dwt53_forward(const Frame& frame, int levels)
{
    detail::check_levels(frame.width(), frame.height(), levels);
    CoefficientPlanes p{frame.width(), frame.height(), levels,
                        std::vector<std::int32_t>(frame.samples().begin(), frame.samples().end())};
    std::vector<std::int32_t> tmp;
    int w = p.width, h = p.height;
    for (int l = 0; l < levels; ++l) {
        for (int y = 0; y < h; ++y)
            detail::lift53_forward(&p.at(0, y), w, 1, tmp);
        for (int x = 0; x < w; ++x)
            detail::lift53_forward(&p.at(x, 0), h, p.width, tmp);
        w = (w + 1) / 2;
        h = (h + 1) / 2;
    }
    return p;
}

inline Frame dwt53_inverse(const CoefficientPlanes& planes, int bit_depth = 12)
{
    detail::check_levels(planes.width, planes.height, planes.levels);
    if (planes.coeffs.size() != static_cast<std::size_t>(planes.width) * static_cast<std::size_t>(planes.height))
        throw DimensionError("dwt53_inverse: coefficient count does not match plane size");
    CoefficientPlanes p = planes;
    std::vector<int> ws{p.width}, hs{p.height};
    for (int l = 1; l < p.levels; ++l) {
        ws.push_back((ws.back() + 1) / 2);
        hs.push_back((hs.back() + 1) / 2);
    }
    std::vector<std::int32_t> tmp;
    for (int l = p.levels - 1; l >= 0; --l) {
        const int w = ws[static_cast<std::size_t>(l)];
        const int h = hs[static_cast<std::size_t>(l)];
        for (int x = 0; x < w; ++x)
            detail::lift53_inverse(&p.at(x, 0), h, p.width, tmp);
        for (int y = 0; y < h; ++y)
            detail::lift53_inverse(&p.at(0, y), w, 1, tmp);
    }
    return Frame(p.width, p.height, bit_depth, std::move(p.coeffs));
}

} // namespace wldu

#endif
