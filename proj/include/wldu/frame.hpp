#ifndef WLDU_FRAME_HPP
#define WLDU_FRAME_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wldu/detail/arith.hpp"
#include "wldu/error.hpp"

namespace wldu {

/// Working sample type. 32 bits covers HP residuals and update headroom of
/// any input up to 16 bits per sample.
using Sample = std::int32_t;

/// One 2-D image: a time slice of a volume at fixed z, or a temporal subband.
/// Row-major, signed samples. Original frames hold [0, 2^bit_depth - 1];
/// subband frames may go negative.
class Frame {
public:
    Frame() = default;

    Frame(int width, int height, int bit_depth = 12)
        : m_width(width), m_height(height), m_bit_depth(bit_depth)
    {
        check_dims(width, height, bit_depth);
        m_samples.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
    }

    Frame(int width, int height, int bit_depth, std::vector<Sample> samples)
        : m_width(width), m_height(height), m_bit_depth(bit_depth), m_samples(std::move(samples))
    {
        check_dims(width, height, bit_depth);
        if (m_samples.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
            throw DimensionError("frame sample count does not match " + std::to_string(width) + "x" +
                                 std::to_string(height));
    }

    /// Frame of the same geometry with every sample set to `value`.
    static Frame filled(int width, int height, int bit_depth, Sample value)
    {
        Frame f(width, height, bit_depth);
        std::fill(f.m_samples.begin(), f.m_samples.end(), value);
        return f;
    }

    int width() const noexcept { return m_width; }
    int height() const noexcept { return m_height; }
    int bit_depth() const noexcept { return m_bit_depth; }
    std::size_t size() const noexcept { return m_samples.size(); }
    bool empty() const noexcept { return m_samples.empty(); }

    Sample max_value() const noexcept { return (Sample{1} << m_bit_depth) - 1; }

    Sample operator()(int x, int y) const noexcept { return m_samples[index(x, y)]; }
    Sample& operator()(int x, int y) noexcept { return m_samples[index(x, y)]; }

    /// Sample with coordinates clamped to the frame border.
    Sample clamped(int x, int y) const noexcept
    {
        return (*this)(detail::clamp_index(x, m_width), detail::clamp_index(y, m_height));
    }

    /// Sample with half-sample symmetric reflection at the borders.
    Sample reflected(int x, int y) const noexcept
    {
        return (*this)(detail::reflect(x, m_width), detail::reflect(y, m_height));
    }

    std::span<const Sample> samples() const noexcept { return m_samples; }
    std::span<Sample> samples() noexcept { return m_samples; }

    std::span<const Sample> row(int y) const noexcept
    {
        return std::span<const Sample>(m_samples).subspan(index(0, y), static_cast<std::size_t>(m_width));
    }

    bool same_shape(const Frame& other) const noexcept
    {
        return m_width == other.m_width && m_height == other.m_height;
    }

    /// True when every sample is a valid unsigned bit_depth value.
    bool in_original_range() const noexcept
    {
        const Sample hi = max_value();
        for (Sample s : m_samples)
            if (s < 0 || s > hi)
                return false;
        return true;
    }

    friend bool operator==(const Frame&, const Frame&) = default;

private:
    std::size_t index(int x, int y) const noexcept
    {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(m_width) + static_cast<std::size_t>(x);
    }

    static void check_dims(int width, int height, int bit_depth)
    {
        if (width <= 0 || height <= 0)
            throw DimensionError("frame dimensions must be positive");
        if (bit_depth < 1 || bit_depth > 16)
            throw ConfigError("bit depth must be in [1, 16]");
    }

    int m_width = 0;
    int m_height = 0;
    int m_bit_depth = 12;
    std::vector<Sample> m_samples;
};

inline void require_same_shape(const Frame& a, const Frame& b, const char* what)
{
    if (!a.same_shape(b))
        throw DimensionError(std::string(what) + ": frame dimensions differ (" + std::to_string(a.width()) + "x" +
                             std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                             std::to_string(b.height()) + ")");
}

/// Per-pixel a - b.
inline Frame subtract(const Frame& a, const Frame& b)
{
    require_same_shape(a, b, "subtract");
    Frame out(a.width(), a.height(), a.bit_depth());
    auto o = out.samples();
    auto sa = a.samples();
    auto sb = b.samples();
    for (std::size_t i = 0; i < o.size(); ++i)
        o[i] = sa[i] - sb[i];
    return out;
}

/// Per-pixel a + b.
inline Frame add(const Frame& a, const Frame& b)
{
    require_same_shape(a, b, "add");
    Frame out(a.width(), a.height(), a.bit_depth());
    auto o = out.samples();
    auto sa = a.samples();
    auto sb = b.samples();
    for (std::size_t i = 0; i < o.size(); ++i)
        o[i] = sa[i] + sb[i];
    return out;
}

/// Temporal sequence of equally shaped frames at one slice position.
struct Sequence {
    std::vector<Frame> frames;
    int slice_index = 0;

    std::size_t length() const noexcept { return frames.size(); }

    int width() const { return frames.empty() ? 0 : frames.front().width(); }
    int height() const { return frames.empty() ? 0 : frames.front().height(); }
    int bit_depth() const { return frames.empty() ? 0 : frames.front().bit_depth(); }

    /// Throws unless all frames share width, height and bit depth.
    void validate() const
    {
        for (const Frame& f : frames) {
            require_same_shape(frames.front(), f, "sequence");
            if (f.bit_depth() != frames.front().bit_depth())
                throw DimensionError("sequence: mixed bit depths");
        }
    }

    friend bool operator==(const Sequence& a, const Sequence& b) { return a.frames == b.frames; }
};

} // namespace wldu

#endif
