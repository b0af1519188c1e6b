#ifndef WLDU_VOLUME_HPP
#define WLDU_VOLUME_HPP

// 3-D+t volumes and the DV4D raw container:
//
//   "DV4D" | version u8 = 1 | bit_depth u8 | X u32 | Y u32 | Z u32 | T u32
//   | X*Y*Z*T samples, u16 little-endian, (t, z, y, x) order
//
// All header integers are little-endian.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "wldu/byteio.hpp"
#include "wldu/error.hpp"
#include "wldu/frame.hpp"

namespace wldu {

inline constexpr std::uint8_t kVolumeVersion = 1;
inline constexpr std::size_t kVolumeHeaderBytes = 4 + 1 + 1 + 4 * 4;

struct VolumeDims {
    int x = 0;
    int y = 0;
    int z = 0;
    int t = 0;

    std::size_t count() const noexcept
    {
        return static_cast<std::size_t>(x) * static_cast<std::size_t>(y) * static_cast<std::size_t>(z) *
               static_cast<std::size_t>(t);
    }

    friend bool operator==(const VolumeDims&, const VolumeDims&) = default;
};

class Volume4D {
public:
    Volume4D() = default;

    Volume4D(VolumeDims dims, int bit_depth) : Volume4D(dims, bit_depth, std::vector<std::uint16_t>(dims.count(), 0)) {}

    Volume4D(VolumeDims dims, int bit_depth, std::vector<std::uint16_t> samples)
        : m_dims(dims), m_bit_depth(bit_depth), m_samples(std::move(samples))
    {
        if (dims.x <= 0 || dims.y <= 0 || dims.z <= 0 || dims.t <= 0)
            throw DimensionError("volume dimensions must be positive");
        if (bit_depth < 1 || bit_depth > 16)
            throw ConfigError("volume bit depth must be in [1, 16]");
        if (m_samples.size() != dims.count())
            throw DimensionError("volume sample count does not match its dimensions");
    }

    const VolumeDims& dims() const noexcept { return m_dims; }
    int bit_depth() const noexcept { return m_bit_depth; }
    std::span<const std::uint16_t> samples() const noexcept { return m_samples; }

    std::size_t index(int t, int z, int y, int x) const noexcept
    {
        return ((static_cast<std::size_t>(t) * m_dims.z + z) * m_dims.y + y) * m_dims.x + x;
    }

    std::uint16_t operator()(int t, int z, int y, int x) const noexcept { return m_samples[index(t, z, y, x)]; }
    std::uint16_t& operator()(int t, int z, int y, int x) noexcept { return m_samples[index(t, z, y, x)]; }

    friend bool operator==(const Volume4D&, const Volume4D&) = default;

private:
    VolumeDims m_dims;
    int m_bit_depth = 12;
    std::vector<std::uint16_t> m_samples;
};

/// The T frames of slice position z, in time order.
inline Sequence extract_sequence(const Volume4D& vol, int z)
{
    const VolumeDims& d = vol.dims();
    if (z < 0 || z >= d.z)
        throw DimensionError("slice index " + std::to_string(z) + " out of range [0, " + std::to_string(d.z) + ")");
    Sequence seq;
    seq.slice_index = z;
    seq.frames.reserve(static_cast<std::size_t>(d.t));
    for (int t = 0; t < d.t; ++t) {
        std::vector<Sample> s(static_cast<std::size_t>(d.x) * static_cast<std::size_t>(d.y));
        const auto src = vol.samples().subspan(vol.index(t, z, 0, 0), s.size());
        std::copy(src.begin(), src.end(), s.begin());
        seq.frames.emplace_back(d.x, d.y, vol.bit_depth(), std::move(s));
    }
    return seq;
}

/// Assembles a volume from per-slice sequences; sequences[z] becomes slice z.
inline Volume4D assemble_volume(std::span<const Sequence> slices)
{
    if (slices.empty() || slices.front().frames.empty())
        throw DimensionError("cannot assemble an empty volume");
    const Sequence& first = slices.front();
    VolumeDims d{first.width(), first.height(), static_cast<int>(slices.size()), static_cast<int>(first.length())};
    Volume4D vol(d, first.bit_depth());
    for (int z = 0; z < d.z; ++z) {
        const Sequence& seq = slices[static_cast<std::size_t>(z)];
        seq.validate();
        if (static_cast<int>(seq.length()) != d.t || seq.width() != d.x || seq.height() != d.y)
            throw DimensionError("slice sequences disagree in shape");
        for (int t = 0; t < d.t; ++t) {
            const Frame& f = seq.frames[static_cast<std::size_t>(t)];
            if (!f.in_original_range())
                throw DimensionError("frame samples outside the unsigned bit-depth range");
            for (int y = 0; y < d.y; ++y)
                for (int x = 0; x < d.x; ++x)
                    vol(t, z, y, x) = static_cast<std::uint16_t>(f(x, y));
        }
    }
    return vol;
}

inline Volume4D assemble_volume(const Sequence& seq) { return assemble_volume(std::span<const Sequence>(&seq, 1)); }

inline Bytes serialize_volume(const Volume4D& vol)
{
    ByteWriter w;
    w.magic("DV4D");
    w.u8(kVolumeVersion);
    w.u8(static_cast<std::uint8_t>(vol.bit_depth()));
    w.u32(static_cast<std::uint32_t>(vol.dims().x));
    w.u32(static_cast<std::uint32_t>(vol.dims().y));
    w.u32(static_cast<std::uint32_t>(vol.dims().z));
    w.u32(static_cast<std::uint32_t>(vol.dims().t));
    for (std::uint16_t s : vol.samples())
        w.u16(s);
    return w.take();
}

inline Volume4D parse_volume(ByteSource& in)
{
    in.expect_magic("DV4D", "volume");
    const std::uint8_t version = in.u8();
    if (version != kVolumeVersion)
        throw FormatError("volume: unsupported version " + std::to_string(version));
    const int bit_depth = in.u8();
    VolumeDims d;
    d.x = static_cast<int>(in.u32());
    d.y = static_cast<int>(in.u32());
    d.z = static_cast<int>(in.u32());
    d.t = static_cast<int>(in.u32());
    if (d.x <= 0 || d.y <= 0 || d.z <= 0 || d.t <= 0)
        throw FormatError("volume: non-positive dimension in header");
    if (bit_depth < 1 || bit_depth > 16)
        throw FormatError("volume: bit depth out of range");
    std::vector<std::uint16_t> samples(d.count());
    Bytes raw(2 * d.count());
    try {
        in.read(raw);
    } catch (const TruncatedError&) {
        throw TruncatedError("volume: file truncated, expected " + std::to_string(d.count()) + " samples");
    }
    const std::uint16_t limit = static_cast<std::uint16_t>((1u << bit_depth) - 1u);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        samples[i] = static_cast<std::uint16_t>(raw[2 * i] | (raw[2 * i + 1] << 8));
        if (samples[i] > limit)
            throw FormatError("volume: sample exceeds bit depth");
    }
    if (!in.at_end())
        throw FormatError("volume: trailing bytes after sample data");
    return Volume4D(d, bit_depth, std::move(samples));
}

inline Volume4D load_volume(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    StreamSource src(in);
    return parse_volume(src);
}

inline void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot create " + path.string());
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out)
        throw IoError("write failed: " + path.string());
}

inline Bytes read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return data;
}

inline void save_volume(const Volume4D& vol, const std::filesystem::path& path)
{
    write_file(path, serialize_volume(vol));
}

} // namespace wldu

#endif
