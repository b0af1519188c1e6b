#ifndef WLDU_ARCHIVE_HPP
#define WLDU_ARCHIVE_HPP

// Indexed archive of per-slice streams for volumes with Z > 1:
//
//   "WLDA" | version u8 = 1 | Z u32 | per slice z = 0..Z-1: len u32 | WLDU stream

#include <cstdint>
#include <span>
#include <vector>

#include "wldu/byteio.hpp"
#include "wldu/codec.hpp"
#include "wldu/error.hpp"

namespace wldu {

inline constexpr std::uint8_t kArchiveVersion = 1;

inline bool is_archive(std::span<const std::uint8_t> data)
{
    return data.size() >= 4 && data[0] == 'W' && data[1] == 'L' && data[2] == 'D' && data[3] == 'A';
}

inline Bytes write_archive(std::span<const Bitstream> slices)
{
    ByteWriter w;
    w.magic("WLDA");
    w.u8(kArchiveVersion);
    w.u32(static_cast<std::uint32_t>(slices.size()));
    for (const Bitstream& s : slices) {
        w.u32(static_cast<std::uint32_t>(s.bytes.size()));
        w.bytes(s.bytes);
    }
    return w.take();
}

inline std::vector<Bitstream> read_archive(std::span<const std::uint8_t> data)
{
    MemorySource in(data);
    in.expect_magic("WLDA", "archive");
    const std::uint8_t version = in.u8();
    if (version != kArchiveVersion)
        throw FormatError("archive: unsupported version");
    const std::uint32_t z = in.u32();
    if (z == 0)
        throw FormatError("archive: no slices");
    std::vector<Bitstream> out;
    for (std::uint32_t i = 0; i < z; ++i) {
        const std::uint32_t len = in.u32();
        out.push_back(Bitstream{in.bytes(len)});
    }
    if (!in.at_end())
        throw FormatError("archive: trailing bytes");
    return out;
}

} // namespace wldu

#endif
