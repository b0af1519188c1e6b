#ifndef WLDU_CODEC_HPP
#define WLDU_CODEC_HPP

// WLDU bitstream (all integers little-endian):
//
//   "WLDU" | version u8 = 1 | bit_depth u8 | W u32 | H u32 | T u32
//   | mode u8 | filter kind u8 | xi u16 | motion mode u8 | grid u8 | search u8
//   | per pair: field | lp_len u32 | lp payload | hp_len u32 | hp payload
//   | trailing flag u8 [ | len u32 | payload ]
//
//   field   = grid u8 | search u8 | (dx i8, dy i8) per node, row-major
//   payload = encode_frame() of the subband frame
//
// LP and HP payloads are coded independently, so an LP-only reader can skip
// every HP payload without reading it.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wldu/byteio.hpp"
#include "wldu/entropy.hpp"
#include "wldu/error.hpp"
#include "wldu/frame.hpp"
#include "wldu/lifting.hpp"
#include "wldu/motion.hpp"

namespace wldu {

inline constexpr std::uint8_t kStreamVersion = 1;
inline constexpr std::size_t kStreamHeaderBytes = 4 + 1 + 1 + 3 * 4 + 1 + 1 + 2 + 1 + 1 + 1;
inline constexpr int kSpatialLevels = 4;

struct Bitstream {
    Bytes bytes;
    friend bool operator==(const Bitstream&, const Bitstream&) = default;
};

/// Byte partition of a stream. header_bytes covers the fixed header plus
/// all container framing (length fields, trailing flag).
struct SizeReport {
    std::size_t lp_bytes = 0;
    std::size_t hp_bytes = 0;
    std::size_t motion_bytes = 0;
    std::size_t header_bytes = 0;
    std::size_t total_bytes = 0;
    std::size_t raw_bytes = 0; ///< uncompressed size at 2 bytes per sample

    double compression_ratio() const noexcept
    {
        return total_bytes == 0 ? 0.0 : static_cast<double>(raw_bytes) / static_cast<double>(total_bytes);
    }

    SizeReport& operator+=(const SizeReport& o) noexcept
    {
        lp_bytes += o.lp_bytes;
        hp_bytes += o.hp_bytes;
        motion_bytes += o.motion_bytes;
        header_bytes += o.header_bytes;
        total_bytes += o.total_bytes;
        raw_bytes += o.raw_bytes;
        return *this;
    }
};

struct StreamHeader {
    int bit_depth = 12;
    int width = 0;
    int height = 0;
    int frames = 0;
    LiftConfig config{};

    std::size_t pairs() const noexcept { return static_cast<std::size_t>(frames) / 2; }
    bool has_trailing() const noexcept { return frames % 2 == 1; }
};

struct Encoded {
    Bitstream stream;
    SizeReport sizes;
};

namespace detail {

inline std::size_t field_bytes(const MotionField& f) { return 2 + 2 * f.node_count(); }

inline void write_field(ByteWriter& w, const MotionField& f)
{
    w.u8(static_cast<std::uint8_t>(f.grid_size()));
    w.u8(static_cast<std::uint8_t>(f.search_range()));
    for (const Displacement& d : f.nodes()) {
        w.i8(static_cast<std::int8_t>(d.dx));
        w.i8(static_cast<std::int8_t>(d.dy));
    }
}

inline MotionField read_field(ByteSource& in, const StreamHeader& h)
{
    const int grid = in.u8();
    const int search = in.u8();
    if (grid != h.config.motion.grid_size || search != h.config.motion.search_range)
        throw FormatError("stream: motion field parameters disagree with header");
    MotionField f(h.width, h.height, h.config.motion);
    for (int j = 0; j < f.nodes_y(); ++j)
        for (int i = 0; i < f.nodes_x(); ++i) {
            const int dx = in.i8();
            const int dy = in.i8();
            try {
                f.set_node(i, j, Displacement{dx, dy});
            } catch (const ConfigError&) {
                throw FormatError("stream: displacement exceeds search range");
            }
        }
    if (h.config.motion.mode == MotionMode::none && !f.is_zero())
        throw FormatError("stream: non-zero motion in a stream without motion compensation");
    return f;
}

inline Bytes read_payload(ByteSource& in)
{
    const std::uint32_t len = in.u32();
    return in.bytes(len);
}

inline std::size_t skip_payload(ByteSource& in)
{
    const std::uint32_t len = in.u32();
    in.skip(len);
    return len;
}

inline Frame decode_payload(std::span<const std::uint8_t> payload, const StreamHeader& h)
{
    return decode_frame(payload, h.width, h.height, h.bit_depth, kSpatialLevels);
}

} // namespace detail

/// Serialises a decomposition. The subband set's config is written in
/// canonical form, so equivalent configurations give identical streams.
inline Encoded encode_subbands(const SubbandSet& sb)
{
    if (sb.lp_frames.empty() || sb.lp_frames.size() != sb.hp_frames.size() ||
        sb.lp_frames.size() != sb.fields.size())
        throw DimensionError("encode: inconsistent subband set");
    const LiftConfig cfg = sb.config.canonical();
    const Frame& ref = sb.lp_frames.front();
    const int frames = static_cast<int>(2 * sb.pairs() + (sb.trailing_frame ? 1 : 0));

    Encoded out;
    SizeReport& sz = out.sizes;
    ByteWriter w;
    w.magic("WLDU");
    w.u8(kStreamVersion);
    w.u8(static_cast<std::uint8_t>(ref.bit_depth()));
    w.u32(static_cast<std::uint32_t>(ref.width()));
    w.u32(static_cast<std::uint32_t>(ref.height()));
    w.u32(static_cast<std::uint32_t>(frames));
    w.u8(static_cast<std::uint8_t>(cfg.mode));
    w.u8(static_cast<std::uint8_t>(cfg.filter.kind));
    w.u16(static_cast<std::uint16_t>(cfg.filter.xi));
    w.u8(static_cast<std::uint8_t>(cfg.motion.mode));
    w.u8(static_cast<std::uint8_t>(cfg.motion.grid_size));
    w.u8(static_cast<std::uint8_t>(cfg.motion.search_range));
    sz.header_bytes = w.size();

    for (std::size_t t = 0; t < sb.pairs(); ++t) {
        const MotionField& f = sb.fields[t];
        if (f.grid_size() != cfg.motion.grid_size || f.search_range() != cfg.motion.search_range)
            throw ConfigError("encode: motion field parameters disagree with the configuration");
        detail::write_field(w, f);
        sz.motion_bytes += detail::field_bytes(f);

        const Bytes lp = encode_frame(sb.lp_frames[t], kSpatialLevels);
        const Bytes hp = encode_frame(sb.hp_frames[t], kSpatialLevels);
        w.u32(static_cast<std::uint32_t>(lp.size()));
        w.bytes(lp);
        w.u32(static_cast<std::uint32_t>(hp.size()));
        w.bytes(hp);
        sz.lp_bytes += lp.size();
        sz.hp_bytes += hp.size();
        sz.header_bytes += 8;
    }
    w.u8(sb.trailing_frame ? 1 : 0);
    sz.header_bytes += 1;
    if (sb.trailing_frame) {
        const Bytes tail = encode_frame(*sb.trailing_frame, kSpatialLevels);
        w.u32(static_cast<std::uint32_t>(tail.size()));
        w.bytes(tail);
        sz.lp_bytes += tail.size();
        sz.header_bytes += 4;
    }
    sz.total_bytes = w.size();
    sz.raw_bytes = 2 * static_cast<std::size_t>(frames) * ref.size();
    out.stream.bytes = w.take();
    return out;
}

inline Encoded encode_sequence(const Sequence& seq, const LiftConfig& cfg)
{
    return encode_subbands(decompose(seq, cfg));
}

inline StreamHeader read_stream_header(ByteSource& in)
{
    in.expect_magic("WLDU", "stream");
    const std::uint8_t version = in.u8();
    if (version != kStreamVersion)
        throw FormatError("stream: unsupported version " + std::to_string(version));
    StreamHeader h;
    h.bit_depth = in.u8();
    h.width = static_cast<int>(in.u32());
    h.height = static_cast<int>(in.u32());
    h.frames = static_cast<int>(in.u32());
    const std::uint8_t mode = in.u8();
    const std::uint8_t kind = in.u8();
    const std::uint16_t xi = in.u16();
    const std::uint8_t mmode = in.u8();
    const std::uint8_t grid = in.u8();
    const std::uint8_t search = in.u8();
    if (h.bit_depth < 1 || h.bit_depth > 16 || h.width <= 0 || h.height <= 0 || h.frames < 2)
        throw FormatError("stream: invalid dimensions in header");
    if (mode > 3 || kind > 6 || mmode > 2)
        throw FormatError("stream: unknown mode, filter or motion tag");
    h.config.mode = static_cast<LiftMode>(mode);
    h.config.filter = FilterSpec{static_cast<FilterKind>(kind), xi};
    h.config.motion = MotionConfig{grid, search, static_cast<MotionMode>(mmode)};
    try {
        h.config.validate();
    } catch (const ConfigError& e) {
        throw FormatError(std::string("stream: ") + e.what());
    }
    return h;
}

/// Full decode from any byte source.
inline SubbandSet decode_subbands(ByteSource& in, StreamHeader* header_out = nullptr)
{
    const StreamHeader h = read_stream_header(in);
    SubbandSet sb;
    sb.config = h.config;
    for (std::size_t t = 0; t < h.pairs(); ++t) {
        sb.fields.push_back(detail::read_field(in, h));
        sb.lp_frames.push_back(detail::decode_payload(detail::read_payload(in), h));
        sb.hp_frames.push_back(detail::decode_payload(detail::read_payload(in), h));
    }
    const std::uint8_t trailing = in.u8();
    if (trailing != (h.has_trailing() ? 1 : 0))
        throw FormatError("stream: trailing-frame flag disagrees with frame count");
    if (trailing)
        sb.trailing_frame = detail::decode_payload(detail::read_payload(in), h);
    if (!in.at_end())
        throw FormatError("stream: trailing bytes after last record");
    if (header_out)
        *header_out = h;
    return sb;
}

inline Sequence decode_sequence(ByteSource& in)
{
    Sequence seq = reconstruct(decode_subbands(in));
    for (const Frame& f : seq.frames)
        if (!f.in_original_range())
            throw FormatError("stream: reconstructed samples outside the bit-depth range");
    return seq;
}

inline Sequence decode_sequence(const Bitstream& bs)
{
    MemorySource src(bs.bytes);
    return decode_sequence(src);
}

/// What an LP-only reader recovers: LP frames, motion fields and the tail.
struct LpLayer {
    StreamHeader header;
    std::vector<Frame> lp_frames;
    std::vector<MotionField> fields;
    std::optional<Frame> trailing_frame;
    std::vector<std::size_t> lp_payload_bytes; ///< per pair, as stored
    std::vector<std::size_t> hp_payload_bytes; ///< per pair, skipped unread
    std::size_t trailing_payload_bytes = 0;
};

/// Reads the header, motion fields and LP payloads; every HP payload is
/// skipped via ByteSource::skip and never read.
inline LpLayer read_lp_layer(ByteSource& in)
{
    LpLayer layer;
    layer.header = read_stream_header(in);
    const StreamHeader& h = layer.header;
    for (std::size_t t = 0; t < h.pairs(); ++t) {
        layer.fields.push_back(detail::read_field(in, h));
        const Bytes lp = detail::read_payload(in);
        layer.lp_payload_bytes.push_back(lp.size());
        layer.lp_frames.push_back(detail::decode_payload(lp, h));
        layer.hp_payload_bytes.push_back(detail::skip_payload(in));
    }
    const std::uint8_t trailing = in.u8();
    if (trailing != (h.has_trailing() ? 1 : 0))
        throw FormatError("stream: trailing-frame flag disagrees with frame count");
    if (trailing) {
        const Bytes tail = detail::read_payload(in);
        layer.trailing_payload_bytes = tail.size();
        layer.trailing_frame = detail::decode_payload(tail, h);
    }
    return layer;
}

/// Half-rate preview: LP frames (plus the verbatim tail frame, if any).
inline Sequence extract_lp_preview(ByteSource& in)
{
    LpLayer layer = read_lp_layer(in);
    Sequence seq;
    seq.frames = std::move(layer.lp_frames);
    if (layer.trailing_frame)
        seq.frames.push_back(std::move(*layer.trailing_frame));
    return seq;
}

inline Sequence extract_lp_preview(const Bitstream& bs)
{
    MemorySource src(bs.bytes);
    return extract_lp_preview(src);
}

} // namespace wldu

#endif
