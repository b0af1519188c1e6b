#ifndef WLDU_ENTROPY_HPP
#define WLDU_ENTROPY_HPP

// Adaptive Golomb-Rice coding of wavelet subbands.
//
// Per subband (coding order from subband_layout), coefficients row-major:
//   * signed -> unsigned: n >= 0 -> 2n, n < 0 -> -2n - 1
//   * 5-bit initial Rice parameter k (chosen from the first block's mean)
//   * blocks of 64 coefficients share one k; after each block k is
//     re-derived from the running mean magnitude (A / N, halved when N
//     reaches 1024): smallest k with N * 2^k >= A
//   * codeword: q = u >> k in unary (q ones, one zero) then k raw bits;
//     q >= 16 escapes as sixteen ones followed by u in 32 raw bits
//   * each subband ends on a byte boundary; empty subbands emit nothing
// Bits are written MSB first.

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "wldu/byteio.hpp"
#include "wldu/dwt53.hpp"
#include "wldu/error.hpp"

namespace wldu {

class BitWriter {
public:
    void put(std::uint32_t value, int nbits)
    {
        for (int b = nbits - 1; b >= 0; --b)
            bit((value >> b) & 1u);
    }

    void bit(std::uint32_t b)
    {
        m_acc = static_cast<std::uint8_t>((m_acc << 1) | (b & 1u));
        if (++m_fill == 8) {
            m_out.push_back(m_acc);
            m_acc = 0;
            m_fill = 0;
        }
    }

    void align()
    {
        while (m_fill != 0)
            bit(0);
    }

    Bytes take()
    {
        align();
        return std::move(m_out);
    }

private:
    Bytes m_out;
    std::uint8_t m_acc = 0;
    int m_fill = 0;
};

class BitReader {
public:
    explicit BitReader(std::span<const std::uint8_t> data) : m_data(data) {}

    std::uint32_t bit()
    {
        if (m_pos >= m_data.size() * 8)
            throw TruncatedError("entropy payload truncated");
        const std::uint32_t b = (m_data[m_pos >> 3] >> (7 - (m_pos & 7))) & 1u;
        ++m_pos;
        return b;
    }

    std::uint32_t get(int nbits)
    {
        std::uint32_t v = 0;
        for (int i = 0; i < nbits; ++i)
            v = (v << 1) | bit();
        return v;
    }

    void align() { m_pos = (m_pos + 7) & ~std::size_t{7}; }

    std::size_t byte_position() const noexcept { return (m_pos + 7) / 8; }

private:
    std::span<const std::uint8_t> m_data;
    std::size_t m_pos = 0;
};

namespace detail {

inline constexpr int kRiceBlock = 64;
inline constexpr std::uint32_t kRiceEscape = 16;
inline constexpr int kRiceMaxK = 31;

inline std::uint32_t zigzag(std::int32_t n)
{
    return n >= 0 ? 2u * static_cast<std::uint32_t>(n) : 2u * static_cast<std::uint32_t>(-(n + 1)) + 1u;
}

inline std::int32_t unzigzag(std::uint32_t u)
{
    return (u & 1u) ? -static_cast<std::int32_t>(u >> 1) - 1 : static_cast<std::int32_t>(u >> 1);
}

inline int rice_parameter(std::uint64_t sum, std::uint64_t count)
{
    int k = 0;
    while (k < kRiceMaxK && (count << k) < sum)
        ++k;
    return k;
}

class RiceState {
public:
    explicit RiceState(int k0) : m_k(k0) {}
    int k() const noexcept { return m_k; }

    void end_block(std::uint64_t block_sum, std::uint64_t block_count)
    {
        m_sum += block_sum;
        m_count += block_count;
        if (m_count >= 1024) {
            m_sum >>= 1;
            m_count >>= 1;
        }
        m_k = rice_parameter(m_sum, m_count);
    }

private:
    int m_k;
    std::uint64_t m_sum = 0;
    std::uint64_t m_count = 0;
};

inline void put_rice(BitWriter& bw, std::uint32_t u, int k)
{
    const std::uint32_t q = u >> k;
    if (q >= kRiceEscape) {
        for (std::uint32_t i = 0; i < kRiceEscape; ++i)
            bw.bit(1);
        bw.put(u, 32);
        return;
    }
    for (std::uint32_t i = 0; i < q; ++i)
        bw.bit(1);
    bw.bit(0);
    if (k > 0)
        bw.put(u & ((1u << k) - 1u), k);
}

inline std::uint32_t get_rice(BitReader& br, int k)
{
    std::uint32_t q = 0;
    while (q < kRiceEscape && br.bit() == 1)
        ++q;
    if (q == kRiceEscape)
        return br.get(32);
    const std::uint32_t low = k > 0 ? br.get(k) : 0u;
    return (q << k) | low;
}

} // namespace detail

/// Serialises the planes subband by subband. Geometry (width, height,
/// levels) is not stored; the container supplies it.
inline Bytes entropy_encode(const CoefficientPlanes& planes)
{
    BitWriter bw;
    std::vector<std::uint32_t> u;
    for (const SubbandRect& r : subband_layout(planes.width, planes.height, planes.levels)) {
        if (r.count() == 0)
            continue;
        u.clear();
        for (int y = r.y0; y < r.y1; ++y)
            for (int x = r.x0; x < r.x1; ++x)
                u.push_back(detail::zigzag(planes.at(x, y)));

        const std::size_t first = std::min<std::size_t>(u.size(), detail::kRiceBlock);
        std::uint64_t first_sum = 0;
        for (std::size_t i = 0; i < first; ++i)
            first_sum += u[i];
        const int k0 = detail::rice_parameter(first_sum, first);
        bw.put(static_cast<std::uint32_t>(k0), 5);

        detail::RiceState state(k0);
        for (std::size_t start = 0; start < u.size(); start += detail::kRiceBlock) {
            const std::size_t end = std::min(u.size(), start + detail::kRiceBlock);
            std::uint64_t sum = 0;
            for (std::size_t i = start; i < end; ++i) {
                detail::put_rice(bw, u[i], state.k());
                sum += u[i];
            }
            state.end_block(sum, end - start);
        }
        bw.align();
    }
    return bw.take();
}

/// Inverse of entropy_encode for the given geometry. Throws TruncatedError
/// if the payload runs out, FormatError if bytes are left over.
inline CoefficientPlanes entropy_decode(std::span<const std::uint8_t> payload, int width, int height, int levels)
{
    if (width <= 0 || height <= 0 || levels < 0)
        throw DimensionError("entropy_decode: invalid geometry");
    CoefficientPlanes p{width, height, levels,
                        std::vector<std::int32_t>(static_cast<std::size_t>(width) * static_cast<std::size_t>(height))};
    BitReader br(payload);
    for (const SubbandRect& r : subband_layout(width, height, levels)) {
        if (r.count() == 0)
            continue;
        const int k0 = static_cast<int>(br.get(5));
        detail::RiceState state(k0);
        std::size_t in_block = 0;
        std::uint64_t sum = 0;
        for (int y = r.y0; y < r.y1; ++y)
            for (int x = r.x0; x < r.x1; ++x) {
                const std::uint32_t u = detail::get_rice(br, state.k());
                p.at(x, y) = detail::unzigzag(u);
                sum += u;
                if (++in_block == detail::kRiceBlock) {
                    state.end_block(sum, in_block);
                    in_block = 0;
                    sum = 0;
                }
            }
        br.align();
    }
    if (br.byte_position() != payload.size())
        throw FormatError("entropy payload has trailing bytes");
    return p;
}

/// Lossless spatial coding of one frame: 5/3 DWT with up to `max_levels`
/// levels (fewer for small frames) followed by entropy_encode.
inline Bytes encode_frame(const Frame& frame, int max_levels = 4)
{
    const int levels = max_dwt_levels(frame.width(), frame.height(), max_levels);
    if (levels == 0) {
        CoefficientPlanes raw{frame.width(), frame.height(), 0,
                              std::vector<std::int32_t>(frame.samples().begin(), frame.samples().end())};
        return entropy_encode(raw);
    }
    return entropy_encode(dwt53_forward(frame, levels));
}

inline Frame decode_frame(std::span<const std::uint8_t> payload, int width, int height, int bit_depth,
                          int max_levels = 4)
{
    const int levels = max_dwt_levels(width, height, max_levels);
    CoefficientPlanes p = entropy_decode(payload, width, height, levels);
    if (levels == 0)
        return Frame(width, height, bit_depth, std::move(p.coeffs));
    return dwt53_inverse(p, bit_depth);
}

} // namespace wldu

#endif
