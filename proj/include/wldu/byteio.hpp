#ifndef WLDU_BYTEIO_HPP
#define WLDU_BYTEIO_HPP

// Little-endian byte writing plus a minimal read interface with I/O
// accounting. Readers that must not touch some byte ranges (LP-only preview)
// call skip() for them; sources count read and skipped bytes separately.

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <utility>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "wldu/error.hpp"

namespace wldu {

using Bytes = std::vector<std::uint8_t>;

class ByteWriter {
public:
    void u8(std::uint8_t v) { m_out.push_back(v); }
    void i8(std::int8_t v) { m_out.push_back(static_cast<std::uint8_t>(v)); }

    void u16(std::uint16_t v)
    {
        m_out.push_back(static_cast<std::uint8_t>(v & 0xFF));
        m_out.push_back(static_cast<std::uint8_t>(v >> 8));
    }

    void u32(std::uint32_t v)
    {
        for (int s = 0; s < 32; s += 8)
            m_out.push_back(static_cast<std::uint8_t>((v >> s) & 0xFF));
    }

    void bytes(std::span<const std::uint8_t> b) { m_out.insert(m_out.end(), b.begin(), b.end()); }

    void magic(const char (&tag)[5])
    {
        for (int i = 0; i < 4; ++i)
            m_out.push_back(static_cast<std::uint8_t>(tag[i]));
    }

    std::size_t size() const noexcept { return m_out.size(); }
    const Bytes& data() const noexcept { return m_out; }
    Bytes take() { return std::move(m_out); }

private:
    Bytes m_out;
};

/// Sequential byte input. Every byte handed to the caller is counted in
/// bytes_read(); bytes passed over with skip() are counted in bytes_skipped()
/// and are never copied out of the underlying medium.
class ByteSource {
public:
    virtual ~ByteSource() = default;

    void read(std::span<std::uint8_t> dst)
    {
        do_read(dst);
        m_read += dst.size();
    }

    void skip(std::size_t n)
    {
        do_skip(n);
        m_skipped += n;
    }

    /// True when no more bytes are available.
    virtual bool at_end() = 0;

    std::size_t bytes_read() const noexcept { return m_read; }
    std::size_t bytes_skipped() const noexcept { return m_skipped; }

    std::uint8_t u8()
    {
        std::uint8_t b = 0;
        read(std::span<std::uint8_t>(&b, 1));
        return b;
    }

    std::int8_t i8() { return static_cast<std::int8_t>(u8()); }

    std::uint16_t u16()
    {
        std::uint8_t b[2];
        read(b);
        return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
    }

    std::uint32_t u32()
    {
        std::uint8_t b[4];
        read(b);
        return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
               (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
    }

    Bytes bytes(std::size_t n)
    {
        Bytes out(n);
        read(out);
        return out;
    }

    void expect_magic(const char (&tag)[5], const char* what)
    {
        std::uint8_t b[4];
        try {
            read(b);
        } catch (const TruncatedError&) {
            throw FormatError(std::string(what) + ": missing magic");
        }
        if (std::memcmp(b, tag, 4) != 0)
            throw FormatError(std::string(what) + ": bad magic");
    }

protected:
    virtual void do_read(std::span<std::uint8_t> dst) = 0;
    virtual void do_skip(std::size_t n) = 0;

private:
    std::size_t m_read = 0;
    std::size_t m_skipped = 0;
};

class MemorySource final : public ByteSource {
public:
    explicit MemorySource(std::span<const std::uint8_t> data) : m_data(data) {}

    bool at_end() override { return m_pos >= m_data.size(); }
    std::size_t position() const noexcept { return m_pos; }

protected:
    void do_read(std::span<std::uint8_t> dst) override
    {
        if (dst.size() > m_data.size() - m_pos)
            throw TruncatedError("unexpected end of stream");
        std::memcpy(dst.data(), m_data.data() + m_pos, dst.size());
        m_pos += dst.size();
    }

    void do_skip(std::size_t n) override
    {
        if (n > m_data.size() - m_pos)
            throw TruncatedError("unexpected end of stream");
        m_pos += n;
    }

private:
    std::span<const std::uint8_t> m_data;
    std::size_t m_pos = 0;
};

/// Reads from a std::istream. skip() seeks when the stream supports it and
/// falls back to ignore() for pipes.
class StreamSource final : public ByteSource {
public:
    explicit StreamSource(std::istream& in) : m_in(in) {}

    bool at_end() override { return m_in.peek() == std::istream::traits_type::eof(); }

protected:
    void do_read(std::span<std::uint8_t> dst) override
    {
        m_in.read(reinterpret_cast<char*>(dst.data()), static_cast<std::streamsize>(dst.size()));
        if (static_cast<std::size_t>(m_in.gcount()) != dst.size())
            throw TruncatedError("unexpected end of stream");
    }

    void do_skip(std::size_t n) override
    {
        if (n == 0)
            return;
        const auto here = m_in.tellg();
        if (here != std::streampos(-1)) {
            m_in.seekg(0, std::ios::end);
            const auto end = m_in.tellg();
            if (end - here < static_cast<std::streamoff>(n))
                throw TruncatedError("unexpected end of stream");
            m_in.seekg(here + static_cast<std::streamoff>(n));
            return;
        }
        m_in.clear();
        m_in.ignore(static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(m_in.gcount()) != n)
            throw TruncatedError("unexpected end of stream");
    }

private:
    std::istream& m_in;
};

} // namespace wldu

#endif
