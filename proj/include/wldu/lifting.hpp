#ifndef WLDU_LIFTING_HPP
#define WLDU_LIFTING_HPP

// One-level temporal Haar lifting with optional motion compensation and an
// optional denoiser in the update step.
//
//   HP = even - MC(odd)
//   LP = odd + R(1/2 * MC^-1(DN(HP)))          R: round half away from zero
//
//   odd  = LP - R(1/2 * MC^-1(DN(HP)))
//   even = HP + MC(odd)
//
// Frames are paired (0, 1), (2, 3), ...; the earlier frame of each pair
// takes the odd (LP) role. An odd-length tail frame is carried verbatim.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wldu/denoise.hpp"
#include "wldu/error.hpp"
#include "wldu/frame.hpp"
#include "wldu/motion.hpp"

namespace wldu {

enum class LiftMode : std::uint8_t { sbc = 0, mctf = 1, wldu = 2, truncated = 3 };

inline std::string_view to_string(LiftMode m)
{
    switch (m) {
    case LiftMode::sbc: return "sbc";
    case LiftMode::mctf: return "mctf";
    case LiftMode::wldu: return "wldu";
    case LiftMode::truncated: return "truncated";
    }
    return "?";
}

inline LiftMode parse_lift_mode(std::string_view s)
{
    for (LiftMode m : {LiftMode::sbc, LiftMode::mctf, LiftMode::wldu, LiftMode::truncated})
        if (to_string(m) == s)
            return m;
    throw ConfigError("unknown mode '" + std::string(s) + "'");
}

struct LiftConfig {
    LiftMode mode = LiftMode::mctf;
    MotionConfig motion{};
    FilterSpec filter{};

    void validate() const
    {
        motion.validate();
        filter.validate();
        if (static_cast<std::uint8_t>(mode) > static_cast<std::uint8_t>(LiftMode::truncated))
            throw ConfigError("unknown lifting mode");
        if (mode == LiftMode::sbc && motion.mode != MotionMode::none)
            throw ConfigError("sbc mode does not use motion compensation");
    }

    /// Representative of the equivalence class of configurations that
    /// produce identical subbands:
    ///   wldu + identity filter == mctf,  wldu + zero filter == truncated,
    ///   mctf without motion == sbc.
    /// Modes that ignore the filter store {identity, 1} (sbc, mctf) or
    /// {zero, 1} (truncated).
    LiftConfig canonical() const
    {
        validate();
        LiftConfig c = *this;
        if (c.mode == LiftMode::wldu && c.filter.kind == FilterKind::identity)
            c.mode = LiftMode::mctf;
        if (c.mode == LiftMode::wldu && c.filter.kind == FilterKind::zero)
            c.mode = LiftMode::truncated;
        if (c.mode == LiftMode::mctf && c.motion.mode == MotionMode::none)
            c.mode = LiftMode::sbc;
        switch (c.mode) {
        case LiftMode::sbc:
        case LiftMode::mctf: c.filter = FilterSpec{FilterKind::identity, 1}; break;
        case LiftMode::truncated: c.filter = FilterSpec{FilterKind::zero, 1}; break;
        case LiftMode::wldu: break;
        }
        return c;
    }

    /// Filter actually applied to HP before the update step.
    FilterSpec effective_filter() const
    {
        switch (mode) {
        case LiftMode::sbc:
        case LiftMode::mctf: return FilterSpec{FilterKind::identity, 1};
        case LiftMode::truncated: return FilterSpec{FilterKind::zero, 1};
        case LiftMode::wldu: return filter;
        }
        return filter;
    }

    friend bool operator==(const LiftConfig&, const LiftConfig&) = default;
};

struct LiftedPair {
    Frame hp;
    Frame lp;
    MotionField field;
};

/// R(1/2 * MC^-1(DN(hp))). Shared verbatim by encoder and decoder.
inline Frame update_term(const Frame& hp, const MotionField& field, const LiftConfig& cfg)
{
    const FilterSpec dn = cfg.effective_filter();
    if (dn.kind == FilterKind::zero)
        return Frame(hp.width(), hp.height(), hp.bit_depth());
    Frame u = warp_inverse(denoise(hp, dn), field);
    for (Sample& s : u.samples())
        s = static_cast<Sample>(detail::div_round(s, 2));
    return u;
}

/// Forward lifting of one pair with a given motion field.
inline LiftedPair forward_pair(const Frame& odd, const Frame& even, const LiftConfig& cfg, const MotionField& field)
{
    require_same_shape(odd, even, "forward_pair");
    if (!field.covers(odd))
        throw DimensionError("forward_pair: motion field does not match frame size");
    Frame hp = subtract(even, warp(odd, field));
    Frame lp = add(odd, update_term(hp, field, cfg));
    return LiftedPair{std::move(hp), std::move(lp), field};
}

/// Forward lifting of one pair; estimates the motion from odd to even.
inline LiftedPair forward_pair(const Frame& odd, const Frame& even, const LiftConfig& cfg)
{
    cfg.validate();
    require_same_shape(odd, even, "forward_pair");
    MotionConfig mc = cfg.motion;
    if (cfg.mode == LiftMode::sbc)
        mc.mode = MotionMode::none;
    return forward_pair(odd, even, cfg, estimate_motion(odd, even, mc));
}

/// Returns {odd, even}; bit-exact inverse of forward_pair for the same cfg.
inline std::pair<Frame, Frame> inverse_pair(const Frame& hp, const Frame& lp, const MotionField& field,
                                            const LiftConfig& cfg)
{
    require_same_shape(hp, lp, "inverse_pair");
    if (!field.covers(hp))
        throw DimensionError("inverse_pair: motion field does not match frame size");
    Frame odd = subtract(lp, update_term(hp, field, cfg));
    Frame even = add(hp, warp(odd, field));
    return {std::move(odd), std::move(even)};
}

struct SubbandSet {
    std::vector<Frame> lp_frames;
    std::vector<Frame> hp_frames;
    std::vector<MotionField> fields;
    LiftConfig config{};
    std::optional<Frame> trailing_frame;

    std::size_t pairs() const noexcept { return lp_frames.size(); }

    std::size_t sample_count() const noexcept
    {
        std::size_t n = 0;
        for (const Frame& f : lp_frames)
            n += f.size();
        for (const Frame& f : hp_frames)
            n += f.size();
        if (trailing_frame)
            n += trailing_frame->size();
        return n;
    }
};

/// Motion field of every pair (frame 2t -> frame 2t+1).
inline std::vector<MotionField> estimate_pair_motion(const Sequence& seq, const MotionConfig& cfg)
{
    std::vector<MotionField> out;
    for (std::size_t t = 0; t + 1 < seq.frames.size(); t += 2)
        out.push_back(estimate_motion(seq.frames[t], seq.frames[t + 1], cfg));
    return out;
}

/// Decomposition reusing precomputed per-pair motion fields (e.g. one
/// estimation shared by a parameter sweep). cfg is canonicalised.
inline SubbandSet decompose(const Sequence& seq, const LiftConfig& cfg, std::span<const MotionField> fields)
{
    if (seq.frames.size() < 2)
        throw DimensionError("decompose: a sequence needs at least two frames");
    seq.validate();
    SubbandSet sb;
    sb.config = cfg.canonical();
    const std::size_t pairs = seq.frames.size() / 2;
    if (fields.size() != pairs)
        throw DimensionError("decompose: one motion field per pair required");
    for (std::size_t t = 0; t < pairs; ++t) {
        const MotionField& f = fields[t];
        if (sb.config.mode == LiftMode::sbc && !f.is_zero())
            throw ConfigError("decompose: sbc mode requires zero motion fields");
        LiftedPair p = forward_pair(seq.frames[2 * t], seq.frames[2 * t + 1], sb.config, f);
        sb.lp_frames.push_back(std::move(p.lp));
        sb.hp_frames.push_back(std::move(p.hp));
        sb.fields.push_back(std::move(p.field));
    }
    if (seq.frames.size() % 2 == 1)
        sb.trailing_frame = seq.frames.back();
    return sb;
}

inline SubbandSet decompose(const Sequence& seq, const LiftConfig& cfg)
{
    const LiftConfig c = cfg.canonical();
    MotionConfig mc = c.motion;
    if (c.mode == LiftMode::sbc)
        mc.mode = MotionMode::none;
    if (seq.frames.size() < 2)
        throw DimensionError("decompose: a sequence needs at least two frames");
    seq.validate();
    const auto fields = estimate_pair_motion(seq, mc);
    return decompose(seq, c, fields);
}

inline Sequence reconstruct(const SubbandSet& sb)
{
    if (sb.lp_frames.size() != sb.hp_frames.size() || sb.lp_frames.size() != sb.fields.size())
        throw DimensionError("reconstruct: subband lists differ in length");
    Sequence seq;
    for (std::size_t t = 0; t < sb.lp_frames.size(); ++t) {
        auto [odd, even] = inverse_pair(sb.hp_frames[t], sb.lp_frames[t], sb.fields[t], sb.config);
        seq.frames.push_back(std::move(odd));
        seq.frames.push_back(std::move(even));
    }
    if (sb.trailing_frame)
        seq.frames.push_back(*sb.trailing_frame);
    return seq;
}

} // namespace wldu

#endif
