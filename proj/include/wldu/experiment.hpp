#ifndef WLDU_EXPERIMENT_HPP
#define WLDU_EXPERIMENT_HPP

// Rate/quality evaluation of temporal decompositions and the xi sweep.
// Both the CLI and the acceptance suite go through these functions, so CSV
// values and library results are the same numbers.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wldu/codec.hpp"
#include "wldu/denoise.hpp"
#include "wldu/lifting.hpp"
#include "wldu/metrics.hpp"
#include "wldu/motion.hpp"

namespace wldu {

inline constexpr std::string_view kSweepCsvHeader =
    "mode,filter,xi,lp_bytes,hp_bytes,total_bytes,ratio,psnr_lp_db,ssim_lp";
inline constexpr std::string_view kAnalyzeCsvHeader = "pair,lp_bytes,hp_bytes,total_bytes,ratio,psnr_lp_db,ssim_lp";

struct PairQuality {
    double psnr_lp_db = 0.0;
    double ssim_lp = 0.0;
};

struct QualityReport {
    std::vector<PairQuality> pairs;
    double mean_psnr_lp_db = 0.0; ///< +inf if any pair is +inf
    double mean_ssim_lp = 0.0;
    SizeReport sizes;
};

/// Metrics of each LP frame against the original pair it summarises.
inline std::vector<PairQuality> evaluate_lp(const Sequence& original, std::span<const Frame> lp_frames,
                                            std::span<const MotionField> fields)
{
    if (lp_frames.size() != fields.size() || lp_frames.size() != original.frames.size() / 2)
        throw DimensionError("evaluate_lp: pair count mismatch");
    std::vector<PairQuality> out;
    for (std::size_t t = 0; t < lp_frames.size(); ++t) {
        const Frame& odd = original.frames[2 * t];
        const Frame& even = original.frames[2 * t + 1];
        const int bd = odd.bit_depth();
        out.push_back({psnr_lp(odd, even, lp_frames[t], fields[t], bd), ssim_lp(odd, even, lp_frames[t], fields[t], bd)});
    }
    return out;
}

inline void summarise(QualityReport& r)
{
    double p = 0.0, s = 0.0;
    for (const PairQuality& q : r.pairs) {
        p += q.psnr_lp_db;
        s += q.ssim_lp;
    }
    const double n = r.pairs.empty() ? 1.0 : static_cast<double>(r.pairs.size());
    r.mean_psnr_lp_db = p / n;
    r.mean_ssim_lp = s / n;
}

/// Encodes every slice with cfg and evaluates its LP subband. `fields`, when
/// non-empty, holds precomputed motion per slice and is reused.
inline QualityReport evaluate_config(std::span<const Sequence> slices, const LiftConfig& cfg,
                                     std::span<const std::vector<MotionField>> fields = {})
{
    QualityReport r;
    for (std::size_t z = 0; z < slices.size(); ++z) {
        const SubbandSet sb = fields.empty() ? decompose(slices[z], cfg) : decompose(slices[z], cfg, fields[z]);
        r.sizes += encode_subbands(sb).sizes;
        const auto q = evaluate_lp(slices[z], sb.lp_frames, sb.fields);
        r.pairs.insert(r.pairs.end(), q.begin(), q.end());
    }
    summarise(r);
    return r;
}

struct SweepRow {
    LiftMode mode = LiftMode::mctf;
    FilterKind filter = FilterKind::identity;
    int xi = 0; ///< 0 for rows whose mode ignores the filter
    SizeReport sizes;
    double mean_psnr_lp_db = 0.0;
    double mean_ssim_lp = 0.0;
};

inline std::string format_metric(double v, int decimals)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

inline std::string to_csv(const SweepRow& r)
{
    return std::string(to_string(r.mode)) + "," + std::string(to_string(r.filter)) + "," + std::to_string(r.xi) + "," +
           std::to_string(r.sizes.lp_bytes) + "," + std::to_string(r.sizes.hp_bytes) + "," +
           std::to_string(r.sizes.total_bytes) + "," + format_metric(r.sizes.compression_ratio(), 4) + "," +
           format_metric(r.mean_psnr_lp_db, 4) + "," + format_metric(r.mean_ssim_lp, 6);
}

struct SweepOptions {
    std::vector<FilterKind> filters{FilterKind::gauss, FilterKind::awf, FilterKind::nlm, FilterKind::gif};
    std::vector<int> xis;
    MotionConfig motion{};
    bool baselines = true;
};

/// Default strength list: 1, 10, 20, ..., 100.
inline std::vector<int> default_sweep_xis()
{
    std::vector<int> v{1};
    for (int x = 10; x <= 100; x += 10)
        v.push_back(x);
    return v;
}

inline SweepRow make_row(std::span<const Sequence> slices, const LiftConfig& cfg,
                         std::span<const std::vector<MotionField>> fields)
{
    const LiftConfig c = cfg.canonical();
    const QualityReport q = evaluate_config(slices, c, c.mode == LiftMode::sbc ? std::span<const std::vector<MotionField>>{} : fields);
    SweepRow row;
    row.mode = c.mode;
    row.filter = c.filter.kind;
    row.xi = c.mode == LiftMode::wldu ? c.filter.xi : 0;
    row.sizes = q.sizes;
    row.mean_psnr_lp_db = q.mean_psnr_lp_db;
    row.mean_ssim_lp = q.mean_ssim_lp;
    return row;
}

/// Baseline rows (sbc, mctf, truncated) followed by one wldu row per
/// (filter, xi), filters in the given order and xi ascending. Motion is
/// estimated once per slice and shared by every motion-compensated row.
inline std::vector<SweepRow> run_sweep(std::span<const Sequence> slices, const SweepOptions& opt)
{
    const MotionConfig mc = opt.motion;
    std::vector<std::vector<MotionField>> fields;
    for (const Sequence& s : slices)
        fields.push_back(estimate_pair_motion(s, mc));

    std::vector<SweepRow> rows;
    if (opt.baselines) {
        MotionConfig none = mc;
        none.mode = MotionMode::none;
        rows.push_back(make_row(slices, LiftConfig{LiftMode::sbc, none, {}}, fields));
        rows.push_back(make_row(slices, LiftConfig{LiftMode::mctf, mc, {}}, fields));
        rows.push_back(make_row(slices, LiftConfig{LiftMode::truncated, mc, {FilterKind::zero, 1}}, fields));
    }
    std::vector<int> xis = opt.xis.empty() ? default_sweep_xis() : opt.xis;
    std::sort(xis.begin(), xis.end());
    xis.erase(std::unique(xis.begin(), xis.end()), xis.end());
    for (FilterKind k : opt.filters)
        for (int xi : xis)
            rows.push_back(make_row(slices, LiftConfig{LiftMode::wldu, mc, FilterSpec{k, xi}}, fields));
    return rows;
}

struct AnalyzeRow {
    std::string label; ///< pair index, or "all"
    std::size_t lp_bytes = 0;
    std::size_t hp_bytes = 0;
    std::size_t total_bytes = 0;
    std::size_t raw_bytes = 0;
    double psnr_lp_db = 0.0;
    double ssim_lp = 0.0;
};

inline std::string to_csv(const AnalyzeRow& r)
{
    const double ratio = r.total_bytes == 0 ? 0.0 : static_cast<double>(r.raw_bytes) / static_cast<double>(r.total_bytes);
    return r.label + "," + std::to_string(r.lp_bytes) + "," + std::to_string(r.hp_bytes) + "," +
           std::to_string(r.total_bytes) + "," + format_metric(ratio, 4) + "," + format_metric(r.psnr_lp_db, 4) + "," +
           format_metric(r.ssim_lp, 6);
}

/// Per-pair rows for the streams of consecutive slices, numbered across
/// slices, followed by an "all" row. Pair totals count the motion field, both
/// payloads and their length fields; the "all" row counts whole streams.
/// Only the LP layer is decoded.
inline std::vector<AnalyzeRow> analyze_streams(std::span<const Sequence> originals, std::span<const Bitstream> streams)
{
    if (originals.size() != streams.size())
        throw DimensionError("analyze: slice count mismatch");
    std::vector<AnalyzeRow> rows;
    AnalyzeRow all{"all"};
    double psnr_sum = 0.0, ssim_sum = 0.0;
    std::size_t n = 0;
    for (std::size_t z = 0; z < streams.size(); ++z) {
        MemorySource src(streams[z].bytes);
        const LpLayer layer = read_lp_layer(src);
        const StreamHeader& h = layer.header;
        const Sequence& orig = originals[z];
        orig.validate();
        if (orig.frames.size() != static_cast<std::size_t>(h.frames) || orig.frames.front().width() != h.width ||
            orig.frames.front().height() != h.height)
            throw DimensionError("analyze: original does not match the stream geometry");
        const auto q = evaluate_lp(orig, layer.lp_frames, layer.fields);
        const std::size_t frame_raw = 2 * static_cast<std::size_t>(h.width) * static_cast<std::size_t>(h.height);
        for (std::size_t t = 0; t < h.pairs(); ++t) {
            AnalyzeRow r;
            r.label = std::to_string(rows.size());
            r.lp_bytes = layer.lp_payload_bytes[t];
            r.hp_bytes = layer.hp_payload_bytes[t];
            r.total_bytes = detail::field_bytes(layer.fields[t]) + 8 + r.lp_bytes + r.hp_bytes;
            r.raw_bytes = 2 * frame_raw;
            r.psnr_lp_db = q[t].psnr_lp_db;
            r.ssim_lp = q[t].ssim_lp;
            psnr_sum += r.psnr_lp_db;
            ssim_sum += r.ssim_lp;
            ++n;
            all.lp_bytes += r.lp_bytes;
            all.hp_bytes += r.hp_bytes;
            rows.push_back(std::move(r));
        }
        all.lp_bytes += layer.trailing_payload_bytes;
        all.total_bytes += streams[z].bytes.size();
        all.raw_bytes += frame_raw * static_cast<std::size_t>(h.frames);
    }
    all.psnr_lp_db = n == 0 ? 0.0 : psnr_sum / static_cast<double>(n);
    all.ssim_lp = n == 0 ? 0.0 : ssim_sum / static_cast<double>(n);
    rows.push_back(std::move(all));
    return rows;
}

} // namespace wldu

#endif
