// wldu: command-line front end for the temporal subband codec.
//
// Exit status: 0 on success, 2 for invalid arguments or configurations,
// 1 for I/O, format and dimension errors.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wldu/wldu.hpp"

namespace {

using namespace wldu;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SliceChoice {
    std::optional<int> slice;
    bool all = false;
};

std::vector<int> selected_slices(const Volume4D& vol, const SliceChoice& c)
{
    const int z_count = vol.dims().z;
    if (c.all) {
        std::vector<int> zs(static_cast<std::size_t>(z_count));
        for (int z = 0; z < z_count; ++z)
            zs[static_cast<std::size_t>(z)] = z;
        return zs;
    }
    if (!c.slice) {
        if (z_count > 1)
            throw UsageError("volume has " + std::to_string(z_count) + " slices; pass --slice N or --all-slices");
        return {0};
    }
    if (*c.slice < 0 || *c.slice >= z_count)
        throw UsageError("--slice " + std::to_string(*c.slice) + " out of range [0, " + std::to_string(z_count) + ")");
    return {*c.slice};
}

MotionMode parse_motion_mode(const std::string& s)
{
    if (s == "none")
        return MotionMode::none;
    if (s == "mesh")
        return MotionMode::mesh;
    if (s == "block")
        return MotionMode::block;
    throw UsageError("unknown motion mode '" + s + "'");
}

void write_text(const std::string& path, const std::string& text)
{
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out)
        throw IoError("write failed for '" + path + "'");
}

std::string summary_line(const SizeReport& s)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, "lp=%zu hp=%zu motion=%zu header=%zu total=%zu raw=%zu ratio=%.4f", s.lp_bytes,
                  s.hp_bytes, s.motion_bytes, s.header_bytes, s.total_bytes, s.raw_bytes, s.compression_ratio());
    return buf;
}

std::vector<Bitstream> load_streams(const std::string& path)
{
    Bytes data = read_file(path);
    if (is_archive(data))
        return read_archive(data);
    return {Bitstream{std::move(data)}};
}

Sequence clamp_to_range(Sequence seq)
{
    for (Frame& f : seq.frames) {
        const Sample hi = f.max_value();
        for (Sample& s : f.samples())
            s = std::clamp<Sample>(s, 0, hi);
    }
    return seq;
}

struct CompressArgs {
    std::string in, out;
    std::string mode = "mctf";
    std::string filter;
    int xi = 1;
    std::string mc;
    int grid = 8;
    int search = 8;
    bool verify = true;
    SliceChoice slices;
};

int cmd_compress(const CompressArgs& a)
{
    LiftConfig cfg;
    cfg.mode = parse_lift_mode(a.mode);
    if (cfg.mode == LiftMode::wldu && a.filter.empty())
        throw UsageError("--mode wldu requires --filter");
    if (!a.filter.empty())
        cfg.filter.kind = parse_filter_kind(a.filter);
    cfg.filter.xi = a.xi;
    const std::string mc = a.mc.empty() ? (cfg.mode == LiftMode::sbc ? "none" : "mesh") : a.mc;
    cfg.motion = MotionConfig{a.grid, a.search, parse_motion_mode(mc)};
    cfg.validate();

    const Volume4D vol = load_volume(a.in);
    const std::vector<int> zs = selected_slices(vol, a.slices);
    std::vector<Bitstream> streams;
    SizeReport total;
    for (int z : zs) {
        const Sequence seq = extract_sequence(vol, z);
        Encoded enc = encode_sequence(seq, cfg);
        if (a.verify && !(decode_sequence(enc.stream) == seq))
            throw FormatError("verification failed for slice " + std::to_string(z));
        total += enc.sizes;
        streams.push_back(std::move(enc.stream));
    }
    if (a.slices.all) {
        const Bytes archive = write_archive(streams);
        total.header_bytes += archive.size() - total.total_bytes;
        total.total_bytes = archive.size();
        write_file(a.out, archive);
    } else {
        write_file(a.out, streams.front().bytes);
    }
    std::cout << summary_line(total) << "\n";
    return 0;
}

int cmd_decompress(const std::string& in, const std::string& out, bool lp_only)
{
    const std::vector<Bitstream> streams = load_streams(in);
    std::vector<Sequence> slices;
    for (const Bitstream& s : streams)
        slices.push_back(lp_only ? clamp_to_range(extract_lp_preview(s)) : decode_sequence(s));
    save_volume(assemble_volume(slices), out);
    return 0;
}

int cmd_analyze(const std::string& orig, const std::string& stream, const std::optional<int>& slice,
                const std::string& out)
{
    const Volume4D vol = load_volume(orig);
    const std::vector<Bitstream> streams = load_streams(stream);
    std::vector<Sequence> originals;
    if (streams.size() == 1) {
        SliceChoice c{slice, false};
        if (!slice && vol.dims().z > 1)
            c.slice = 0;
        originals.push_back(extract_sequence(vol, selected_slices(vol, c).front()));
    } else {
        if (static_cast<std::size_t>(vol.dims().z) != streams.size())
            throw DimensionError("analyze: archive slice count differs from the volume");
        for (int z = 0; z < vol.dims().z; ++z)
            originals.push_back(extract_sequence(vol, z));
    }
    std::string csv = std::string(kAnalyzeCsvHeader) + "\n";
    for (const AnalyzeRow& r : analyze_streams(originals, streams))
        csv += to_csv(r) + "\n";
    write_text(out, csv);
    return 0;
}

struct SweepArgs {
    std::string in, out;
    std::vector<std::string> filters;
    std::vector<int> xis;
    std::string mc = "mesh";
    int grid = 8;
    int search = 8;
    SliceChoice slices;
};

int cmd_sweep(const SweepArgs& a)
{
    SweepOptions opt;
    if (!a.filters.empty()) {
        opt.filters.clear();
        for (const std::string& f : a.filters)
            opt.filters.push_back(parse_filter_kind(f));
    }
    for (FilterKind k : opt.filters)
        FilterSpec{k, 1}.validate();
    for (int xi : a.xis)
        FilterSpec{FilterKind::gauss, xi}.validate();
    opt.xis = a.xis;
    opt.motion = MotionConfig{a.grid, a.search, parse_motion_mode(a.mc)};
    opt.motion.validate();

    const Volume4D vol = load_volume(a.in);
    std::vector<Sequence> slices;
    for (int z : selected_slices(vol, a.slices))
        slices.push_back(extract_sequence(vol, z));

    std::string csv = std::string(kSweepCsvHeader) + "\n";
    for (const SweepRow& r : run_sweep(slices, opt))
        csv += to_csv(r) + "\n";
    write_text(a.out, csv);
    return 0;
}

int cmd_phantom(const std::string& out, const PhantomSpec& spec)
{
    save_volume(assemble_volume(generate_phantom(spec)), out);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Lossless motion-compensated temporal subband codec for 3-D+t volumes"};
    app.require_subcommand(1);

    CompressArgs ca;
    auto* compress = app.add_subcommand("compress", "Encode a DV4D volume into a WLDU stream (or WLDA archive)");
    compress->add_option("input", ca.in, "DV4D volume")->required();
    compress->add_option("output", ca.out, "output stream")->required();
    compress->add_option("--mode", ca.mode, "sbc, mctf, wldu or truncated")->capture_default_str();
    compress->add_option("--filter", ca.filter, "update filter: identity, zero, gauss, awf, nlm, gif");
    compress->add_option("--xi", ca.xi, "filter strength factor")->capture_default_str();
    compress->add_option("--mc", ca.mc, "motion model: none, mesh or block (default mesh; none for sbc)");
    compress->add_option("--grid", ca.grid, "mesh node spacing")->capture_default_str();
    compress->add_option("--search", ca.search, "search range")->capture_default_str();
    compress->add_flag("--verify,!--no-verify", ca.verify, "decode and compare before writing (default on)");
    auto* c_slice = compress->add_option("--slice", ca.slices.slice, "slice index z");
    compress->add_flag("--all-slices", ca.slices.all, "encode every slice into an archive")->excludes(c_slice);

    std::string d_in, d_out;
    bool lp_only = false;
    auto* decompress = app.add_subcommand("decompress", "Decode a stream or archive into a DV4D volume");
    decompress->add_option("input", d_in, "WLDU stream or WLDA archive")->required();
    decompress->add_option("output", d_out, "DV4D volume")->required();
    decompress->add_flag("--lp-only", lp_only, "write the half-rate LP preview (HP payloads are skipped)");

    std::string a_orig, a_stream, a_out;
    std::optional<int> a_slice;
    auto* analyze = app.add_subcommand("analyze", "Per-pair sizes and LP quality of a stream, as CSV");
    analyze->add_option("original", a_orig, "DV4D volume the stream was made from")->required();
    analyze->add_option("stream", a_stream, "WLDU stream or WLDA archive")->required();
    analyze->add_option("--slice", a_slice, "slice of the original a single stream belongs to (default 0)");
    analyze->add_option("--out", a_out, "CSV path (default stdout)");

    SweepArgs sa;
    auto* sweep = app.add_subcommand("sweep", "Filter-strength sweep with baseline rows, as CSV");
    sweep->add_option("input", sa.in, "DV4D volume")->required();
    sweep->add_option("--filters", sa.filters, "comma-separated filter kinds")->delimiter(',');
    sweep->add_option("--xi", sa.xis, "comma-separated xi values (default 1,10,...,100)")->delimiter(',');
    sweep->add_option("--mc", sa.mc, "motion model: none, mesh or block")->capture_default_str();
    sweep->add_option("--grid", sa.grid, "mesh node spacing")->capture_default_str();
    sweep->add_option("--search", sa.search, "search range")->capture_default_str();
    sweep->add_option("--out", sa.out, "CSV path (default stdout)");
    auto* s_slice = sweep->add_option("--slice", sa.slices.slice, "slice index z");
    sweep->add_flag("--all-slices", sa.slices.all, "sweep over every slice")->excludes(s_slice);

    std::string p_out;
    PhantomSpec ps;
    int p_seed = 1;
    auto* phantom = app.add_subcommand("phantom", "Write a synthetic beating-heart phantom as DV4D");
    phantom->add_option("output", p_out, "DV4D volume")->required();
    phantom->add_option("--width", ps.width)->capture_default_str();
    phantom->add_option("--height", ps.height)->capture_default_str();
    phantom->add_option("--frames", ps.frames)->capture_default_str();
    phantom->add_option("--amplitude", ps.motion_amplitude, "peak deformation in pixels")->capture_default_str();
    phantom->add_option("--sigma", ps.noise_sigma, "noise standard deviation in gray levels")->capture_default_str();
    phantom->add_option("--seed", p_seed)->capture_default_str()->check(CLI::NonNegativeNumber);
    phantom->add_option("--bit-depth", ps.bit_depth)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*compress)
            return cmd_compress(ca);
        if (*decompress)
            return cmd_decompress(d_in, d_out, lp_only);
        if (*analyze)
            return cmd_analyze(a_orig, a_stream, a_slice, a_out);
        if (*sweep)
            return cmd_sweep(sa);
        if (*phantom) {
            ps.seed = static_cast<std::uint64_t>(p_seed);
            return cmd_phantom(p_out, ps);
        }
    } catch (const UsageError& e) {
        std::cerr << "wldu: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "wldu: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "wldu: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
