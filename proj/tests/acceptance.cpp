// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"

using namespace wldu;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// 128x128, T = 10, 4 px deformation.
Sequence phantom(std::uint64_t seed, double sigma)
{
    PhantomSpec ps;
    ps.seed = seed;
    ps.noise_sigma = sigma;
    return generate_phantom(ps);
}

constexpr std::uint64_t kSeeds[] = {1, 2, 3};
constexpr double kNoisySigma = 15.0;

std::vector<Sequence> noisy_phantoms()
{
    std::vector<Sequence> v;
    for (std::uint64_t s : kSeeds)
        v.push_back(phantom(s, kNoisySigma));
    return v;
}

std::vector<LiftConfig> lossless_grid()
{
    std::vector<LiftConfig> cfgs{
        LiftConfig{LiftMode::sbc, MotionConfig{8, 8, MotionMode::none}, {}},
        LiftConfig{LiftMode::mctf, {}, {}},
        LiftConfig{LiftMode::truncated, {}, {FilterKind::zero, 1}},
    };
    for (FilterKind k : {FilterKind::gauss, FilterKind::awf, FilterKind::nlm, FilterKind::gif})
        for (int xi : {1, 50, 100})
            cfgs.push_back(LiftConfig{LiftMode::wldu, {}, {k, xi}});
    return cfgs;
}

Outcome lossless()
{
    int runs = 0, failures = 0;
    for (std::uint64_t seed : kSeeds)
        for (double sigma : {0.0, 5.0, 15.0}) {
            const Sequence seq = phantom(seed, sigma);
            for (const LiftConfig& cfg : lossless_grid()) {
                ++runs;
                if (!(decode_sequence(encode_sequence(seq, cfg).stream) == seq))
                    ++failures;
            }
        }
    return {failures == 0, fmt("%d/%d configurations bit-exact", runs - failures, runs)};
}

Outcome equivalences()
{
    bool ok = true;
    int checks = 0;
    for (std::uint64_t seed : kSeeds) {
        const Sequence seq = phantom(seed, kNoisySigma);
        const auto stream = [&](const LiftConfig& c) { return encode_sequence(seq, c).stream; };
        ok &= stream({LiftMode::wldu, {}, {FilterKind::identity, 1}}) == stream({LiftMode::mctf, {}, {}});
        ok &= stream({LiftMode::wldu, {}, {FilterKind::zero, 1}}) == stream({LiftMode::truncated, {}, {FilterKind::zero, 1}});
        ok &= stream({LiftMode::mctf, MotionConfig{8, 8, MotionMode::none}, {}}) ==
              stream({LiftMode::sbc, MotionConfig{8, 8, MotionMode::none}, {}});
        checks += 3;
    }
    return {ok, fmt("%d stream comparisons, %s", checks, ok ? "all identical" : "mismatch found")};
}

struct NoisySweep {
    std::vector<SweepRow> rows;
    const SweepRow& baseline(LiftMode m) const
    {
        return *std::find_if(rows.begin(), rows.end(), [m](const SweepRow& r) { return r.mode == m; });
    }
    std::vector<const SweepRow*> wldu(FilterKind k) const
    {
        std::vector<const SweepRow*> v;
        for (const SweepRow& r : rows)
            if (r.mode == LiftMode::wldu && r.filter == k)
                v.push_back(&r);
        return v;
    }
};

const NoisySweep& noisy_sweep()
{
    static const NoisySweep sweep = [] {
        SweepOptions opt;
        opt.filters = {FilterKind::gauss, FilterKind::gif};
        return NoisySweep{run_sweep(noisy_phantoms(), opt)};
    }();
    return sweep;
}

Outcome truncated_bound()
{
    const NoisySweep& s = noisy_sweep();
    const std::size_t tr = s.baseline(LiftMode::truncated).sizes.lp_bytes;
    bool ok = true;
    std::string below;
    const SweepRow* at100 = nullptr;
    for (const SweepRow* r : s.wldu(FilterKind::gauss)) {
        if (r->sizes.lp_bytes < tr) {
            ok = false;
            below += fmt(" xi=%d:%zu", r->xi, r->sizes.lp_bytes);
        }
        if (r->xi == 100)
            at100 = r;
    }
    const double rel = (double(at100->sizes.lp_bytes) - double(tr)) / double(tr);
    ok &= std::abs(rel) <= 0.01;
    return {ok, fmt("truncated lp=%zu, gauss xi=100 lp=%zu (%+.4f%%); rows below bound:%s", tr, at100->sizes.lp_bytes,
                    100.0 * rel, below.empty() ? " none" : below.c_str())};
}

Outcome quality_gap()
{
    const NoisySweep& s = noisy_sweep();
    const double m = s.baseline(LiftMode::mctf).mean_psnr_lp_db;
    const double t = s.baseline(LiftMode::truncated).mean_psnr_lp_db;
    return {m - t >= 1.0, fmt("mctf %.4f dB, truncated %.4f dB, gap %.4f dB (need >= 1)", m, t, m - t)};
}

Outcome gif_tradeoff()
{
    const NoisySweep& s = noisy_sweep();
    const SweepRow& mctf = s.baseline(LiftMode::mctf);
    for (const SweepRow* r : s.wldu(FilterKind::gif))
        if (r->sizes.lp_bytes < mctf.sizes.lp_bytes && mctf.mean_psnr_lp_db - r->mean_psnr_lp_db <= 1.0)
            return {true, fmt("gif xi=%d: lp %zu < mctf %zu at %.4f dB vs %.4f dB", r->xi, r->sizes.lp_bytes,
                              mctf.sizes.lp_bytes, r->mean_psnr_lp_db, mctf.mean_psnr_lp_db)};
    return {false, fmt("no gif xi beats mctf lp=%zu within 1 dB of %.4f", mctf.sizes.lp_bytes, mctf.mean_psnr_lp_db)};
}

Outcome ghosting()
{
    std::vector<Sequence> clean;
    for (std::uint64_t seed : kSeeds)
        clean.push_back(phantom(seed, 0.0));
    const double sbc = evaluate_config(clean, LiftConfig{LiftMode::sbc, MotionConfig{8, 8, MotionMode::none}, {}}).mean_psnr_lp_db;
    const double mctf = evaluate_config(clean, LiftConfig{}).mean_psnr_lp_db;
    return {mctf - sbc >= 0.5, fmt("amplitude 4 px: mctf %.4f dB, sbc %.4f dB, margin %.4f dB", mctf, sbc, mctf - sbc)};
}

Outcome noise_estimator()
{
    double worst = 0.0;
    for (double sigma : {2.0, 5.0, 10.0, 20.0})
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            std::mt19937_64 rng(seed * 7919 + static_cast<std::uint64_t>(sigma));
            Frame f(256, 256, 12);
            for (Sample& s : f.samples())
                s = 2048 + static_cast<Sample>(detail::round_half_away(sigma * detail::pseudo_gaussian(rng)));
            const double est = std::sqrt(estimate_noise(f).sigma2);
            worst = std::max(worst, std::abs(est - sigma) / sigma);
        }
    return {worst <= 0.10, fmt("worst relative error %.4f over 80 frames (limit 0.10)", worst)};
}

Outcome closed_forms()
{
    const Frame a = testing_support::random_frame(64, 64, 5, 0, 4094);
    Frame b = a;
    for (Sample& s : b.samples())
        s += 1;
    const MotionField zero(64, 64, MotionConfig{});
    // the offset applies to both halves of the pair
    const double p = psnr_lp(a, a, b, zero, 12);
    const double expect = 10.0 * std::log10(4095.0 * 4095.0);
    const double s = ssim(a, a, 12);
    return {std::abs(p - expect) <= 1e-9 && s == 1.0,
            fmt("psnr %.12f dB vs %.12f dB, ssim(x,x) = %.17g", p, expect, s)};
}

Outcome entropy_mechanism()
{
    bool ok = true;
    std::string detail;
    for (std::uint64_t seed : kSeeds) {
        const Sequence seq = phantom(seed, kNoisySigma);
        const auto fields = estimate_pair_motion(seq, MotionConfig{});
        const auto entropy = [&](const LiftConfig& c) {
            const SubbandSet sb = decompose(seq, c, fields);
            double h = 0.0;
            for (const Frame& f : sb.lp_frames)
                h += sample_entropy(f);
            return h / static_cast<double>(sb.lp_frames.size());
        };
        const double g = entropy({LiftMode::wldu, {}, {FilterKind::gauss, 100}});
        const double m = entropy({LiftMode::mctf, {}, {}});
        ok &= g <= m;
        detail += fmt(" seed %d: gauss %.4f mctf %.4f;", int(seed), g, m);
    }
    return {ok, "mean LP entropy (bits/sample)" + detail};
}

Outcome lp_only_scalability()
{
    bool ok = true;
    std::size_t hp_total = 0, skipped = 0;
    for (const LiftConfig& cfg : {LiftConfig{}, LiftConfig{LiftMode::wldu, {}, {FilterKind::nlm, 20}}}) {
        const Sequence seq = generate_phantom(PhantomSpec{128, 128, 9, 4.0, kNoisySigma, 1});
        const SubbandSet sb = decompose(seq, cfg);
        const Encoded e = encode_subbands(sb);
        MemorySource src(e.stream.bytes);
        const Sequence preview = extract_lp_preview(src);
        ok &= src.bytes_skipped() == e.sizes.hp_bytes;
        ok &= src.bytes_read() + src.bytes_skipped() == e.stream.bytes.size();
        hp_total += e.sizes.hp_bytes;
        skipped += src.bytes_skipped();
        std::vector<Frame> expect = sb.lp_frames;
        expect.push_back(*sb.trailing_frame);
        ok &= preview.frames == expect;

        std::istringstream is(std::string(e.stream.bytes.begin(), e.stream.bytes.end()));
        StreamSource ss(is);
        ok &= extract_lp_preview(ss).frames == expect && ss.bytes_skipped() == e.sizes.hp_bytes;
    }

    // CLI preview of an in-range stream equals the encoder's LP frames
    testing_support::ScratchDir d("accept_lp");
    const Sequence seq = generate_phantom(PhantomSpec{64, 64, 6, 4.0, 5.0, 3});
    save_volume(assemble_volume(seq), d.file("in.dv4d"));
    ok &= testing_support::run_cli(d, "compress \"" + d.file("in.dv4d") + "\" \"" + d.file("s.wldu") + "\"") == 0;
    ok &= testing_support::run_cli(d, "decompress --lp-only \"" + d.file("s.wldu") + "\" \"" + d.file("lp.dv4d") + "\"") == 0;
    const SubbandSet sb = decompose(seq, LiftConfig{});
    Sequence expect{sb.lp_frames};
    for (Frame& f : expect.frames)
        for (Sample& s : f.samples())
            s = std::clamp<Sample>(s, 0, f.max_value());
    ok &= extract_sequence(load_volume(d.file("lp.dv4d")), 0) == expect;
    return {ok, fmt("HP bytes %zu, skipped unread %zu; previews bit-exact: %s", hp_total, skipped, ok ? "yes" : "no")};
}

// Frozen after the first run; any change to the coder or metrics shows up here.
constexpr std::uint64_t kGoldenStream = 0x8b009922f5f3c91eull;
constexpr std::uint64_t kGoldenSweepCsv = 0x54d67974910e75ccull;

Outcome determinism()
{
    testing_support::ScratchDir d("accept_det");
    const std::string vol = d.file("in.dv4d");
    bool ok = testing_support::run_cli(d, "phantom \"" + vol + "\" --sigma 15 --seed 7") == 0;
    std::uint64_t h_stream[2]{}, h_csv[2]{};
    for (int run = 0; run < 2; ++run) {
        const std::string s = d.file("s" + std::to_string(run) + ".wldu");
        const std::string c = d.file("c" + std::to_string(run) + ".csv");
        ok &= testing_support::run_cli(d, "compress \"" + vol + "\" \"" + s + "\" --mode wldu --filter gif --xi 30") == 0;
        ok &= testing_support::run_cli(d, "sweep \"" + vol + "\" --filters gauss,nlm --xi 1,50 --out \"" + c + "\"") == 0;
        h_stream[run] = testing_support::fnv1a(testing_support::slurp(s));
        h_csv[run] = testing_support::fnv1a(testing_support::slurp(c));
    }
    const Sequence seq = generate_phantom(PhantomSpec{128, 128, 10, 4.0, 15.0, 7});
    const Bytes lib = encode_sequence(seq, LiftConfig{LiftMode::wldu, {}, {FilterKind::gif, 30}}).stream.bytes;
    ok &= testing_support::fnv1a(lib) == h_stream[0];
    ok &= h_stream[0] == h_stream[1] && h_csv[0] == h_csv[1];
    ok &= h_stream[0] == kGoldenStream && h_csv[0] == kGoldenSweepCsv;
    return {ok, fmt("stream %016" PRIx64 " / %016" PRIx64 ", csv %016" PRIx64 " / %016" PRIx64, h_stream[0], h_stream[1],
                    h_csv[0], h_csv[1])};
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 losslessness", lossless},
        {"2 mode equivalences", equivalences},
        {"3 truncated-transform bound", truncated_bound},
        {"4a mctf vs truncated quality", quality_gap},
        {"4b gif rate/quality trade-off", gif_tradeoff},
        {"5 ghosting without motion compensation", ghosting},
        {"6 noise estimator", noise_estimator},
        {"7 psnr and ssim closed forms", closed_forms},
        {"8 entropy of the denoised-update LP", entropy_mechanism},
        {"9 lp-only scalability", lp_only_scalability},
        {"10 determinism and golden files", determinism},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
