#include <gtest/gtest.h>

#include "support.hpp"

using namespace wldu;
using testing_support::run_cli;
using testing_support::ScratchDir;

namespace {

std::string small_phantom(const ScratchDir& d, int frames = 4)
{
    const std::string p = d.file("in.dv4d");
    EXPECT_EQ(run_cli(d, "phantom \"" + p + "\" --width 48 --height 48 --sigma 6 --frames " + std::to_string(frames)), 0);
    return p;
}

std::string q(const std::string& s) { return "\"" + s + "\""; }

} // namespace

TEST(Cli, CompressDecompressRoundTripPerMode)
{
    ScratchDir d("cli_rt");
    const std::string in = small_phantom(d);
    const Volume4D original = load_volume(in);
    for (const std::string& opts : {std::string("--mode sbc"), std::string("--mode mctf"),
                                    std::string("--mode truncated"), std::string("--mode wldu --filter nlm --xi 40"),
                                    std::string("--mode mctf --mc block --grid 16 --search 4")}) {
        std::string out;
        ASSERT_EQ(run_cli(d, "compress " + q(in) + " " + q(d.file("s.wldu")) + " " + opts, &out), 0) << opts;
        EXPECT_EQ(out.rfind("lp=", 0), 0u);
        EXPECT_NE(out.find(" ratio="), std::string::npos);
        ASSERT_EQ(run_cli(d, "decompress " + q(d.file("s.wldu")) + " " + q(d.file("o.dv4d"))), 0);
        EXPECT_EQ(testing_support::slurp(in), testing_support::slurp(d.file("o.dv4d"))) << opts;
    }
}

TEST(Cli, SummaryLineMatchesLibrary)
{
    ScratchDir d("cli_sum");
    const std::string in = small_phantom(d);
    std::string out;
    ASSERT_EQ(run_cli(d, "compress " + q(in) + " " + q(d.file("s.wldu")) + " --mode wldu --filter gif --xi 20", &out), 0);
    const Sequence seq = extract_sequence(load_volume(in), 0);
    const Encoded e = encode_sequence(seq, LiftConfig{LiftMode::wldu, {}, {FilterKind::gif, 20}});
    char buf[256];
    std::snprintf(buf, sizeof buf, "lp=%zu hp=%zu motion=%zu header=%zu total=%zu raw=%zu ratio=%.4f\n", e.sizes.lp_bytes,
                  e.sizes.hp_bytes, e.sizes.motion_bytes, e.sizes.header_bytes, e.sizes.total_bytes,
                  e.sizes.raw_bytes, e.sizes.compression_ratio());
    EXPECT_EQ(out, buf);
    EXPECT_EQ(testing_support::slurp(d.file("s.wldu")), std::string(e.stream.bytes.begin(), e.stream.bytes.end()));
}

TEST(Cli, UsageErrorsExitTwo)
{
    ScratchDir d("cli_usage");
    const std::string in = small_phantom(d);
    const std::string out = q(d.file("s.wldu"));
    EXPECT_EQ(run_cli(d, "compress " + q(in) + " " + out + " --mode wldu"), 2);
    EXPECT_EQ(run_cli(d, "compress " + q(in) + " " + out + " --mode sbc --mc mesh"), 2);
    EXPECT_EQ(run_cli(d, "compress " + q(in) + " " + out + " --mode bogus"), 2);
    EXPECT_EQ(run_cli(d, "compress " + q(in) + " " + out + " --mode wldu --filter bm3d"), 2);
    EXPECT_EQ(run_cli(d, "compress " + q(in) + " " + out + " --mode wldu --filter gauss --xi 0"), 2);
    EXPECT_EQ(run_cli(d, "compress " + q(in) + " " + out + " --grid 1"), 2);
    EXPECT_EQ(run_cli(d, "compress " + q(in) + " " + out + " --slice 0 --all-slices"), 2);
    EXPECT_EQ(run_cli(d, "compress " + q(in) + " " + out + " --slice 5"), 2);
    EXPECT_EQ(run_cli(d, "frobnicate"), 2);
    EXPECT_EQ(run_cli(d, ""), 2);
    EXPECT_EQ(run_cli(d, "--help"), 0);
}

TEST(Cli, DataErrorsExitOne)
{
    ScratchDir d("cli_data");
    const std::string in = small_phantom(d);
    ASSERT_EQ(run_cli(d, "compress " + q(in) + " " + q(d.file("s.wldu"))), 0);
    std::string bytes = testing_support::slurp(d.file("s.wldu"));
    bytes.resize(bytes.size() - 5);
    std::ofstream(d.file("cut.wldu"), std::ios::binary) << bytes;
    std::string err;
    EXPECT_EQ(run_cli(d, "decompress " + q(d.file("cut.wldu")) + " " + q(d.file("o.dv4d")), nullptr, &err), 1);
    EXPECT_FALSE(err.empty());
    EXPECT_EQ(run_cli(d, "decompress " + q(d.file("missing.wldu")) + " " + q(d.file("o.dv4d"))), 1);
    EXPECT_EQ(run_cli(d, "compress " + q(d.file("s.wldu")) + " " + q(d.file("x.wldu"))), 1);

    // a stream analysed against a volume of different geometry
    const std::string other = d.file("other.dv4d");
    ASSERT_EQ(run_cli(d, "phantom " + q(other) + " --width 32 --height 32 --frames 4"), 0);
    EXPECT_EQ(run_cli(d, "analyze " + q(other) + " " + q(d.file("s.wldu"))), 1);
}

TEST(Cli, LpOnlyMatchesLibraryPreview)
{
    ScratchDir d("cli_lp");
    const std::string in = small_phantom(d, 5);
    ASSERT_EQ(run_cli(d, "compress " + q(in) + " " + q(d.file("s.wldu")) + " --mode wldu --filter awf --xi 10"), 0);
    ASSERT_EQ(run_cli(d, "decompress --lp-only " + q(d.file("s.wldu")) + " " + q(d.file("lp.dv4d"))), 0);
    const Volume4D lp = load_volume(d.file("lp.dv4d"));
    EXPECT_EQ(lp.dims().t, 3);
    const Bitstream bs{read_file(d.file("s.wldu"))};
    Sequence preview = extract_lp_preview(bs);
    for (Frame& f : preview.frames)
        for (Sample& s : f.samples())
            s = std::clamp<Sample>(s, 0, f.max_value());
    EXPECT_TRUE(extract_sequence(lp, 0) == preview);
}

TEST(Cli, AnalyzeCsvMatchesLibrary)
{
    ScratchDir d("cli_an");
    const std::string in = small_phantom(d);
    ASSERT_EQ(run_cli(d, "compress " + q(in) + " " + q(d.file("s.wldu"))), 0);
    std::string out;
    ASSERT_EQ(run_cli(d, "analyze " + q(in) + " " + q(d.file("s.wldu")), &out), 0);
    const Sequence seq = extract_sequence(load_volume(in), 0);
    const Bitstream bs{read_file(d.file("s.wldu"))};
    std::string expected = "pair,lp_bytes,hp_bytes,total_bytes,ratio,psnr_lp_db,ssim_lp\n";
    for (const AnalyzeRow& r : analyze_streams(std::span<const Sequence>(&seq, 1), std::span<const Bitstream>(&bs, 1)))
        expected += to_csv(r) + "\n";
    EXPECT_EQ(out, expected);
    ASSERT_EQ(run_cli(d, "analyze " + q(in) + " " + q(d.file("s.wldu")) + " --out " + q(d.file("a.csv"))), 0);
    EXPECT_EQ(testing_support::slurp(d.file("a.csv")), expected);
}

TEST(Cli, SweepCsvMatchesLibrary)
{
    ScratchDir d("cli_sw");
    const std::string in = small_phantom(d);
    std::string out;
    ASSERT_EQ(run_cli(d, "sweep " + q(in) + " --filters gauss,gif --xi 50,5", &out), 0);
    const Sequence seq = extract_sequence(load_volume(in), 0);
    SweepOptions opt;
    opt.filters = {FilterKind::gauss, FilterKind::gif};
    opt.xis = {5, 50};
    std::string expected = std::string(kSweepCsvHeader) + "\n";
    for (const SweepRow& r : run_sweep(std::span<const Sequence>(&seq, 1), opt))
        expected += to_csv(r) + "\n";
    EXPECT_EQ(out, expected);
    EXPECT_EQ(std::count(out.begin(), out.end(), '\n'), 1 + 3 + 4);
    EXPECT_EQ(run_cli(d, "sweep " + q(in) + " --filters median"), 2);
}

TEST(Cli, PhantomIsDeterministic)
{
    ScratchDir d("cli_ph");
    ASSERT_EQ(run_cli(d, "phantom " + q(d.file("a.dv4d")) + " --width 40 --height 40 --frames 3 --sigma 4 --seed 9"), 0);
    ASSERT_EQ(run_cli(d, "phantom " + q(d.file("b.dv4d")) + " --width 40 --height 40 --frames 3 --sigma 4 --seed 9"), 0);
    EXPECT_EQ(testing_support::slurp(d.file("a.dv4d")), testing_support::slurp(d.file("b.dv4d")));
    EXPECT_EQ(testing_support::fnv1a(testing_support::slurp(d.file("a.dv4d"))), 0x2c2e904182297857ull);
    const Volume4D v = load_volume(d.file("a.dv4d"));
    EXPECT_EQ(v.dims().t, 3);
    PhantomSpec ps{40, 40, 3, 4.0, 4.0, 9};
    EXPECT_TRUE(extract_sequence(v, 0) == generate_phantom(ps));
}

TEST(Cli, AllSlicesWritesArchive)
{
    ScratchDir d("cli_arc");
    const std::vector<Sequence> slices{generate_phantom(PhantomSpec{32, 32, 4, 3.0, 5.0, 1}),
                                       generate_phantom(PhantomSpec{32, 32, 4, 3.0, 5.0, 2})};
    save_volume(assemble_volume(slices), d.file("v.dv4d"));
    EXPECT_EQ(run_cli(d, "compress " + q(d.file("v.dv4d")) + " " + q(d.file("a.wlda"))), 2);
    ASSERT_EQ(run_cli(d, "compress " + q(d.file("v.dv4d")) + " " + q(d.file("a.wlda")) + " --all-slices"), 0);
    const Bytes arc = read_file(d.file("a.wlda"));
    ASSERT_TRUE(is_archive(arc));
    EXPECT_EQ(read_archive(arc).size(), 2u);
    ASSERT_EQ(run_cli(d, "decompress " + q(d.file("a.wlda")) + " " + q(d.file("o.dv4d"))), 0);
    EXPECT_EQ(testing_support::slurp(d.file("v.dv4d")), testing_support::slurp(d.file("o.dv4d")));

    ASSERT_EQ(run_cli(d, "compress " + q(d.file("v.dv4d")) + " " + q(d.file("z1.wldu")) + " --slice 1"), 0);
    ASSERT_EQ(run_cli(d, "decompress " + q(d.file("z1.wldu")) + " " + q(d.file("z1.dv4d"))), 0);
    EXPECT_TRUE(extract_sequence(load_volume(d.file("z1.dv4d")), 0) == slices[1]);

    std::string out;
    ASSERT_EQ(run_cli(d, "analyze " + q(d.file("v.dv4d")) + " " + q(d.file("a.wlda")), &out), 0);
    EXPECT_NE(out.find("\n3,"), std::string::npos); // pairs numbered across slices
    EXPECT_NE(out.find("\nall,"), std::string::npos);
}
