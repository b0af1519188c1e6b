#ifndef WLDU_TESTS_SUPPORT_HPP
#define WLDU_TESTS_SUPPORT_HPP

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <span>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>
#include <string>

#include "wldu/wldu.hpp"

namespace testing_support {

inline wldu::Frame random_frame(int w, int h, std::uint64_t seed, int lo = 0, int hi = 4095, int bit_depth = 12)
{
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dist(lo, hi);
    wldu::Frame f(w, h, bit_depth);
    for (auto& s : f.samples())
        s = dist(rng);
    return f;
}

inline wldu::Sequence random_sequence(int w, int h, int t, std::uint64_t seed)
{
    wldu::Sequence s;
    for (int i = 0; i < t; ++i)
        s.frames.push_back(random_frame(w, h, seed * 131 + static_cast<std::uint64_t>(i)));
    return s;
}

/// Smooth blobs plus mild noise: content the block matcher can lock onto.
inline wldu::Frame textured_frame(int w, int h, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double fx[6], fy[6], ph[6];
    for (int k = 0; k < 6; ++k) {
        fx[k] = 0.2 + 0.5 * u(rng);
        fy[k] = 0.2 + 0.5 * u(rng);
        ph[k] = 6.28 * u(rng);
    }
    wldu::Frame f(w, h, 12);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double v = 2000.0;
            for (int k = 0; k < 6; ++k)
                v += 150.0 * std::sin(fx[k] * x + ph[k]) * std::cos(fy[k] * y + ph[k] * 0.5);
            f(x, y) = static_cast<wldu::Sample>(v) + static_cast<wldu::Sample>(rng() % 7);
        }
    return f;
}

inline std::uint64_t fnv1a(std::span<const std::uint8_t> data)
{
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint8_t b : data) {
        h ^= b;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t fnv1a(const std::string& s)
{
    return fnv1a(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

/// Fresh scratch directory, removed on destruction.
class ScratchDir {
public:
    explicit ScratchDir(const std::string& tag)
    {
        static int counter = 0;
        m_path = std::filesystem::temp_directory_path() /
                 ("wldu_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(m_path);
        std::filesystem::create_directories(m_path);
    }
    ~ScratchDir() { std::filesystem::remove_all(m_path); }
    ScratchDir(const ScratchDir&) = delete;
    ScratchDir& operator=(const ScratchDir&) = delete;

    std::string file(const std::string& name) const { return (m_path / name).string(); }

private:
    std::filesystem::path m_path;
};

inline std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Runs the CLI with the given argument string; stdout and stderr go to files
/// under `dir`. Returns the exit status.
inline int run_cli(const ScratchDir& dir, const std::string& args, std::string* out = nullptr,
                   std::string* err = nullptr)
{
    const std::string o = dir.file("stdout.txt");
    const std::string e = dir.file("stderr.txt");
    const std::string cmd = std::string("\"") + WLDU_CLI_PATH + "\" " + args + " >\"" + o + "\" 2>\"" + e + "\"";
    const int rc = std::system(cmd.c_str());
    if (out)
        *out = slurp(o);
    if (err)
        *err = slurp(e);
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

} // namespace testing_support

#endif
