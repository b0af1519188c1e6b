#ifndef WLDU_DETAIL_ARITH_HPP
#define WLDU_DETAIL_ARITH_HPP

// Integer rounding helpers and a small set of elementary functions built
// only from IEEE-754 basic operations (+, -, *, /, sqrt). libm's exp/sin are
// not required to be correctly rounded, so anything that feeds a bitstream
// or a golden file goes through these instead.

#include <cmath>
#include <cstdint>

namespace wldu::detail {

/// num / den rounded half away from zero. den must be positive.
constexpr std::int64_t div_round(std::int64_t num, std::int64_t den) noexcept
{
    if (num >= 0)
        return (2 * num + den) / (2 * den);
    return -((-2 * num + den) / (2 * den));
}

/// floor(num / den) for positive den.
constexpr std::int64_t floor_div(std::int64_t num, std::int64_t den) noexcept
{
    std::int64_t q = num / den;
    if ((num % den) != 0 && num < 0)
        --q;
    return q;
}

/// Nearest integer, ties away from zero.
inline std::int64_t round_half_away(double v) noexcept
{
    return static_cast<std::int64_t>(v < 0.0 ? -std::floor(-v + 0.5) : std::floor(v + 0.5));
}

/// Half-sample symmetric reflection of an index into [0, n): -1 -> 0, n -> n-1.
/// Works for arbitrarily distant indices (periodic with period 2n).
constexpr int reflect(int i, int n) noexcept
{
    if (n == 1)
        return 0;
    const int period = 2 * n;
    int m = i % period;
    if (m < 0)
        m += period;
    return m < n ? m : period - 1 - m;
}

constexpr int clamp_index(int i, int n) noexcept
{
    return i < 0 ? 0 : (i >= n ? n - 1 : i);
}

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kLn2 = 0.69314718055994530942;

/// exp(x), reproducible across platforms. Relative error ~1e-15.
inline double det_exp(double x) noexcept
{
    if (x < -745.0)
        return 0.0;
    if (x > 709.0)
        return HUGE_VAL;
    const double k = std::nearbyint(x / kLn2);
    const double r = x - k * kLn2;
    // Taylor series on |r| <= ln2/2
    double term = 1.0;
    double sum = 1.0;
    for (int n = 1; n <= 18; ++n) {
        term = term * r / n;
        sum = sum + term;
    }
    return std::ldexp(sum, static_cast<int>(k));
}

/// sin(x), reproducible across platforms.
inline double det_sin(double x) noexcept
{
    const double two_pi = 2.0 * kPi;
    double r = x - std::nearbyint(x / two_pi) * two_pi; // [-pi, pi]
    if (r > kPi / 2)
        r = kPi - r;
    else if (r < -kPi / 2)
        r = -kPi - r;
    const double r2 = r * r;
    double term = r;
    double sum = r;
    for (int n = 1; n <= 12; ++n) {
        term = -term * r2 / ((2 * n) * (2 * n + 1));
        sum = sum + term;
    }
    return sum;
}

inline double det_cos(double x) noexcept { return det_sin(x + kPi / 2); }

} // namespace wldu::detail

#endif
