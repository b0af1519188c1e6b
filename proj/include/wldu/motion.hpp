#ifndef WLDU_MOTION_HPP
#define WLDU_MOTION_HPP

// Mesh-based motion model. A MotionField stores integer displacements on a
// regular node grid (spacing grid_size); pixels between nodes get the
// bilinear blend of their four surrounding node displacements, so interior
// warping is sub-pixel.
//
// Sign convention (backward warping): warp(f, d)(p) = f(p + d(p)).
// The displacement points from an output pixel to its source location in the
// reference frame.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#include "wldu/detail/arith.hpp"
#include "wldu/error.hpp"
#include "wldu/frame.hpp"

namespace wldu {

enum class MotionMode : std::uint8_t { none = 0, mesh = 1, block = 2 };

struct MotionConfig {
    int grid_size = 8;
    int search_range = 8;
    MotionMode mode = MotionMode::mesh;

    void validate() const
    {
        if (grid_size < 2 || grid_size > 255)
            throw ConfigError("motion: grid size must be in [2, 255]");
        if (search_range < 0 || search_range > 127)
            throw ConfigError("motion: search range must be in [0, 127]");
        if (mode != MotionMode::none && mode != MotionMode::mesh && mode != MotionMode::block)
            throw ConfigError("motion: unknown mode");
    }

    friend bool operator==(const MotionConfig&, const MotionConfig&) = default;
};

struct Displacement {
    int dx = 0;
    int dy = 0;
    friend bool operator==(const Displacement&, const Displacement&) = default;
};

class MotionField {
public:
    MotionField() = default;

    /// All-zero field covering a width x height frame.
    MotionField(int width, int height, const MotionConfig& cfg)
        : m_width(width), m_height(height), m_grid(cfg.grid_size), m_search(cfg.search_range), m_mode(cfg.mode)
    {
        cfg.validate();
        if (width <= 0 || height <= 0)
            throw DimensionError("motion field: frame dimensions must be positive");
        m_nodes_x = (width + m_grid - 1) / m_grid + 1;
        m_nodes_y = (height + m_grid - 1) / m_grid + 1;
        m_nodes.assign(static_cast<std::size_t>(m_nodes_x) * static_cast<std::size_t>(m_nodes_y), Displacement{});
    }

    int width() const noexcept { return m_width; }
    int height() const noexcept { return m_height; }
    int grid_size() const noexcept { return m_grid; }
    int search_range() const noexcept { return m_search; }
    MotionMode mode() const noexcept { return m_mode; }
    int nodes_x() const noexcept { return m_nodes_x; }
    int nodes_y() const noexcept { return m_nodes_y; }
    std::size_t node_count() const noexcept { return m_nodes.size(); }

    const Displacement& node(int i, int j) const noexcept { return m_nodes[idx(i, j)]; }

    void set_node(int i, int j, Displacement d)
    {
        if (std::abs(d.dx) > m_search || std::abs(d.dy) > m_search)
            throw ConfigError("motion field: displacement exceeds search range");
        m_nodes[idx(i, j)] = d;
    }

    const std::vector<Displacement>& nodes() const noexcept { return m_nodes; }

    bool is_zero() const noexcept
    {
        return std::all_of(m_nodes.begin(), m_nodes.end(), [](const Displacement& d) { return d.dx == 0 && d.dy == 0; });
    }

    bool covers(const Frame& f) const noexcept { return f.width() == m_width && f.height() == m_height; }

    MotionField negated() const
    {
        MotionField out = *this;
        for (Displacement& d : out.m_nodes)
            d = Displacement{-d.dx, -d.dy};
        return out;
    }

    friend bool operator==(const MotionField&, const MotionField&) = default;

private:
    std::size_t idx(int i, int j) const noexcept
    {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(m_nodes_x) + static_cast<std::size_t>(i);
    }

    int m_width = 0;
    int m_height = 0;
    int m_grid = 8;
    int m_search = 8;
    MotionMode m_mode = MotionMode::mesh;
    int m_nodes_x = 0;
    int m_nodes_y = 0;
    std::vector<Displacement> m_nodes;
};

namespace detail {

/// Candidate displacements in tie-break order: smaller |dx|+|dy|, then
/// smaller dy, then smaller dx.
inline std::vector<Displacement> search_order(int range)
{
    std::vector<Displacement> c;
    c.reserve(static_cast<std::size_t>((2 * range + 1) * (2 * range + 1)));
    for (int dy = -range; dy <= range; ++dy)
        for (int dx = -range; dx <= range; ++dx)
            c.push_back({dx, dy});
    std::stable_sort(c.begin(), c.end(), [](const Displacement& a, const Displacement& b) {
        const int la = std::abs(a.dx) + std::abs(a.dy);
        const int lb = std::abs(b.dx) + std::abs(b.dy);
        if (la != lb)
            return la < lb;
        if (a.dy != b.dy)
            return a.dy < b.dy;
        return a.dx < b.dx;
    });
    return c;
}

struct Rect {
    int x0, y0, x1, y1; // half-open
};

/// Sum of |current(p) - reference(p + d)| over the rectangle, reference
/// sampled with border clamping. Stops early once `bound` is exceeded.
inline std::int64_t window_sad(const Frame& reference, const Frame& current, Rect r, Displacement d,
                               std::int64_t bound)
{
    std::int64_t sad = 0;
    const bool inside = r.x0 + d.dx >= 0 && r.x1 - 1 + d.dx < reference.width() && r.y0 + d.dy >= 0 &&
                        r.y1 - 1 + d.dy < reference.height();
    for (int y = r.y0; y < r.y1; ++y) {
        if (inside) {
            const auto cur = current.row(y);
            const auto ref = reference.row(y + d.dy);
            for (int x = r.x0; x < r.x1; ++x)
                sad += std::abs(cur[static_cast<std::size_t>(x)] - ref[static_cast<std::size_t>(x + d.dx)]);
        } else {
            for (int x = r.x0; x < r.x1; ++x)
                sad += std::abs(current(x, y) - reference.clamped(x + d.dx, y + d.dy));
        }
        if (sad > bound)
            return sad;
    }
    return sad;
}

} // namespace detail

/// Per-node exhaustive block matching. For every mesh node the displacement
/// minimising SAD between `current` and the displaced `reference` over a
/// (2*grid)^2 window centred on the node is chosen (block mode: the g x g
/// block whose top-left corner is the node). Result satisfies
/// warp(reference, field) ~ current.
inline MotionField estimate_motion(const Frame& reference, const Frame& current, const MotionConfig& cfg)
{
    cfg.validate();
    require_same_shape(reference, current, "estimate_motion");
    MotionField field(reference.width(), reference.height(), cfg);
    if (cfg.mode == MotionMode::none || cfg.search_range == 0)
        return field;

    const auto candidates = detail::search_order(cfg.search_range);
    const int g = cfg.grid_size;
    const int W = reference.width();
    const int H = reference.height();
    for (int j = 0; j < field.nodes_y(); ++j) {
        for (int i = 0; i < field.nodes_x(); ++i) {
            const int nx = i * g;
            const int ny = j * g;
            detail::Rect r{};
            if (cfg.mode == MotionMode::mesh)
                r = {std::max(nx - g, 0), std::max(ny - g, 0), std::min(nx + g, W), std::min(ny + g, H)};
            else
                r = {nx, ny, std::min(nx + g, W), std::min(ny + g, H)};
            if (r.x0 >= r.x1 || r.y0 >= r.y1)
                continue;
            std::int64_t best = std::numeric_limits<std::int64_t>::max();
            Displacement best_d{};
            for (const Displacement& d : candidates) {
                const std::int64_t sad = detail::window_sad(reference, current, r, d, best);
                if (sad < best) {
                    best = sad;
                    best_d = d;
                    if (best == 0)
                        break;
                }
            }
            field.set_node(i, j, best_d);
        }
    }
    return field;
}

/// MC(frame): backward warp with bilinear displacement interpolation between
/// nodes and bilinear intensity interpolation at the source position. All
/// arithmetic is exact integer; one rounding (half away from zero) per pixel.
/// Source taps outside the frame are clamped to the border.
inline Frame warp(const Frame& frame, const MotionField& field)
{
    if (!field.covers(frame))
        throw DimensionError("warp: motion field does not match frame size");
    if (field.is_zero())
        return frame;

    const int W = frame.width();
    const int H = frame.height();
    const int g = field.grid_size();
    Frame out(W, H, frame.bit_depth());

    if (field.mode() == MotionMode::block) {
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x) {
                const Displacement& d = field.node(x / g, y / g);
                out(x, y) = frame.clamped(x + d.dx, y + d.dy);
            }
        return out;
    }

    const std::int64_t g2 = static_cast<std::int64_t>(g) * g; // displacement denominator
    const std::int64_t g4 = g2 * g2;
    for (int y = 0; y < H; ++y) {
        const int j = y / g;
        const std::int64_t ry = y % g;
        for (int x = 0; x < W; ++x) {
            const int i = x / g;
            const std::int64_t rx = x % g;
            const Displacement& d00 = field.node(i, j);
            const Displacement& d10 = field.node(i + 1, j);
            const Displacement& d01 = field.node(i, j + 1);
            const Displacement& d11 = field.node(i + 1, j + 1);
            const std::int64_t w00 = (g - rx) * (g - ry);
            const std::int64_t w10 = rx * (g - ry);
            const std::int64_t w01 = (g - rx) * ry;
            const std::int64_t w11 = rx * ry;
            // source position in units of 1/g^2 pixel
            const std::int64_t sx = x * g2 + w00 * d00.dx + w10 * d10.dx + w01 * d01.dx + w11 * d11.dx;
            const std::int64_t sy = y * g2 + w00 * d00.dy + w10 * d10.dy + w01 * d01.dy + w11 * d11.dy;
            const std::int64_t ix = detail::floor_div(sx, g2);
            const std::int64_t iy = detail::floor_div(sy, g2);
            const std::int64_t fx = sx - ix * g2;
            const std::int64_t fy = sy - iy * g2;
            const int x0 = static_cast<int>(ix);
            const int y0 = static_cast<int>(iy);
            const std::int64_t acc = (g2 - fx) * (g2 - fy) * frame.clamped(x0, y0) +
                                     fx * (g2 - fy) * frame.clamped(x0 + 1, y0) +
                                     (g2 - fx) * fy * frame.clamped(x0, y0 + 1) +
                                     fx * fy * frame.clamped(x0 + 1, y0 + 1);
            out(x, y) = static_cast<Sample>(detail::div_round(acc, g4));
        }
    }
    return out;
}

/// MC^-1(frame): the same operator with every node displacement negated.
/// Not an exact functional inverse; encoder and decoder only need to agree.
inline Frame warp_inverse(const Frame& frame, const MotionField& field) { return warp(frame, field.negated()); }

} // namespace wldu

#endif
