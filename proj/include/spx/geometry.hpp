#pragma once

#include "spx/core.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace spx {

namespace detail {

inline std::uint64_t pixel_key(int x, int y)
{
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 32) |
         static_cast<std::uint32_t>(y);
}

inline std::unordered_set<std::uint64_t> pixel_set(const Region& r)
{
  std::unordered_set<std::uint64_t> s;
  s.reserve(r.pixels.size() * 2);
  for (const Pixel& p : r.pixels) s.insert(pixel_key(p.x, p.y));
  return s;
}

}  // namespace detail

/// Perimeter as boundary-pixel count: pixels with a 4-neighbor outside the
/// region, or lying on the canvas border when the region knows its canvas.
inline long perimeter(const Region& region)
{
  if (region.pixels.empty()) throw std::invalid_argument("perimeter: empty region");
  const auto inside = detail::pixel_set(region);
  long count = 0;
  for (const Pixel& p : region.pixels) {
    bool boundary = !inside.count(detail::pixel_key(p.x - 1, p.y)) ||
                    !inside.count(detail::pixel_key(p.x + 1, p.y)) ||
                    !inside.count(detail::pixel_key(p.x, p.y - 1)) ||
                    !inside.count(detail::pixel_key(p.x, p.y + 1));
    if (!boundary && region.canvas_width > 0 && region.canvas_height > 0)
      boundary = p.x == 0 || p.y == 0 || p.x == region.canvas_width - 1 ||
                 p.y == region.canvas_height - 1;
    if (boundary) ++count;
  }
  return count;
}

/// Convex hull of the region pixels, rasterized at pixel centers.
struct HullShape {
  Region shape;       // hull pixel set, same canvas as the input
  long hull_area = 0; // |H_S|
  long hull_perimeter = 0;
};

namespace detail {

// Andrew monotone chain over integer points, CCW, no interior collinear points.
inline std::vector<Pixel> convex_hull_polygon(std::vector<Pixel> pts)
{
  std::sort(pts.begin(), pts.end(), [](const Pixel& a, const Pixel& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const long n = static_cast<long>(pts.size());
  if (n <= 2) return pts;
  auto cross = [](const Pixel& o, const Pixel& a, const Pixel& b) -> long {
    return static_cast<long>(a.x - o.x) * (b.y - o.y) -
           static_cast<long>(a.y - o.y) * (b.x - o.x);
  };
  std::vector<Pixel> hull(static_cast<size_t>(2 * n));
  long k = 0;
  for (long i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  const long lower = k + 1;
  for (long i = n - 2; i >= 0; --i) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(static_cast<size_t>(k - 1));
  return hull;
}

}  // namespace detail

inline HullShape convex_hull_shape(const Region& region)
{
  if (region.pixels.empty()) throw std::invalid_argument("convex_hull_shape: empty region");

  // Hull of the pixels treated as unit squares: take the four corner points of
  // each pixel, doubled so corners and pixel centers both land on the integer
  // lattice (pixel (x, y) spans corners 2x..2x+2 and has its center at 2x+1).
  std::vector<Pixel> corners;
  corners.reserve(region.pixels.size() * 4);
  for (const Pixel& p : region.pixels) {
    corners.push_back({2 * p.x, 2 * p.y});
    corners.push_back({2 * p.x + 2, 2 * p.y});
    corners.push_back({2 * p.x, 2 * p.y + 2});
    corners.push_back({2 * p.x + 2, 2 * p.y + 2});
  }
  const std::vector<Pixel> poly = detail::convex_hull_polygon(std::move(corners));

  int min_x = region.pixels[0].x, max_x = min_x;
  int min_y = region.pixels[0].y, max_y = min_y;
  for (const Pixel& p : region.pixels) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }

  // A pixel is in the hull iff its center is inside or on the polygon. The
  // chain is counter-clockwise in the algebraic plane, so the interior is
  // where cross >= 0 for every edge.
  std::vector<Pixel> hull_pixels;
  const size_t m = poly.size();
  for (int y = min_y; y <= max_y; ++y)
    for (int x = min_x; x <= max_x; ++x) {
      const int cx = 2 * x + 1;
      const int cy = 2 * y + 1;
      bool in = true;
      for (size_t i = 0; i < m && in; ++i) {
        const Pixel& a = poly[i];
        const Pixel& b = poly[(i + 1) % m];
        const long cr = static_cast<long>(b.x - a.x) * (cy - a.y) -
                        static_cast<long>(b.y - a.y) * (cx - a.x);
        if (cr < 0) in = false;
      }
      if (in) hull_pixels.push_back({x, y});
    }

  HullShape hs;
  hs.shape = Region::from_pixels(region.label, std::move(hull_pixels),
                                 region.canvas_width, region.canvas_height);
  hs.hull_area = hs.shape.area;
  hs.hull_perimeter = perimeter(hs.shape);
  return hs;
}

/// Perimeter-to-area ratio CC(S) = |P(S)| / |S|.
inline double cheeger_ratio(const Region& region)
{
  if (region.pixels.empty()) throw std::invalid_argument("cheeger_ratio: empty region");
  return static_cast<double>(perimeter(region)) / static_cast<double>(region.area);
}

inline double cheeger_ratio(const HullShape& hull)
{
  return static_cast<double>(hull.hull_perimeter) / static_cast<double>(hull.hull_area);
}

/// V_xy = min(σ_x, σ_y) / max(σ_x, σ_y), population standard deviations.
inline double spatial_variance_ratio(const Region& region)
{
  if (region.pixels.empty())
    throw std::invalid_argument("spatial_variance_ratio: empty region");
  double vx = 0.0, vy = 0.0;
  for (const Pixel& p : region.pixels) {
    vx += (p.x - region.barycenter_x) * (p.x - region.barycenter_x);
    vy += (p.y - region.barycenter_y) * (p.y - region.barycenter_y);
  }
  const double sx = std::sqrt(vx / static_cast<double>(region.area));
  const double sy = std::sqrt(vy / static_cast<double>(region.area));
  const double hi = std::max(sx, sy);
  if (hi == 0.0) return 1.0;
  return std::min(sx, sy) / hi;
}

/// Real-valued occupancy on a (2W_g+1)² grid centered at the origin.
struct ShapeGrid {
  int halfwidth = 0;
  ScalarArray values;  // ((2W+1) rows, (2W+1) cols), cell (y+W, x+W)

  explicit ShapeGrid(int hw)
      : halfwidth(hw), values(ScalarArray::Zero(2 * hw + 1, 2 * hw + 1))
  {
    if (hw < 0) throw std::invalid_argument("ShapeGrid: negative halfwidth");
  }

  int side() const { return 2 * halfwidth + 1; }
  double mass() const { return values.sum(); }
};

namespace detail {

// round-half-up per axis, as used for barycenter registration
inline int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

}  // namespace detail

/// Smallest halfwidth that holds the region once its barycenter is moved to
/// the origin with the round-half-up rule.
inline int required_halfwidth(const Region& region)
{
  const int sx = detail::round_half_up(-region.barycenter_x);
  const int sy = detail::round_half_up(-region.barycenter_y);
  int hw = 0;
  for (const Pixel& p : region.pixels)
    hw = std::max(hw, std::max(std::abs(p.x + sx), std::abs(p.y + sy)));
  return hw;
}

inline ShapeGrid register_shape(const Region& region, int halfwidth)
{
  if (region.pixels.empty()) throw std::invalid_argument("register_shape: empty region");
  const int need = required_halfwidth(region);
  if (need > halfwidth)
    throw std::invalid_argument("register_shape: region needs halfwidth " +
                                std::to_string(need) + ", got " +
                                std::to_string(halfwidth));
  ShapeGrid grid(halfwidth);
  const int sx = detail::round_half_up(-region.barycenter_x);
  const int sy = detail::round_half_up(-region.barycenter_y);
  for (const Pixel& p : region.pixels)
    grid.values(p.y + sy + halfwidth, p.x + sx + halfwidth) = 1.0;
  return grid;
}

/// Cell-wise mean of registered shapes (S* of the decomposition).
inline ShapeGrid average_shape(const std::vector<ShapeGrid>& shapes)
{
  if (shapes.empty()) throw std::invalid_argument("average_shape: empty list");
  const int hw = shapes.front().halfwidth;
  ShapeGrid avg(hw);
  for (const ShapeGrid& s : shapes) {
    if (s.halfwidth != hw)
      throw std::invalid_argument("average_shape: mixed halfwidths");
    avg.values += s.values;
  }
  avg.values /= static_cast<double>(shapes.size());
  return avg;
}

}  // namespace spx
