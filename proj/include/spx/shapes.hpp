#pragma once

#include "spx/core.hpp"
#include "spx/distance_transform.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace spx {

enum class ShapeKind { square, circle, hexagon, ellipse, cross, u, split, stripe };

struct ShapeSpec {
  ShapeKind kind = ShapeKind::square;
  int size = 20;               // characteristic extent in pixels
  double aspect = 2.0;         // ellipse/stripe elongation; U frame thickness
  int noise_amplitude = 0;     // boundary perturbation depth
  unsigned seed = 0;
};

namespace detail {

inline bool single_4_component(const BoolArray& mask)
{
  const int h = static_cast<int>(mask.rows());
  const int w = static_cast<int>(mask.cols());
  int sx = -1, sy = -1;
  long total = 0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (mask(y, x)) {
        ++total;
        if (sx < 0) {
          sx = x;
          sy = y;
        }
      }
  if (total == 0) return false;
  BoolArray seen = BoolArray::Constant(h, w, false);
  std::vector<Pixel> stack{{sx, sy}};
  seen(sy, sx) = true;
  long reached = 0;
  while (!stack.empty()) {
    const Pixel p = stack.back();
    stack.pop_back();
    ++reached;
    const int nx[4] = {p.x - 1, p.x + 1, p.x, p.x};
    const int ny[4] = {p.y, p.y, p.y - 1, p.y + 1};
    for (int i = 0; i < 4; ++i)
      if (nx[i] >= 0 && nx[i] < w && ny[i] >= 0 && ny[i] < h &&
          mask(ny[i], nx[i]) && !seen(ny[i], nx[i])) {
        seen(ny[i], nx[i]) = true;
        stack.push_back({nx[i], ny[i]});
      }
  }
  return reached == total;
}

inline Region mask_to_region(const BoolArray& mask, int label = 0)
{
  std::vector<Pixel> px;
  for (int y = 0; y < static_cast<int>(mask.rows()); ++y)
    for (int x = 0; x < static_cast<int>(mask.cols()); ++x)
      if (mask(y, x)) px.push_back({x, y});
  return Region::from_pixels(label, std::move(px), static_cast<int>(mask.cols()),
                             static_cast<int>(mask.rows()));
}

inline BoolArray region_to_mask(const Region& region, int w, int h)
{
  BoolArray mask = BoolArray::Constant(h, w, false);
  for (const Pixel& p : region.pixels) mask(p.y, p.x) = true;
  return mask;
}

// Smooth zero-mean field scaled so its extremes reach ±amplitude.
inline ScalarArray smooth_noise_field(int w, int h, double amplitude, unsigned seed)
{
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  ScalarArray field(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) field(y, x) = uni(rng);
  // separable box blur, radius 2, two passes
  const int rb = 2;
  for (int pass = 0; pass < 2; ++pass) {
    ScalarArray tmp = ScalarArray::Zero(h, w);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        int cnt = 0;
        for (int dx = -rb; dx <= rb; ++dx)
          if (x + dx >= 0 && x + dx < w) {
            acc += field(y, x + dx);
            ++cnt;
          }
        tmp(y, x) = acc / cnt;
      }
    for (int x = 0; x < w; ++x)
      for (int y = 0; y < h; ++y) {
        double acc = 0.0;
        int cnt = 0;
        for (int dy = -rb; dy <= rb; ++dy)
          if (y + dy >= 0 && y + dy < h) {
            acc += tmp(y + dy, x);
            ++cnt;
          }
        field(y, x) = acc / cnt;
      }
  }
  const double peak = field.abs().maxCoeff();
  if (peak > 0.0) field *= amplitude / peak;
  return field;
}

}  // namespace detail

/// Erode/dilate the boundary by a smooth random offset of depth up to
/// `amplitude`, preserving 4-connectivity. Deterministic per seed.
inline Region add_boundary_noise(const Region& region, int amplitude, unsigned seed)
{
  if (amplitude < 0) throw std::invalid_argument("add_boundary_noise: negative amplitude");
  if (amplitude == 0) return region;

  // Work on a canvas with room for dilation.
  int min_x = region.pixels.front().x, max_x = min_x;
  int min_y = region.pixels.front().y, max_y = min_y;
  for (const Pixel& p : region.pixels) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  const int margin = amplitude + 2;
  const int w = max_x - min_x + 1 + 2 * margin;
  const int h = max_y - min_y + 1 + 2 * margin;
  BoolArray mask = BoolArray::Constant(h, w, false);
  for (const Pixel& p : region.pixels)
    mask(p.y - min_y + margin, p.x - min_x + margin) = true;

  // Signed distance to the region boundary, positive inside. Boundary pixels
  // sit at +0.5, the first outside ring at -0.5.
  const ScalarArray d_in = squared_distance_transform(!mask).sqrt();
  const ScalarArray d_out = squared_distance_transform(mask).sqrt();
  ScalarArray sd(h, w);
  double max_depth = 0.0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      sd(y, x) = mask(y, x) ? d_in(y, x) - 0.5 : -(d_out(y, x) - 0.5);
      if (mask(y, x)) max_depth = std::max(max_depth, sd(y, x));
    }
  // A shape thinner than the amplitude has no core the noise cannot erase.
  if (max_depth < static_cast<double>(amplitude))
    throw std::runtime_error("add_boundary_noise: shape too thin for amplitude " +
                             std::to_string(amplitude));

  for (int attempt = 0; attempt < 10; ++attempt) {
    const ScalarArray noise = detail::smooth_noise_field(
        w, h, static_cast<double>(amplitude), seed + 1009u * static_cast<unsigned>(attempt));
    BoolArray noisy = sd > noise;
    // Clip to the source canvas when the region knows one.
    if (region.canvas_width > 0 && region.canvas_height > 0)
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
          if (noisy(y, x)) {
            const int gx = x + min_x - margin;
            const int gy = y + min_y - margin;
            if (gx < 0 || gy < 0 || gx >= region.canvas_width ||
                gy >= region.canvas_height)
              noisy(y, x) = false;
          }
    if (detail::single_4_component(noisy)) {
      Region out = detail::mask_to_region(noisy, region.label);
      // Map back to the original coordinate frame.
      for (Pixel& p : out.pixels) {
        p.x += min_x - margin;
        p.y += min_y - margin;
      }
      return Region::from_pixels(region.label, std::move(out.pixels),
                                 region.canvas_width, region.canvas_height);
    }
  }
  throw std::runtime_error("add_boundary_noise: perturbation disconnects the shape");
}

/// Deterministic generator for the synthetic shape families.
inline Region generate(const ShapeSpec& spec)
{
  if (spec.size < 3) throw std::invalid_argument("generate: size must be >= 3");
  if (spec.noise_amplitude < 0)
    throw std::invalid_argument("generate: negative noise amplitude");
  const int s = spec.size;
  const int margin = spec.noise_amplitude + 4;
  const int w = s + 2 * margin;
  const int h = s + 2 * margin;
  BoolArray mask = BoolArray::Constant(h, w, false);
  const double cx = (s - 1) / 2.0;
  const double cy = (s - 1) / 2.0;

  auto set_local = [&](int x, int y) { mask(y + margin, x + margin) = true; };

  switch (spec.kind) {
    case ShapeKind::square:
      for (int y = 0; y < s; ++y)
        for (int x = 0; x < s; ++x) set_local(x, y);
      break;
    case ShapeKind::circle: {
      const double r = (s - 1) / 2.0;
      for (int y = 0; y < s; ++y)
        for (int x = 0; x < s; ++x)
          if (std::hypot(x - cx, y - cy) <= r) set_local(x, y);
      break;
    }
    case ShapeKind::hexagon: {
      // flat-top hexagon: six half-planes, normals every 60° starting at 90°
      const double radius = s / 2.0;
      const double apothem = radius * std::numbers::sqrt3 / 2.0;
      for (int y = 0; y < s; ++y)
        for (int x = 0; x < s; ++x) {
          bool in = true;
          for (int i = 0; i < 6 && in; ++i) {
            const double ang = std::numbers::pi / 2.0 + i * std::numbers::pi / 3.0;
            if ((x - cx) * std::cos(ang) + (y - cy) * std::sin(ang) > apothem) in = false;
          }
          if (in) set_local(x, y);
        }
      break;
    }
    case ShapeKind::ellipse: {
      if (spec.aspect < 1.0) throw std::invalid_argument("generate: ellipse aspect < 1");
      const double a = (s - 1) / 2.0;
      const double b = a / spec.aspect;
      for (int y = 0; y < s; ++y)
        for (int x = 0; x < s; ++x) {
          const double dx = (x - cx) / a;
          const double dy = (y - cy) / b;
          if (dx * dx + dy * dy <= 1.0) set_local(x, y);
        }
      break;
    }
    case ShapeKind::cross: {
      // vertical bar plus two full-width crossbars, all of width s/3
      const int bar = s / 3;
      if (bar < 1 || s < 2 * bar + 2)
        throw std::invalid_argument("generate: cross size too small");
      const int cx0 = (s - bar) / 2;
      const int r1 = std::max(0, (s - 2 * bar) / 4);
      const int r2 = s - r1 - bar;
      if (r1 + bar > r2) throw std::invalid_argument("generate: cross bars overlap");
      for (int y = 0; y < s; ++y)
        for (int x = cx0; x < cx0 + bar; ++x) set_local(x, y);
      for (int y = r1; y < r1 + bar; ++y)
        for (int x = 0; x < s; ++x)
          if (x < cx0 || x >= cx0 + bar) set_local(x, y);
      for (int y = r2; y < r2 + bar; ++y)
        for (int x = 0; x < s; ++x)
          if (x < cx0 || x >= cx0 + bar) set_local(x, y);
      break;
    }
    case ShapeKind::u: {
      const int t = std::max(1, static_cast<int>(std::lround(spec.aspect)));
      if (2 * t >= s) throw std::invalid_argument("generate: U walls too thick");
      for (int y = 0; y < s; ++y)
        for (int x = 0; x < s; ++x)
          if (x < t || x >= s - t || y >= s - t) set_local(x, y);
      break;
    }
    case ShapeKind::split: {
      // two blocks joined by a one-pixel bridge
      const int gap = std::max(1, s / 5);
      const int block = (s - gap) / 2;
      if (block < 1) throw std::invalid_argument("generate: split size too small");
      const int mid = s / 2;
      for (int y = 0; y < s; ++y)
        for (int x = 0; x < block; ++x) set_local(x, y);
      for (int y = 0; y < s; ++y)
        for (int x = s - block; x < s; ++x) set_local(x, y);
      for (int x = block; x < s - block; ++x) set_local(x, mid);
      break;
    }
    case ShapeKind::stripe: {
      if (spec.aspect < 1.0) throw std::invalid_argument("generate: stripe aspect < 1");
      const int height = std::max(1, static_cast<int>(std::lround(s / spec.aspect)));
      for (int y = 0; y < height; ++y)
        for (int x = 0; x < s; ++x) set_local(x, y);
      break;
    }
  }

  Region region = detail::mask_to_region(mask);
  if (spec.noise_amplitude > 0)
    region = add_boundary_noise(region, spec.noise_amplitude, spec.seed);
  return region;
}

/// Axis-aligned square-cell decomposition; last row/column truncated.
inline LabelMap grid_decomposition(int width, int height, int cell)
{
  if (width < 1 || height < 1) throw std::invalid_argument("grid_decomposition: empty grid");
  if (cell < 1) throw std::invalid_argument("grid_decomposition: cell must be >= 1");
  const int cols = (width + cell - 1) / cell;
  LabelArray labels(height, width);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      labels(y, x) = (y / cell) * cols + (x / cell);
  return LabelMap(std::move(labels));
}

}  // namespace spx
