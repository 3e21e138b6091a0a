#pragma once

#include "spx/core.hpp"

#include <limits>
#include <vector>

namespace spx {

namespace detail {

// Felzenszwalb-Huttenlocher 1D squared distance transform.
inline void edt_1d(const double* f, double* d, int n)
{
  std::vector<int> v(static_cast<size_t>(n));
  std::vector<double> z(static_cast<size_t>(n) + 1);
  int k = 0;
  v[0] = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  for (int q = 1; q < n; ++q) {
    double s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
    while (s <= z[k]) {
      --k;
      s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = std::numeric_limits<double>::infinity();
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    d[q] = (q - v[k]) * (q - v[k]) + f[v[k]];
  }
}

}  // namespace detail

/// Large finite stand-in for "no seed in sight"; keeps the parabola
/// intersections finite. Any true squared distance on realistic grids is
/// far below this.
inline constexpr double kFarSquared = 1e12;

/// Squared Euclidean distance to the nearest marked pixel. Cells saturate at
/// kFarSquared (and above) when no seed exists.
inline ScalarArray squared_distance_transform(const BoolArray& mask)
{
  const int h = static_cast<int>(mask.rows());
  const int w = static_cast<int>(mask.cols());
  ScalarArray d(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      d(y, x) = mask(y, x) ? 0.0 : kFarSquared;

  std::vector<double> f(static_cast<size_t>(std::max(w, h)));
  std::vector<double> out(static_cast<size_t>(std::max(w, h)));
  // columns, then rows
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) f[static_cast<size_t>(y)] = d(y, x);
    detail::edt_1d(f.data(), out.data(), h);
    for (int y = 0; y < h; ++y) d(y, x) = out[static_cast<size_t>(y)];
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) f[static_cast<size_t>(x)] = d(y, x);
    detail::edt_1d(f.data(), out.data(), w);
    for (int x = 0; x < w; ++x) d(y, x) = out[static_cast<size_t>(x)];
  }
  return d;
}

}  // namespace spx
