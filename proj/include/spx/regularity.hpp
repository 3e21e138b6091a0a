#pragma once

#include "spx/core.hpp"
#include "spx/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <vector>

namespace spx {

/// C(S) = min(1, 4π|S| / |P(S)|²).
inline double circularity(const Region& region)
{
  if (region.pixels.empty()) throw std::invalid_argument("circularity: empty region");
  const double p = static_cast<double>(perimeter(region));
  return std::min(1.0, 4.0 * std::numbers::pi * static_cast<double>(region.area) / (p * p));
}

/// Area-weighted mean circularity over a decomposition.
inline double decomposition_circularity(const std::vector<Region>& regions)
{
  if (regions.empty())
    throw std::invalid_argument("decomposition_circularity: no regions");
  double total = 0.0, acc = 0.0;
  for (const Region& r : regions) total += static_cast<double>(r.area);
  for (const Region& r : regions)
    acc += static_cast<double>(r.area) / total * circularity(r);
  return acc;
}

/// CR(S) = CC(H_S) / CC(S), clamped to 1 (rasterization can nudge the hull
/// ratio above the shape ratio on tiny regions).
inline double regularity_criterion(const Region& region)
{
  return std::min(1.0, cheeger_ratio(convex_hull_shape(region)) / cheeger_ratio(region));
}

/// Per-shape regularity: CR(S) · sqrt(V_xy(S)).
inline double shape_regularity(const Region& region)
{
  return regularity_criterion(region) * std::sqrt(spatial_variance_ratio(region));
}

/// SRC = Σ_k (|S_k|/|I|) · CR(S_k) · sqrt(V_xy(S_k)).
inline double shape_regularity_criteria(const std::vector<Region>& regions)
{
  if (regions.empty())
    throw std::invalid_argument("shape_regularity_criteria: no regions");
  double total = 0.0, acc = 0.0;
  for (const Region& r : regions) total += static_cast<double>(r.area);
  for (const Region& r : regions)
    acc += static_cast<double>(r.area) / total * shape_regularity(r);
  return acc;
}

struct BinaryAverageShape {
  ShapeGrid grid;
  double threshold = 0.0;
  bool threshold_found = true;  // false: no superlevel set reached the target area
};

/// Ŝ*: largest threshold t (over the occupancy values present in avg) whose
/// superlevel set {avg ≥ t} has area ≥ mean_area.
inline BinaryAverageShape binary_average_shape(const ShapeGrid& avg, double mean_area)
{
  std::set<double, std::greater<double>> thresholds;
  for (long i = 0; i < avg.values.size(); ++i) {
    const double v = avg.values(i);
    if (v > 0.0) thresholds.insert(v);
  }
  if (thresholds.empty())
    throw std::invalid_argument("binary_average_shape: empty average shape");
  BinaryAverageShape out{ShapeGrid(avg.halfwidth)};
  for (double t : thresholds) {
    const long area = (avg.values >= t).count();
    if (static_cast<double>(area) >= mean_area) {
      out.grid.values = (avg.values >= t).cast<double>();
      out.threshold = t;
      return out;
    }
  }
  // No threshold reaches the target area: fall back to the full support.
  out.grid.values = (avg.values > 0.0).cast<double>();
  out.threshold = *thresholds.rbegin();
  out.threshold_found = false;
  return out;
}

/// J = (1/|S|) Σ_k |S_k* ∩ Ŝ*| / |S_k* ∪ Ŝ*| (unweighted, as defined).
inline double jaccard_consistency(const std::vector<ShapeGrid>& shapes,
                                  const ShapeGrid& binary_avg)
{
  if (shapes.empty()) throw std::invalid_argument("jaccard_consistency: no shapes");
  double acc = 0.0;
  for (const ShapeGrid& s : shapes) {
    if (s.halfwidth != binary_avg.halfwidth)
      throw std::invalid_argument("jaccard_consistency: mixed halfwidths");
    const long inter = ((s.values > 0.0) && (binary_avg.values > 0.0)).count();
    const long uni = ((s.values > 0.0) || (binary_avg.values > 0.0)).count();
    if (uni == 0) throw std::invalid_argument("jaccard_consistency: empty union");
    acc += static_cast<double>(inter) / static_cast<double>(uni);
  }
  return acc / static_cast<double>(shapes.size());
}

/// SMF = 1 − Σ_k (|S_k|/|I|) · ‖S*/|S*| − S_k*/|S_k*|‖₁ / 2, with |S*| the
/// total mass of the average shape.
inline double smooth_matching_factor(const std::vector<ShapeGrid>& shapes,
                                     const ShapeGrid& avg)
{
  if (shapes.empty()) throw std::invalid_argument("smooth_matching_factor: no shapes");
  const double avg_mass = avg.mass();
  if (avg_mass <= 0.0)
    throw std::invalid_argument("smooth_matching_factor: zero-mass average");
  double total = 0.0;
  for (const ShapeGrid& s : shapes) total += s.mass();
  const ScalarArray avg_norm = avg.values / avg_mass;
  double acc = 0.0;
  for (const ShapeGrid& s : shapes) {
    if (s.halfwidth != avg.halfwidth)
      throw std::invalid_argument("smooth_matching_factor: mixed halfwidths");
    const double l1 = (avg_norm - s.values / s.mass()).abs().sum();
    acc += s.mass() / total * l1 / 2.0;
  }
  return 1.0 - acc;
}

/// Full regularity breakdown for a decomposition.
struct RegularityReport {
  double circularity = 0.0;  // area-weighted C
  double src = 0.0;
  double smf = 0.0;
  double j_index = 0.0;
  double gr = 0.0;
  int halfwidth = 0;
  double binary_avg_threshold = 0.0;
  bool binary_avg_threshold_found = true;
  long border_touching_regions = 0;
  std::vector<int> labels;
  std::vector<double> per_region_c;
  std::vector<double> per_region_cr;
  std::vector<double> per_region_vxy;
};

inline RegularityReport global_regularity(const std::vector<Region>& regions)
{
  if (regions.empty()) throw std::invalid_argument("global_regularity: no regions");
  RegularityReport rep;
  double total_area = 0.0;
  int hw = 0;
  for (const Region& r : regions) {
    total_area += static_cast<double>(r.area);
    hw = std::max(hw, required_halfwidth(r));
  }
  rep.halfwidth = hw;

  std::vector<ShapeGrid> shapes;
  shapes.reserve(regions.size());
  for (const Region& r : regions) {
    shapes.push_back(register_shape(r, hw));
    rep.labels.push_back(r.label);
    const double c = circularity(r);
    const double cr = regularity_criterion(r);
    const double vxy = spatial_variance_ratio(r);
    rep.per_region_c.push_back(c);
    rep.per_region_cr.push_back(cr);
    rep.per_region_vxy.push_back(vxy);
    rep.circularity += static_cast<double>(r.area) / total_area * c;
    rep.src += static_cast<double>(r.area) / total_area * cr * std::sqrt(vxy);
    if (r.canvas_width > 0) {
      bool touches = false;
      for (const Pixel& p : r.pixels)
        if (p.x == 0 || p.y == 0 || p.x == r.canvas_width - 1 ||
            p.y == r.canvas_height - 1) {
          touches = true;
          break;
        }
      if (touches) ++rep.border_touching_regions;
    }
  }

  const ShapeGrid avg = average_shape(shapes);
  const double mean_area = total_area / static_cast<double>(regions.size());
  const BinaryAverageShape bin = binary_average_shape(avg, mean_area);
  rep.binary_avg_threshold = bin.threshold;
  rep.binary_avg_threshold_found = bin.threshold_found;
  rep.j_index = jaccard_consistency(shapes, bin.grid);
  rep.smf = smooth_matching_factor(shapes, avg);
  rep.gr = rep.src * rep.smf;
  return rep;
}

}  // namespace spx
