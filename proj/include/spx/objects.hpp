#pragma once

#include "spx/core.hpp"
#include "spx/distance_transform.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace spx {

/// ASA = (1/|I|) Σ_k max_j |S_k ∩ G_j|.
inline double compute_asa(const OverlapMatrix& ov)
{
  double acc = 0.0;
  for (long k = 0; k < ov.counts.rows(); ++k) acc += ov.counts.row(k).maxCoeff();
  return acc / static_cast<double>(ov.total);
}

/// UE = (1/|I|) Σ_k Σ_j min(|S_k ∩ G_j|, |S_k \ G_j|)  (parameter-free form).
inline double compute_ue(const OverlapMatrix& ov)
{
  double acc = 0.0;
  for (long k = 0; k < ov.counts.rows(); ++k) {
    const double area = ov.counts.row(k).sum();
    for (long j = 0; j < ov.counts.cols(); ++j) {
      const double inter = ov.counts(k, j);
      acc += std::min(inter, area - inter);
    }
  }
  return acc / static_cast<double>(ov.total);
}

/// UE_L = (1/|G|) Σ_j [(Σ_{k: overlap>0} |S_k|) − |G_j|] / |G_j|.
inline double compute_ue_legacy(const OverlapMatrix& ov)
{
  const Eigen::VectorXd sp_areas = ov.sp_areas();
  const Eigen::VectorXd gt_areas = ov.gt_areas();
  double acc = 0.0;
  for (long j = 0; j < ov.counts.cols(); ++j) {
    if (gt_areas(j) <= 0.0)
      throw std::invalid_argument("compute_ue_legacy: empty ground-truth region");
    double covering = 0.0;
    for (long k = 0; k < ov.counts.rows(); ++k)
      if (ov.counts(k, j) > 0.0) covering += sp_areas(k);
    acc += (covering - gt_areas(j)) / gt_areas(j);
  }
  return acc / static_cast<double>(ov.counts.cols());
}

/// Fraction of ground-truth boundary pixels with a superpixel boundary pixel
/// at Euclidean distance strictly below epsilon.
inline double compute_br(const BoundaryMask& sp_boundary, const BoundaryMask& gt_boundary,
                         double epsilon)
{
  if (sp_boundary.width() != gt_boundary.width() ||
      sp_boundary.height() != gt_boundary.height())
    throw std::invalid_argument("compute_br: dimension mismatch");
  if (gt_boundary.count() == 0)
    throw std::invalid_argument("compute_br: empty ground-truth boundary");
  const ScalarArray d2 = squared_distance_transform(sp_boundary.mask);
  const double eps2 = epsilon * epsilon;
  long hit = 0, total = 0;
  for (int y = 0; y < gt_boundary.height(); ++y)
    for (int x = 0; x < gt_boundary.width(); ++x)
      if (gt_boundary.mask(y, x)) {
        ++total;
        if (d2(y, x) < eps2) ++hit;
      }
  return static_cast<double>(hit) / static_cast<double>(total);
}

/// Fraction of superpixel boundary pixels near a ground-truth boundary pixel.
inline double compute_precision(const BoundaryMask& sp_boundary,
                                const BoundaryMask& gt_boundary, double epsilon)
{
  if (sp_boundary.width() != gt_boundary.width() ||
      sp_boundary.height() != gt_boundary.height())
    throw std::invalid_argument("compute_precision: dimension mismatch");
  if (sp_boundary.count() == 0)
    throw std::invalid_argument("compute_precision: empty superpixel boundary");
  const ScalarArray d2 = squared_distance_transform(gt_boundary.mask);
  const double eps2 = epsilon * epsilon;
  long hit = 0, total = 0;
  for (int y = 0; y < sp_boundary.height(); ++y)
    for (int x = 0; x < sp_boundary.width(); ++x)
      if (sp_boundary.mask(y, x)) {
        ++total;
        if (d2(y, x) < eps2) ++hit;
      }
  return static_cast<double>(hit) / static_cast<double>(total);
}

/// Harmonic mean of precision and recall; 0 when both are 0.
inline double f_measure(double precision, double recall)
{
  if (precision < 0.0 || precision > 1.0 || recall < 0.0 || recall > 1.0)
    throw std::invalid_argument("f_measure: inputs outside [0,1]");
  const double s = precision + recall;
  if (s == 0.0) return 0.0;
  return 2.0 * precision * recall / s;
}

struct PrecisionRecallPoint {
  double precision = 0.0;
  double recall = 0.0;
  double f = 0.0;
  double threshold = 0.0;
  bool empty_prediction = false;
};

/// Unweighted mean over ground-truth annotations.
inline double aggregate_over_ground_truths(const std::vector<double>& values)
{
  if (values.empty())
    throw std::invalid_argument("aggregate_over_ground_truths: empty list");
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

}  // namespace spx
