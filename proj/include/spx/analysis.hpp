#pragma once

#include "spx/core.hpp"
#include "spx/objects.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace spx {

struct AsaUeRelation {
  double error = 0.0;               // ASA − (1 − UE/2)
  double violating_fraction = 0.0;  // superpixels without a majority overlap
};

/// Deviation from the ASA = 1 − UE/2 identity, with the fraction of
/// superpixels breaking the majority-overlap hypothesis.
inline AsaUeRelation asa_ue_relation_error(const OverlapMatrix& ov)
{
  AsaUeRelation rel;
  rel.error = compute_asa(ov) - (1.0 - compute_ue(ov) / 2.0);
  long violating = 0;
  for (long k = 0; k < ov.counts.rows(); ++k) {
    const double area = ov.counts.row(k).sum();
    if (ov.counts.row(k).maxCoeff() < area / 2.0) ++violating;
  }
  rel.violating_fraction =
      static_cast<double>(violating) / static_cast<double>(ov.counts.rows());
  return rel;
}

/// Sample Pearson correlation coefficient.
inline double pearson(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys)
{
  if (xs.size() != ys.size()) throw std::invalid_argument("pearson: length mismatch");
  if (xs.size() < 2) throw std::invalid_argument("pearson: need at least 2 points");
  const double n = static_cast<double>(xs.size());
  const Eigen::ArrayXd dx = xs.array() - xs.mean();
  const Eigen::ArrayXd dy = ys.array() - ys.mean();
  const double sx = dx.square().sum() / (n - 1.0);
  const double sy = dy.square().sum() / (n - 1.0);
  if (sx == 0.0 || sy == 0.0) throw std::invalid_argument("pearson: zero variance");
  return (dx * dy).sum() / (n - 1.0) / std::sqrt(sx * sy);
}

/// One evaluated decomposition per row.
struct SweepRow {
  std::string id;
  long superpixel_count = 0;
  double gr = 0.0, ev = 0.0, asa = 0.0, ue = 0.0, br = 0.0, cd = 0.0;
  double c = 0.0, j = 0.0, smf = 0.0, src = 0.0, mse = 0.0, precision = 0.0;
};

struct SweepTable {
  std::vector<SweepRow> rows;
};

struct CorrelationTable {
  std::vector<std::string> regularity_names;   // rows
  std::vector<std::string> performance_names;  // columns
  Eigen::MatrixXd coefficients;                // NaN where degenerate
  Eigen::VectorXd average_abs;                 // per regularity metric, over defined cells
  std::vector<std::string> degenerate_columns;
};

/// Pearson of each regularity metric against each performance metric, with a
/// per-row average of absolute coefficients.
inline CorrelationTable correlation_table(const SweepTable& sweep)
{
  if (sweep.rows.size() < 2)
    throw std::invalid_argument("correlation_table: need at least 2 rows");
  CorrelationTable table;
  table.regularity_names = {"gr", "smf", "j", "src", "c"};
  table.performance_names = {"asa", "ue", "br", "precision", "ev", "mse"};

  const long n = static_cast<long>(sweep.rows.size());
  auto column = [&](const std::string& name) {
    Eigen::VectorXd v(n);
    for (long i = 0; i < n; ++i) {
      const SweepRow& r = sweep.rows[static_cast<size_t>(i)];
      if (name == "gr") v(i) = r.gr;
      else if (name == "smf") v(i) = r.smf;
      else if (name == "j") v(i) = r.j;
      else if (name == "src") v(i) = r.src;
      else if (name == "c") v(i) = r.c;
      else if (name == "asa") v(i) = r.asa;
      else if (name == "ue") v(i) = r.ue;
      else if (name == "br") v(i) = r.br;
      else if (name == "precision") v(i) = r.precision;
      else if (name == "ev") v(i) = r.ev;
      else v(i) = r.mse;
    }
    return v;
  };

  const long nr = static_cast<long>(table.regularity_names.size());
  const long np = static_cast<long>(table.performance_names.size());
  table.coefficients = Eigen::MatrixXd::Constant(nr, np, std::nan(""));
  table.average_abs = Eigen::VectorXd::Zero(nr);
  for (long i = 0; i < nr; ++i) {
    long defined = 0;
    double acc = 0.0;
    for (long k = 0; k < np; ++k) {
      try {
        const double r = pearson(column(table.regularity_names[static_cast<size_t>(i)]),
                                 column(table.performance_names[static_cast<size_t>(k)]));
        table.coefficients(i, k) = r;
        acc += std::abs(r);
        ++defined;
      } catch (const std::invalid_argument&) {
        const std::string& col = table.performance_names[static_cast<size_t>(k)];
        if (std::find(table.degenerate_columns.begin(), table.degenerate_columns.end(),
                      col) == table.degenerate_columns.end())
          table.degenerate_columns.push_back(col);
      }
    }
    table.average_abs(i) = defined > 0 ? acc / static_cast<double>(defined) : std::nan("");
  }
  return table;
}

struct ContourMap {
  ScalarArray values;  // per-pixel fraction of scales detecting a boundary

  int width() const { return static_cast<int>(values.cols()); }
  int height() const { return static_cast<int>(values.rows()); }
};

/// Per-pixel mean of boundary masks; values strictly below nu are zeroed.
inline ContourMap multiscale_contour_map(const std::vector<BoundaryMask>& boundaries,
                                         double nu)
{
  if (boundaries.empty())
    throw std::invalid_argument("multiscale_contour_map: no masks");
  const int w = boundaries.front().width();
  const int h = boundaries.front().height();
  ContourMap map;
  map.values = ScalarArray::Zero(h, w);
  for (const BoundaryMask& b : boundaries) {
    if (b.width() != w || b.height() != h)
      throw std::invalid_argument("multiscale_contour_map: dimension mismatch");
    map.values += b.mask.cast<double>();
  }
  map.values /= static_cast<double>(boundaries.size());
  map.values = (map.values < nu).select(0.0, map.values);
  return map;
}

/// Binarize the contour map at each threshold and score P/BR/F against the
/// ground-truth boundary. Empty predictions score P = 1, F = 0 and are
/// flagged. See max_f_point() for the maximum-F summary.
inline std::vector<PrecisionRecallPoint> pr_sweep(const ContourMap& map,
                                                  const BoundaryMask& gt_boundary,
                                                  double epsilon,
                                                  const std::vector<double>& thresholds)
{
  if (gt_boundary.count() == 0) throw std::invalid_argument("pr_sweep: empty ground truth");
  if (map.width() != gt_boundary.width() || map.height() != gt_boundary.height())
    throw std::invalid_argument("pr_sweep: dimension mismatch");
  std::vector<PrecisionRecallPoint> points;
  points.reserve(thresholds.size());
  for (double nu : thresholds) {
    BoundaryMask pred;
    if (nu > 0.0)
      pred.mask = map.values >= nu;
    else
      pred.mask = map.values > 0.0;
    PrecisionRecallPoint pt;
    pt.threshold = nu;
    if (pred.count() == 0) {
      pt.precision = 1.0;
      pt.recall = 0.0;
      pt.f = 0.0;
      pt.empty_prediction = true;
    } else {
      pt.precision = compute_precision(pred, gt_boundary, epsilon);
      pt.recall = compute_br(pred, gt_boundary, epsilon);
      pt.f = f_measure(pt.precision, pt.recall);
    }
    points.push_back(pt);
  }
  return points;
}

inline PrecisionRecallPoint max_f_point(const std::vector<PrecisionRecallPoint>& points)
{
  if (points.empty()) throw std::invalid_argument("max_f_point: empty sweep");
  return *std::max_element(points.begin(), points.end(),
                           [](const auto& a, const auto& b) { return a.f < b.f; });
}

inline std::vector<double> uniform_thresholds(int count = 51)
{
  std::vector<double> t(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i)
    t[static_cast<size_t>(i)] = static_cast<double>(i) / static_cast<double>(count - 1);
  return t;
}

}  // namespace spx
