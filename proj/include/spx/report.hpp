#pragma once

#include "spx/analysis.hpp"
#include "spx/color.hpp"
#include "spx/core.hpp"
#include "spx/objects.hpp"
#include "spx/regularity.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace spx {

inline constexpr const char* kToolVersion = "1.0.0";

/// Round to `digits` significant digits so serialized reports are stable.
inline double round_sig(double v, int digits = 6)
{
  if (v == 0.0 || !std::isfinite(v)) return v;
  const double mag = std::pow(10.0, digits - 1 - static_cast<int>(std::floor(std::log10(std::abs(v)))));
  return std::round(v * mag) / mag;
}

struct EvalConfig {
  std::string image_path;
  std::vector<std::string> label_paths;
  std::vector<std::string> gt_paths;
  double epsilon = 2.0;
  std::vector<double> nu = {};
  std::string format = "json";  // json | csv
  int jobs = 1;
  bool with_color = true;
  bool with_objects = true;
  bool with_regularity = true;
  bool with_compression = true;
};

/// Scalar metrics for one decomposition, plus the exact parameterization.
struct MetricReport {
  std::string decomposition;
  long superpixel_count = 0;
  std::optional<double> ev, icv;
  std::optional<double> asa, ue, ue_legacy, br, precision, f;
  double cd = 0.0;
  std::optional<double> c, j, src, smf, gr;
  std::optional<double> mse;
  std::optional<double> asa_ue_error, majority_violation_fraction;
  bool ev_degenerate = false;       // constant image, EV undefined
  bool binary_avg_flagged = false;  // Ŝ* threshold never reached the mean area
  int grid_halfwidth = 0;
  long border_touching_regions = 0;
};

namespace detail {

inline void put(nlohmann::ordered_json& j, const char* key,
                const std::optional<double>& v)
{
  if (v)
    j[key] = round_sig(*v);
  else
    j[key] = nullptr;
}

}  // namespace detail

inline nlohmann::ordered_json report_to_json(const MetricReport& r, const EvalConfig& cfg)
{
  nlohmann::ordered_json j;
  j["decomposition"] = r.decomposition;
  j["superpixel_count"] = r.superpixel_count;
  detail::put(j, "ev", r.ev);
  detail::put(j, "icv", r.icv);
  detail::put(j, "asa", r.asa);
  detail::put(j, "ue", r.ue);
  detail::put(j, "ue_legacy", r.ue_legacy);
  detail::put(j, "br", r.br);
  j["cd"] = round_sig(r.cd);
  detail::put(j, "precision", r.precision);
  detail::put(j, "f", r.f);
  detail::put(j, "c", r.c);
  detail::put(j, "j", r.j);
  detail::put(j, "src", r.src);
  detail::put(j, "smf", r.smf);
  detail::put(j, "gr", r.gr);
  detail::put(j, "mse", r.mse);
  detail::put(j, "asa_ue_error", r.asa_ue_error);
  detail::put(j, "majority_violation_fraction", r.majority_violation_fraction);
  nlohmann::ordered_json flags;
  flags["ev_degenerate"] = r.ev_degenerate;
  flags["binary_average_shape_fallback"] = r.binary_avg_flagged;
  flags["border_touching_regions"] = r.border_touching_regions;
  j["flags"] = flags;
  nlohmann::ordered_json params;
  params["perimeter_def"] = "boundary_pixel_count";
  params["boundary_connectivity"] = 4;
  params["epsilon"] = round_sig(cfg.epsilon);
  params["grid_halfwidth"] = r.grid_halfwidth;
  params["rounding_rule"] = "round_half_up";
  params["avg_shape_mass_def"] = "mass";
  j["parameters"] = params;
  nlohmann::ordered_json prov;
  prov["image"] = cfg.image_path;
  prov["ground_truths"] = cfg.gt_paths;
  prov["tool_version"] = kToolVersion;
  j["provenance"] = prov;
  return j;
}

inline std::string report_csv_header()
{
  return "decomposition,superpixel_count,ev,icv,asa,ue,ue_legacy,br,cd,precision,f,"
         "c,j,src,smf,gr,mse";
}

inline std::string report_to_csv_row(const MetricReport& r)
{
  auto cell = [](const std::optional<double>& v) {
    if (!v) return std::string();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", round_sig(*v));
    return std::string(buf);
  };
  std::string row = r.decomposition + "," + std::to_string(r.superpixel_count);
  for (const auto* v : {&r.ev, &r.icv, &r.asa, &r.ue, &r.ue_legacy, &r.br})
    row += "," + cell(*v);
  row += "," + cell(std::optional<double>(r.cd));
  for (const auto* v : {&r.precision, &r.f, &r.c, &r.j, &r.src, &r.smf, &r.gr, &r.mse})
    row += "," + cell(*v);
  return row;
}

/// Evaluate one decomposition against the image and all ground-truth
/// annotations (object metrics macro-averaged over annotations).
inline MetricReport evaluate_decomposition(const Image& image, const LabelMap& labels,
                                           const std::vector<LabelMap>& gts,
                                           const EvalConfig& cfg,
                                           const std::string& name)
{
  if (image.width() != labels.width() || image.height() != labels.height())
    throw std::invalid_argument("evaluate_decomposition: image/labels dimension mismatch");
  MetricReport rep;
  rep.decomposition = name;
  const std::vector<Region> regions = extract_regions(labels);
  rep.superpixel_count = static_cast<long>(regions.size());
  rep.cd = contour_density(labels);

  if (cfg.with_color) {
    rep.icv = compute_icv(image, labels);
    try {
      rep.ev = compute_ev(image, labels);
    } catch (const std::invalid_argument&) {
      rep.ev_degenerate = true;
    }
  }

  if (cfg.with_objects && !gts.empty()) {
    const BoundaryMask sp_b = boundary_mask(labels);
    std::vector<double> asas, ues, uels, brs, precs, fs, errs, viols;
    for (const LabelMap& gt : gts) {
      require_same_dims(labels, gt, "evaluate_decomposition");
      const OverlapMatrix ov = overlap_matrix(labels, gt);
      asas.push_back(compute_asa(ov));
      ues.push_back(compute_ue(ov));
      uels.push_back(compute_ue_legacy(ov));
      const AsaUeRelation rel = asa_ue_relation_error(ov);
      errs.push_back(rel.error);
      viols.push_back(rel.violating_fraction);
      const BoundaryMask gt_b = boundary_mask(gt);
      if (gt_b.count() > 0) {
        const double br = compute_br(sp_b, gt_b, cfg.epsilon);
        brs.push_back(br);
        const double p = sp_b.count() > 0 ? compute_precision(sp_b, gt_b, cfg.epsilon) : 1.0;
        precs.push_back(p);
        fs.push_back(f_measure(p, br));
      }
    }
    rep.asa = aggregate_over_ground_truths(asas);
    rep.ue = aggregate_over_ground_truths(ues);
    rep.ue_legacy = aggregate_over_ground_truths(uels);
    rep.asa_ue_error = aggregate_over_ground_truths(errs);
    rep.majority_violation_fraction = aggregate_over_ground_truths(viols);
    if (!brs.empty()) {
      rep.br = aggregate_over_ground_truths(brs);
      rep.precision = aggregate_over_ground_truths(precs);
      rep.f = aggregate_over_ground_truths(fs);
    }
  }

  if (cfg.with_regularity) {
    const RegularityReport reg = global_regularity(regions);
    rep.c = reg.circularity;
    rep.j = reg.j_index;
    rep.src = reg.src;
    rep.smf = reg.smf;
    rep.gr = reg.gr;
    rep.grid_halfwidth = reg.halfwidth;
    rep.binary_avg_flagged = !reg.binary_avg_threshold_found;
    rep.border_touching_regions = reg.border_touching_regions;
  }

  if (cfg.with_compression) {
    const CompressionModel model = fit_compression(image, labels);
    rep.mse = compute_mse(image, reconstruct(model, labels));
  }
  return rep;
}

/// Evaluate several decompositions, optionally on a worker pool. Output order
/// follows input order regardless of the parallelism degree.
inline std::vector<MetricReport> evaluate_all(const Image& image,
                                              const std::vector<LabelMap>& decomps,
                                              const std::vector<std::string>& names,
                                              const std::vector<LabelMap>& gts,
                                              const EvalConfig& cfg)
{
  std::vector<MetricReport> reports(decomps.size());
  std::vector<std::exception_ptr> errors(decomps.size());
  const int jobs = std::max(1, cfg.jobs);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < decomps.size(); i = next.fetch_add(1)) {
      try {
        reports[i] = evaluate_decomposition(image, decomps[i], gts, cfg, names[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (jobs == 1 || decomps.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
  return reports;
}

inline SweepTable reports_to_sweep(const std::vector<MetricReport>& reports)
{
  SweepTable table;
  for (const MetricReport& r : reports) {
    SweepRow row;
    row.id = r.decomposition;
    row.superpixel_count = r.superpixel_count;
    row.gr = r.gr.value_or(0.0);
    row.ev = r.ev.value_or(0.0);
    row.asa = r.asa.value_or(0.0);
    row.ue = r.ue.value_or(0.0);
    row.br = r.br.value_or(0.0);
    row.cd = r.cd;
    row.c = r.c.value_or(0.0);
    row.j = r.j.value_or(0.0);
    row.smf = r.smf.value_or(0.0);
    row.src = r.src.value_or(0.0);
    row.mse = r.mse.value_or(0.0);
    row.precision = r.precision.value_or(0.0);
    table.rows.push_back(std::move(row));
  }
  return table;
}

inline nlohmann::ordered_json correlation_to_json(const CorrelationTable& table)
{
  nlohmann::ordered_json j;
  j["regularity_metrics"] = table.regularity_names;
  j["performance_metrics"] = table.performance_names;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (long i = 0; i < table.coefficients.rows(); ++i) {
    nlohmann::ordered_json row;
    row["metric"] = table.regularity_names[static_cast<size_t>(i)];
    nlohmann::ordered_json cells = nlohmann::ordered_json::array();
    for (long k = 0; k < table.coefficients.cols(); ++k) {
      const double v = table.coefficients(i, k);
      if (std::isnan(v))
        cells.push_back(nullptr);
      else
        cells.push_back(round_sig(v));
    }
    row["coefficients"] = cells;
    const double avg = table.average_abs(i);
    if (std::isnan(avg))
      row["average_abs"] = nullptr;
    else
      row["average_abs"] = round_sig(avg);
    rows.push_back(row);
  }
  j["rows"] = rows;
  j["degenerate_columns"] = table.degenerate_columns;
  return j;
}

}  // namespace spx
