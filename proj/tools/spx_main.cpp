// Command-line surface for superpixel decomposition evaluation:
//   eval       metrics for one or more decompositions of an image
//   sweep      batch evaluation + Pearson correlation table
//   shapes     synthetic shape families with C / SRC values
//   compress   polynomial per-superpixel compression and MSE
//   contours   multi-scale contour map and precision-recall sweep
//   correlate  correlation table from an existing sweep CSV

#include "spx/analysis.hpp"
#include "spx/color.hpp"
#include "spx/core.hpp"
#include "spx/io.hpp"
#include "spx/regularity.hpp"
#include "spx/report.hpp"
#include "spx/shapes.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using nlohmann::ordered_json;

void write_text(const std::string& path, const std::string& text)
{
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw spx::IoError("cannot open " + path + " for writing");
  out << text;
}

std::vector<spx::LabelMap> load_maps(const std::vector<std::string>& paths)
{
  std::vector<spx::LabelMap> maps;
  maps.reserve(paths.size());
  for (const std::string& p : paths) maps.push_back(spx::read_label_map(p));
  return maps;
}

std::string stem_of(const std::string& path)
{
  return std::filesystem::path(path).stem().string();
}

std::string reports_output(const std::vector<spx::MetricReport>& reports,
                           const spx::EvalConfig& cfg)
{
  if (cfg.format == "csv") {
    std::string out = spx::report_csv_header() + "\n";
    for (const auto& r : reports) out += spx::report_to_csv_row(r) + "\n";
    return out;
  }
  ordered_json arr = ordered_json::array();
  for (const auto& r : reports) arr.push_back(spx::report_to_json(r, cfg));
  return arr.dump(2) + "\n";
}

spx::SweepTable read_sweep_csv(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw spx::IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw spx::IoError(path + ": empty sweep CSV");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  spx::SweepTable table;
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    spx::SweepRow row;
    size_t i = 0;
    while (std::getline(ss, cell, ',')) {
      if (i >= header.size())
        throw spx::IoError(path + ": too many cells on row " + std::to_string(lineno));
      const std::string& key = header[i++];
      if (key == "decomposition" || key == "id") {
        row.id = cell;
        continue;
      }
      const double v = cell.empty() ? 0.0 : std::stod(cell);
      if (key == "superpixel_count") row.superpixel_count = static_cast<long>(v);
      else if (key == "gr") row.gr = v;
      else if (key == "ev") row.ev = v;
      else if (key == "asa") row.asa = v;
      else if (key == "ue") row.ue = v;
      else if (key == "br") row.br = v;
      else if (key == "cd") row.cd = v;
      else if (key == "c") row.c = v;
      else if (key == "j") row.j = v;
      else if (key == "smf") row.smf = v;
      else if (key == "src") row.src = v;
      else if (key == "mse") row.mse = v;
      else if (key == "precision") row.precision = v;
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

int run(int argc, char** argv)
{
  CLI::App app{"Superpixel decomposition evaluation toolkit"};
  app.require_subcommand(1);

  spx::EvalConfig cfg;
  std::string output;
  std::vector<double> nus;
  std::vector<std::string> labels_paths, gt_paths;

  auto add_common = [&](CLI::App* sub, bool need_image) {
    if (need_image)
      sub->add_option("--image", cfg.image_path, "input image (PPM/PGM/PNG)")->required();
    sub->add_option("--labels", labels_paths, "decomposition label map(s)")->required();
    sub->add_option("--gt", gt_paths, "ground-truth label map(s)");
    sub->add_option("--epsilon", cfg.epsilon, "boundary tolerance in pixels")
        ->check(CLI::PositiveNumber);
    sub->add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("-o,--output", output, "output path (default stdout)");
  };

  CLI::App* eval = app.add_subcommand("eval", "evaluate decompositions");
  add_common(eval, true);
  eval->add_flag("--no-color", "skip EV/ICV");
  eval->add_flag("--no-objects", "skip ASA/UE/BR");
  eval->add_flag("--no-regularity", "skip C/J/SRC/SMF/GR");
  eval->add_flag("--no-compression", "skip polynomial compression MSE");

  CLI::App* sweep = app.add_subcommand("sweep", "evaluate many decompositions and correlate");
  add_common(sweep, true);
  std::string correlation_out;
  sweep->add_option("--correlation-output", correlation_out,
                    "write the Pearson table here (default stdout)");

  CLI::App* shapes = app.add_subcommand("shapes", "synthetic shape study");
  std::string shapes_dir = ".";
  int shape_size = 64;
  int shape_noise = 0;
  unsigned shape_seed = 0;
  shapes->add_option("--out-dir", shapes_dir, "directory for shape images");
  shapes->add_option("--size", shape_size, "shape extent in pixels")->check(CLI::PositiveNumber);
  shapes->add_option("--noise", shape_noise, "boundary noise amplitude");
  shapes->add_option("--seed", shape_seed, "noise seed");
  shapes->add_option("-o,--output", output, "C/SRC table path (default stdout)");

  CLI::App* compress = app.add_subcommand("compress", "polynomial compression MSE");
  compress->add_option("--image", cfg.image_path, "input image")->required();
  compress->add_option("--labels", labels_paths, "decomposition label map")->required();
  std::string recon_out;
  compress->add_option("--reconstruction", recon_out, "write reconstructed image (PGM/PPM)");
  compress->add_option("-o,--output", output, "report path (default stdout)");

  CLI::App* contours = app.add_subcommand("contours", "multi-scale contour map + PR sweep");
  add_common(contours, false);
  contours->add_option("--nu", nus, "contour-map thresholds in [0,1]")
      ->check(CLI::Range(0.0, 1.0));
  std::string map_out;
  contours->add_option("--map-output", map_out, "write the contour map as CSV");

  CLI::App* correlate = app.add_subcommand("correlate", "Pearson table from a sweep CSV");
  std::string sweep_csv;
  correlate->add_option("--input", sweep_csv, "sweep CSV path")->required();
  correlate->add_option("-o,--output", output, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (eval->parsed() || sweep->parsed()) {
      cfg.label_paths = labels_paths;
      cfg.gt_paths = gt_paths;
      cfg.with_color = eval->count("--no-color") == 0;
      cfg.with_objects = eval->count("--no-objects") == 0;
      cfg.with_regularity = eval->count("--no-regularity") == 0;
      cfg.with_compression = eval->count("--no-compression") == 0;
      const spx::Image image = spx::read_image(cfg.image_path);
      const auto decomps = load_maps(labels_paths);
      const auto gts = load_maps(gt_paths);
      std::vector<std::string> names;
      for (const std::string& p : labels_paths) names.push_back(stem_of(p));
      const auto reports = spx::evaluate_all(image, decomps, names, gts, cfg);
      if (sweep->parsed()) {
        if (reports.size() < 2)
          throw CLI::ValidationError("sweep", "needs at least 2 decompositions");
        std::string out = spx::report_csv_header() + "\n";
        for (const auto& r : reports) out += spx::report_to_csv_row(r) + "\n";
        write_text(output, out);
        const auto table = spx::correlation_table(spx::reports_to_sweep(reports));
        write_text(correlation_out, spx::correlation_to_json(table).dump(2) + "\n");
      } else {
        write_text(output, reports_output(reports, cfg));
      }
    } else if (shapes->parsed()) {
      struct Family {
        const char* name;
        spx::ShapeKind kind;
      };
      const Family families[] = {
          {"square", spx::ShapeKind::square},   {"circle", spx::ShapeKind::circle},
          {"hexagon", spx::ShapeKind::hexagon}, {"ellipse", spx::ShapeKind::ellipse},
          {"cross", spx::ShapeKind::cross},     {"u", spx::ShapeKind::u},
          {"split", spx::ShapeKind::split},     {"stripe", spx::ShapeKind::stripe}};
      std::filesystem::create_directories(shapes_dir);
      std::string table = "shape,area,perimeter,c,cr,vxy,src\n";
      for (const Family& f : families) {
        spx::ShapeSpec spec;
        spec.kind = f.kind;
        spec.size = shape_size;
        spec.noise_amplitude = shape_noise;
        spec.seed = shape_seed;
        if (f.kind == spx::ShapeKind::u) spec.aspect = std::max(1, shape_size / 8);
        const spx::Region region = spx::generate(spec);
        spx::LabelArray canvas =
            spx::LabelArray::Zero(region.canvas_height, region.canvas_width);
        for (const spx::Pixel& p : region.pixels) canvas(p.y, p.x) = 1;
        spx::write_label_map(
            (std::filesystem::path(shapes_dir) / (std::string(f.name) + ".pgm")).string(),
            spx::LabelMap(std::move(canvas)));
        char row[160];
        std::snprintf(row, sizeof row, "%s,%ld,%ld,%.6g,%.6g,%.6g,%.6g\n", f.name,
                      region.area, spx::perimeter(region), spx::circularity(region),
                      spx::regularity_criterion(region),
                      spx::spatial_variance_ratio(region), spx::shape_regularity(region));
        table += row;
      }
      write_text(output, table);
    } else if (compress->parsed()) {
      const spx::Image image = spx::read_image(cfg.image_path);
      const spx::LabelMap labels = spx::read_label_map(labels_paths.at(0));
      const spx::CompressionModel model = spx::fit_compression(image, labels);
      const spx::Image recon = spx::reconstruct(model, labels);
      if (!recon_out.empty()) spx::write_image(recon_out, recon);
      ordered_json j;
      j["image"] = cfg.image_path;
      j["labels"] = labels_paths.at(0);
      j["mse"] = spx::round_sig(spx::compute_mse(image, recon));
      j["tool_version"] = spx::kToolVersion;
      write_text(output, j.dump(2) + "\n");
    } else if (contours->parsed()) {
      const auto decomps = load_maps(labels_paths);
      if (gt_paths.empty())
        throw CLI::ValidationError("contours", "needs --gt");
      const spx::LabelMap gt = spx::read_label_map(gt_paths.at(0));
      std::vector<spx::BoundaryMask> masks;
      for (const spx::LabelMap& m : decomps) masks.push_back(spx::boundary_mask(m));
      const spx::ContourMap map = spx::multiscale_contour_map(masks, 0.0);
      if (!map_out.empty()) {
        std::string csv;
        for (int y = 0; y < map.height(); ++y) {
          for (int x = 0; x < map.width(); ++x) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.6g", map.values(y, x));
            csv += (x ? "," : "") + std::string(buf);
          }
          csv += "\n";
        }
        write_text(map_out, csv);
      }
      const std::vector<double> thresholds = nus.empty() ? spx::uniform_thresholds() : nus;
      const auto points =
          spx::pr_sweep(map, spx::boundary_mask(gt), cfg.epsilon, thresholds);
      std::string csv = "nu,precision,recall,f,empty_prediction\n";
      for (const auto& p : points) {
        char row[160];
        std::snprintf(row, sizeof row, "%.6g,%.6g,%.6g,%.6g,%d\n", p.threshold,
                      p.precision, p.recall, p.f, p.empty_prediction ? 1 : 0);
        csv += row;
      }
      const auto best = spx::max_f_point(points);
      char row[160];
      std::snprintf(row, sizeof row, "max_f,%.6g,%.6g,%.6g,%d\n", best.precision,
                    best.recall, best.f, best.empty_prediction ? 1 : 0);
      csv += row;
      write_text(output, csv);
    } else if (correlate->parsed()) {
      const spx::SweepTable table = read_sweep_csv(sweep_csv);
      write_text(output, spx::correlation_to_json(spx::correlation_table(table)).dump(2) + "\n");
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
