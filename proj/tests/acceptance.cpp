// End-to-end acceptance suite. Each numbered criterion prints one PASS/FAIL
// line; the process exits nonzero if any fails. argv[1] must point at the
// spx CLI binary (used by the determinism criterion).

#include "spx/analysis.hpp"
#include "spx/color.hpp"
#include "spx/core.hpp"
#include "spx/io.hpp"
#include "spx/regularity.hpp"
#include "spx/report.hpp"
#include "spx/shapes.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace spx;

namespace {

int failures = 0;
std::vector<std::string> notes;

void note(const std::string& msg) { notes.push_back(msg); }

void report(int number, const char* description, bool ok)
{
  std::printf("[%s] %2d. %s\n", ok ? "PASS" : "FAIL", number, description);
  if (!ok) {
    ++failures;
    for (const std::string& n : notes) std::printf("       %s\n", n.c_str());
  }
  notes.clear();
}

bool close(double a, double b, double tol)
{
  return std::abs(a - b) <= tol;
}

bool rel_close(double a, double b, double tol)
{
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

Region block(int w, int h, int ox = 0, int oy = 0)
{
  std::vector<Pixel> px;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) px.push_back({x + ox, y + oy});
  return Region::from_pixels(0, std::move(px));
}

// ---- criterion 1 -----------------------------------------------------------

bool criterion_asa_ue_identity()
{
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(101);
  bool ok = true;

  for (int it = 0; it < 200; ++it) {
    const int n = 8 + static_cast<int>(rng() % 57);  // 8..64
    const LabelMap sp = oracle::random_voronoi_map(n, n, 4 + static_cast<int>(rng() % 8), rng);
    const LabelMap gt = oracle::random_label_map(n, n, 2, rng);
    const auto ov = overlap_matrix(sp, gt);
    const double err = compute_asa(ov) - (1.0 - compute_ue(ov) / 2.0);
    if (std::abs(err) >= 1e-12) {
      note("binary instance " + std::to_string(it) + ": error " + std::to_string(err));
      ok = false;
    }
  }

  // forced majority overlap: superpixels strictly refine the ground truth
  for (int it = 0; it < 50; ++it) {
    const int n = 16 + static_cast<int>(rng() % 33);
    const LabelMap fine = oracle::random_voronoi_map(n, n, 9, rng);
    const LabelMap gt = oracle::random_voronoi_map(n, n, 4, rng);
    LabelArray refined(n, n);
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x)
        refined(y, x) = fine.labels(y, x) * 100 + gt.labels(y, x);
    const auto ov = overlap_matrix(LabelMap(refined), gt);
    const auto rel = asa_ue_relation_error(ov);
    if (rel.violating_fraction != 0.0 || std::abs(rel.error) >= 1e-12) {
      note("majority instance " + std::to_string(it) + ": error " +
           std::to_string(rel.error));
      ok = false;
    }
  }

  // constructed violation: one superpixel split 40/30/30
  LabelArray gt(10, 10);
  for (int y = 0; y < 10; ++y)
    for (int x = 0; x < 10; ++x) gt(y, x) = x < 4 ? 0 : (x < 7 ? 1 : 2);
  const auto rel = asa_ue_relation_error(
      overlap_matrix(LabelMap(LabelArray::Zero(10, 10)), LabelMap(gt)));
  if (!close(rel.error, -0.1, 1e-12)) {
    note("constructed violation: got " + std::to_string(rel.error) + ", want -0.1");
    ok = false;
  }

  const double secs = std::chrono::duration<double>(
      std::chrono::steady_clock::now() - t0).count();
  if (secs >= 5.0) {
    note("runtime " + std::to_string(secs) + "s exceeds 5s");
    ok = false;
  }
  return ok;
}

// ---- criterion 2 -----------------------------------------------------------

bool criterion_oracle_equivalence()
{
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(202);
  bool ok = true;
  for (int it = 0; it < 100; ++it) {
    const LabelMap sp = it % 2 ? oracle::random_label_map(8, 8, 5, rng)
                               : oracle::random_voronoi_map(8, 8, 6, rng);
    const LabelMap gt = oracle::random_voronoi_map(8, 8, 3, rng);
    const Image img = oracle::random_image(8, 8, it % 3 ? 1 : 3, rng);
    const auto ov = overlap_matrix(sp, gt);

    if (!rel_close(compute_asa(ov), oracle::asa(sp, gt), 1e-9)) { note("asa"); ok = false; }
    if (!rel_close(compute_ue(ov), oracle::ue(sp, gt), 1e-9)) { note("ue"); ok = false; }
    if (!rel_close(compute_ue_legacy(ov), oracle::ue_legacy(sp, gt), 1e-9)) {
      note("ue_legacy");
      ok = false;
    }
    if (!rel_close(compute_ev(img, sp), oracle::ev(img, sp), 1e-9)) { note("ev"); ok = false; }
    if (!rel_close(compute_icv(img, sp), oracle::icv(img, sp), 1e-9)) { note("icv"); ok = false; }

    const BoundaryMask sb = boundary_mask(sp);
    const BoundaryMask gb = boundary_mask(gt);
    if (sb.count() > 0 && gb.count() > 0)
      for (double eps : {1.0, 2.0, 3.0}) {
        if (!rel_close(compute_br(sb, gb, eps), oracle::br(sp, gt, eps), 1e-9)) {
          note("br eps " + std::to_string(eps));
          ok = false;
        }
        if (!rel_close(compute_precision(sb, gb, eps), oracle::precision(sp, gt, eps),
                       1e-9)) {
          note("precision eps " + std::to_string(eps));
          ok = false;
        }
      }
  }
  const double secs = std::chrono::duration<double>(
      std::chrono::steady_clock::now() - t0).count();
  if (secs >= 10.0) {
    note("runtime " + std::to_string(secs) + "s exceeds 10s");
    ok = false;
  }
  return ok;
}

// ---- criterion 3 -----------------------------------------------------------

bool criterion_ev_robustness()
{
  std::mt19937 rng(303);
  bool ok = true;
  for (int it = 0; it < 10; ++it) {
    const Image img = oracle::random_image(10, 10, it % 2 ? 3 : 1, rng);
    const LabelMap m = oracle::random_voronoi_map(10, 10, 6, rng);
    const double ev0 = compute_ev(img, m);
    const double icv0 = compute_icv(img, m);

    Image mapped = img;
    for (auto& plane : mapped.planes) plane = 2.0 * plane + 7.0;
    if (!rel_close(compute_ev(mapped, m), ev0, 1e-9)) { note("ev affine"); ok = false; }
    if (!rel_close(compute_icv(mapped, m), 2.0 * icv0, 1e-9)) {
      note("icv affine scale");
      ok = false;
    }

    Image big(20, 20, img.channels());
    for (int c = 0; c < img.channels(); ++c)
      for (int y = 0; y < 20; ++y)
        for (int x = 0; x < 20; ++x)
          big.planes[static_cast<size_t>(c)](y, x) =
              img.planes[static_cast<size_t>(c)](y / 2, x / 2);
    LabelArray bl(20, 20);
    for (int y = 0; y < 20; ++y)
      for (int x = 0; x < 20; ++x) bl(y, x) = m.labels(y / 2, x / 2);
    const LabelMap big_m(bl);
    if (!rel_close(compute_ev(big, big_m), ev0, 1e-9)) { note("ev upsample"); ok = false; }
    if (!rel_close(compute_icv(big, big_m), 0.5 * icv0, 1e-9)) {
      note("icv upsample scale");
      ok = false;
    }
  }
  return ok;
}

// ---- criterion 4 -----------------------------------------------------------

bool criterion_regularity_analytics()
{
  bool ok = true;
  for (int cell : {6, 8}) {
    const auto rep = global_regularity(extract_regions(grid_decomposition(4 * cell, 4 * cell, cell)));
    if (!close(rep.gr, 1.0, 1e-9)) {
      note("grid cell " + std::to_string(cell) + ": GR " + std::to_string(rep.gr));
      ok = false;
    }
  }

  LabelArray stripes(8, 8);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) stripes(y, x) = x;
  if (shape_regularity_criteria(extract_regions(LabelMap(stripes))) != 0.0) {
    note("stripes SRC not 0");
    ok = false;
  }

  double prev = 2.0;
  for (int n = 10; n <= 200; n += 10) {
    const double c = circularity(block(n, n));
    if (c >= prev) {
      note("C not decreasing at n=" + std::to_string(n));
      ok = false;
    }
    prev = c;
  }
  if (!close(circularity(block(200, 200)), std::numbers::pi / 4.0, 0.02)) {
    note("C(200) not near pi/4");
    ok = false;
  }

  for (int n = 5; n <= 200; n = n < 40 ? n + 1 : n + 40) {
    const double src = shape_regularity_criteria({block(n, n)});
    if (!close(src, 1.0, 0.02)) {
      note("SRC(square " + std::to_string(n) + ") = " + std::to_string(src));
      ok = false;
    }
  }
  return ok;
}

// ---- criterion 5 -----------------------------------------------------------

Region shape_region(ShapeKind kind, int size, int noise, unsigned seed)
{
  ShapeSpec spec;
  spec.kind = kind;
  spec.size = size;
  spec.noise_amplitude = noise;
  spec.seed = seed;
  return generate(spec);
}

bool criterion_shape_ordering()
{
  bool ok = true;
  // sizes tuned so every family has area near 2000 pixels
  const Region square = shape_region(ShapeKind::square, 45, 0, 0);
  const Region circle = shape_region(ShapeKind::circle, 51, 0, 0);
  const Region hexagon = shape_region(ShapeKind::hexagon, 55, 0, 0);
  const Region ellipse = shape_region(ShapeKind::ellipse, 72, 0, 0);
  const Region cross = shape_region(ShapeKind::cross, 51, 0, 0);

  for (const Region* r : {&square, &circle, &hexagon, &ellipse, &cross})
    if (std::abs(r->area - 2000) > 350) {
      note("area off target: " + std::to_string(r->area));
      ok = false;
    }

  const double src_sq = shape_regularity(square);
  const double src_ci = shape_regularity(circle);
  const double src_he = shape_regularity(hexagon);
  const double regular_min = std::min({src_sq, src_ci, src_he});
  const double regular_max = std::max({src_sq, src_ci, src_he});
  if (regular_min < 0.93) {
    note("regular SRC below 0.93: " + std::to_string(regular_min));
    ok = false;
  }
  if (regular_max - regular_min > 0.05) {
    note("regular SRC spread " + std::to_string(regular_max - regular_min));
    ok = false;
  }
  const double src_el = shape_regularity(ellipse);
  if (!(src_el < regular_min - 0.05)) {
    note("ellipse SRC " + std::to_string(src_el) + " not separated from " +
         std::to_string(regular_min));
    ok = false;
  }

  // noisy regulars vs smooth standard shapes (ellipse, cross)
  const double std_src_max = std::max(src_el, shape_regularity(cross));
  const double std_c_max = std::max(circularity(ellipse), circularity(cross));
  double noisy_c_min = 2.0;
  for (ShapeKind kind : {ShapeKind::square, ShapeKind::circle, ShapeKind::hexagon}) {
    const Region noisy = shape_region(kind, kind == ShapeKind::square ? 45
                                            : kind == ShapeKind::circle ? 51 : 55,
                                      2, 9);
    const double src = shape_regularity(noisy);
    if (!(src >= std_src_max)) {
      note("noisy regular SRC " + std::to_string(src) + " below standard max " +
           std::to_string(std_src_max));
      ok = false;
    }
    noisy_c_min = std::min(noisy_c_min, circularity(noisy));
  }
  // C fails the same separation: some noisy regular scores below a smooth
  // standard shape
  if (!(noisy_c_min < std_c_max)) {
    note("C unexpectedly separates the groups: noisy min " +
         std::to_string(noisy_c_min) + " vs standard max " + std::to_string(std_c_max));
    ok = false;
  }
  return ok;
}

// ---- criterion 6 -----------------------------------------------------------

bool criterion_smf_vs_j()
{
  bool ok = true;
  const int hw = 14;
  std::vector<ShapeGrid> base;
  for (int i = 0; i < 24; ++i) base.push_back(register_shape(block(10, 10), hw));

  double prev_smf = -1.0, prev_j = -1.0;
  double max_smf_step = 0.0, max_j_step = 0.0;

  std::vector<Pixel> outlier_px;
  for (int y = 0; y < 10; ++y)
    for (int x = 0; x < 10; ++x) outlier_px.push_back({x, y});
  // grow the outlier to 20x20, one pixel at a time
  for (int y = 0; y < 20; ++y)
    for (int x = 0; x < 20; ++x) {
      if (x < 10 && y < 10) continue;
      outlier_px.push_back({x, y});
      const Region outlier = Region::from_pixels(0, outlier_px);
      std::vector<ShapeGrid> shapes = base;
      shapes.push_back(register_shape(outlier, hw));

      double total = 24.0 * 100.0 + static_cast<double>(outlier.area);
      const ShapeGrid avg = average_shape(shapes);
      const auto bin = binary_average_shape(avg, total / 25.0);
      const double smf = smooth_matching_factor(shapes, avg);
      const double j = jaccard_consistency(shapes, bin.grid);

      if (prev_smf >= 0.0) {
        max_smf_step = std::max(max_smf_step, std::abs(smf - prev_smf));
        max_j_step = std::max(max_j_step, std::abs(j - prev_j));
      }
      prev_smf = smf;
      prev_j = j;
    }

  if (!(max_smf_step < 0.01)) {
    note("SMF step " + std::to_string(max_smf_step) + " not continuous");
    ok = false;
  }
  if (!(max_j_step > 0.05)) {
    note("J never jumped; max step " + std::to_string(max_j_step));
    ok = false;
  }
  return ok;
}

// ---- criterion 7 -----------------------------------------------------------

bool criterion_compression()
{
  std::mt19937 rng(707);
  bool ok = true;

  // per-region cubic image reconstructs exactly
  Image cubic(12, 12, 1);
  for (int y = 0; y < 12; ++y)
    for (int x = 0; x < 12; ++x)
      cubic.planes[0](y, x) = 90.0 + 0.4 * x - 0.3 * y + 0.06 * x * x -
                              0.02 * x * y + 0.008 * y * y * y;
  for (int it = 0; it < 5; ++it) {
    const LabelMap m = oracle::random_voronoi_map(12, 12, 3 + it, rng);
    const double mse = compute_mse(cubic, reconstruct(fit_compression(cubic, m), m));
    if (!(mse < 1e-6)) {
      note("cubic image MSE " + std::to_string(mse));
      ok = false;
    }
  }

  for (int it = 0; it < 20; ++it) {
    const Image img = oracle::random_image(10, 10, 1, rng);
    const LabelMap coarse = oracle::random_voronoi_map(10, 10, 3, rng);
    LabelArray fine = coarse.labels;
    for (int y = 0; y < 10; ++y)
      for (int x = 0; x < 10; ++x) fine(y, x) = coarse.labels(y, x) * 2 + y % 2;
    const LabelMap refined(fine);
    const double a = compute_mse(img, reconstruct(fit_compression(img, coarse), coarse));
    const double b = compute_mse(img, reconstruct(fit_compression(img, refined), refined));
    if (!(b <= a + 1e-9)) {
      note("refinement raised MSE: " + std::to_string(a) + " -> " + std::to_string(b));
      ok = false;
    }
  }
  return ok;
}

// ---- criterion 8 -----------------------------------------------------------

BoundaryMask row_mask(int rows_set_from, int rows_set_to)
{
  BoundaryMask bm;
  bm.mask = BoolArray::Constant(5, 5, false);
  for (int y = rows_set_from; y <= rows_set_to; ++y)
    for (int x = 0; x < 5; ++x) bm.mask(y, x) = true;
  return bm;
}

bool criterion_contour_pipeline()
{
  bool ok = true;
  // three scales: row 2 at all, rows 1-2 at two, rows 0-2 at one
  const ContourMap map =
      multiscale_contour_map({row_mask(0, 2), row_mask(1, 2), row_mask(2, 2)}, 0.0);
  const BoundaryMask gt = row_mask(2, 2);
  const auto pts = pr_sweep(map, gt, 1.5, {0.2, 0.5, 0.9});
  const double want_p[3] = {10.0 / 15.0, 1.0, 1.0};
  for (int i = 0; i < 3; ++i) {
    if (!close(pts[static_cast<size_t>(i)].precision, want_p[i], 1e-12) ||
        !close(pts[static_cast<size_t>(i)].recall, 1.0, 1e-12)) {
      note("threshold " + std::to_string(pts[static_cast<size_t>(i)].threshold) +
           ": P " + std::to_string(pts[static_cast<size_t>(i)].precision) + " BR " +
           std::to_string(pts[static_cast<size_t>(i)].recall));
      ok = false;
    }
    const double f = f_measure(want_p[i], 1.0);
    if (!close(pts[static_cast<size_t>(i)].f, f, 1e-12)) {
      note("F mismatch at threshold index " + std::to_string(i));
      ok = false;
    }
  }

  std::mt19937 rng(808);
  std::vector<BoundaryMask> masks;
  for (int i = 0; i < 5; ++i)
    masks.push_back(boundary_mask(oracle::random_voronoi_map(16, 16, 4 + 2 * i, rng)));
  const ContourMap rmap = multiscale_contour_map(masks, 0.0);
  const BoundaryMask rgt = boundary_mask(oracle::random_voronoi_map(16, 16, 4, rng));
  double prev = 2.0;
  for (const auto& pt : pr_sweep(rmap, rgt, 2.0, uniform_thresholds())) {
    if (pt.recall > prev + 1e-12) {
      note("BR increased along the sweep");
      ok = false;
    }
    prev = pt.recall;
  }
  return ok;
}

// ---- criterion 9 -----------------------------------------------------------

bool criterion_pearson()
{
  bool ok = true;
  const std::vector<double> knobs = {0.15, 0.82, 0.44, 0.67, 0.29};
  SweepTable sweep;
  for (double k : knobs) {
    SweepRow row;
    row.gr = k * k;
    row.smf = std::sqrt(k);
    row.j = 1.0 - k;
    row.src = 0.4 + 0.3 * std::sin(k);
    row.c = k;
    row.asa = 0.9 - 0.25 * k * k;
    row.ue = 0.1 + 0.8 * k;
    row.br = std::cos(k);
    row.precision = 1.0 / (1.0 + k);
    row.ev = k * k * k;
    row.mse = 40.0 * (1.0 - k);
    sweep.rows.push_back(row);
  }
  const auto table = correlation_table(sweep);
  auto col = [&](int which) {
    std::vector<double> v;
    for (const auto& r : sweep.rows) {
      const double vals[11] = {r.gr, r.smf, r.j, r.src, r.c, r.asa,
                               r.ue, r.br, r.precision, r.ev, r.mse};
      v.push_back(vals[which]);
    }
    return v;
  };
  for (int i = 0; i < 5; ++i)
    for (int k = 0; k < 6; ++k) {
      const double hand = oracle::pearson(col(i), col(5 + k));
      if (!close(table.coefficients(i, k), hand, 1e-9)) {
        note("cell (" + std::to_string(i) + "," + std::to_string(k) + ") got " +
             std::to_string(table.coefficients(i, k)) + " want " + std::to_string(hand));
        ok = false;
      }
    }

  // affine columns: c is the knob itself, ue = 0.1 + 0.8 * knob
  if (!close(std::abs(table.coefficients(4, 1)), 1.0, 1e-12)) {
    note("affine pair |r| = " + std::to_string(std::abs(table.coefficients(4, 1))));
    ok = false;
  }
  return ok;
}

// ---- criterion 10 ----------------------------------------------------------

std::string read_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool criterion_determinism(const std::string& cli)
{
  bool ok = true;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "spx_acceptance_fixture";
  fs::create_directories(dir);

  // fixture: gradient image, two decompositions, one binary ground truth
  Image img(32, 32, 1);
  for (int y = 0; y < 32; ++y)
    for (int x = 0; x < 32; ++x)
      img.planes[0](y, x) = (x * 255) / 31 / 2 + (y * 255) / 31 / 2;
  write_image((dir / "image.pgm").string(), img);

  write_label_map((dir / "grid.pgm").string(), grid_decomposition(32, 32, 4));
  std::mt19937 rng(1010);
  write_label_map((dir / "voronoi.pgm").string(),
                  oracle::random_voronoi_map(32, 32, 12, rng));
  LabelArray gt(32, 32);
  for (int y = 0; y < 32; ++y)
    for (int x = 0; x < 32; ++x) gt(y, x) = x < 16 ? 0 : 1;
  write_label_map((dir / "gt.pgm").string(), LabelMap(gt));

  auto run_eval = [&](int jobs, const std::string& out) {
    const std::string cmd = "'" + cli + "' eval --image '" + (dir / "image.pgm").string() +
                            "' --labels '" + (dir / "grid.pgm").string() + "' '" +
                            (dir / "voronoi.pgm").string() + "' --gt '" +
                            (dir / "gt.pgm").string() + "' --jobs " +
                            std::to_string(jobs) + " -o '" + (dir / out).string() + "'";
    return std::system(cmd.c_str());
  };

  if (run_eval(1, "a.json") != 0 || run_eval(1, "b.json") != 0 ||
      run_eval(8, "c.json") != 0) {
    note("eval invocation failed");
    return false;
  }
  const std::string a = read_file((dir / "a.json").string());
  const std::string b = read_file((dir / "b.json").string());
  const std::string c = read_file((dir / "c.json").string());
  if (a.empty()) {
    note("empty report");
    ok = false;
  }
  if (a != b) {
    note("reports differ between identical runs");
    ok = false;
  }
  if (a != c) {
    note("reports differ between --jobs 1 and --jobs 8");
    ok = false;
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv)
{
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <path-to-spx-cli>\n");
    return 2;
  }
  report(1, "ASA-UE identity on binary / majority-overlap / constructed instances",
         criterion_asa_ue_identity());
  report(2, "brute-force oracle equivalence for ASA, UE, UE_L, BR, P, EV, ICV",
         criterion_oracle_equivalence());
  report(3, "EV invariance and ICV scaling under intensity/upsampling maps",
         criterion_ev_robustness());
  report(4, "regularity analytics: grid GR, stripe SRC, square C and SRC trends",
         criterion_regularity_analytics());
  report(5, "synthetic shape ordering: regular vs standard, noise behavior",
         criterion_shape_ordering());
  report(6, "SMF continuity vs J step change under a growing outlier",
         criterion_smf_vs_j());
  report(7, "compression: cubic exactness and refinement monotonicity",
         criterion_compression());
  report(8, "contour pipeline: hand-checked PR values and BR monotonicity",
         criterion_contour_pipeline());
  report(9, "Pearson correlation table vs hand-computed coefficients",
         criterion_pearson());
  report(10, "byte-identical eval reports across runs and parallelism degrees",
         criterion_determinism(argv[1]));
  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
