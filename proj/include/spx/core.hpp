#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace spx {

using ScalarArray = Eigen::ArrayXXd;                          // (row = y, col = x)
using LabelArray = Eigen::ArrayXXi;
using BoolArray = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct Pixel {
  int x = 0;
  int y = 0;
  friend bool operator==(const Pixel&, const Pixel&) = default;
};

/// Multi-channel raster image; intensities stored as doubles, plane-per-channel.
struct Image {
  std::vector<ScalarArray> planes;  // planes[c](y, x)

  Image() = default;
  Image(int width, int height, int channels)
  {
    if (width < 1 || height < 1 || (channels != 1 && channels != 3))
      throw std::invalid_argument("Image: invalid dimensions");
    planes.assign(static_cast<size_t>(channels), ScalarArray::Zero(height, width));
  }

  int width() const { return static_cast<int>(planes.at(0).cols()); }
  int height() const { return static_cast<int>(planes.at(0).rows()); }
  int channels() const { return static_cast<int>(planes.size()); }
  long pixel_count() const { return static_cast<long>(width()) * height(); }
};

/// One label per pixel; labels are arbitrary non-negative ids, not assumed contiguous.
struct LabelMap {
  LabelArray labels;  // labels(y, x)

  LabelMap() = default;
  explicit LabelMap(LabelArray l) : labels(std::move(l))
  {
    if (labels.rows() < 1 || labels.cols() < 1)
      throw std::invalid_argument("LabelMap: empty grid");
    if ((labels < 0).any())
      throw std::invalid_argument("LabelMap: negative label");
  }

  int width() const { return static_cast<int>(labels.cols()); }
  int height() const { return static_cast<int>(labels.rows()); }
  long pixel_count() const { return static_cast<long>(width()) * height(); }
};

/// One labeled segment as an explicit pixel set with cached area and barycenter.
/// canvas_width/height are the dimensions of the grid the region was cut from
/// (0 when the region is free-standing, e.g. a synthetic shape with margins).
struct Region {
  int label = 0;
  std::vector<Pixel> pixels;
  long area = 0;
  double barycenter_x = 0.0;
  double barycenter_y = 0.0;
  int canvas_width = 0;
  int canvas_height = 0;

  static Region from_pixels(int label, std::vector<Pixel> px, int canvas_w = 0, int canvas_h = 0)
  {
    if (px.empty()) throw std::invalid_argument("Region: empty pixel set");
    Region r;
    r.label = label;
    r.pixels = std::move(px);
    r.area = static_cast<long>(r.pixels.size());
    double sx = 0.0, sy = 0.0;
    for (const Pixel& p : r.pixels) {
      sx += p.x;
      sy += p.y;
    }
    r.barycenter_x = sx / static_cast<double>(r.area);
    r.barycenter_y = sy / static_cast<double>(r.area);
    r.canvas_width = canvas_w;
    r.canvas_height = canvas_h;
    return r;
  }
};

/// Several human annotations of the same image.
struct GroundTruth {
  std::vector<LabelMap> annotations;

  explicit GroundTruth(std::vector<LabelMap> a) : annotations(std::move(a))
  {
    if (annotations.empty()) throw std::invalid_argument("GroundTruth: no annotations");
    for (const LabelMap& m : annotations)
      if (m.width() != annotations.front().width() || m.height() != annotations.front().height())
        throw std::invalid_argument("GroundTruth: annotation dimensions differ");
  }
};

/// |S_k ∩ G_j| pixel counts. Rows follow sp_labels, columns gt_labels (both ascending).
struct OverlapMatrix {
  std::vector<int> sp_labels;
  std::vector<int> gt_labels;
  Eigen::MatrixXd counts;  // (k, j)
  long total = 0;          // |I|

  Eigen::VectorXd sp_areas() const { return counts.rowwise().sum(); }
  Eigen::VectorXd gt_areas() const { return counts.colwise().sum(); }
};

struct BoundaryMask {
  BoolArray mask;  // (y, x)

  int width() const { return static_cast<int>(mask.cols()); }
  int height() const { return static_cast<int>(mask.rows()); }
  long count() const { return mask.count(); }
};

inline void require_same_dims(const LabelMap& a, const LabelMap& b, const char* what)
{
  if (a.width() != b.width() || a.height() != b.height())
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

/// One Region per distinct label, ordered by ascending label id.
inline std::vector<Region> extract_regions(const LabelMap& map)
{
  std::map<int, std::vector<Pixel>> buckets;
  const int w = map.width(), h = map.height();
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      buckets[map.labels(y, x)].push_back({x, y});
  std::vector<Region> out;
  out.reserve(buckets.size());
  for (auto& [label, px] : buckets)
    out.push_back(Region::from_pixels(label, std::move(px), w, h));
  return out;
}

inline OverlapMatrix overlap_matrix(const LabelMap& sp, const LabelMap& gt)
{
  require_same_dims(sp, gt, "overlap_matrix");
  std::map<int, int> sp_index, gt_index;
  const int w = sp.width(), h = sp.height();
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      sp_index.emplace(sp.labels(y, x), 0);
      gt_index.emplace(gt.labels(y, x), 0);
    }
  OverlapMatrix ov;
  for (auto& [label, idx] : sp_index) {
    idx = static_cast<int>(ov.sp_labels.size());
    ov.sp_labels.push_back(label);
  }
  for (auto& [label, idx] : gt_index) {
    idx = static_cast<int>(ov.gt_labels.size());
    ov.gt_labels.push_back(label);
  }
  ov.counts = Eigen::MatrixXd::Zero(static_cast<long>(ov.sp_labels.size()),
                                    static_cast<long>(ov.gt_labels.size()));
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      ov.counts(sp_index[sp.labels(y, x)], gt_index[gt.labels(y, x)]) += 1.0;
  ov.total = sp.pixel_count();
  return ov;
}

/// A pixel is a boundary pixel iff some 4-neighbor inside the grid carries a
/// different label. The image border alone does not mark a pixel.
inline BoundaryMask boundary_mask(const LabelMap& map)
{
  const int w = map.width(), h = map.height();
  BoundaryMask bm;
  bm.mask = BoolArray::Constant(h, w, false);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const int l = map.labels(y, x);
      const bool diff = (x > 0 && map.labels(y, x - 1) != l) ||
                        (x + 1 < w && map.labels(y, x + 1) != l) ||
                        (y > 0 && map.labels(y - 1, x) != l) ||
                        (y + 1 < h && map.labels(y + 1, x) != l);
      bm.mask(y, x) = diff;
    }
  return bm;
}

inline double contour_density(const LabelMap& map)
{
  return static_cast<double>(boundary_mask(map).count()) /
         static_cast<double>(map.pixel_count());
}

/// Pairs of labels sharing a 4-connected boundary, each pair once (a < b).
inline std::vector<std::pair<int, int>> label_adjacency(const LabelMap& map)
{
  std::map<std::pair<int, int>, bool> seen;
  const int w = map.width(), h = map.height();
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const int l = map.labels(y, x);
      if (x + 1 < w && map.labels(y, x + 1) != l)
        seen[{std::min(l, map.labels(y, x + 1)), std::max(l, map.labels(y, x + 1))}] = true;
      if (y + 1 < h && map.labels(y + 1, x) != l)
        seen[{std::min(l, map.labels(y + 1, x)), std::max(l, map.labels(y + 1, x))}] = true;
    }
  std::vector<std::pair<int, int>> out;
  out.reserve(seen.size());
  for (const auto& [pair, _] : seen) out.push_back(pair);
  return out;
}

/// Variance of Euclidean distances between barycenters of adjacent regions,
/// normalized by their mean.
inline double barycenter_dispersion(const LabelMap& map)
{
  const std::vector<Region> regions = extract_regions(map);
  if (regions.size() < 2)
    throw std::invalid_argument("barycenter_dispersion: fewer than 2 regions");
  std::map<int, const Region*> by_label;
  for (const Region& r : regions) by_label[r.label] = &r;
  const auto pairs = label_adjacency(map);
  if (pairs.empty())
    throw std::invalid_argument("barycenter_dispersion: no adjacent region pairs");
  Eigen::VectorXd d(static_cast<long>(pairs.size()));
  long i = 0;
  for (const auto& [a, b] : pairs) {
    const Region* ra = by_label.at(a);
    const Region* rb = by_label.at(b);
    d(i++) = std::hypot(ra->barycenter_x - rb->barycenter_x,
                        ra->barycenter_y - rb->barycenter_y);
  }
  const double mean = d.mean();
  const double var = (d.array() - mean).square().mean();
  return var / mean;
}

}  // namespace spx
