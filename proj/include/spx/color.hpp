#pragma once

#include "spx/core.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

namespace spx {

namespace detail {

inline void require_same_dims(const Image& img, const LabelMap& map, const char* what)
{
  if (img.width() != map.width() || img.height() != map.height())
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

// Per-channel mean colors per region.
inline std::vector<Eigen::VectorXd> region_means(const Image& img,
                                                 const std::vector<Region>& regions)
{
  std::vector<Eigen::VectorXd> means;
  means.reserve(regions.size());
  for (const Region& r : regions) {
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(img.channels());
    for (const Pixel& p : r.pixels)
      for (int c = 0; c < img.channels(); ++c) mu(c) += img.planes[c](p.y, p.x);
    means.push_back(mu / static_cast<double>(r.area));
  }
  return means;
}

}  // namespace detail

/// ICV = (1/|S|) Σ_k sqrt(Σ_{p∈S_k} ‖I(p) − μ(S_k)‖²) / |S_k|.
inline double compute_icv(const Image& img, const LabelMap& map)
{
  detail::require_same_dims(img, map, "compute_icv");
  const std::vector<Region> regions = extract_regions(map);
  const auto means = detail::region_means(img, regions);
  double acc = 0.0;
  for (size_t k = 0; k < regions.size(); ++k) {
    double ss = 0.0;
    for (const Pixel& p : regions[k].pixels)
      for (int c = 0; c < img.channels(); ++c) {
        const double d = img.planes[c](p.y, p.x) - means[k](c);
        ss += d * d;
      }
    acc += std::sqrt(ss) / static_cast<double>(regions[k].area);
  }
  return acc / static_cast<double>(regions.size());
}

/// EV = Σ_k |S_k|‖μ(S_k) − μ(I)‖² / Σ_p ‖I(p) − μ(I)‖², channels summed.
inline double compute_ev(const Image& img, const LabelMap& map)
{
  detail::require_same_dims(img, map, "compute_ev");
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(img.channels());
  for (int c = 0; c < img.channels(); ++c) mu(c) = img.planes[c].mean();
  double denom = 0.0;
  for (int c = 0; c < img.channels(); ++c)
    denom += (img.planes[c] - mu(c)).square().sum();
  if (denom <= 0.0)
    throw std::invalid_argument("compute_ev: constant image (zero variance)");
  const std::vector<Region> regions = extract_regions(map);
  const auto means = detail::region_means(img, regions);
  double numer = 0.0;
  for (size_t k = 0; k < regions.size(); ++k)
    numer += static_cast<double>(regions[k].area) * (means[k] - mu).squaredNorm();
  return numer / denom;
}

/// Variance form of EV: 1 − Σ_k (|S_k|/|I|)·σ(S_k)²/σ(I)². Kept as an
/// independent algebraic route; both forms must agree.
inline double compute_ev_variance_form(const Image& img, const LabelMap& map)
{
  detail::require_same_dims(img, map, "compute_ev_variance_form");
  const double n = static_cast<double>(img.pixel_count());
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(img.channels());
  for (int c = 0; c < img.channels(); ++c) mu(c) = img.planes[c].mean();
  double sigma_image = 0.0;
  for (int c = 0; c < img.channels(); ++c)
    sigma_image += (img.planes[c] - mu(c)).square().sum() / n;
  if (sigma_image <= 0.0)
    throw std::invalid_argument("compute_ev_variance_form: constant image");
  const std::vector<Region> regions = extract_regions(map);
  const auto means = detail::region_means(img, regions);
  double acc = 0.0;
  for (size_t k = 0; k < regions.size(); ++k) {
    double ss = 0.0;
    for (const Pixel& p : regions[k].pixels)
      for (int c = 0; c < img.channels(); ++c) {
        const double d = img.planes[c](p.y, p.x) - means[k](c);
        ss += d * d;
      }
    const double sigma_region = ss / static_cast<double>(regions[k].area);
    acc += (static_cast<double>(regions[k].area) / n) * sigma_region / sigma_image;
  }
  return 1.0 - acc;
}

/// Third-order bivariate polynomial model per region per channel, on
/// barycenter-centered coordinates. Basis order:
/// 1, x, y, x², xy, y², x³, x²y, xy², y³.
struct CompressionModel {
  static constexpr int kBasisSize = 10;
  struct RegionFit {
    double center_x = 0.0;
    double center_y = 0.0;
    std::vector<Eigen::VectorXd> coeffs;  // one 10-vector per channel
  };
  std::map<int, RegionFit> fits;  // keyed by label
  int channels = 0;
};

inline Eigen::Matrix<double, 1, CompressionModel::kBasisSize> cubic_basis(double x, double y)
{
  Eigen::Matrix<double, 1, CompressionModel::kBasisSize> b;
  b << 1.0, x, y, x * x, x * y, y * y, x * x * x, x * x * y, x * y * y, y * y * y;
  return b;
}

inline CompressionModel fit_compression(const Image& img, const LabelMap& map)
{
  detail::require_same_dims(img, map, "fit_compression");
  CompressionModel model;
  model.channels = img.channels();
  for (const Region& r : extract_regions(map)) {
    Eigen::MatrixXd A(r.area, CompressionModel::kBasisSize);
    for (long i = 0; i < r.area; ++i)
      A.row(i) = cubic_basis(r.pixels[static_cast<size_t>(i)].x - r.barycenter_x,
                             r.pixels[static_cast<size_t>(i)].y - r.barycenter_y);
    // Minimum-norm least squares; handles rank-deficient tiny regions.
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
    CompressionModel::RegionFit fit;
    fit.center_x = r.barycenter_x;
    fit.center_y = r.barycenter_y;
    for (int c = 0; c < img.channels(); ++c) {
      Eigen::VectorXd b(r.area);
      for (long i = 0; i < r.area; ++i) {
        const Pixel& p = r.pixels[static_cast<size_t>(i)];
        b(i) = img.planes[c](p.y, p.x);
      }
      fit.coeffs.push_back(cod.solve(b));
    }
    model.fits.emplace(r.label, std::move(fit));
  }
  return model;
}

/// Evaluate each region's polynomial; clamp to [0, 255].
inline Image reconstruct(const CompressionModel& model, const LabelMap& map)
{
  Image out(map.width(), map.height(), model.channels);
  for (int y = 0; y < map.height(); ++y)
    for (int x = 0; x < map.width(); ++x) {
      const auto it = model.fits.find(map.labels(y, x));
      if (it == model.fits.end())
        throw std::invalid_argument("reconstruct: label " +
                                    std::to_string(map.labels(y, x)) +
                                    " missing from model");
      const auto& fit = it->second;
      const auto b = cubic_basis(x - fit.center_x, y - fit.center_y);
      for (int c = 0; c < model.channels; ++c) {
        const double v = (b * fit.coeffs[static_cast<size_t>(c)]).value();
        out.planes[c](y, x) = std::clamp(v, 0.0, 255.0);
      }
    }
  return out;
}

/// MSE = (1/|I|) Σ_p ‖I(p) − I_r(p)‖², channels summed.
inline double compute_mse(const Image& original, const Image& reconstructed)
{
  if (original.width() != reconstructed.width() ||
      original.height() != reconstructed.height() ||
      original.channels() != reconstructed.channels())
    throw std::invalid_argument("compute_mse: dimension mismatch");
  double acc = 0.0;
  for (int c = 0; c < original.channels(); ++c)
    acc += (original.planes[c] - reconstructed.planes[c]).square().sum();
  return acc / static_cast<double>(original.pixel_count());
}

}  // namespace spx
