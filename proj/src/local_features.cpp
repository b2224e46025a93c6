#include "chromapraise/local_features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "chromapraise/errors.hpp"

namespace chromapraise {

double hue_distance(double h1, double h2) {
  const double d = std::fmod(std::abs(h1 - h2), 360.0);
  return d > 180.0 ? 360.0 - d : d;
}

double circular_mean_hue(std::span<const double> hues) {
  double c = 0.0;
  double s = 0.0;
  for (double h : hues) {
    c += std::cos(h * std::numbers::pi / 180.0);
    s += std::sin(h * std::numbers::pi / 180.0);
  }
  if (std::hypot(c, s) <= 1e-9 * static_cast<double>(hues.size())) return 0.0;
  double mean = std::atan2(s, c) * 180.0 / std::numbers::pi;
  if (mean < 0.0) mean += 360.0;
  if (mean >= 360.0 - 1e-9) mean = 0.0;
  return mean;
}

SegmentMeans largest_segment_means(const Segmentation& seg) {
  SegmentMeans out;
  if (seg.count() >= 1) {
    const RegionStats& r = seg.regions[0];
    out.first = {r.hue_mean, r.sat_mean, r.val_mean};
  }
  if (seg.count() >= 2) {
    const RegionStats& r = seg.regions[1];
    out.second = {r.hue_mean, r.sat_mean, r.val_mean};
  }
  return out;
}

Contrasts segment_contrasts(const Segmentation& seg) {
  Contrasts out;
  if (seg.count() < 1 || seg.regions[0].neighbors.empty()) return out;
  const RegionStats& largest = seg.regions[0];
  out = {0.0, 0.0, 0.0};
  for (const auto& [label, shared] : largest.neighbors) {
    const RegionStats& nb = seg.regions[static_cast<std::size_t>(label)];
    out.h = std::max(out.h, hue_distance(largest.hue_mean, nb.hue_mean));
    out.s = std::max(out.s, std::abs(largest.sat_mean - nb.sat_mean));
    out.v = std::max(out.v, std::abs(largest.val_mean - nb.val_mean));
  }
  return out;
}

double shape_complexity(const RegionStats& region) {
  if (region.area < 1) throw ArgumentError("shape complexity of an empty region");
  return region.contour_length * region.contour_length / (4.0 * std::numbers::pi * region.area);
}

LocalFeatures local_features(const Segmentation& seg) {
  LocalFeatures f;
  const double total = static_cast<double>(seg.width) * seg.height;
  f.number_of_segments = seg.count();
  const SegmentMeans means = largest_segment_means(seg);
  f.fls_h = means.first.h;
  f.fls_s = means.first.s;
  f.fls_v = means.first.v;
  f.sls_h = means.second.h;
  f.sls_s = means.second.s;
  f.sls_v = means.second.v;
  const Contrasts c = segment_contrasts(seg);
  f.contrast_h = c.h;
  f.contrast_s = c.s;
  f.contrast_v = c.v;
  if (seg.count() >= 1) {
    f.area_of_fls = seg.regions[0].area / total;
    f.shape_complexity_fls = shape_complexity(seg.regions[0]);
  }
  if (seg.count() >= 2) {
    f.area_of_sls = seg.regions[1].area / total;
    f.shape_complexity_sls = shape_complexity(seg.regions[1]);
  }
  return f;
}

}  // namespace chromapraise
