#pragma once

#include <array>
#include <span>

#include "chromapraise/segmentation.hpp"

namespace chromapraise {

/// Value used for features that are undefined for a segmentation.
inline constexpr double kMissing = -1.0;

struct HsvMeans {
  double h = kMissing;
  double s = kMissing;
  double v = kMissing;
};

struct SegmentMeans {
  HsvMeans first;   ///< largest segment
  HsvMeans second;  ///< second largest segment
};

struct Contrasts {
  double h = kMissing;
  double s = kMissing;
  double v = kMissing;
};

struct LocalFeatures {
  double fls_h = kMissing, fls_s = kMissing, fls_v = kMissing;
  double sls_h = kMissing, sls_s = kMissing, sls_v = kMissing;
  double contrast_h = kMissing, contrast_s = kMissing, contrast_v = kMissing;
  double area_of_fls = kMissing, area_of_sls = kMissing;
  double shape_complexity_fls = kMissing, shape_complexity_sls = kMissing;
  double number_of_segments = kMissing;
};

/// Shortest angular distance between two hues, in [0, 180].
double hue_distance(double h1, double h2);

/// Circular mean of hues in degrees, mapped to [0, 360).
double circular_mean_hue(std::span<const double> hues);

SegmentMeans largest_segment_means(const Segmentation& seg);

/// Largest absolute difference between the largest segment's HSV means and
/// those of any segment sharing a boundary with it. Hue differences wrap.
Contrasts segment_contrasts(const Segmentation& seg);

/// perimeter^2 / (4 pi area) with the corner-cut contour length as perimeter.
double shape_complexity(const RegionStats& region);

LocalFeatures local_features(const Segmentation& seg);

}  // namespace chromapraise
