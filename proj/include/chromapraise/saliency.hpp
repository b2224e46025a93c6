#pragma once

#include <vector>

#include "chromapraise/imaging.hpp"

namespace chromapraise {

struct DstParams {
  int radius = 3;                ///< inner circle radius r; the outer ring is r+1
  int axes = 4;                  ///< number of axial moments, orientations pi*k/axes
  double threshold_sigmas = 3.0; ///< interest threshold mean + threshold_sigmas * stddev
  int nms_radius = 5;            ///< minimum distance between reported points
};

using DstMap = Image<double>;

struct InterestPoint {
  int x;
  int y;
  double score;
};

struct InterestPoints {
  std::vector<InterestPoint> points;
  double threshold = 0.0;
  [[nodiscard]] int count() const { return static_cast<int>(points.size()); }
};

/// Offsets (dx, dy) whose rounded Euclidean length equals radius.
std::vector<std::pair<int, int>> circle_offsets(int radius);

/// Unit-distance offset pairs, first on the circle of radius r and second on r+1.
std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>> ring_pairs(int radius);

/// Per-pixel smoothness E and normalized symmetry T maps, exposed for inspection.
struct DstComponents {
  DstMap edge_energy;  ///< E(i,j)
  DstMap symmetry;     ///< T(i,j) in [0, 1]
  DstMap dst;          ///< E * T
};

/// Discrete symmetry transform. Pixels closer than radius+1 to the border are 0.
///
/// Each axial moment is divided by the circle's own geometric moment for that
/// axis (so a uniform ring gives identical moments on every axis), and all
/// moments are scaled by one image-wide maximum so T = 1 - stddev lies in [0, 1].
DstComponents dst_components(const GrayImage& img, const DstParams& params = {});
DstMap dst_map(const GrayImage& img, const DstParams& params = {});

/// Threshold the map at mean + k*stddev and keep one point per local maximum
/// (greedy suppression within nms_radius, strongest first, ties in row-major order).
InterestPoints points_of_interest(const DstMap& map, const DstParams& params = {});

}  // namespace chromapraise
