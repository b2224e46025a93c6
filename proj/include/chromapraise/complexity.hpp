#pragma once

#include <vector>

#include "chromapraise/imaging.hpp"

namespace chromapraise {

struct CcmParams {
  int window_half = 2;  ///< window is (2*window_half+1)^2 pixels
  double gamma = 30.0;  ///< saturation scale of the color difference, Lab units
  double alpha = 0.5;   ///< width of the Gaussian applied to each difference
  /// Subtract the flat-window response so a uniform image scores 0.
  bool subtract_baseline = true;
};

using ComplexityMap = Image<double>;

struct CcmResult {
  ComplexityMap map;
  double scalar = 0.0;  ///< mean of the map over all pixels
};

/// Saturating perceptual difference 1 - exp(-E/gamma), E the Lab Euclidean distance.
double color_difference(const Lab& c1, const Lab& c2, double gamma);

/// Windowed color complexity. Each window compares its pixels against the
/// window mean color; border windows are clamped to the image.
///
/// With subtract_baseline, psi(i,j) = sum over the window of 1 - G(D(c, cbar)),
/// i.e. the flat-window value |window| * G(0) minus the raw Gaussian sum.
CcmResult ccm(const LabImage& img, const CcmParams& params = {});

}  // namespace chromapraise
