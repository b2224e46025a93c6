#pragma once

#include <cstdint>
#include <vector>

#include "chromapraise/imaging.hpp"

namespace chromapraise {

struct EdgeParams {
  double blur_sigma = 1.4;
  int kernel_half = 2;          ///< Gaussian kernel is (2*kernel_half+1)^2
  double low_threshold = 0.1;   ///< fraction of the maximum gradient magnitude
  double high_threshold = 0.2;  ///< fraction of the maximum gradient magnitude
};

struct GradientField {
  Image<double> gx;
  Image<double> gy;
  Image<double> magnitude;
  Image<double> theta;  ///< arctan(gy/gx) in (-pi/2, pi/2]; pi/2 where gx == 0
};

struct EdgeMap {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> edge;
  int n_edges = 0;

  [[nodiscard]] bool at(int x, int y) const {
    return edge[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)] != 0;
  }
};

struct CannyResult {
  GradientField gradient;
  EdgeMap edges;
};

/// Normalized (2k+1) Gaussian taps, index 0 is the center.
std::vector<double> gaussian_taps(double sigma, int half);

/// Separable Gaussian smoothing with reflect-101 borders.
GrayImage gaussian_blur(const GrayImage& img, double sigma, int half);

/// Sobel gradients with reflect-101 borders.
GradientField sobel(const GrayImage& img);

/// Blur, Sobel, non-maximum suppression along the quantized gradient
/// direction, double threshold and 8-connected hysteresis.
CannyResult canny(const GrayImage& img, const EdgeParams& params = {});

/// N_edges / N_img.
double edge_density(const EdgeMap& em);

/// Circular variance of edge orientations, 1 - |mean(exp(2i theta))|.
/// Doubling the angle makes opposite gradient directions count as one line
/// orientation. Returns 0 when there are no edges.
double lines_variance(const GradientField& gf, const EdgeMap& em);

}  // namespace chromapraise
