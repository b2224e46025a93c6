#include "chromapraise/edges.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "chromapraise/errors.hpp"

namespace chromapraise {

namespace {

int reflect101(int i, int n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * n - 2 - i;
  }
  return i;
}

// Neighbor offsets compared during non-maximum suppression.
struct Direction {
  int dx;
  int dy;
};

Direction quantize(double theta) {
  constexpr double kDeg = 180.0 / std::numbers::pi;
  const double a = std::abs(theta) * kDeg;
  if (a < 22.5) return {1, 0};
  if (a > 67.5) return {0, 1};
  return theta > 0.0 ? Direction{1, 1} : Direction{1, -1};
}

}  // namespace

std::vector<double> gaussian_taps(double sigma, int half) {
  if (!(sigma > 0.0)) throw ArgumentError("blur sigma must be > 0");
  if (half < 1) throw ArgumentError("kernel_half must be >= 1");
  std::vector<double> taps(static_cast<std::size_t>(half) + 1);
  double total = 0.0;
  for (int i = 0; i <= half; ++i) {
    taps[static_cast<std::size_t>(i)] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    total += (i == 0 ? 1.0 : 2.0) * taps[static_cast<std::size_t>(i)];
  }
  for (double& t : taps) t /= total;
  return taps;
}

GrayImage gaussian_blur(const GrayImage& img, double sigma, int half) {
  const auto taps = gaussian_taps(sigma, half);
  GrayImage tmp(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double acc = taps[0] * img.at(x, y);
      for (int i = 1; i <= half; ++i) {
        // pairwise sums keep the filter exactly mirror-symmetric
        acc += taps[static_cast<std::size_t>(i)] *
               (img.at(reflect101(x - i, img.width), y) + img.at(reflect101(x + i, img.width), y));
      }
      tmp.at(x, y) = acc;
    }
  }
  GrayImage out(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double acc = taps[0] * tmp.at(x, y);
      for (int i = 1; i <= half; ++i) {
        acc += taps[static_cast<std::size_t>(i)] *
               (tmp.at(x, reflect101(y - i, img.height)) + tmp.at(x, reflect101(y + i, img.height)));
      }
      out.at(x, y) = acc;
    }
  }
  return out;
}

GradientField sobel(const GrayImage& img) {
  const int w = img.width;
  const int h = img.height;
  GradientField gf{Image<double>(w, h), Image<double>(w, h), Image<double>(w, h), Image<double>(w, h)};
  auto px = [&](int x, int y) { return img.at(reflect101(x, w), reflect101(y, h)); };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double gx = 2.0 * (px(x + 1, y) - px(x - 1, y)) +
                        ((px(x + 1, y - 1) - px(x - 1, y - 1)) + (px(x + 1, y + 1) - px(x - 1, y + 1)));
      const double gy = 2.0 * (px(x, y + 1) - px(x, y - 1)) +
                        ((px(x - 1, y + 1) - px(x - 1, y - 1)) + (px(x + 1, y + 1) - px(x + 1, y - 1)));
      gf.gx.at(x, y) = gx;
      gf.gy.at(x, y) = gy;
      gf.magnitude.at(x, y) = std::sqrt(gx * gx + gy * gy);
      gf.theta.at(x, y) = gx == 0.0 ? std::numbers::pi / 2.0 : std::atan(gy / gx);
    }
  }
  return gf;
}

CannyResult canny(const GrayImage& img, const EdgeParams& params) {
  if (!(params.low_threshold > 0.0 && params.low_threshold < params.high_threshold && params.high_threshold < 1.0)) {
    throw ArgumentError("edge thresholds must satisfy 0 < low < high < 1");
  }
  const int side = 2 * params.kernel_half + 1;
  if (img.width < side || img.height < side) {
    throw DimensionError("image " + std::to_string(img.width) + "x" + std::to_string(img.height) +
                         " smaller than Gaussian kernel " + std::to_string(side));
  }

  const int w = img.width;
  const int h = img.height;
  CannyResult result{sobel(gaussian_blur(img, params.blur_sigma, params.kernel_half)), EdgeMap{}};
  const auto& mag = result.gradient.magnitude;

  double max_mag = 0.0;
  for (double m : mag.pixels) max_mag = std::max(max_mag, m);

  EdgeMap& em = result.edges;
  em.width = w;
  em.height = h;
  em.edge.assign(img.size(), 0);
  if (!(max_mag > 0.0)) return result;

  auto mag_or_zero = [&](int x, int y) { return mag.contains(x, y) ? mag.at(x, y) : 0.0; };

  // 0 = suppressed, 1 = weak, 2 = strong
  std::vector<std::uint8_t> cls(img.size(), 0);
  const double low = params.low_threshold * max_mag;
  const double high = params.high_threshold * max_mag;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double m = mag.at(x, y);
      if (m < low) continue;
      const Direction d = quantize(result.gradient.theta.at(x, y));
      // strict on the trailing side, non-strict on the leading side: a two-pixel
      // plateau keeps exactly one pixel
      if (!(m > mag_or_zero(x - d.dx, y - d.dy) && m >= mag_or_zero(x + d.dx, y + d.dy))) continue;
      cls[mag.index(x, y)] = m >= high ? 2 : 1;
    }
  }

  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < cls.size(); ++i) {
    if (cls[i] == 2) {
      em.edge[i] = 1;
      stack.push_back(i);
    }
  }
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    const int x = static_cast<int>(i % static_cast<std::size_t>(w));
    const int y = static_cast<int>(i / static_cast<std::size_t>(w));
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if ((dx == 0 && dy == 0) || !mag.contains(x + dx, y + dy)) continue;
        const std::size_t j = mag.index(x + dx, y + dy);
        if (cls[j] == 1 && !em.edge[j]) {
          em.edge[j] = 1;
          stack.push_back(j);
        }
      }
    }
  }
  em.n_edges = static_cast<int>(std::count(em.edge.begin(), em.edge.end(), std::uint8_t{1}));
  return result;
}

double edge_density(const EdgeMap& em) {
  if (em.edge.empty()) return 0.0;
  return static_cast<double>(em.n_edges) / static_cast<double>(em.edge.size());
}

double lines_variance(const GradientField& gf, const EdgeMap& em) {
  double c = 0.0;
  double s = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < em.edge.size(); ++i) {
    if (!em.edge[i]) continue;
    const double t = gf.theta.pixels[i];
    c += std::cos(2.0 * t);
    s += std::sin(2.0 * t);
    ++n;
  }
  if (n == 0) return 0.0;
  const double resultant = std::hypot(c, s) / static_cast<double>(n);
  return std::clamp(1.0 - resultant, 0.0, 1.0);
}

}  // namespace chromapraise
