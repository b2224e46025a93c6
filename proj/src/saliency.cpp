#include "chromapraise/saliency.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "chromapraise/errors.hpp"

namespace chromapraise {

std::vector<std::pair<int, int>> circle_offsets(int radius) {
  std::vector<std::pair<int, int>> out;
  const int reach = radius + 1;
  for (int dy = -reach; dy <= reach; ++dy) {
    for (int dx = -reach; dx <= reach; ++dx) {
      if (std::lround(std::sqrt(static_cast<double>(dx * dx + dy * dy))) == radius) out.emplace_back(dx, dy);
    }
  }
  return out;
}

std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>> ring_pairs(int radius) {
  std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>> out;
  const auto inner = circle_offsets(radius);
  const auto outer = circle_offsets(radius + 1);
  for (const auto& a : inner) {
    for (const auto& b : outer) {
      const int ddx = a.first - b.first;
      const int ddy = a.second - b.second;
      if (ddx * ddx + ddy * ddy == 1) out.emplace_back(a, b);
    }
  }
  return out;
}

DstComponents dst_components(const GrayImage& img, const DstParams& params) {
  if (params.radius < 1) throw ArgumentError("DST radius must be >= 1");
  if (params.axes < 2) throw ArgumentError("DST needs at least 2 axes");
  const int margin = params.radius + 1;
  if (img.width <= 2 * margin + 1 || img.height <= 2 * margin + 1) {
    throw DimensionError("image " + std::to_string(img.width) + "x" + std::to_string(img.height) +
                         " too small for DST radius " + std::to_string(params.radius));
  }

  const auto circle = circle_offsets(params.radius);
  const auto pairs = ring_pairs(params.radius);
  const int n = params.axes;

  // |projection| of each circle offset onto every axis, plus the circle's own
  // moment per axis used to remove the anisotropy of the digital circle.
  std::vector<double> proj(circle.size() * static_cast<std::size_t>(n));
  std::vector<double> geometric(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < n; ++k) {
    const double theta = std::numbers::pi * k / n;
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    for (std::size_t q = 0; q < circle.size(); ++q) {
      const auto [dx, dy] = circle[q];
      const double p = std::abs(dx * c - dy * s);
      proj[q * n + static_cast<std::size_t>(k)] = p;
      geometric[static_cast<std::size_t>(k)] += p;
    }
  }

  DstComponents out{DstMap(img.width, img.height), DstMap(img.width, img.height), DstMap(img.width, img.height)};
  std::vector<double> moments(img.size() * static_cast<std::size_t>(n), 0.0);
  double moment_max = 0.0;

  for (int y = margin; y < img.height - margin; ++y) {
    for (int x = margin; x < img.width - margin; ++x) {
      double e = 0.0;
      for (const auto& [a, b] : pairs) {
        e += std::abs(img.at(x + a.first, y + a.second) - img.at(x + b.first, y + b.second));
      }
      out.edge_energy.at(x, y) = e;

      double* m = &moments[img.index(x, y) * static_cast<std::size_t>(n)];
      for (std::size_t q = 0; q < circle.size(); ++q) {
        const double g = img.at(x + circle[q].first, y + circle[q].second);
        for (int k = 0; k < n; ++k) m[k] += proj[q * n + static_cast<std::size_t>(k)] * g;
      }
      for (int k = 0; k < n; ++k) {
        m[k] /= geometric[static_cast<std::size_t>(k)];
        moment_max = std::max(moment_max, m[k]);
      }
    }
  }

  for (int y = margin; y < img.height - margin; ++y) {
    for (int x = margin; x < img.width - margin; ++x) {
      const double* m = &moments[img.index(x, y) * static_cast<std::size_t>(n)];
      double t = 1.0;
      if (moment_max > 0.0) {
        double mean = 0.0;
        for (int k = 0; k < n; ++k) mean += m[k] / moment_max;
        mean /= n;
        double var = 0.0;
        for (int k = 0; k < n; ++k) {
          const double d = m[k] / moment_max - mean;
          var += d * d;
        }
        t = 1.0 - std::sqrt(var / n);
      }
      out.symmetry.at(x, y) = t;
      out.dst.at(x, y) = out.edge_energy.at(x, y) * t;
    }
  }
  return out;
}

DstMap dst_map(const GrayImage& img, const DstParams& params) { return dst_components(img, params).dst; }

InterestPoints points_of_interest(const DstMap& map, const DstParams& params) {
  if (!(params.threshold_sigmas > 0.0)) throw ArgumentError("threshold_sigmas must be > 0");
  InterestPoints result;
  if (map.size() == 0) return result;

  double mean = 0.0;
  for (double v : map.pixels) {
    if (!std::isfinite(v)) throw ArgumentError("DST map contains non-finite values");
    mean += v;
  }
  mean /= static_cast<double>(map.size());
  double var = 0.0;
  for (double v : map.pixels) var += (v - mean) * (v - mean);
  const double sigma = std::sqrt(var / static_cast<double>(map.size()));
  result.threshold = mean + params.threshold_sigmas * sigma;
  if (!(sigma > 0.0)) return result;

  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (map.pixels[i] > 0.0 && map.pixels[i] >= result.threshold) candidates.push_back(i);
  }
  std::sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
    if (map.pixels[a] != map.pixels[b]) return map.pixels[a] > map.pixels[b];
    return a < b;
  });

  const long long r2 = static_cast<long long>(params.nms_radius) * params.nms_radius;
  for (std::size_t idx : candidates) {
    const int x = static_cast<int>(idx % static_cast<std::size_t>(map.width));
    const int y = static_cast<int>(idx / static_cast<std::size_t>(map.width));
    const bool suppressed = std::any_of(result.points.begin(), result.points.end(), [&](const InterestPoint& p) {
      const long long dx = p.x - x;
      const long long dy = p.y - y;
      return dx * dx + dy * dy <= r2;
    });
    if (!suppressed) result.points.push_back({x, y, map.pixels[idx]});
  }
  return result;
}

}  // namespace chromapraise
