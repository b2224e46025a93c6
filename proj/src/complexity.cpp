#include "chromapraise/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chromapraise/errors.hpp"

namespace chromapraise {

double color_difference(const Lab& c1, const Lab& c2, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ArgumentError("gamma must be a positive finite number");
  const double dl = c1.l - c2.l;
  const double da = c1.a - c2.a;
  const double db = c1.b - c2.b;
  const double e = std::sqrt(dl * dl + da * da + db * db);
  if (!std::isfinite(e)) throw ArgumentError("non-finite Lab color");
  return -std::expm1(-e / gamma);
}

CcmResult ccm(const LabImage& img, const CcmParams& params) {
  if (params.window_half < 1) throw ArgumentError("window_half must be >= 1");
  if (!(params.gamma > 0.0)) throw ArgumentError("gamma must be > 0");
  if (!(params.alpha > 0.0)) throw ArgumentError("alpha must be > 0");
  const int side = 2 * params.window_half + 1;
  if (img.width < side || img.height < side) {
    throw DimensionError("image " + std::to_string(img.width) + "x" + std::to_string(img.height) +
                         " smaller than CCM window " + std::to_string(side));
  }

  const double two_alpha_sq = 2.0 * params.alpha * params.alpha;
  const int wh = params.window_half;
  CcmResult result{ComplexityMap(img.width, img.height), 0.0};

  for (int y = 0; y < img.height; ++y) {
    const int y0 = std::max(0, y - wh);
    const int y1 = std::min(img.height - 1, y + wh);
    for (int x = 0; x < img.width; ++x) {
      const int x0 = std::max(0, x - wh);
      const int x1 = std::min(img.width - 1, x + wh);
      Lab mean{};
      for (int yy = y0; yy <= y1; ++yy) {
        for (int xx = x0; xx <= x1; ++xx) {
          const Lab& c = img.at(xx, yy);
          mean.l += c.l;
          mean.a += c.a;
          mean.b += c.b;
        }
      }
      const double count = static_cast<double>((y1 - y0 + 1) * (x1 - x0 + 1));
      mean.l /= count;
      mean.a /= count;
      mean.b /= count;

      double psi = 0.0;
      for (int yy = y0; yy <= y1; ++yy) {
        for (int xx = x0; xx <= x1; ++xx) {
          const double d = color_difference(img.at(xx, yy), mean, params.gamma);
          const double g = std::exp(-d * d / two_alpha_sq);
          psi += params.subtract_baseline ? (1.0 - g) : g;
        }
      }
      result.map.at(x, y) = psi;
    }
  }

  double total = 0.0;
  for (double v : result.map.pixels) total += v;
  result.scalar = total / static_cast<double>(result.map.size());
  return result;
}

}  // namespace chromapraise
