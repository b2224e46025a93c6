#pragma once

#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "chromapraise/imaging.hpp"

namespace chromapraise {

enum class SynthKind { Flat, Gradient, MultiRegion, Harmonic };

inline constexpr int kSynthWidth = 192;
inline constexpr int kSynthHeight = 144;

/// HSV with h in degrees and s, v in [0, 255].
Rgb rgb_from_hsv(double h, double s, double v);

RgbImage synth_image(SynthKind kind, std::mt19937_64& rng, int width = kSynthWidth, int height = kSynthHeight);

/// Blocks of three saturated hues from consecutive 30 degree sectors starting at `first_sector`.
RgbImage harmonic_palette_image(int first_sector, std::mt19937_64& rng, int width = kSynthWidth,
                                int height = kSynthHeight);

struct SynthTruth {
  unsigned long long seed = 42;
  int n = 0;
  double intercept = 0.0;
  std::map<std::string, double> coefficients;  ///< planted nonzero effects on log price
  std::vector<std::string> predictors;         ///< columns the fit should use
  double sigma_u = 0.0;
  double sigma_e = 0.0;
  std::map<std::string, double> author_effects;
};

/// Writes images/<id>.png, meta.csv and truth.json under `out_dir`.
/// Log prices follow the planted coefficients plus author intercepts and noise.
SynthTruth synthesize_corpus(const std::filesystem::path& out_dir, int n, unsigned long long seed);

SynthTruth read_truth(const std::filesystem::path& path);

}  // namespace chromapraise
