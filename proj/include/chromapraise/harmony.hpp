#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

#include "chromapraise/imaging.hpp"

namespace chromapraise {

/// Achromatic thresholds on the HSV [0,255] scale.
struct WheelThresholds {
  double sat_min = 25.0;        ///< below: achromatic
  double val_min = 40.0;        ///< below: black
  double val_max_white = 215.0; ///< achromatic and above: white
};

enum class WheelKind : std::uint8_t { Hue, Black, White, Gray };

struct WheelSlot {
  WheelKind kind = WheelKind::Hue;
  int bin = 0;  ///< 0..11 when kind == Hue, 30 degree sectors starting at red
  friend bool operator==(const WheelSlot&, const WheelSlot&) = default;
};

WheelSlot quantize_to_wheel(const Hsv& px, const WheelThresholds& th = {});

/// Pixel masses of the twelve hue sectors and the three neutrals. Masses are
/// pixel counts when built from an image; fractions are derived on demand.
struct WheelHistogram {
  std::array<double, 12> hue{};
  double black = 0.0;
  double white = 0.0;
  double gray = 0.0;

  [[nodiscard]] double chromatic() const;
  [[nodiscard]] double total() const;
  [[nodiscard]] double hue_fraction(int bin) const { return hue[static_cast<std::size_t>(bin)] / total(); }
  [[nodiscard]] double black_fraction() const { return black / total(); }
  [[nodiscard]] double white_fraction() const { return white / total(); }
  [[nodiscard]] double gray_fraction() const { return gray / total(); }
  void add(const WheelSlot& slot, double mass = 1.0);
};

enum class HarmonyPattern : std::uint8_t {
  Tetrad,         ///< square {0,3,6,9}
  ContrastTriad,  ///< split complementary {0,5,7}
  ClassicTriad,   ///< {0,4,8}
  Complementary,  ///< {0,6}
  Rectangle,      ///< {0,2,6,8}
  AnalogueTriad,  ///< {0,1,2}
};

inline constexpr std::array<HarmonyPattern, 6> kAllPatterns = {
    HarmonyPattern::Tetrad,        HarmonyPattern::ContrastTriad, HarmonyPattern::ClassicTriad,
    HarmonyPattern::Complementary, HarmonyPattern::Rectangle,     HarmonyPattern::AnalogueTriad,
};

/// Sector offsets of a pattern relative to its anchor.
std::span<const int> pattern_offsets(HarmonyPattern p);
std::string_view pattern_name(HarmonyPattern p);

struct HarmonyScores {
  double tetrad = 0.0;
  double contrast_triad = 0.0;
  double classic_triad = 0.0;
  double complementary = 0.0;
  double rectangle = 0.0;
  double analogue_triad = 0.0;

  [[nodiscard]] double get(HarmonyPattern p) const;
  /// Boolean summary: some pattern covers at least `cutoff` of the chromatic mass.
  [[nodiscard]] bool harmonic(double cutoff = 0.95) const;
};

inline constexpr double kMinChromaticFraction = 0.05;

/// Best coverage of the chromatic mass by any of the 12 rotations of each pattern.
/// Histograms with less than 5% chromatic mass score 0 everywhere.
HarmonyScores harmony_scores(const WheelHistogram& hist);

/// Coverage of the chromatic mass by one placement of a pattern.
double pattern_coverage(const WheelHistogram& hist, HarmonyPattern p, int rotation);

struct ColorClusters {
  double blue = 0.0;    ///< sectors 7-9, fraction of chromatic mass
  double green = 0.0;   ///< sectors 4-6
  double red = 0.0;     ///< sectors 11, 0, 1
  double yellow = 0.0;  ///< sectors 2-3
  double black = 0.0;   ///< fraction of all pixels
  double cct = 6500.0;  ///< kelvin
};

inline constexpr double kNeutralCct = 6500.0;

/// McCamy's cubic on the CIE xy chromaticity; kNeutralCct when undefined.
double mccamy_cct(double x, double y);

/// Correlated color temperature of the image's mean sRGB color.
double mean_color_cct(const RgbImage& img);

ColorClusters cluster_frequencies(const WheelHistogram& hist, const RgbImage& img);

/// Representative display color of a wheel slot.
Rgb canonical_color(const WheelSlot& slot);

struct FrequencyDecomposition {
  WheelHistogram histogram;
  RgbImage preview;  ///< every pixel replaced by its slot's canonical color
};

FrequencyDecomposition frequency_decomposition(const HsvImage& img, const WheelThresholds& th = {});

}  // namespace chromapraise
