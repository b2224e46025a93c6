#include "chromapraise/harmony.hpp"

#include <algorithm>
#include <cmath>
#include <span>

namespace chromapraise {

namespace {

constexpr std::array<int, 4> kTetrad = {0, 3, 6, 9};
constexpr std::array<int, 3> kContrastTriad = {0, 5, 7};
constexpr std::array<int, 3> kClassicTriad = {0, 4, 8};
constexpr std::array<int, 2> kComplementary = {0, 6};
constexpr std::array<int, 4> kRectangle = {0, 2, 6, 8};
constexpr std::array<int, 3> kAnalogue = {0, 1, 2};

}  // namespace

double WheelHistogram::chromatic() const {
  // Summed in sorted order so the result does not depend on which sector holds which mass.
  auto sorted = hue;
  std::sort(sorted.begin(), sorted.end());
  double total = 0.0;
  for (double v : sorted) total += v;
  return total;
}

double WheelHistogram::total() const { return chromatic() + black + white + gray; }

void WheelHistogram::add(const WheelSlot& slot, double mass) {
  switch (slot.kind) {
    case WheelKind::Hue: hue[static_cast<std::size_t>(slot.bin)] += mass; break;
    case WheelKind::Black: black += mass; break;
    case WheelKind::White: white += mass; break;
    case WheelKind::Gray: gray += mass; break;
  }
}

WheelSlot quantize_to_wheel(const Hsv& px, const WheelThresholds& th) {
  if (px.v < th.val_min) return {WheelKind::Black, 0};
  if (px.s < th.sat_min) return {px.v > th.val_max_white ? WheelKind::White : WheelKind::Gray, 0};
  int bin = static_cast<int>(std::floor(px.h / 30.0)) % 12;
  if (bin < 0) bin += 12;
  return {WheelKind::Hue, bin};
}

std::span<const int> pattern_offsets(HarmonyPattern p) {
  switch (p) {
    case HarmonyPattern::Tetrad: return kTetrad;
    case HarmonyPattern::ContrastTriad: return kContrastTriad;
    case HarmonyPattern::ClassicTriad: return kClassicTriad;
    case HarmonyPattern::Complementary: return kComplementary;
    case HarmonyPattern::Rectangle: return kRectangle;
    case HarmonyPattern::AnalogueTriad: return kAnalogue;
  }
  return {};
}

std::string_view pattern_name(HarmonyPattern p) {
  switch (p) {
    case HarmonyPattern::Tetrad: return "X_quad";
    case HarmonyPattern::ContrastTriad: return "X_contrst_triad";
    case HarmonyPattern::ClassicTriad: return "X_classic_triad";
    case HarmonyPattern::Complementary: return "X_comp";
    case HarmonyPattern::Rectangle: return "X_rectangle";
    case HarmonyPattern::AnalogueTriad: return "X_analog_triad";
  }
  return "";
}

double HarmonyScores::get(HarmonyPattern p) const {
  switch (p) {
    case HarmonyPattern::Tetrad: return tetrad;
    case HarmonyPattern::ContrastTriad: return contrast_triad;
    case HarmonyPattern::ClassicTriad: return classic_triad;
    case HarmonyPattern::Complementary: return complementary;
    case HarmonyPattern::Rectangle: return rectangle;
    case HarmonyPattern::AnalogueTriad: return analogue_triad;
  }
  return 0.0;
}

bool HarmonyScores::harmonic(double cutoff) const {
  return std::any_of(kAllPatterns.begin(), kAllPatterns.end(), [&](HarmonyPattern p) { return get(p) >= cutoff; });
}

double pattern_coverage(const WheelHistogram& hist, HarmonyPattern p, int rotation) {
  const double chroma = hist.chromatic();
  if (!(chroma > 0.0)) return 0.0;
  // Offsets are walked in pattern order, so rotating both the histogram and
  // the anchor by one sector reproduces the same floating-point sum.
  double covered = 0.0;
  for (int off : pattern_offsets(p)) covered += hist.hue[static_cast<std::size_t>((rotation + off) % 12)];
  return std::min(1.0, covered / chroma);
}

HarmonyScores harmony_scores(const WheelHistogram& hist) {
  HarmonyScores s;
  const double total = hist.total();
  if (!(total > 0.0) || hist.chromatic() / total < kMinChromaticFraction) return s;
  auto best = [&](HarmonyPattern p) {
    double m = 0.0;
    for (int rot = 0; rot < 12; ++rot) m = std::max(m, pattern_coverage(hist, p, rot));
    return m;
  };
  s.tetrad = best(HarmonyPattern::Tetrad);
  s.contrast_triad = best(HarmonyPattern::ContrastTriad);
  s.classic_triad = best(HarmonyPattern::ClassicTriad);
  s.complementary = best(HarmonyPattern::Complementary);
  s.rectangle = best(HarmonyPattern::Rectangle);
  s.analogue_triad = best(HarmonyPattern::AnalogueTriad);
  return s;
}

double mccamy_cct(double x, double y) {
  const double denom = 0.1858 - y;
  if (!std::isfinite(x) || !std::isfinite(y) || std::abs(denom) < 1e-6) return kNeutralCct;
  const double n = (x - 0.3320) / denom;
  return 449.0 * n * n * n + 3525.0 * n * n + 6823.3 * n + 5520.33;
}

double mean_color_cct(const RgbImage& img) {
  if (img.size() == 0) return kNeutralCct;
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;
  for (const Rgb& p : img.pixels) {
    r += p.r;
    g += p.g;
    b += p.b;
  }
  const double n = static_cast<double>(img.size());
  const double lr = srgb_to_linear(r / n / 255.0);
  const double lg = srgb_to_linear(g / n / 255.0);
  const double lb = srgb_to_linear(b / n / 255.0);
  const double X = 0.4124564 * lr + 0.3575761 * lg + 0.1804375 * lb;
  const double Y = 0.2126729 * lr + 0.7151522 * lg + 0.0721750 * lb;
  const double Z = 0.0193339 * lr + 0.1191920 * lg + 0.9503041 * lb;
  const double sum = X + Y + Z;
  if (!(sum > 1e-12)) return kNeutralCct;
  return mccamy_cct(X / sum, Y / sum);
}

ColorClusters cluster_frequencies(const WheelHistogram& hist, const RgbImage& img) {
  ColorClusters c;
  const double total = hist.total();
  const double chroma = hist.chromatic();
  auto mass = [&](std::initializer_list<int> bins) {
    double m = 0.0;
    for (int b : bins) m += hist.hue[static_cast<std::size_t>(b)];
    return m;
  };
  if (chroma > 0.0) {
    c.red = mass({11, 0, 1}) / chroma;
    c.yellow = mass({2, 3}) / chroma;
    c.green = mass({4, 5, 6}) / chroma;
    c.blue = mass({7, 8, 9}) / chroma;
  }
  c.black = total > 0.0 ? hist.black / total : 0.0;
  c.cct = mean_color_cct(img);
  return c;
}

Rgb canonical_color(const WheelSlot& slot) {
  switch (slot.kind) {
    case WheelKind::Black: return {0, 0, 0};
    case WheelKind::White: return {255, 255, 255};
    case WheelKind::Gray: return {128, 128, 128};
    case WheelKind::Hue: break;
  }
  // fully saturated color at the sector center
  const double h = slot.bin * 30.0 + 15.0;
  const double sector = h / 60.0;
  const int i = static_cast<int>(std::floor(sector));
  const double f = sector - i;
  const auto up = static_cast<std::uint8_t>(std::lround(255.0 * f));
  const auto down = static_cast<std::uint8_t>(std::lround(255.0 * (1.0 - f)));
  switch (i % 6) {
    case 0: return {255, up, 0};
    case 1: return {down, 255, 0};
    case 2: return {0, 255, up};
    case 3: return {0, down, 255};
    case 4: return {up, 0, 255};
    default: return {255, 0, down};
  }
}

FrequencyDecomposition frequency_decomposition(const HsvImage& img, const WheelThresholds& th) {
  FrequencyDecomposition out{WheelHistogram{}, RgbImage(img.width, img.height)};
  for (std::size_t i = 0; i < img.size(); ++i) {
    const WheelSlot slot = quantize_to_wheel(img.pixels[i], th);
    out.histogram.add(slot);
    out.preview.pixels[i] = canonical_color(slot);
  }
  return out;
}

}  // namespace chromapraise
