#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "chromapraise/errors.hpp"
#include "chromapraise/imaging.hpp"

using namespace chromapraise;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir() {
  fs::path p = fs::path(TEST_TMP_DIR) / "imaging";
  fs::create_directories(p);
  return p;
}

// Reference sRGB -> Lab written out from the textbook definitions.
Lab reference_lab(double r8, double g8, double b8) {
  auto lin = [](double c) {
    c /= 255.0;
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
  };
  const double r = lin(r8), g = lin(g8), b = lin(b8);
  const double x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
  const double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
  const double z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;
  auto f = [](double t) {
    const double d = 6.0 / 29.0;
    return t > d * d * d ? std::cbrt(t) : t / (3 * d * d) + 4.0 / 29.0;
  };
  const double fx = f(x / 0.95047), fy = f(y / 1.0), fz = f(z / 1.08883);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

}  // namespace

TEST(NormalizedSize, HalvesExactly) { EXPECT_EQ(normalized_size(1024, 512, 512), (Size2{512, 256})); }

TEST(NormalizedSize, NeverUpsamples) { EXPECT_EQ(normalized_size(300, 200, 512), (Size2{300, 200})); }

TEST(NormalizedSize, RoundsHalfUp) {
  // 700 * 512 / 1000 = 358.4
  EXPECT_EQ(normalized_size(1000, 700, 512), (Size2{512, 358}));
  // 33 * 32 / 64 = 16.5 rounds up
  EXPECT_EQ(normalized_size(64, 33, 32), (Size2{32, 17}));
  EXPECT_EQ(normalized_size(700, 1000, 512), (Size2{358, 512}));
}

TEST(ResizeArea, AveragesCoveredBlocks) {
  RgbImage img(4, 2);
  for (int y = 0; y < 2; ++y) {
    for (int x = 0; x < 4; ++x) img.at(x, y) = {static_cast<std::uint8_t>(10 * x + 100 * y), 0, 255};
  }
  const RgbImage out = resize_area(img, 2, 1);
  ASSERT_EQ(out.width, 2);
  ASSERT_EQ(out.height, 1);
  // Block means: (0+10+100+110)/4 = 55, (20+30+120+130)/4 = 75
  EXPECT_EQ(out.at(0, 0).r, 55);
  EXPECT_EQ(out.at(1, 0).r, 75);
  EXPECT_EQ(out.at(0, 0).b, 255);
}

TEST(ResizeArea, UniformStaysUniform) {
  RgbImage img(37, 23, Rgb{12, 200, 77});
  const RgbImage out = resize_area(img, 10, 7);
  for (const Rgb& p : out.pixels) EXPECT_EQ(p, (Rgb{12, 200, 77}));
}

TEST(Lab, WhiteAndBlack) {
  const Lab w = srgb_to_lab(Rgb{255, 255, 255});
  EXPECT_NEAR(w.l, 100.0, 1e-6);
  EXPECT_NEAR(w.a, 0.0, 1e-4);
  EXPECT_NEAR(w.b, 0.0, 1e-4);
  const Lab k = srgb_to_lab(Rgb{0, 0, 0});
  EXPECT_EQ(k.l, 0.0);
  EXPECT_NEAR(k.a, 0.0, 1e-12);
  EXPECT_NEAR(k.b, 0.0, 1e-12);
}

TEST(Lab, RedMatchesPublishedValue) {
  // Published sRGB (255,0,0) under D65: L 53.24, a 80.09, b 67.20.
  const Lab red = srgb_to_lab(Rgb{255, 0, 0});
  EXPECT_NEAR(red.l, 53.24, 0.5);
  EXPECT_NEAR(red.a, 80.09, 0.5);
  EXPECT_NEAR(red.b, 67.20, 0.5);
}

TEST(Lab, MatchesReferenceOnRandomColors) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> c(0, 255);
  for (int i = 0; i < 500; ++i) {
    const Rgb p{static_cast<std::uint8_t>(c(rng)), static_cast<std::uint8_t>(c(rng)), static_cast<std::uint8_t>(c(rng))};
    const Lab got = srgb_to_lab(p);
    const Lab ref = reference_lab(p.r, p.g, p.b);
    EXPECT_NEAR(got.l, ref.l, 0.05);
    EXPECT_NEAR(got.a, ref.a, 0.05);
    EXPECT_NEAR(got.b, ref.b, 0.05);
  }
}

TEST(Lab, GrayRampMonotoneAndNeutral) {
  double prev = -1.0;
  for (int v = 0; v < 256; ++v) {
    const auto u = static_cast<std::uint8_t>(v);
    const Lab lab = srgb_to_lab(Rgb{u, u, u});
    EXPECT_GT(lab.l, prev);
    EXPECT_LT(std::abs(lab.a), 0.01);
    EXPECT_LT(std::abs(lab.b), 0.01);
    prev = lab.l;
  }
}

TEST(Hsv, Primaries) {
  const Hsv red = hsv_from_rgb(255, 0, 0);
  EXPECT_EQ(red.h, 0.0);
  EXPECT_EQ(red.s, 255.0);
  EXPECT_EQ(red.v, 255.0);
  const Hsv gray = hsv_from_rgb(128, 128, 128);
  EXPECT_EQ(gray.h, 0.0);
  EXPECT_EQ(gray.s, 0.0);
  EXPECT_EQ(gray.v, 128.0);
  EXPECT_EQ(hsv_from_rgb(0, 255, 255).h, 180.0);
  EXPECT_EQ(hsv_from_rgb(0, 0, 255).h, 240.0);
}

TEST(Hsv, HueInvariantUnderScaling) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 255.0), c(0.05, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double r = u(rng), g = u(rng), b = u(rng), k = c(rng);
    const Hsv a = hsv_from_rgb(r, g, b);
    const Hsv s = hsv_from_rgb(k * r, k * g, k * b);
    EXPECT_NEAR(a.h, s.h, 1e-9);
  }
}

TEST(Gray, HandValues) {
  EXPECT_DOUBLE_EQ(gray_level(Rgb{255, 255, 255}), 255.0);
  EXPECT_DOUBLE_EQ(gray_level(Rgb{0, 0, 0}), 0.0);
  EXPECT_NEAR(gray_level(Rgb{100, 150, 200}), 140.75, 1e-12);
}

TEST(Gray, MonotoneInEachChannel) {
  for (int v = 0; v < 255; ++v) {
    const auto a = static_cast<std::uint8_t>(v), b = static_cast<std::uint8_t>(v + 1);
    EXPECT_LT(gray_level(Rgb{a, 10, 10}), gray_level(Rgb{b, 10, 10}));
    EXPECT_LT(gray_level(Rgb{10, a, 10}), gray_level(Rgb{10, b, 10}));
    EXPECT_LT(gray_level(Rgb{10, 10, a}), gray_level(Rgb{10, 10, b}));
  }
}

TEST(Conversions, PreserveDimensions) {
  RgbImage img(13, 7, Rgb{1, 2, 3});
  EXPECT_EQ(srgb_to_lab(img).width, 13);
  EXPECT_EQ(srgb_to_lab(img).height, 7);
  EXPECT_EQ(rgb_to_hsv(img).width, 13);
  EXPECT_EQ(rgb_to_hsv(img).height, 7);
  EXPECT_EQ(to_gray(img).width, 13);
  EXPECT_EQ(to_gray(img).height, 7);
}

TEST(Load, PngRoundTripAndDownsample) {
  RgbImage img(600, 300);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      img.at(x, y) = {static_cast<std::uint8_t>(x % 256), static_cast<std::uint8_t>(y % 256), 42};
    }
  }
  const fs::path p = tmp_dir() / "roundtrip.png";
  write_png(img, p);
  const RgbImage same = load_and_normalize(p, 1000);
  ASSERT_EQ(same.width, 600);
  ASSERT_EQ(same.height, 300);
  EXPECT_EQ(same.pixels, img.pixels);
  const RgbImage small = load_and_normalize(p, 300);
  EXPECT_EQ(small.width, 300);
  EXPECT_EQ(small.height, 150);
}

TEST(NormalizedSize, RejectsTinyMaxSide) { EXPECT_THROW(normalized_size(100, 100, 16), ArgumentError); }

TEST(Load, MissingFileIsIoError) { EXPECT_THROW(load_and_normalize(tmp_dir() / "nope.png"), IoError); }

TEST(Load, CorruptFileIsFormatError) {
  const fs::path p = tmp_dir() / "corrupt.png";
  std::ofstream(p) << "definitely not an image";
  EXPECT_THROW(load_and_normalize(p), FormatError);
}
