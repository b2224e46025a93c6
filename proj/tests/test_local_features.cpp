#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "chromapraise/errors.hpp"
#include "chromapraise/local_features.hpp"

using namespace chromapraise;

namespace {

// Segmentation of a w x h image from a label map and one HSV color per label.
Segmentation fixture(int w, int h, const std::vector<int>& labels, const std::vector<Hsv>& colors) {
  HsvImage hsv(w, h);
  for (std::size_t i = 0; i < labels.size(); ++i) hsv.pixels[i] = colors[static_cast<std::size_t>(labels[i])];
  return region_stats(w, h, labels, LabImage(w, h), &hsv);
}

std::vector<int> mask_labels(int w, int h, const auto& inside) {
  std::vector<int> labels(static_cast<std::size_t>(w * h), 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) labels[static_cast<std::size_t>(y * w + x)] = inside(x, y) ? 1 : 0;
  }
  return labels;
}

const RegionStats& region_containing(const Segmentation& s, int x, int y) {
  return s.regions[static_cast<std::size_t>(s.label_at(x, y))];
}

}  // namespace

TEST(HueDistance, Wraps) {
  EXPECT_EQ(hue_distance(350, 10), 20.0);
  EXPECT_EQ(hue_distance(0, 180), 180.0);
  EXPECT_EQ(hue_distance(90, 300), 150.0);
  EXPECT_EQ(hue_distance(45, 45), 0.0);
}

TEST(CircularMean, Examples) {
  const std::vector<double> a{350, 10};
  EXPECT_NEAR(circular_mean_hue(a), 0.0, 1e-9);
  const std::vector<double> b{120, 120, 120};
  EXPECT_NEAR(circular_mean_hue(b), 120.0, 1e-9);
  const std::vector<double> c{300, 320};
  EXPECT_NEAR(circular_mean_hue(c), 310.0, 1e-9);
}

TEST(SegmentMeans, UniformHue) {
  const Segmentation s = fixture(6, 4, std::vector<int>(24, 0), {{120, 80, 200}});
  const SegmentMeans m = largest_segment_means(s);
  EXPECT_NEAR(m.first.h, 120.0, 1e-9);
  EXPECT_NEAR(m.first.s, 80.0, 1e-9);
  EXPECT_NEAR(m.first.v, 200.0, 1e-9);
  EXPECT_EQ(m.second.h, kMissing);
  EXPECT_EQ(m.second.s, kMissing);
  EXPECT_EQ(m.second.v, kMissing);
}

TEST(SegmentMeans, HueAveragedOnTheCircle) {
  HsvImage hsv(2, 1);
  hsv.pixels = {{350, 10, 10}, {10, 30, 30}};
  const Segmentation s = region_stats(2, 1, {0, 0}, LabImage(2, 1), &hsv);
  const SegmentMeans m = largest_segment_means(s);
  EXPECT_NEAR(m.first.h, 0.0, 1e-9);
  EXPECT_NEAR(m.first.s, 20.0, 1e-9);
}

TEST(Contrasts, TwoSegmentsValue) {
  const auto labels = mask_labels(10, 4, [](int x, int) { return x >= 6; });
  const Segmentation s = fixture(10, 4, labels, {{0, 0, 200}, {0, 0, 50}});
  const Contrasts c = segment_contrasts(s);
  EXPECT_DOUBLE_EQ(c.v, 150.0);
  EXPECT_DOUBLE_EQ(c.h, 0.0);
  EXPECT_DOUBLE_EQ(c.s, 0.0);
}

TEST(Contrasts, MaximumOverThreeNeighborsWithWrap) {
  // region 0 fills columns 0..5; three smaller regions touch it on the right
  const int w = 10, h = 4;
  std::vector<int> labels(static_cast<std::size_t>(w * h));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) labels[static_cast<std::size_t>(y * w + x)] = x < 6 ? 0 : (y == 0 ? 1 : (y == 1 ? 2 : 3));
  }
  const Segmentation s = fixture(w, h, labels, {{0, 10, 10}, {340, 10, 10}, {90, 10, 10}, {190, 10, 10}});
  ASSERT_EQ(s.regions[0].neighbors.size(), 3u);
  EXPECT_NEAR(segment_contrasts(s).h, 170.0, 1e-9);
}

TEST(Contrasts, SingleSegmentSentinel) {
  const Segmentation s = fixture(5, 5, std::vector<int>(25, 0), {{10, 10, 10}});
  const Contrasts c = segment_contrasts(s);
  EXPECT_EQ(c.h, kMissing);
  EXPECT_EQ(c.s, kMissing);
  EXPECT_EQ(c.v, kMissing);
}

TEST(ShapeComplexity, Square) {
  const auto labels = mask_labels(20, 20, [](int x, int y) { return x >= 5 && x < 15 && y >= 5 && y < 15; });
  const Segmentation s = fixture(20, 20, labels, {{0, 0, 0}, {0, 0, 0}});
  EXPECT_NEAR(shape_complexity(region_containing(s, 10, 10)), 4.0 / std::numbers::pi, 1e-12);
}

TEST(ShapeComplexity, RasterDiscNearOne) {
  const auto labels = mask_labels(60, 60, [](int x, int y) { return (x - 30) * (x - 30) + (y - 30) * (y - 30) <= 400; });
  const Segmentation s = fixture(60, 60, labels, {{0, 0, 0}, {0, 0, 0}});
  const double c = shape_complexity(region_containing(s, 30, 30));
  EXPECT_NEAR(c, 1.0, 0.15);
}

TEST(ShapeComplexity, PlusShapeExceedsSquare) {
  auto square = [](int x, int y) { return x >= 9 && x < 18 && y >= 9 && y < 18; };
  auto plus = [&](int x, int y) {
    const bool arm_v = x >= 12 && x < 15 && y >= 6 && y < 21;
    const bool arm_h = y >= 12 && y < 15 && x >= 6 && x < 21;
    return square(x, y) || arm_v || arm_h;
  };
  const Segmentation a = fixture(27, 27, mask_labels(27, 27, square), {{0, 0, 0}, {0, 0, 0}});
  const Segmentation b = fixture(27, 27, mask_labels(27, 27, plus), {{0, 0, 0}, {0, 0, 0}});
  EXPECT_GT(shape_complexity(region_containing(b, 13, 13)), shape_complexity(region_containing(a, 13, 13)));
}

TEST(ShapeComplexity, EmptyRegionRejected) { EXPECT_THROW(shape_complexity(RegionStats{}), ArgumentError); }

TEST(LocalFeatures, SingleSegmentSentinels) {
  const Segmentation s = fixture(8, 8, std::vector<int>(64, 0), {{30, 40, 50}});
  const LocalFeatures f = local_features(s);
  EXPECT_EQ(f.number_of_segments, 1.0);
  EXPECT_EQ(f.area_of_fls, 1.0);
  EXPECT_NEAR(f.fls_h, 30.0, 1e-9);
  EXPECT_EQ(f.sls_h, kMissing);
  EXPECT_EQ(f.area_of_sls, kMissing);
  EXPECT_EQ(f.shape_complexity_sls, kMissing);
  EXPECT_EQ(f.contrast_h, kMissing);
  EXPECT_EQ(f.contrast_v, kMissing);
}

TEST(LocalFeatures, TwoSegments) {
  const auto labels = mask_labels(10, 4, [](int x, int) { return x >= 6; });
  const LocalFeatures f = local_features(fixture(10, 4, labels, {{200, 100, 200}, {20, 30, 50}}));
  EXPECT_EQ(f.number_of_segments, 2.0);
  EXPECT_DOUBLE_EQ(f.area_of_fls, 0.6);
  EXPECT_DOUBLE_EQ(f.area_of_sls, 0.4);
  EXPECT_LE(f.area_of_fls + f.area_of_sls, 1.0);
  EXPECT_NEAR(f.sls_h, 20.0, 1e-9);
  EXPECT_NEAR(f.contrast_h, 180.0, 1e-9);
  EXPECT_NEAR(f.contrast_s, 70.0, 1e-9);
  EXPECT_NEAR(f.contrast_v, 150.0, 1e-9);
  EXPECT_GT(f.shape_complexity_fls, 0.0);
  EXPECT_GT(f.shape_complexity_sls, 0.0);
}
