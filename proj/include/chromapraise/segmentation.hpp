#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <vector>

#include "chromapraise/imaging.hpp"

namespace chromapraise {

struct PixelEdge {
  int u;
  int v;
  double w;
};

/// 4-neighbor graph over pixels, weights are Lab Euclidean distances.
struct PixelGraph {
  int vertex_count = 0;
  std::vector<PixelEdge> edges;
};

PixelGraph build_pixel_graph(const LabImage& img);

struct SegParams {
  double k_felz = 300.0;         ///< scale constant k in tau = k / |C|
  double fisher_threshold = 4.0; ///< pairs at or above this are well separated
  std::array<bool, 3> channel_gates{true, true, true};  ///< L, a, b
};

struct RegionStats {
  int label = 0;
  int area = 0;
  int perimeter = 0;            ///< boundary unit edges, image border included
  double contour_length = 0.0;  ///< perimeter with staircase corners cut diagonally
  std::array<double, 3> lab_mean{};
  std::array<double, 3> lab_var{};  ///< population variance
  double hue_mean = 0.0;        ///< circular mean, degrees [0, 360)
  double sat_mean = 0.0;
  double val_mean = 0.0;
  std::map<int, int> neighbors;  ///< adjacent label -> shared boundary edges
};

/// Pixel labeling plus per-region statistics. Labels are contiguous and
/// ordered by area, largest first; regions[i].label == i.
struct Segmentation {
  int width = 0;
  int height = 0;
  std::vector<int> labels;
  std::vector<RegionStats> regions;

  [[nodiscard]] int count() const { return static_cast<int>(regions.size()); }
  [[nodiscard]] int label_at(int x, int y) const {
    return labels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)];
  }
};

/// Greedy graph segmentation over the edges of `graph` (any order). Edges are
/// sorted by weight, ties by (u, v). Returns labels numbered by first
/// appearance. When `merge_trace` is given it receives the internal
/// difference of every merged component, in merge order.
std::vector<int> segment_graph(const PixelGraph& graph, double k, std::vector<double>* merge_trace = nullptr);

/// Statistics for an arbitrary labeling. Labels are renumbered by area
/// (descending, ties by original label). HSV means are left at 0 without `hsv`.
Segmentation region_stats(int width, int height, const std::vector<int>& labels, const LabImage& lab,
                          const HsvImage* hsv = nullptr);

Segmentation felzenszwalb(const LabImage& lab, const SegParams& params = {}, const HsvImage* hsv = nullptr);

/// Per-channel Fisher distance between two samples.
double fisher_channel(double n_i, double mean_i, double var_i, double n_j, double mean_j, double var_j);

/// Maximum of the gated per-channel distances.
double fisher_distance(const RegionStats& a, const RegionStats& b, const SegParams& params = {});

/// Region adjacency merging. Repeatedly merges the adjacent pair with the
/// smallest Fisher distance below the threshold, provided the absorbed
/// (smaller) region is also close to the pooled statistics of all its
/// neighbors and to the pooled group formed by the partner and the partner's
/// neighbors it shares. Rejected pairs are retried until a full pass merges nothing.
Segmentation merge_regions(const Segmentation& seg, const LabImage& lab, const SegParams& params = {},
                           const HsvImage* hsv = nullptr);

/// Felzenszwalb followed by merging.
Segmentation segment(const LabImage& lab, const HsvImage& hsv, const SegParams& params = {});

/// Label map rendered with a fixed pseudo-random palette.
RgbImage label_image(const Segmentation& seg);
void write_label_png(const Segmentation& seg, const std::filesystem::path& path);

}  // namespace chromapraise
