#include "chromapraise/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <queue>
#include <set>
#include <tuple>
#include <unordered_map>

#include "chromapraise/errors.hpp"

namespace chromapraise {

namespace {

double lab_distance(const Lab& p, const Lab& q) {
  const double dl = p.l - q.l;
  const double da = p.a - q.a;
  const double db = p.b - q.b;
  return std::sqrt(dl * dl + da * da + db * db);
}

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(static_cast<std::size_t>(n)), size_(static_cast<std::size_t>(n), 1),
                                 internal_(static_cast<std::size_t>(n), 0.0) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      auto& p = parent_[static_cast<std::size_t>(x)];
      p = parent_[static_cast<std::size_t>(p)];
      x = p;
    }
    return x;
  }

  // Joins two roots; returns the new root.
  int join(int a, int b, double internal) {
    if (size_[static_cast<std::size_t>(a)] < size_[static_cast<std::size_t>(b)]) std::swap(a, b);
    parent_[static_cast<std::size_t>(b)] = a;
    size_[static_cast<std::size_t>(a)] += size_[static_cast<std::size_t>(b)];
    internal_[static_cast<std::size_t>(a)] = internal;
    return a;
  }

  [[nodiscard]] int size(int root) const { return size_[static_cast<std::size_t>(root)]; }
  [[nodiscard]] double internal(int root) const { return internal_[static_cast<std::size_t>(root)]; }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
  std::vector<double> internal_;
};

// Sample size, means and population variances of the three Lab channels.
struct Moments {
  double n = 0.0;
  std::array<double, 3> mean{};
  std::array<double, 3> var{};
};

Moments pool(const std::vector<const Moments*>& parts) {
  Moments out;
  for (const Moments* m : parts) out.n += m->n;
  if (!(out.n > 0.0)) return out;
  for (int c = 0; c < 3; ++c) {
    double mean = 0.0;
    for (const Moments* m : parts) mean += m->n * m->mean[static_cast<std::size_t>(c)];
    mean /= out.n;
    double ss = 0.0;
    for (const Moments* m : parts) {
      const double d = m->mean[static_cast<std::size_t>(c)] - mean;
      ss += m->n * (m->var[static_cast<std::size_t>(c)] + d * d);
    }
    out.mean[static_cast<std::size_t>(c)] = mean;
    out.var[static_cast<std::size_t>(c)] = ss / out.n;
  }
  return out;
}

double fisher(const Moments& a, const Moments& b, const SegParams& params) {
  double best = 0.0;
  for (std::size_t c = 0; c < 3; ++c) {
    if (!params.channel_gates[c]) continue;
    best = std::max(best, fisher_channel(a.n, a.mean[c], a.var[c], b.n, b.mean[c], b.var[c]));
  }
  return best;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

PixelGraph build_pixel_graph(const LabImage& img) {
  PixelGraph g;
  g.vertex_count = static_cast<int>(img.size());
  g.edges.reserve(2 * img.size());
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const int u = static_cast<int>(img.index(x, y));
      if (x + 1 < img.width) g.edges.push_back({u, u + 1, lab_distance(img.at(x, y), img.at(x + 1, y))});
      if (y + 1 < img.height) g.edges.push_back({u, u + img.width, lab_distance(img.at(x, y), img.at(x, y + 1))});
    }
  }
  return g;
}

std::vector<int> segment_graph(const PixelGraph& graph, double k, std::vector<double>* merge_trace) {
  if (!(k > 0.0)) throw ArgumentError("k_felz must be > 0");
  std::vector<PixelEdge> edges = graph.edges;
  std::sort(edges.begin(), edges.end(), [](const PixelEdge& a, const PixelEdge& b) {
    return std::tie(a.w, a.u, a.v) < std::tie(b.w, b.u, b.v);
  });

  DisjointSets sets(graph.vertex_count);
  for (const PixelEdge& e : edges) {
    const int a = sets.find(e.u);
    const int b = sets.find(e.v);
    if (a == b) continue;
    const double mint = std::min(sets.internal(a) + k / sets.size(a), sets.internal(b) + k / sets.size(b));
    if (e.w <= mint) {
      // edges arrive in non-decreasing order, so the joining edge is the
      // heaviest edge of the merged component's spanning tree
      sets.join(a, b, e.w);
      if (merge_trace) merge_trace->push_back(e.w);
    }
  }

  std::vector<int> labels(static_cast<std::size_t>(graph.vertex_count));
  std::unordered_map<int, int> relabel;
  for (int i = 0; i < graph.vertex_count; ++i) {
    const int root = sets.find(i);
    auto [it, inserted] = relabel.try_emplace(root, static_cast<int>(relabel.size()));
    labels[static_cast<std::size_t>(i)] = it->second;
  }
  return labels;
}

Segmentation region_stats(int width, int height, const std::vector<int>& labels, const LabImage& lab,
                          const HsvImage* hsv) {
  const std::size_t n_px = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (labels.size() != n_px || lab.size() != n_px) throw ArgumentError("label map does not match image size");
  if (hsv && hsv->size() != n_px) throw ArgumentError("HSV image does not match label map");

  int n_labels = 0;
  for (int l : labels) {
    if (l < 0) throw ArgumentError("negative label");
    n_labels = std::max(n_labels, l + 1);
  }

  std::vector<RegionStats> regions(static_cast<std::size_t>(n_labels));
  std::vector<std::array<double, 2>> hue_vec(static_cast<std::size_t>(n_labels), {0.0, 0.0});
  for (std::size_t i = 0; i < n_px; ++i) {
    RegionStats& r = regions[static_cast<std::size_t>(labels[i])];
    ++r.area;
    r.lab_mean[0] += lab.pixels[i].l;
    r.lab_mean[1] += lab.pixels[i].a;
    r.lab_mean[2] += lab.pixels[i].b;
    if (hsv) {
      const Hsv& p = hsv->pixels[i];
      const double rad = p.h * std::numbers::pi / 180.0;
      hue_vec[static_cast<std::size_t>(labels[i])][0] += std::cos(rad);
      hue_vec[static_cast<std::size_t>(labels[i])][1] += std::sin(rad);
      r.sat_mean += p.s;
      r.val_mean += p.v;
    }
  }
  for (std::size_t l = 0; l < regions.size(); ++l) {
    RegionStats& r = regions[l];
    if (r.area == 0) throw ArgumentError("labels are not contiguous");
    for (double& m : r.lab_mean) m /= r.area;
    r.sat_mean /= r.area;
    r.val_mean /= r.area;
    const double c = hue_vec[l][0];
    const double s = hue_vec[l][1];
    if (std::hypot(c, s) > 1e-9 * r.area) {
      double h = std::atan2(s, c) * 180.0 / std::numbers::pi;
      if (h < 0.0) h += 360.0;
      if (h >= 360.0 - 1e-9) h = 0.0;
      r.hue_mean = h;
    }
  }
  for (std::size_t i = 0; i < n_px; ++i) {
    RegionStats& r = regions[static_cast<std::size_t>(labels[i])];
    const double d[3] = {lab.pixels[i].l - r.lab_mean[0], lab.pixels[i].a - r.lab_mean[1],
                         lab.pixels[i].b - r.lab_mean[2]};
    for (int c = 0; c < 3; ++c) r.lab_var[static_cast<std::size_t>(c)] += d[c] * d[c];
  }
  for (RegionStats& r : regions) {
    for (double& v : r.lab_var) v /= r.area;
  }

  // Boundary cracks, adjacency and staircase corners.
  auto label_of = [&](int x, int y) {
    return labels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)];
  };
  auto inside = [&](int x, int y, int l) { return x >= 0 && y >= 0 && x < width && y < height && label_of(x, y) == l; };
  constexpr int kSides[4][2] = {{0, -1}, {0, 1}, {-1, 0}, {1, 0}};
  enum class Turn { Straight, Convex, Concave };
  std::vector<std::vector<long long>> cuts(regions.size());

  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const int l = label_of(x, y);
      RegionStats& r = regions[static_cast<std::size_t>(l)];
      for (const auto& side : kSides) {
        const int nx = side[0];
        const int ny = side[1];
        if (inside(x + nx, y + ny, l)) continue;
        ++r.perimeter;
        if (x + nx >= 0 && y + ny >= 0 && x + nx < width && y + ny < height) ++r.neighbors[label_of(x + nx, y + ny)];

        Turn kinds[2];
        long long keys[2];
        const int tx0 = std::abs(ny);
        const int ty0 = std::abs(nx);
        for (int e = 0; e < 2; ++e) {
          const int tx = e == 0 ? tx0 : -tx0;
          const int ty = e == 0 ? ty0 : -ty0;
          const int cx = (nx + tx + 1) / 2;
          const int cy = (ny + ty + 1) / 2;
          const long long vertex = static_cast<long long>(y + cy) * (width + 1) + (x + cx);
          if (!inside(x + tx, y + ty, l)) {
            kinds[e] = Turn::Convex;
            keys[e] = vertex * 5 + (cx + 2 * cy);
          } else if (inside(x + tx + nx, y + ty + ny, l)) {
            kinds[e] = Turn::Concave;
            keys[e] = vertex * 5 + 4;
          } else {
            kinds[e] = Turn::Straight;
            keys[e] = -1;
          }
        }
        // a unit step between a convex and a concave corner is a staircase
        // tread; both of its corners are replaced by diagonals
        if (kinds[0] != Turn::Straight && kinds[1] != Turn::Straight && kinds[0] != kinds[1]) {
          cuts[static_cast<std::size_t>(l)].push_back(keys[0]);
          cuts[static_cast<std::size_t>(l)].push_back(keys[1]);
        }
      }
    }
  }
  const double cut_saving = 1.0 - std::numbers::sqrt2 / 2.0;
  for (std::size_t l = 0; l < regions.size(); ++l) {
    auto& c = cuts[l];
    std::sort(c.begin(), c.end());
    const auto distinct = std::unique(c.begin(), c.end()) - c.begin();
    regions[l].contour_length = regions[l].perimeter - cut_saving * static_cast<double>(distinct);
  }

  // Renumber by area, largest first.
  std::vector<int> order(regions.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return regions[static_cast<std::size_t>(a)].area > regions[static_cast<std::size_t>(b)].area;
  });
  std::vector<int> new_label(regions.size());
  for (std::size_t i = 0; i < order.size(); ++i) new_label[static_cast<std::size_t>(order[i])] = static_cast<int>(i);

  Segmentation seg;
  seg.width = width;
  seg.height = height;
  seg.labels.resize(n_px);
  for (std::size_t i = 0; i < n_px; ++i) seg.labels[i] = new_label[static_cast<std::size_t>(labels[i])];
  seg.regions.reserve(regions.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    RegionStats r = std::move(regions[static_cast<std::size_t>(order[i])]);
    r.label = static_cast<int>(i);
    std::map<int, int> remapped;
    for (const auto& [nb, shared] : r.neighbors) remapped[new_label[static_cast<std::size_t>(nb)]] = shared;
    r.neighbors = std::move(remapped);
    seg.regions.push_back(std::move(r));
  }
  return seg;
}

Segmentation felzenszwalb(const LabImage& lab, const SegParams& params, const HsvImage* hsv) {
  if (lab.width < 2 || lab.height < 2) throw DimensionError("segmentation needs at least a 2x2 image");
  const auto labels = segment_graph(build_pixel_graph(lab), params.k_felz);
  return region_stats(lab.width, lab.height, labels, lab, hsv);
}

double fisher_channel(double n_i, double mean_i, double var_i, double n_j, double mean_j, double var_j) {
  const double diff = std::abs(mean_i - mean_j);
  if (var_i == 0.0 && var_j == 0.0) return diff;
  return std::sqrt(n_i + n_j) * diff / std::sqrt(n_i * var_i + n_j * var_j);
}

double fisher_distance(const RegionStats& a, const RegionStats& b, const SegParams& params) {
  if (a.area < 1 || b.area < 1) throw ArgumentError("Fisher distance of an empty region");
  const Moments ma{static_cast<double>(a.area), a.lab_mean, a.lab_var};
  const Moments mb{static_cast<double>(b.area), b.lab_mean, b.lab_var};
  return fisher(ma, mb, params);
}

Segmentation merge_regions(const Segmentation& seg, const LabImage& lab, const SegParams& params,
                           const HsvImage* hsv) {
  if (!(params.fisher_threshold > 0.0)) throw ArgumentError("fisher_threshold must be > 0");
  const std::size_t n = seg.regions.size();
  std::vector<Moments> stats(n);
  std::vector<std::set<int>> adj(n);
  std::vector<bool> alive(n, true);
  std::vector<int> version(n, 0);
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    const RegionStats& r = seg.regions[i];
    stats[i] = Moments{static_cast<double>(r.area), r.lab_mean, r.lab_var};
    for (const auto& kv : r.neighbors) adj[i].insert(kv.first);
  }

  using Entry = std::tuple<double, int, int, int, int>;  // fd, a, b, version a, version b
  const double thr = params.fisher_threshold;
  auto sz = [](int i) { return static_cast<std::size_t>(i); };

  for (;;) {
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    auto push_pair = [&](int a, int b) {
      if (a > b) std::swap(a, b);
      const double fd = fisher(stats[sz(a)], stats[sz(b)], params);
      if (fd < thr) heap.emplace(fd, a, b, version[sz(a)], version[sz(b)]);
    };
    for (std::size_t a = 0; a < n; ++a) {
      if (!alive[a]) continue;
      for (int b : adj[a]) {
        if (static_cast<std::size_t>(b) > a) push_pair(static_cast<int>(a), b);
      }
    }

    bool merged_any = false;
    bool rejected_any = false;
    while (!heap.empty()) {
      const auto [fd, a, b, va, vb] = heap.top();
      heap.pop();
      if (!alive[sz(a)] || !alive[sz(b)] || version[sz(a)] != va || version[sz(b)] != vb) continue;

      // the smaller region is the one being absorbed
      int i = a;
      int j = b;
      if (stats[sz(b)].n < stats[sz(a)].n || (stats[sz(b)].n == stats[sz(a)].n && b > a)) std::swap(i, j);

      std::vector<const Moments*> around;
      for (int nb : adj[sz(i)]) around.push_back(&stats[sz(nb)]);
      std::vector<const Moments*> group{&stats[sz(j)]};
      for (int nb : adj[sz(i)]) {
        if (nb != j && adj[sz(j)].count(nb)) group.push_back(&stats[sz(nb)]);
      }
      if (!(fisher(stats[sz(i)], pool(around), params) < thr) ||
          !(fisher(stats[sz(i)], pool(group), params) < thr)) {
        rejected_any = true;
        continue;
      }

      const int keep = std::min(a, b);
      const int gone = std::max(a, b);
      stats[sz(keep)] = pool({&stats[sz(keep)], &stats[sz(gone)]});
      alive[sz(gone)] = false;
      parent[sz(gone)] = keep;
      for (int nb : adj[sz(gone)]) {
        adj[sz(nb)].erase(gone);
        if (nb != keep) {
          adj[sz(nb)].insert(keep);
          adj[sz(keep)].insert(nb);
        }
      }
      adj[sz(keep)].erase(gone);
      adj[sz(gone)].clear();
      ++version[sz(keep)];
      merged_any = true;
      for (int nb : adj[sz(keep)]) push_pair(keep, nb);
    }
    if (!merged_any || !rejected_any) break;
  }

  auto root = [&](int x) {
    while (parent[sz(x)] != x) x = parent[sz(x)];
    return x;
  };
  std::vector<int> labels(seg.labels.size());
  for (std::size_t p = 0; p < labels.size(); ++p) labels[p] = root(seg.labels[p]);
  // compact before recomputing statistics
  std::vector<int> compact(n, -1);
  int next = 0;
  for (int& l : labels) {
    if (compact[sz(l)] < 0) compact[sz(l)] = next++;
    l = compact[sz(l)];
  }
  return region_stats(seg.width, seg.height, labels, lab, hsv);
}

Segmentation segment(const LabImage& lab, const HsvImage& hsv, const SegParams& params) {
  return merge_regions(felzenszwalb(lab, params, &hsv), lab, params, &hsv);
}

RgbImage label_image(const Segmentation& seg) {
  RgbImage out(seg.width, seg.height);
  for (std::size_t i = 0; i < seg.labels.size(); ++i) {
    const std::uint64_t h = splitmix64(static_cast<std::uint64_t>(seg.labels[i]));
    out.pixels[i] = Rgb{static_cast<std::uint8_t>(h), static_cast<std::uint8_t>(h >> 8),
                        static_cast<std::uint8_t>(h >> 16)};
  }
  return out;
}

void write_label_png(const Segmentation& seg, const std::filesystem::path& path) {
  write_png(label_image(seg), path);
}

}  // namespace chromapraise
