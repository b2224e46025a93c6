// Brute-force reference implementations shared by unit and acceptance tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>
#include <vector>

#include "chromapraise/imaging.hpp"
#include "chromapraise/segmentation.hpp"

namespace oracle {

using chromapraise::Lab;
using chromapraise::LabImage;

struct Edge {
  double w;
  int u, v;
  bool operator<(const Edge& o) const { return std::tie(w, u, v) < std::tie(o.w, o.u, o.v); }
};

inline std::vector<Edge> grid_edges(const LabImage& img) {
  std::vector<Edge> e;
  auto d = [](const Lab& a, const Lab& b) { return std::hypot(a.l - b.l, a.a - b.a, a.b - b.b); };
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const int u = y * img.width + x;
      if (x + 1 < img.width) e.push_back({d(img.at(x, y), img.at(x + 1, y)), u, u + 1});
      if (y + 1 < img.height) e.push_back({d(img.at(x, y), img.at(x, y + 1)), u, u + img.width});
    }
  }
  std::sort(e.begin(), e.end());
  return e;
}

inline std::vector<int> first_appearance(const std::vector<int>& comp) {
  std::map<int, int> ids;
  std::vector<int> out;
  for (int c : comp) out.push_back(ids.emplace(c, static_cast<int>(ids.size())).first->second);
  return out;
}

// Largest edge of a minimum spanning tree of the subgraph induced by `members`,
// built from scratch with Kruskal.
inline double mst_max(const std::vector<int>& members, const std::vector<Edge>& edges, int n) {
  if (members.size() == 1) return 0.0;
  std::vector<char> in(static_cast<std::size_t>(n), 0);
  for (int m : members) in[m] = 1;
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a];
    return a;
  };
  double mx = 0.0;
  for (const Edge& e : edges) {
    if (!in[e.u] || !in[e.v]) continue;
    const int a = find(e.u), b = find(e.v);
    if (a != b) {
      parent[b] = a;
      mx = std::max(mx, e.w);
    }
  }
  return mx;
}

// Graph segmentation evaluating the internal-difference predicate directly
// on explicit component member lists.
inline std::vector<int> felzenszwalb(const LabImage& img, double k) {
  const int n = img.width * img.height;
  const auto edges = grid_edges(img);
  std::vector<int> comp(static_cast<std::size_t>(n));
  std::iota(comp.begin(), comp.end(), 0);
  for (const Edge& e : edges) {
    const int cu = comp[e.u], cv = comp[e.v];
    if (cu == cv) continue;
    std::vector<int> a, b;
    for (int i = 0; i < n; ++i) {
      if (comp[i] == cu) a.push_back(i);
      if (comp[i] == cv) b.push_back(i);
    }
    const double ma = mst_max(a, edges, n) + k / a.size();
    const double mb = mst_max(b, edges, n) + k / b.size();
    if (e.w <= std::min(ma, mb)) {
      for (int& c : comp) {
        if (c == cv) c = cu;
      }
    }
  }
  return first_appearance(comp);
}

inline std::vector<int> canonical(const std::vector<int>& labels) { return first_appearance(labels); }

}  // namespace oracle
