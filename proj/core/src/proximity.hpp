#pragma once

// Pair searches over proximity-graph vertices, both giving the same result
// as the all-pairs loops.  VertexTree is a static k-d tree on the stored
// coordinates; pruning uses the chord |x - y| as a lower bound for the angle,
// relaxed by `slack` to cover the error of the computed distance.
// CoincidentGroups serves low precision, where that slack is too large.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "realrays/counting.hpp"

namespace realrays::detail {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0U); }

  std::uint32_t find(std::uint32_t v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }

  // The smaller root wins, so a root is always the smallest member.
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::uint32_t> parent_;
};

class VertexTree {
 public:
  static constexpr int kLeafSize = 8;
  static constexpr int kNone = -1;

  explicit VertexTree(const std::vector<Vertex>& vs) : vs_(vs) {
    dim_ = vs.empty() ? 0 : static_cast<int>(vs[0].x.size());
    perm_.resize(vs.size());
    std::iota(perm_.begin(), perm_.end(), 0U);
    if (!vs.empty()) build(0, static_cast<std::uint32_t>(vs.size()));
  }

  // Unites every pair with d(a, b) <= r_a + r_b (computed in `ar`) and
  // appends the uniting pairs, a spanning forest, to `edges`.  Vertices are
  // queried in index order, so the forest does not depend on the tree.
  template <class Arith>
  void connect(const Arith& ar, double slack, double unit, UnionFind& uf,
               std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
    if (vs_.empty()) return;
    uniform_.assign(nodes_.size(), kNone);
    for (std::uint32_t a = 0; a < vs_.size(); ++a) connect_from(ar, 0, a, slack, unit, uf, edges);
  }

  // Smallest computed distance between vertices of different components.
  template <class Arith>
  double min_cross_distance(const Arith& ar, const std::vector<int>& component_of, double slack) {
    double best = std::numeric_limits<double>::infinity();
    if (vs_.empty()) return best;
    label_components(0, component_of);
    for (std::uint32_t a = 0; a < vs_.size(); ++a) nearest_from(ar, 0, a, component_of, slack, best);
    return best;
  }

 private:
  struct Node {
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    int left = kNone;
    int right = kNone;
    double max_radius = 0.0;
  };

  int build(std::uint32_t begin, std::uint32_t end) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{begin, end});
    lo_.resize(lo_.size() + static_cast<std::size_t>(dim_), std::numeric_limits<double>::infinity());
    hi_.resize(hi_.size() + static_cast<std::size_t>(dim_), -std::numeric_limits<double>::infinity());
    double max_r = 0.0;
    for (std::uint32_t p = begin; p < end; ++p) {
      const Vertex& v = vs_[perm_[p]];
      max_r = std::max(max_r, v.radius);
      for (int c = 0; c < dim_; ++c) {
        lo(id)[c] = std::min(lo(id)[c], v.x[static_cast<std::size_t>(c)]);
        hi(id)[c] = std::max(hi(id)[c], v.x[static_cast<std::size_t>(c)]);
      }
    }
    nodes_[static_cast<std::size_t>(id)].max_radius = max_r;
    if (end - begin <= kLeafSize) return id;

    int axis = 0;
    for (int c = 1; c < dim_; ++c) {
      if (hi(id)[c] - lo(id)[c] > hi(id)[axis] - lo(id)[axis]) axis = c;
    }
    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(perm_.begin() + begin, perm_.begin() + mid, perm_.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) {
                       const double xa = vs_[a].x[static_cast<std::size_t>(axis)];
                       const double xb = vs_[b].x[static_cast<std::size_t>(axis)];
                       return xa < xb || (xa == xb && a < b);
                     });
    const int left = build(begin, mid);
    const int right = build(mid, end);
    nodes_[static_cast<std::size_t>(id)].left = left;
    nodes_[static_cast<std::size_t>(id)].right = right;
    return id;
  }

  double* lo(int id) { return lo_.data() + static_cast<std::size_t>(id) * dim_; }
  double* hi(int id) { return hi_.data() + static_cast<std::size_t>(id) * dim_; }

  // Euclidean distance from x to the bounding box of a node.
  double box_distance(int id, const std::vector<double>& x) {
    double s = 0.0;
    for (int c = 0; c < dim_; ++c) {
      const double v = x[static_cast<std::size_t>(c)];
      double d = 0.0;
      if (v < lo(id)[c]) {
        d = lo(id)[c] - v;
      } else if (v > hi(id)[c]) {
        d = v - hi(id)[c];
      }
      s += d * d;
    }
    return std::sqrt(s);
  }

  template <class Arith>
  void connect_from(const Arith& ar, int id, std::uint32_t a, double slack, double unit, UnionFind& uf,
                    std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
    const Node& node = nodes_[static_cast<std::size_t>(id)];
    const int rep = uniform_[static_cast<std::size_t>(id)];
    if (rep != kNone && uf.find(static_cast<std::uint32_t>(rep)) == uf.find(a)) return;
    const Vertex& va = vs_[a];
    if (box_distance(id, va.x) - slack > (va.radius + node.max_radius) * (1.0 + 4.0 * unit)) return;

    if (node.left == kNone) {
      for (std::uint32_t p = node.begin; p < node.end; ++p) {
        const std::uint32_t b = perm_[p];
        if (b == a || uf.find(a) == uf.find(b)) continue;
        const Vertex& vb = vs_[b];
        if (distance_with(ar, va.x, vb.x) <= ar.add(va.radius, vb.radius)) {
          edges.emplace_back(std::min(a, b), std::max(a, b));
          uf.unite(a, b);
        }
      }
      const std::uint32_t root = uf.find(perm_[node.begin]);
      for (std::uint32_t p = node.begin + 1; p < node.end; ++p) {
        if (uf.find(perm_[p]) != root) return;
      }
      uniform_[static_cast<std::size_t>(id)] = static_cast<int>(perm_[node.begin]);
      return;
    }
    connect_from(ar, node.left, a, slack, unit, uf, edges);
    connect_from(ar, node.right, a, slack, unit, uf, edges);
    const int l = uniform_[static_cast<std::size_t>(node.left)];
    const int r = uniform_[static_cast<std::size_t>(node.right)];
    if (l != kNone && r != kNone &&
        uf.find(static_cast<std::uint32_t>(l)) == uf.find(static_cast<std::uint32_t>(r))) {
      uniform_[static_cast<std::size_t>(id)] = l;
    }
  }

  // uniform_[id] = the component shared by all vertices of the node, or kNone.
  int label_components(int id, const std::vector<int>& component_of) {
    if (uniform_.size() != nodes_.size()) uniform_.assign(nodes_.size(), kNone);
    const Node& node = nodes_[static_cast<std::size_t>(id)];
    int label = kNone;
    if (node.left == kNone) {
      label = component_of[perm_[node.begin]];
      for (std::uint32_t p = node.begin + 1; p < node.end; ++p) {
        if (component_of[perm_[p]] != label) {
          label = kNone;
          break;
        }
      }
    } else {
      const int l = label_components(node.left, component_of);
      const int r = label_components(node.right, component_of);
      label = (l != kNone && l == r) ? l : kNone;
    }
    uniform_[static_cast<std::size_t>(id)] = label;
    return label;
  }

  template <class Arith>
  void nearest_from(const Arith& ar, int id, std::uint32_t a, const std::vector<int>& component_of, double slack,
                    double& best) {
    const Node& node = nodes_[static_cast<std::size_t>(id)];
    const int ca = component_of[a];
    if (uniform_[static_cast<std::size_t>(id)] == ca) return;
    const Vertex& va = vs_[a];
    if (box_distance(id, va.x) - slack > best) return;
    if (node.left == kNone) {
      for (std::uint32_t p = node.begin; p < node.end; ++p) {
        const std::uint32_t b = perm_[p];
        if (component_of[b] == ca) continue;
        best = std::min(best, distance_with(ar, va.x, vs_[b].x));
      }
      return;
    }
    int first = node.left;
    int second = node.right;
    if (box_distance(second, va.x) < box_distance(first, va.x)) std::swap(first, second);
    nearest_from(ar, first, a, component_of, slack, best);
    nearest_from(ar, second, a, component_of, slack, best);
  }

  const std::vector<Vertex>& vs_;
  int dim_ = 0;
  std::vector<std::uint32_t> perm_;
  std::vector<Node> nodes_;
  std::vector<double> lo_;
  std::vector<double> hi_;
  std::vector<int> uniform_;
};

// Vertices grouped by bitwise-equal coordinates, for low precision where
// rounding makes many grid points coincide and the distance error is too
// large for geometric pruning.  One distance per pair of groups suffices:
// fl(r_a + r_b) is nondecreasing in each radius, so every vertex adjacent
// to group B is adjacent to B's largest-radius vertex.
class CoincidentGroups {
 public:
  explicit CoincidentGroups(const std::vector<Vertex>& vs) : vs_(vs) {
    std::map<std::vector<double>, std::size_t> index;
    for (std::uint32_t v = 0; v < vs.size(); ++v) {
      const auto [it, inserted] = index.emplace(vs[v].x, members_.size());
      if (inserted) members_.emplace_back();
      members_[it->second].push_back(v);
    }
    // Largest radius first; ties by index.
    for (auto& m : members_) {
      std::stable_sort(m.begin(), m.end(),
                       [&](std::uint32_t a, std::uint32_t b) { return vs_[a].radius > vs_[b].radius; });
    }
  }

  std::size_t size() const noexcept { return members_.size(); }

  template <class Arith>
  void connect(const Arith& ar, UnionFind& uf, std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
    auto join = [&](std::uint32_t a, std::uint32_t b) {
      if (uf.find(a) == uf.find(b)) return;
      edges.emplace_back(std::min(a, b), std::max(a, b));
      uf.unite(a, b);
    };
    for (std::size_t ga = 0; ga < members_.size(); ++ga) {
      for (std::size_t gb = ga; gb < members_.size(); ++gb) {
        const auto& A = members_[ga];
        const auto& B = members_[gb];
        const double d = distance_with(ar, vs_[A[0]].x, vs_[B[0]].x);
        // Within one group the top vertex pairs with the runner-up.
        const std::uint32_t a0 = A[0];
        const std::uint32_t b0 = ga == gb ? (B.size() > 1 ? B[1] : B[0]) : B[0];
        if (a0 == b0 || !(d <= ar.add(vs_[a0].radius, vs_[b0].radius))) continue;
        join(a0, b0);
        for (std::size_t i = 1; i < A.size(); ++i) {
          if (A[i] == b0) continue;
          if (!(d <= ar.add(vs_[A[i]].radius, vs_[b0].radius))) break;
          join(A[i], b0);
        }
        for (std::size_t i = 1; i < B.size(); ++i) {
          if (B[i] == a0) continue;
          if (!(d <= ar.add(vs_[a0].radius, vs_[B[i]].radius))) break;
          join(a0, B[i]);
        }
      }
    }
  }

  template <class Arith>
  double min_cross_distance(const Arith& ar, const std::vector<int>& component_of) {
    // Component of each group, or -1 when mixed.
    std::vector<int> label(members_.size());
    for (std::size_t g = 0; g < members_.size(); ++g) {
      label[g] = component_of[members_[g][0]];
      for (std::uint32_t v : members_[g]) {
        if (component_of[v] != label[g]) {
          label[g] = -1;
          break;
        }
      }
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t ga = 0; ga < members_.size(); ++ga) {
      for (std::size_t gb = ga; gb < members_.size(); ++gb) {
        if (ga == gb ? label[ga] != -1 : (label[ga] != -1 && label[ga] == label[gb])) continue;
        best = std::min(best, distance_with(ar, vs_[members_[ga][0]].x, vs_[members_[gb][0]].x));
      }
    }
    return best;
  }

 private:
  const std::vector<Vertex>& vs_;
  std::vector<std::vector<std::uint32_t>> members_;
};

}  // namespace realrays::detail
