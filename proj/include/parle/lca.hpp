#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "parle/tree.hpp"

namespace parle {

// Constant-time lowest-common-ancestor, depth and path-distance queries over
// one rooted tree. An Euler tour reduces lca to a range-minimum query over
// depths, answered by a sparse table on fixed-size block minima plus bounded
// in-block scans. Preprocessing is near-linear; queries are O(1).
//
// The index holds no reference into the source tree: it is keyed purely by
// node indices, so it stays usable while a different tree drives the queries.
// A built index is immutable and safe for concurrent queries.
class LcaIndex {
 public:
  // Tree must expose node_count(), root() and children(v).
  template <class Tree>
  explicit LcaIndex(const Tree& t) {
    const int n = static_cast<int>(t.node_count());
    if (n <= 0) throw std::invalid_argument("LcaIndex: empty tree");
    depth_.assign(n, -1);
    first_.assign(n, -1);
    euler_.reserve(2 * static_cast<std::size_t>(n) - 1);

    std::vector<std::pair<NodeId, std::size_t>> stack;
    stack.emplace_back(t.root(), 0);
    depth_[t.root()] = 0;
    record(t.root());
    while (!stack.empty()) {
      auto& [v, ci] = stack.back();
      const auto kids = t.children(v);
      if (ci < kids.size()) {
        const NodeId c = kids[ci++];
        depth_[c] = depth_[v] + 1;
        record(c);
        stack.emplace_back(c, 0);
      } else {
        stack.pop_back();
        if (!stack.empty()) euler_.push_back(stack.back().first);
      }
    }
    if (euler_.size() != 2 * static_cast<std::size_t>(n) - 1)
      throw std::invalid_argument("LcaIndex: input is not a single rooted tree");
    build_table();
  }

  int node_count() const { return static_cast<int>(depth_.size()); }

  // Edge count from the root.
  int depth(NodeId v) const {
    check(v);
    return depth_[v];
  }

  // The unique deepest common ancestor of u and v.
  NodeId lca(NodeId u, NodeId v) const {
    check(u);
    check(v);
    int a = first_[u], b = first_[v];
    if (a > b) std::swap(a, b);
    return euler_[range_min(a, b)];
  }

  // Length of the path between u and v.
  int dist(NodeId u, NodeId v) const {
    const NodeId w = lca(u, v);
    return depth_[u] + depth_[v] - 2 * depth_[w];
  }

 private:
  static constexpr int kBlock = 32;

  void record(NodeId v) {
    if (first_[v] < 0) first_[v] = static_cast<int>(euler_.size());
    euler_.push_back(v);
  }
  void check(NodeId v) const {
    if (v < 0 || v >= node_count() || first_[v] < 0)
      throw std::out_of_range("LcaIndex: node not in indexed tree");
  }
  void build_table();

  int euler_depth(int pos) const { return depth_[euler_[pos]]; }

  // Position of the minimum depth in euler_[a..b], bounds inclusive.
  int scan_min(int a, int b) const {
    int best = a;
    for (int p = a + 1; p <= b; ++p)
      if (euler_depth(p) < euler_depth(best)) best = p;
    return best;
  }

  int range_min(int a, int b) const {
    const int ba = a / kBlock;
    const int bb = b / kBlock;
    if (ba == bb) return scan_min(a, b);
    int best = scan_min(a, (ba + 1) * kBlock - 1);
    const int right = scan_min(bb * kBlock, b);
    if (euler_depth(right) < euler_depth(best)) best = right;
    if (ba + 1 <= bb - 1) {
      const int k = log2_[bb - 1 - ba];
      const int p = table_[k][ba + 1];
      const int q = table_[k][bb - (1 << k)];
      const int mid = euler_depth(p) <= euler_depth(q) ? p : q;
      if (euler_depth(mid) < euler_depth(best)) best = mid;
    }
    return best;
  }

  std::vector<int> depth_;
  std::vector<int> first_;
  std::vector<NodeId> euler_;
  std::vector<int> log2_;
  // table_[k][i]: euler position of the minimum over blocks [i, i + 2^k).
  std::vector<std::vector<int>> table_;
};

}  // namespace parle
