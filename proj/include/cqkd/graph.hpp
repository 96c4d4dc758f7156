#pragma once

// The extended KCBS orthogonality graph: the 5-cycle on vertices 1..5 plus
// completion vertices 6, 7, 8, one per measured context that needs a third
// basis ray. 11 edges total, sum of neighbourhood sizes 22.

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

namespace cqkd {

using Coloring = std::array<int, 8>;  // vertex v in 1..8 -> coloring[v-1] in {0,1,2}

class ExtendedGraph {
 public:
  static const ExtendedGraph& standard();

  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int x) const { return nbrs_[x - 1]; }
  bool is_edge(int x, int y) const { return adj_[x - 1][y - 1]; }

  // Key rounds are those with x >= 1 and y in N_x or y == x.
  bool key_eligible(int x, int y) const {
    return x >= 1 && (x == y || is_edge(x, y));
  }

  // 5-cycle predecessor of y in 1..5 (the edge (pred(y), y) lies on the cycle).
  static int five_cycle_predecessor(int y) { return y == 1 ? 5 : y - 1; }

  bool is_proper_coloring(const Coloring& c) const;

  // The reference attack coloring (1,3,7)->0, (2,4,8)->1, (5,6)->2.
  static Coloring reference_coloring() { return {0, 1, 0, 1, 2, 2, 0, 1}; }

  int witness_term_count() const;  // 8 diagonal + 22 edge terms = 30
  int key_pair_count() const;      // ordered (x,y) key pairs = 30 out of 72

 private:
  ExtendedGraph();
  void self_check() const;

  std::vector<std::pair<int, int>> edges_;
  std::array<std::vector<int>, 8> nbrs_;
  std::array<std::array<bool, 8>, 8> adj_{};
};

}  // namespace cqkd
