#include "cqkd/graph.hpp"

#include <numeric>
#include <stdexcept>

namespace cqkd {

ExtendedGraph::ExtendedGraph() {
  edges_ = {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 1}, {2, 6},
            {3, 6}, {4, 7}, {5, 7}, {1, 8}, {5, 8}};
  for (auto [a, b] : edges_) {
    nbrs_[a - 1].push_back(b);
    nbrs_[b - 1].push_back(a);
    adj_[a - 1][b - 1] = adj_[b - 1][a - 1] = true;
  }
  self_check();
}

const ExtendedGraph& ExtendedGraph::standard() {
  static const ExtendedGraph g;
  return g;
}

bool ExtendedGraph::is_proper_coloring(const Coloring& c) const {
  for (int v = 0; v < 8; ++v) {
    if (c[v] < 0 || c[v] > 2) return false;
  }
  for (auto [a, b] : edges_) {
    if (c[a - 1] == c[b - 1]) return false;
  }
  return true;
}

int ExtendedGraph::witness_term_count() const {
  int n = 8;
  for (const auto& nb : nbrs_) n += static_cast<int>(nb.size());
  return n;
}

int ExtendedGraph::key_pair_count() const {
  int n = 0;
  for (int x = 1; x <= 8; ++x)
    for (int y = 1; y <= 8; ++y)
      if (key_eligible(x, y)) ++n;
  return n;
}

void ExtendedGraph::self_check() const {
  // Consistency facts the edge set was derived from: 30 witness terms
  // (hence max S1 = 30), 30 key pairs (hence P_k = 30/144), and the
  // 5-cycle on vertices 1..5.
  if (edges_.size() != 11) throw std::logic_error("graph: expected 11 edges");
  if (witness_term_count() != 30) throw std::logic_error("graph: expected 30 witness terms");
  if (key_pair_count() != 30) throw std::logic_error("graph: expected 30 key pairs");
  for (int y = 1; y <= 5; ++y) {
    if (!is_edge(five_cycle_predecessor(y), y))
      throw std::logic_error("graph: missing 5-cycle edge");
  }
  if (!is_proper_coloring(reference_coloring()))
    throw std::logic_error("graph: reference coloring is not proper");
}

}  // namespace cqkd
