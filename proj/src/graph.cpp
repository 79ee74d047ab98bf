#include "bearing/graph.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace bearing {

FormationGraph::FormationGraph(int n, int leaders, std::vector<Edge> edges,
                               Orientation orientation)
    : n_(n), l_(leaders), edges_(std::move(edges)) {
  if (l_ < 2 || l_ >= n_)
    throw Error(ErrorKind::BadLeaderCount,
                "leader count " + std::to_string(l_) + " outside [2, n-1]");

  std::set<std::pair<int, int>> seen;
  for (auto& e : edges_) {
    if (e.from < 0 || e.from >= n_ || e.to < 0 || e.to >= n_)
      throw Error(ErrorKind::InvalidGraph, "edge endpoint out of range");
    if (e.from == e.to)
      throw Error(ErrorKind::InvalidGraph,
                  "self-loop at vertex " + std::to_string(e.from + 1));
    if (!seen.emplace(std::min(e.from, e.to), std::max(e.from, e.to)).second)
      throw Error(ErrorKind::InvalidGraph, "duplicate edge (" + std::to_string(e.from + 1) +
                                               "," + std::to_string(e.to + 1) + ")");
    if (orientation == Orientation::Lexicographic && e.from > e.to) std::swap(e.from, e.to);
  }
  if (orientation == Orientation::Lexicographic)
    std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
      return std::pair(a.from, a.to) < std::pair(b.from, b.to);
    });

  adjacency_.assign(static_cast<std::size_t>(n_), {});
  for (int k = 0; k < edge_count(); ++k) {
    const Edge& e = edges_[static_cast<std::size_t>(k)];
    adjacency_[static_cast<std::size_t>(e.from)].push_back({e.to, k, -1.0});
    adjacency_[static_cast<std::size_t>(e.to)].push_back({e.from, k, +1.0});
  }

  // connectivity by DFS from vertex 0
  std::vector<char> visited(static_cast<std::size_t>(n_), 0);
  std::vector<int> stack{0};
  visited[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (const auto& inc : adjacency_[static_cast<std::size_t>(v)]) {
      if (!visited[static_cast<std::size_t>(inc.neighbor)]) {
        visited[static_cast<std::size_t>(inc.neighbor)] = 1;
        ++reached;
        stack.push_back(inc.neighbor);
      }
    }
  }
  if (reached != n_) throw Error(ErrorKind::InvalidGraph, "graph is not connected");
}

FormationGraph complete_graph(int n, int leaders) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.push_back({i, j});
  return FormationGraph(n, leaders, std::move(edges));
}

}  // namespace bearing
