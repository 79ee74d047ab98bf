#pragma once

#include <Eigen/Core>

#include <span>
#include <utility>
#include <vector>

#include "bearing/error.hpp"

namespace bearing {

using Index = Eigen::Index;

/// Oriented edge: `from` is the start vertex, `to` the end vertex (0-based).
struct Edge {
  int from = 0;
  int to = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Incidence of an edge at one of its endpoints.
struct Incidence {
  int neighbor;
  int edge;
  double sign;  // -1 when this vertex starts the edge, +1 when it ends it
};

enum class Orientation { Lexicographic, AsGiven };

/// Undirected sensing graph with a fixed edge indexing/orientation and a
/// leader/follower split: vertices [0, l) are leaders, [l, n) followers.
class FormationGraph {
 public:
  FormationGraph(int n, int leaders, std::vector<Edge> edges,
                 Orientation orientation = Orientation::Lexicographic);

  int vertex_count() const noexcept { return n_; }
  int leader_count() const noexcept { return l_; }
  int follower_count() const noexcept { return n_ - l_; }
  int edge_count() const noexcept { return static_cast<int>(edges_.size()); }
  bool is_leader(int i) const noexcept { return i < l_; }

  std::span<const Edge> edges() const noexcept { return edges_; }
  const Edge& edge(int k) const { return edges_[static_cast<std::size_t>(k)]; }
  std::span<const Incidence> incidences(int i) const {
    return adjacency_[static_cast<std::size_t>(i)];
  }

  /// Subgraph view used by tests: same vertices and leaders, subset of edges.
  FormationGraph with_edges(std::vector<Edge> edges) const {
    return FormationGraph(n_, l_, std::move(edges), Orientation::AsGiven);
  }

 private:
  int n_;
  int l_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> adjacency_;
};

/// Complete graph on n vertices (lexicographic orientation).
FormationGraph complete_graph(int n, int leaders);

}  // namespace bearing
