#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mssp/embedded_graph.hpp"
#include "mssp/lex_weight.hpp"

namespace mssp {

/// Shortest-path tree over the local vertex ids of one graph.
struct SsspTree {
  VertexId root = kNone;
  /// Dart at the parent whose out-arc is the tree arc into v; kNone at the
  /// root and at unreached vertices.
  std::vector<DartId> parent_dart;
  /// Tail of the tree arc into v (kNone where parent_dart is kNone).
  std::vector<VertexId> parent;
  std::vector<LexWeight> dist;
  /// Relaxations that met an equal tentative distance through another arc.
  std::size_t ties = 0;

  bool reached(VertexId v) const { return v < dist.size() && !dist[v].is_infinite(); }
  std::size_t reached_count() const;
};

/// Dijkstra from `root`, never entering `excluded` vertices and never using
/// infinite arcs. Every other live vertex must be reached.
SsspTree sssp_tree(const EmbeddedDigraph& h, VertexId root, std::span<const VertexId> excluded);

/// Intersection of two trees over the same graph.
struct SharedForest {
  /// Dart at the parent for arcs that are the parent arc in both trees.
  std::vector<DartId> parent_dart;
  /// Vertices without a shared parent arc that have shared children.
  std::vector<VertexId> roots;
  std::vector<std::uint32_t> child_offsets;
  std::vector<VertexId> child_list;

  std::span<const VertexId> children(VertexId v) const {
    return {child_list.data() + child_offsets[v], child_list.data() + child_offsets[v + 1]};
  }
};

SharedForest shared_forest(const SsspTree& t1, const SsspTree& t2);

}  // namespace mssp
