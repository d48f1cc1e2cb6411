#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "mssp/contraction.hpp"
#include "mssp/embedded_graph.hpp"
#include "mssp/lex_weight.hpp"
#include "mssp/normalize.hpp"
#include "mssp/sssp.hpp"

namespace mssp {

/// Distances and tree arcs from one ring root over a node's vertex set.
struct RootTable {
  std::uint32_t root_index = 0;
  std::vector<LexWeight> dist;
  /// Lineage of the tree arc into each vertex; kNone at the root.
  std::vector<std::uint32_t> parent_lineage;
};

struct RecursionNode {
  std::uint32_t first = 0;
  std::uint32_t last = 0;
  std::uint32_t level = 0;
  /// Stable ids of the node graph's vertices, indexed by table position.
  std::vector<std::uint32_t> vertices;
  std::unordered_map<std::uint32_t, std::uint32_t> position_of;
  /// One table per distinct index in {first, last, midpoint}.
  std::vector<RootTable> tables;
  std::array<std::uint32_t, 2> children{kNone, kNone};
  /// Records of the left and right child contraction.
  std::array<std::uint32_t, 2> records{kNone, kNone};

  std::uint32_t midpoint() const { return (first + last) / 2; }
  bool is_leaf() const { return last - first <= 1; }
  const RootTable* table_for(std::uint32_t root_index) const;
};

struct LevelStats {
  std::size_t nodes = 0;
  std::size_t graph_vertices = 0;
  std::size_t graph_slots = 0;
  /// Vertices summed over every tree computed on this level.
  std::size_t tree_vertices = 0;
  /// Largest number of this level's trees sharing one arc id.
  std::size_t max_trees_per_arc = 0;
  std::size_t contracted_trees = 0;
  std::size_t contracted_vertices = 0;
};

struct OracleStats {
  std::vector<LevelStats> levels;
  std::size_t table_entries = 0;
  std::size_t record_entries = 0;
  std::size_t lineage_versions = 0;
  std::size_t perturbation_collisions = 0;
  std::size_t sssp_ties = 0;
  /// Contracted trees that touched a ring root; always zero for valid input.
  std::size_t ring_contractions = 0;

  std::size_t stored_entries() const { return table_entries + record_entries + lineage_versions; }
};

/// Hooks into the preprocessing recursion, used by verification tooling.
class BuildObserver {
 public:
  virtual ~BuildObserver() = default;
  /// The graph of a node and its computed trees, before any child work.
  virtual void on_node(const RecursionNode& /*node*/, const EmbeddedDigraph& /*graph*/,
                       std::span<const SsspTree> /*trees*/) {}
  /// `child` has just had `tree` contracted (not yet compacted).
  virtual void on_tree_contracted(const EmbeddedDigraph& /*child*/, const ContractibleTree& /*tree*/,
                                  const NormalizedInstance& /*norm*/) {}
  /// Parent graph and finished child graph of one recursive call.
  virtual void on_child(const EmbeddedDigraph& /*parent*/, const EmbeddedDigraph& /*child*/,
                        std::uint32_t /*first*/, std::uint32_t /*last*/, const NormalizedInstance& /*norm*/) {}
};

struct BuildOptions {
  /// Recurse into the right subinterval before the left one.
  bool right_first = false;
  BuildObserver* observer = nullptr;
};

/// Per-query instrumentation.
struct QueryTrace {
  std::size_t depth = 0;
  std::size_t record_lookups = 0;
  std::size_t table_steps = 0;
  std::size_t versions_expanded = 0;
};

class MsspOracle {
 public:
  static MsspOracle build(NormalizedInstance norm, const BuildOptions& options = {});

  /// Distance from ring root `root_index` to the vertex with stable id `vertex`.
  LexWeight query_dist(std::uint32_t root_index, std::uint32_t vertex, QueryTrace* trace = nullptr) const;
  /// Shortest path in the normalized graph from the ring root, as arc ids;
  /// starts with the root's attachment arc.
  std::vector<ArcId> query_normalized_path(std::uint32_t root_index, std::uint32_t vertex,
                                           QueryTrace* trace = nullptr) const;
  /// Shortest path from face vertex b_j to `vertex` as input arc ids.
  std::vector<ArcId> query_path(std::uint32_t root_index, std::uint32_t vertex, QueryTrace* trace = nullptr) const;

  const NormalizedInstance& normalized() const { return norm_; }
  const std::vector<RecursionNode>& nodes() const { return nodes_; }
  const std::vector<ContractionRecord>& records() const { return records_; }
  const ContractionRecord* record(std::uint32_t midpoint, Side side) const;
  const LineageTable& lineage() const { return lineage_; }
  const OracleStats& stats() const { return stats_; }
  std::size_t ring_count() const { return norm_.ring_count(); }
  /// Upper bound on nodes visited by one query: ceil(log2 N) + 1.
  std::size_t depth_bound() const;

 private:
  friend class OracleBuilder;
  friend class OracleCodec;

  void check_query(std::uint32_t root_index, std::uint32_t vertex) const;
  void expand(std::uint32_t version, std::vector<ArcId>& out, QueryTrace* trace) const;
  void append_tree_path(const ContractionRecord& record, std::uint32_t from_root, std::uint32_t to,
                        std::vector<ArcId>& out, QueryTrace* trace) const;

  NormalizedInstance norm_;
  std::vector<RecursionNode> nodes_;
  std::vector<ContractionRecord> records_;
  LineageTable lineage_;
  OracleStats stats_;
};

}  // namespace mssp
