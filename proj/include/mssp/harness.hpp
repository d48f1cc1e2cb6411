#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mssp/embedded_graph.hpp"
#include "mssp/graph_io.hpp"
#include "mssp/normalize.hpp"
#include "mssp/oracle.hpp"

namespace mssp {

/// Reference Dijkstra from ring root j over the normalized arc list, with the
/// other ring roots removed. Indexed by stable vertex id.
std::vector<LexWeight> brute_distances(const NormalizedInstance& norm, std::uint32_t root_index);

/// Plain Dijkstra over the live arcs of `g` from the vertex labelled
/// `root_label`, skipping `excluded_labels`. Result indexed by label; labels
/// must be below `label_bound`.
std::vector<LexWeight> graph_distances(const EmbeddedDigraph& g, std::uint32_t root_label,
                                       const std::vector<std::uint32_t>& excluded_labels, std::size_t label_bound);

struct Instance {
  std::string name;
  std::uint64_t seed = 0;
  EmbeddedDigraph graph;
  std::vector<Point> coordinates;
  /// Index into face_walks(graph).
  std::size_t face = 0;

  std::vector<DartId> face_darts() const;
  GraphDocument document() const { return to_document(graph, coordinates); }
};

/// k x k grid; vertex r * k + c sits at (c, -r). Every slot carries both
/// arcs with weights uniform in [1, max_weight]. `face` is the outer face.
Instance gen_grid(std::size_t k, std::int64_t max_weight, std::uint64_t seed);

/// gen_grid followed by removing round(p * slots) slots in random order,
/// skipping any removal that would disconnect the graph. With
/// `oneway_prob` > 0 each remaining slot loses one random direction with
/// that probability.
Instance gen_random_planar(std::size_t k, double deletion_prob, std::uint64_t seed, double oneway_prob = 0.0,
                           std::int64_t max_weight = 100);

/// All arcs share one base weight; only the perturbation separates paths.
Instance gen_uniform_grid(std::size_t k, std::int64_t weight);

Instance load_instance(const std::string& path, std::optional<std::size_t> face);

/// Checks contraction invariants while the oracle is built: Euler's formula
/// and connectivity after every tree contraction, no ring root inside a
/// contracted tree, and (if `check_distances`) equal distances from every
/// child root in the parent and the child graph.
class ContractionAuditor : public BuildObserver {
 public:
  explicit ContractionAuditor(bool check_distances) : check_distances_(check_distances) {}

  void on_tree_contracted(const EmbeddedDigraph& child, const ContractibleTree& tree,
                          const NormalizedInstance& norm) override;
  void on_child(const EmbeddedDigraph& parent, const EmbeddedDigraph& child, std::uint32_t first, std::uint32_t last,
                const NormalizedInstance& norm) override;

  std::size_t contractions() const { return contractions_; }
  std::size_t euler_failures() const { return euler_failures_; }
  std::size_t ring_tree_vertices() const { return ring_tree_vertices_; }
  std::size_t distance_checks() const { return distance_checks_; }
  std::size_t distance_failures() const { return distance_failures_; }
  bool ok() const { return euler_failures_ == 0 && ring_tree_vertices_ == 0 && distance_failures_ == 0; }

 private:
  bool check_distances_;
  std::size_t contractions_ = 0;
  std::size_t euler_failures_ = 0;
  std::size_t ring_tree_vertices_ = 0;
  std::size_t distance_checks_ = 0;
  std::size_t distance_failures_ = 0;
};

struct Mismatch {
  std::uint64_t seed = 0;
  std::uint32_t root_index = 0;
  std::uint32_t vertex = 0;
  std::string expected;
  std::string got;
};

struct LevelReport {
  std::size_t level = 0;
  std::size_t nodes = 0;
  std::size_t graph_vertices = 0;
  std::size_t tree_vertices = 0;
  std::size_t max_trees_per_arc = 0;
  /// tree_vertices divided by the normalized vertex count.
  double tree_size_ratio = 0;
};

struct VerifyOptions {
  /// Force the full cross product; otherwise it is used when N * |V| <= 1e6.
  bool exhaustive = false;
  std::size_t samples = 20000;
  std::size_t path_samples = 200;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  /// Run ContractionAuditor; distance auditing only when n <= audit_limit.
  bool audit = false;
  std::size_t audit_limit = 200;
};

struct VerificationReport {
  std::size_t instances = 0;
  std::size_t pairs_checked = 0;
  bool exhaustive = true;
  std::vector<Mismatch> mismatches;
  std::vector<LevelReport> levels;
  std::size_t max_trees_per_arc = 0;
  /// Largest per-level tree size ratio seen; the measured constant c.
  double tree_size_constant = 0;
  std::size_t max_query_depth = 0;
  std::size_t depth_violations = 0;
  std::size_t paths_checked = 0;
  std::size_t path_failures = 0;
  /// Largest (record lookups - path length) seen during path expansion.
  long max_lookup_excess = 0;
  std::size_t audit_failures = 0;
  std::vector<std::string> notes;

  bool pass() const;
  void merge(const VerificationReport& other);
  nlohmann::json to_json() const;
  std::string to_text() const;
};

VerificationReport verify(const Instance& instance, const VerifyOptions& options);
/// Verification against an oracle built elsewhere (e.g. loaded from disk).
VerificationReport verify_oracle(const MsspOracle& oracle, std::uint64_t seed, const VerifyOptions& options);

/// Checks one reported path: contiguous in the input graph from b_j to
/// `vertex`, with base weight equal to `expected`. Returns an empty string
/// on success, otherwise the reason.
std::string check_path(const NormalizedInstance& norm, std::uint32_t root_index, std::uint32_t vertex,
                       const std::vector<ArcId>& path, LexWeight::Base expected);

}  // namespace mssp
