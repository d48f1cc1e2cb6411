#include "mssp/oracle.hpp"

#include <algorithm>
#include <bit>
#include <string>
#include <utility>

#include "mssp/error.hpp"

namespace mssp {

const RootTable* RecursionNode::table_for(std::uint32_t root_index) const {
  for (const auto& t : tables) {
    if (t.root_index == root_index) return &t;
  }
  return nullptr;
}

class OracleBuilder {
 public:
  OracleBuilder(MsspOracle& oracle, const BuildOptions& options) : o_(oracle), options_(options) {}

  void run() {
    EmbeddedDigraph root_graph = o_.norm_.graph;
    o_.lineage_ = LineageTable(root_graph);
    const auto last = static_cast<std::uint32_t>(o_.norm_.ring_count() - 1);
    // Sized up front: process() holds references into these across recursion.
    o_.stats_.levels.resize(o_.depth_bound());
    arc_counts_.resize(o_.depth_bound());
    process(0, last, 0, std::move(root_graph));
    while (!o_.stats_.levels.empty() && o_.stats_.levels.back().nodes == 0) o_.stats_.levels.pop_back();

    auto& stats = o_.stats_;
    for (const auto& node : o_.nodes_) {
      for (const auto& t : node.tables) stats.table_entries += t.dist.size();
    }
    for (const auto& r : o_.records_) stats.record_entries += r.entries.size();
    stats.lineage_versions = o_.lineage_.size();
  }

 private:
  LevelStats& level_stats(std::uint32_t level) {
    if (level >= o_.stats_.levels.size()) throw Error(ErrorKind::Internal, "recursion deeper than its bound");
    if (arc_counts_[level].empty()) arc_counts_[level].assign(o_.norm_.arcs.size(), 0);
    return o_.stats_.levels[level];
  }

  std::uint32_t process(std::uint32_t first, std::uint32_t last, std::uint32_t level, EmbeddedDigraph graph) {
    const auto index = static_cast<std::uint32_t>(o_.nodes_.size());
    o_.nodes_.emplace_back();
    {
      RecursionNode& node = o_.nodes_[index];
      node.first = first;
      node.last = last;
      node.level = level;
      node.vertices.resize(graph.vertex_capacity());
      node.position_of.reserve(graph.vertex_capacity());
      for (VertexId v = 0; v < graph.vertex_capacity(); ++v) {
        node.vertices[v] = graph.label(v);
        node.position_of.emplace(graph.label(v), v);
      }
    }
    const std::uint32_t mid = (first + last) / 2;
    auto local_ring = [&](std::uint32_t k) { return o_.nodes_[index].position_of.at(o_.norm_.ring_roots[k]); };

    std::vector<std::uint32_t> roots{first};
    if (mid != first) roots.push_back(mid);
    if (last != first) roots.push_back(last);
    std::vector<VertexId> ring_locals;
    for (std::uint32_t k = first; k <= last; ++k) ring_locals.push_back(local_ring(k));

    LevelStats& stats = level_stats(level);
    ++stats.nodes;
    stats.graph_vertices += graph.vertex_count();
    stats.graph_slots += graph.slot_count();

    std::vector<SsspTree> trees;
    std::vector<VertexId> excluded;
    for (std::uint32_t k : roots) {
      const VertexId root = local_ring(k);
      excluded.clear();
      for (VertexId r : ring_locals) {
        if (r != root) excluded.push_back(r);
      }
      trees.push_back(sssp_tree(graph, root, excluded));
      const SsspTree& tree = trees.back();
      o_.stats_.sssp_ties += tree.ties;

      RootTable table;
      table.root_index = k;
      table.dist = tree.dist;
      table.parent_lineage.assign(tree.dist.size(), kNone);
      auto& counts = arc_counts_[level];
      for (VertexId v = 0; v < tree.dist.size(); ++v) {
        if (tree.parent_dart[v] == kNone) continue;
        const Arc& arc = *graph.out_arc(tree.parent_dart[v]);
        table.parent_lineage[v] = arc.lineage;
        stats.max_trees_per_arc = std::max<std::size_t>(stats.max_trees_per_arc, ++counts[arc.id]);
      }
      stats.tree_vertices += tree.reached_count();
      o_.nodes_[index].tables.push_back(std::move(table));
    }
    if (options_.observer) options_.observer->on_node(o_.nodes_[index], graph, trees);
    if (last - first <= 1) return index;

    auto tree_of = [&](std::uint32_t k) -> const SsspTree& {
      return trees[static_cast<std::size_t>(std::find(roots.begin(), roots.end(), k) - roots.begin())];
    };
    const std::array<Side, 2> order = options_.right_first ? std::array{Side::Right, Side::Left}
                                                           : std::array{Side::Left, Side::Right};
    for (Side side : order) {
      const std::uint32_t child_first = side == Side::Left ? first : mid;
      const std::uint32_t child_last = side == Side::Left ? mid : last;

      EmbeddedDigraph child = graph;
      for (std::uint32_t k = first; k <= last; ++k) {
        if (k < child_first || k > child_last) child.remove_vertex(local_ring(k));
      }
      const auto selected = select_trees(graph, tree_of(child_first), tree_of(child_last));

      const auto record_index = static_cast<std::uint32_t>(o_.records_.size());
      o_.records_.push_back(ContractionRecord{RecordKey{mid, side}, record_index, {}});
      TreeContractor contractor(child);
      for (const auto& tree : selected) {
        for (VertexId v : tree.vertices) {
          if (o_.norm_.is_ring_root(graph.label(v))) {
            ++o_.stats_.ring_contractions;
            throw Error(ErrorKind::Internal, "contraction reached ring root " + std::to_string(graph.label(v)));
          }
        }
        contractor.contract(tree, o_.records_[record_index], &o_.lineage_);
        ++stats.contracted_trees;
        stats.contracted_vertices += tree.vertices.size();
        if (options_.observer) options_.observer->on_tree_contracted(child, tree, o_.norm_);
      }
      child.compact();
      o_.stats_.perturbation_collisions += child.perturbation_collisions() - graph.perturbation_collisions();
      if (options_.observer) options_.observer->on_child(graph, child, child_first, child_last, o_.norm_);

      const auto s = static_cast<std::size_t>(side);
      o_.nodes_[index].records[s] = record_index;
      const std::uint32_t child_index = process(child_first, child_last, level + 1, std::move(child));
      o_.nodes_[index].children[s] = child_index;
    }
    return index;
  }

  MsspOracle& o_;
  const BuildOptions& options_;
  std::vector<std::vector<std::uint16_t>> arc_counts_;
};

MsspOracle MsspOracle::build(NormalizedInstance norm, const BuildOptions& options) {
  if (norm.ring_count() == 0) throw Error(ErrorKind::BadInput, "normalized instance has no ring");
  MsspOracle oracle;
  oracle.norm_ = std::move(norm);
  OracleBuilder(oracle, options).run();
  return oracle;
}

std::size_t MsspOracle::depth_bound() const {
  const std::size_t n = ring_count();
  return static_cast<std::size_t>(std::bit_width(n - 1)) + 1;
}

const ContractionRecord* MsspOracle::record(std::uint32_t midpoint, Side side) const {
  for (const auto& r : records_) {
    if (r.key == RecordKey{midpoint, side}) return &r;
  }
  return nullptr;
}

void MsspOracle::check_query(std::uint32_t root_index, std::uint32_t vertex) const {
  if (root_index >= ring_count()) {
    throw Error(ErrorKind::BadRootIndex,
                "root index " + std::to_string(root_index) + " outside [0," + std::to_string(ring_count()) + ")");
  }
  if (vertex >= norm_.vertex_count()) throw Error(ErrorKind::BadInput, "unknown vertex " + std::to_string(vertex));
  if (norm_.is_ring_root(vertex)) {
    throw Error(ErrorKind::FaceVertexQuery, "vertex " + std::to_string(vertex) + " is a ring root");
  }
}

LexWeight MsspOracle::query_dist(std::uint32_t root_index, std::uint32_t vertex, QueryTrace* trace) const {
  check_query(root_index, vertex);
  std::uint32_t node_index = 0;
  std::uint32_t v = vertex;
  LexWeight offset(0);
  while (true) {
    const RecursionNode& node = nodes_[node_index];
    if (trace) ++trace->depth;
    if (root_index == node.first || root_index == node.last) {
      if (trace) ++trace->table_steps;
      return node.table_for(root_index)->dist[node.position_of.at(v)] + offset;
    }
    const auto side = static_cast<std::size_t>(root_index <= node.midpoint() ? Side::Left : Side::Right);
    if (trace) ++trace->record_lookups;
    if (const RecordEntry* e = records_[node.records[side]].find(v)) {
      offset += e->offset;
      v = e->root;
    }
    node_index = node.children[side];
  }
}

void MsspOracle::append_tree_path(const ContractionRecord& record, std::uint32_t from_root, std::uint32_t to,
                                  std::vector<ArcId>& out, QueryTrace* trace) const {
  std::vector<std::uint32_t> lineages;
  for (std::uint32_t cur = to; cur != from_root;) {
    if (trace) ++trace->record_lookups;
    const RecordEntry* e = record.find(cur);
    if (!e || e->parent == kNone) throw Error(ErrorKind::Internal, "broken contraction record chain");
    lineages.push_back(e->parent_lineage);
    cur = e->parent;
  }
  for (auto it = lineages.rbegin(); it != lineages.rend(); ++it) expand(*it, out, trace);
}

void MsspOracle::expand(std::uint32_t version, std::vector<ArcId>& out, QueryTrace* trace) const {
  const ArcVersion& ver = lineage_[version];
  if (trace) ++trace->versions_expanded;
  if (ver.prev == kNone) {
    out.push_back(ver.arc);
    return;
  }
  // The arc left lineage_[ver.prev].tail, which was merged into ver.tail.
  append_tree_path(records_[ver.record], ver.tail, lineage_[ver.prev].tail, out, trace);
  expand(ver.prev, out, trace);
}

std::vector<ArcId> MsspOracle::query_normalized_path(std::uint32_t root_index, std::uint32_t vertex,
                                                     QueryTrace* trace) const {
  if (!map_answer(query_dist(root_index, vertex), norm_.big_weight)) {
    throw Error(ErrorKind::Unreachable, "vertex " + std::to_string(vertex) + " is unreachable from face vertex " +
                                            std::to_string(root_index));
  }
  struct Step {
    std::uint32_t record;
    std::uint32_t root;
    std::uint32_t vertex;
  };
  std::vector<Step> chain;
  std::uint32_t node_index = 0;
  std::uint32_t v = vertex;
  while (true) {
    const RecursionNode& node = nodes_[node_index];
    if (trace) ++trace->depth;
    if (root_index == node.first || root_index == node.last) break;
    const auto side = static_cast<std::size_t>(root_index <= node.midpoint() ? Side::Left : Side::Right);
    if (trace) ++trace->record_lookups;
    const std::uint32_t record = node.records[side];
    if (const RecordEntry* e = records_[record].find(v)) {
      chain.push_back(Step{record, e->root, v});
      v = e->root;
    }
    node_index = node.children[side];
  }

  const RecursionNode& node = nodes_[node_index];
  const RootTable& table = *node.table_for(root_index);
  const std::uint32_t ring_root = norm_.ring_roots[root_index];
  std::vector<std::uint32_t> top;
  for (std::uint32_t cur = v; cur != ring_root;) {
    if (trace) ++trace->table_steps;
    const std::uint32_t lin = table.parent_lineage[node.position_of.at(cur)];
    if (lin == kNone) throw Error(ErrorKind::Internal, "broken shortest-path tree");
    top.push_back(lin);
    cur = lineage_[lin].tail;
  }

  std::vector<ArcId> out;
  for (auto it = top.rbegin(); it != top.rend(); ++it) expand(*it, out, trace);
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    append_tree_path(records_[it->record], it->root, it->vertex, out, trace);
  }
  return out;
}

std::vector<ArcId> MsspOracle::query_path(std::uint32_t root_index, std::uint32_t vertex, QueryTrace* trace) const {
  auto path = query_normalized_path(root_index, vertex, trace);
  if (path.empty() || path.front() != norm_.attachment_arcs[root_index]) {
    throw Error(ErrorKind::Internal, "path does not start at the ring attachment");
  }
  path.erase(path.begin());
  for (ArcId a : path) {
    if (a >= norm_.original_arc_count) throw Error(ErrorKind::Internal, "finite path uses an augmentation arc");
  }
  return path;
}

}  // namespace mssp
