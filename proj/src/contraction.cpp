#include "mssp/contraction.hpp"

#include <string>
#include <utility>

#include "mssp/error.hpp"

namespace mssp {

LineageTable::LineageTable(EmbeddedDigraph& g) {
  versions_.assign(g.arc_count(), ArcVersion{});
  for (SlotId s = 0; s < g.slot_capacity(); ++s) {
    if (!g.slot_alive(s)) continue;
    for (unsigned e = 0; e < 2; ++e) {
      const DartId d = make_dart(s, e);
      if (!g.out_arc(d)) continue;
      Arc& arc = g.mutable_out_arc(d);
      if (arc.id >= versions_.size()) throw Error(ErrorKind::BadInput, "arc ids are not dense");
      versions_[arc.id] = ArcVersion{arc.id, g.label(g.dart_vertex(d)), kNone, kNone};
      arc.lineage = arc.id;
    }
  }
}

std::uint32_t LineageTable::derive(std::uint32_t prev, std::uint32_t new_tail, std::uint32_t record) {
  const auto id = static_cast<std::uint32_t>(versions_.size());
  versions_.push_back(ArcVersion{versions_[prev].arc, new_tail, prev, record});
  return id;
}

std::vector<ContractibleTree> select_trees(const EmbeddedDigraph& h, const SsspTree& t1, const SsspTree& t2) {
  const SharedForest forest = shared_forest(t1, t2);
  std::vector<ContractibleTree> trees;
  std::vector<std::uint32_t> passing(2 * h.slot_capacity(), kNone);
  std::vector<VertexId> stack;
  for (VertexId s : forest.roots) {
    const DartId pd1 = t1.parent_dart[s];
    const DartId pd2 = t2.parent_dart[s];
    if (pd1 == kNone || pd2 == kNone || pd1 == pd2) continue;
    // Darts strictly clockwise after the t2-parent dart and before the
    // t1-parent dart are exactly the children c with cw order (c, p1, p2).
    const DartId at_p1 = twin(pd1);
    const DartId at_p2 = twin(pd2);
    for (DartId d = h.next_cw(at_p2); d != at_p2 && d != at_p1; d = h.next_cw(d)) passing[d] = s;

    ContractibleTree tree;
    for (VertexId v : forest.children(s)) {
      if (passing[forest.parent_dart[v]] != s) continue;
      if (tree.vertices.empty()) {
        tree.vertices.push_back(s);
        tree.parent_dart.push_back(kNone);
      }
      stack.assign(1, v);
      while (!stack.empty()) {
        const VertexId x = stack.back();
        stack.pop_back();
        tree.vertices.push_back(x);
        tree.parent_dart.push_back(forest.parent_dart[x]);
        for (VertexId c : forest.children(x)) stack.push_back(c);
      }
    }
    if (!tree.vertices.empty()) trees.push_back(std::move(tree));
  }
  return trees;
}

TreeContractor::TreeContractor(EmbeddedDigraph& h)
    : h_(h), stamp_(h.vertex_capacity(), 0), order_(h.vertex_capacity(), 0), offset_(h.vertex_capacity()) {}

void TreeContractor::contract(const ContractibleTree& tree, ContractionRecord& record, LineageTable* lineage) {
  auto not_a_tree = [](const std::string& what) { throw Error(ErrorKind::NotATree, what); };
  if (tree.vertices.empty() || tree.vertices.size() != tree.parent_dart.size()) not_a_tree("malformed tree");
  if (++epoch_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    epoch_ = 1;
  }
  const VertexId s = tree.root();
  for (std::uint32_t k = 0; k < tree.vertices.size(); ++k) {
    const VertexId v = tree.vertices[k];
    if (!h_.vertex_alive(v)) not_a_tree("tree vertex " + std::to_string(v) + " is not live");
    if (stamp_[v] == epoch_) not_a_tree("vertex " + std::to_string(v) + " listed twice");
    stamp_[v] = epoch_;
    order_[v] = k;
  }
  if (tree.parent_dart[0] != kNone) not_a_tree("root has a parent arc");
  offset_[s] = LexWeight(0);
  for (std::uint32_t k = 1; k < tree.vertices.size(); ++k) {
    const VertexId v = tree.vertices[k];
    const DartId pd = tree.parent_dart[k];
    if (pd == kNone || !h_.slot_alive(slot_of(pd)) || h_.dart_target(pd) != v || !h_.out_arc(pd)) {
      not_a_tree("vertex " + std::to_string(v) + " has no valid parent arc");
    }
    const VertexId p = h_.dart_vertex(pd);
    if (stamp_[p] != epoch_ || order_[p] >= k) not_a_tree("parent of " + std::to_string(v) + " is not earlier in the tree");
    offset_[v] = offset_[p] + h_.out_arc(pd)->weight;
  }

  const std::uint32_t root_label = h_.label(s);
  for (std::uint32_t k = 0; k < tree.vertices.size(); ++k) {
    const VertexId v = tree.vertices[k];
    RecordEntry entry{root_label, offset_[v], kNone, kNone};
    if (k > 0) {
      const DartId pd = tree.parent_dart[k];
      entry.parent = h_.label(h_.dart_vertex(pd));
      entry.parent_lineage = h_.out_arc(pd)->lineage;
    }
    record.entries[h_.label(v)] = entry;
  }

  std::vector<DartId> doomed;
  for (std::uint32_t k = 1; k < tree.vertices.size(); ++k) {
    const VertexId u = tree.vertices[k];
    const DartId first = h_.first_dart(u);
    DartId d = first;
    do {
      const VertexId x = h_.dart_target(d);
      if (stamp_[x] != epoch_) {
        if (h_.out_arc(d)) {
          Arc& arc = h_.mutable_out_arc(d);
          arc.weight += offset_[u];
          if (lineage && arc.lineage != kNone) arc.lineage = lineage->derive(arc.lineage, root_label, record.id);
        }
        if (h_.in_arc(d)) doomed.push_back(twin(d));
      }
      d = h_.next_cw(d);
    } while (d != first);
  }
  for (DartId d : doomed) h_.remove_out_arc(d);

  for (std::uint32_t k = 1; k < tree.vertices.size(); ++k) h_.merge_along(slot_of(tree.parent_dart[k]), s);
  h_.cleanup_vertex(s);
}

void contract_tree(EmbeddedDigraph& h, const ContractibleTree& tree, ContractionRecord& record, LineageTable* lineage) {
  TreeContractor(h).contract(tree, record, lineage);
}

}  // namespace mssp
