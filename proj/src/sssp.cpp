#include "mssp/sssp.hpp"

#include <functional>
#include <queue>
#include <string>
#include <utility>

#include "mssp/error.hpp"

namespace mssp {

std::size_t SsspTree::reached_count() const {
  std::size_t count = 0;
  for (const auto& d : dist) count += !d.is_infinite();
  return count;
}

SsspTree sssp_tree(const EmbeddedDigraph& h, VertexId root, std::span<const VertexId> excluded) {
  const std::size_t n = h.vertex_capacity();
  if (!h.vertex_alive(root)) throw Error(ErrorKind::BadInput, "sssp root is not a live vertex");
  std::vector<std::uint8_t> blocked(n, 0);
  for (VertexId x : excluded) {
    if (x == root) throw Error(ErrorKind::BadInput, "sssp root is excluded");
    if (x < n) blocked[x] = 1;
  }

  SsspTree tree;
  tree.root = root;
  tree.parent_dart.assign(n, kNone);
  tree.parent.assign(n, kNone);
  tree.dist.assign(n, LexWeight::infinity());
  tree.dist[root] = LexWeight(0);

  using Entry = std::pair<LexWeight, VertexId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  heap.emplace(LexWeight(0), root);
  std::vector<std::uint8_t> done(n, 0);
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (done[v]) continue;
    done[v] = 1;
    if (h.degree(v) == 0) continue;
    const DartId first = h.first_dart(v);
    DartId dart = first;
    do {
      const auto& arc = h.out_arc(dart);
      const VertexId x = h.dart_target(dart);
      if (arc && !arc->weight.is_infinite() && !blocked[x] && !done[x]) {
        const LexWeight nd = d + arc->weight;
        if (nd < tree.dist[x]) {
          tree.dist[x] = nd;
          tree.parent_dart[x] = dart;
          tree.parent[x] = v;
          heap.emplace(nd, x);
        } else if (nd == tree.dist[x]) {
          ++tree.ties;
        }
      }
      dart = h.next_cw(dart);
    } while (dart != first);
  }

  for (VertexId v = 0; v < n; ++v) {
    if (h.vertex_alive(v) && !blocked[v] && tree.dist[v].is_infinite()) {
      throw Error(ErrorKind::UnreachableVertex,
                  "vertex " + std::to_string(h.label(v)) + " not reached from " + std::to_string(h.label(root)));
    }
  }
  return tree;
}

SharedForest shared_forest(const SsspTree& t1, const SsspTree& t2) {
  const std::size_t n = t1.parent_dart.size();
  if (t2.parent_dart.size() != n) throw Error(ErrorKind::BadInput, "trees over different graphs");
  SharedForest forest;
  forest.parent_dart.assign(n, kNone);
  forest.child_offsets.assign(n + 1, 0);
  for (VertexId v = 0; v < n; ++v) {
    if (t1.parent_dart[v] != kNone && t1.parent_dart[v] == t2.parent_dart[v]) {
      forest.parent_dart[v] = t1.parent_dart[v];
      ++forest.child_offsets[t1.parent[v] + 1];
    }
  }
  for (std::size_t v = 0; v < n; ++v) forest.child_offsets[v + 1] += forest.child_offsets[v];
  forest.child_list.resize(forest.child_offsets[n]);
  std::vector<std::uint32_t> fill(forest.child_offsets.begin(), forest.child_offsets.end() - 1);
  for (VertexId v = 0; v < n; ++v) {
    if (forest.parent_dart[v] != kNone) forest.child_list[fill[t1.parent[v]]++] = v;
  }
  for (VertexId v = 0; v < n; ++v) {
    if (forest.parent_dart[v] == kNone && forest.child_offsets[v + 1] > forest.child_offsets[v]) {
      forest.roots.push_back(v);
    }
  }
  return forest;
}

}  // namespace mssp
