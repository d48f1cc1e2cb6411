#include "mssp/harness.hpp"
#include "mssp/sssp.hpp"
#include "support.hpp"

namespace mssp {
namespace {

using test::error_of;

std::vector<VertexId> other_ring_roots(const NormalizedInstance& norm, std::uint32_t j) {
  std::vector<VertexId> out;
  for (std::uint32_t k = 0; k < norm.ring_count(); ++k) {
    if (k != j) out.push_back(norm.ring_roots[k]);
  }
  return out;
}

/// Parent darts recovered from reference distances: the unique tight arc.
std::vector<DartId> tight_parents(const EmbeddedDigraph& g, const std::vector<LexWeight>& dist,
                                  const std::vector<VertexId>& excluded) {
  std::vector<DartId> parent(g.vertex_capacity(), kNone);
  std::vector<std::uint8_t> blocked(g.vertex_capacity(), 0);
  for (auto x : excluded) blocked[x] = 1;
  for (SlotId s = 0; s < g.slot_capacity(); ++s) {
    if (!g.slot_alive(s)) continue;
    for (unsigned e = 0; e < 2; ++e) {
      const DartId d = make_dart(s, e);
      const auto& arc = g.out_arc(d);
      const VertexId u = g.dart_vertex(d), v = g.dart_target(d);
      if (!arc || blocked[u] || blocked[v] || dist[u].is_infinite() || arc->weight.is_infinite()) continue;
      if (dist[u] + arc->weight == dist[v]) {
        EXPECT_EQ(parent[v], kNone) << "two tight arcs into " << v;
        parent[v] = d;
      }
    }
  }
  return parent;
}

TEST(SsspTree, SingleArc) {
  const std::vector<SlotSpec> slots{{0, 1, 0, 0, 3, std::nullopt}};
  const auto g = build_graph(2, slots);
  const auto t = sssp_tree(g, 0, {});
  EXPECT_EQ(t.dist[1], LexWeight(3));
  EXPECT_EQ(t.parent_dart[1], make_dart(0, 0));
  EXPECT_EQ(t.parent[1], 0u);
  EXPECT_EQ(t.parent_dart[0], kNone);
}

TEST(SsspTree, TwoByTwoNormalizedGrid) {
  const auto inst = gen_grid(2, 1, 1);
  const auto norm = normalize(inst.graph, inst.face_darts(), 1);
  const auto t = sssp_tree(norm.graph, norm.ring_roots[0], other_ring_roots(norm, 0));
  EXPECT_EQ(t.dist[3].base(), 2u);
  EXPECT_EQ(t.dist[0].base(), 0u);
  EXPECT_EQ(t.reached_count(), 5u);
}

TEST(SsspTree, RootWithOnlyRingArcsFails) {
  const auto inst = gen_grid(2, 1, 1);
  auto norm = normalize(inst.graph, inst.face_darts(), 1);
  auto& g = norm.graph;
  for (DartId d : g.rotation(norm.ring_roots[0])) {
    if (g.out_arc(d) && !g.out_arc(d)->weight.is_infinite()) {
      g.remove_out_arc(d);
      break;
    }
  }
  const auto excluded = other_ring_roots(norm, 0);
  EXPECT_EQ(error_of([&] { sssp_tree(g, norm.ring_roots[0], excluded); }), ErrorKind::UnreachableVertex);
}

TEST(SharedForest, IdenticalTreesShareEverything) {
  const auto inst = gen_grid(3, 9, 3);
  const auto norm = normalize(inst.graph, inst.face_darts(), 3);
  const auto t = sssp_tree(norm.graph, norm.ring_roots[2], other_ring_roots(norm, 2));
  const auto f = shared_forest(t, t);
  EXPECT_EQ(f.roots, std::vector<VertexId>{norm.ring_roots[2]});
  EXPECT_EQ(f.parent_dart, t.parent_dart);
}

TEST(SharedForest, DisjointParentsGiveEmptyForest) {
  // Hand-made trees over the triangle: 0 -> 1 -> 2 against 0 -> 2 -> 1.
  const auto g = test::triangle();
  SsspTree a, b;
  a.parent_dart = {kNone, make_dart(0, 0), make_dart(1, 0)};
  a.parent = {kNone, 0, 1};
  b.parent_dart = {kNone, make_dart(1, 1), make_dart(2, 1)};
  b.parent = {kNone, 2, 0};
  const auto f = shared_forest(a, b);
  EXPECT_TRUE(f.roots.empty());
  EXPECT_TRUE(f.child_list.empty());
}

TEST(SharedForest, MatchesIntersectionOfReferenceTrees) {
  const auto inst = gen_grid(3, 9, 8);
  const auto norm = normalize(inst.graph, inst.face_darts(), 8);
  const auto& g = norm.graph;
  // Ring roots 0 and 4 sit on opposite sides of the grid.
  const std::uint32_t j1 = 0, j2 = 4;
  const auto t1 = sssp_tree(g, norm.ring_roots[j1], other_ring_roots(norm, j1));
  const auto t2 = sssp_tree(g, norm.ring_roots[j2], other_ring_roots(norm, j2));
  const auto p1 = tight_parents(g, brute_distances(norm, j1), other_ring_roots(norm, j1));
  const auto p2 = tight_parents(g, brute_distances(norm, j2), other_ring_roots(norm, j2));
  const auto f = shared_forest(t1, t2);
  std::size_t shared = 0;
  for (VertexId v = 0; v < g.vertex_capacity(); ++v) {
    const DartId expected = p1[v] != kNone && p1[v] == p2[v] ? p1[v] : kNone;
    EXPECT_EQ(f.parent_dart[v], expected) << "vertex " << v;
    shared += expected != kNone;
  }
  EXPECT_GT(shared, 0u);
  EXPECT_LT(shared, norm.original_vertex_count);
}

class SsspProperties : public ::testing::TestWithParam<int> {};

TEST_P(SsspProperties, MatchReferenceDijkstra) {
  const auto seed = static_cast<std::uint64_t>(GetParam());
  const auto inst = gen_random_planar(7, 0.25, seed, 0.3, 20);
  const auto norm = normalize(inst.graph, inst.face_darts(), seed);
  const auto& g = norm.graph;
  for (std::uint32_t j = 0; j < norm.ring_count(); ++j) {
    const auto excluded = other_ring_roots(norm, j);
    const auto t = sssp_tree(g, norm.ring_roots[j], excluded);
    const auto ref = brute_distances(norm, j);
    for (VertexId v = 0; v < g.vertex_capacity(); ++v) ASSERT_EQ(t.dist[v], ref[v]);
    EXPECT_EQ(t.parent_dart, tight_parents(g, ref, excluded));
    for (VertexId v = 0; v < g.vertex_capacity(); ++v) {
      if (t.parent_dart[v] == kNone) continue;
      EXPECT_EQ(t.dist[v], t.dist[t.parent[v]] + g.out_arc(t.parent_dart[v])->weight);
      EXPECT_LE(t.dist[t.parent[v]], t.dist[v]);
    }
    for (VertexId r : excluded) EXPECT_FALSE(t.reached(r));
  }
}

TEST_P(SsspProperties, SharedForestIsAForest) {
  const auto seed = static_cast<std::uint64_t>(GetParam());
  const auto inst = gen_random_planar(7, 0.1, seed);
  const auto norm = normalize(inst.graph, inst.face_darts(), seed);
  const std::uint32_t j2 = static_cast<std::uint32_t>(norm.ring_count() / 2);
  const auto t1 = sssp_tree(norm.graph, norm.ring_roots[0], other_ring_roots(norm, 0));
  const auto t2 = sssp_tree(norm.graph, norm.ring_roots[j2], other_ring_roots(norm, j2));
  const auto f = shared_forest(t1, t2);
  const std::size_t n = f.parent_dart.size();
  std::size_t visited = 0;
  std::vector<VertexId> stack(f.roots.begin(), f.roots.end());
  std::vector<std::uint8_t> seen(n, 0);
  while (!stack.empty()) {
    const VertexId v = stack.back();
    stack.pop_back();
    ASSERT_FALSE(seen[v]) << "cycle or shared child at " << v;
    seen[v] = 1;
    ++visited;
    for (VertexId c : f.children(v)) stack.push_back(c);
  }
  std::size_t in_forest = f.roots.size();
  for (auto d : f.parent_dart) in_forest += d != kNone;
  EXPECT_EQ(visited, in_forest);
}

INSTANTIATE_TEST_SUITE_P(Seeds, SsspProperties, ::testing::Range(1, 11));

}  // namespace
}  // namespace mssp
