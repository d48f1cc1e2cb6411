#include <random>

#include "mssp/harness.hpp"
#include "mssp/oracle.hpp"
#include "support.hpp"

namespace mssp {
namespace {

using test::error_of;

MsspOracle oracle_for(const Instance& inst, std::uint64_t seed = 1, BuildOptions options = {}) {
  return MsspOracle::build(normalize(inst.graph, inst.face_darts(), seed), options);
}

struct Aggregate {
  std::uint64_t distance_sum = 0;
  std::size_t unreachable = 0;
};

Aggregate aggregate(const MsspOracle& oracle) {
  const auto& norm = oracle.normalized();
  Aggregate out;
  for (std::uint32_t j = 0; j < oracle.ring_count(); ++j) {
    for (std::uint32_t v = 0; v < norm.original_vertex_count; ++v) {
      const auto d = map_answer(oracle.query_dist(j, v), norm.big_weight);
      if (d) {
        out.distance_sum += *d;
      } else {
        ++out.unreachable;
      }
    }
  }
  return out;
}

TEST(Oracle, SingleVertexHasOneNode) {
  const auto oracle = oracle_for(gen_grid(1, 1, 1));
  EXPECT_EQ(oracle.nodes().size(), 1u);
  EXPECT_EQ(oracle.query_dist(0, 0).base(), 0u);
  EXPECT_TRUE(oracle.query_path(0, 0).empty());
}

TEST(Oracle, TwoRingRootsNeedNoRecursion) {
  const auto g = test::drawn_graph({{0, 0}, {1, 0}}, {{0, 1, 4, 6}});
  const auto oracle = MsspOracle::build(normalize(g, face_walks(g)[0], 1));
  ASSERT_EQ(oracle.ring_count(), 2u);
  EXPECT_EQ(oracle.nodes().size(), 1u);
  EXPECT_TRUE(oracle.records().empty());
  const auto& b = oracle.normalized().face_vertex_of;
  EXPECT_EQ(oracle.query_dist(0, b[1]).base(), b[0] == 0 ? 4u : 6u);
  EXPECT_EQ(oracle.query_dist(1, b[0]).base(), b[0] == 0 ? 6u : 4u);
}

TEST(Oracle, TwoByTwoGrid) {
  const auto oracle = oracle_for(gen_grid(2, 1, 1));
  EXPECT_EQ(oracle.query_dist(0, 3).base(), 2u);
  EXPECT_EQ(oracle.query_path(0, 3).size(), 2u);
  for (std::uint32_t j = 0; j < 4; ++j) {
    EXPECT_EQ(oracle.query_dist(j, oracle.normalized().face_vertex_of[j]).base(), 0u);
  }
}

TEST(Oracle, ThreeByThreeRecursionShape) {
  const auto oracle = oracle_for(gen_grid(3, 9, 5), 5);
  ASSERT_EQ(oracle.ring_count(), 8u);
  EXPECT_EQ(oracle.depth_bound(), 4u);
  EXPECT_EQ(oracle.stats().levels.size(), 4u);
  // Intervals of length one are leaves; all others have two children.
  for (const auto& node : oracle.nodes()) {
    EXPECT_EQ(node.is_leaf(), node.children[0] == kNone);
    if (!node.is_leaf()) EXPECT_NE(node.children[1], kNone);
  }
}

TEST(Oracle, StoredTablesMatchReference) {
  for (std::uint64_t seed : {5, 6}) {
    const auto oracle = oracle_for(gen_grid(3, 9, seed), seed);
    const auto& norm = oracle.normalized();
    std::vector<std::vector<LexWeight>> ref;
    for (std::uint32_t j = 0; j < oracle.ring_count(); ++j) ref.push_back(brute_distances(norm, j));
    for (const auto& node : oracle.nodes()) {
      for (const auto& table : node.tables) {
        ASSERT_EQ(table.dist.size(), node.vertices.size());
        for (std::size_t p = 0; p < node.vertices.size(); ++p) {
          const auto v = node.vertices[p];
          if (norm.is_ring_root(v) && v != norm.ring_roots[table.root_index]) continue;
          EXPECT_EQ(table.dist[p], ref[table.root_index][v])
              << "node [" << node.first << "," << node.last << "] root " << table.root_index << " vertex " << v;
        }
      }
    }
  }
}

TEST(Oracle, UnreachableMapsAboveBigWeight) {
  // 0 -> 1 only: 0 cannot be reached from 1.
  const auto g = test::drawn_graph({{0, 0}, {1, 0}}, {{0, 1, 3, std::nullopt}});
  const auto oracle = MsspOracle::build(normalize(g, face_walks(g)[0], 1));
  const auto& norm = oracle.normalized();
  const std::uint32_t j1 = norm.face_vertex_of[0] == 1 ? 0 : 1;
  EXPECT_GE(oracle.query_dist(j1, 0).base(), norm.big_weight);
  EXPECT_EQ(map_answer(oracle.query_dist(j1, 0), norm.big_weight), std::nullopt);
  EXPECT_EQ(error_of([&] { oracle.query_path(j1, 0); }), ErrorKind::Unreachable);
  EXPECT_EQ(map_answer(oracle.query_dist(1 - j1, 1), norm.big_weight), 3u);
}

TEST(Oracle, RejectsBadQueries) {
  const auto oracle = oracle_for(gen_grid(3, 9, 1));
  EXPECT_EQ(error_of([&] { oracle.query_dist(8, 0); }), ErrorKind::BadRootIndex);
  EXPECT_EQ(error_of([&] { oracle.query_dist(0, 9); }), ErrorKind::FaceVertexQuery);
  EXPECT_EQ(error_of([&] { oracle.query_dist(0, 1000); }), ErrorKind::BadInput);
}

struct FrozenCase {
  const char* name;
  Instance (*make)();
  std::uint64_t distance_sum;
  std::size_t unreachable;
  std::vector<VertexId> boundary;
};

// Aggregates from an independent networkx computation over the same graphs.
const FrozenCase kFrozen[] = {
    {"grid2", [] { return gen_grid(2, 1, 1); }, 16, 0, {0, 1, 3, 2}},
    {"grid3_seed5", [] { return gen_grid(3, 100, 5); }, 6323, 0, {0, 1, 2, 5, 8, 7, 6, 3}},
    {"grid6_seed42",
     [] { return gen_grid(6, 100, 42); },
     112154,
     0,
     {0, 1, 2, 3, 4, 5, 11, 17, 23, 29, 35, 34, 33, 32, 31, 30, 24, 18, 12, 6}},
    {"planar5", [] { return gen_random_planar(5, 0.2, 7); }, 113935, 0, {}},
    {"planar6_oneway", [] { return gen_random_planar(6, 0.3, 11, 0.3); }, 135765, 566, {}},
};

class FrozenAggregates : public ::testing::TestWithParam<FrozenCase> {};

TEST_P(FrozenAggregates, MatchIndependentDijkstra) {
  const auto& c = GetParam();
  const Instance inst = c.make();
  const auto oracle = oracle_for(inst, 3);
  if (!c.boundary.empty()) EXPECT_EQ(oracle.normalized().face_vertex_of, c.boundary);
  const auto got = aggregate(oracle);
  EXPECT_EQ(got.distance_sum, c.distance_sum);
  EXPECT_EQ(got.unreachable, c.unreachable);
}

INSTANTIATE_TEST_SUITE_P(Instances, FrozenAggregates, ::testing::ValuesIn(kFrozen),
                         [](const auto& info) { return std::string(info.param.name); });

TEST(Oracle, OnewayPlanarHasThirtyFourRingRoots) {
  EXPECT_EQ(oracle_for(gen_random_planar(6, 0.3, 11, 0.3)).ring_count(), 34u);
}

class OracleProperties : public ::testing::TestWithParam<int> {};

TEST_P(OracleProperties, PathsAreShortestAndWeightsAccumulate) {
  const auto seed = static_cast<std::uint64_t>(GetParam());
  const Instance inst = seed % 2 ? gen_grid(3, 20, seed) : gen_random_planar(5, 0.3, seed, 0.3, 20);
  const auto oracle = oracle_for(inst, seed);
  const auto& norm = oracle.normalized();
  std::mt19937_64 rng(seed);
  for (int k = 0; k < 100; ++k) {
    const auto j = static_cast<std::uint32_t>(rng() % oracle.ring_count());
    const auto v = static_cast<std::uint32_t>(rng() % norm.original_vertex_count);
    const LexWeight d = oracle.query_dist(j, v);
    const auto answer = map_answer(d, norm.big_weight);
    if (!answer) continue;
    const auto normalized_path = oracle.query_normalized_path(j, v);
    ASSERT_FALSE(normalized_path.empty());
    EXPECT_EQ(normalized_path.front(), norm.attachment_arcs[j]);
    LexWeight sum(0);
    for (ArcId a : normalized_path) sum = sum + norm.arcs[a].weight;
    EXPECT_EQ(sum, d) << "root " << j << " vertex " << v;
    EXPECT_EQ(check_path(norm, j, v, oracle.query_path(j, v), *answer), "");
  }
}

TEST_P(OracleProperties, BuildOrderDoesNotChangeAnswers) {
  const auto seed = static_cast<std::uint64_t>(GetParam());
  const Instance inst = gen_random_planar(6, 0.2, seed, 0.2);
  const auto left = oracle_for(inst, seed);
  const auto right = oracle_for(inst, seed, BuildOptions{.right_first = true});
  EXPECT_EQ(left.stats().table_entries, right.stats().table_entries);
  EXPECT_EQ(left.stats().record_entries, right.stats().record_entries);
  for (std::uint32_t j = 0; j < left.ring_count(); ++j) {
    for (std::uint32_t v = 0; v < left.normalized().original_vertex_count; ++v) {
      ASSERT_EQ(left.query_dist(j, v), right.query_dist(j, v));
    }
  }
}

TEST_P(OracleProperties, QueriesStayWithinDepthBound) {
  const auto seed = static_cast<std::uint64_t>(GetParam());
  const auto oracle = oracle_for(gen_grid(5 + seed % 3, 50, seed), seed);
  const auto ref0 = brute_distances(oracle.normalized(), 0);
  for (std::uint32_t j = 0; j < oracle.ring_count(); ++j) {
    for (std::uint32_t v = 0; v < oracle.normalized().original_vertex_count; ++v) {
      QueryTrace trace;
      const auto d = oracle.query_dist(j, v, &trace);
      EXPECT_LE(trace.depth, oracle.depth_bound());
      if (j == 0) EXPECT_EQ(d, ref0[v]);
    }
  }
}

TEST_P(OracleProperties, RecordOffsetsAccumulateAlongDescent) {
  const auto seed = static_cast<std::uint64_t>(GetParam());
  const auto oracle = oracle_for(gen_random_planar(6, 0.2, seed, 0.3, 30), seed);
  std::size_t checked = 0;
  for (const auto& node : oracle.nodes()) {
    for (int side = 0; side < 2; ++side) {
      if (node.records[side] == kNone) continue;
      const auto& record = oracle.records()[node.records[side]];
      const std::uint32_t lo = side == 0 ? node.first : node.midpoint();
      const std::uint32_t hi = side == 0 ? node.midpoint() : node.last;
      for (const auto& [u, entry] : record.entries) {
        for (std::uint32_t j = lo; j <= hi; ++j) {
          ASSERT_EQ(oracle.query_dist(j, u), oracle.query_dist(j, entry.root) + entry.offset)
              << "root " << j << " vertex " << u;
          ++checked;
        }
      }
    }
  }
  EXPECT_GT(checked, 0u);
}

TEST(Oracle, RebuildIsDeterministic) {
  const auto inst = gen_random_planar(7, 0.3, 5, 0.3);
  const auto a = oracle_for(inst, 9);
  const auto b = oracle_for(inst, 9);
  ASSERT_EQ(a.nodes().size(), b.nodes().size());
  for (std::size_t k = 0; k < a.nodes().size(); ++k) {
    ASSERT_EQ(a.nodes()[k].vertices, b.nodes()[k].vertices);
    ASSERT_EQ(a.nodes()[k].tables.size(), b.nodes()[k].tables.size());
    for (std::size_t t = 0; t < a.nodes()[k].tables.size(); ++t) {
      ASSERT_EQ(a.nodes()[k].tables[t].dist, b.nodes()[k].tables[t].dist);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, OracleProperties, ::testing::Range(1, 9));

}  // namespace
}  // namespace mssp
