#include <sstream>

#include "mssp/harness.hpp"
#include "support.hpp"

namespace mssp {
namespace {

std::string json_of(const Instance& inst) {
  std::ostringstream out;
  write_graph_json(out, inst.document());
  return out.str();
}

TEST(Generators, GridShapes) {
  const auto one = gen_grid(1, 5, 1);
  EXPECT_EQ(one.graph.vertex_count(), 1u);
  EXPECT_EQ(one.graph.slot_count(), 0u);
  const auto three = gen_grid(3, 5, 1);
  EXPECT_EQ(three.graph.vertex_count(), 9u);
  EXPECT_EQ(three.graph.slot_count(), 12u);
  EXPECT_EQ(face_walks(three.graph).size(), 5u);
  EXPECT_EQ(three.face_darts().size(), 8u);
  EXPECT_EQ(json_of(gen_grid(4, 9, 3)), json_of(gen_grid(4, 9, 3)));
  EXPECT_NE(json_of(gen_grid(4, 9, 3)), json_of(gen_grid(4, 9, 4)));
}

TEST(Generators, DeletionExtremes) {
  EXPECT_EQ(json_of(gen_random_planar(5, 0.0, 9)), json_of(gen_grid(5, 100, 9)));
  const auto tree = gen_random_planar(7, 1.0, 9);
  EXPECT_EQ(tree.graph.slot_count(), tree.graph.vertex_count() - 1);
  EXPECT_TRUE(is_connected(tree.graph));
  EXPECT_EQ(face_walks(tree.graph).size(), 1u);
}

TEST(Generators, OnewayDropsOneDirection) {
  const auto inst = gen_random_planar(6, 0.0, 2, 1.0);
  EXPECT_EQ(inst.graph.arc_count(), inst.graph.slot_count());
}

TEST(Generators, JsonRoundTrip) {
  const auto inst = gen_random_planar(5, 0.3, 6, 0.3);
  std::istringstream in(json_of(inst));
  const auto g = to_graph(parse_graph_json(in));
  EXPECT_EQ(to_document(g).slots.size(), inst.graph.slot_count());
  EXPECT_EQ(face_walks(g), face_walks(inst.graph));
}

TEST(Verify, SmallGridsPassExhaustively) {
  for (std::size_t k : {2, 8}) {
    VerifyOptions opt;
    opt.exhaustive = true;
    opt.audit = true;
    const auto report = verify(gen_grid(k, 100, k), opt);
    EXPECT_TRUE(report.pass()) << report.to_text();
    EXPECT_TRUE(report.exhaustive);
    EXPECT_LE(report.max_trees_per_arc, 6u);
    EXPECT_EQ(report.to_text().substr(0, 4), "PASS");
  }
}

TEST(Verify, UniformWeightsPass) {
  VerifyOptions opt;
  opt.audit = true;
  const auto report = verify(gen_uniform_grid(6, 1), opt);
  EXPECT_TRUE(report.pass()) << report.to_text();
  EXPECT_GT(report.paths_checked, 0u);
}

TEST(Verify, SparsePlanarPasses) {
  VerifyOptions opt;
  opt.audit = true;
  opt.threads = 3;
  const auto report = verify(gen_random_planar(5, 0.2, 7), opt);
  EXPECT_TRUE(report.pass()) << report.to_text();
  EXPECT_TRUE(report.exhaustive);
  EXPECT_EQ(report.to_json()["result"], "PASS");
}

TEST(Verify, SampledModeForLargeInstances) {
  VerifyOptions opt;
  opt.samples = 500;
  opt.path_samples = 20;
  const auto report = verify(gen_grid(80, 100, 1), opt);
  EXPECT_FALSE(report.exhaustive);
  EXPECT_EQ(report.pairs_checked, 500u);
  EXPECT_TRUE(report.pass()) << report.to_text();
}

TEST(CheckPath, DetectsBrokenPaths) {
  const auto inst = gen_grid(2, 1, 1);
  const auto norm = normalize(inst.graph, inst.face_darts(), 1);
  const std::uint32_t j = 0;
  const auto b = norm.face_vertex_of[j];
  EXPECT_EQ(check_path(norm, j, b, {}, 0), "");
  EXPECT_NE(check_path(norm, j, b, {}, 1), "");
  // Arc 0 is 0 -> 1; arc 0 twice is not contiguous.
  ASSERT_EQ(b, 0u);
  EXPECT_EQ(check_path(norm, j, 1, {0}, 1), "");
  EXPECT_NE(check_path(norm, j, 1, {0, 0}, 2), "");
  EXPECT_NE(check_path(norm, j, 3, {0}, 1), "");
}

TEST(ContractionAuditor, CountsEveryContraction) {
  const auto inst = gen_random_planar(7, 0.1, 3, 0.2);
  ContractionAuditor auditor(true);
  const auto oracle =
      MsspOracle::build(normalize(inst.graph, inst.face_darts(), 3), BuildOptions{.observer = &auditor});
  std::size_t contracted = 0;
  for (const auto& level : oracle.stats().levels) contracted += level.contracted_trees;
  EXPECT_EQ(auditor.contractions(), contracted);
  EXPECT_GT(auditor.distance_checks(), 0u);
  EXPECT_TRUE(auditor.ok());
  EXPECT_EQ(oracle.stats().ring_contractions, 0u);
}

}  // namespace
}  // namespace mssp
