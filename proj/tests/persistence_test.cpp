#include <filesystem>
#include <fstream>
#include <sstream>

#include "mssp/harness.hpp"
#include "mssp/persistence.hpp"
#include "support.hpp"

namespace mssp {
namespace {

using test::error_of;

std::string saved(const MsspOracle& oracle) {
  std::ostringstream out;
  save(oracle, out);
  return out.str();
}

MsspOracle loaded(const std::string& bytes) {
  std::istringstream in(bytes);
  return load(in);
}

MsspOracle sample_oracle() {
  const auto inst = gen_random_planar(6, 0.3, 11, 0.3);
  return MsspOracle::build(normalize(inst.graph, inst.face_darts(), 4));
}

TEST(Persistence, RoundTripAnswersIdentically) {
  const auto oracle = sample_oracle();
  const auto copy = loaded(saved(oracle));
  EXPECT_EQ(copy.nodes().size(), oracle.nodes().size());
  EXPECT_EQ(copy.stats().stored_entries(), oracle.stats().stored_entries());
  EXPECT_EQ(copy.normalized().big_weight, oracle.normalized().big_weight);
  for (std::uint32_t j = 0; j < oracle.ring_count(); ++j) {
    for (std::uint32_t v = 0; v < oracle.normalized().original_vertex_count; ++v) {
      ASSERT_EQ(copy.query_dist(j, v), oracle.query_dist(j, v));
      if (map_answer(oracle.query_dist(j, v), oracle.normalized().big_weight)) {
        ASSERT_EQ(copy.query_path(j, v), oracle.query_path(j, v));
      }
    }
  }
  // Saving again gives the same bytes.
  EXPECT_EQ(saved(copy), saved(oracle));
}

TEST(Persistence, SameInputSameBytes) { EXPECT_EQ(saved(sample_oracle()), saved(sample_oracle())); }

TEST(Persistence, FileRoundTrip) {
  const auto oracle = MsspOracle::build([] {
    const auto inst = gen_grid(4, 9, 2);
    return normalize(inst.graph, inst.face_darts(), 2);
  }());
  const auto path = (std::filesystem::temp_directory_path() / "mssp_persistence_test.oracle").string();
  save_file(oracle, path);
  const auto copy = load_file(path);
  std::filesystem::remove(path);
  EXPECT_EQ(copy.query_dist(3, 5), oracle.query_dist(3, 5));
  EXPECT_EQ(error_of([&] { load_file(path); }), ErrorKind::BadInput);
}

TEST(Persistence, TruncatedFileIsCorrupt) {
  const auto bytes = saved(sample_oracle());
  for (std::size_t keep : {std::size_t{0}, std::size_t{10}, bytes.size() / 2, bytes.size() - 1}) {
    EXPECT_EQ(error_of([&] { loaded(bytes.substr(0, keep)); }), ErrorKind::CorruptFile) << keep;
  }
}

TEST(Persistence, FlippedByteIsCorrupt) {
  auto bytes = saved(sample_oracle());
  bytes[bytes.size() / 3] ^= 0x20;
  EXPECT_EQ(error_of([&] { loaded(bytes); }), ErrorKind::CorruptFile);
  auto magic = saved(sample_oracle());
  magic[0] = 'X';
  EXPECT_EQ(error_of([&] { loaded(magic); }), ErrorKind::CorruptFile);
}

TEST(Persistence, OtherFormatVersionIsRejected) {
  auto bytes = saved(sample_oracle());
  bytes[8] = static_cast<char>(kOracleFormatVersion + 1);
  EXPECT_EQ(error_of([&] { loaded(bytes); }), ErrorKind::VersionMismatch);
}

}  // namespace
}  // namespace mssp
