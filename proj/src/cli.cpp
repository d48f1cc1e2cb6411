#include "mssp/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mssp/error.hpp"
#include "mssp/graph_io.hpp"
#include "mssp/harness.hpp"
#include "mssp/normalize.hpp"
#include "mssp/oracle.hpp"
#include "mssp/persistence.hpp"

namespace mssp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("MSSP_SEED")) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::BadInput, std::string("MSSP_SEED is not an integer: ") + env);
  }
  return 1;
}

std::optional<std::size_t> parse_face(const std::string& face) {
  if (face == "auto-outer") return std::nullopt;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(face, &used);
    if (used == face.size()) return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::BadInput, "--face expects an index or auto-outer, got " + face);
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> read_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::BadInput, "cannot open " + path);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
    std::istringstream ls(line);
    long long j = -1, u = -1;
    std::string rest;
    if (!(ls >> j >> u) || (ls >> rest) || j < 0 || u < 0 || j > 0xfffffffell || u > 0xfffffffell) {
      throw Error(ErrorKind::BadInput, path + ":" + std::to_string(lineno) + ": expected \"j u\"");
    }
    pairs.emplace_back(static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(u));
  }
  return pairs;
}

/// Output stream for -o, stdout otherwise.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error(ErrorKind::BadInput, "cannot write " + path);
      out_ = &file_;
    }
  }
  std::ostream& operator*() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

nlohmann::json recursion_trace(const MsspOracle& oracle) {
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t k = 0; k < oracle.nodes().size(); ++k) {
    const auto& node = oracle.nodes()[k];
    nlohmann::json children = nlohmann::json::array();
    nlohmann::json contracted = nlohmann::json::array();
    for (int s = 0; s < 2; ++s) {
      if (node.children[s] == kNone) continue;
      children.push_back(node.children[s]);
      contracted.push_back(oracle.records()[node.records[s]].entries.size());
    }
    nodes.push_back({{"index", k},
                     {"first", node.first},
                     {"last", node.last},
                     {"level", node.level},
                     {"vertices", node.vertices.size()},
                     {"children", children},
                     {"contracted_vertices", contracted}});
  }
  return {{"ring_count", oracle.ring_count()}, {"nodes", nodes}};
}

void print_build_summary(std::ostream& out, const MsspOracle& oracle, double build_seconds) {
  const auto& norm = oracle.normalized();
  const auto& st = oracle.stats();
  out << "n " << norm.original_vertex_count << "\n"
      << "N " << norm.ring_count() << "\n"
      << "build_seconds " << build_seconds << "\n"
      << "levels " << st.levels.size() << "\n"
      << "table_entries " << st.table_entries << "\n"
      << "record_entries " << st.record_entries << "\n"
      << "lineage_versions " << st.lineage_versions << "\n"
      << "stored_entries " << st.stored_entries() << "\n"
      << "perturbation_collisions " << st.perturbation_collisions << "\n";
}

struct BenchRow {
  std::size_t k = 0;
  std::size_t n = 0;
  std::size_t ring = 0;
  double build_seconds = 0;
  std::size_t stored = 0;
  double normalized_space = 0;
  double mean_query_us = 0;
  std::size_t max_depth = 0;
  std::size_t depth_bound = 0;
};

BenchRow bench_one(std::size_t k, std::uint64_t seed, std::size_t queries) {
  BenchRow row;
  row.k = k;
  const Instance inst = gen_grid(k, 100, seed);
  const auto t0 = Clock::now();
  MsspOracle oracle = MsspOracle::build(normalize(inst.graph, inst.face_darts(), seed));
  row.build_seconds = seconds_since(t0);
  row.n = oracle.normalized().vertex_count();
  row.ring = oracle.ring_count();
  row.stored = oracle.stats().stored_entries();
  row.normalized_space = static_cast<double>(row.stored) / (static_cast<double>(row.n) * std::log2(row.ring));
  row.depth_bound = oracle.depth_bound();

  std::mt19937_64 rng(seed);
  const std::size_t n = oracle.normalized().original_vertex_count;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs(queries);
  for (auto& p : pairs) p = {static_cast<std::uint32_t>(rng() % row.ring), static_cast<std::uint32_t>(rng() % n)};
  std::uint64_t checksum = 0;
  const auto t1 = Clock::now();
  for (const auto& [j, u] : pairs) {
    QueryTrace trace;
    checksum += oracle.query_dist(j, u, &trace).base();
    row.max_depth = std::max(row.max_depth, trace.depth);
  }
  row.mean_query_us = seconds_since(t1) * 1e6 / static_cast<double>(std::max<std::size_t>(queries, 1));
  volatile std::uint64_t keep = checksum;
  (void)keep;
  return row;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multiple-source shortest paths on planar embedded digraphs"};
  app.require_subcommand(1);
  std::optional<std::uint64_t> seed_flag;

  auto* gen = app.add_subcommand("gen", "Generate a grid or random planar graph");
  std::size_t grid_k = 0;
  std::size_t planar_k = 0;
  double deletion = 0.2;
  double oneway = 0.0;
  std::int64_t max_weight = 100;
  std::string gen_out;
  auto* grid_opt = gen->add_option("--grid", grid_k, "k x k grid")->check(CLI::PositiveNumber);
  auto* planar_opt = gen->add_option("--planar", planar_k, "k x k grid with random slot deletions")
                         ->check(CLI::PositiveNumber)
                         ->excludes(grid_opt);
  gen->add_option("--deletion", deletion, "Slot deletion probability for --planar")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--oneway", oneway, "Probability of dropping one direction of a slot")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--max-weight", max_weight, "Weights are uniform in [1, W]")->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed_flag, "Generator seed (default: MSSP_SEED, then 1)");
  gen->add_option("-o,--output", gen_out, "Output graph.json")->required();
  grid_opt->excludes(planar_opt);

  auto* build = app.add_subcommand("build", "Normalize a graph and build the oracle");
  std::string build_in, build_out, face_arg = "auto-outer", trace_out;
  build->add_option("-i,--input", build_in, "Input graph.json")->required();
  build->add_option("--face", face_arg, "Face index into the face walks, or auto-outer");
  build->add_option("--seed", seed_flag, "Perturbation seed (default: MSSP_SEED, then 1)");
  build->add_option("-o,--output", build_out, "Output oracle file")->required();
  build->add_option("--emit-trace", trace_out, "Write the recursion structure as JSON");

  auto* query = app.add_subcommand("query", "Answer distance queries");
  auto* path = app.add_subcommand("path", "Report shortest paths as input arc ids");
  std::string oracle_in, pairs_in, answers_out;
  for (auto* sub : {query, path}) {
    sub->add_option("-i,--input", oracle_in, "Oracle file")->required();
    sub->add_option("--pairs", pairs_in, "File with one \"j u\" pair per line")->required();
    sub->add_option("-o,--output", answers_out, "Output file (default stdout)");
  }

  auto* verify_cmd = app.add_subcommand("verify", "Check the oracle against brute-force Dijkstra");
  std::string verify_in, verify_face = "auto-outer", report_json;
  VerifyOptions vopt;
  verify_cmd->add_option("-i,--input", verify_in, "Input graph.json")->required();
  verify_cmd->add_option("--face", verify_face, "Face index into the face walks, or auto-outer");
  verify_cmd->add_flag("--exhaustive", vopt.exhaustive, "Check every (j, u) pair");
  verify_cmd->add_option("--samples", vopt.samples, "Sampled pairs when not exhaustive");
  verify_cmd->add_option("--paths", vopt.path_samples, "Random path queries to check");
  verify_cmd->add_flag("--audit", vopt.audit, "Audit every contraction while building");
  verify_cmd->add_option("--threads", vopt.threads, "Worker threads")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", seed_flag, "Perturbation seed (default: MSSP_SEED, then 1)");
  verify_cmd->add_option("--json", report_json, "Write the report as JSON");

  auto* bench = app.add_subcommand("bench", "Scaling benchmark on random grids");
  std::vector<std::size_t> sizes{32, 64, 128, 256};
  std::size_t bench_queries = 100000;
  std::string bench_json;
  bench->add_option("--sizes", sizes, "Grid sizes k")->delimiter(',');
  bench->add_option("--queries", bench_queries, "Random distance queries per size");
  bench->add_option("--seed", seed_flag, "Seed (default: MSSP_SEED, then 1)");
  bench->add_option("--json", bench_json, "Write results as JSON");

  std::vector<const char*> argv{"mssp"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: Usage: " << e.what() << "\n";
    return 2;
  }

  try {
    if (gen->parsed()) {
      const std::uint64_t seed = resolve_seed(seed_flag);
      if (grid_k == 0 && planar_k == 0) throw Error(ErrorKind::BadInput, "gen needs --grid or --planar");
      const Instance inst = grid_k > 0 ? gen_grid(grid_k, max_weight, seed)
                                       : gen_random_planar(planar_k, deletion, seed, oneway, max_weight);
      write_graph_file(gen_out, inst.document());
      out << "wrote " << gen_out << ": " << inst.graph.vertex_count() << " vertices, " << inst.graph.slot_count()
          << " slots, " << inst.graph.arc_count() << " arcs\n";
    } else if (build->parsed()) {
      const std::uint64_t seed = resolve_seed(seed_flag);
      const Instance inst = load_instance(build_in, parse_face(face_arg));
      const auto t0 = Clock::now();
      const MsspOracle oracle = MsspOracle::build(normalize(inst.graph, inst.face_darts(), seed));
      const double elapsed = seconds_since(t0);
      save_file(oracle, build_out);
      if (!trace_out.empty()) {
        std::ofstream t(trace_out);
        if (!t) throw Error(ErrorKind::BadInput, "cannot write " + trace_out);
        t << recursion_trace(oracle).dump(1) << "\n";
      }
      print_build_summary(out, oracle, elapsed);
    } else if (query->parsed() || path->parsed()) {
      const auto pairs = read_pairs(pairs_in);
      const MsspOracle oracle = load_file(oracle_in);
      Sink sink(answers_out, out);
      const auto big = oracle.normalized().big_weight;
      for (const auto& [j, u] : pairs) {
        const auto answer = map_answer(oracle.query_dist(j, u), big);
        if (!answer) {
          *sink << "UNREACHABLE\n";
        } else if (query->parsed()) {
          *sink << *answer << "\n";
        } else {
          const auto arcs = oracle.query_path(j, u);
          for (std::size_t k = 0; k < arcs.size(); ++k) *sink << (k ? " " : "") << arcs[k];
          *sink << "\n";
        }
      }
    } else if (verify_cmd->parsed()) {
      vopt.seed = resolve_seed(seed_flag);
      Instance inst = load_instance(verify_in, parse_face(verify_face));
      inst.seed = vopt.seed;
      const VerificationReport report = verify(inst, vopt);
      out << report.to_text();
      if (!report_json.empty()) {
        std::ofstream j(report_json);
        if (!j) throw Error(ErrorKind::BadInput, "cannot write " + report_json);
        j << report.to_json().dump(2) << "\n";
      }
      return report.pass() ? 0 : 1;
    } else if (bench->parsed()) {
      const std::uint64_t seed = resolve_seed(seed_flag);
      nlohmann::json rows = nlohmann::json::array();
      out << "k  n  N  build_s  stored_entries  stored/(n log2 N)  mean_query_us  max_depth  depth_bound\n";
      double lo = 0, hi = 0;
      for (std::size_t k : sizes) {
        if (k < 2) throw Error(ErrorKind::BadInput, "bench sizes must be at least 2");
        const BenchRow r = bench_one(k, seed, bench_queries);
        out << r.k << "  " << r.n << "  " << r.ring << "  " << r.build_seconds << "  " << r.stored << "  "
            << r.normalized_space << "  " << r.mean_query_us << "  " << r.max_depth << "  " << r.depth_bound << "\n";
        lo = rows.empty() ? r.normalized_space : std::min(lo, r.normalized_space);
        hi = rows.empty() ? r.normalized_space : std::max(hi, r.normalized_space);
        rows.push_back({{"k", r.k},
                        {"n", r.n},
                        {"N", r.ring},
                        {"build_seconds", r.build_seconds},
                        {"stored_entries", r.stored},
                        {"stored_per_n_log_n", r.normalized_space},
                        {"mean_query_us", r.mean_query_us},
                        {"max_depth", r.max_depth},
                        {"depth_bound", r.depth_bound}});
      }
      out << "stored/(n log2 N) spread " << (lo > 0 ? hi / lo : 0) << "\n";
      if (!bench_json.empty()) {
        std::ofstream j(bench_json);
        if (!j) throw Error(ErrorKind::BadInput, "cannot write " + bench_json);
        j << nlohmann::json{{"rows", rows}, {"spread", lo > 0 ? hi / lo : 0}}.dump(2) << "\n";
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: Internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace mssp
