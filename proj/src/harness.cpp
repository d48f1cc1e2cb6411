#include "mssp/harness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>
#include <numeric>
#include <queue>
#include <random>
#include <sstream>
#include <thread>

#include "mssp/error.hpp"

namespace mssp {

namespace {

using HeapEntry = std::pair<LexWeight, std::uint32_t>;
using MinHeap = std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<>>;

struct Csr {
  std::vector<std::uint32_t> offsets;
  std::vector<std::uint32_t> heads;
  std::vector<LexWeight> weights;
};

Csr make_csr(std::size_t n, const std::vector<std::array<std::uint32_t, 2>>& ends, const std::vector<LexWeight>& w) {
  Csr c;
  c.offsets.assign(n + 1, 0);
  for (const auto& e : ends) ++c.offsets[e[0] + 1];
  for (std::size_t v = 0; v < n; ++v) c.offsets[v + 1] += c.offsets[v];
  c.heads.resize(ends.size());
  c.weights.resize(ends.size());
  std::vector<std::uint32_t> fill(c.offsets.begin(), c.offsets.end() - 1);
  for (std::size_t a = 0; a < ends.size(); ++a) {
    const auto k = fill[ends[a][0]]++;
    c.heads[k] = ends[a][1];
    c.weights[k] = w[a];
  }
  return c;
}

std::vector<LexWeight> dijkstra(const Csr& c, std::uint32_t source, const std::vector<std::uint8_t>& blocked) {
  const std::size_t n = c.offsets.size() - 1;
  std::vector<LexWeight> dist(n, LexWeight::infinity());
  MinHeap heap;
  dist[source] = LexWeight(0);
  heap.emplace(dist[source], source);
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (d != dist[v]) continue;
    for (auto k = c.offsets[v]; k < c.offsets[v + 1]; ++k) {
      const auto x = c.heads[k];
      if (blocked[x] || c.weights[k].is_infinite()) continue;
      const LexWeight nd = d + c.weights[k];
      if (nd < dist[x]) {
        dist[x] = nd;
        heap.emplace(nd, x);
      }
    }
  }
  return dist;
}

/// Deterministic across standard libraries, unlike the <random> distributions.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) { return rng() % bound; }
double draw_unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t ceil_log2(std::size_t n) { return n <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(n - 1)); }

struct GridSlots {
  std::vector<WeightedSlot> slots;
  std::vector<Point> coordinates;
};

GridSlots grid_slots(std::size_t k, std::int64_t max_weight, std::uint64_t seed, bool uniform) {
  if (k == 0) throw Error(ErrorKind::BadInput, "grid size must be positive");
  if (max_weight < 1) throw Error(ErrorKind::BadInput, "max weight must be at least 1");
  GridSlots g;
  std::mt19937_64 rng(seed);
  auto weight = [&] { return uniform ? max_weight : 1 + static_cast<std::int64_t>(draw(rng, max_weight)); };
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < k; ++c) {
      g.coordinates.emplace_back(static_cast<double>(c), r == 0 ? 0.0 : -static_cast<double>(r));
      const auto v = static_cast<VertexId>(r * k + c);
      if (c + 1 < k) {
        const auto w1 = weight();
        g.slots.push_back({v, v + 1, w1, weight()});
      }
      if (r + 1 < k) {
        const auto w1 = weight();
        g.slots.push_back({v, static_cast<VertexId>(v + k), w1, weight()});
      }
    }
  }
  return g;
}

Instance make_instance(std::string name, std::uint64_t seed, std::size_t n, std::vector<WeightedSlot> slots,
                       std::vector<Point> coordinates) {
  GraphDocument doc;
  doc.vertex_count = n;
  doc.slots = std::move(slots);
  doc.coordinates = std::move(coordinates);
  Instance inst;
  inst.name = std::move(name);
  inst.seed = seed;
  inst.graph = to_graph(doc);
  inst.coordinates = std::move(doc.coordinates);
  inst.face = auto_outer_face(inst.graph, inst.coordinates);
  return inst;
}

bool connected_without(std::size_t n, const std::vector<WeightedSlot>& slots, const std::vector<std::uint8_t>& removed,
                       std::size_t skip) {
  std::vector<std::uint32_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = n;
  for (std::size_t s = 0; s < slots.size(); ++s) {
    if (removed[s] || s == skip) continue;
    const auto a = find(slots[s].u);
    const auto b = find(slots[s].v);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

std::string weight_text(const LexWeight& w) { return w.is_infinite() ? "INF" : std::to_string(w.base()); }

}  // namespace

std::vector<LexWeight> brute_distances(const NormalizedInstance& norm, std::uint32_t root_index) {
  if (root_index >= norm.ring_count()) throw Error(ErrorKind::BadRootIndex, "root index out of range");
  const std::size_t n = norm.vertex_count();
  std::vector<std::array<std::uint32_t, 2>> ends;
  std::vector<LexWeight> w;
  ends.reserve(norm.arcs.size());
  w.reserve(norm.arcs.size());
  for (const auto& a : norm.arcs) {
    ends.push_back({a.tail, a.head});
    w.push_back(a.weight);
  }
  std::vector<std::uint8_t> blocked(n, 0);
  for (std::uint32_t k = 0; k < norm.ring_count(); ++k) blocked[norm.ring_roots[k]] = k != root_index;
  return dijkstra(make_csr(n, ends, w), norm.ring_roots[root_index], blocked);
}

std::vector<LexWeight> graph_distances(const EmbeddedDigraph& g, std::uint32_t root_label,
                                       const std::vector<std::uint32_t>& excluded_labels, std::size_t label_bound) {
  std::vector<std::array<std::uint32_t, 2>> ends;
  std::vector<LexWeight> w;
  for (SlotId s = 0; s < g.slot_capacity(); ++s) {
    if (!g.slot_alive(s)) continue;
    const auto& sl = g.slot(s);
    for (unsigned e = 0; e < 2; ++e) {
      if (!sl.arcs[e]) continue;
      ends.push_back({g.label(sl.ends[e]), g.label(sl.ends[e ^ 1u])});
      w.push_back(sl.arcs[e]->weight);
    }
  }
  std::vector<std::uint8_t> blocked(label_bound, 0);
  for (auto x : excluded_labels) {
    if (x != root_label) blocked[x] = 1;
  }
  return dijkstra(make_csr(label_bound, ends, w), root_label, blocked);
}

std::vector<DartId> Instance::face_darts() const {
  const auto faces = face_walks(graph);
  if (face >= faces.size()) throw Error(ErrorKind::FaceNotFound, "face index " + std::to_string(face) + " out of range");
  return faces[face];
}

Instance gen_grid(std::size_t k, std::int64_t max_weight, std::uint64_t seed) {
  auto g = grid_slots(k, max_weight, seed, false);
  return make_instance("grid-" + std::to_string(k), seed, k * k, std::move(g.slots), std::move(g.coordinates));
}

Instance gen_uniform_grid(std::size_t k, std::int64_t weight) {
  auto g = grid_slots(k, weight, 0, true);
  return make_instance("uniform-grid-" + std::to_string(k), 0, k * k, std::move(g.slots), std::move(g.coordinates));
}

Instance gen_random_planar(std::size_t k, double deletion_prob, std::uint64_t seed, double oneway_prob,
                           std::int64_t max_weight) {
  if (deletion_prob < 0 || deletion_prob > 1 || oneway_prob < 0 || oneway_prob > 1) {
    throw Error(ErrorKind::BadInput, "probabilities must lie in [0, 1]");
  }
  auto g = grid_slots(k, max_weight, seed, false);
  const std::size_t n = k * k;
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<std::size_t> order(g.slots.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[draw(rng, i)]);

  const auto target = static_cast<std::size_t>(std::llround(deletion_prob * static_cast<double>(g.slots.size())));
  std::vector<std::uint8_t> removed(g.slots.size(), 0);
  std::size_t count = 0;
  for (std::size_t s : order) {
    if (count == target) break;
    if (connected_without(n, g.slots, removed, s)) {
      removed[s] = 1;
      ++count;
    }
  }
  std::vector<WeightedSlot> kept;
  for (std::size_t s = 0; s < g.slots.size(); ++s) {
    if (removed[s]) continue;
    WeightedSlot sl = g.slots[s];
    if (oneway_prob > 0 && draw_unit(rng) < oneway_prob) {
      if (rng() & 1) {
        sl.w_uv.reset();
      } else {
        sl.w_vu.reset();
      }
    }
    kept.push_back(sl);
  }
  std::ostringstream name;
  name << "planar-" << k << "-p" << deletion_prob;
  if (oneway_prob > 0) name << "-q" << oneway_prob;
  return make_instance(name.str(), seed, n, std::move(kept), std::move(g.coordinates));
}

Instance load_instance(const std::string& path, std::optional<std::size_t> face) {
  const GraphDocument doc = read_graph_file(path);
  Instance inst;
  inst.name = path;
  inst.graph = to_graph(doc);
  inst.coordinates = doc.coordinates;
  inst.face = face ? *face : auto_outer_face(inst.graph, inst.coordinates);
  inst.face_darts();
  return inst;
}

void ContractionAuditor::on_tree_contracted(const EmbeddedDigraph& child, const ContractibleTree& tree,
                                            const NormalizedInstance& norm) {
  ++contractions_;
  if (!is_connected(child) || euler_characteristic(child) != 2) ++euler_failures_;
  for (VertexId v : tree.vertices) ring_tree_vertices_ += norm.is_ring_root(child.label(v));
}

void ContractionAuditor::on_child(const EmbeddedDigraph& parent, const EmbeddedDigraph& child, std::uint32_t first,
                                  std::uint32_t last, const NormalizedInstance& norm) {
  if (!check_distances_) return;
  const std::size_t bound = norm.vertex_count();
  for (std::uint32_t j = first; j <= last; ++j) {
    const std::uint32_t root = norm.ring_roots[j];
    const auto before = graph_distances(parent, root, norm.ring_roots, bound);
    const auto after = graph_distances(child, root, norm.ring_roots, bound);
    for (VertexId v = 0; v < child.vertex_capacity(); ++v) {
      if (!child.vertex_alive(v) || norm.is_ring_root(child.label(v))) continue;
      ++distance_checks_;
      if (before[child.label(v)] != after[child.label(v)]) ++distance_failures_;
    }
  }
}

std::string check_path(const NormalizedInstance& norm, std::uint32_t root_index, std::uint32_t vertex,
                       const std::vector<ArcId>& path, LexWeight::Base expected) {
  std::uint32_t at = norm.face_vertex_of[root_index];
  LexWeight::Base total = 0;
  for (ArcId a : path) {
    if (a >= norm.original_arc_count) return "arc " + std::to_string(a) + " is not an input arc";
    const ArcEnds& e = norm.arcs[a];
    if (e.tail != at) return "arc " + std::to_string(a) + " does not continue the path";
    total += e.weight.base();
    at = e.head;
  }
  if (at != vertex) return "path ends at " + std::to_string(at);
  if (total != expected) return "path weight " + std::to_string(total) + " != " + std::to_string(expected);
  return {};
}

VerificationReport verify_oracle(const MsspOracle& oracle, std::uint64_t seed, const VerifyOptions& options) {
  const NormalizedInstance& norm = oracle.normalized();
  const std::size_t ring = norm.ring_count();
  const std::size_t n = norm.original_vertex_count;
  VerificationReport report;
  report.instances = 1;
  report.exhaustive = options.exhaustive || ring * n <= 1'000'000;

  std::vector<std::uint32_t> roots;
  std::mt19937_64 rng(options.seed);
  if (report.exhaustive || ring <= 32) {
    roots.resize(ring);
    std::iota(roots.begin(), roots.end(), 0u);
  } else {
    for (std::size_t k = 0; k < 32; ++k) roots.push_back(static_cast<std::uint32_t>(draw(rng, ring)));
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  }
  // Sampled mode spreads exactly max(samples, roots) pairs over the roots.
  const std::size_t sampled = std::max(options.samples, roots.size());
  auto per_root = [&](std::size_t r) {
    return report.exhaustive ? n : sampled / roots.size() + (r < sampled % roots.size());
  };

  std::mutex mu;
  auto worker = [&](std::size_t t, std::size_t stride) {
    VerificationReport local;
    std::mt19937_64 local_rng(options.seed + 7919 * (t + 1));
    for (std::size_t r = t; r < roots.size(); r += stride) {
      const std::uint32_t j = roots[r];
      const auto expected = brute_distances(norm, j);
      for (std::size_t q = 0, m = per_root(r); q < m; ++q) {
        const auto u = static_cast<std::uint32_t>(report.exhaustive ? q : draw(local_rng, n));
        QueryTrace trace;
        const LexWeight got = oracle.query_dist(j, u, &trace);
        ++local.pairs_checked;
        local.max_query_depth = std::max(local.max_query_depth, trace.depth);
        if (trace.depth > oracle.depth_bound()) {
          ++local.depth_violations;
          local.mismatches.push_back({seed, j, u, "depth<=" + std::to_string(oracle.depth_bound()),
                                      "depth=" + std::to_string(trace.depth)});
        }
        if (got != expected[u]) local.mismatches.push_back({seed, j, u, weight_text(expected[u]), weight_text(got)});
      }
    }
    std::lock_guard lock(mu);
    report.merge(local);
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(options.threads, roots.size()));
  if (threads == 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker, t, threads);
    for (auto& th : pool) th.join();
  }
  report.instances = 1;
  report.exhaustive = options.exhaustive || ring * n <= 1'000'000;

  const long slack = 2 * static_cast<long>(ceil_log2(ring)) + 2;
  for (std::size_t q = 0; q < options.path_samples; ++q) {
    const auto j = static_cast<std::uint32_t>(draw(rng, ring));
    const auto u = static_cast<std::uint32_t>(draw(rng, n));
    const auto answer = map_answer(oracle.query_dist(j, u), norm.big_weight);
    ++report.paths_checked;
    if (!answer) {
      try {
        oracle.query_path(j, u);
        ++report.path_failures;
        report.mismatches.push_back({seed, j, u, "Unreachable", "path"});
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Unreachable) throw;
      }
      continue;
    }
    QueryTrace trace;
    const auto path = oracle.query_path(j, u, &trace);
    const std::string why = check_path(norm, j, u, path, *answer);
    const long excess = static_cast<long>(trace.record_lookups) - static_cast<long>(path.size() + 1);
    report.max_lookup_excess = std::max(report.max_lookup_excess, excess);
    if (!why.empty() || excess > slack) {
      ++report.path_failures;
      report.mismatches.push_back({seed, j, u, "valid path within " + std::to_string(slack) + " extra lookups",
                                   why.empty() ? "excess " + std::to_string(excess) : why});
    }
  }

  const auto& stats = oracle.stats();
  const double vcount = static_cast<double>(norm.vertex_count());
  for (std::size_t h = 0; h < stats.levels.size(); ++h) {
    const auto& l = stats.levels[h];
    LevelReport lr{h, l.nodes, l.graph_vertices, l.tree_vertices, l.max_trees_per_arc,
                   static_cast<double>(l.tree_vertices) / vcount};
    report.max_trees_per_arc = std::max(report.max_trees_per_arc, l.max_trees_per_arc);
    report.tree_size_constant = std::max(report.tree_size_constant, lr.tree_size_ratio);
    report.levels.push_back(lr);
  }
  if (report.max_trees_per_arc > 6) {
    report.mismatches.push_back({seed, 0, 0, "trees per arc <= 6", std::to_string(report.max_trees_per_arc)});
  }
  if (stats.ring_contractions > 0) {
    ++report.audit_failures;
    report.mismatches.push_back({seed, 0, 0, "no ring root contracted", std::to_string(stats.ring_contractions)});
  }
  return report;
}

VerificationReport verify(const Instance& instance, const VerifyOptions& options) {
  const auto face = instance.face_darts();
  NormalizedInstance norm = normalize(instance.graph, face, options.seed);
  ContractionAuditor auditor(norm.vertex_count() <= options.audit_limit);
  BuildOptions build;
  if (options.audit) build.observer = &auditor;
  const MsspOracle oracle = MsspOracle::build(std::move(norm), build);
  VerificationReport report = verify_oracle(oracle, instance.seed, options);
  if (options.audit) {
    std::ostringstream note;
    note << instance.name << ": " << auditor.contractions() << " contractions audited, "
         << auditor.distance_checks() << " child distances compared";
    report.notes.push_back(note.str());
    const std::size_t failures = auditor.euler_failures() + auditor.ring_tree_vertices() + auditor.distance_failures();
    if (failures > 0) {
      report.audit_failures += failures;
      std::ostringstream got;
      got << "euler " << auditor.euler_failures() << ", ring " << auditor.ring_tree_vertices() << ", distance "
          << auditor.distance_failures();
      report.mismatches.push_back({instance.seed, 0, 0, "contraction invariants", got.str()});
    }
  }
  return report;
}

bool VerificationReport::pass() const { return mismatches.empty(); }

void VerificationReport::merge(const VerificationReport& o) {
  instances += o.instances;
  pairs_checked += o.pairs_checked;
  exhaustive = exhaustive && o.exhaustive;
  mismatches.insert(mismatches.end(), o.mismatches.begin(), o.mismatches.end());
  for (const auto& l : o.levels) {
    if (levels.size() <= l.level) levels.resize(l.level + 1);
    auto& m = levels[l.level];
    m.level = l.level;
    m.nodes += l.nodes;
    m.graph_vertices += l.graph_vertices;
    m.tree_vertices += l.tree_vertices;
    m.max_trees_per_arc = std::max(m.max_trees_per_arc, l.max_trees_per_arc);
    m.tree_size_ratio = std::max(m.tree_size_ratio, l.tree_size_ratio);
  }
  max_trees_per_arc = std::max(max_trees_per_arc, o.max_trees_per_arc);
  tree_size_constant = std::max(tree_size_constant, o.tree_size_constant);
  max_query_depth = std::max(max_query_depth, o.max_query_depth);
  depth_violations += o.depth_violations;
  paths_checked += o.paths_checked;
  path_failures += o.path_failures;
  max_lookup_excess = std::max(max_lookup_excess, o.max_lookup_excess);
  audit_failures += o.audit_failures;
  notes.insert(notes.end(), o.notes.begin(), o.notes.end());
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j;
  j["result"] = pass() ? "PASS" : "FAIL";
  j["instances"] = instances;
  j["pairs_checked"] = pairs_checked;
  j["exhaustive"] = exhaustive;
  auto& mm = j["mismatches"] = nlohmann::json::array();
  for (const auto& m : mismatches) {
    mm.push_back({{"seed", m.seed}, {"j", m.root_index}, {"u", m.vertex}, {"expected", m.expected}, {"got", m.got}});
  }
  auto& lv = j["levels"] = nlohmann::json::array();
  for (const auto& l : levels) {
    lv.push_back({{"level", l.level},
                  {"nodes", l.nodes},
                  {"graph_vertices", l.graph_vertices},
                  {"tree_vertices", l.tree_vertices},
                  {"max_trees_per_arc", l.max_trees_per_arc},
                  {"tree_size_ratio", l.tree_size_ratio}});
  }
  j["max_trees_per_arc"] = max_trees_per_arc;
  j["tree_size_constant"] = tree_size_constant;
  j["max_query_depth"] = max_query_depth;
  j["paths_checked"] = paths_checked;
  j["path_failures"] = path_failures;
  j["max_lookup_excess"] = max_lookup_excess;
  j["audit_failures"] = audit_failures;
  j["notes"] = notes;
  return j;
}

std::string VerificationReport::to_text() const {
  std::ostringstream os;
  os << (pass() ? "PASS" : "FAIL") << "\n";
  os << "instances " << instances << ", pairs " << pairs_checked << (exhaustive ? " (exhaustive)" : " (sampled)")
     << ", mismatches " << mismatches.size() << "\n";
  os << "paths " << paths_checked << ", path failures " << path_failures << ", max lookup excess "
     << max_lookup_excess << "\n";
  os << "max query depth " << max_query_depth << ", max trees per arc " << max_trees_per_arc
     << ", tree size constant c " << tree_size_constant << "\n";
  os << "level  nodes  graph_vertices  tree_vertices  max_trees_per_arc  ratio\n";
  for (const auto& l : levels) {
    os << l.level << "  " << l.nodes << "  " << l.graph_vertices << "  " << l.tree_vertices << "  "
       << l.max_trees_per_arc << "  " << l.tree_size_ratio << "\n";
  }
  for (std::size_t k = 0; k < mismatches.size() && k < 20; ++k) {
    const auto& m = mismatches[k];
    os << "mismatch seed " << m.seed << " j " << m.root_index << " u " << m.vertex << ": expected " << m.expected
       << ", got " << m.got << "\n";
  }
  for (const auto& note : notes) os << note << "\n";
  return os.str();
}

}  // namespace mssp
