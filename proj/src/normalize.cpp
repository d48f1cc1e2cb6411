#include "mssp/normalize.hpp"

#include <random>
#include <string>
#include <unordered_set>

#include "mssp/error.hpp"

namespace mssp {

namespace {

void check_face(const EmbeddedDigraph& g, std::span<const DartId> face) {
  if (face.empty()) {
    if (g.vertex_count() == 1 && g.slot_count() == 0) return;
    throw Error(ErrorKind::FaceNotFound, "empty face on a graph with edges");
  }
  for (std::size_t k = 0; k < face.size(); ++k) {
    const DartId d = face[k];
    if (slot_of(d) >= g.slot_capacity() || !g.slot_alive(slot_of(d))) {
      throw Error(ErrorKind::FaceNotFound, "face lists unknown dart " + std::to_string(d));
    }
    if (next_face_dart(g, d) != face[(k + 1) % face.size()]) {
      throw Error(ErrorKind::FaceNotFound, "darts do not follow the face successor at position " + std::to_string(k));
    }
  }
  std::unordered_set<DartId> distinct(face.begin(), face.end());
  if (distinct.size() != face.size()) throw Error(ErrorKind::FaceNotFound, "face walk repeats a dart");
}

}  // namespace

NormalizedInstance normalize(const EmbeddedDigraph& input, std::span<const DartId> face, std::uint64_t seed) {
  if (input.vertex_count() == 0) throw Error(ErrorKind::BadInput, "empty graph");
  if (input.vertex_count() != input.vertex_capacity()) {
    throw Error(ErrorKind::BadInput, "normalize expects a graph without deleted vertices");
  }
  if (!is_connected(input)) throw Error(ErrorKind::DisconnectedInput, "underlying undirected graph is disconnected");
  check_face(input, face);

  NormalizedInstance out;
  out.seed = seed;
  out.original_vertex_count = input.vertex_count();
  EmbeddedDigraph g = input;

  LexWeight::Base max_base = 0;
  ArcId next_id = 0;
  for (SlotId s = 0; s < g.slot_capacity(); ++s) {
    if (!g.slot_alive(s)) continue;
    for (const auto& arc : g.slot(s).arcs) {
      if (!arc) continue;
      if (arc->weight.is_infinite()) throw Error(ErrorKind::BadInput, "input arcs must be finite");
      max_base = std::max(max_base, arc->weight.base());
      next_id = std::max<ArcId>(next_id, arc->id + 1);
    }
  }
  out.original_arc_count = next_id;
  if (next_id != g.arc_count()) throw Error(ErrorKind::BadInput, "input arc ids must be dense");

  // Shortest distances stay below (vertices) * big_weight; keep that finite.
  const auto n = static_cast<unsigned __int128>(input.vertex_count());
  const unsigned __int128 big = n * max_base + 1;
  const auto total_vertices = n + face.size() + 1;
  if (big * total_vertices > LexWeight::kMaxFiniteBase) {
    throw Error(ErrorKind::WeightOverflow, "weights too large for exact distances");
  }
  out.big_weight = static_cast<LexWeight::Base>(big);

  for (SlotId s = 0; s < g.slot_capacity(); ++s) {
    if (!g.slot_alive(s)) continue;
    for (unsigned e = 0; e < 2; ++e) {
      if (g.slot(s).arcs[e]) continue;
      // Reverse arcs share the slot, so the embedding is untouched.
      g.set_out_arc(make_dart(s, e), Arc{LexWeight(out.big_weight), next_id++, kNone});
    }
  }

  // Distinct face vertices in order of first appearance, with the face
  // corner where each is first entered.
  std::vector<VertexId> firsts;
  std::vector<DartId> corners;
  if (face.empty()) {
    firsts.push_back(0);
    corners.push_back(kNone);
  } else {
    std::vector<std::uint8_t> seen(g.vertex_capacity(), 0);
    for (std::size_t k = 0; k < face.size(); ++k) {
      const VertexId x = g.dart_vertex(face[k]);
      if (seen[x]) continue;
      seen[x] = 1;
      firsts.push_back(x);
      corners.push_back(twin(face[(k + face.size() - 1) % face.size()]));
    }
  }

  const std::size_t ring = firsts.size();
  std::vector<DartId> attach_dart(ring);
  for (std::size_t i = 0; i < ring; ++i) {
    const VertexId r = g.add_vertex(static_cast<std::uint32_t>(input.vertex_count() + i));
    out.ring_roots.push_back(r);
    out.face_vertex_of.push_back(firsts[i]);
    out.attachment_arcs.push_back(next_id);
    const SlotId s = g.add_slot(r, firsts[i], kNone, corners[i], Arc{LexWeight(0), next_id++, kNone}, std::nullopt);
    attach_dart[i] = make_dart(s, 0);
  }
  // Rotation at r_i ends up as [attachment, incoming ring, outgoing ring].
  if (ring >= 2) {
    for (std::size_t i = 0; i < ring; ++i) {
      const std::size_t k = (i + 1) % ring;
      g.add_slot(out.ring_roots[i], out.ring_roots[k], kNone, attach_dart[k], Arc{LexWeight::infinity(), next_id++, kNone},
                 std::nullopt);
    }
  }

  // Distinct 63-bit perturbations drawn in arc-id order. mt19937_64 output
  // is fully specified, so the sequence is platform independent.
  std::mt19937_64 rng(seed);
  std::vector<LexWeight::Perturb> perturb(next_id, 0);
  std::unordered_set<std::uint64_t> used;
  used.reserve(next_id * 2);
  for (ArcId a = 0; a < next_id; ++a) {
    std::uint64_t value;
    do {
      value = rng() >> 1;
    } while (!used.insert(value).second);
    perturb[a] = value;
  }

  out.arcs.assign(next_id, ArcEnds{});
  for (SlotId s = 0; s < g.slot_capacity(); ++s) {
    if (!g.slot_alive(s)) continue;
    for (unsigned e = 0; e < 2; ++e) {
      const DartId d = make_dart(s, e);
      if (!g.out_arc(d)) continue;
      Arc& arc = g.mutable_out_arc(d);
      if (!arc.weight.is_infinite()) arc.weight = LexWeight(arc.weight.base(), perturb[arc.id]);
      out.arcs[arc.id] = ArcEnds{g.dart_vertex(d), g.dart_target(d), arc.weight};
    }
  }
  g.compact();
  out.graph = std::move(g);
  return out;
}

std::optional<LexWeight::Base> map_answer(const LexWeight& d, LexWeight::Base big_weight) {
  if (d.is_infinite() || d.base() >= big_weight) return std::nullopt;
  return d.base();
}

}  // namespace mssp
