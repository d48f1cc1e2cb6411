#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mssp/embedded_graph.hpp"
#include "mssp/lex_weight.hpp"

namespace mssp {

struct ArcEnds {
  VertexId tail = kNone;
  VertexId head = kNone;
  LexWeight weight;
};

/// Input graph after the ring construction, strong-connectivity augmentation
/// and weight perturbation. Original vertices keep their ids 0..n-1; ring
/// roots are n..n+N-1 and original arcs keep ids 0..m-1.
struct NormalizedInstance {
  EmbeddedDigraph graph;
  std::vector<VertexId> ring_roots;
  std::vector<VertexId> face_vertex_of;
  /// Arc id of the zero-base attachment arc (ring_roots[i], face_vertex_of[i]).
  std::vector<ArcId> attachment_arcs;
  /// Per arc id: endpoints and weight in the normalized graph.
  std::vector<ArcEnds> arcs;
  LexWeight::Base big_weight = 1;
  std::uint64_t seed = 0;
  std::size_t original_vertex_count = 0;
  std::size_t original_arc_count = 0;

  std::size_t ring_count() const { return ring_roots.size(); }
  bool is_ring_root(VertexId v) const {
    return v >= original_vertex_count && v < original_vertex_count + ring_roots.size();
  }
  std::size_t vertex_count() const { return original_vertex_count + ring_roots.size(); }
};

/// `face` must be one of face_walks(g), or empty when g is a single vertex.
/// `g` must not contain dead vertices.
NormalizedInstance normalize(const EmbeddedDigraph& g, std::span<const DartId> face, std::uint64_t seed);

/// Base distance if it is below `big_weight`; nullopt means unreachable in
/// the original graph.
std::optional<LexWeight::Base> map_answer(const LexWeight& d, LexWeight::Base big_weight);

}  // namespace mssp
