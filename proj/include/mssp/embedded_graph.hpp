#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mssp/lex_weight.hpp"

namespace mssp {

/// Local vertex index inside one graph value. Contraction and compaction
/// renumber these; `label()` carries the id that stays stable.
using VertexId = std::uint32_t;
using SlotId = std::uint32_t;
/// A dart is one end of an edge slot, encoded as 2 * slot + end.
using DartId = std::uint32_t;
/// Stable identifier of an arc of the input (or normalized) graph.
using ArcId = std::uint32_t;

inline constexpr std::uint32_t kNone = 0xffffffffu;

constexpr DartId make_dart(SlotId slot, unsigned end) { return 2 * slot + end; }
constexpr SlotId slot_of(DartId d) { return d >> 1; }
constexpr unsigned end_of(DartId d) { return d & 1u; }
constexpr DartId twin(DartId d) { return d ^ 1u; }

struct Arc {
  LexWeight weight;
  ArcId id = kNone;
  /// Opaque handle used by path expansion; maintained by tree contraction.
  std::uint32_t lineage = kNone;
};

/// One embedded curve between `ends[0]` and `ends[1]` carrying up to one arc
/// per direction. `arcs[e]` leaves `ends[e]`.
struct EdgeSlot {
  std::array<VertexId, 2> ends{kNone, kNone};
  std::array<std::optional<Arc>, 2> arcs;
  bool alive = false;
};

/// Input record for build_graph: rotation positions are the clockwise index
/// of this slot's dart in the rotation of u and of v respectively.
struct SlotSpec {
  VertexId u = 0;
  VertexId v = 0;
  std::uint32_t pos_u = 0;
  std::uint32_t pos_v = 0;
  std::optional<std::int64_t> weight_uv;
  std::optional<std::int64_t> weight_vu;
};

/// Planar embedded digraph given by a clockwise rotation system. Rotations are
/// doubly linked cyclic lists over darts so that contraction splices in O(1).
class EmbeddedDigraph {
 public:
  EmbeddedDigraph() = default;
  explicit EmbeddedDigraph(std::size_t vertex_count);

  std::size_t vertex_capacity() const { return alive_.size(); }
  std::size_t slot_capacity() const { return slots_.size(); }
  std::size_t vertex_count() const { return live_vertices_; }
  std::size_t slot_count() const { return live_slots_; }
  std::size_t arc_count() const;

  bool vertex_alive(VertexId v) const { return v < alive_.size() && alive_[v]; }
  std::uint32_t label(VertexId v) const { return label_[v]; }
  std::size_t degree(VertexId v) const { return degree_[v]; }
  DartId first_dart(VertexId v) const { return first_dart_[v]; }
  DartId next_cw(DartId d) const { return next_cw_[d]; }
  DartId prev_cw(DartId d) const { return prev_cw_[d]; }

  const EdgeSlot& slot(SlotId s) const { return slots_[s]; }
  bool slot_alive(SlotId s) const { return s < slots_.size() && slots_[s].alive; }
  VertexId dart_vertex(DartId d) const { return slots_[slot_of(d)].ends[end_of(d)]; }
  VertexId dart_target(DartId d) const { return slots_[slot_of(d)].ends[end_of(d) ^ 1u]; }
  /// Arc leaving dart_vertex(d) along d's slot.
  const std::optional<Arc>& out_arc(DartId d) const { return slots_[slot_of(d)].arcs[end_of(d)]; }
  /// Arc entering dart_vertex(d) along d's slot.
  const std::optional<Arc>& in_arc(DartId d) const { return slots_[slot_of(d)].arcs[end_of(d) ^ 1u]; }
  /// Mutable access to the arc leaving dart_vertex(d); it must exist.
  Arc& mutable_out_arc(DartId d);
  /// Places `arc` on d's slot leaving dart_vertex(d), replacing any arc there.
  void set_out_arc(DartId d, const Arc& arc);

  std::vector<DartId> rotation(VertexId v) const;
  std::vector<VertexId> live_vertices() const;

  VertexId add_vertex(std::uint32_t label);
  /// Adds a slot u-v. Its dart at u is inserted clockwise right after
  /// `after_u` (kNone: u has no darts yet, or append after the last one);
  /// likewise at v.
  SlotId add_slot(VertexId u, VertexId v, DartId after_u, DartId after_v,
                  std::optional<Arc> arc_uv, std::optional<Arc> arc_vu);
  void remove_slot(SlotId s);
  /// Removes the arc leaving dart_vertex(d) along d's slot; drops the slot
  /// when it becomes empty.
  void remove_out_arc(DartId d);
  void remove_vertex(VertexId v);

  /// Merges the two ends of `s` into `survivor` by splicing the rotations at
  /// the removed darts. Leaves self-loops and parallel arcs in place; call
  /// cleanup_vertex(survivor) afterwards.
  void merge_along(SlotId s, VertexId survivor);
  /// Deletes self-loops at v and keeps only the cheapest arc per ordered
  /// pair incident to v.
  void cleanup_vertex(VertexId v);
  /// merge_along followed by cleanup_vertex.
  void contract_slot(SlotId s, VertexId survivor);

  /// Rebuilds the graph without dead vertices and slots, preserving labels,
  /// arcs and rotation order. Returns old -> new vertex index (kNone if dead).
  std::vector<VertexId> compact();

  /// Ties met while deduplicating parallel arcs (perturbation collisions).
  std::size_t perturbation_collisions() const { return collisions_; }

  /// Throws Error(Internal) describing the first violated structural
  /// invariant: rotation consistency, slot liveness, one arc per ordered pair.
  void validate() const;

 private:
  friend EmbeddedDigraph build_graph(std::size_t vertex_count, std::span<const SlotSpec> slots);
  friend class OracleCodec;

  void link_after(DartId d, VertexId v, DartId after);
  void unlink(DartId d);
  void grow_scratch() const;

  std::vector<std::uint8_t> alive_;
  std::vector<std::uint32_t> label_;
  std::vector<DartId> first_dart_;
  std::vector<std::uint32_t> degree_;
  std::vector<EdgeSlot> slots_;
  std::vector<DartId> next_cw_;
  std::vector<DartId> prev_cw_;
  std::size_t live_vertices_ = 0;
  std::size_t live_slots_ = 0;
  std::size_t collisions_ = 0;

  mutable std::vector<std::uint32_t> stamp_;
  mutable std::vector<DartId> best_out_;
  mutable std::vector<DartId> best_in_;
  mutable std::uint32_t epoch_ = 0;
};

/// Validated construction from slot records; arcs receive ids 0, 1, ... in
/// slot order (u->v before v->u). Weights are base units with zero perturbation.
EmbeddedDigraph build_graph(std::size_t vertex_count, std::span<const SlotSpec> slots);

/// Next dart along a face: reverse the dart, then step clockwise.
inline DartId next_face_dart(const EmbeddedDigraph& g, DartId d) { return g.next_cw(twin(d)); }

/// Face orbits of all live darts, each reported once starting from its
/// smallest dart id, in increasing order of that id. Every live vertex of
/// degree zero contributes one empty walk.
std::vector<std::vector<DartId>> face_walks(const EmbeddedDigraph& g);

std::size_t face_count(const EmbeddedDigraph& g);

/// V - E + F over live elements; 2 for a connected plane embedding.
long euler_characteristic(const EmbeddedDigraph& g);

/// Undirected connectivity over live vertices.
bool is_connected(const EmbeddedDigraph& g);

/// True iff walking clockwise around `s` starting at `child`, `p1` is met
/// strictly before `p2`.
bool cw_order(const EmbeddedDigraph& g, VertexId s, DartId child, DartId p1, DartId p2);

}  // namespace mssp
