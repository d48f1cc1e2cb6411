#include "mssp/embedded_graph.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <utility>

#include "mssp/error.hpp"

namespace mssp {

EmbeddedDigraph::EmbeddedDigraph(std::size_t vertex_count)
    : alive_(vertex_count, 1),
      label_(vertex_count),
      first_dart_(vertex_count, kNone),
      degree_(vertex_count, 0),
      live_vertices_(vertex_count) {
  for (std::size_t v = 0; v < vertex_count; ++v) label_[v] = static_cast<std::uint32_t>(v);
}

std::size_t EmbeddedDigraph::arc_count() const {
  std::size_t count = 0;
  for (const auto& s : slots_) {
    if (!s.alive) continue;
    count += s.arcs[0].has_value() + s.arcs[1].has_value();
  }
  return count;
}

Arc& EmbeddedDigraph::mutable_out_arc(DartId d) {
  auto& arc = slots_[slot_of(d)].arcs[end_of(d)];
  if (!arc) throw Error(ErrorKind::Internal, "no arc leaves dart " + std::to_string(d));
  return *arc;
}

void EmbeddedDigraph::set_out_arc(DartId d, const Arc& arc) {
  if (!slot_alive(slot_of(d))) throw Error(ErrorKind::BadInput, "set_out_arc on a dead slot");
  slots_[slot_of(d)].arcs[end_of(d)] = arc;
}

std::vector<DartId> EmbeddedDigraph::rotation(VertexId v) const {
  std::vector<DartId> out;
  if (!vertex_alive(v) || degree_[v] == 0) return out;
  out.reserve(degree_[v]);
  DartId d = first_dart_[v];
  do {
    out.push_back(d);
    d = next_cw_[d];
  } while (d != first_dart_[v]);
  return out;
}

std::vector<VertexId> EmbeddedDigraph::live_vertices() const {
  std::vector<VertexId> out;
  out.reserve(live_vertices_);
  for (VertexId v = 0; v < alive_.size(); ++v) {
    if (alive_[v]) out.push_back(v);
  }
  return out;
}

VertexId EmbeddedDigraph::add_vertex(std::uint32_t label) {
  const auto v = static_cast<VertexId>(alive_.size());
  alive_.push_back(1);
  label_.push_back(label);
  first_dart_.push_back(kNone);
  degree_.push_back(0);
  ++live_vertices_;
  return v;
}

void EmbeddedDigraph::link_after(DartId d, VertexId v, DartId after) {
  if (degree_[v] == 0) {
    next_cw_[d] = prev_cw_[d] = d;
    first_dart_[v] = d;
  } else {
    if (after == kNone) after = prev_cw_[first_dart_[v]];
    const DartId n = next_cw_[after];
    next_cw_[after] = d;
    prev_cw_[d] = after;
    next_cw_[d] = n;
    prev_cw_[n] = d;
  }
  ++degree_[v];
}

void EmbeddedDigraph::unlink(DartId d) {
  const VertexId v = dart_vertex(d);
  if (degree_[v] == 1) {
    first_dart_[v] = kNone;
  } else {
    const DartId p = prev_cw_[d];
    const DartId n = next_cw_[d];
    next_cw_[p] = n;
    prev_cw_[n] = p;
    if (first_dart_[v] == d) first_dart_[v] = n;
  }
  --degree_[v];
  next_cw_[d] = prev_cw_[d] = kNone;
}

SlotId EmbeddedDigraph::add_slot(VertexId u, VertexId v, DartId after_u, DartId after_v,
                                 std::optional<Arc> arc_uv, std::optional<Arc> arc_vu) {
  if (!vertex_alive(u) || !vertex_alive(v)) {
    throw Error(ErrorKind::BadInput, "add_slot on a dead or unknown vertex");
  }
  if (u == v) throw Error(ErrorKind::SelfLoop, "slot endpoints coincide at vertex " + std::to_string(u));
  if (!arc_uv && !arc_vu) throw Error(ErrorKind::BadInput, "slot without arcs");
  auto check_after = [&](DartId after, VertexId at) {
    if (after == kNone) return;
    if (slot_of(after) >= slots_.size() || !slots_[slot_of(after)].alive || dart_vertex(after) != at) {
      throw Error(ErrorKind::DartNotAtVertex,
                  "dart " + std::to_string(after) + " is not at vertex " + std::to_string(at));
    }
  };
  check_after(after_u, u);
  check_after(after_v, v);

  const auto s = static_cast<SlotId>(slots_.size());
  EdgeSlot slot;
  slot.ends = {u, v};
  slot.arcs = {std::move(arc_uv), std::move(arc_vu)};
  slot.alive = true;
  slots_.push_back(std::move(slot));
  next_cw_.resize(2 * slots_.size(), kNone);
  prev_cw_.resize(2 * slots_.size(), kNone);
  link_after(make_dart(s, 0), u, after_u);
  link_after(make_dart(s, 1), v, after_v);
  ++live_slots_;
  return s;
}

void EmbeddedDigraph::remove_slot(SlotId s) {
  auto& slot = slots_[s];
  if (!slot.alive) return;
  unlink(make_dart(s, 0));
  unlink(make_dart(s, 1));
  slot.alive = false;
  slot.arcs = {};
  --live_slots_;
}

void EmbeddedDigraph::remove_out_arc(DartId d) {
  auto& slot = slots_[slot_of(d)];
  slot.arcs[end_of(d)].reset();
  if (!slot.arcs[0] && !slot.arcs[1]) remove_slot(slot_of(d));
}

void EmbeddedDigraph::remove_vertex(VertexId v) {
  if (!vertex_alive(v)) return;
  for (DartId d : rotation(v)) remove_slot(slot_of(d));
  alive_[v] = 0;
  --live_vertices_;
}

void EmbeddedDigraph::merge_along(SlotId s, VertexId survivor) {
  if (!slot_alive(s)) throw Error(ErrorKind::BadInput, "merge along dead slot " + std::to_string(s));
  auto& slot = slots_[s];
  if (slot.ends[0] == slot.ends[1]) {
    throw Error(ErrorKind::SelfLoopContraction, "slot " + std::to_string(s) + " is a self-loop");
  }
  if (slot.ends[0] != survivor && slot.ends[1] != survivor) {
    throw Error(ErrorKind::BadInput, "survivor is not an endpoint of slot " + std::to_string(s));
  }
  const unsigned ea = slot.ends[0] == survivor ? 0u : 1u;
  const DartId da = make_dart(s, ea);
  const DartId db = twin(da);
  const VertexId a = survivor;
  const VertexId b = slot.ends[ea ^ 1u];

  DartId d = first_dart_[b];
  do {
    slots_[slot_of(d)].ends[end_of(d)] = a;
    d = next_cw_[d];
  } while (d != first_dart_[b]);

  const std::uint32_t deg_a = degree_[a];
  const std::uint32_t deg_b = degree_[b];
  if (deg_a > 1 && deg_b > 1) {
    const DartId a1 = next_cw_[da], a2 = prev_cw_[da];
    const DartId b1 = next_cw_[db], b2 = prev_cw_[db];
    next_cw_[a2] = b1;
    prev_cw_[b1] = a2;
    next_cw_[b2] = a1;
    prev_cw_[a1] = b2;
    first_dart_[a] = a1;
  } else if (deg_a > 1) {
    const DartId a1 = next_cw_[da], a2 = prev_cw_[da];
    next_cw_[a2] = a1;
    prev_cw_[a1] = a2;
    first_dart_[a] = a1;
  } else if (deg_b > 1) {
    const DartId b1 = next_cw_[db], b2 = prev_cw_[db];
    next_cw_[b2] = b1;
    prev_cw_[b1] = b2;
    first_dart_[a] = b1;
  } else {
    first_dart_[a] = kNone;
  }
  degree_[a] = deg_a + deg_b - 2;
  degree_[b] = 0;
  first_dart_[b] = kNone;
  alive_[b] = 0;
  --live_vertices_;

  next_cw_[da] = prev_cw_[da] = next_cw_[db] = prev_cw_[db] = kNone;
  slot.alive = false;
  slot.arcs = {};
  --live_slots_;
}

void EmbeddedDigraph::grow_scratch() const {
  if (stamp_.size() < alive_.size()) {
    stamp_.resize(alive_.size(), 0);
    best_out_.resize(alive_.size(), kNone);
    best_in_.resize(alive_.size(), kNone);
  }
  if (++epoch_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    epoch_ = 1;
  }
}

namespace {

// True if `a` should be kept over `b`; ties fall to the smaller arc id.
bool keeps_first(const Arc& a, const Arc& b, std::size_t& collisions) {
  if (a.weight != b.weight) return a.weight < b.weight;
  ++collisions;
  return a.id < b.id;
}

}  // namespace

void EmbeddedDigraph::cleanup_vertex(VertexId v) {
  if (!vertex_alive(v)) return;
  grow_scratch();
  const auto darts = rotation(v);
  for (DartId d : darts) {
    const SlotId s = slot_of(d);
    if (!slots_[s].alive) continue;
    const VertexId x = dart_target(d);
    if (x == v) {
      remove_slot(s);
      continue;
    }
    if (stamp_[x] != epoch_) {
      stamp_[x] = epoch_;
      best_out_[x] = kNone;
      best_in_[x] = kNone;
    }
    if (out_arc(d)) {
      DartId& best = best_out_[x];
      if (best == kNone) {
        best = d;
      } else if (keeps_first(*out_arc(d), *out_arc(best), collisions_)) {
        const DartId loser = best;
        best = d;
        remove_out_arc(loser);
      } else {
        remove_out_arc(d);
      }
    }
    if (slots_[s].alive && in_arc(d)) {
      DartId& best = best_in_[x];
      if (best == kNone) {
        best = d;
      } else if (keeps_first(*in_arc(d), *in_arc(best), collisions_)) {
        const DartId loser = best;
        best = d;
        remove_out_arc(twin(loser));
      } else {
        remove_out_arc(twin(d));
      }
    }
  }
}

void EmbeddedDigraph::contract_slot(SlotId s, VertexId survivor) {
  merge_along(s, survivor);
  cleanup_vertex(survivor);
}

std::vector<VertexId> EmbeddedDigraph::compact() {
  std::vector<VertexId> vmap(alive_.size(), kNone);
  EmbeddedDigraph out;
  for (VertexId v = 0; v < alive_.size(); ++v) {
    if (alive_[v]) vmap[v] = out.add_vertex(label_[v]);
  }
  std::vector<SlotId> smap(slots_.size(), kNone);
  for (SlotId s = 0; s < slots_.size(); ++s) {
    if (!slots_[s].alive) continue;
    smap[s] = static_cast<SlotId>(out.slots_.size());
    EdgeSlot slot = slots_[s];
    slot.ends = {vmap[slot.ends[0]], vmap[slot.ends[1]]};
    out.slots_.push_back(std::move(slot));
  }
  out.live_slots_ = out.slots_.size();
  out.next_cw_.assign(2 * out.slots_.size(), kNone);
  out.prev_cw_.assign(2 * out.slots_.size(), kNone);
  for (VertexId v = 0; v < alive_.size(); ++v) {
    if (!alive_[v] || degree_[v] == 0) continue;
    const VertexId nv = vmap[v];
    DartId d = first_dart_[v];
    do {
      out.link_after(make_dart(smap[slot_of(d)], end_of(d)), nv, kNone);
      d = next_cw_[d];
    } while (d != first_dart_[v]);
  }
  out.collisions_ = collisions_;
  *this = std::move(out);
  return vmap;
}

void EmbeddedDigraph::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::Internal, "graph invariant: " + what); };
  std::vector<std::uint8_t> seen(2 * slots_.size(), 0);
  std::size_t live = 0;
  for (VertexId v = 0; v < alive_.size(); ++v) {
    if (!alive_[v]) {
      if (degree_[v] != 0) fail("dead vertex " + std::to_string(v) + " has darts");
      continue;
    }
    ++live;
    if (degree_[v] == 0) {
      if (first_dart_[v] != kNone) fail("isolated vertex with a first dart");
      continue;
    }
    std::set<std::uint32_t> heads_out, heads_in;
    std::size_t count = 0;
    DartId d = first_dart_[v];
    do {
      if (slot_of(d) >= slots_.size() || !slots_[slot_of(d)].alive) fail("dead slot in rotation");
      if (dart_vertex(d) != v) fail("dart " + std::to_string(d) + " listed at wrong vertex");
      if (seen[d]++) fail("dart " + std::to_string(d) + " appears twice");
      if (prev_cw_[next_cw_[d]] != d) fail("broken rotation links");
      const VertexId x = dart_target(d);
      if (x != v) {
        if (out_arc(d) && !heads_out.insert(x).second) fail("parallel arcs out of " + std::to_string(v));
        if (in_arc(d) && !heads_in.insert(x).second) fail("parallel arcs into " + std::to_string(v));
      }
      d = next_cw_[d];
      if (++count > degree_[v]) fail("rotation longer than degree");
    } while (d != first_dart_[v]);
    if (count != degree_[v]) fail("degree mismatch at " + std::to_string(v));
  }
  if (live != live_vertices_) fail("live vertex count");
  std::size_t live_slots = 0;
  for (SlotId s = 0; s < slots_.size(); ++s) {
    if (!slots_[s].alive) continue;
    ++live_slots;
    if (!slots_[s].arcs[0] && !slots_[s].arcs[1]) fail("empty slot " + std::to_string(s));
    if (!seen[make_dart(s, 0)] || !seen[make_dart(s, 1)]) fail("slot dart missing from rotations");
  }
  if (live_slots != live_slots_) fail("live slot count");
}

EmbeddedDigraph build_graph(std::size_t vertex_count, std::span<const SlotSpec> slots) {
  EmbeddedDigraph g(vertex_count);
  std::vector<std::vector<std::pair<std::uint32_t, DartId>>> at(vertex_count);
  std::set<std::pair<VertexId, VertexId>> pairs;
  ArcId next_id = 0;
  auto make_arc = [&](const std::optional<std::int64_t>& w, VertexId from, VertexId to) -> std::optional<Arc> {
    if (!w) return std::nullopt;
    if (*w < 0) {
      throw Error(ErrorKind::NegativeWeight, "arc " + std::to_string(from) + "->" + std::to_string(to) +
                                                 " has weight " + std::to_string(*w));
    }
    if (!pairs.emplace(from, to).second) {
      throw Error(ErrorKind::DuplicateArc, "two arcs " + std::to_string(from) + "->" + std::to_string(to));
    }
    return Arc{LexWeight(static_cast<LexWeight::Base>(*w)), next_id++, kNone};
  };

  for (SlotId s = 0; s < slots.size(); ++s) {
    const auto& spec = slots[s];
    if (spec.u >= vertex_count || spec.v >= vertex_count) {
      throw Error(ErrorKind::BadInput, "slot " + std::to_string(s) + " references an unknown vertex");
    }
    if (spec.u == spec.v) throw Error(ErrorKind::SelfLoop, "slot " + std::to_string(s) + " is a self-loop");
    if (!spec.weight_uv && !spec.weight_vu) {
      throw Error(ErrorKind::BadInput, "slot " + std::to_string(s) + " carries no arc");
    }
    EdgeSlot slot;
    slot.ends = {spec.u, spec.v};
    slot.arcs[0] = make_arc(spec.weight_uv, spec.u, spec.v);
    slot.arcs[1] = make_arc(spec.weight_vu, spec.v, spec.u);
    slot.alive = true;
    g.slots_.push_back(std::move(slot));
    at[spec.u].emplace_back(spec.pos_u, make_dart(s, 0));
    at[spec.v].emplace_back(spec.pos_v, make_dart(s, 1));
  }
  g.live_slots_ = g.slots_.size();
  g.next_cw_.assign(2 * g.slots_.size(), kNone);
  g.prev_cw_.assign(2 * g.slots_.size(), kNone);
  for (VertexId v = 0; v < vertex_count; ++v) {
    auto& list = at[v];
    std::sort(list.begin(), list.end());
    for (std::uint32_t k = 0; k < list.size(); ++k) {
      if (list[k].first != k) {
        throw Error(ErrorKind::BadRotation,
                    "rotation positions at vertex " + std::to_string(v) + " are not a permutation");
      }
      g.link_after(list[k].second, v, kNone);
    }
  }
  return g;
}

std::vector<std::vector<DartId>> face_walks(const EmbeddedDigraph& g) {
  std::vector<std::vector<DartId>> faces;
  std::vector<std::uint8_t> visited(2 * g.slot_capacity(), 0);
  for (DartId d = 0; d < visited.size(); ++d) {
    if (visited[d] || !g.slot_alive(slot_of(d))) continue;
    std::vector<DartId> walk;
    DartId cur = d;
    do {
      visited[cur] = 1;
      walk.push_back(cur);
      cur = next_face_dart(g, cur);
    } while (cur != d);
    faces.push_back(std::move(walk));
  }
  for (VertexId v = 0; v < g.vertex_capacity(); ++v) {
    if (g.vertex_alive(v) && g.degree(v) == 0) faces.emplace_back();
  }
  return faces;
}

std::size_t face_count(const EmbeddedDigraph& g) {
  std::size_t count = 0;
  std::vector<std::uint8_t> visited(2 * g.slot_capacity(), 0);
  for (DartId d = 0; d < visited.size(); ++d) {
    if (visited[d] || !g.slot_alive(slot_of(d))) continue;
    ++count;
    DartId cur = d;
    do {
      visited[cur] = 1;
      cur = next_face_dart(g, cur);
    } while (cur != d);
  }
  for (VertexId v = 0; v < g.vertex_capacity(); ++v) {
    if (g.vertex_alive(v) && g.degree(v) == 0) ++count;
  }
  return count;
}

long euler_characteristic(const EmbeddedDigraph& g) {
  return static_cast<long>(g.vertex_count()) - static_cast<long>(g.slot_count()) +
         static_cast<long>(face_count(g));
}

bool is_connected(const EmbeddedDigraph& g) {
  const auto live = g.live_vertices();
  if (live.empty()) return true;
  std::vector<std::uint8_t> seen(g.vertex_capacity(), 0);
  std::vector<VertexId> stack{live.front()};
  seen[live.front()] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const VertexId v = stack.back();
    stack.pop_back();
    if (g.degree(v) == 0) continue;
    DartId d = g.first_dart(v);
    do {
      const VertexId x = g.dart_target(d);
      if (!seen[x]) {
        seen[x] = 1;
        ++reached;
        stack.push_back(x);
      }
      d = g.next_cw(d);
    } while (d != g.first_dart(v));
  }
  return reached == live.size();
}

bool cw_order(const EmbeddedDigraph& g, VertexId s, DartId child, DartId p1, DartId p2) {
  for (DartId d : {child, p1, p2}) {
    if (!g.slot_alive(slot_of(d)) || g.dart_vertex(d) != s) {
      throw Error(ErrorKind::DartNotAtVertex, "dart " + std::to_string(d) + " is not at vertex " + std::to_string(s));
    }
  }
  if (child == p1 || child == p2 || p1 == p2) throw Error(ErrorKind::BadInput, "cw_order needs three distinct darts");
  for (DartId d = g.next_cw(child); d != child; d = g.next_cw(d)) {
    if (d == p1) return true;
    if (d == p2) return false;
  }
  throw Error(ErrorKind::Internal, "rotation walk did not meet the parent darts");
}

}  // namespace mssp
