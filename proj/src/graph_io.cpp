#include "mssp/graph_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "mssp/error.hpp"

namespace mssp {

using nlohmann::json;

std::vector<std::vector<DartId>> rotations_from_coordinates(std::size_t vertex_count,
                                                            const std::vector<WeightedSlot>& slots,
                                                            const std::vector<Point>& coordinates) {
  if (coordinates.size() != vertex_count) throw Error(ErrorKind::BadInput, "need one coordinate per vertex");
  std::vector<std::vector<std::pair<double, DartId>>> around(vertex_count);
  for (SlotId s = 0; s < slots.size(); ++s) {
    const auto& sl = slots[s];
    if (sl.u >= vertex_count || sl.v >= vertex_count) {
      throw Error(ErrorKind::BadInput, "slot " + std::to_string(s) + " has an unknown endpoint");
    }
    const auto [ux, uy] = coordinates[sl.u];
    const auto [vx, vy] = coordinates[sl.v];
    if (ux == vx && uy == vy) throw Error(ErrorKind::BadInput, "slot " + std::to_string(s) + " has zero length");
    around[sl.u].emplace_back(std::atan2(vy - uy, vx - ux), make_dart(s, 0));
    around[sl.v].emplace_back(std::atan2(uy - vy, ux - vx), make_dart(s, 1));
  }
  std::vector<std::vector<DartId>> rotations(vertex_count);
  for (VertexId v = 0; v < vertex_count; ++v) {
    auto& a = around[v];
    // Decreasing angle is clockwise with y pointing up.
    std::sort(a.begin(), a.end(), [](const auto& x, const auto& y) {
      return x.first != y.first ? x.first > y.first : x.second < y.second;
    });
    for (std::size_t k = 1; k < a.size(); ++k) {
      if (a[k].first == a[k - 1].first) {
        throw Error(ErrorKind::BadRotation, "overlapping slots at vertex " + std::to_string(v));
      }
    }
    for (const auto& [angle, d] : a) rotations[v].push_back(d);
  }
  return rotations;
}

EmbeddedDigraph to_graph(const GraphDocument& doc) {
  auto rotations = doc.rotations;
  if (rotations.empty() && !doc.coordinates.empty()) {
    rotations = rotations_from_coordinates(doc.vertex_count, doc.slots, doc.coordinates);
  }
  if (rotations.empty() && doc.vertex_count > 0 && !doc.slots.empty()) {
    throw Error(ErrorKind::BadInput, "graph needs rotations or coordinates");
  }
  if (!rotations.empty() && rotations.size() != doc.vertex_count) {
    throw Error(ErrorKind::BadRotation, "need one rotation per vertex");
  }
  std::vector<SlotSpec> specs(doc.slots.size());
  std::vector<std::uint8_t> seen(2 * doc.slots.size(), 0);
  for (SlotId s = 0; s < doc.slots.size(); ++s) {
    const auto& sl = doc.slots[s];
    specs[s] = SlotSpec{sl.u, sl.v, kNone, kNone, sl.w_uv, sl.w_vu};
  }
  for (VertexId v = 0; v < rotations.size(); ++v) {
    for (std::uint32_t p = 0; p < rotations[v].size(); ++p) {
      const DartId d = rotations[v][p];
      if (slot_of(d) >= doc.slots.size() || seen[d]) {
        throw Error(ErrorKind::BadRotation, "bad or repeated dart " + std::to_string(d) + " at vertex " + std::to_string(v));
      }
      seen[d] = 1;
      auto& spec = specs[slot_of(d)];
      if ((end_of(d) == 0 ? spec.u : spec.v) != v) {
        throw Error(ErrorKind::BadRotation, "dart " + std::to_string(d) + " listed at the wrong vertex");
      }
      (end_of(d) == 0 ? spec.pos_u : spec.pos_v) = p;
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw Error(ErrorKind::BadRotation, "some dart is missing from the rotations");
  }
  return build_graph(doc.vertex_count, specs);
}

GraphDocument to_document(const EmbeddedDigraph& g, const std::vector<Point>& coordinates) {
  if (g.vertex_count() != g.vertex_capacity() || g.slot_count() != g.slot_capacity()) {
    throw Error(ErrorKind::BadInput, "graph must be compact");
  }
  GraphDocument doc;
  doc.vertex_count = g.vertex_count();
  doc.coordinates = coordinates;
  for (SlotId s = 0; s < g.slot_capacity(); ++s) {
    const auto& sl = g.slot(s);
    WeightedSlot w{sl.ends[0], sl.ends[1], std::nullopt, std::nullopt};
    if (sl.arcs[0]) w.w_uv = static_cast<std::int64_t>(sl.arcs[0]->weight.base());
    if (sl.arcs[1]) w.w_vu = static_cast<std::int64_t>(sl.arcs[1]->weight.base());
    doc.slots.push_back(w);
  }
  for (VertexId v = 0; v < g.vertex_capacity(); ++v) doc.rotations.push_back(g.rotation(v));
  return doc;
}

GraphDocument parse_graph_json(std::istream& in) {
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::BadInput, std::string("graph json: ") + e.what());
  }
  GraphDocument doc;
  try {
    doc.vertex_count = j.at("vertex_count").get<std::size_t>();
    for (const auto& s : j.at("slots")) {
      WeightedSlot w;
      w.u = s.at("u").get<VertexId>();
      w.v = s.at("v").get<VertexId>();
      if (s.contains("w_uv") && !s["w_uv"].is_null()) w.w_uv = s["w_uv"].get<std::int64_t>();
      if (s.contains("w_vu") && !s["w_vu"].is_null()) w.w_vu = s["w_vu"].get<std::int64_t>();
      doc.slots.push_back(w);
    }
    if (j.contains("rotations")) doc.rotations = j["rotations"].get<std::vector<std::vector<DartId>>>();
    if (j.contains("coordinates")) {
      for (const auto& p : j["coordinates"]) doc.coordinates.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::BadInput, std::string("graph json: ") + e.what());
  }
  return doc;
}

void write_graph_json(std::ostream& out, const GraphDocument& doc) {
  json j;
  j["vertex_count"] = doc.vertex_count;
  json slots = json::array();
  for (const auto& s : doc.slots) {
    slots.push_back({{"u", s.u},
                     {"v", s.v},
                     {"w_uv", s.w_uv ? json(*s.w_uv) : json(nullptr)},
                     {"w_vu", s.w_vu ? json(*s.w_vu) : json(nullptr)}});
  }
  j["slots"] = std::move(slots);
  if (!doc.rotations.empty()) j["rotations"] = doc.rotations;
  if (!doc.coordinates.empty()) {
    json coords = json::array();
    for (const auto& [x, y] : doc.coordinates) coords.push_back({x, y});
    j["coordinates"] = std::move(coords);
  }
  out << j.dump() << '\n';
}

GraphDocument read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::BadInput, "cannot open " + path);
  return parse_graph_json(in);
}

void write_graph_file(const std::string& path, const GraphDocument& doc) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::BadInput, "cannot write " + path);
  write_graph_json(out, doc);
}

double face_signed_area(const EmbeddedDigraph& g, const std::vector<DartId>& face,
                        const std::vector<Point>& coordinates) {
  double area = 0;
  for (DartId d : face) {
    const auto [x0, y0] = coordinates[g.label(g.dart_vertex(d))];
    const auto [x1, y1] = coordinates[g.label(g.dart_target(d))];
    area += x0 * y1 - x1 * y0;
  }
  return area;
}

std::size_t auto_outer_face(const EmbeddedDigraph& g, const std::vector<Point>& coordinates) {
  const auto faces = face_walks(g);
  if (faces.empty()) throw Error(ErrorKind::FaceNotFound, "graph has no faces");
  std::size_t best = 0;
  if (!coordinates.empty()) {
    double best_area = std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < faces.size(); ++f) {
      const double a = face_signed_area(g, faces[f], coordinates);
      if (a < best_area) {
        best_area = a;
        best = f;
      }
    }
  } else {
    for (std::size_t f = 1; f < faces.size(); ++f) {
      if (faces[f].size() > faces[best].size()) best = f;
    }
  }
  return best;
}

}  // namespace mssp
