#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <gtest/gtest.h>

#include "mssp/embedded_graph.hpp"
#include "mssp/error.hpp"
#include "mssp/graph_io.hpp"

namespace mssp::test {

inline EmbeddedDigraph drawn_graph(std::vector<Point> coordinates, std::vector<WeightedSlot> slots) {
  GraphDocument doc;
  doc.vertex_count = coordinates.size();
  doc.coordinates = std::move(coordinates);
  doc.slots = std::move(slots);
  return to_graph(doc);
}

/// Triangle 0=(0,0), 1=(1,0), 2=(0,1) with both arcs on every side.
inline EmbeddedDigraph triangle(std::int64_t w = 1) {
  return drawn_graph({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, w, w}, {1, 2, w, w}, {2, 0, w, w}});
}

inline std::optional<ErrorKind> error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

/// Out-arc of `from` towards `to`, if any.
inline std::optional<Arc> arc_between(const EmbeddedDigraph& g, VertexId from, VertexId to) {
  for (DartId d : g.rotation(from)) {
    if (g.dart_target(d) == to && g.out_arc(d)) return g.out_arc(d);
  }
  return std::nullopt;
}

}  // namespace mssp::test
