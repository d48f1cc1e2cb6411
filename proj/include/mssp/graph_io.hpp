#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mssp/embedded_graph.hpp"

namespace mssp {

using Point = std::pair<double, double>;

/// Unembedded slot: endpoints plus optional weights per direction.
struct WeightedSlot {
  VertexId u = 0;
  VertexId v = 0;
  std::optional<std::int64_t> w_uv;
  std::optional<std::int64_t> w_vu;
};

/// Contents of a graph.json file. Either `rotations` (clockwise dart lists,
/// dart = 2 * slot + end) or `coordinates` must be present.
struct GraphDocument {
  std::size_t vertex_count = 0;
  std::vector<WeightedSlot> slots;
  std::vector<std::vector<DartId>> rotations;
  std::vector<Point> coordinates;
};

/// Clockwise rotations from straight-line coordinates (y axis pointing up).
std::vector<std::vector<DartId>> rotations_from_coordinates(std::size_t vertex_count,
                                                            const std::vector<WeightedSlot>& slots,
                                                            const std::vector<Point>& coordinates);

EmbeddedDigraph to_graph(const GraphDocument& doc);
/// Document for `g` with its current rotations; `g` must be compact.
GraphDocument to_document(const EmbeddedDigraph& g, const std::vector<Point>& coordinates = {});

GraphDocument parse_graph_json(std::istream& in);
void write_graph_json(std::ostream& out, const GraphDocument& doc);
GraphDocument read_graph_file(const std::string& path);
void write_graph_file(const std::string& path, const GraphDocument& doc);

/// Twice the signed area enclosed by the face walk; the outer face of a
/// straight-line drawing is the only one with negative area.
double face_signed_area(const EmbeddedDigraph& g, const std::vector<DartId>& face,
                        const std::vector<Point>& coordinates);

/// Index into face_walks(g) of the outer face: minimum signed area with
/// coordinates, otherwise the longest walk (lowest index on ties).
std::size_t auto_outer_face(const EmbeddedDigraph& g, const std::vector<Point>& coordinates);

}  // namespace mssp
