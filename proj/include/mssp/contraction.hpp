#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "mssp/embedded_graph.hpp"
#include "mssp/lex_weight.hpp"
#include "mssp/sssp.hpp"

namespace mssp {

enum class Side : std::uint8_t { Left = 0, Right = 1 };

struct RecordKey {
  std::uint32_t midpoint = 0;
  Side side = Side::Left;

  bool operator==(const RecordKey&) const = default;
};

/// Where a contracted vertex went: its tree root, the tree distance from the
/// root, and the tree arc into it (stable parent id plus the arc's lineage).
struct RecordEntry {
  std::uint32_t root = kNone;
  LexWeight offset;
  std::uint32_t parent = kNone;
  std::uint32_t parent_lineage = kNone;
};

/// Contraction record of one child interval. Vertices are keyed by their
/// stable label; a vertex with no entry maps to itself at offset zero.
struct ContractionRecord {
  RecordKey key;
  std::uint32_t id = kNone;
  std::unordered_map<std::uint32_t, RecordEntry> entries;

  const RecordEntry* find(std::uint32_t vertex) const {
    const auto it = entries.find(vertex);
    return it == entries.end() ? nullptr : &it->second;
  }
};

/// Tree to contract, over local ids of one graph. Parents precede children;
/// vertices[0] is the root and parent_dart[0] is kNone.
struct ContractibleTree {
  std::vector<VertexId> vertices;
  std::vector<DartId> parent_dart;

  VertexId root() const { return vertices.front(); }
};

/// One step in the history of an arc's tail. Base versions (prev == kNone)
/// are the arcs of the normalized graph; a derived version records that the
/// tail moved to `tail` when the previous tail was contracted under record
/// `record`.
struct ArcVersion {
  ArcId arc = kNone;
  std::uint32_t tail = kNone;
  std::uint32_t prev = kNone;
  std::uint32_t record = kNone;
};

class LineageTable {
 public:
  LineageTable() = default;
  /// Registers every arc of `g` as a base version whose index is its arc id
  /// and stores that index in the arc's lineage field. Arc ids must be dense.
  explicit LineageTable(EmbeddedDigraph& g);

  std::uint32_t derive(std::uint32_t prev, std::uint32_t new_tail, std::uint32_t record);
  const ArcVersion& operator[](std::uint32_t id) const { return versions_[id]; }
  std::size_t size() const { return versions_.size(); }
  const std::vector<ArcVersion>& versions() const { return versions_; }
  std::vector<ArcVersion>& mutable_versions() { return versions_; }

 private:
  std::vector<ArcVersion> versions_;
};

/// Trees of the shared forest of t1 and t2 that every root strictly between
/// their two roots must also contain: rooted at a forest component root whose
/// two parent arcs differ, keeping the forest children v whose dart passes
/// cw_order(h, s, dart(s->v), dart(s, parent in t1), dart(s, parent in t2)).
std::vector<ContractibleTree> select_trees(const EmbeddedDigraph& h, const SsspTree& t1, const SsspTree& t2);

/// Contracts trees of one graph one after another, reusing scratch space.
class TreeContractor {
 public:
  explicit TreeContractor(EmbeddedDigraph& h);

  /// Records (root, tree distance, parent) for every tree vertex, shifts the
  /// weight of arcs leaving the tree by the tail's tree distance, deletes
  /// arcs entering the tree anywhere but at the root, then merges the tree
  /// into its root and deduplicates. `lineage` may be null.
  void contract(const ContractibleTree& tree, ContractionRecord& record, LineageTable* lineage);

 private:
  EmbeddedDigraph& h_;
  std::vector<std::uint32_t> stamp_;
  std::vector<std::uint32_t> order_;
  std::vector<LexWeight> offset_;
  std::uint32_t epoch_ = 0;
};

void contract_tree(EmbeddedDigraph& h, const ContractibleTree& tree, ContractionRecord& record,
                   LineageTable* lineage = nullptr);

}  // namespace mssp
