#include "mssp/persistence.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include <zlib.h>

#include "mssp/error.hpp"

namespace mssp {

namespace {

constexpr char kMagic[8] = {'M', 'S', 'S', 'P', 'O', 'R', 'C', 'L'};

class Writer {
 public:
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void size(std::size_t v) { u64(v); }
  void weight(const LexWeight& w) {
    u64(w.base());
    u64(static_cast<std::uint64_t>(w.perturb()));
    u64(static_cast<std::uint64_t>(w.perturb() >> 64));
  }
  void u32s(const std::vector<std::uint32_t>& v) {
    size(v.size());
    for (auto x : v) u32(x);
  }
  std::string& buffer() { return buf_; }

 private:
  std::string buf_;
};

class Reader {
 public:
  Reader(const std::string& buf, std::size_t end) : buf_(buf), end_(end) {}

  std::uint8_t u8() {
    if (pos_ >= end_) throw Error(ErrorKind::CorruptFile, "unexpected end of oracle data");
    return static_cast<std::uint8_t>(buf_[pos_++]);
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
    return v;
  }
  /// Element count, bounded by the bytes left so corrupt sizes fail fast.
  std::size_t size(std::size_t min_element_bytes = 1) {
    const std::uint64_t n = u64();
    if (n > (end_ - pos_) / std::max<std::size_t>(min_element_bytes, 1)) {
      throw Error(ErrorKind::CorruptFile, "element count exceeds file size");
    }
    return static_cast<std::size_t>(n);
  }
  LexWeight weight() {
    const std::uint64_t base = u64();
    const std::uint64_t lo = u64();
    const std::uint64_t hi = u64();
    if (base == std::numeric_limits<std::uint64_t>::max()) return LexWeight::infinity();
    return LexWeight(base, (static_cast<LexWeight::Perturb>(hi) << 64) | lo);
  }
  std::vector<std::uint32_t> u32s() {
    std::vector<std::uint32_t> v(size(4));
    for (auto& x : v) x = u32();
    return v;
  }
  bool done() const { return pos_ == end_; }

 private:
  const std::string& buf_;
  std::size_t end_;
  std::size_t pos_ = 0;
};

void expect(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::CorruptFile, what);
}

}  // namespace

class OracleCodec {
 public:
  static void write_graph(Writer& w, const EmbeddedDigraph& g) {
    w.size(g.vertex_capacity());
    for (VertexId v = 0; v < g.vertex_capacity(); ++v) w.u32(g.label(v));
    w.size(g.slot_capacity());
    for (SlotId s = 0; s < g.slot_capacity(); ++s) {
      const EdgeSlot& sl = g.slot(s);
      w.u32(sl.ends[0]);
      w.u32(sl.ends[1]);
      for (const auto& arc : sl.arcs) {
        w.u8(arc.has_value());
        if (!arc) continue;
        w.weight(arc->weight);
        w.u32(arc->id);
        w.u32(arc->lineage);
      }
    }
    for (VertexId v = 0; v < g.vertex_capacity(); ++v) w.u32s(g.rotation(v));
    w.size(g.perturbation_collisions());
  }

  static EmbeddedDigraph read_graph(Reader& r) {
    EmbeddedDigraph g;
    const std::size_t n = r.size(4);
    for (std::size_t v = 0; v < n; ++v) g.add_vertex(r.u32());
    const std::size_t m = r.size(10);
    for (std::size_t s = 0; s < m; ++s) {
      EdgeSlot sl;
      sl.ends = {r.u32(), r.u32()};
      expect(sl.ends[0] < n && sl.ends[1] < n, "slot endpoint out of range");
      for (auto& arc : sl.arcs) {
        if (!r.u8()) continue;
        Arc a;
        a.weight = r.weight();
        a.id = r.u32();
        a.lineage = r.u32();
        arc = a;
      }
      sl.alive = true;
      g.slots_.push_back(std::move(sl));
    }
    g.live_slots_ = m;
    g.next_cw_.assign(2 * m, kNone);
    g.prev_cw_.assign(2 * m, kNone);
    std::vector<std::uint8_t> seen(2 * m, 0);
    for (VertexId v = 0; v < n; ++v) {
      for (DartId d : r.u32s()) {
        expect(d < 2 * m && !seen[d] && g.dart_vertex(d) == v, "inconsistent rotation");
        seen[d] = 1;
        g.link_after(d, v, kNone);
      }
    }
    g.collisions_ = static_cast<std::size_t>(r.u64());
    try {
      g.validate();
    } catch (const Error& e) {
      throw Error(ErrorKind::CorruptFile, e.what());
    }
    return g;
  }

  static void write(const MsspOracle& o, Writer& w) {
    const NormalizedInstance& norm = o.norm_;
    w.size(norm.original_vertex_count);
    w.size(norm.original_arc_count);
    w.u64(norm.big_weight);
    w.u32s(norm.ring_roots);
    w.u32s(norm.face_vertex_of);
    w.u32s(norm.attachment_arcs);
    w.size(norm.arcs.size());
    for (const auto& a : norm.arcs) {
      w.u32(a.tail);
      w.u32(a.head);
      w.weight(a.weight);
    }
    write_graph(w, norm.graph);

    w.size(o.lineage_.size());
    for (const auto& v : o.lineage_.versions()) {
      w.u32(v.arc);
      w.u32(v.tail);
      w.u32(v.prev);
      w.u32(v.record);
    }

    w.size(o.records_.size());
    for (const auto& rec : o.records_) {
      w.u32(rec.key.midpoint);
      w.u8(static_cast<std::uint8_t>(rec.key.side));
      w.u32(rec.id);
      std::vector<std::uint32_t> keys;
      keys.reserve(rec.entries.size());
      for (const auto& [k, e] : rec.entries) keys.push_back(k);
      std::sort(keys.begin(), keys.end());
      w.size(keys.size());
      for (auto k : keys) {
        const RecordEntry& e = rec.entries.at(k);
        w.u32(k);
        w.u32(e.root);
        w.weight(e.offset);
        w.u32(e.parent);
        w.u32(e.parent_lineage);
      }
    }

    w.size(o.nodes_.size());
    for (const auto& node : o.nodes_) {
      w.u32(node.first);
      w.u32(node.last);
      w.u32(node.level);
      w.u32s(node.vertices);
      w.size(node.tables.size());
      for (const auto& t : node.tables) {
        w.u32(t.root_index);
        w.size(t.dist.size());
        for (const auto& d : t.dist) w.weight(d);
        w.u32s(t.parent_lineage);
      }
      for (auto c : node.children) w.u32(c);
      for (auto r : node.records) w.u32(r);
    }

    const OracleStats& st = o.stats_;
    w.size(st.levels.size());
    for (const auto& l : st.levels) {
      for (std::size_t x : {l.nodes, l.graph_vertices, l.graph_slots, l.tree_vertices, l.max_trees_per_arc,
                            l.contracted_trees, l.contracted_vertices}) {
        w.size(x);
      }
    }
    for (std::size_t x : {st.table_entries, st.record_entries, st.lineage_versions, st.perturbation_collisions,
                          st.sssp_ties, st.ring_contractions}) {
      w.size(x);
    }
  }

  static MsspOracle read(Reader& r, std::uint64_t seed) {
    MsspOracle o;
    NormalizedInstance& norm = o.norm_;
    norm.seed = seed;
    norm.original_vertex_count = static_cast<std::size_t>(r.u64());
    norm.original_arc_count = static_cast<std::size_t>(r.u64());
    norm.big_weight = r.u64();
    norm.ring_roots = r.u32s();
    norm.face_vertex_of = r.u32s();
    norm.attachment_arcs = r.u32s();
    norm.arcs.resize(r.size(32));
    for (auto& a : norm.arcs) {
      a.tail = r.u32();
      a.head = r.u32();
      a.weight = r.weight();
    }
    norm.graph = read_graph(r);
    const std::size_t ring = norm.ring_roots.size();
    expect(ring > 0 && norm.face_vertex_of.size() == ring && norm.attachment_arcs.size() == ring, "bad ring");
    expect(norm.graph.vertex_capacity() == norm.vertex_count(), "vertex count mismatch");
    for (auto a : norm.attachment_arcs) expect(a < norm.arcs.size(), "attachment arc out of range");

    auto& versions = o.lineage_.mutable_versions();
    versions.resize(r.size(16));
    for (auto& v : versions) {
      v.arc = r.u32();
      v.tail = r.u32();
      v.prev = r.u32();
      v.record = r.u32();
    }

    o.records_.resize(r.size(9));
    for (auto& rec : o.records_) {
      rec.key.midpoint = r.u32();
      const std::uint8_t side = r.u8();
      expect(side <= 1, "bad record side");
      rec.key.side = static_cast<Side>(side);
      rec.id = r.u32();
      const std::size_t count = r.size(40);
      rec.entries.reserve(count);
      for (std::size_t k = 0; k < count; ++k) {
        const std::uint32_t vertex = r.u32();
        RecordEntry e;
        e.root = r.u32();
        e.offset = r.weight();
        e.parent = r.u32();
        e.parent_lineage = r.u32();
        rec.entries.emplace(vertex, e);
      }
    }

    const std::size_t vcount = norm.vertex_count();
    o.nodes_.resize(r.size(12));
    for (auto& node : o.nodes_) {
      node.first = r.u32();
      node.last = r.u32();
      node.level = r.u32();
      expect(node.first <= node.last && node.last < ring, "bad node interval");
      node.vertices = r.u32s();
      node.position_of.reserve(node.vertices.size());
      for (std::uint32_t p = 0; p < node.vertices.size(); ++p) {
        expect(node.vertices[p] < vcount, "node vertex out of range");
        node.position_of.emplace(node.vertices[p], p);
      }
      node.tables.resize(r.size(4));
      for (auto& t : node.tables) {
        t.root_index = r.u32();
        t.dist.resize(r.size(24));
        for (auto& d : t.dist) d = r.weight();
        t.parent_lineage = r.u32s();
        expect(t.dist.size() == node.vertices.size() && t.parent_lineage.size() == node.vertices.size(),
               "table size mismatch");
        for (auto lin : t.parent_lineage) expect(lin == kNone || lin < versions.size(), "lineage out of range");
      }
      expect(node.table_for(node.first) && node.table_for(node.last), "node lacks an endpoint table");
      for (auto& c : node.children) c = r.u32();
      for (auto& rec : node.records) rec = r.u32();
      for (int s = 0; s < 2; ++s) {
        expect((node.children[s] == kNone) == node.is_leaf(), "bad child link");
        expect(node.is_leaf() || (node.children[s] < o.nodes_.size() && node.records[s] < o.records_.size()),
               "child or record out of range");
      }
    }
    expect(!o.nodes_.empty(), "no recursion nodes");

    o.stats_.levels.resize(r.size(56));
    for (auto& l : o.stats_.levels) {
      for (std::size_t* x : {&l.nodes, &l.graph_vertices, &l.graph_slots, &l.tree_vertices, &l.max_trees_per_arc,
                             &l.contracted_trees, &l.contracted_vertices}) {
        *x = static_cast<std::size_t>(r.u64());
      }
    }
    auto& st = o.stats_;
    for (std::size_t* x : {&st.table_entries, &st.record_entries, &st.lineage_versions, &st.perturbation_collisions,
                           &st.sssp_ties, &st.ring_contractions}) {
      *x = static_cast<std::size_t>(r.u64());
    }
    expect(r.done(), "trailing bytes in oracle data");
    return o;
  }
};

void save(const MsspOracle& oracle, std::ostream& out) {
  Writer w;
  w.buffer().append(kMagic, sizeof kMagic);
  w.u32(kOracleFormatVersion);
  w.u64(oracle.normalized().seed);
  OracleCodec::write(oracle, w);
  const auto& buf = w.buffer();
  w.u32(static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(buf.data()), static_cast<uInt>(buf.size()))));
  out.write(w.buffer().data(), static_cast<std::streamsize>(w.buffer().size()));
  if (!out) throw Error(ErrorKind::BadInput, "failed to write oracle");
}

MsspOracle load(std::istream& in) {
  const std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  expect(buf.size() >= sizeof kMagic + 4 + 8 + 4, "file too short");
  expect(std::memcmp(buf.data(), kMagic, sizeof kMagic) == 0, "not an oracle file");
  Reader header(buf, buf.size());
  for (std::size_t k = 0; k < sizeof kMagic; ++k) header.u8();
  const std::uint32_t version = header.u32();
  if (version != kOracleFormatVersion) {
    throw Error(ErrorKind::VersionMismatch, "oracle format version " + std::to_string(version) + ", expected " +
                                                std::to_string(kOracleFormatVersion));
  }
  const std::size_t body_end = buf.size() - 4;
  Reader trailer(buf, buf.size());
  for (std::size_t k = 0; k < body_end; ++k) trailer.u8();
  const std::uint32_t stored = trailer.u32();
  const auto actual = static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(buf.data()), static_cast<uInt>(body_end)));
  expect(stored == actual, "checksum mismatch");

  Reader r(buf, body_end);
  for (std::size_t k = 0; k < sizeof kMagic + 4; ++k) r.u8();
  const std::uint64_t seed = r.u64();
  return OracleCodec::read(r, seed);
}

void save_file(const MsspOracle& oracle, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::BadInput, "cannot write " + path);
  save(oracle, out);
}

MsspOracle load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::BadInput, "cannot open " + path);
  return load(in);
}

}  // namespace mssp
