"""Reference values for the C++ tests, computed with networkx.

Usage: derive.py graph.json [face_index|auto]
Prints face count, the distinct boundary vertices of the outer face in
first-appearance order, and distance aggregates from every boundary vertex.
"""
import json
import sys

import networkx as nx


def faces(doc):
    rot = doc["rotations"]
    nxt = {}
    for darts in rot:
        for k, d in enumerate(darts):
            nxt[d] = darts[(k + 1) % len(darts)]
    seen, out = set(), []
    for d in sorted(nxt):
        if d in seen:
            continue
        walk, x = [], d
        while x not in seen:
            seen.add(x)
            walk.append(x)
            x = nxt[x ^ 1]
        out.append(walk)
    return out


def tail(doc, d):
    s = doc["slots"][d >> 1]
    return s["u"] if d & 1 == 0 else s["v"]


def signed_area(doc, walk):
    c = doc["coordinates"]
    a = 0.0
    for d in walk:
        x0, y0 = c[tail(doc, d)]
        x1, y1 = c[tail(doc, d ^ 1)]
        a += x0 * y1 - x1 * y0
    return a


def main():
    doc = json.load(open(sys.argv[1]))
    fs = faces(doc)
    if len(sys.argv) > 2 and sys.argv[2] != "auto":
        face = fs[int(sys.argv[2])]
    else:
        face = min(fs, key=lambda w: signed_area(doc, w))
    boundary = []
    for d in face:
        v = tail(doc, d)
        if v not in boundary:
            boundary.append(v)

    g = nx.DiGraph()
    g.add_nodes_from(range(doc["vertex_count"]))
    for s in doc["slots"]:
        if s["w_uv"] is not None:
            g.add_edge(s["u"], s["v"], weight=s["w_uv"])
        if s["w_vu"] is not None:
            g.add_edge(s["v"], s["u"], weight=s["w_vu"])

    total, unreachable, rows = 0, 0, []
    for b in boundary:
        dist = nx.single_source_dijkstra_path_length(g, b)
        rows.append(dist)
        total += sum(dist.values())
        unreachable += doc["vertex_count"] - len(dist)
    v = doc["vertex_count"]
    e = len(doc["slots"])
    print(f"V {v} E {e} F {len(fs)}")
    print("boundary", " ".join(map(str, boundary)))
    print("distance_sum", total, "unreachable", unreachable)
    print("d(b0, last)", rows[0].get(v - 1, "UNREACHABLE"))


if __name__ == "__main__":
    main()
