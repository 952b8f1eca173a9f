"""The abstract tropical curve of a Schottky group and its cycle pairing.

The skeleton is the tree spanned by the Gauss points ``P_i, P'_i`` of the
domain balls with each ``P_i`` glued to ``P'_i``.  Loop ``s_i`` is the former
tree path from ``P'_i`` to ``P_i``.  Lengths stay exact rationals.
"""

import json
from dataclasses import dataclass
from fractions import Fraction

from .berkovich import span_tree

__all__ = ["MarkedMetricGraph", "tropical_curve", "pairing", "export_graph"]


@dataclass
class MarkedMetricGraph:
    """A metric multigraph with ``g`` marked oriented loops.

    ``edges[k] = (u, v, length, chain)`` where ``chain`` lists the tree edges
    it was merged from, oriented ``u -> v``.  ``marking[i]`` is a list of
    ``(edge index, +1 or -1)`` steps forming the closed walk ``s_{i+1}``.
    ``loops[i]`` is the same walk as oriented tree edges ``(a, b, length)``.
    """

    vertices: list
    edges: list
    marking: list
    loops: list

    @property
    def g(self):
        return len(self.marking)

    def betti(self):
        comps = len(self._components())
        return len(self.edges) - len(self.vertices) + comps

    def _components(self):
        parent = {v: v for v in range(len(self.vertices))}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v, _, _ in self.edges:
            parent[find(u)] = find(v)
        return {find(v) for v in parent}

    def loop_length(self, i):
        return sum(L for _, _, L in self.loops[i])


def _glue(T, pairs):
    # vertex classes after identifying each P_i with P'_i
    rep = {k: k for k in T.vertices}
    for a, b in pairs:
        rep[b] = a
    return rep


def tropical_curve(gens, F):
    """Glue the spanned tree of the domain's Gauss points into a marked metric graph."""
    g = F.g
    P = [F.B(i).gauss_point() for i in range(g)]
    Pp = [F.Bp(i).gauss_point() for i in range(g)]
    T = span_tree(P + Pp, F.p)
    for i in range(g):
        if P[i].key == Pp[i].key:
            raise ValueError("P_%d and P'_%d coincide" % (i + 1, i + 1))

    # s_i as oriented tree edges from P'_i to P_i
    loops = []
    for i in range(g):
        path = T.path(Pp[i].key, P[i].key)
        loops.append([(a, b, T.adj[a][b]) for a, b in zip(path, path[1:])])

    rep = _glue(T, [(P[i].key, Pp[i].key) for i in range(g)])
    # multigraph over glued vertices; edge = (u, v, length, chain of oriented tree edges)
    edges = []
    for a, b, L in T.edges():
        edges.append([rep[a], rep[b], L, [(a, b, L)]])
    keep_alive = True
    while keep_alive:
        keep_alive = False
        verts = sorted({e[0] for e in edges} | {e[1] for e in edges})
        for x in verts:
            inc = [k for k, e in enumerate(edges) if e[0] == x or e[1] == x]
            ends = sum((e[0] == x) + (e[1] == x) for e in (edges[k] for k in inc))
            if ends != 2 or len(inc) != 2:
                continue
            e1, e2 = edges[inc[0]], edges[inc[1]]
            # orient e1 to end at x and e2 to start at x
            if e1[1] != x:
                e1 = [e1[1], e1[0], e1[2], [(b, a, L) for a, b, L in reversed(e1[3])]]
            if e2[0] != x:
                e2 = [e2[1], e2[0], e2[2], [(b, a, L) for a, b, L in reversed(e2[3])]]
            merged = [e1[0], e2[1], e1[2] + e2[2], e1[3] + e2[3]]
            edges = [e for k, e in enumerate(edges) if k not in inc] + [merged]
            keep_alive = True
            break

    vkeys = sorted({e[0] for e in edges} | {e[1] for e in edges})
    if not vkeys:
        vkeys = [rep[P[0].key]]
    index = {k: n for n, k in enumerate(vkeys)}
    # deterministic edge order: by endpoints, then length, then chain
    norm = []
    for u, v, L, chain in edges:
        iu, iv = index[u], index[v]
        if iu > iv or (iu == iv and chain[0] > tuple(reversed(chain[-1][:2])) + (chain[-1][2],)):
            iu, iv = iv, iu
            chain = [(b, a, l) for a, b, l in reversed(chain)]
        norm.append((iu, iv, L, chain))
    norm.sort(key=lambda e: (e[0], e[1], e[2], [c[:2] for c in e[3]]))

    owner = {}
    for k, (_, _, _, chain) in enumerate(norm):
        for pos, (a, b, _) in enumerate(chain):
            owner[(a, b)] = (k, +1, pos)
            owner[(b, a)] = (k, -1, pos)
    marking = []
    for loop in loops:
        walk = []
        for a, b, _ in loop:
            k, d, _ = owner[(a, b)]
            if walk and walk[-1] == (k, d):
                continue
            walk.append((k, d))
        # a loop that wraps around one merged edge may split at the glue point
        if len(walk) > 1 and walk[0] == walk[-1]:
            walk.pop()
        marking.append(walk)
    return MarkedMetricGraph(vkeys, norm, marking, loops)


def pairing(G):
    """``<s_i, s_j>``: shared tree-edge lengths, signed by orientation agreement."""
    signed = []
    for loop in G.loops:
        d = {}
        for a, b, L in loop:
            key = (a, b) if a < b else (b, a)
            d[key] = d.get(key, 0) + (L if a < b else -L)
        signed.append(d)
    g = G.g
    out = [[Fraction(0)] * g for _ in range(g)]
    for i in range(g):
        for j in range(g):
            s = Fraction(0)
            for key, x in signed[i].items():
                y = signed[j].get(key)
                if y is not None:
                    # x and y are +-length of the same edge
                    s += x * y / abs(x)
            out[i][j] = s
    return out


def _num(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else str(x)


def export_graph(G, fmt="json"):
    """Deterministic JSON or DOT text for a marked metric graph."""
    if fmt == "json":
        obj = {
            "vertices": ["v%d" % n for n in range(len(G.vertices))],
            "edges": [{"u": "v%d" % u, "v": "v%d" % v, "length": _num(L)} for u, v, L, _ in G.edges],
            "marking": {
                "s_%d" % (i + 1): [["v%d" % G.edges[k][0], "v%d" % G.edges[k][1], d, k] for k, d in walk]
                for i, walk in enumerate(G.marking)
            },
            "pairing": [[_num(x) for x in row] for row in pairing(G)],
        }
        return json.dumps(obj, indent=2, sort_keys=False) + "\n"
    if fmt == "dot":
        lines = ["graph skeleton {"]
        for n in range(len(G.vertices)):
            lines.append("  v%d;" % n)
        tags = {k: [] for k in range(len(G.edges))}
        for i, walk in enumerate(G.marking):
            for k, d in walk:
                tags[k].append("s%d%s" % (i + 1, "+" if d > 0 else "-"))
        for k, (u, v, L, _) in enumerate(G.edges):
            label = _num(L)
            if tags[k]:
                label += " " + " ".join(tags[k])
            lines.append('  v%d -- v%d [label="%s", length="%s"];' % (u, v, label, _num(L)))
        lines.append("}")
        return "\n".join(lines) + "\n"
    raise ValueError("unknown format %r" % fmt)
