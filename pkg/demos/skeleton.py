"""Tropical curves (Berkovich skeleta) with their marking, checked against val(Q).

Run: python3 demos/skeleton.py
"""

from mumford import Mat2, export_graph, good_position, pairing, period_matrix, tropical_curve

p = 3
groups = {
    "dumbbell": [[[-5, 32], [-8, 35]], [[-13, 80], [-8, 43]]],
    "theta": [[[-79, 160], [-80, 161]], [[-319, 1600], [-80, 401]]],
    "honeycomb": [[[121, -120], [40, -39]], [[121, -240], [20, -39]], [[401, -1600], [80, -319]]],
}

for name, rows in groups.items():
    F = good_position([Mat2.from_rows(r) for r in rows], p).domain
    G = tropical_curve(F.gens, F)
    print("== %s: %d vertices, %d edges, lengths %s" % (
        name, len(G.vertices), len(G.edges), sorted(str(L) for _, _, L, _ in G.edges)))
    print(export_graph(G, "dot"), end="")
    # the cycle pairing of the marked loops is the valuation matrix of the periods
    print("pairing      :", [[str(x) for x in r] for r in pairing(G)])
    print("val(Q)       :", [[str(x) for x in r] for r in period_matrix(F.gens, F, 4, m=0).valuations()])
    print()
