"""Decide whether a few generator sets are Schottky, and show what the verdicts carry.

Run: python3 demos/schottky_test.py
"""

from mumford import Inconclusive, Mat2, good_position

p = 3
g1 = Mat2.from_rows([[-5, 32], [-8, 35]])
g2 = Mat2.from_rows([[-13, 80], [-8, 43]])
s0 = Mat2.from_rows([[-9, 0], [-2, 9]])  # an involution

cases = {
    "g1, g2": [g1, g2],
    "g1, g1*g2 (another basis)": [g1, g1 * g2],
    "g1, g1^2 (not free)": [g1, g1 * g1],
    "g1, s0 (elliptic element)": [g1, s0],
}

for name, gens in cases.items():
    v = good_position(gens, p)
    print("%-28s -> %s" % (name, v.kind))
    if v.kind == "GoodPosition":
        F = v.domain
        print("    certified at m=%d, c=%s" % (v.m, F.c))
        print("    new generators as words in the inputs:", [tuple(w) for w in F.words])
        for B in F.balls:
            print("    ball", B)
    else:
        print("    witness word:", tuple(v.word))

# a generator set in good position only after very long words: the search stops
try:
    good_position([g1, (g1**100) * g2], p, max_m=12)
except Inconclusive as exc:
    print("g1, g1^100*g2                -> Inconclusive (%s)" % exc)
