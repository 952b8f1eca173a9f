"""Canonical embedding of a genus 3 Mumford curve and the plane quartic through it.

Takes about half a minute: each point needs words of length 6.
Run: python3 demos/canonical_quartic.py
"""

from fractions import Fraction

from mumford import Mat2, canonical_embed, embedded_quartic, format_digits, good_position, quartic_residual
from mumford.curve import QUARTIC_MONOMIALS, interior_sample


def monomial(exps):
    return "".join(v + ("^%d" % e if e > 1 else "") for v, e in zip("xyz", exps) if e)


p = 3
rows = [[[121, -120], [40, -39]], [[121, -240], [20, -39]], [[401, -1600], [80, -319]]]
F = good_position([Mat2.from_rows(r) for r in rows], p).domain

pt = canonical_embed(F.gens, F, Fraction(17), 10)
print("z = 17 maps to (%s)  [m=%d]" % (" : ".join(format_digits(x) for x in pt.coords), pt.m))

sample = interior_sample(F, 14, first=17)
print("fitting a quartic through the images of", [str(z) for z in sample])
C, pts, _ = embedded_quartic(F.gens, F, 10, sample)
for exps, c in zip(QUARTIC_MONOMIALS, C):
    print("  %-8s %s" % (monomial(exps), format_digits(c)))
print("residual valuations on the sample:", [quartic_residual(C, q) for q in pts])
