"""Branch points of a hyperelliptic Mumford curve from three involutions, and back.

Run: python3 demos/whittaker_round_trip.py
"""

from fractions import Fraction

from mumford import (
    NotValid,
    Padic,
    format_digits,
    good_position,
    normalize_presentation,
    ramification_points,
    ramification_to_whittaker,
    whittaker_group,
)

p = 3
W = whittaker_group([(0, 9), (1, 10), (2, 11)], p)
print("involutions:", [s.matrix for s in W.involutions])
print("W generators s_i s_0:", W.generators)
print("W is Schottky:", good_position(W.generators, p).kind)

# move the fixed points to {0, b0}, {a1, b1}, {1, INF} and use Theta(0, 1; z)
h, Wn = normalize_presentation(W)
print("\nnormalizing map:", h)
print("normalized fixed points:", [str(x) for x in Wn.fixed_points()])
R = ramification_points(Wn, 10, a=Fraction(0), b=Fraction(1))
print("branch values (stable at m=%d):" % R.m)
for z, r in zip(Wn.fixed_points(), R.values):
    print("  G(%s) = %s" % (z, format_digits(r) if isinstance(r, Padic) else r))

# recover the fixed points digit by digit from the three nontrivial branch values;
# a1 and b1 belong to the same involution, so their order is immaterial
for d in (4, 6):
    xs, _ = ramification_to_whittaker(R.values[1:4], d, p)
    direct = [x.numerator * pow(x.denominator, -1, p**d) % p**d for x in Wn.fixed_points()[1:4]]
    print("mod 3^%d: search %s, direct reduction %s" % (d, xs, direct))

try:
    ramification_to_whittaker([Fraction(9), Fraction(18), Fraction(3)], 4, p)
except NotValid:
    print("\n[9, 18, 3]: NOT VALID (the two smallest values have equal absolute value)")
