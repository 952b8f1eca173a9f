"""Period matrices of two Jacobians, and how the truncated products converge.

Run: python3 demos/period_matrix.py
"""

from mumford import Mat2, format_digits, good_position, period_matrix

p = 3


def show(name, rows, n=10):
    F = good_position([Mat2.from_rows(r) for r in rows], p).domain
    Q = period_matrix(F.gens, F, n)
    print("%s: genus %d, c=%s, m=%d, working digits N=%d" % (name, F.g, F.c, Q.m, Q.N))
    for row in Q.Q:
        print("   ", "  ".join(format_digits(x) for x in row))
    print("    val(Q) =", Q.valuations())
    return F


F = show("genus 2", [[[-5, 32], [-8, 35]], [[-13, 80], [-8, 43]]])
show("genus 3", [[[121, -120], [40, -39]], [[121, -240], [20, -39]], [[401, -1600], [80, -319]]])

# going from m - 1 to m letters changes Q by at most p^(-c(m-1))
print("\nQ_11 of the genus 2 curve by truncation length m:")
prev = None
for m in range(0, 6):
    q = period_matrix(F.gens, F, 12, m=m).Q[0][0]
    line = "  m=%d  %s" % (m, format_digits(q))
    if prev is not None:
        line += "  val(Q^(m)/Q^(m-1) - 1) = %d" % (q / prev - 1).valuation
    print(line)
    prev = q
