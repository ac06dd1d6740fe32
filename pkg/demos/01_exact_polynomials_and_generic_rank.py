"""Exact parameterized matrices and randomized generic rank.

Coefficient matrices live over a ring of polynomial parameters; the generic
rank is the rank attained for almost every parameter value.  We evaluate at
random points of a 61-bit prime field, so one lucky draw already certifies
the answer and the estimate never overshoots.
"""

from fractions import Fraction

from sfspectrum import ParamMatrix, ParamPoint, ParamPoly, grank, rank_exact

p = ParamPoly.param

# A 2x2 matrix whose rank depends on the parameters:
#   [p1   p1*p2]
#   [p3   p2*p3]
# the second column is p2 times the first, so the rank never exceeds 1.
m = ParamMatrix.from_rows(
    [[p(0), p(0) * p(1)], [p(2), p(1) * p(2)]],
    param_count=3,
)
print("generic rank of the proportional-column matrix:", grank(m))

# Breaking the proportionality restores full generic rank.
m2 = ParamMatrix.from_rows([[p(0), p(0) * p(1)], [p(2), 1]], param_count=3)
print("after replacing one entry with a constant:", grank(m2))

# Evaluation is exact: rationals in, rationals out.
point = ParamPoint(values=(Fraction(1, 2), Fraction(3), Fraction(-2)), seed=0)
print("m evaluated at (1/2, 3, -2):", m.evaluate(point))
print("rank there:", rank_exact(m.evaluate(point)))

# The one-sided guarantee: the rank at ANY point never exceeds the generic rank.
for seed in range(5):
    from sfspectrum import field_point
    from sfspectrum.polymatrix import FIELD_PRIME

    pt = field_point(3, seed=seed)
    r = rank_exact(m.evaluate(pt), FIELD_PRIME)
    print(f"  random field point #{seed}: rank {r} <= grank {grank(m)}")
