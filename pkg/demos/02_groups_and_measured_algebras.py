"""Finite abelian coefficients and measured Boolean algebras.

The coefficient group is a product of cyclic factors; elements are tuples
of residues.  A finite measured algebra is a weighted set of atoms; its
A-valued simple functions form the metric group P(A), where the distance
between two functions is the measure of the set where they differ.
"""

from fractions import Fraction

from cosystole import AtomMorphism, FiniteAbelianGroup, MeasuredBoolean

# groups parse from the Z/2 x Z/3 syntax
A = FiniteAbelianGroup.parse("Z/2 x Z/3")
print("A =", A, "order", A.order)
x = A.element((1, 2))
print("x + x =", A.add(x, x), "   -x =", A.neg(x))

# a measured algebra with three atoms of unequal weight
P = MeasuredBoolean([Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)])
print("faithful:", P.faithful)

# P(A) elements are atom -> value tables in normal form (no zero values)
f = P.pa_element(A, {1: (1, 0), 2: (0, 2)})
g = P.pa_element(A, {2: (0, 1), 3: (1, 1)})
print("f =", f)
print("f + g =", P.pa_add(A, f, g))
print("measure f =", P.pa_measure(A, f), "  d(f, g) =", P.pa_dist(A, f, g))

# the constant embedding theta: nonzero group elements land at distance 1
t1 = P.theta(A, (1, 0))
t2 = P.theta(A, (0, 1))
print("d(theta(a), theta(b)) =", P.pa_dist(A, t1, t2))

# a weight-preserving action permutes the atoms; the measure never changes
Q = MeasuredBoolean.uniform(3, action={"g": (1, 2, 0)})
h = Q.pa_element(A, {1: (1, 1)})
print("g . h =", Q.pa_act(A, "g", h), " (measure", Q.pa_measure(A, h), ")")

# morphisms are presented by the refinement map on atoms: each target atom
# names the source atom it subdivides, with matching total weights
fine = MeasuredBoolean.uniform(6)
coarse = MeasuredBoolean.uniform(3)
split = AtomMorphism(coarse, fine, [1, 1, 2, 2, 3, 3])
k = coarse.pa_element(A, {2: (1, 2)})
print("transported:", split(A, k))
print("measure preserved:", fine.pa_measure(A, split(A, k)) == coarse.pa_measure(A, k))
