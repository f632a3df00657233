"""Building complexes and reading their weight schemes.

A complex is given by its maximal simplices and must be pure: every
simplex sits inside a top-dimensional one.  Two weight schemes matter
downstream: the normalized one (summing to 1 in every degree) and the
recursive one (each weight is the sum of the weights one dimension up).
"""

from fractions import Fraction

from cosystole import SimplicialComplex, complete_complex, octahedron, torus_7
from cosystole.errors import PurityError

# the full triangle: one maximal 2-simplex, closure computed for us
triangle = SimplicialComplex([(0, 1, 2)])
print("triangle:", triangle)
print("  edges:", triangle.simplices(1))

# impure input is rejected with a witness
try:
    SimplicialComplex([(0, 1, 2), (3, 4)])
except PurityError as err:
    print("rejected impure complex, witness:", err.witness)

# the 7-vertex torus: 7 vertices, 21 edges, 14 triangles, Euler number 0
torus, data = torus_7()
print("torus:", torus, "euler:", torus.euler_characteristic())

# normalized weights sum to one in every degree
for i in range(torus.dim + 1):
    total = sum((torus.weight_mu(s) for s in torus.simplices(i)), Fraction(0))
    print(f"  degree {i}: {torus.n_simplices(i)} cells, mu-total {total}")

# each edge of the torus lies in exactly two triangles, so its normalized
# weight is 2 / (3 * 14)
print("  mu of an edge:", torus.weight_mu((0, 1)))

# the recursive weights: m(vertex) = sum of m over its edges
v_weight = torus.weight_m((0,))
edge_sum = sum((torus.weight_m(e) for e in torus.cofacets((0,))), Fraction(0))
print("  m(vertex 0):", v_weight, "= sum over edges:", edge_sum)

# links: the link of any torus vertex is a 6-cycle
link, mapping = torus.link((0,))
print("link of vertex 0:", link, "vertices map back to", sorted(mapping.values()))

# skeleta: the 1-skeleton of the octahedron is K_{2,2,2}
octa = octahedron()
print("octahedron 1-skeleton:", octa.skeleton(1))

# complete complexes make handy test families
print("K5:", complete_complex(5, 1))
