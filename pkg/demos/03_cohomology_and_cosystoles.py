"""Cochains, cohomology, and certified cosystolic norms.

Everything rational here is exact.  The cosystolic norm of a class is the
smallest weighted support over all representatives; the search is a
branch-and-bound over a canonical coset enumeration, certified whenever it
finishes, with shortcut certificates for zero classes and single-cell
optima.
"""

from cosystole import (
    Cochain,
    CohomologyClass,
    FiniteAbelianGroup,
    coboundary,
    cohomology,
    cosystole,
    cosystolic_norm,
    cycle_complex,
    is_coboundary,
    norm,
    torus_7,
)

Z2 = FiniteAbelianGroup((2,))
Z3 = FiniteAbelianGroup((3,))

# the 3-cycle: its first cohomology over Z/2 has a single order-2 class
C3 = cycle_complex(3)
structure = cohomology(C3, 1, Z2)
print("H^1(C3, Z/2):", [(g.order, g.representative.values) for g in structure.generators])

# the generator cannot be a coboundary, and the normal form certifies that
gen = structure.generators[0].representative
print("primitive for the generator:", is_coboundary(gen))

# its cosystolic norm: one edge out of three
result = cosystolic_norm(CohomologyClass(gen))
print("class norm:", result.value, "method:", result.method, "certified:", result.certified)

# the cosystole scans the nonzero classes; for C3 there is only one
print("cosystole:", cosystole(C3, 1, Z2).value)

# the 7-vertex torus has two degree-1 generators; the minimum support of a
# nonzero class turns out to be six of the 21 edges
T, _ = torus_7()
print("torus cosystole (degree 1, Z/2):", cosystole(T, 1, Z2).value)

# in the top degree a single triangle carries the fundamental class
top = cosystole(T, 2, Z3)
print("torus cosystole (degree 2, Z/3):", top.value)

# coboundaries: build one and watch the engine undo it
b = Cochain(T, 0, Z2, {(0,): (1,), (3,): (1,)})
db = coboundary(b)
print("norm of a coboundary representative:", norm(db))
recovered = is_coboundary(db)
print("recovered primitive matches:", coboundary(recovered).values == db.values)
