"""Expansion constants, expander verdicts, and the spectral layer.

The expansion constant in degree i bounds the coboundary norm from below
by the distance to the cocycles.  Exhaustive values are exact rationals;
the spectral quantities (upper Laplacian, link random walks) are floating
point and never mixed into certified verdicts.
"""

from fractions import Fraction

from cosystole import (
    FiniteAbelianGroup,
    SimplicialComplex,
    coboundary_expander_check,
    complete_complex,
    cosystolic_expander_check,
    cycle_complex,
    expansion_constant,
    flag_complex_subspaces,
    km_hypotheses_report,
    skeleton_expansion,
    torus_7,
    upper_laplacian_spectrum,
)

Z2 = FiniteAbelianGroup((2,))

# degree-0 expansion is a weighted Cheeger quantity; for the full triangle
# any nonconstant 0-cochain cuts two of the three edges
triangle = SimplicialComplex([(0, 1, 2)])
print("triangle eps_0:", expansion_constant(triangle, 0, Z2).value)

# the incidence graph of the Fano plane (the smallest A2 flag complex):
# 14 vertices, 21 edges, certified expansion 2/3 by exhausting 2^14 cochains
fano = flag_complex_subspaces(2)
eps = expansion_constant(fano, 0, Z2)
print("fano flags eps_0:", eps.value, "certified:", eps.certified)

# the two-clause verdicts: the 3-cycle meets a 1/3 target but not 1/2
C3 = cycle_complex(3)
print("C3 at 1/3:", cosystolic_expander_check(C3, Z2, [0, 1], Fraction(1, 3)).verdict)
print("C3 at 1/2:", cosystolic_expander_check(C3, Z2, [0, 1], Fraction(1, 2)).verdict)

# coboundary expanders additionally need vanishing cohomology in degrees >= 1
print("triangle coboundary check:", coboundary_expander_check(triangle, Z2, [0, 1]).verdict)
print("C3 coboundary check:", coboundary_expander_check(C3, Z2, [0, 1]).verdict)

# the upper Laplacian in the recursive-weight inner product: for complete
# graphs the nonzero eigenvalue is n/(n-1)
for n in (3, 4, 5):
    spectrum = upper_laplacian_spectrum(complete_complex(n, 1), 0)
    print(f"K{n} Laplacian spectrum:", [round(v, 6) for v in spectrum])

# the skeleton-expansion proxy: second-largest absolute walk eigenvalue,
# smaller is better, disconnected skeletons score 1
lambdas = skeleton_expansion(complete_complex(4, 1))
print("lambda(K4):", round(lambdas[()], 6))

# the hypothesis checklist for the torus: vertex links are 6-cycles, which
# pass the coboundary condition but are bipartite, so their walk carries
# an eigenvalue -1 and the skeleton condition honestly fails
T, _ = torus_7()
report = km_hypotheses_report(T, Z2, beta_target=Fraction(1, 10), mu_target=0.99)
print("torus degree bound:", report.degree_bound)
print("links coboundary expanders:", report.condition_links_expander)
print("skeleton condition met:", report.condition_skeleton)
