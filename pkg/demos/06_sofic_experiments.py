"""Almost-representations, defect cochains, and extension experiments.

A central extension acting on a finite set with an exact free central
action induces an action on the central orbits; a transversal turns each
generator into a table of central displacements.  Summing those along a
relator recovers the classifying value of the relator wherever the action
is exact, degrades controllably under corruption, and the corresponding
linear system always has a certified solution for exact free actions.
"""

from fractions import Fraction

from cosystole import (
    AlmostHom,
    ExtensionApproximation,
    Presentation,
    afree_vanishing_check,
    compare_delta_beta,
    defect_cocycle,
    defect_report,
    induce_quotient,
    stability_match,
)
from cosystole.extensions import library, quaternion_q8
from cosystole import perms

# relator defects of a deliberately wrong action: a 4-cycle pretending to
# have order three moves every point under the relator
pres = Presentation(("a",), ("aaa",))
wrong = AlmostHom(4, {"a": perms.cycle(4)})
report = defect_report(wrong, pres, word_length=2)
print("relator defect of the 4-cycle:", report.relator_defects["aaa"])

# the quaternion group acting on itself, with its center as the central A
q8 = quaternion_q8()
print("alpha' of Q8:", q8.spec.alpha)

# the induced action on the 4 central orbits is the Klein four-group
induced = induce_quotient(q8.approximation)
print("induced orbits:", induced.hom.n, "ambiguity:", induced.ambiguity_rate)

# the defect cochain beta and its relator sums: agreement 1 when exact
beta = defect_cocycle(q8.approximation)
print("beta tables:", beta.beta)
agreement = compare_delta_beta(q8.approximation, q8.spec)
print("agreement fractions:", {r: str(v) for r, v in agreement.fractions.items()})

# corrupt one generator by a transposition and watch the good part shrink
img = list(q8.approximation.hom.images["a"])
img[0], img[1] = img[1], img[0]
corrupted = ExtensionApproximation(
    q8.approximation.group,
    AlmostHom(8, {"a": tuple(img), "b": q8.approximation.hom.images["b"]}),
    q8.approximation.a_images,
)
damaged = compare_delta_beta(corrupted, q8.spec)
print("after corruption:", {r: str(v) for r, v in damaged.fractions.items()})

# the vanishing statement at finite scale: a solvable linear system over A
for inst in library():
    cert = afree_vanishing_check(inst.approximation, inst.spec)
    print(f"  {inst.name}: {cert.verdict}")

# stability matching: statistics of a partition under an almost-action are
# mirrored in an honest finite action
z6 = AlmostHom(6, {"a": perms.cycle(6)})
z5 = AlmostHom(5, {"a": perms.cycle(5)})
result = stability_match(
    z5,
    [[0, 1, 2], [3, 4]],
    [z5, z6],
    words=["a", "aa"],
    epsilon=Fraction(1, 3),
)
print("best candidate:", result.best.name, "discrepancy:", result.best.discrepancy)
