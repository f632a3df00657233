"""A small library of central extensions acting regularly on themselves.

Each entry packages a finite group with a chosen central subgroup A, the
quotient presentation with lifts of its generators, the classifying
relator values alpha'(r) (the lift of r evaluated in the group, read off
in A), and the regular-action extension approximation: the group acting on
its own elements by left translation, A acting through the same
translations.

Elements are encoded as sortable tuples so point numbering, and with it
every downstream permutation, is deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .abelian import FiniteAbelianGroup
from .errors import InputError
from .sofic import AlmostHom, CentralExtensionSpec, ExtensionApproximation, Presentation


@dataclass
class ExtensionInstance:
    name: str
    spec: CentralExtensionSpec
    approximation: ExtensionApproximation


def _regular_instance(name, elements, mult, inverse, identity, presentation, lifts, a_group, a_gens):
    """Build the regular-action instance from an abstract group.

    a_gens are elements generating the central subgroup, one per cyclic
    factor of a_group; alpha' is computed by evaluating each relator on
    the lifts and expressing the result in A-coordinates.
    """
    elements = sorted(elements)
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)

    def translation(g):
        return tuple(index[mult(g, e)] for e in elements)

    # coordinates of central elements
    a_coords = {identity: a_group.zero()}
    frontier = [identity]
    while frontier:
        e = frontier.pop()
        for j, gen in enumerate(a_gens):
            f = mult(gen, e)
            if f not in a_coords:
                step = tuple(1 if k == j else 0 for k in range(len(a_gens)))
                a_coords[f] = a_group.add(a_coords[e], a_group.element(step))
                frontier.append(f)
    if len(a_coords) != a_group.order:
        raise InputError(f"{name}: central generators do not span a copy of {a_group}")

    def evaluate(word):
        g = identity
        for ch in word:
            h = lifts[ch.lower()]
            g = mult(g, h if ch.islower() else inverse(h))
        return g

    alpha = {}
    for r in presentation.relators:
        value = evaluate(r)
        if value not in a_coords:
            raise InputError(f"{name}: relator {r!r} does not land in the center A")
        alpha[r] = a_coords[value]
    spec = CentralExtensionSpec(presentation, a_group, alpha)
    hom = AlmostHom(n, {g: translation(lifts[g]) for g in presentation.generators})
    approx = ExtensionApproximation(a_group, hom, [translation(g) for g in a_gens])
    return ExtensionInstance(name, spec, approx)


def quaternion_q8() -> ExtensionInstance:
    """Q8 over its center, classifying the nonsplit (1,1,1) cocycle."""
    units = []
    for axis in range(4):
        for sign in (1, -1):
            vec = [0, 0, 0, 0]
            vec[axis] = sign
            units.append(tuple(vec))

    def mult(p, q):
        a1, b1, c1, d1 = p
        a2, b2, c2, d2 = q
        return (
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    def inverse(p):
        a, b, c, d = p
        return (a, -b, -c, -d)

    one = (1, 0, 0, 0)
    i = (0, 1, 0, 0)
    j = (0, 0, 1, 0)
    pres = Presentation(("a", "b"), ("aa", "bb", "abAB"))
    return _regular_instance(
        "Q8 over Z/2",
        units,
        mult,
        inverse,
        one,
        pres,
        {"a": i, "b": j},
        FiniteAbelianGroup((2,)),
        [(-1, 0, 0, 0)],
    )


def dihedral_d4() -> ExtensionInstance:
    """D4 over its center: cocycle (1, 0, 1) on (aa, bb, abAB)."""
    elements = [(r, f) for r in range(4) for f in range(2)]

    def mult(p, q):
        r1, f1 = p
        r2, f2 = q
        return ((r1 + (r2 if f1 == 0 else -r2)) % 4, (f1 + f2) % 2)

    def inverse(p):
        r, f = p
        return ((-r) % 4, 0) if f == 0 else p

    pres = Presentation(("a", "b"), ("aa", "bb", "abAB"))
    return _regular_instance(
        "D4 over Z/2",
        elements,
        mult,
        inverse,
        (0, 0),
        pres,
        {"a": (1, 0), "b": (0, 1)},
        FiniteAbelianGroup((2,)),
        [(2, 0)],
    )


def heisenberg_mod2() -> ExtensionInstance:
    """Upper unitriangular 3x3 matrices over F_2: cocycle (0, 0, 1)."""
    elements = [(a, b, c) for a in range(2) for b in range(2) for c in range(2)]

    def mult(p, q):
        a1, b1, c1 = p
        a2, b2, c2 = q
        return ((a1 + a2) % 2, (b1 + b2) % 2, (c1 + c2 + a1 * b2) % 2)

    def inverse(p):
        a, b, c = p
        return (a, b, (c + a * b) % 2)

    pres = Presentation(("a", "b"), ("aa", "bb", "abAB"))
    return _regular_instance(
        "Heisenberg mod 2 over Z/2",
        elements,
        mult,
        inverse,
        (0, 0, 0),
        pres,
        {"a": (1, 0, 0), "b": (0, 1, 0)},
        FiniteAbelianGroup((2,)),
        [(0, 0, 1)],
    )


def cyclic_nonsplit(modulus: int, index: int) -> ExtensionInstance:
    """Z/(modulus) over its index-`index` subgroup, nonsplit for index > 1.

    The quotient is Z/index presented as <a | a^index>, with alpha' the
    class of the generator's power in A = index * Z / modulus Z.
    """
    if modulus % index != 0:
        raise InputError("index must divide the modulus")
    a_order = modulus // index
    elements = list(range(modulus))

    def mult(p, q):
        return (p + q) % modulus

    def inverse(p):
        return (-p) % modulus

    pres = Presentation(("a",), ("a" * index,))
    return _regular_instance(
        f"Z/{modulus} over Z/{a_order}",
        elements,
        mult,
        inverse,
        0,
        pres,
        {"a": 1},
        FiniteAbelianGroup((a_order,)),
        [index],
    )


def split_elementary(rank: int = 3) -> ExtensionInstance:
    """(Z/2)^rank as a split extension over its last coordinate."""
    if rank < 2 or rank > 4:
        raise InputError("supported ranks: 2..4")
    elements = [tuple(v) for v in itertools.product(range(2), repeat=rank)]

    def mult(p, q):
        return tuple((x + y) % 2 for x, y in zip(p, q))

    gens = "abc"[: rank - 1]
    rels = [g + g for g in gens]
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            rels.append(gens[i] + gens[j] + gens[i].upper() + gens[j].upper())
    pres = Presentation(tuple(gens), tuple(rels))
    lifts = {}
    for k, g in enumerate(gens):
        vec = [0] * rank
        vec[k] = 1
        lifts[g] = tuple(vec)
    center_gen = tuple([0] * (rank - 1) + [1])
    return _regular_instance(
        f"(Z/2)^{rank} split over Z/2",
        elements,
        mult,
        lambda p: p,
        tuple([0] * rank),
        pres,
        lifts,
        FiniteAbelianGroup((2,)),
        [center_gen],
    )


def split_z3z3() -> ExtensionInstance:
    """Z/3 x Z/3 split over the second factor."""
    elements = [(a, b) for a in range(3) for b in range(3)]

    def mult(p, q):
        return ((p[0] + q[0]) % 3, (p[1] + q[1]) % 3)

    def inverse(p):
        return ((-p[0]) % 3, (-p[1]) % 3)

    pres = Presentation(("a",), ("aaa",))
    return _regular_instance(
        "Z/3 x Z/3 split over Z/3",
        elements,
        mult,
        inverse,
        (0, 0),
        pres,
        {"a": (1, 0)},
        FiniteAbelianGroup((3,)),
        [(0, 1)],
    )


def d4_times_z2() -> ExtensionInstance:
    """D4 x Z/2 over center(D4) x 0, an order-16 entry."""
    elements = [((r, f), z) for r in range(4) for f in range(2) for z in range(2)]

    def mult(p, q):
        (r1, f1), z1 = p
        (r2, f2), z2 = q
        return (((r1 + (r2 if f1 == 0 else -r2)) % 4, (f1 + f2) % 2), (z1 + z2) % 2)

    def inverse(p):
        (r, f), z = p
        base = ((-r) % 4, 0) if f == 0 else (r, f)
        return (base, (-z) % 2)

    pres = Presentation(
        ("a", "b", "c"),
        ("aa", "bb", "cc", "abAB", "acAC", "bcBC"),
    )
    return _regular_instance(
        "D4 x Z/2 over Z/2",
        elements,
        mult,
        inverse,
        ((0, 0), 0),
        pres,
        {"a": ((1, 0), 0), "b": ((0, 1), 0), "c": ((0, 0), 1)},
        FiniteAbelianGroup((2,)),
        [((2, 0), 0)],
    )


def library():
    """All instances of order <= 16, deterministic order."""
    return [
        quaternion_q8(),
        dihedral_d4(),
        heisenberg_mod2(),
        cyclic_nonsplit(4, 2),
        cyclic_nonsplit(8, 4),
        cyclic_nonsplit(9, 3),
        split_elementary(3),
        split_z3z3(),
        d4_times_z2(),
    ]
