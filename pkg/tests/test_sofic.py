import itertools
import random
from fractions import Fraction

import pytest

from cosystole import perms
from cosystole.abelian import FiniteAbelianGroup
from cosystole.errors import CapacityError, InputError, StructureError
from cosystole.extensions import (
    cyclic_nonsplit,
    dihedral_d4,
    heisenberg_mod2,
    library,
    quaternion_q8,
    split_elementary,
)
from cosystole.sofic import (
    AlmostHom,
    CentralExtensionSpec,
    ExtensionApproximation,
    Presentation,
    afree_vanishing_check,
    compare_delta_beta,
    defect_cocycle,
    defect_report,
    free_reduce,
    induce_quotient,
    stability_match,
)

import oracles

Z2 = FiniteAbelianGroup((2,))


def test_word_eval_examples():
    phi = AlmostHom(3, {"a": (1, 2, 0)})
    assert phi.word_eval("") == (0, 1, 2)
    assert phi.word_eval("aaa") == (0, 1, 2)
    phi2 = AlmostHom(4, {"a": (1, 0, 2, 3), "b": (0, 1, 3, 2)})
    assert phi2.word_eval("abAB") == (0, 1, 2, 3)  # commuting images


def test_hamming_metric_properties():
    rng = random.Random(17)
    # exhaustive bi-invariance and subadditivity on Sym(4)
    sym4 = list(itertools.permutations(range(4)))
    for s in sym4:
        for t in sym4:
            d = perms.hamming_distance(s, t)
            for u in sym4:
                assert perms.hamming_distance(perms.compose(u, s), perms.compose(u, t)) == d
                assert perms.hamming_distance(perms.compose(s, u), perms.compose(t, u)) == d
    for _ in range(500):
        n = 8
        s = tuple(rng.sample(range(n), n))
        t = tuple(rng.sample(range(n), n))
        st = perms.compose(s, t)
        assert perms.moved_fraction(st) <= perms.moved_fraction(s) + perms.moved_fraction(t)
        assert perms.hamming_distance(s, s) == 0


def test_defect_report_examples():
    pres = Presentation(("a",), ("aaa",))
    honest = AlmostHom(3, {"a": perms.cycle(3)})
    rep = defect_report(honest, pres, word_length=2)
    assert rep.max_relator_defect == 0
    four = AlmostHom(4, {"a": perms.cycle(4)})
    rep4 = defect_report(four, pres, word_length=2)
    assert rep4.relator_defects["aaa"] == 1
    assert "triviality" in rep4.caveat
    with pytest.raises(CapacityError):
        defect_report(honest, pres, word_length=10, budget=10)


def test_free_reduction_validation():
    assert free_reduce("aAb") == "b"
    with pytest.raises(InputError):
        Presentation(("a",), ("aA",))


def test_library_extensions_are_exact():
    for inst in library():
        phi = inst.approximation
        for r in inst.spec.presentation.relators:
            assert phi.hom.word_eval(r) == phi.central_perm(inst.spec.alpha[r]), inst.name
        assert phi.commutes_with_center(), inst.name


def test_library_alpha_values():
    by_name = {inst.name: inst for inst in library()}
    assert by_name["Q8 over Z/2"].spec.alpha == {"aa": (1,), "bb": (1,), "abAB": (1,)}
    assert by_name["D4 over Z/2"].spec.alpha == {"aa": (1,), "bb": (0,), "abAB": (1,)}
    assert by_name["Heisenberg mod 2 over Z/2"].spec.alpha == {
        "aa": (0,), "bb": (0,), "abAB": (1,)
    }
    assert by_name["(Z/2)^3 split over Z/2"].spec.alpha == {
        "aa": (0,), "bb": (0,), "abAB": (0,)
    }


def test_induce_quotient_q8():
    inst = quaternion_q8()
    induced = induce_quotient(inst.approximation)
    assert induced.hom.n == 4
    assert induced.ambiguity_rate == 0
    a, b = induced.hom.images["a"], induced.hom.images["b"]
    ident = perms.identity(4)
    assert perms.compose(a, a) == ident and perms.compose(b, b) == ident
    assert perms.compose(a, b) == perms.compose(b, a)
    assert all(a[i] != i for i in range(4))


def test_induce_commutes_with_disjoint_union():
    inst = cyclic_nonsplit(4, 2)
    phi = inst.approximation
    n = phi.n
    doubled_hom = AlmostHom(
        2 * n,
        {
            name: tuple(list(img) + [x + n for x in img])
            for name, img in phi.hom.images.items()
        },
    )
    doubled_a = [tuple(list(p) + [x + n for x in p]) for p in phi.a_images]
    doubled = ExtensionApproximation(phi.group, doubled_hom, doubled_a)
    ind = induce_quotient(phi).hom
    ind2 = induce_quotient(doubled).hom
    assert ind2.n == 2 * ind.n
    for name in ind.images:
        block = ind.images[name]
        expected = tuple(list(block) + [x + ind.n for x in block])
        assert ind2.images[name] == expected


def test_structure_validation():
    hom = AlmostHom(4, {"a": (1, 2, 3, 0)})
    with pytest.raises(StructureError):
        # central permutation with a fixed point: not free
        ExtensionApproximation(Z2, hom, [(0, 1, 3, 2)])
    with pytest.raises(StructureError):
        # order does not divide 2
        ExtensionApproximation(Z2, hom, [(1, 2, 3, 0)])


def test_defect_cocycle_transversal_independence():
    for inst in (quaternion_q8(), dihedral_d4(), heisenberg_mod2()):
        phi = inst.approximation
        induced = induce_quotient(phi).hom
        base = defect_cocycle(phi)
        group = phi.group
        # all transversals: pick an A-translate of each section point
        orbits = [
            [x for x in range(phi.n) if phi.orbit_of[x] == o] for o in range(phi.m)
        ]
        for combo in itertools.product(*orbits):
            other = defect_cocycle(phi, section=list(combo))
            # difference of betas is the coboundary of the transversal shift
            shift = [
                group.sub(phi.coords[combo[o]], phi.coords[base.section[o]])
                for o in range(phi.m)
            ]
            for name in base.beta:
                img = induced.images[name]
                for o in range(phi.m):
                    expected = group.add(
                        base.beta[name][o],
                        group.sub(shift[o], shift[img[o]]),
                    )
                    assert other.beta[name][o] == expected, (inst.name, name, o)


def test_split_extension_beta_zero():
    inst = split_elementary(3)
    cocycle = defect_cocycle(inst.approximation)
    assert all(
        all(a == (0,) for a in table) for table in cocycle.beta.values()
    )
    report = compare_delta_beta(inst.approximation, inst.spec)
    assert report.minimum == 1


def test_compare_delta_beta_exact_sweep():
    for inst in library():
        report = compare_delta_beta(inst.approximation, inst.spec)
        assert report.minimum == 1, inst.name


def test_compare_delta_beta_matches_oracle_walk():
    for inst in (quaternion_q8(), dihedral_d4()):
        phi = inst.approximation
        induced = induce_quotient(phi).hom
        cocycle = defect_cocycle(phi)
        images = {k: v for k, v in induced.images.items()}
        for r in inst.spec.presentation.relators:
            for o in range(phi.m):
                total = oracles.walk_beta_sum(
                    r, images, cocycle.beta, phi.group.factors, o
                )
                assert total == inst.spec.alpha[r]


def test_corruption_degrades_agreement():
    inst = quaternion_q8()
    phi = inst.approximation
    img = list(phi.hom.images["a"])
    img[0], img[1] = img[1], img[0]
    corrupted = ExtensionApproximation(
        phi.group,
        AlmostHom(phi.n, {"a": tuple(img), "b": phi.hom.images["b"]}),
        phi.a_images,
    )
    report = compare_delta_beta(corrupted, inst.spec)
    assert report.minimum < 1
    # at most (2 points / n) * letters of damage per relator
    for r, frac in report.fractions.items():
        assert frac >= 1 - Fraction(2 * len(r), corrupted.n)


def test_afree_vanishing_sweep():
    for inst in library():
        cert = afree_vanishing_check(inst.approximation, inst.spec)
        assert cert.verdict == "consistent", inst.name
        assert cert.verified


def test_afree_rejects_inexact_input():
    inst = quaternion_q8()
    phi = inst.approximation
    img = list(phi.hom.images["a"])
    img[0], img[1] = img[1], img[0]
    broken = ExtensionApproximation(
        phi.group,
        AlmostHom(phi.n, {"a": tuple(img), "b": phi.hom.images["b"]}),
        phi.a_images,
    )
    with pytest.raises(StructureError):
        afree_vanishing_check(broken, inst.spec)


def test_stability_self_match():
    z6 = AlmostHom(6, {"a": perms.cycle(6)})
    partition = [[0, 2, 4], [1, 3, 5]]
    result = stability_match(z6, partition, [z6], ["a", "aa"], Fraction(1, 10))
    assert result.best.discrepancy == 0
    assert result.meets_epsilon


def test_stability_defective_five_cycle():
    # a 5-cycle as an almost-action of Z/6: compare against honest Z/5, Z/6
    z5 = AlmostHom(5, {"a": perms.cycle(5)})
    z6 = AlmostHom(6, {"a": perms.cycle(6)})
    partition = [[0, 1, 2], [3, 4]]
    result = stability_match(z5, partition, [z5, z6], ["a"], Fraction(1, 2))
    assert result.best is not None
    assert result.rows[0].discrepancy == 0  # itself is among the candidates
    assert all(row.certified for row in result.rows)
    # exhaustive values are reproducible
    again = stability_match(z5, partition, [z5, z6], ["a"], Fraction(1, 2))
    assert [r.discrepancy for r in again.rows] == [r.discrepancy for r in result.rows]


def test_stability_heuristic_flagged():
    z12 = AlmostHom(12, {"a": perms.cycle(12)})
    partition = [[i for i in range(12) if i % 2 == 0], [i for i in range(12) if i % 2 == 1]]
    result = stability_match(
        z12, partition, [z12], ["a"], Fraction(1, 10), budget=100, seed=5
    )
    assert not result.rows[0].certified
    assert result.rows[0].discrepancy is not None


def test_text_formats_roundtrip():
    pres = Presentation(("a", "b"), ("aa", "bb", "abAB"))
    assert Presentation.parse(pres.format()) == pres
    hom = AlmostHom(4, {"a": (1, 0, 3, 2), "b": (2, 3, 0, 1)})
    back = AlmostHom.parse(hom.format())
    assert back.n == hom.n and back.images == hom.images
    inst = quaternion_q8()
    spec_back = CentralExtensionSpec.parse(inst.spec.format())
    assert spec_back.alpha == inst.spec.alpha
    approx_back = ExtensionApproximation.parse(inst.approximation.format())
    assert approx_back.hom.images == inst.approximation.hom.images
    assert approx_back.a_images == inst.approximation.a_images
