import itertools

import pytest

from cosystole.abelian import FiniteAbelianGroup
from cosystole.errors import CapacityError, FormatError, InputError


def test_add_examples():
    z4 = FiniteAbelianGroup((4,))
    assert z4.add((3,), (2,)) == (1,)
    z23 = FiniteAbelianGroup((2, 3))
    assert z23.add((1, 2), (1, 2)) == (0, 1)
    assert z23.add((1, 2), z23.zero()) == (1, 2)


def test_scale_examples():
    z5 = FiniteAbelianGroup((5,))
    assert z5.scale(-1, (2,)) == (3,)
    z6 = FiniteAbelianGroup((6,))
    assert z6.scale(4, (5,)) == (2,)
    assert z6.scale(0, (5,)) == (0,)


def test_enumerate_examples():
    assert list(FiniteAbelianGroup((2,)).elements()) == [(0,), (1,)]
    assert list(FiniteAbelianGroup((2, 2)).elements()) == [
        (0, 0), (0, 1), (1, 0), (1, 1)
    ]
    assert list(FiniteAbelianGroup(()).elements()) == [()]


def test_enumeration_bound():
    big = FiniteAbelianGroup((2,) * 25)
    with pytest.raises(CapacityError):
        list(big.elements())


def test_shape_errors():
    z2 = FiniteAbelianGroup((2,))
    z22 = FiniteAbelianGroup((2, 2))
    with pytest.raises(InputError):
        z2.add((1,), (1, 0))
    with pytest.raises(InputError):
        z22.check((1,))


@pytest.mark.parametrize(
    "factors", [(2,), (3,), (4,), (2, 2), (2, 3), (8,), (2, 2, 2), (4, 4), (63,)]
)
def test_group_axioms_exhaustive(factors):
    g = FiniteAbelianGroup(factors)
    assert g.order <= 64
    elements = list(g.elements())
    zero = g.zero()
    for x in elements:
        assert g.add(x, zero) == x
        assert g.add(x, g.scale(-1, x)) == zero
    for x, y in itertools.product(elements, repeat=2):
        assert g.add(x, y) == g.add(y, x)
    for x, y, z in itertools.islice(itertools.product(elements, repeat=3), 50000):
        assert g.add(g.add(x, y), z) == g.add(x, g.add(y, z))


@pytest.mark.parametrize("factors", [(2,), (6,), (2, 3), (4, 2)])
def test_scale_by_factor_multiple_kills_coordinate(factors):
    g = FiniteAbelianGroup(factors)
    for x in g.elements():
        for j, m in enumerate(factors):
            for k in range(1, 4):
                assert g.scale(m * k, x)[j] == 0


def test_parse_group_syntax():
    assert FiniteAbelianGroup.parse("Z/2 x Z/3").factors == (2, 3)
    assert FiniteAbelianGroup.parse("  Z/4xZ/2 ").factors == (4, 2)
    assert FiniteAbelianGroup.parse("trivial").factors == ()
    with pytest.raises(FormatError):
        FiniteAbelianGroup.parse("Z2 x 3")


def test_parse_element():
    g = FiniteAbelianGroup((2, 3))
    assert FiniteAbelianGroup.parse_element("(1, 5)", g) == (1, 2)
    assert FiniteAbelianGroup.parse_element("(1,2)", g) == (1, 2)
    assert FiniteAbelianGroup.format_element((1, 2)) == "(1,2)"


def test_element_order():
    g = FiniteAbelianGroup((4, 6))
    assert g.element_order((2, 3)) == 2
    assert g.element_order((1, 1)) == 12
    assert g.element_order(g.zero()) == 1
