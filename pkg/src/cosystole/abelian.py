"""Finite abelian groups given as explicit products of cyclic factors.

A group is a tuple of cyclic orders ``(m_1, ..., m_t)``; an element is a
tuple of least non-negative residues.  The integer scaling ``n * x`` is the
Z-module structure needed for the signs in simplicial coboundaries.

>>> g = FiniteAbelianGroup((2, 3))
>>> g.add((1, 2), (1, 2))
(0, 1)
>>> g.scale(-1, (0, 1))
(0, 2)
>>> list(FiniteAbelianGroup((2,)).elements())
[(0,), (1,)]
"""

from __future__ import annotations

import itertools
import math

from .errors import CapacityError, FormatError, InputError

AElement = tuple  # tuple of residues, one per cyclic factor

#: elements beyond this are refused by enumerate(); exhaustive searches
#: elsewhere have their own budgets
ENUMERATION_BOUND = 1 << 20


class FiniteAbelianGroup:
    """Product of cyclic groups Z/m_1 x ... x Z/m_t, each m_j >= 2.

    The empty factor list encodes the trivial group, whose only element is
    the empty tuple.
    """

    __slots__ = ("factors", "order")

    def __init__(self, factors=()):
        factors = tuple(int(m) for m in factors)
        for m in factors:
            if m < 2:
                raise InputError(f"cyclic factor {m} < 2")
        self.factors = factors
        self.order = math.prod(factors)

    def __eq__(self, other):
        return isinstance(other, FiniteAbelianGroup) and self.factors == other.factors

    def __hash__(self):
        return hash(self.factors)

    def __repr__(self):
        return f"FiniteAbelianGroup({self.factors})"

    def __str__(self):
        if not self.factors:
            return "trivial"
        return " x ".join(f"Z/{m}" for m in self.factors)

    # -- element arithmetic ------------------------------------------------

    def zero(self) -> AElement:
        return (0,) * len(self.factors)

    def is_zero(self, x: AElement) -> bool:
        return all(c == 0 for c in x)

    def element(self, coords) -> AElement:
        """Canonical representative with coordinatewise reduction."""
        coords = tuple(coords)
        if len(coords) != len(self.factors):
            raise InputError(
                f"element {coords} has {len(coords)} coordinates, group has "
                f"{len(self.factors)} factors"
            )
        return tuple(c % m for c, m in zip(coords, self.factors))

    def check(self, x: AElement) -> AElement:
        if len(x) != len(self.factors):
            raise InputError(f"element {x} does not fit group {self}")
        if any(not (0 <= c < m) for c, m in zip(x, self.factors)):
            raise InputError(f"element {x} is not reduced for group {self}")
        return x

    def add(self, x: AElement, y: AElement) -> AElement:
        self.check(x)
        self.check(y)
        return tuple((a + b) % m for a, b, m in zip(x, y, self.factors))

    def neg(self, x: AElement) -> AElement:
        return self.scale(-1, x)

    def sub(self, x: AElement, y: AElement) -> AElement:
        return self.add(x, self.neg(y))

    def scale(self, n: int, x: AElement) -> AElement:
        self.check(x)
        return tuple((n * c) % m for c, m in zip(x, self.factors))

    def element_order(self, x: AElement) -> int:
        self.check(x)
        order = 1
        for c, m in zip(x, self.factors):
            order = math.lcm(order, m // math.gcd(c, m))
        return order

    def elements(self):
        """All elements in lexicographic coordinate order, zero first."""
        if self.order > ENUMERATION_BOUND:
            raise CapacityError(
                f"group of order {self.order} exceeds enumeration bound "
                f"{ENUMERATION_BOUND}"
            )
        return (tuple(c) for c in itertools.product(*(range(m) for m in self.factors)))

    # -- text syntax -------------------------------------------------------

    @classmethod
    def parse(cls, text: str) -> "FiniteAbelianGroup":
        """Parse ``Z/2 x Z/3`` (whitespace-insensitive, ``x`` separator).

        >>> FiniteAbelianGroup.parse("Z/2xZ/3").factors
        (2, 3)
        """
        compact = text.replace(" ", "").replace("\t", "")
        if compact in ("", "trivial", "0", "1"):
            return cls(())
        factors = []
        for part in compact.split("x"):
            if not part.upper().startswith("Z/"):
                raise FormatError(f"bad group syntax {text!r}: expected Z/<m> factors")
            try:
                factors.append(int(part[2:]))
            except ValueError:
                raise FormatError(f"bad cyclic order in {text!r}") from None
        return cls(factors)

    @staticmethod
    def parse_element(text: str, group: "FiniteAbelianGroup") -> AElement:
        """Parse ``(1,2)``; a bare integer is allowed for one factor."""
        body = text.strip()
        if body.startswith("(") and body.endswith(")"):
            body = body[1:-1]
        parts = [p for p in body.replace(",", " ").split() if p]
        try:
            coords = [int(p) for p in parts]
        except ValueError:
            raise FormatError(f"bad element syntax {text!r}") from None
        return group.element(coords)

    @staticmethod
    def format_element(x: AElement) -> str:
        return "(" + ",".join(str(c) for c in x) + ")"
