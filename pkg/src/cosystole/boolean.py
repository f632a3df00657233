"""Finite measured Boolean algebras and the metric group P(A).

A finite atomic measured algebra is a weighted finite set: atoms 1..N with
exact rational weights summing to 1, optionally carrying a group action by
weight-preserving permutations of the atoms.

An element of P(A) is a function atoms -> A stored in normal form: only
atoms with nonzero value appear.  The measure of x is the total weight of
its support and d(x, y) = measure(x - y) makes P(A) a metric abelian
group.  The embedding theta sends a in A to the constant function with
value a.

Text format::

    atoms 4
    weights 1/4 1/4 1/4 1/4
    act g 2 3 4 1

All arithmetic is exact (fractions.Fraction).
"""

from __future__ import annotations

from fractions import Fraction

from . import perms
from .abelian import FiniteAbelianGroup
from .errors import FormatError, InputError, MorphismError

PAElement = tuple  # sorted tuple of (atom, AElement) pairs, values nonzero


class MeasuredBoolean:
    """Atoms 1..size with rational weights summing to 1.

    ``action`` maps generator names to weight-preserving permutations of
    the atoms (0-based tuples on atom indices).
    """

    def __init__(self, weights, action=None):
        self.weights = tuple(Fraction(w) for w in weights)
        self.size = len(self.weights)
        if self.size == 0:
            raise InputError("a measured algebra needs at least one atom")
        if any(w < 0 for w in self.weights):
            raise InputError("atom weights must be non-negative")
        if sum(self.weights) != 1:
            raise InputError(f"atom weights sum to {sum(self.weights)}, not 1")
        self.action = {}
        if action:
            for name, perm in action.items():
                perm = tuple(perm)
                if not perms.is_permutation(perm) or len(perm) != self.size:
                    raise InputError(f"action of {name!r} is not a permutation of the atoms")
                for i, j in enumerate(perm):
                    if self.weights[i] != self.weights[j]:
                        raise InputError(
                            f"action of {name!r} does not preserve weights "
                            f"(atom {i + 1} -> {j + 1})"
                        )
                self.action[name] = perm

    @classmethod
    def uniform(cls, n: int, action=None) -> "MeasuredBoolean":
        return cls([Fraction(1, n)] * n, action=action)

    @property
    def faithful(self) -> bool:
        return all(w > 0 for w in self.weights)

    def atoms(self):
        """Atom labels 1..size."""
        return range(1, self.size + 1)

    def weight(self, atom: int) -> Fraction:
        return self.weights[atom - 1]

    def __eq__(self, other):
        return (
            isinstance(other, MeasuredBoolean)
            and self.weights == other.weights
            and self.action == other.action
        )

    def __repr__(self):
        return f"MeasuredBoolean({len(self.weights)} atoms)"

    # -- P(A) elements -----------------------------------------------------

    def pa_element(self, group: FiniteAbelianGroup, support) -> PAElement:
        """Normal form from a mapping atom -> AElement; zero values dropped."""
        items = []
        seen = set()
        for atom, value in dict(support).items():
            atom = int(atom)
            if not 1 <= atom <= self.size:
                raise InputError(f"atom {atom} outside 1..{self.size}")
            if atom in seen:
                raise InputError(f"atom {atom} listed twice")
            seen.add(atom)
            value = group.element(value)
            if not group.is_zero(value):
                items.append((atom, value))
        return tuple(sorted(items))

    def pa_zero(self) -> PAElement:
        return ()

    def pa_add(self, group: FiniteAbelianGroup, x: PAElement, y: PAElement) -> PAElement:
        self._check_element(group, x)
        self._check_element(group, y)
        acc = dict(x)
        for atom, value in y:
            if atom in acc:
                total = group.add(acc[atom], value)
                if group.is_zero(total):
                    del acc[atom]
                else:
                    acc[atom] = total
            else:
                acc[atom] = value
        return tuple(sorted(acc.items()))

    def pa_neg(self, group: FiniteAbelianGroup, x: PAElement) -> PAElement:
        return tuple((atom, group.neg(value)) for atom, value in x)

    def pa_measure(self, group: FiniteAbelianGroup, x: PAElement) -> Fraction:
        self._check_element(group, x)
        return sum((self.weight(atom) for atom, _v in x), Fraction(0))

    def pa_dist(self, group: FiniteAbelianGroup, x: PAElement, y: PAElement) -> Fraction:
        return self.pa_measure(group, self.pa_add(group, x, self.pa_neg(group, y)))

    def theta(self, group: FiniteAbelianGroup, a) -> PAElement:
        """The embedding a -> constant function with value a."""
        a = group.element(a)
        if group.is_zero(a):
            return ()
        return tuple((atom, a) for atom in self.atoms())

    def pa_act(self, group: FiniteAbelianGroup, word: str, x: PAElement) -> PAElement:
        """Act by a generator word; uppercase letters are inverses.

        The result is x precomposed with the inverse of the word's
        permutation, so the support moves forward under the word and
        measures are preserved.
        """
        perm = self.word_permutation(word)
        return tuple(sorted((perm[atom - 1] + 1, value) for atom, value in x))

    def word_permutation(self, word: str):
        if not self.action:
            raise InputError("this algebra carries no action")
        out = perms.identity(self.size)
        for letter in word:
            if letter.islower():
                if letter not in self.action:
                    raise InputError(f"unknown generator {letter!r}")
                out = perms.compose(self.action[letter], out)
            elif letter.isupper():
                low = letter.lower()
                if low not in self.action:
                    raise InputError(f"unknown generator {low!r}")
                out = perms.compose(perms.invert(self.action[low]), out)
            else:
                raise InputError(f"bad letter {letter!r} in word")
        return out

    def _check_element(self, group: FiniteAbelianGroup, x: PAElement):
        for atom, value in x:
            if not 1 <= atom <= self.size:
                raise InputError(f"atom {atom} outside 1..{self.size}")
            group.check(value)
            if group.is_zero(value):
                raise InputError("element not in normal form: zero value present")

    # -- text format ---------------------------------------------------------

    @classmethod
    def parse(cls, text: str) -> "MeasuredBoolean":
        n = None
        weights = None
        action = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] == "atoms":
                n = int(parts[1])
            elif parts[0] == "weights":
                weights = [Fraction(tok) for tok in parts[1:]]
            elif parts[0] == "act":
                action[parts[1]] = perms.from_one_line(" ".join(parts[2:]))
            else:
                raise FormatError(f"line {lineno}: unknown directive {parts[0]!r}")
        if n is None or weights is None:
            raise FormatError("need both an 'atoms' and a 'weights' line")
        if len(weights) != n:
            raise FormatError(f"{len(weights)} weights for {n} atoms")
        return cls(weights, action=action or None)

    def format(self) -> str:
        lines = [f"atoms {self.size}", "weights " + " ".join(str(w) for w in self.weights)]
        for name in sorted(self.action):
            lines.append(f"act {name} " + perms.to_one_line(self.action[name]))
        return "\n".join(lines) + "\n"


class AtomMorphism:
    """Measure-preserving Boolean morphism between finite atomic algebras.

    Presented by the surjection of atoms in the opposite direction: for
    each target atom, ``fibers`` names the source atom it refines.  The
    induced map on A-valued functions transports every source atom's value
    to all target atoms refining it, which preserves measures and commutes
    with addition and with theta.
    """

    def __init__(self, source: MeasuredBoolean, target: MeasuredBoolean, fibers):
        self.source = source
        self.target = target
        self.fibers = tuple(int(f) for f in fibers)
        if len(self.fibers) != target.size:
            raise MorphismError(
                f"fiber map lists {len(self.fibers)} atoms, target has {target.size}"
            )
        totals = [Fraction(0)] * source.size
        for q_atom, p_atom in enumerate(self.fibers, start=1):
            if not 1 <= p_atom <= source.size:
                raise MorphismError(f"target atom {q_atom} refines unknown atom {p_atom}")
            totals[p_atom - 1] += target.weight(q_atom)
        for p_atom, total in enumerate(totals, start=1):
            if total != source.weight(p_atom):
                raise MorphismError(
                    f"weights over source atom {p_atom} sum to {total}, "
                    f"expected {source.weight(p_atom)}"
                )

    @classmethod
    def identity(cls, algebra: MeasuredBoolean) -> "AtomMorphism":
        return cls(algebra, algebra, list(range(1, algebra.size + 1)))

    def __call__(self, group: FiniteAbelianGroup, x: PAElement) -> PAElement:
        values = dict(x)
        out = []
        for q_atom, p_atom in enumerate(self.fibers, start=1):
            if p_atom in values:
                out.append((q_atom, values[p_atom]))
        return tuple(out)
