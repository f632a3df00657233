"""Cochains over A and over P(A) on a weighted simplicial complex.

A cochain assigns an A-element (or a P(A)-element) to every i-simplex;
simplices missing from the value map carry zero.  The coboundary uses the
alternating-sum convention with simplices oriented by increasing vertex
order.  Norms are weighted support measures: the scheme's degree weights
(normalized to total mass 1) summed over the simplices with nonzero value,
and for P(A) values additionally weighted by the measure of the value.

Cohomology over A = product of Z/m_j is computed one cyclic factor at a
time by the Howell-form linear algebra of :mod:`cosystole.modlinalg` and
recombined; class enumeration goes through an explicit direct-sum
decomposition with annihilator orders.

Cochain file format: lines ``v0 v1 ... : value`` with A-values as residue
tuples ``(a,b)`` and P(A)-values as ``{atom:(a,b), ...}``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .abelian import FiniteAbelianGroup
from .boolean import MeasuredBoolean
from .complexes import SimplicialComplex, WeightScheme, simplex
from .errors import CapacityError, FormatError, InputError
from .modlinalg import quotient_decomposition, solve_matvec
from .search import minimize_coset_norm
from .systems import CellSystem, expanded_system, plain_system

DEFAULT_BUDGET = 1 << 20


@dataclass(frozen=True)
class PACoefficients:
    """Coefficient spec for P(A)-valued cochains.

    ``twist`` is an optional edge labeling giving the co-induced twisted
    module structure of the associated cover; None means the inert (trivial)
    action on the atoms.
    """

    algebra: MeasuredBoolean
    group: FiniteAbelianGroup
    twist: object = None


class Cochain:
    """Degree-i assignment of values to i-simplices (missing = zero)."""

    def __init__(self, complex: SimplicialComplex, degree: int, coeffs, values):
        if not 0 <= degree <= complex.dim:
            raise InputError(f"degree {degree} out of range 0..{complex.dim}")
        self.complex = complex
        self.degree = degree
        self.coeffs = coeffs
        group = self.group
        cleaned = {}
        for s, value in dict(values).items():
            s = simplex(s)
            if len(s) - 1 != degree or not complex.has_simplex(s):
                raise InputError(f"{s} is not a {degree}-simplex of the complex")
            if isinstance(coeffs, PACoefficients):
                value = coeffs.algebra.pa_element(group, dict(value))
                if value:
                    cleaned[s] = value
            else:
                value = group.element(value)
                if not group.is_zero(value):
                    cleaned[s] = value
        self.values = dict(sorted(cleaned.items()))

    @property
    def group(self) -> FiniteAbelianGroup:
        return self.coeffs.group if isinstance(self.coeffs, PACoefficients) else self.coeffs

    def value(self, s):
        s = simplex(s)
        if isinstance(self.coeffs, PACoefficients):
            return self.values.get(s, ())
        return self.values.get(s, self.group.zero())

    def is_zero(self) -> bool:
        return not self.values

    def __eq__(self, other):
        return (
            isinstance(other, Cochain)
            and self.complex is other.complex
            and self.degree == other.degree
            and self.coeffs == other.coeffs
            and self.values == other.values
        )

    def __repr__(self):
        return f"Cochain(degree={self.degree}, support={len(self.values)})"

    def add(self, other: "Cochain") -> "Cochain":
        if other.complex is not self.complex or other.degree != self.degree:
            raise InputError("cochains live on different complexes or degrees")
        group = self.group
        if isinstance(self.coeffs, PACoefficients):
            algebra = self.coeffs.algebra
            out = dict(self.values)
            for s, v in other.values.items():
                total = algebra.pa_add(group, out.get(s, ()), v)
                if total:
                    out[s] = total
                else:
                    out.pop(s, None)
            return Cochain(self.complex, self.degree, self.coeffs, out)
        out = dict(self.values)
        for s, v in other.values.items():
            total = group.add(out.get(s, group.zero()), v)
            if group.is_zero(total):
                out.pop(s, None)
            else:
                out[s] = total
        return Cochain(self.complex, self.degree, self.coeffs, out)

    def neg(self) -> "Cochain":
        group = self.group
        if isinstance(self.coeffs, PACoefficients):
            algebra = self.coeffs.algebra
            return Cochain(
                self.complex,
                self.degree,
                self.coeffs,
                {s: algebra.pa_neg(group, v) for s, v in self.values.items()},
            )
        return Cochain(
            self.complex,
            self.degree,
            self.coeffs,
            {s: group.neg(v) for s, v in self.values.items()},
        )

    # -- text format -------------------------------------------------------

    def format(self) -> str:
        lines = []
        for s, v in self.values.items():
            key = " ".join(str(x) for x in s)
            if isinstance(self.coeffs, PACoefficients):
                body = (
                    "{"
                    + ", ".join(
                        f"{atom}:{FiniteAbelianGroup.format_element(a)}" for atom, a in v
                    )
                    + "}"
                )
            else:
                body = FiniteAbelianGroup.format_element(v)
            lines.append(f"{key} : {body}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str, complex: SimplicialComplex, degree: int, coeffs) -> "Cochain":
        group = coeffs.group if isinstance(coeffs, PACoefficients) else coeffs
        values = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if ":" not in line:
                raise FormatError(f"line {lineno}: expected 'vertices : value'")
            key, _, body = line.partition(":")
            s = tuple(int(tok) for tok in key.split())
            body = body.strip()
            if isinstance(coeffs, PACoefficients):
                if not (body.startswith("{") and body.endswith("}")):
                    raise FormatError(f"line {lineno}: expected {{atom:value, ...}}")
                inner = body[1:-1].strip()
                support = {}
                if inner:
                    depth = 0
                    parts, cur = [], []
                    for ch in inner:
                        if ch == "(":
                            depth += 1
                        elif ch == ")":
                            depth -= 1
                        if ch == "," and depth == 0:
                            parts.append("".join(cur))
                            cur = []
                        else:
                            cur.append(ch)
                    parts.append("".join(cur))
                    for part in parts:
                        atom, _, val = part.partition(":")
                        support[int(atom.strip())] = FiniteAbelianGroup.parse_element(
                            val.strip(), group
                        )
                values[s] = support
            else:
                values[s] = FiniteAbelianGroup.parse_element(body, group)
        return cls(complex, degree, coeffs, values)


# -- systems bridge ----------------------------------------------------------


def system_for(scheme: WeightScheme, coeffs) -> CellSystem:
    if isinstance(coeffs, PACoefficients):
        return expanded_system(scheme, coeffs.group, coeffs.algebra, labeling=coeffs.twist)
    return plain_system(scheme, coeffs)


def to_vec(system: CellSystem, c: Cochain) -> np.ndarray:
    vec = system.zero_vec(c.degree)
    if isinstance(c.coeffs, PACoefficients):
        for s, v in c.values.items():
            for atom, a in v:
                vec[system.index(c.degree, (s, atom))] = a
    else:
        for s, v in c.values.items():
            vec[system.index(c.degree, s)] = v
    return vec


def from_vec(system: CellSystem, complex, degree: int, coeffs, vec: np.ndarray) -> Cochain:
    if isinstance(coeffs, PACoefficients):
        values = {}
        for idx, (s, atom) in enumerate(system.cells[degree]):
            if vec[idx].any():
                values.setdefault(s, {})[atom] = tuple(int(x) for x in vec[idx])
        return Cochain(complex, degree, coeffs, values)
    values = {}
    for idx, s in enumerate(system.cells[degree]):
        if vec[idx].any():
            values[s] = tuple(int(x) for x in vec[idx])
    return Cochain(complex, degree, coeffs, values)


def _default_scheme(c: Cochain) -> WeightScheme:
    return WeightScheme.mu(c.complex)


def _check_scheme(c: Cochain, scheme: WeightScheme | None) -> WeightScheme:
    if scheme is None:
        return _default_scheme(c)
    if scheme.complex is not c.complex:
        raise InputError("weight scheme belongs to a different complex")
    return scheme


# -- engine operations ---------------------------------------------------------


def coboundary(c: Cochain, scheme: WeightScheme | None = None) -> Cochain:
    """The alternating-sum coboundary, one degree up."""
    if c.degree >= c.complex.dim:
        raise InputError(f"no coboundary out of top degree {c.degree}")
    scheme = _check_scheme(c, scheme)
    system = system_for(scheme, c.coeffs)
    vec = to_vec(system, c)
    out = system.delta_vec(c.degree, vec)
    return from_vec(system, c.complex, c.degree + 1, c.coeffs, out)


def is_cocycle(c: Cochain, scheme: WeightScheme | None = None) -> bool:
    if c.degree == c.complex.dim:
        return True
    return coboundary(c, scheme).is_zero()


def norm(c: Cochain, scheme: WeightScheme | None = None) -> Fraction:
    """Weighted support measure of the cochain, in [0, 1]."""
    scheme = _check_scheme(c, scheme)
    system = system_for(scheme, c.coeffs)
    return system.norm_vec(c.degree, to_vec(system, c))


@dataclass
class CohomologyGenerator:
    order: int
    representative: Cochain


@dataclass
class CohomologyStructure:
    """Generators of H^i with annihilator orders, one block per summand.

    Every class has a unique expansion sum(c_t * generator_t) with
    c_t in range(order_t); the trivial group is the empty list.
    """

    complex: SimplicialComplex
    degree: int
    coeffs: object
    generators: list

    @property
    def is_trivial(self) -> bool:
        return not self.generators

    def class_count(self) -> int:
        return math.prod(g.order for g in self.generators)

    def classes(self, include_zero: bool = False):
        """Representative cocycles, one per class."""
        ranges = [range(g.order) for g in self.generators]
        for coeffs_tuple in itertools.product(*ranges):
            if not include_zero and not any(coeffs_tuple):
                continue
            rep = Cochain(self.complex, self.degree, self.coeffs, {})
            for c, gen in zip(coeffs_tuple, self.generators):
                term = gen.representative
                for _ in range(c):
                    rep = rep.add(term)
            yield coeffs_tuple, rep


#: the normal-form linear algebra is polynomial; this guards runaway sizes
#: independently of the exhaustive-search budget
LINALG_CELL_BOUND = 1 << 13


def cohomology(
    X: SimplicialComplex,
    i: int,
    group: FiniteAbelianGroup,
    scheme: WeightScheme | None = None,
    cell_budget: int = LINALG_CELL_BOUND,
) -> CohomologyStructure:
    """Generators of H^i(X, A) with their annihilator orders."""
    scheme = scheme or WeightScheme.mu(X)
    system = plain_system(scheme, group)
    for k in (i - 1, i, i + 1):
        if 0 <= k <= X.dim and system.n(k) > cell_budget:
            raise CapacityError(
                f"{system.n(k)} cells in degree {k} over the linear-algebra bound {cell_budget}"
            )
    generators = []
    for j, modulus in enumerate(group.factors):
        cocycles = system.cocycle_rows(i, modulus)
        coboundaries = system.coboundary_rows(i, modulus)
        for order, vec_row in quotient_decomposition(
            cocycles, coboundaries, system.n(i), modulus
        ):
            vec = system.zero_vec(i)
            vec[:, j] = np.array(vec_row, dtype=np.int64)
            generators.append(
                CohomologyGenerator(order, from_vec(system, X, i, group, vec))
            )
    return CohomologyStructure(X, i, group, generators)


def is_coboundary(c: Cochain, scheme: WeightScheme | None = None):
    """A primitive b with delta(b) = c, or None (certified by the normal form).

    For P(A) coefficients with the trivial action this solves atomwise; a
    twisted spec is solved on its expanded system directly.
    """
    if c.degree == 0:
        return None if not c.is_zero() else Cochain(c.complex, 0, c.coeffs, {})
    scheme = _check_scheme(c, scheme)
    system = system_for(scheme, c.coeffs)
    vec = to_vec(system, c)
    solution = system.zero_vec(c.degree - 1)
    for j, modulus in enumerate(system.group.factors):
        rows = system.delta_rows(c.degree - 1, modulus)
        rhs = [int(v) for v in vec[:, j]]
        x = solve_matvec(rows, system.n(c.degree - 1), rhs, modulus)
        if x is None:
            return None
        solution[:, j] = np.array(x, dtype=np.int64)
    b = from_vec(system, c.complex, c.degree - 1, c.coeffs, solution)
    return b


class CohomologyClass:
    """A cohomology class carried by a cocycle representative."""

    def __init__(self, representative: Cochain, scheme: WeightScheme | None = None):
        if not is_cocycle(representative, scheme):
            raise InputError("representative is not a cocycle")
        self.representative = representative
        self.degree = representative.degree
        self.coeffs = representative.coeffs

    @property
    def complex(self):
        return self.representative.complex


@dataclass
class CosystolicNormResult:
    value: Fraction
    witness: Cochain
    certified: bool
    method: str
    nodes: int = 0


def cosystolic_norm(
    cls: CohomologyClass,
    scheme: WeightScheme | None = None,
    budget: int = DEFAULT_BUDGET,
    heuristic: bool = False,
    seed: int = 0,
    workers: int = 1,
) -> CosystolicNormResult:
    """min over b of norm(rep + delta b): the class norm in the quotient.

    Exhaustive mode is exact with a deterministic witness; over budget it
    raises CapacityError unless heuristic mode is allowed, whose result is
    flagged as a non-certified upper bound.
    """
    rep = cls.representative
    scheme = _check_scheme(rep, scheme)
    system = system_for(scheme, rep.coeffs)
    base = to_vec(system, rep)
    rows_per_factor = [
        system.coboundary_rows(rep.degree, modulus)
        for modulus in system.group.factors
    ]
    outcome = minimize_coset_norm(
        system,
        rep.degree,
        base,
        rows_per_factor,
        budget=budget,
        heuristic=heuristic,
        seed=seed,
        workers=workers,
    )
    witness = from_vec(system, rep.complex, rep.degree, rep.coeffs, outcome.vec)
    return CosystolicNormResult(
        outcome.value, witness, outcome.certified, outcome.method, outcome.nodes
    )


@dataclass
class CosystoleResult:
    """Minimum class norm over nonzero classes; value None means there are
    no nonzero classes (the cosystolic inequality is vacuously true)."""

    value: Fraction | None
    witness_class: tuple | None
    witness: Cochain | None
    certified: bool
    class_count: int


def cosystole(
    X: SimplicialComplex,
    i: int,
    group: FiniteAbelianGroup,
    scheme: WeightScheme | None = None,
    budget: int = DEFAULT_BUDGET,
    heuristic: bool = False,
    seed: int = 0,
    workers: int = 1,
) -> CosystoleResult:
    """Infimum of the class norm over nonzero classes of H^i(X, A)."""
    scheme = scheme or WeightScheme.mu(X)
    structure = cohomology(X, i, group, scheme=scheme)
    if structure.is_trivial:
        return CosystoleResult(None, None, None, True, 0)
    n_classes = structure.class_count() - 1
    if n_classes > budget:
        raise CapacityError(f"{n_classes} nonzero classes exceed budget {budget}")
    best = None
    certified = True
    for coeffs_tuple, rep in structure.classes():
        result = cosystolic_norm(
            CohomologyClass(rep, scheme),
            scheme=scheme,
            budget=budget,
            heuristic=heuristic,
            seed=seed,
            workers=workers,
        )
        certified = certified and result.certified
        if best is None or result.value < best[0]:
            best = (result.value, coeffs_tuple, result.witness)
    return CosystoleResult(best[0], best[1], best[2], certified, n_classes)


def random_cochain(
    X: SimplicialComplex,
    i: int,
    group: FiniteAbelianGroup,
    rng,
    density: float = 0.5,
) -> Cochain:
    """Seeded random plain cochain (testing/demo helper)."""
    values = {}
    for s in X.simplices(i):
        if rng.random() < density:
            values[s] = tuple(rng.randrange(m) for m in group.factors)
    return Cochain(X, i, group, values)


def lipschitz_constant(X: SimplicialComplex, i: int, scheme: WeightScheme) -> Fraction:
    """max over i-simplices of (coface weight mass) / (own weight)."""
    if i >= X.dim:
        return Fraction(0)
    wi = scheme.degree_weights(i)
    wj = scheme.degree_weights(i + 1)
    best = Fraction(0)
    for s in X.simplices(i):
        mass = sum((wj[t] for t in X.cofacets(s)), Fraction(0))
        ratio = mass / wi[s]
        if ratio > best:
            best = ratio
    return best
