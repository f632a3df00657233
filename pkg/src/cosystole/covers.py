"""Finite covers from edge labelings, pushforwards, and isometry checks.

An edge labeling fixes a spanning tree of the 1-skeleton (tree edges carry
the identity) and a permutation of the fiber for each remaining oriented
edge; flatness (the transports around every triangle compose to the
identity) makes the labeling the monodromy of an honest covering.  The
cover's vertices are (v, f), named v * fiber + f so that lifted simplices
keep the base's increasing-vertex orientation.

Two routes compute the same class norm and are compared exactly:

  * downstairs, the pushforward of a cocycle under the constant embedding
    theta lands in the twisted P(A)-cochain complex built from the
    labeling;
  * upstairs, the cocycle pulls back to the cover carrying the fiber
    measure (the base weight split evenly over lifts).

Reading class norms as group cohomology of the fundamental group assumes
the base complex is aspherical (a classifying space); the package cannot
verify that and treats it as an input contract, which cover reports
restate.

Labeling file format: ``fiber N`` (optional when labels are present),
``tree u v`` lines, and ``label u v : p1 p2 ... pN`` lines in one-line
notation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import perms
from .abelian import FiniteAbelianGroup
from .boolean import MeasuredBoolean
from .cochains import (
    DEFAULT_BUDGET,
    Cochain,
    CohomologyClass,
    PACoefficients,
    cosystolic_norm,
    is_coboundary,
    is_cocycle,
)
from .complexes import SimplicialComplex, WeightScheme, simplex
from .errors import CapacityError, FormatError, InputError, LabelingError


class EdgeLabeling:
    """Monodromy data: spanning tree plus fiber permutations off the tree."""

    def __init__(self, base: SimplicialComplex, tree, labels, fiber: int):
        self.base = base
        self.fiber = int(fiber)
        if self.fiber < 1:
            raise InputError("fiber size must be >= 1")
        tree_edges = {simplex(e) for e in tree}
        for e in tree_edges:
            if len(e) != 2 or not base.has_simplex(e):
                raise InputError(f"tree entry {e} is not an edge of the base")
        self._check_spanning_tree(base, tree_edges)
        self.tree = frozenset(tree_edges)
        self.labels = {}
        for e, perm in dict(labels).items():
            e = simplex(e)
            if len(e) != 2 or not base.has_simplex(e):
                raise InputError(f"label edge {e} is not an edge of the base")
            if e in self.tree:
                raise InputError(f"tree edge {e} cannot carry a label")
            perm = tuple(perm)
            if len(perm) != self.fiber or not perms.is_permutation(perm):
                raise InputError(f"label of {e} is not a permutation of the fiber")
            self.labels[e] = perm
        self._validate_flatness()

    @staticmethod
    def _check_spanning_tree(base, tree_edges):
        n = len(base.vertices)
        if len(tree_edges) != n - 1:
            raise InputError(
                f"spanning tree needs {n - 1} edges, got {len(tree_edges)}"
            )
        parent = {v: v for v in base.vertices}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for u, v in sorted(tree_edges):
            ru, rv = find(u), find(v)
            if ru == rv:
                raise InputError("tree edges contain a cycle")
            parent[ru] = rv

    def transport(self, u: int, v: int):
        """Fiber transport along the oriented edge u -> v."""
        e = (u, v) if u < v else (v, u)
        if not self.base.has_simplex(e):
            raise InputError(f"{e} is not an edge of the base")
        if e in self.tree:
            return perms.identity(self.fiber)
        perm = self.labels.get(e, perms.identity(self.fiber))
        return perm if u < v else perms.invert(perm)

    def _validate_flatness(self):
        if self.base.dim < 2:
            return
        for a, b, c in self.base.simplices(2):
            lhs = perms.compose(self.transport(b, c), self.transport(a, b))
            if lhs != self.transport(a, c):
                raise LabelingError(
                    f"labels around triangle {(a, b, c)} do not compose to the identity",
                    witness=(a, b, c),
                )

    def is_transitive(self) -> bool:
        """Whether the label permutations generate a transitive group."""
        reached = {0}
        frontier = [0]
        gens = list(self.labels.values())
        gens += [perms.invert(p) for p in gens]
        while frontier:
            f = frontier.pop()
            for p in gens:
                g = p[f]
                if g not in reached:
                    reached.add(g)
                    frontier.append(g)
        return len(reached) == self.fiber

    # -- text format -------------------------------------------------------

    @classmethod
    def parse(cls, text: str, base: SimplicialComplex) -> "EdgeLabeling":
        fiber = None
        tree = []
        labels = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] == "fiber":
                fiber = int(parts[1])
            elif parts[0] == "tree":
                tree.append((int(parts[1]), int(parts[2])))
            elif parts[0] == "label":
                head, _, body = line.partition(":")
                bits = head.split()
                labels[(int(bits[1]), int(bits[2]))] = perms.from_one_line(body)
            else:
                raise FormatError(f"line {lineno}: unknown directive {parts[0]!r}")
        if fiber is None:
            sizes = {len(p) for p in labels.values()}
            if len(sizes) != 1:
                raise FormatError("need a 'fiber N' line when no labels fix the size")
            fiber = sizes.pop()
        return cls(base, tree, labels, fiber)

    def format(self) -> str:
        lines = [f"fiber {self.fiber}"]
        for u, v in sorted(self.tree):
            lines.append(f"tree {u} {v}")
        for (u, v), perm in sorted(self.labels.items()):
            lines.append(f"label {u} {v} : " + perms.to_one_line(perm))
        return "\n".join(lines) + "\n"


@dataclass
class CoveringComplex:
    base: SimplicialComplex
    labeling: EdgeLabeling
    total: SimplicialComplex
    projection: dict = field(repr=False)  # total simplex -> base simplex
    fiber: int = 1

    def lift(self, s, f: int):
        """The lift of base simplex s through fiber point f over its head."""
        s = simplex(s)
        lab = self.labeling
        out = []
        for v in s:
            g = lab.transport(s[0], v) if v != s[0] else perms.identity(self.fiber)
            out.append(v * self.fiber + g[f])
        return tuple(out)

    def lifts(self, s):
        return tuple(self.lift(s, f) for f in range(self.fiber))

    def fiber_scheme(self, base_scheme: WeightScheme) -> WeightScheme:
        """Base weights split evenly over the fibers of the projection."""
        values = {}
        for i in range(self.total.dim + 1):
            table = base_scheme.degree_weights(i)
            for s in self.total.simplices(i):
                values[s] = table[self.projection[s]] / self.fiber
        return WeightScheme.custom(self.total, values)

    def is_connected(self) -> bool:
        verts = self.total.vertices
        index = {v: k for k, v in enumerate(verts)}
        parent = list(range(len(verts)))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for u, v in self.total.simplices(1):
            ru, rv = find(index[u]), find(index[v])
            if ru != rv:
                parent[ru] = rv
        return len({find(k) for k in range(len(verts))}) == 1


def build_cover(X: SimplicialComplex, labeling: EdgeLabeling) -> CoveringComplex:
    """The covering complex glued from the labeling's fiber transports."""
    if labeling.base is not X:
        raise InputError("labeling was built for a different complex")
    F = labeling.fiber
    maxs = []
    for s in X.maximal_simplices:
        for f in range(F):
            lifted = []
            for v in s:
                g = labeling.transport(s[0], v) if v != s[0] else perms.identity(F)
                lifted.append(v * F + g[f])
            maxs.append(tuple(lifted))
    total = SimplicialComplex(maxs)
    projection = {}
    for i in range(total.dim + 1):
        for s in total.simplices(i):
            projection[s] = tuple(y // F for y in s)
    cover = CoveringComplex(X, labeling, total, projection, F)
    _validate_covering(cover)
    return cover


def _validate_covering(cover: CoveringComplex):
    X, Y = cover.base, cover.total
    for i in range(Y.dim + 1):
        by_base = {}
        for s in Y.simplices(i):
            base = cover.projection[s]
            if not X.has_simplex(base):
                raise InputError(f"projection of {s} is not a base simplex")
            by_base[base] = by_base.get(base, 0) + 1
            if i >= 1:
                for j in range(i + 1):
                    face = s[:j] + s[j + 1 :]
                    if cover.projection[face] != base[:j] + base[j + 1 :]:
                        raise InputError(
                            f"face {face} of {s} does not project to a face of {base}"
                        )
        for base in X.simplices(i):
            if by_base.get(base, 0) != cover.fiber:
                raise InputError(
                    f"{base} has {by_base.get(base, 0)} lifts, expected {cover.fiber}"
                )


# -- pushforward / pullback ------------------------------------------------------


def fiber_algebra(fiber: int) -> MeasuredBoolean:
    return MeasuredBoolean.uniform(fiber)


def pushforward_theta(
    X: SimplicialComplex, labeling: EdgeLabeling, c: Cochain
) -> Cochain:
    """theta applied valuewise: the twisted P(A)-cocycle of the class.

    With the trivial labeling (fiber 1) this is c itself up to the
    one-atom coefficient wrapper.
    """
    if isinstance(c.coeffs, PACoefficients):
        raise InputError("pushforward starts from a plain A-cochain")
    if c.complex is not X or X is not labeling.base:
        raise InputError("cochain, complex and labeling do not match")
    if not is_cocycle(c):
        raise InputError("pushforward needs a cocycle")
    algebra = fiber_algebra(labeling.fiber)
    coeffs = PACoefficients(algebra, c.group, twist=labeling)
    values = {
        s: {atom: v for atom in algebra.atoms()} for s, v in c.values.items()
    }
    return Cochain(X, c.degree, coeffs, values)


def pullback(cover: CoveringComplex, c: Cochain) -> Cochain:
    """The cochain on the total complex constant along fibers."""
    if isinstance(c.coeffs, PACoefficients):
        raise InputError("pullback lifts a plain A-cochain")
    if c.complex is not cover.base:
        raise InputError("cochain does not live on the cover's base")
    values = {}
    for s, v in c.values.items():
        for f in range(cover.fiber):
            values[cover.lift(s, f)] = v
    return Cochain(cover.total, c.degree, c.group, values)


@dataclass
class ShapiroCheckResult:
    norm_downstairs: Fraction
    norm_upstairs: Fraction
    equal: bool
    certified: bool
    method_downstairs: str
    method_upstairs: str


def shapiro_check(
    X: SimplicialComplex,
    labeling: EdgeLabeling,
    c: Cochain,
    scheme: WeightScheme | None = None,
    budget: int = DEFAULT_BUDGET,
    heuristic: bool = False,
    seed: int = 0,
    workers: int = 1,
) -> ShapiroCheckResult:
    """Class norm of the theta-pushforward vs the pullback on the cover.

    The two sides are computed by independent searches on different
    complexes; the isometry asserts equality, the artifact verifies it.
    """
    scheme = scheme or WeightScheme.mu(X)
    down = cosystolic_norm(
        CohomologyClass(pushforward_theta(X, labeling, c), scheme),
        scheme=scheme,
        budget=budget,
        heuristic=heuristic,
        seed=seed,
        workers=workers,
    )
    cover = build_cover(X, labeling)
    up_scheme = cover.fiber_scheme(scheme)
    up = cosystolic_norm(
        CohomologyClass(pullback(cover, c), up_scheme),
        scheme=up_scheme,
        budget=budget,
        heuristic=heuristic,
        seed=seed,
        workers=workers,
    )
    return ShapiroCheckResult(
        down.value,
        up.value,
        down.value == up.value,
        down.certified and up.certified,
        down.method,
        up.method,
    )


@dataclass
class VanishingResult:
    verdict: str  # "zero" | "nonzero"
    primitive: Cochain | None
    fiber: int


def vanishing_test(
    X: SimplicialComplex,
    labeling: EdgeLabeling,
    c: Cochain,
    scheme: WeightScheme | None = None,
) -> VanishingResult:
    """Does the class pushed to the cover die?  Decided by a linear solve.

    Pulls c back to the cover and asks for a primitive there; the normal
    form certifies the negative answer.
    """
    if c.degree < 1:
        raise InputError("vanishing test needs degree >= 1")
    if not is_cocycle(c):
        raise InputError("vanishing test needs a cocycle")
    cover = build_cover(X, labeling)
    scheme = scheme or WeightScheme.mu(X)
    up_scheme = cover.fiber_scheme(scheme)
    lifted = pullback(cover, c)
    primitive = is_coboundary(lifted, scheme=up_scheme)
    if primitive is None:
        return VanishingResult("nonzero", None, cover.fiber)
    return VanishingResult("zero", primitive, cover.fiber)


@dataclass
class LowerBoundRow:
    name: str
    fiber: int
    value: Fraction | None
    certified: bool
    skipped: str | None


@dataclass
class LowerBoundReport:
    rows: list
    minimum: Fraction | None
    note: str

    def lines(self):
        out = [("kind", "lower-bound-report")]
        for row in self.rows:
            if row.skipped:
                out.append((f"action[{row.name}]", f"skipped: {row.skipped}"))
            else:
                out.append(
                    (
                        f"action[{row.name}]",
                        f"fiber={row.fiber} norm={row.value} certified={str(row.certified).lower()}",
                    )
                )
        out.append(("minimum", "none" if self.minimum is None else str(self.minimum)))
        out.append(("note", self.note))
        return out


def lower_bound_report(
    X: SimplicialComplex,
    c: Cochain,
    labelings,
    scheme: WeightScheme | None = None,
    budget: int = DEFAULT_BUDGET,
    heuristic: bool = False,
    seed: int = 0,
    workers: int = 1,
) -> LowerBoundReport:
    """Pushforward class norms over a supplied family of finite actions.

    This surveys the supplied labelings only; it is an empirical lower
    bound over that family, not a statement about all finite actions.
    """
    scheme = scheme or WeightScheme.mu(X)
    rows = []
    minimum = None
    for idx, labeling in enumerate(labelings):
        name = f"{idx}"
        try:
            result = cosystolic_norm(
                CohomologyClass(pushforward_theta(X, labeling, c), scheme),
                scheme=scheme,
                budget=budget,
                heuristic=heuristic,
                seed=seed,
                workers=workers,
            )
        except CapacityError as exc:
            rows.append(LowerBoundRow(name, labeling.fiber, None, False, str(exc)))
            continue
        rows.append(LowerBoundRow(name, labeling.fiber, result.value, result.certified, None))
        if minimum is None or result.value < minimum:
            minimum = result.value
    return LowerBoundReport(
        rows,
        minimum,
        "empirical survey over the supplied actions only",
    )


# -- labelings from cocycle data ---------------------------------------------------


def regular_action(group: FiniteAbelianGroup):
    """(fiber size, map a -> translation permutation) of the regular action."""
    elements = list(group.elements())
    index = {e: i for i, e in enumerate(elements)}

    def act(a):
        a = group.element(a)
        return tuple(index[group.add(a, e)] for e in elements)

    return len(elements), act


def labeling_from_values(
    X: SimplicialComplex,
    tree,
    values,
    group: FiniteAbelianGroup,
    action=None,
) -> EdgeLabeling:
    """Edge labeling from a group-valued 1-cocycle.

    values maps increasing edges to elements of the group (missing edges
    carry zero); the cocycle is normalized to vanish on the tree by a
    potential computed along it, then each remaining edge's value acts on
    the fiber (by default the regular action of the group).
    """
    vals = {}
    for e, a in dict(values).items():
        e = simplex(e)
        if len(e) != 2 or not X.has_simplex(e):
            raise InputError(f"{e} is not an edge of the complex")
        vals[e] = group.element(a)
    zero = group.zero()

    def value(u, v):
        e = (u, v) if u < v else (v, u)
        a = vals.get(e, zero)
        return a if u < v else group.neg(a)

    for a, b, c in X.simplices(2):
        total = group.add(group.add(value(a, b), value(b, c)), value(c, a))
        if not group.is_zero(total):
            raise InputError(f"edge values do not close up around triangle {(a, b, c)}")
    # potential along the tree pulls the cocycle to zero there
    tree_edges = {simplex(e) for e in tree}
    adj = {v: [] for v in X.vertices}
    for u, v in tree_edges:
        adj[u].append(v)
        adj[v].append(u)
    root = X.vertices[0]
    potential = {root: zero}
    stack = [root]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in potential:
                potential[v] = group.add(potential[u], value(u, v))
                stack.append(v)
    if len(potential) != len(X.vertices):
        raise InputError("tree does not reach every vertex")
    if action is None:
        fiber, act = regular_action(group)
    else:
        fiber, act = action
    labels = {}
    for e in X.simplices(1):
        if e in tree_edges:
            continue
        u, v = e
        normalized = group.sub(value(u, v), group.sub(potential[v], potential[u]))
        if not group.is_zero(normalized):
            labels[e] = act(normalized)
    return EdgeLabeling(X, tree_edges, labels, fiber)


def trivial_labeling(X: SimplicialComplex, tree=None) -> EdgeLabeling:
    """The one-point-fiber labeling (the identity cover)."""
    if tree is None:
        tree = spanning_tree(X)
    return EdgeLabeling(X, tree, {}, 1)


def spanning_tree(X: SimplicialComplex):
    """A deterministic spanning tree of the 1-skeleton (BFS from least vertex)."""
    adj = {v: [] for v in X.vertices}
    for u, v in X.simplices(1):
        adj[u].append(v)
        adj[v].append(u)
    for v in adj:
        adj[v].sort()
    root = X.vertices[0]
    seen = {root}
    tree = []
    queue = [root]
    while queue:
        u = queue.pop(0)
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                tree.append((min(u, v), max(u, v)))
                queue.append(v)
    if len(seen) != len(X.vertices):
        raise InputError("1-skeleton is not connected; no spanning tree")
    return tree
