"""Expansion constants, expander verdicts, and spectral analysis.

The expansion constant in degree i is the minimum over cochains c outside
the cocycles of norm(delta c) / dist(c, Z^i), with dist the coset-minimal
norm.  Certified values come from exhaustive enumeration (vectorized in
blocks); everything exact is rational, and floating point appears only in
the spectral layer, which is never mixed into certified verdicts.

The expander checks follow the two-clause definition: a cosystolic
expander needs the cosystole and the expansion constant at or above the
target in every requested degree; a coboundary expander additionally needs
vanishing cohomology in the requested degrees >= 1.  The hypothesis
checklist combines per-link coboundary verdicts with the spectral proxy
lambda(link): the second-largest absolute eigenvalue of the weighted
random walk on the link's 1-skeleton (smaller is better; disconnected
skeletons score 1).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .abelian import FiniteAbelianGroup
from .complexes import SimplicialComplex, WeightScheme, simplex
from .cochains import (
    DEFAULT_BUDGET,
    Cochain,
    cohomology,
    cosystole,
    from_vec,
    system_for,
    to_vec,
)
from .errors import CapacityError, InputError
from .modlinalg import HowellForm
from .search import minimize_coset_norm
from .systems import plain_system

_BLOCK = 1 << 12


@dataclass
class ExpansionValue:
    """Expansion constant in one degree; value None means the quantifier is
    empty (every cochain is a cocycle) and the constant is vacuous."""

    value: Fraction | None
    witness: Cochain | None
    certified: bool
    method: str


def _enumerate_blocks(n_digits: int, bases, total: int):
    """Yield (start, array of shape (B, n_digits)) in ascending mixed radix.

    bases[j] is the base of digit j; digit 0 is the most significant.
    """
    place = [1] * n_digits
    for j in range(n_digits - 2, -1, -1):
        place[j] = place[j + 1] * bases[j + 1]
    place_arr = np.array(place, dtype=np.int64)
    bases_arr = np.array(bases, dtype=np.int64)
    for start in range(0, total, _BLOCK):
        stop = min(start + _BLOCK, total)
        idx = np.arange(start, stop, dtype=np.int64)
        digits = (idx[:, np.newaxis] // place_arr[np.newaxis, :]) % bases_arr[np.newaxis, :]
        yield start, digits


def expansion_constant(
    X: SimplicialComplex,
    i: int,
    group: FiniteAbelianGroup,
    scheme: WeightScheme | None = None,
    budget: int = DEFAULT_BUDGET,
    heuristic: bool = False,
    seed: int = 0,
    workers: int = 1,
) -> ExpansionValue:
    """min over c not in Z^i of norm(delta c) / dist(c, Z^i)."""
    scheme = scheme or WeightScheme.mu(X)
    system = plain_system(scheme, group)
    n = system.n(i)
    t = len(group.factors)
    if t == 0:
        return ExpansionValue(None, None, True, "vacuous")
    kernel_forms = []
    z_sizes = []
    for modulus in group.factors:
        rows = system.cocycle_rows(i, modulus)
        form = HowellForm(rows, modulus, ncols=n) if rows else None
        kernel_forms.append(form)
        z_sizes.append(form.span_size() if form else 1)
    total = 1
    for m in group.factors:
        total *= m**n
    z_total = math.prod(z_sizes)
    if z_total == total:
        return ExpansionValue(None, None, True, "vacuous")
    if total > budget:
        if not heuristic:
            raise CapacityError(
                f"{total} cochains in degree {i} exceed the exhaustive budget {budget}"
            )
        return _expansion_heuristic(system, X, i, group, scheme, budget, seed, workers)
    if z_total * total > 64 * max(budget, 1):
        raise CapacityError(
            f"distance enumeration needs {z_total} x {total} norm evaluations"
        )
    # materialize the cocycle subgroup once
    z_vectors = _span_vectors(system, i, kernel_forms, group)
    den_up = system.weight_den[i + 1] if i + 1 <= system.top else 1
    den_dn = system.weight_den[i]
    wt_up = system.weight_num[i + 1] if i + 1 <= system.top else np.zeros(0, dtype=np.int64)
    wt_dn = system.weight_num[i]
    mods = system.mods
    bases = [int(group.factors[j]) for _cell in range(n) for j in range(t)]
    best = None  # (delta_num, dist_num) cross-compared exactly
    best_vec = None
    for _start, digits in _enumerate_blocks(n * t, bases, total):
        block = digits.reshape(-1, n, t)
        dblock = system.delta_block(i, block)
        dsupport = dblock.any(axis=2).astype(np.int64)
        dnums = dsupport @ wt_up if dblock.shape[1] else np.zeros(len(block), dtype=np.int64)
        dist = None
        for z in z_vectors:
            diff = np.mod(block - z[np.newaxis], mods[np.newaxis, np.newaxis, :])
            snums = diff.any(axis=2).astype(np.int64) @ wt_dn
            dist = snums if dist is None else np.minimum(dist, snums)
        dlist = dnums.tolist()
        distlist = dist.tolist()
        for row in range(len(block)):
            dn = distlist[row]
            if dn == 0:
                continue  # cocycle: outside the quantifier
            un = dlist[row]
            if best is None or un * best[1] < best[0] * dn:
                best = (un, dn)
                best_vec = block[row].copy()
    if best is None:
        return ExpansionValue(None, None, True, "vacuous")
    value = Fraction(best[0], den_up) / Fraction(best[1], den_dn)
    witness = from_vec(system, X, i, group, best_vec)
    return ExpansionValue(value, witness, True, "exhaustive")


def _span_vectors(system, degree, forms, group):
    """All vectors of the per-factor spans (the cocycle subgroup)."""
    per_factor = []
    n = system.n(degree)
    for j, form in enumerate(forms):
        vecs = []
        if form is None:
            vecs.append(np.zeros(n, dtype=np.int64))
        else:
            ranges = form.coefficient_ranges()
            rows = [np.array(r, dtype=np.int64) for r in form.rows]
            modulus = group.factors[j]
            for coeffs in itertools.product(*(range(r) for r in ranges)):
                v = np.zeros(n, dtype=np.int64)
                for c, r in zip(coeffs, rows):
                    if c:
                        v = (v + c * r) % modulus
                vecs.append(v)
        per_factor.append(vecs)
    out = []
    for combo in itertools.product(*per_factor):
        z = np.stack(combo, axis=1)
        out.append(z)
    return out


def _expansion_heuristic(system, X, i, group, scheme, budget, seed, workers):
    import random

    rng = random.Random(seed)
    n = system.n(i)
    rows_per_factor = [system.cocycle_rows(i, m) for m in group.factors]
    best = None
    best_vec = None
    samples = 200
    for _ in range(samples):
        vec = np.stack(
            [
                np.array([rng.randrange(m) for _ in range(n)], dtype=np.int64)
                for m in group.factors
            ],
            axis=1,
        )
        dvec = system.delta_vec(i, vec)
        up = system.norm_vec(i + 1, dvec) if i + 1 <= system.top else Fraction(0)
        outcome = minimize_coset_norm(
            system, i, vec, rows_per_factor, budget=budget, heuristic=True, seed=seed
        )
        if outcome.value == 0:
            continue
        ratio = up / outcome.value
        if best is None or ratio < best:
            best = ratio
            best_vec = vec
    if best is None:
        return ExpansionValue(None, None, False, "heuristic")
    return ExpansionValue(best, from_vec(system, X, i, group, best_vec), False, "heuristic")


def distance_to_cocycles(
    c: Cochain,
    scheme: WeightScheme | None = None,
    budget: int = DEFAULT_BUDGET,
    heuristic: bool = False,
    seed: int = 0,
    workers: int = 1,
):
    """Coset-minimal norm of c against the cocycle subgroup."""
    scheme = scheme or WeightScheme.mu(c.complex)
    system = system_for(scheme, c.coeffs)
    rows_per_factor = [
        system.cocycle_rows(c.degree, m) for m in system.group.factors
    ]
    return minimize_coset_norm(
        system,
        c.degree,
        to_vec(system, c),
        rows_per_factor,
        budget=budget,
        heuristic=heuristic,
        seed=seed,
        workers=workers,
    )


# -- expander verdicts ---------------------------------------------------------


@dataclass
class DegreeRecord:
    degree: int
    cosystole_value: Fraction | None
    cosystole_certified: bool
    expansion_value: Fraction | None
    expansion_certified: bool
    vanishing: bool | None  # None: not required in this degree
    meets_target: bool


@dataclass
class ExpansionReport:
    complex_summary: str
    group: str
    kind: str
    target: Fraction | None
    records: list
    certified: bool
    verdict: bool
    notes: list = field(default_factory=list)

    def lines(self):
        out = []
        out.append(("kind", self.kind))
        out.append(("complex", self.complex_summary))
        out.append(("group", self.group))
        if self.target is not None:
            out.append(("target", str(self.target)))
        for rec in self.records:
            prefix = f"degree-{rec.degree}"
            cos = "vacuous" if rec.cosystole_value is None else str(rec.cosystole_value)
            out.append((f"{prefix}-cosystole", cos))
            out.append((f"{prefix}-cosystole-certified", str(rec.cosystole_certified).lower()))
            expv = "vacuous" if rec.expansion_value is None else str(rec.expansion_value)
            out.append((f"{prefix}-expansion", expv))
            out.append((f"{prefix}-expansion-certified", str(rec.expansion_certified).lower()))
            if rec.vanishing is not None:
                out.append((f"{prefix}-cohomology-vanishes", str(rec.vanishing).lower()))
            out.append((f"{prefix}-meets-target", str(rec.meets_target).lower()))
        out.append(("certified", str(self.certified).lower()))
        out.append(("verdict", "pass" if self.verdict else "fail"))
        for note in self.notes:
            out.append(("note", note))
        return out


def cosystolic_expander_check(
    X: SimplicialComplex,
    group: FiniteAbelianGroup,
    dims,
    eps_target,
    scheme: WeightScheme | None = None,
    budget: int = DEFAULT_BUDGET,
    heuristic: bool = False,
    seed: int = 0,
    workers: int = 1,
    require_vanishing: bool = False,
) -> ExpansionReport:
    """Per-degree cosystole and expansion verdicts against one target.

    With require_vanishing, degrees >= 1 also need trivial cohomology (the
    coboundary-expander convention); the cosystole is then vacuous there.
    """
    scheme = scheme or WeightScheme.mu(X)
    eps_target = Fraction(eps_target)
    records = []
    certified = True
    verdict = True
    notes = []
    for i in sorted(dims):
        if not 0 <= i <= X.dim:
            raise InputError(f"degree {i} out of range 0..{X.dim}")
        vanishing = None
        if require_vanishing and i >= 1:
            vanishing = cohomology(X, i, group, scheme=scheme).is_trivial
        cos = cosystole(
            X, i, group, scheme=scheme, budget=budget,
            heuristic=heuristic, seed=seed, workers=workers,
        )
        exp = expansion_constant(
            X, i, group, scheme=scheme, budget=budget,
            heuristic=heuristic, seed=seed, workers=workers,
        )
        meets = True
        if cos.value is not None and cos.value < eps_target:
            meets = False
        if exp.value is not None and exp.value < eps_target:
            meets = False
        if vanishing is False:
            meets = False
        certified = certified and cos.certified and exp.certified
        verdict = verdict and meets
        records.append(
            DegreeRecord(
                i, cos.value, cos.certified, exp.value, exp.certified, vanishing, meets
            )
        )
    kind = "coboundary-expander-check" if require_vanishing else "cosystolic-expander-check"
    return ExpansionReport(
        repr(X), str(group), kind, eps_target, records, certified, verdict, notes
    )


def coboundary_expander_check(
    X: SimplicialComplex,
    group: FiniteAbelianGroup,
    dims,
    eps_target=Fraction(0),
    **kwargs,
) -> ExpansionReport:
    return cosystolic_expander_check(
        X, group, dims, eps_target, require_vanishing=True, **kwargs
    )


# -- spectra -------------------------------------------------------------------


def upper_laplacian_spectrum(X: SimplicialComplex, k: int, max_size: int = 2000):
    """Eigenvalues of delta* delta on degree-k real cochains.

    The adjoint is taken in the inner product weighted by m(sigma)/k!; the
    operator is diagonalized through its symmetrization, so the returned
    spectrum is real and non-negative up to roundoff.
    """
    if not 0 <= k < X.dim:
        raise InputError(f"upper Laplacian needs 0 <= k < dim, got {k}")
    n_k = X.n_simplices(k)
    n_up = X.n_simplices(k + 1)
    if max(n_k, n_up) > max_size:
        raise CapacityError(f"{max(n_k, n_up)} cells exceed eigensolver budget {max_size}")
    cells = X.simplices(k)
    upper = X.simplices(k + 1)
    lower_index = {s: i for i, s in enumerate(cells)}
    D = np.zeros((n_up, n_k))
    for row, s in enumerate(upper):
        for j in range(k + 2):
            face = s[:j] + s[j + 1 :]
            D[row, lower_index[face]] = (-1) ** j
    kfact = math.factorial(k)
    w_k = np.array([float(X.weight_m(s)) / kfact for s in cells])
    w_up = np.array([float(X.weight_m(s)) / math.factorial(k + 1) for s in upper])
    half = 1.0 / np.sqrt(w_k)
    sym = (half[:, np.newaxis] * D.T) @ (w_up[:, np.newaxis] * D) * half[np.newaxis, :]
    sym = (sym + sym.T) / 2.0
    eigs = np.linalg.eigvalsh(sym)
    return [0.0 if -1e-12 < float(v) < 0.0 else float(v) for v in eigs]


def _walk_second_eigenvalue(graph: SimplicialComplex, max_size: int):
    """lambda of the m-weighted random walk on a 1-dimensional complex."""
    n = graph.n_simplices(0)
    if n > max_size:
        raise CapacityError(f"{n} vertices exceed eigensolver budget {max_size}")
    if n == 1:
        return 0.0
    verts = {s[0]: i for i, s in enumerate(graph.simplices(0))}
    W = np.zeros((n, n))
    if graph.dim >= 1:
        for u, v in graph.simplices(1):
            w = float(graph.weight_m((u, v)))
            W[verts[u], verts[v]] = w
            W[verts[v], verts[u]] = w
    deg = W.sum(axis=1)
    if np.any(deg == 0):
        return 1.0
    # connectivity by BFS on the support
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for v in np.nonzero(W[u])[0]:
            if int(v) not in seen:
                seen.add(int(v))
                stack.append(int(v))
    if len(seen) < n:
        return 1.0
    half = 1.0 / np.sqrt(deg)
    sym = half[:, np.newaxis] * W * half[np.newaxis, :]
    sym = (sym + sym.T) / 2.0
    eigs = np.sort(np.linalg.eigvalsh(sym))
    if n == 1:
        return 0.0
    return float(max(abs(eigs[-2]), abs(eigs[0])))


def skeleton_expansion(X: SimplicialComplex, max_size: int = 2000):
    """lambda values for X and for every link with at least one vertex.

    Keys are simplices, with the empty tuple for X itself.  A value of 1.0
    flags a disconnected 1-skeleton (isolated vertices included); links
    that are a single vertex score 0.0; links with no vertices are
    omitted.
    """
    out = {}
    out[()] = _walk_second_eigenvalue(X if X.dim <= 1 else X.skeleton(1), max_size)
    for i in range(X.dim + 1):
        for s in X.simplices(i):
            link, _ = X.link(s)
            if link is None:
                continue
            skel = link if link.dim <= 1 else link.skeleton(1)
            out[s] = _walk_second_eigenvalue(skel, max_size)
    return out


# -- hypothesis checklist --------------------------------------------------------


@dataclass
class LinkEntry:
    simplex: tuple
    link_dim: int | None
    coboundary_verdict: bool | None
    coboundary_certified: bool
    skeleton_lambda: float | None
    skeleton_applicable: bool
    error: str | None = None


@dataclass
class HypothesesReport:
    degree_bound: int
    beta_target: Fraction
    mu_target: float
    entries: list
    condition_links_expander: bool
    condition_skeleton: bool
    conclusion_pair: tuple

    def lines(self):
        out = [
            ("kind", "km-hypotheses-report"),
            ("degree-bound", str(self.degree_bound)),
            ("beta-target", str(self.beta_target)),
            ("mu-target", repr(self.mu_target)),
        ]
        for e in self.entries:
            name = " ".join(str(v) for v in e.simplex) if e.simplex else "(empty)"
            if e.error:
                out.append((f"link[{name}]", f"capacity: {e.error}"))
                continue
            cob = "n/a" if e.coboundary_verdict is None else ("pass" if e.coboundary_verdict else "fail")
            lam = "n/a" if e.skeleton_lambda is None else f"{e.skeleton_lambda:.12g}"
            out.append((f"link[{name}]-coboundary", cob))
            out.append((f"link[{name}]-lambda", lam))
        out.append(("links-coboundary-expanders", str(self.condition_links_expander).lower()))
        out.append(("skeleton-expansion-met", str(self.condition_skeleton).lower()))
        out.append(
            (
                "conclusion-pair",
                f"(min(1/Q^2, mu), mu) = ({self.conclusion_pair[0]}, {self.conclusion_pair[1]})",
            )
        )
        return out


def km_hypotheses_report(
    X: SimplicialComplex,
    group: FiniteAbelianGroup,
    beta_target,
    mu_target: float,
    scheme: WeightScheme | None = None,
    budget: int = DEFAULT_BUDGET,
    max_size: int = 2000,
    seed: int = 0,
    workers: int = 1,
) -> HypothesesReport:
    """Per-link coboundary verdicts plus the skeleton-expansion proxy.

    The skeleton condition is applied to links of dimension >= 1 (links
    that are isolated points carry no walk); the conclusion pair is quoted
    from the targets and the degree bound, not re-derived.
    """
    beta_target = Fraction(beta_target)
    lambdas = skeleton_expansion(X, max_size=max_size)
    q_bound = max(X.top_coface_count((v,)) for v in X.vertices)
    entries = []
    cond_links = True
    cond_skeleton = True
    all_simplices = [()] + [s for i in range(X.dim + 1) for s in X.simplices(i)]
    for s in all_simplices:
        if s == ():
            link, link_dim = X, X.dim
        else:
            link, _ = X.link(s)
            if link is None:
                continue
            link_dim = link.dim
        lam = lambdas.get(s)
        applicable = link_dim >= 1
        verdict = None
        certified = True
        error = None
        if s != ():
            if link_dim >= 1:
                try:
                    report = coboundary_expander_check(
                        link,
                        group,
                        dims=range(link_dim),
                        eps_target=beta_target,
                        scheme=None,
                        budget=budget,
                        seed=seed,
                        workers=workers,
                    )
                    verdict = report.verdict
                    certified = report.certified
                except CapacityError as exc:
                    error = str(exc)
            else:
                verdict = True  # no degrees to check below dimension 1
        if verdict is False:
            cond_links = False
        if applicable and lam is not None and lam > mu_target:
            cond_skeleton = False
        entries.append(
            LinkEntry(s, link_dim, verdict, certified, lam, applicable, error)
        )
    conclusion = (min(Fraction(1, q_bound**2), Fraction(mu_target).limit_denominator(10**9)), mu_target)
    return HypothesesReport(
        q_bound,
        beta_target,
        mu_target,
        entries,
        cond_links,
        cond_skeleton,
        conclusion,
    )
