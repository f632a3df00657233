"""Exact minimization of the support norm over a coset of cochains.

Both the coset-minimal (cosystolic) norm and the distance to the cocycle
subgroup reduce to: given a base vector and, per cyclic factor of A, rows
spanning a submodule, minimize the weighted support norm over

    { base + sum_j lambda_j . row_j }.

The rows are put in Howell form, so the enumeration hits every coset
element exactly once, and rows sorted by pivot column make the weight of
the already-final prefix an admissible branch-and-bound bound.  Three
shortcuts keep desk-scale instances certifiable:

  * membership of -base certifies a zero minimum without any search;
  * a single-cell probe (one linear membership test per cell and value)
    certifies the minimum whenever it is achieved on one cheapest cell,
    which covers large covers whose optimum is a single simplex;
  * otherwise branch and bound runs when the coset size fits the budget.

Witnesses are deterministic: the first optimum in lexicographic
coefficient order, independent of the worker count.  The heuristic mode
(simulated annealing over the coefficients) is seeded and clearly flagged
as a non-certified upper bound.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CapacityError
from .modlinalg import HowellForm
from .systems import CellSystem


@dataclass
class SearchOutcome:
    value: Fraction
    vec: np.ndarray
    certified: bool
    method: str
    nodes: int = 0


@dataclass
class _Row:
    pivot: int
    factor: int
    modulus: int
    data: np.ndarray      # int64 over cells
    rng: int              # coefficient range size


def _coset_rows(system: CellSystem, degree: int, rows_per_factor):
    """Howell-normalize the spanning rows and merge factors by pivot column."""
    merged = []
    forms = []
    for j, modulus in enumerate(system.group.factors):
        rows = rows_per_factor[j]
        if not rows:
            forms.append(None)
            continue
        form = HowellForm(rows, modulus, ncols=system.n(degree))
        forms.append(form)
        for row, (pivot, _p), rng in zip(form.rows, form.pivots, form.coefficient_ranges()):
            if rng > 1:
                merged.append(
                    _Row(pivot, j, modulus, np.array(row, dtype=np.int64), rng)
                )
    merged.sort(key=lambda r: (r.pivot, r.factor))
    return merged, forms


def _zero_in_coset(base: np.ndarray, forms, factors) -> bool:
    for j, _modulus in enumerate(factors):
        column = [int(v) for v in base[:, j]]
        if not any(column):
            continue
        if forms[j] is None or not forms[j].contains(column):
            return False
    return True


def minimize_coset_norm(
    system: CellSystem,
    degree: int,
    base: np.ndarray,
    rows_per_factor,
    budget: int = 1 << 20,
    heuristic: bool = False,
    seed: int = 0,
    workers: int = 1,
) -> SearchOutcome:
    """Minimize the support norm of base + (element of the spanned coset)."""
    den = system.weight_den[degree]
    weights = system.weight_num[degree]
    merged, forms = _coset_rows(system, degree, rows_per_factor)
    factors = system.group.factors

    if _zero_in_coset(base, forms, factors):
        return SearchOutcome(Fraction(0), np.zeros_like(base), True, "linear-solve")

    # zero is not in the coset; when every cell weight is positive the
    # cheapest cell weight is a global lower bound, and meeting it
    # certifies optimality without any search
    all_positive = system.n(degree) == 0 or bool((weights > 0).all())
    floor_num = system.min_cell_weight_num(degree) if all_positive else 0
    best_num = system.norm_num(degree, base)
    best_vec = base.copy()
    if all_positive and best_num == floor_num:
        return SearchOutcome(Fraction(best_num, den), best_vec, True, "floor-bound")

    # single-cell probe: can the coset be met in one cell of minimal weight?
    order = sorted(range(system.n(degree)), key=lambda c: (int(weights[c]), c))
    nonzero_values = [
        v for v in _small_values(factors) if any(v)
    ]
    for cell in order:
        w = int(weights[cell])
        if w >= best_num:
            break
        for value in nonzero_values:
            cand = np.zeros_like(base)
            cand[cell] = value
            diff = (cand - base) % system.mods if len(factors) else cand
            if _zero_in_coset(diff, forms, factors):
                best_num = w
                best_vec = cand
                break
        if best_num == floor_num:
            return SearchOutcome(
                Fraction(best_num, den), best_vec, True, "single-cell-probe"
            )

    size = 1
    for row in merged:
        size *= row.rng
    if size <= max(budget, 1):
        value_num, vec, nodes = _branch_and_bound(
            system, degree, base, merged, best_num, best_vec, workers
        )
        return SearchOutcome(Fraction(value_num, den), vec, True, "branch-and-bound", nodes)
    if not heuristic:
        raise CapacityError(
            f"coset has {size} elements, over the exhaustive budget {budget}; "
            "heuristic mode would return a flagged upper bound"
        )
    value_num, vec = _anneal(system, degree, base, merged, best_num, best_vec, seed)
    return SearchOutcome(Fraction(value_num, den), vec, False, "annealing")


def _small_values(factors):
    import itertools

    return [tuple(v) for v in itertools.product(*(range(m) for m in factors))]


def _branch_and_bound(system, degree, base, merged, best_num, best_vec, workers):
    n = system.n(degree)
    weights = system.weight_num[degree]
    boundaries = [row.pivot for row in merged] + [n]

    def prefix_weight(vec, lo, hi):
        if lo >= hi:
            return 0
        chunk = vec[lo:hi]
        support = chunk.any(axis=1) if chunk.shape[1] else np.zeros(hi - lo, dtype=bool)
        return int(weights[lo:hi][support].sum())

    state = {"best": best_num, "vec": best_vec, "nodes": 0}

    def explore(depth, vec, acc):
        state["nodes"] += 1
        if acc >= state["best"]:
            return
        if depth == len(merged):
            # acc already covers every column
            if acc < state["best"]:
                state["best"] = acc
                state["vec"] = vec.copy()
            return
        row = merged[depth]
        lo = boundaries[depth]
        hi = boundaries[depth + 1]
        for lam in range(row.rng):
            if lam:
                vec[:, row.factor] = (vec[:, row.factor] + row.data) % row.modulus
            new_acc = acc + prefix_weight(vec, lo, hi)
            if new_acc < state["best"]:
                explore(depth + 1, vec, new_acc)
        # undo all additions
        vec[:, row.factor] = (
            vec[:, row.factor] - (row.rng - 1) * row.data
        ) % row.modulus

    if not merged:
        total = prefix_weight(base, 0, n)
        if total < best_num:
            return total, base.copy(), 1
        return best_num, best_vec, 1

    if workers <= 1 or merged[0].rng < 2:
        vec = base.copy()
        explore(0, vec, prefix_weight(vec, 0, boundaries[0]))
        return state["best"], state["vec"], state["nodes"]

    # deterministic partition over the first row's coefficients; each chunk
    # is explored independently and results merged in coefficient order
    first = merged[0]
    rest = merged[1:]
    rest_boundaries = boundaries[1:]

    def run_chunk(lams):
        local = {"best": best_num, "vec": best_vec, "nodes": 0}

        def explore_local(depth, vec, acc):
            local["nodes"] += 1
            if acc >= local["best"]:
                return
            if depth == len(rest):
                if acc < local["best"]:
                    local["best"] = acc
                    local["vec"] = vec.copy()
                return
            row = rest[depth]
            lo = rest_boundaries[depth]
            hi = rest_boundaries[depth + 1]
            for lam in range(row.rng):
                if lam:
                    vec[:, row.factor] = (vec[:, row.factor] + row.data) % row.modulus
                new_acc = acc + prefix_weight(vec, lo, hi)
                if new_acc < local["best"]:
                    explore_local(depth + 1, vec, new_acc)
            vec[:, row.factor] = (
                vec[:, row.factor] - (row.rng - 1) * row.data
            ) % row.modulus

        for lam in lams:
            vec = base.copy()
            if lam:
                vec[:, first.factor] = (
                    vec[:, first.factor] + lam * first.data
                ) % first.modulus
            acc = prefix_weight(vec, 0, boundaries[0])
            acc += prefix_weight(vec, boundaries[0], boundaries[1])
            if acc < local["best"]:
                explore_local(0, vec, acc)
        return local

    # contiguous chunks keep the merged witness equal to the serial one:
    # the lexicographically least optimum lives in the earliest chunk that
    # attains the optimal value, and within a chunk the local search is
    # already lexicographic
    lams = list(range(first.rng))
    chunk_count = min(workers, len(lams))
    step = -(-len(lams) // chunk_count)
    chunks = [lams[i * step : (i + 1) * step] for i in range(chunk_count)]
    chunks = [c for c in chunks if c]
    with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
        locals_ = list(pool.map(run_chunk, chunks))
    best = {"best": best_num, "vec": best_vec, "nodes": 0}
    for loc in locals_:
        best["nodes"] += loc["nodes"]
        if loc["best"] < best["best"]:
            best["best"] = loc["best"]
            best["vec"] = loc["vec"]
    return best["best"], best["vec"], best["nodes"]


def _anneal(system, degree, base, merged, best_num, best_vec, seed, steps=4000, restarts=4):
    rng = random.Random(seed)
    weights = system.weight_num[degree]
    n = system.n(degree)

    def full_weight(vec):
        support = vec.any(axis=1) if vec.shape[1] else np.zeros(n, dtype=bool)
        return int(weights[support].sum())

    overall_best = best_num
    overall_vec = best_vec.copy()
    if not merged:
        return overall_best, overall_vec
    for restart in range(restarts):
        coeffs = [0] * len(merged)
        vec = base.copy()
        cur = full_weight(vec)
        temp0 = max(float(weights.max()), 1.0)
        for step in range(steps):
            temp = temp0 * (1.0 - step / steps) + 1e-9
            idx = rng.randrange(len(merged))
            row = merged[idx]
            new_lam = rng.randrange(row.rng)
            if new_lam == coeffs[idx]:
                continue
            delta = new_lam - coeffs[idx]
            vec[:, row.factor] = (vec[:, row.factor] + delta * row.data) % row.modulus
            cand = full_weight(vec)
            if cand <= cur or rng.random() < math.exp(-(cand - cur) / temp):
                cur = cand
                coeffs[idx] = new_lam
                if cur < overall_best:
                    overall_best = cur
                    overall_vec = vec.copy()
            else:
                vec[:, row.factor] = (vec[:, row.factor] - delta * row.data) % row.modulus
    return overall_best, overall_vec
