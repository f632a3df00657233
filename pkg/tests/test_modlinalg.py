"""Randomized brute-force verification of the Z/m linear algebra."""

import itertools
import random

import pytest

from cosystole.modlinalg import (
    HowellForm,
    kernel_rows,
    quotient_decomposition,
    solve_matvec,
    unit_annihilating,
)


def brute_span(rows, m, ncols):
    out = {(0,) * ncols}
    for coeffs in itertools.product(range(m), repeat=len(rows)):
        v = [0] * ncols
        for c, r in zip(coeffs, rows):
            for j in range(ncols):
                v[j] = (v[j] + c * r[j]) % m
        out.add(tuple(v))
    return out


def test_unit_annihilating():
    import math

    for m in (2, 3, 4, 6, 8, 9, 12, 30):
        for a in range(1, m):
            u = unit_annihilating(a, m)
            assert math.gcd(u, m) == 1
            assert (u * a) % m == math.gcd(a, m)


@pytest.mark.parametrize("seed", range(4))
def test_howell_membership_solve_enumeration(seed):
    rng = random.Random(seed)
    for _ in range(60):
        m = rng.choice([2, 3, 4, 5, 6, 8, 9, 12])
        ncols = rng.randint(1, 4)
        nrows = rng.randint(0, 4)
        rows = [[rng.randrange(m) for _ in range(ncols)] for _ in range(nrows)]
        span = brute_span(rows, m, ncols)
        form = HowellForm(rows, m, ncols=ncols)
        assert form.span_size() == len(span)
        for v in itertools.product(range(m), repeat=ncols):
            assert form.contains(list(v)) == (v in span)
            if v in span:
                sol = form.solve_in_terms_of_input(list(v))
                w = [0] * ncols
                for c, r in zip(sol, rows):
                    for j in range(ncols):
                        w[j] = (w[j] + c * r[j]) % m
                assert tuple(w) == v
        # canonical enumeration covers the span exactly once
        seen = {}
        for coeffs in itertools.product(*(range(r) for r in form.coefficient_ranges())):
            v = [0] * ncols
            for c, r in zip(coeffs, form.rows):
                for j in range(ncols):
                    v[j] = (v[j] + c * r[j]) % m
            seen[tuple(v)] = seen.get(tuple(v), 0) + 1
        assert set(seen) == span and all(k == 1 for k in seen.values())


@pytest.mark.parametrize("seed", range(4))
def test_kernel_and_solver(seed):
    rng = random.Random(100 + seed)
    for _ in range(60):
        m = rng.choice([2, 3, 4, 6, 8, 9])
        nrows = rng.randint(1, 4)
        ncols = rng.randint(1, 4)
        mat = [[rng.randrange(m) for _ in range(ncols)] for _ in range(nrows)]

        def matvec(x):
            return tuple(
                sum(mat[i][j] * x[j] for j in range(ncols)) % m for i in range(nrows)
            )

        true_kernel = {
            x for x in itertools.product(range(m), repeat=ncols) if not any(matvec(x))
        }
        assert brute_span(kernel_rows(mat, ncols, m), m, ncols) == true_kernel
        image = {matvec(x) for x in itertools.product(range(m), repeat=ncols)}
        for v in itertools.product(range(m), repeat=nrows):
            sol = solve_matvec(mat, ncols, list(v), m)
            assert (sol is not None) == (v in image)
            if sol is not None:
                assert matvec(sol) == v


@pytest.mark.parametrize("seed", range(3))
def test_quotient_decomposition(seed):
    rng = random.Random(200 + seed)
    for _ in range(40):
        m = rng.choice([2, 3, 4, 6, 8, 9, 12])
        ncols = rng.randint(1, 4)
        span_rows = [
            [rng.randrange(m) for _ in range(ncols)] for _ in range(rng.randint(1, 3))
        ]
        rel_rows = []
        for _ in range(rng.randint(0, 3)):
            v = [0] * ncols
            for r in span_rows:
                c = rng.randrange(m)
                for j in range(ncols):
                    v[j] = (v[j] + c * r[j]) % m
            rel_rows.append(v)
        span = brute_span(span_rows, m, ncols)
        rel_span = brute_span(rel_rows, m, ncols)
        gens = quotient_decomposition(span_rows, rel_rows, ncols, m)
        size = 1
        for d, _g in gens:
            size *= d
        assert size * len(rel_span) == len(span)
        # distinct classes for distinct coefficient tuples
        seen = set()
        for coeffs in itertools.product(*(range(d) for d, _ in gens)):
            v = [0] * ncols
            for c, (_d, g) in zip(coeffs, gens):
                for j in range(ncols):
                    v[j] = (v[j] + c * g[j]) % m
            label = tuple(
                sorted(tuple((v[j] + w[j]) % m for j in range(ncols)) for w in rel_span)
            )
            assert label not in seen
            seen.add(label)
