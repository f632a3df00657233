"""Exact linear algebra over Z/m via a Howell-style row normal form.

Rows span submodules of (Z/m)^n.  The Howell form is the canonical
echelon form with the extra property that every element of the span whose
leading support starts at column j lies in the span of the rows with pivot
column >= j; greedy reduction against the rows is therefore a complete
membership test, and coefficient recovery through a tracked transform
turns it into a linear solver.

Quotients (cohomology groups) are decomposed into cyclic summands by a
Smith-form diagonalization over Z of the relation rows stacked with m*I.
"""

from __future__ import annotations

import math


def _egcd(a: int, b: int):
    """Extended gcd: returns (g, s, t) with s*a + t*b = g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def unit_annihilating(a: int, m: int) -> int:
    """A unit u mod m with u*a ≡ gcd(a, m) (mod m).

    Standard normalization step: a = g*a0 with gcd(a0, m/g) = 1, and u is a
    lift of a0^{-1} mod m/g to a unit mod m.
    """
    if m == 1:
        return 0
    a %= m
    if a == 0:
        return 1
    g = math.gcd(a, m)
    a0 = a // g
    mg = m // g
    if mg == 1:
        u = 1
    else:
        _, inv, _ = _egcd(a0 % mg, mg)
        u = inv % mg
        if u == 0:
            u = 1
    while math.gcd(u, m) != 1:
        u += mg
    return u % m


class HowellForm:
    """Howell normal form of a row module over Z/m, with transform.

    Attributes:
        rows: the canonical rows, pivots in strictly increasing columns,
            each pivot a divisor of m, entries above pivots reduced.
        pivots: list of (column, pivot_value) per row.
        transform: expresses each canonical row as a combination of the
            input rows (same order as given).
    """

    def __init__(self, rows, m: int, ncols: int | None = None):
        if m < 1:
            raise ValueError("modulus must be >= 1")
        self.m = m
        rows = [list(r) for r in rows]
        self.n_input = len(rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols required for an empty row list")
            ncols = len(rows[0])
        self.ncols = ncols
        if m == 1:
            self.rows, self.pivots, self.transform = [], [], []
            return
        work = [[v % m for v in r] for r in rows]
        trans = [[1 if i == j else 0 for j in range(self.n_input)] for i in range(self.n_input)]
        work, trans = self._echelon(work, trans)
        # Howell augmentation: annihilator multiples of pivot rows may add
        # span further right; iterate until the form is stable.
        while True:
            extra_rows, extra_trans = [], []
            for r, t in zip(work, trans):
                col = _leading(r)
                mult = m // math.gcd(r[col], m)
                cand = [(mult * v) % m for v in r]
                if any(cand):
                    extra_rows.append(cand)
                    extra_trans.append([(mult * v) % m for v in t])
            if not extra_rows:
                break
            before = [list(r) for r in work]
            work, trans = self._echelon(work + extra_rows, trans + extra_trans)
            if work == before:
                break
        for i, row in enumerate(work):
            col = _leading(row)
            u = unit_annihilating(row[col], m)
            if u != 1:
                work[i] = [(u * v) % m for v in row]
                trans[i] = [(u * v) % m for v in trans[i]]
        for i, row in enumerate(work):
            col = _leading(row)
            p = row[col]
            for k in range(i):
                q = work[k][col] // p
                if q:
                    work[k] = [(a - q * b) % m for a, b in zip(work[k], row)]
                    trans[k] = [(a - q * b) % m for a, b in zip(trans[k], trans[i])]
        self.rows = work
        self.pivots = [(_leading(r), r[_leading(r)]) for r in work]
        self.transform = trans

    def _echelon(self, work, trans):
        m = self.m
        pairs = [(r, t) for r, t in zip(work, trans) if any(r)]
        work = [p[0] for p in pairs]
        trans = [p[1] for p in pairs]
        top = 0
        for col in range(self.ncols):
            pivot_idx = None
            for i in range(top, len(work)):
                if work[i][col]:
                    pivot_idx = i
                    break
            if pivot_idx is None:
                continue
            work[top], work[pivot_idx] = work[pivot_idx], work[top]
            trans[top], trans[pivot_idx] = trans[pivot_idx], trans[top]
            for i in range(top + 1, len(work)):
                b = work[i][col]
                if not b:
                    continue
                a = work[top][col]
                g, s, t = _egcd(a, b)
                # unimodular [[s, t], [-b//g, a//g]] preserves the row span
                r1 = [(s * x + t * y) % m for x, y in zip(work[top], work[i])]
                r2 = [((-(b // g)) * x + (a // g) * y) % m for x, y in zip(work[top], work[i])]
                t1 = [(s * x + t * y) % m for x, y in zip(trans[top], trans[i])]
                t2 = [((-(b // g)) * x + (a // g) * y) % m for x, y in zip(trans[top], trans[i])]
                work[top], work[i] = r1, r2
                trans[top], trans[i] = t1, t2
            pairs = [(r, t) for r, t in zip(work, trans) if any(r)]
            work = [p[0] for p in pairs]
            trans = [p[1] for p in pairs]
            top += 1
            if top >= len(work):
                break
        order = sorted(range(len(work)), key=lambda i: _leading(work[i]))
        return [work[i] for i in order], [trans[i] for i in order]

    # -- queries -----------------------------------------------------------

    def reduce(self, vec):
        """Reduce vec against the rows; returns (coefficients, residual).

        vec is in the span iff the residual is zero; then
        vec = sum(coeff_i * rows[i]) mod m.
        """
        m = self.m
        if m == 1:
            return [], [0] * len(vec)
        v = [x % m for x in vec]
        coeffs = [0] * len(self.rows)
        for i, (col, p) in enumerate(self.pivots):
            if v[col] == 0 or v[col] % p:
                continue
            lam = v[col] // p
            coeffs[i] = lam
            row = self.rows[i]
            v = [(a - lam * b) % m for a, b in zip(v, row)]
        return coeffs, v

    def contains(self, vec) -> bool:
        _, residual = self.reduce(vec)
        return not any(residual)

    def span_size(self) -> int:
        size = 1
        for _, p in self.pivots:
            size *= self.m // p
        return size

    def coefficient_ranges(self):
        """Per row, the coefficient range size for unique span enumeration."""
        return [self.m // p for _, p in self.pivots]

    def solve_in_terms_of_input(self, vec):
        """Coefficients over the *input* rows expressing vec, or None."""
        coeffs, residual = self.reduce(vec)
        if any(residual):
            return None
        out = [0] * self.n_input
        for c, trow in zip(coeffs, self.transform):
            if c:
                for j, t in enumerate(trow):
                    out[j] = (out[j] + c * t) % self.m
        return out


def _leading(row):
    for j, v in enumerate(row):
        if v:
            return j
    raise ValueError("zero row has no leading entry")


# -- matrix-level helpers (matrices as list-of-rows, acting by M @ x) ------


def matrix_transpose(mat, ncols):
    return [[row[j] for row in mat] for j in range(ncols)]


def solve_matvec(mat, ncols: int, rhs, m: int):
    """Solve M @ x = rhs over Z/m; returns x or None (certified by the form).

    mat has len(mat) rows of length ncols; x has length ncols.
    """
    if m == 1:
        return [0] * ncols
    cols = matrix_transpose(mat, ncols)
    form = HowellForm(cols, m, ncols=len(mat))
    return form.solve_in_terms_of_input(rhs)


def kernel_rows(mat, ncols: int, m: int):
    """Canonical generating rows of {x : M @ x = 0 over Z/m}."""
    if m == 1 or ncols == 0:
        return []
    nrows = len(mat)
    aug = []
    for i in range(ncols):
        aug.append(
            [mat[r][i] % m for r in range(nrows)]
            + [1 if j == i else 0 for j in range(ncols)]
        )
    form = HowellForm(aug, m, ncols=nrows + ncols)
    out = []
    for row, (col, _p) in zip(form.rows, form.pivots):
        if col >= nrows:
            out.append(row[nrows:])
    return out


def quotient_decomposition(span_rows, relation_rows, ncols: int, m: int):
    """Cyclic decomposition of span(span_rows) / span(relation_rows) over Z/m.

    relation_rows must lie in the span.  Returns a list of (order, vector)
    with order > 1 and the vectors generating independent cyclic summands:
    every class has a unique expansion sum(c_t * vector_t) with
    c_t in range(order_t).
    """
    if m == 1 or not span_rows:
        return []
    s = len(span_rows)
    gen_form = HowellForm(span_rows, m, ncols=ncols)
    for rel in relation_rows:
        if not gen_form.contains(rel):
            raise ValueError("relation row outside the spanning module")
    # the full relation module on coefficients:
    # {c : c . span_rows ∈ span(relation_rows)}
    aug = []
    for i, g in enumerate(span_rows):
        aug.append([v % m for v in g] + [1 if j == i else 0 for j in range(s)])
    for rel in relation_rows:
        aug.append([v % m for v in rel] + [0] * s)
    full = HowellForm(aug, m, ncols=ncols + s)
    relations = [
        row[ncols:] for row, (col, _p) in zip(full.rows, full.pivots) if col >= ncols
    ]
    orders, qinv = _smith_mod(relations, s, m)
    out = []
    for t in range(s):
        d = orders[t]
        if d <= 1:
            continue
        gen = [0] * ncols
        for j in range(s):
            c = qinv[t][j] % m
            if c:
                row = span_rows[j]
                for k in range(ncols):
                    gen[k] = (gen[k] + c * row[k]) % m
        out.append((d, gen))
    return out


def _smith_mod(relations, s: int, m: int):
    """Invariant factors of Z^s / (relations + m Z^s), with Q^{-1} rows.

    Returns (orders, qinv): orders[t] is the annihilator of the t-th cyclic
    summand (a divisor of m; 1 means trivial), and qinv[t] holds the
    coordinates of its generator in the original basis of Z^s.
    """
    rows = [[v % m for v in r] for r in relations]
    for j in range(s):
        rows.append([m if k == j else 0 for k in range(s)])
    qinv = [[1 if i == j else 0 for j in range(s)] for i in range(s)]
    nr = len(rows)

    def col_op_sub(jdst, jsrc, q):
        # column jdst -= q * column jsrc;  Q^{-1}: row jsrc += q * row jdst
        for r in rows:
            r[jdst] -= q * r[jsrc]
        for k in range(s):
            qinv[jsrc][k] += q * qinv[jdst][k]

    def col_swap(j1, j2):
        for r in rows:
            r[j1], r[j2] = r[j2], r[j1]
        qinv[j1], qinv[j2] = qinv[j2], qinv[j1]

    def col_negate(j):
        for r in rows:
            r[j] = -r[j]
        qinv[j] = [-v for v in qinv[j]]

    orders = [1] * s
    top = 0
    for t in range(s):
        while True:
            best = None
            for i in range(top, nr):
                for j in range(t, s):
                    v = rows[i][j]
                    if v and (best is None or abs(v) < abs(rows[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            bi, bj = best
            rows[top], rows[bi] = rows[bi], rows[top]
            if bj != t:
                col_swap(t, bj)
            if rows[top][t] < 0:
                col_negate(t)
            p = rows[top][t]
            dirty = False
            for i in range(top + 1, nr):
                q = rows[i][t] // p
                if q:
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[top])]
                if rows[i][t]:
                    dirty = True
            for j in range(t + 1, s):
                q = rows[top][j] // p
                if q:
                    col_op_sub(j, t, q)
                if rows[top][j]:
                    dirty = True
            if not dirty:
                break
        if top < nr and rows[top][t]:
            # the diagonal entry divides m because m*I is in the lattice
            orders[t] = math.gcd(rows[top][t], m)
            top += 1
    return orders, qinv
