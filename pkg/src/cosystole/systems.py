"""Internal indexed form of a weighted cochain complex.

A cell system fixes, for each degree, an ordered list of cells with exact
rational weights (stored as integer numerators over a common denominator,
already normalized to total mass 1), and for each degree k >= 1 an array
``faces[k]`` of shape (n_k, k+1) so that the coboundary of a vector c is

    (delta c)[tau] = sum_j (-1)^j c[faces[k][tau, j]]   (mod the factor).

Three builders cover everything in the package: the plain simplicial
system over a group A, the atom-expanded system for P(A)-valued cochains
(cells are simplex/atom pairs), and its twisted variant where an edge
labeling permutes the atom coordinate of the leading face, which is the
cochain complex of the associated cover in disguise.

Cochain vectors are numpy int64 arrays of shape (n_k, t), one column per
cyclic factor of A, entries reduced mod the factor's order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .abelian import FiniteAbelianGroup
from .boolean import MeasuredBoolean
from .complexes import WeightScheme
from .errors import InputError
from .modlinalg import kernel_rows, matrix_transpose


@dataclass
class CellSystem:
    group: FiniteAbelianGroup
    top: int
    cells: list          # per degree: tuple of cell keys (opaque, hashable)
    labels: list         # per degree: tuple of display strings
    weight_num: list     # per degree: np.int64 array of numerators
    weight_den: list     # per degree: int denominator (sum of numerators)
    faces: list          # per degree k >= 1: np array (n_k, k+1); faces[0] is None

    def n(self, k: int) -> int:
        if not 0 <= k <= self.top:
            return 0
        return len(self.cells[k])

    def index(self, k: int, cell) -> int:
        return self._index[k][cell]

    def finalize(self):
        self._index = [
            {c: i for i, c in enumerate(cs)} for cs in self.cells
        ]
        self.mods = np.array(self.group.factors, dtype=np.int64)
        return self

    # -- vectors -------------------------------------------------------------

    def zero_vec(self, k: int) -> np.ndarray:
        return np.zeros((self.n(k), len(self.group.factors)), dtype=np.int64)

    def delta_vec(self, k: int, vec: np.ndarray) -> np.ndarray:
        """Coboundary of one degree-k vector (shape (n_k, t))."""
        return self.delta_block(k, vec[np.newaxis])[0]

    def delta_block(self, k: int, block: np.ndarray) -> np.ndarray:
        """Coboundary of a batch of degree-k vectors (shape (B, n_k, t))."""
        t = len(self.group.factors)
        if k + 1 > self.top:
            return np.zeros((block.shape[0], 0, t), dtype=np.int64)
        faces = self.faces[k + 1]
        signs = np.array([(-1) ** j for j in range(k + 2)], dtype=np.int64)
        gathered = block[:, faces, :]              # (B, n_{k+1}, k+2, t)
        signed = (gathered * signs[np.newaxis, np.newaxis, :, np.newaxis]).sum(axis=2)
        if t == 0:
            return signed
        return np.mod(signed, self.mods[np.newaxis, np.newaxis, :])

    def norm_num(self, k: int, vec: np.ndarray) -> int:
        """Numerator of the support norm over weight_den[k]."""
        if vec.shape[0] == 0:
            return 0
        support = vec.any(axis=1)
        return int(self.weight_num[k][support].sum())

    def norm_vec(self, k: int, vec: np.ndarray) -> Fraction:
        return Fraction(self.norm_num(k, vec), self.weight_den[k])

    def min_cell_weight_num(self, k: int) -> int:
        """Smallest positive cell weight numerator (0 if none positive)."""
        positive = self.weight_num[k][self.weight_num[k] > 0]
        if positive.size == 0:
            return 0
        return int(positive.min())

    # -- per-factor matrices ---------------------------------------------------

    def delta_rows(self, k: int, modulus: int):
        """Matrix of delta_k over Z/modulus as list-of-rows (n_{k+1} x n_k)."""
        nk = self.n(k)
        if k + 1 > self.top:
            return []
        rows = []
        for face_row in self.faces[k + 1]:
            row = [0] * nk
            for j, idx in enumerate(face_row):
                row[int(idx)] = (row[int(idx)] + (-1) ** j) % modulus
            rows.append(row)
        return rows

    def cocycle_rows(self, k: int, modulus: int):
        """Canonical generating rows of the degree-k cocycles over Z/modulus."""
        return kernel_rows(self.delta_rows(k, modulus), self.n(k), modulus)

    def coboundary_rows(self, k: int, modulus: int):
        """Rows spanning the image of delta_{k-1} over Z/modulus."""
        if k == 0:
            return []
        mat = self.delta_rows(k - 1, modulus)
        # columns of the delta matrix, one spanning row per (k-1)-cell
        return [r for r in matrix_transpose(mat, self.n(k - 1)) if any(r)]


def _weights_to_ints(weights):
    """Normalized Fractions -> (int numerators, common denominator)."""
    total = sum(weights, Fraction(0))
    if total == 0:
        raise InputError("zero total weight in a degree")
    normalized = [w / total for w in weights]
    den = 1
    for w in normalized:
        den = den * w.denominator // math.gcd(den, w.denominator)
    nums = np.array([int(w * den) for w in normalized], dtype=np.int64)
    return nums, den


def plain_system(scheme: WeightScheme, group: FiniteAbelianGroup) -> CellSystem:
    """Cochain system of the scheme's complex with coefficients in A."""
    X = scheme.complex
    cells, labels, wnum, wden, faces = [], [], [], [], []
    for k in range(X.dim + 1):
        simps = X.simplices(k)
        cells.append(tuple(simps))
        labels.append(tuple(" ".join(str(v) for v in s) for s in simps))
        table = scheme.degree_weights(k)
        nums, den = _weights_to_ints([table[s] for s in simps])
        wnum.append(nums)
        wden.append(den)
        if k == 0:
            faces.append(None)
        else:
            lower = {s: i for i, s in enumerate(X.simplices(k - 1))}
            arr = np.zeros((len(simps), k + 1), dtype=np.int64)
            for row, s in enumerate(simps):
                for j in range(k + 1):
                    face = s[:j] + s[j + 1 :]
                    arr[row, j] = lower[face]
            faces.append(arr)
    return CellSystem(group, X.dim, cells, labels, wnum, wden, faces).finalize()


def expanded_system(
    scheme: WeightScheme,
    group: FiniteAbelianGroup,
    algebra: MeasuredBoolean,
    labeling=None,
) -> CellSystem:
    """System for P(A)-valued cochains; cells are (simplex, atom) pairs.

    Without a labeling the atom coordinate is inert (the trivial action).
    With an edge labeling, removing the leading vertex of a cell transports
    the atom by the labeling's permutation of the edge from the leading to
    the second vertex; this is the co-induced twisted module structure of
    the associated cover.
    """
    X = scheme.complex
    natoms = algebra.size
    if labeling is not None and labeling.fiber != natoms:
        raise InputError(
            f"labeling fiber {labeling.fiber} does not match algebra with {natoms} atoms"
        )
    cells, labels, wnum, wden, faces = [], [], [], [], []
    for k in range(X.dim + 1):
        simps = X.simplices(k)
        degree_cells = [(s, atom) for s in simps for atom in algebra.atoms()]
        cells.append(tuple(degree_cells))
        labels.append(
            tuple(
                " ".join(str(v) for v in s) + f" | atom {atom}"
                for s, atom in degree_cells
            )
        )
        table = scheme.degree_weights(k)
        fracs = [table[s] * algebra.weight(atom) for s, atom in degree_cells]
        nums, den = _weights_to_ints(fracs)
        wnum.append(nums)
        wden.append(den)
        if k == 0:
            faces.append(None)
        else:
            lower_index = {c: i for i, c in enumerate(cells[k - 1])}
            arr = np.zeros((len(degree_cells), k + 1), dtype=np.int64)
            for row, (s, atom) in enumerate(degree_cells):
                for j in range(k + 1):
                    face = s[:j] + s[j + 1 :]
                    if j == 0 and labeling is not None:
                        perm = labeling.transport(s[0], s[1])
                        target_atom = perm[atom - 1] + 1
                    else:
                        target_atom = atom
                    arr[row, j] = lower_index[(face, target_atom)]
            faces.append(arr)
    return CellSystem(group, X.dim, cells, labels, wnum, wden, faces).finalize()
