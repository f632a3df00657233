"""Pure finite simplicial complexes with links, skeleta, and weights.

Simplices are tuples of vertex indices in increasing order; this ordering
is also the orientation convention, so no orientation data is stored.
Complexes are built from their maximal simplices, validated to be pure
(every simplex lies in a top-dimensional one), and immutable afterwards.

Two weight schemes are provided.  The normalized scheme gives the
i-simplex sigma the weight

    mu(sigma) = #{top cofaces of sigma} / (C(d+1, i+1) * #top cells),

which sums to 1 in every degree of a pure complex.  The recursive scheme

    m(sigma) = (d - i)! * #{top cofaces of sigma}

has the property that the weight of a simplex is the sum of the weights of
its cofaces one dimension up.

File format: one maximal simplex per line, vertices as whitespace-separated
non-negative integers, ``#`` comments, blank lines ignored.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .errors import FormatError, InputError, PurityError

Simplex = tuple  # increasing tuple of vertex indices


def simplex(vertices) -> Simplex:
    out = tuple(sorted(int(v) for v in vertices))
    if len(set(out)) != len(out):
        raise InputError(f"repeated vertex in simplex {vertices}")
    if out and out[0] < 0:
        raise InputError(f"negative vertex in simplex {vertices}")
    return out


class SimplicialComplex:
    """Pure finite simplicial complex with its full face lattice."""

    def __init__(self, maximal_simplices):
        maxs = [simplex(s) for s in maximal_simplices]
        if not maxs:
            raise InputError("a complex needs at least one maximal simplex")
        if len(set(maxs)) != len(maxs):
            dup = next(s for s in maxs if maxs.count(s) > 1)
            raise InputError(f"duplicate maximal simplex {dup}")
        for a in maxs:
            for b in maxs:
                if a != b and set(a) <= set(b):
                    raise InputError(f"maximal simplex {a} is a face of {b}")
        self.dim = max(len(s) for s in maxs) - 1
        faces_by_dim = [set() for _ in range(self.dim + 1)]
        for s in maxs:
            for k in range(1, len(s) + 1):
                for f in itertools.combinations(s, k):
                    faces_by_dim[k - 1].add(f)
        counts = [dict.fromkeys(fs, 0) for fs in faces_by_dim]
        for t in faces_by_dim[self.dim]:
            for k in range(1, len(t) + 1):
                for f in itertools.combinations(t, k):
                    counts[k - 1][f] += 1
        for i in range(self.dim):
            for f in sorted(faces_by_dim[i]):
                if counts[i][f] == 0:
                    raise PurityError(
                        f"simplex {f} has no top-dimensional coface", witness=f
                    )
        self._faces = [tuple(sorted(fs)) for fs in faces_by_dim]
        self._index = [
            {s: k for k, s in enumerate(fs)} for fs in self._faces
        ]
        self.maximal_simplices = tuple(sorted(maxs))
        self.vertices = tuple(v for (v,) in self._faces[0])
        self._coface_counts = counts
        self._weight_cache = {}

    # -- face access ---------------------------------------------------------

    def simplices(self, i: int):
        """All i-simplices, sorted."""
        if not 0 <= i <= self.dim:
            return ()
        return self._faces[i]

    def n_simplices(self, i: int) -> int:
        return len(self.simplices(i))

    def index(self, s: Simplex) -> int:
        """Position of s within the sorted list of its dimension."""
        s = simplex(s)
        i = len(s) - 1
        if i > self.dim or s not in self._index[i]:
            raise InputError(f"{s} is not a simplex of this complex")
        return self._index[i][s]

    def has_simplex(self, s) -> bool:
        s = simplex(s)
        i = len(s) - 1
        return 0 <= i <= self.dim and s in self._index[i]

    def euler_characteristic(self) -> int:
        return sum((-1) ** i * self.n_simplices(i) for i in range(self.dim + 1))

    def top_coface_count(self, s: Simplex) -> int:
        s = simplex(s)
        i = len(s) - 1
        if i > self.dim or s not in self._coface_counts[i]:
            raise InputError(f"{s} is not a simplex of this complex")
        return self._coface_counts[i][s]

    def cofacets(self, s: Simplex):
        """Cofaces of s of one dimension higher."""
        s = simplex(s)
        i = len(s)  # dimension + 1
        if i > self.dim:
            return ()
        out = []
        sset = set(s)
        for t in self._faces[i]:
            if sset <= set(t):
                out.append(t)
        return tuple(out)

    # -- weights -------------------------------------------------------------

    def weight_mu(self, s: Simplex) -> Fraction:
        """Normalized weight; sums to 1 over each degree."""
        s = simplex(s)
        i = len(s) - 1
        key = ("mu", i)
        if key not in self._weight_cache:
            denom = math.comb(self.dim + 1, i + 1) * self.n_simplices(self.dim)
            self._weight_cache[key] = {
                f: Fraction(self.top_coface_count(f), denom) for f in self.simplices(i)
            }
        table = self._weight_cache[key]
        if s not in table:
            raise InputError(f"{s} is not a simplex of this complex")
        return table[s]

    def weight_m(self, s: Simplex) -> Fraction:
        """Recursive weight m(s) = (d - i)! * #top cofaces."""
        s = simplex(s)
        i = len(s) - 1
        key = ("m", i)
        if key not in self._weight_cache:
            factor = math.factorial(self.dim - i)
            self._weight_cache[key] = {
                f: Fraction(factor * self.top_coface_count(f))
                for f in self.simplices(i)
            }
        table = self._weight_cache[key]
        if s not in table:
            raise InputError(f"{s} is not a simplex of this complex")
        return table[s]

    # -- derived complexes -----------------------------------------------------

    def link(self, s: Simplex):
        """The link of s, with vertices re-indexed; returns (link, mapping).

        mapping[new_vertex] = original vertex.  The link of a simplex in a
        pure d-complex is pure of dimension d - |s|.
        """
        s = simplex(s)
        if not self.has_simplex(s):
            raise InputError(f"{s} is not a simplex of this complex")
        sset = set(s)
        pieces = set()
        for t in self.maximal_simplices:
            if sset <= set(t):
                rest = tuple(v for v in t if v not in sset)
                if rest:
                    pieces.add(rest)
        if not pieces:
            return None, {}
        old_vertices = sorted({v for p in pieces for v in p})
        renumber = {v: k for k, v in enumerate(old_vertices)}
        mapping = {k: v for v, k in renumber.items()}
        link = SimplicialComplex([tuple(renumber[v] for v in p) for p in pieces])
        return link, mapping

    def skeleton(self, k: int) -> "SimplicialComplex":
        if not 0 <= k <= self.dim:
            raise InputError(f"skeleton degree {k} out of range 0..{self.dim}")
        if k == self.dim:
            return self
        return SimplicialComplex(self.simplices(k))

    # -- text format -----------------------------------------------------------

    @classmethod
    def parse(cls, text: str) -> "SimplicialComplex":
        maxs = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                maxs.append(tuple(int(tok) for tok in line.split()))
            except ValueError:
                raise FormatError(f"line {lineno}: expected vertex integers") from None
        if not maxs:
            raise FormatError("no simplices in complex file")
        return cls(maxs)

    def format(self) -> str:
        return "\n".join(" ".join(str(v) for v in s) for s in self.maximal_simplices) + "\n"

    def __repr__(self):
        counts = ", ".join(str(self.n_simplices(i)) for i in range(self.dim + 1))
        return f"SimplicialComplex(dim={self.dim}, cells=[{counts}])"


class WeightScheme:
    """A choice of positive weights on simplices, normalized per degree.

    kind is one of ``mu``, ``m``, ``custom``.  ``degree_weights`` returns
    the exact probability vector used by norms in that degree.
    """

    def __init__(self, kind: str, complex: SimplicialComplex, values=None):
        if kind not in ("mu", "m", "custom"):
            raise InputError(f"unknown weight scheme {kind!r}")
        self.kind = kind
        self.complex = complex
        if kind == "custom":
            if values is None:
                raise InputError("custom scheme needs a value map")
            self.values = {simplex(s): Fraction(v) for s, v in dict(values).items()}
            for s, v in self.values.items():
                if v <= 0:
                    raise InputError(f"weight of {s} must be positive")
                if not complex.has_simplex(s):
                    raise InputError(f"{s} is not a simplex of the complex")
            for i in range(complex.dim + 1):
                for s in complex.simplices(i):
                    if s not in self.values:
                        raise InputError(f"custom scheme missing simplex {s}")
        else:
            self.values = None

    @classmethod
    def mu(cls, complex: SimplicialComplex) -> "WeightScheme":
        return cls("mu", complex)

    @classmethod
    def m(cls, complex: SimplicialComplex) -> "WeightScheme":
        return cls("m", complex)

    @classmethod
    def custom(cls, complex: SimplicialComplex, values) -> "WeightScheme":
        return cls("custom", complex, values=values)

    def raw_weight(self, s: Simplex) -> Fraction:
        if self.kind == "mu":
            return self.complex.weight_mu(s)
        if self.kind == "m":
            return self.complex.weight_m(s)
        return self.values[simplex(s)]

    def degree_weights(self, i: int):
        """Normalized weights over the i-simplices, summing to 1."""
        cells = self.complex.simplices(i)
        raw = [self.raw_weight(s) for s in cells]
        total = sum(raw, Fraction(0))
        if total == 0:
            raise InputError(f"degree {i} carries zero total weight")
        return {s: w / total for s, w in zip(cells, raw)}
