"""Deterministic constructors for the test corpus of complexes.

Complete complexes, cycles, the A2 flag complexes over F_2 and F_3 (the
spherical-building incidence graphs of small projective planes), the
7-vertex torus with its fundamental-group bookkeeping, and a seeded
random-complex generator in the Linial-Meshulam style.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .complexes import SimplicialComplex
from .errors import InputError


def complete_complex(n: int, d: int) -> SimplicialComplex:
    """All (d+1)-subsets of {0..n-1} as maximal simplices."""
    if d + 1 > n:
        raise InputError(f"complete complex needs d + 1 <= n, got d={d}, n={n}")
    return SimplicialComplex(itertools.combinations(range(n), d + 1))


def cycle_complex(n: int) -> SimplicialComplex:
    """The n-cycle as a 1-dimensional complex."""
    if n < 3:
        raise InputError("a cycle needs at least 3 vertices")
    return SimplicialComplex([(i, (i + 1) % n) for i in range(n)])


def octahedron() -> SimplicialComplex:
    """Boundary of the octahedron: a 2-sphere on 6 vertices.

    Vertex pairs (0,1), (2,3), (4,5) are antipodal non-edges.
    """
    tris = []
    for a in (0, 1):
        for b in (2, 3):
            for c in (4, 5):
                tris.append((a, b, c))
    return SimplicialComplex(tris)


def flag_complex_subspaces(q: int, n: int = 3) -> SimplicialComplex:
    """Flags of proper nonzero subspaces of F_q^3 as a bipartite graph.

    Vertices 0..N-1 are the points of the projective plane (1-dimensional
    subspaces, canonical representatives with leading coordinate 1, in
    lexicographic order), vertices N..2N-1 its lines (2-dimensional
    subspaces, indexed by the same canonical representatives of their
    defining functionals).  Edges are incident point-line pairs.  q = 2
    gives the Heawood graph (14 vertices, 21 edges).
    """
    if q not in (2, 3) or n != 3:
        raise InputError(f"flag complex supported for q in {{2, 3}}, n = 3; got q={q}, n={n}")
    reps = []
    for vec in itertools.product(range(q), repeat=3):
        if not any(vec):
            continue
        lead = next(i for i, c in enumerate(vec) if c)
        if vec[lead] == 1:
            reps.append(vec)
    reps.sort()
    npts = len(reps)
    edges = []
    for li, functional in enumerate(reps):
        for pi, point in enumerate(reps):
            if sum(a * b for a, b in zip(functional, point)) % q == 0:
                edges.append((pi, npts + li))
    return SimplicialComplex(edges)


@dataclass(frozen=True)
class TorusData:
    """Fundamental-group bookkeeping for the 7-vertex torus.

    The triangulation is the quotient of the triangular lattice Z^2 by the
    sublattice {(a, b) : a + 3b ≡ 0 (mod 7)}, a lattice point (x, y) landing
    on vertex (x + 3y) mod 7.  The two recorded loops lift to the lattice
    translations (7, 0) and (4, 1), a basis of the sublattice, so they
    generate the fundamental group Z^2.

    crossing_x / crossing_y assign to each increasing edge (u, v) the x / y
    component of its lattice step; both are integer 1-cocycles, and their
    reductions generate the degree-1 cohomology mod k for every k coprime
    to 7 (in particular mod 2, 3, and 4).
    """

    spanning_tree: tuple
    generator_loops: tuple
    crossing_x: dict = field(hash=False)
    crossing_y: dict = field(hash=False)


def torus_7():
    """The standard 7-vertex, 21-edge, 14-triangle torus, with its data."""
    tris = []
    for i in range(7):
        tris.append(tuple(sorted((i, (i + 1) % 7, (i + 3) % 7))))
        tris.append(tuple(sorted((i, (i + 2) % 7, (i + 3) % 7))))
    cx = {}
    cy = {}
    # lattice steps by label difference: +1 -> (1,0), +3 -> (0,1), +2 -> (-1,1)
    step = {1: (1, 0), 3: (0, 1), 2: (-1, 1), 6: (-1, 0), 4: (0, -1), 5: (1, -1)}
    for u in range(7):
        for v in range(u + 1, 7):
            sx, sy = step[(v - u) % 7]
            cx[(u, v)] = sx
            cy[(u, v)] = sy
    data = TorusData(
        spanning_tree=tuple((0, v) for v in range(1, 7)),
        generator_loops=((0, 1, 2, 3, 4, 5, 6, 0), (0, 1, 2, 3, 4, 0)),
        crossing_x=cx,
        crossing_y=cy,
    )
    return SimplicialComplex(tris), data


@dataclass
class RandomComplexResult:
    complex: SimplicialComplex
    retries: int
    purified: bool
    dropped_faces: tuple


def random_complex(n: int, d: int, p: float, seed: int, max_retries: int = 20) -> RandomComplexResult:
    """Full (d-1)-skeleton plus each d-face independently with probability p.

    If some (d-1)-face is left uncovered the draw is impure; the draw is
    retried up to max_retries times, after which the pure top-dimensional
    part (the closure of the chosen d-faces alone) is returned with the
    purified flag set.  With no chosen d-faces at all, the full
    (d-1)-skeleton is returned instead.  A fixed seed reproduces the same
    complex byte for byte.
    """
    if d + 1 > n:
        raise InputError(f"random complex needs d + 1 <= n, got d={d}, n={n}")
    rng = random.Random(seed)
    all_faces = list(itertools.combinations(range(n), d + 1))
    all_ridges = list(itertools.combinations(range(n), d))
    chosen = None
    retries = 0
    for attempt in range(max_retries + 1):
        cand = [f for f in all_faces if rng.random() < p]
        covered = set()
        for f in cand:
            covered.update(itertools.combinations(f, d))
        if all(r in covered for r in all_ridges):
            return RandomComplexResult(SimplicialComplex(cand), attempt, False, ())
        if chosen is None:
            chosen = (cand, tuple(r for r in all_ridges if r not in covered))
        retries = attempt
    cand, dropped = chosen
    if cand:
        return RandomComplexResult(SimplicialComplex(cand), retries, True, dropped)
    return RandomComplexResult(
        SimplicialComplex(all_ridges), retries, True, dropped
    )


def corpus(count: int = 50, seed: int = 0):
    """A reproducible corpus of small pure complexes (n <= 12, d <= 3)."""
    out = []
    out.append(complete_complex(3, 1))
    out.append(complete_complex(4, 1))
    out.append(complete_complex(5, 1))
    out.append(complete_complex(4, 2))
    out.append(complete_complex(5, 2))
    out.append(complete_complex(5, 3))
    out.append(complete_complex(6, 3))
    out.append(cycle_complex(3))
    out.append(cycle_complex(6))
    out.append(cycle_complex(9))
    out.append(octahedron())
    out.append(flag_complex_subspaces(2))
    out.append(torus_7()[0])
    rng = random.Random(seed)
    k = 0
    while len(out) < count:
        n = rng.randint(4, 12)
        d = rng.randint(1, 3)
        if d + 1 > n:
            continue
        p = rng.choice([0.5, 0.7, 0.9, 1.0])
        out.append(random_complex(n, d, p, seed=seed * 1000 + k).complex)
        k += 1
    return out
