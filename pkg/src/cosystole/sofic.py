"""Permutation almost-representations and central-extension experiments.

Words act through their letters composed left to right (the rightmost
letter is applied first); uppercase letters are inverses.  The normalized
Hamming data lives in :mod:`cosystole.perms`.

An extension approximation is an almost-representation of a central
extension on a point set carrying an exact free commuting action of the
center A: its orbits are blocks of size |A|, the quotient set of the
induced approximation.  A transversal (one point per orbit) turns the
action of each generator into an A-valued displacement table, the defect
cochain beta; summing beta along a relator recovers the relator's value
under the classifying cocycle alpha' wherever the approximation is exact,
and the agreement fraction measures the good part otherwise.

Text formats::

    # presentation               # almost-hom            # extension spec
    gens: a b                    5                        A: Z/2
    rels: aa bb abAB             gen a: 2 3 4 5 1         alpha: aa = (1)

Extension approximations add ``agen <j>: <perm>`` lines, one per cyclic
factor of A.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import perms
from .abelian import FiniteAbelianGroup
from .errors import CapacityError, FormatError, InputError, StructureError


def _validate_word(word: str, generators) -> str:
    for ch in word:
        if ch.lower() not in generators:
            raise InputError(f"unknown letter {ch!r} in word {word!r}")
    return word


def free_reduce(word: str) -> str:
    out = []
    for ch in word:
        if out and out[-1] != ch and out[-1].lower() == ch.lower():
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


def invert_word(word: str) -> str:
    return "".join(ch.lower() if ch.isupper() else ch.upper() for ch in reversed(word))


@dataclass(frozen=True)
class Presentation:
    generators: tuple
    relators: tuple

    def __post_init__(self):
        if not self.generators:
            raise InputError("a presentation needs at least one generator")
        for g in self.generators:
            if len(g) != 1 or not g.islower():
                raise InputError(f"generator names are single lowercase letters, got {g!r}")
        for r in self.relators:
            _validate_word(r, self.generators)
            if free_reduce(r) != r:
                raise InputError(f"relator {r!r} is not freely reduced")

    @classmethod
    def parse(cls, text: str) -> "Presentation":
        gens, rels = None, None
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("gens:"):
                gens = tuple(line[5:].split())
            elif line.startswith("rels:"):
                rels = tuple(line[5:].split())
            elif line.startswith(("A:", "alpha:")):
                continue  # extension-spec lines live in the same file
            else:
                raise FormatError(f"line {lineno}: unknown directive")
        if gens is None:
            raise FormatError("missing 'gens:' line")
        return cls(gens, rels or ())

    def format(self) -> str:
        return f"gens: {' '.join(self.generators)}\nrels: {' '.join(self.relators)}\n"

    def reduced_words(self, max_length: int, budget: int = 1 << 20):
        """All nonempty freely reduced words up to max_length, shortlex."""
        letters = [g for g in self.generators] + [g.upper() for g in self.generators]
        letters.sort()
        count_estimate = len(letters) * (len(letters) - 1) ** max(max_length - 1, 0) * max_length
        if count_estimate > budget:
            raise CapacityError(
                f"about {count_estimate} reduced words up to length {max_length} "
                f"exceed budget {budget}"
            )
        out = []
        frontier = [""]
        for _ in range(max_length):
            new = []
            for w in frontier:
                for ch in letters:
                    if w and w[-1] != ch and w[-1].lower() == ch.lower():
                        continue
                    new.append(w + ch)
            out.extend(new)
            frontier = new
        return out


class AlmostHom:
    """Images of the generators in Sym(n); not required to satisfy anything."""

    def __init__(self, n: int, images):
        self.n = int(n)
        self.images = {}
        for name, perm in dict(images).items():
            perm = tuple(perm)
            if len(perm) != self.n or not perms.is_permutation(perm):
                raise InputError(f"image of {name!r} is not a permutation of n={self.n}")
            self.images[name] = perm

    def word_eval(self, word: str):
        """The permutation of the word (rightmost letter applied first)."""
        acc = perms.identity(self.n)
        for ch in word:
            if ch.islower():
                if ch not in self.images:
                    raise InputError(f"unknown generator {ch!r}")
                acc = perms.compose(acc, self.images[ch])
            elif ch.isupper():
                if ch.lower() not in self.images:
                    raise InputError(f"unknown generator {ch.lower()!r}")
                acc = perms.compose(acc, perms.invert(self.images[ch.lower()]))
            else:
                raise InputError(f"bad letter {ch!r}")
        return acc

    @classmethod
    def parse(cls, text: str) -> "AlmostHom":
        n = None
        images = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("gen "):
                head, _, body = line.partition(":")
                images[head.split()[1]] = perms.from_one_line(body)
            elif line.startswith(("agen ", "A:")):
                continue  # extension-approximation lines
            elif n is None:
                try:
                    n = int(line)
                except ValueError:
                    raise FormatError(f"line {lineno}: expected the point count") from None
            else:
                raise FormatError(f"line {lineno}: unknown directive")
        if n is None:
            raise FormatError("missing point count line")
        return cls(n, images)

    def format(self) -> str:
        lines = [str(self.n)]
        for name in sorted(self.images):
            lines.append(f"gen {name}: " + perms.to_one_line(self.images[name]))
        return "\n".join(lines) + "\n"


@dataclass
class DefectReport:
    relator_defects: dict
    max_relator_defect: Fraction
    freeness_scores: list  # (word, fraction moved), ascending by score
    min_freeness: Fraction | None
    caveat: str

    def lines(self):
        out = [("kind", "sofic-defect-report")]
        for r, v in self.relator_defects.items():
            out.append((f"relator[{r}]", str(v)))
        out.append(("max-relator-defect", str(self.max_relator_defect)))
        if self.min_freeness is not None:
            word, score = self.freeness_scores[0]
            out.append(("min-freeness", f"{score} at word {word}"))
        out.append(("caveat", self.caveat))
        return out


def defect_report(
    phi: AlmostHom, pres: Presentation, word_length: int = 3, budget: int = 1 << 20
) -> DefectReport:
    """Relator defects and raw freeness scores up to a word length.

    Freeness scores are reported for every reduced word without deciding
    which words are trivial in the group; read them with that caveat.
    """
    defects = {}
    worst = Fraction(0)
    for r in pres.relators:
        val = perms.moved_fraction(phi.word_eval(r))
        defects[r] = val
        worst = max(worst, val)
    scores = []
    for w in pres.reduced_words(word_length, budget=budget):
        scores.append((w, perms.moved_fraction(phi.word_eval(w))))
    scores.sort(key=lambda t: (t[1], len(t[0]), t[0]))
    return DefectReport(
        defects,
        worst,
        scores,
        scores[0][1] if scores else None,
        "freeness scores are raw: triviality of words in the group is not decided",
    )


# -- extension approximations --------------------------------------------------------


@dataclass(frozen=True)
class CentralExtensionSpec:
    presentation: Presentation
    group: FiniteAbelianGroup
    alpha: dict = field(hash=False)  # relator -> AElement

    def __post_init__(self):
        for r in self.presentation.relators:
            if r not in self.alpha:
                raise InputError(f"alpha is missing relator {r!r}")
        for r, a in self.alpha.items():
            if r not in self.presentation.relators:
                raise InputError(f"alpha names unknown relator {r!r}")
            self.group.check(tuple(a))

    @classmethod
    def parse(cls, text: str) -> "CentralExtensionSpec":
        pres = Presentation.parse(text)
        group = None
        alpha = {}
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if line.startswith("A:"):
                group = FiniteAbelianGroup.parse(line[2:])
            elif line.startswith("alpha:"):
                body = line[6:]
                rel, _, val = body.partition("=")
                alpha[rel.strip()] = None, val.strip()
        if group is None:
            raise FormatError("missing 'A:' line")
        alpha = {
            r: FiniteAbelianGroup.parse_element(v, group) for r, (_x, v) in alpha.items()
        }
        return cls(pres, group, alpha)

    def format(self) -> str:
        lines = [self.presentation.format().rstrip("\n"), f"A: {self.group}"]
        for r in self.presentation.relators:
            lines.append(f"alpha: {r} = {FiniteAbelianGroup.format_element(self.alpha[r])}")
        return "\n".join(lines) + "\n"


class ExtensionApproximation:
    """Almost-hom for the extension plus the exact central A-structure.

    The A-factor permutations must commute, have order dividing their
    factor, and generate a free action; this is validated on construction
    and the orbits (blocks of size |A|) are indexed by their least point.
    """

    def __init__(self, group: FiniteAbelianGroup, hom: AlmostHom, a_images):
        self.group = group
        self.hom = hom
        self.n = hom.n
        self.a_images = [tuple(p) for p in a_images]
        if len(self.a_images) != len(group.factors):
            raise StructureError(
                f"{len(self.a_images)} central permutations for {len(group.factors)} factors"
            )
        for p, m in zip(self.a_images, group.factors):
            if len(p) != self.n or not perms.is_permutation(p):
                raise StructureError("central images must be permutations of the points")
            if perms.power(p, m) != perms.identity(self.n):
                raise StructureError(f"a central permutation has order not dividing {m}")
        for p, q in itertools.combinations(self.a_images, 2):
            if perms.compose(p, q) != perms.compose(q, p):
                raise StructureError("central permutations do not commute")
        if self.n % max(group.order, 1) != 0:
            raise StructureError(f"{self.n} points cannot split into orbits of size {group.order}")
        for a in group.elements():
            if group.is_zero(a):
                continue
            perm = self.central_perm(a)
            if any(perm[i] == i for i in range(self.n)):
                raise StructureError("the central action is not free")
        self._build_orbits()

    def central_perm(self, a):
        perm = perms.identity(self.n)
        for coord, p in zip(a, self.a_images):
            perm = perms.compose(perms.power(p, coord), perm)
        return perm

    def _build_orbits(self):
        group = self.group
        seen = [False] * self.n
        self.orbit_of = [0] * self.n
        self.sections = []
        self.coords = [group.zero()] * self.n
        for x in range(self.n):
            if seen[x]:
                continue
            o = len(self.sections)
            self.sections.append(x)
            for a in group.elements():
                y = self.central_perm(a)[x]
                if seen[y]:
                    raise StructureError("orbit structure collapsed; action not free")
                seen[y] = True
                self.orbit_of[y] = o
                self.coords[y] = a
        self.m = len(self.sections)

    def commutes_with_center(self) -> bool:
        for img in self.hom.images.values():
            for p in self.a_images:
                if perms.compose(img, p) != perms.compose(p, img):
                    return False
        return True

    # -- text format -------------------------------------------------------

    @classmethod
    def parse(cls, text: str) -> "ExtensionApproximation":
        hom = AlmostHom.parse(text)
        group = None
        agens = {}
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if line.startswith("A:"):
                group = FiniteAbelianGroup.parse(line[2:])
            elif line.startswith("agen "):
                head, _, body = line.partition(":")
                agens[int(head.split()[1])] = perms.from_one_line(body)
        if group is None:
            raise FormatError("missing 'A:' line")
        images = [agens[j] for j in sorted(agens)]
        return cls(group, hom, images)

    def format(self) -> str:
        lines = [self.hom.format().rstrip("\n"), f"A: {self.group}"]
        for j, p in enumerate(self.a_images, start=1):
            lines.append(f"agen {j}: " + perms.to_one_line(p))
        return "\n".join(lines) + "\n"


@dataclass
class InducedQuotient:
    hom: AlmostHom
    ambiguity_rate: Fraction
    ambiguous_pairs: tuple


def induce_quotient(phi: ExtensionApproximation) -> InducedQuotient:
    """The generators acting on A-orbits, with majority-vote resolution.

    An exact approximation maps orbits to orbits; inexact ones vote, ties
    broken toward the smallest target orbit, and the rate of non-unanimous
    (generator, orbit) pairs is reported.
    """
    m = phi.m
    images = {}
    ambiguous = []
    for name, img in sorted(phi.hom.images.items()):
        target = [0] * m
        for o in range(m):
            votes = {}
            for x in range(phi.n):
                if phi.orbit_of[x] != o:
                    continue
                t = phi.orbit_of[img[x]]
                votes[t] = votes.get(t, 0) + 1
            winner = max(sorted(votes), key=lambda t: votes[t])
            target[o] = winner
            if len(votes) > 1:
                ambiguous.append((name, o))
        if not perms.is_permutation(target):
            # resolve collisions deterministically: greedy repair to the
            # least free slot keeps the result a permutation
            used = set()
            free = [t for t in range(m) if target.count(t) == 0]
            fixed = []
            for o in range(m):
                if target[o] in used:
                    fixed.append(o)
                else:
                    used.add(target[o])
            for o in fixed:
                target[o] = free.pop(0)
                ambiguous.append((name, o))
        images[name] = tuple(target)
    total = m * max(len(phi.hom.images), 1)
    seen = sorted(set(ambiguous))
    return InducedQuotient(
        AlmostHom(m, images), Fraction(len(seen), total), tuple(seen)
    )


@dataclass
class DefectCocycle:
    """A-valued displacement tables beta[generator][orbit]."""

    beta: dict
    section: tuple


def defect_cocycle(phi: ExtensionApproximation, section=None) -> DefectCocycle:
    """Displacements of a transversal under the generators.

    beta[s][o] is the central element moving the section point of the
    orbit hit by s back onto the actual image of the section point of o.
    """
    if section is None:
        section = tuple(phi.sections)
    else:
        section = tuple(section)
        if sorted(phi.orbit_of[x] for x in section) != list(range(phi.m)):
            raise InputError("section is not a transversal of the orbits")
        ordered = [0] * phi.m
        for x in section:
            ordered[phi.orbit_of[x]] = x
        section = tuple(ordered)
    group = phi.group
    beta = {}
    for name, img in sorted(phi.hom.images.items()):
        table = []
        for o in range(phi.m):
            y = img[section[o]]
            target = phi.orbit_of[y]
            # displacement relative to the section point of the target orbit
            base = section[target]
            shift = group.sub(phi.coords[y], phi.coords[base])
            table.append(shift)
        beta[name] = tuple(table)
    return DefectCocycle(beta, section)


def _walk_relator(relator: str, induced: AlmostHom, beta, group, start: int):
    """Accumulate beta along the relator applied to the start orbit."""
    total = group.zero()
    o = start
    for ch in reversed(relator):
        name = ch.lower()
        img = induced.images[name]
        if ch.islower():
            total = group.add(total, beta[name][o])
            o = img[o]
        else:
            prev = perms.invert(img)[o]
            total = group.sub(total, beta[name][prev])
            o = prev
    return total, o


@dataclass
class AgreementReport:
    fractions: dict  # relator -> Fraction
    minimum: Fraction

    def lines(self):
        out = [("kind", "delta-beta-agreement")]
        for r, v in self.fractions.items():
            out.append((f"relator[{r}]", str(v)))
        out.append(("minimum", str(self.minimum)))
        return out


def compare_delta_beta(
    phi: ExtensionApproximation,
    spec: CentralExtensionSpec,
    cocycle: DefectCocycle | None = None,
    induced: InducedQuotient | None = None,
) -> AgreementReport:
    """Fraction of orbits where the beta-sum along each relator hits alpha'."""
    if set(spec.presentation.generators) != set(phi.hom.images):
        raise InputError("presentation generators do not match the approximation")
    if spec.group != phi.group:
        raise InputError("extension spec and approximation use different groups A")
    induced = induced or induce_quotient(phi)
    cocycle = cocycle or defect_cocycle(phi)
    group = phi.group
    fractions = {}
    minimum = Fraction(1)
    for r in spec.presentation.relators:
        good = 0
        for o in range(phi.m):
            total, _end = _walk_relator(r, induced.hom, cocycle.beta, group, o)
            if total == spec.alpha[r]:
                good += 1
        frac = Fraction(good, phi.m)
        fractions[r] = frac
        minimum = min(minimum, frac)
    return AgreementReport(fractions, minimum)


@dataclass
class VanishingCertificate:
    verdict: str  # "consistent" | "inconsistent"
    primitive: dict | None  # generator -> tuple of AElements per orbit
    verified: bool


def afree_vanishing_check(
    phi: ExtensionApproximation, spec: CentralExtensionSpec
) -> VanishingCertificate:
    """Solve for b with (sum of b along r from every orbit) = alpha'(r).

    This is the finite-stage vanishing statement for exact free central
    actions: the solver either produces a primitive (recomputed and
    verified) or a certified infeasibility, which would falsify the setup.
    """
    from .modlinalg import solve_matvec

    if set(spec.presentation.generators) != set(phi.hom.images):
        raise InputError("presentation generators do not match the approximation")
    if spec.group != phi.group:
        raise InputError("extension spec and approximation use different groups A")
    if not phi.commutes_with_center():
        raise StructureError("generators do not commute with the central action")
    for r in spec.presentation.relators:
        expected = phi.central_perm(spec.alpha[r])
        if phi.hom.word_eval(r) != expected:
            raise StructureError(
                f"relator {r!r} does not act exactly as alpha'; "
                "the vanishing statement is about exact actions"
            )
    induced = induce_quotient(phi)
    if induced.ambiguity_rate != 0:
        raise StructureError("induced quotient is ambiguous; the action is not exact")
    gens = sorted(phi.hom.images)
    gen_index = {g: i for i, g in enumerate(gens)}
    m = phi.m
    unknowns = len(gens) * m
    rows = []
    rhs_coords = []
    for r in spec.presentation.relators:
        for o in range(m):
            row = [0] * unknowns
            cur = o
            for ch in reversed(r):
                name = ch.lower()
                img = induced.hom.images[name]
                if ch.islower():
                    row[gen_index[name] * m + cur] += 1
                    cur = img[cur]
                else:
                    prev = perms.invert(img)[cur]
                    row[gen_index[name] * m + prev] -= 1
                    cur = prev
            rows.append(row)
            rhs_coords.append(spec.alpha[r])
    solution_cols = []
    for j, modulus in enumerate(phi.group.factors):
        rhs = [coords[j] for coords in rhs_coords]
        rows_mod = [[v % modulus for v in row] for row in rows]
        x = solve_matvec(rows_mod, unknowns, rhs, modulus)
        if x is None:
            return VanishingCertificate("inconsistent", None, True)
        solution_cols.append(x)
    primitive = {}
    for g in gens:
        i = gen_index[g]
        primitive[g] = tuple(
            tuple(solution_cols[j][i * m + o] for j in range(len(phi.group.factors)))
            for o in range(m)
        )
    # verify by rerunning the walks with b in place of beta
    for r in spec.presentation.relators:
        for o in range(m):
            total, _ = _walk_relator(r, induced.hom, primitive, phi.group, o)
            if total != spec.alpha[r]:
                return VanishingCertificate("inconsistent", None, False)
    return VanishingCertificate("consistent", primitive, True)


# -- stability matching ---------------------------------------------------------


@dataclass
class CandidateMatch:
    name: str
    discrepancy: Fraction | None
    partition: tuple | None
    certified: bool
    skipped: str | None = None


@dataclass
class StabilityMatchResult:
    best: CandidateMatch | None
    rows: list
    epsilon: Fraction
    meets_epsilon: bool

    def lines(self):
        out = [("kind", "stability-match"), ("epsilon", str(self.epsilon))]
        for row in self.rows:
            if row.skipped:
                out.append((f"candidate[{row.name}]", f"skipped: {row.skipped}"))
            else:
                out.append(
                    (
                        f"candidate[{row.name}]",
                        f"discrepancy={row.discrepancy} certified={str(row.certified).lower()}",
                    )
                )
        if self.best is not None:
            out.append(("best", self.best.name))
            out.append(("best-discrepancy", str(self.best.discrepancy)))
        out.append(("meets-epsilon", str(self.meets_epsilon).lower()))
        return out


def _partition_stats(blocks, perm, d: int):
    """d x d table: |B_i ∩ perm(B_j)| as counts."""
    n = len(perm)
    counts = [[0] * d for _ in range(d)]
    for x in range(n):
        counts[blocks[perm[x]]][blocks[x]] += 1
    return counts


def stability_match(
    phi: AlmostHom,
    partition,
    candidates,
    words,
    epsilon,
    budget: int = 1 << 20,
    seed: int = 0,
) -> StabilityMatchResult:
    """Best finite honest action matching the partition statistics of phi.

    partition is a list of d disjoint blocks covering phi's points.  For
    every candidate the partition of its point set minimizing the maximal
    statistic discrepancy over the words is found exhaustively when
    d**points fits the budget, otherwise by seeded local search flagged as
    heuristic.  Returns the best candidate with its achieved discrepancy.
    """
    if not candidates:
        raise InputError("no candidate actions supplied")
    blocks_list = [sorted(int(x) for x in b) for b in partition]
    d = len(blocks_list)
    if d < 1 or d > 8:
        raise InputError("between 1 and 8 blocks are supported")
    assignment = [-1] * phi.n
    for i, block in enumerate(blocks_list):
        for x in block:
            if not 0 <= x < phi.n or assignment[x] != -1:
                raise InputError("blocks must disjointly cover the points")
            assignment[x] = i
    if any(a == -1 for a in assignment):
        raise InputError("blocks must cover every point")
    epsilon = Fraction(epsilon)
    phi_stats = {}
    for w in words:
        counts = _partition_stats(assignment, phi.word_eval(w), d)
        phi_stats[w] = [[Fraction(c, phi.n) for c in row] for row in counts]

    def discrepancy(candidate, cand_blocks):
        worst = Fraction(0)
        for w in words:
            counts = _partition_stats(cand_blocks, candidate.word_eval(w), d)
            for i in range(d):
                for j in range(d):
                    diff = abs(phi_stats[w][i][j] - Fraction(counts[i][j], candidate.n))
                    if diff > worst:
                        worst = diff
        return worst

    rows = []
    best = None
    import random

    rng = random.Random(seed)
    for idx, cand in enumerate(candidates):
        name = str(idx)
        nx = cand.n
        space = d**nx
        cand_perms = {w: cand.word_eval(w) for w in words}
        if space <= budget:
            best_disc, best_blocks = None, None
            for combo in itertools.product(range(d), repeat=nx):
                disc = discrepancy(cand, list(combo))
                if best_disc is None or disc < best_disc:
                    best_disc, best_blocks = disc, combo
                if best_disc == 0:
                    break
            rows.append(CandidateMatch(name, best_disc, best_blocks, True))
        else:
            best_disc, best_blocks = None, None
            for _restart in range(8):
                blocks = [rng.randrange(d) for _ in range(nx)]
                disc = discrepancy(cand, blocks)
                improved = True
                while improved:
                    improved = False
                    for x in range(nx):
                        original = blocks[x]
                        for b in range(d):
                            if b == original:
                                continue
                            blocks[x] = b
                            cand_disc = discrepancy(cand, blocks)
                            if cand_disc < disc:
                                disc = cand_disc
                                improved = True
                                original = b
                            else:
                                blocks[x] = original
                if best_disc is None or disc < best_disc:
                    best_disc, best_blocks = disc, tuple(blocks)
            rows.append(CandidateMatch(name, best_disc, tuple(best_blocks), False))
        row = rows[-1]
        if best is None or (
            row.discrepancy is not None
            and (best.discrepancy is None or row.discrepancy < best.discrepancy)
        ):
            best = row
    return StabilityMatchResult(
        best, rows, epsilon, best is not None and best.discrepancy is not None and best.discrepancy < epsilon
    )
