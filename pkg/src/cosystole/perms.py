"""Permutations of {0, ..., n-1} as tuples of images.

All code in the package stores permutations 0-based.  Text formats use
one-line notation on points 1..n (``2 3 1`` is the 3-cycle), converted at
the parsing boundary.
"""

from __future__ import annotations

from .errors import FormatError, InputError


def identity(n: int) -> tuple[int, ...]:
    return tuple(range(n))


def compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    """Permutation applying q first, then p (function composition p∘q)."""
    if len(p) != len(q):
        raise InputError("cannot compose permutations of different sizes")
    return tuple(p[q[i]] for i in range(len(q)))


def invert(p: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def power(p: tuple[int, ...], k: int) -> tuple[int, ...]:
    n = len(p)
    if k < 0:
        return power(invert(p), -k)
    out = identity(n)
    for _ in range(k):
        out = compose(p, out)
    return out


def cycle(n: int, shift: int = 1) -> tuple[int, ...]:
    """The cyclic shift i -> i + shift mod n."""
    return tuple((i + shift) % n for i in range(n))


def is_permutation(seq) -> bool:
    return sorted(seq) == list(range(len(seq)))


def from_one_line(text: str) -> tuple[int, ...]:
    """Parse one-line notation on points 1..n, e.g. ``2 3 1``."""
    try:
        images = [int(tok) for tok in text.split()]
    except ValueError as exc:
        raise FormatError(f"bad permutation {text!r}: {exc}") from None
    zero_based = tuple(x - 1 for x in images)
    if not is_permutation(zero_based):
        raise FormatError(f"not a permutation of 1..{len(images)}: {text!r}")
    return zero_based


def to_one_line(p: tuple[int, ...]) -> str:
    return " ".join(str(i + 1) for i in p)


def moved_fraction(p: tuple[int, ...]):
    """Fraction of non-fixed points, the normalized Hamming length."""
    from fractions import Fraction

    n = len(p)
    if n == 0:
        return Fraction(0)
    return Fraction(sum(1 for i in range(n) if p[i] != i), n)


def hamming_distance(p: tuple[int, ...], q: tuple[int, ...]):
    """Normalized Hamming distance d(p, q) = ℓ(p q⁻¹)."""
    from fractions import Fraction

    if len(p) != len(q):
        raise InputError("permutations act on different point counts")
    n = len(p)
    if n == 0:
        return Fraction(0)
    return Fraction(sum(1 for i in range(n) if p[i] != q[i]), n)
