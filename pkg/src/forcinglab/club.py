"""Club codes of collapse conditions and the mixed-radix block codec."""

from __future__ import annotations

from typing import Sequence


class CodecError(ValueError):
    pass


def derive_club(p: Sequence[int]) -> tuple[int, ...]:
    """Club code of a condition with ordinal domain: ``C(0) = 0`` and
    ``C(i+1) = C(i) + 1 + p(i)``."""
    club = [0]
    for v in p:
        club.append(club[-1] + 1 + v)
    return tuple(club)


def recover_from_club(club: Sequence[int]) -> tuple[int, ...]:
    if not club or club[0] != 0:
        raise CodecError("not a club code: must start at 0")
    out = []
    for a, b in zip(club, club[1:]):
        if b <= a:
            raise CodecError("not a club code: not strictly increasing")
        out.append(b - a - 1)
    return tuple(out)


def block_size(alpha: int, beta: int, a: int) -> int:
    """Number of functions ``[alpha, beta) -> a``."""
    return a ** (beta - alpha)


def block_encode(f: Sequence[int], alpha: int, beta: int, a: int) -> int:
    """Position of ``f`` in the lexicographic list of functions ``[alpha, beta) -> a``.

    The most significant digit sits at ``alpha``.
    """
    if len(f) != beta - alpha:
        raise CodecError(f"function of length {len(f)} on block [{alpha}, {beta})")
    if len(f) == 1 and 0 <= f[0] < a:
        return f[0]
    index = 0
    for v in f:
        if not 0 <= v < a:
            raise CodecError(f"value out of alphabet: {v} not in [0, {a})")
        index = index * a + v
    return index


def block_decode(i: int, alpha: int, beta: int, a: int) -> tuple[int, ...]:
    """The ``i``-th function ``[alpha, beta) -> a`` in lexicographic order."""
    n = beta - alpha
    if n == 1 and 0 <= i < a:
        return (i,)
    if i < 0 or n < 0:
        raise CodecError(f"index out of range: {i} for block [{alpha}, {beta}) over {a}")
    digits = []
    rest = i
    for _ in range(n):
        rest, d = divmod(rest, a)
        digits.append(d)
    if rest:
        raise CodecError(f"index out of range: {i} for block [{alpha}, {beta}) over {a}")
    digits.reverse()
    return tuple(digits)
