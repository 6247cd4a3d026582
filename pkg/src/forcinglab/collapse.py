"""Laver and Levy collapse posets over a cardinal frame.

A Laver condition is a tuple ``((stage, entry), ...)`` sorted by stage, where
each entry is a partial function written as a sorted tuple of
``(point, value)`` pairs.  Collapse conditions with ordinal domain are plain
value tuples ``(p(0), p(1), ...)``.
"""

from __future__ import annotations

import itertools
from typing import Mapping

from .frame import CardinalFrame, FrameError, is_easton
from .poset import FinitePoset, OrderMap, subposet

Entry = tuple[tuple[int, int], ...]
LaverCondition = tuple[tuple[int, Entry], ...]

EMPTY: LaverCondition = ()


class LaverPoset(FinitePoset):
    """A Laver collapse ``L(lower, upper)`` remembering how it was built."""

    def __init__(self, elements, leq, *, frame, lower, upper, alphabet, **kw):
        super().__init__(elements, leq, **kw)
        self.frame = frame
        self.lower = lower
        self.upper = upper
        self.alphabet = dict(alphabet)
        self.stages = frame.stages_between(lower, upper)
        self.points = frame.domain_points(lower)


def laver_leq(q: LaverCondition, p: LaverCondition) -> bool:
    """``q <= p``: ``dom p`` is contained in ``dom q`` and ``p(d)`` in ``q(d)``."""
    qd = dict(q)
    for stage, f in p:
        g = qd.get(stage)
        if g is None or not set(f) <= set(g):
            return False
    return True


def partial_functions(points: int, a: int) -> list[Entry]:
    """All partial functions ``[0, points) -> [0, a)`` as sorted pair tuples."""
    out = []
    for choice in itertools.product(range(-1, a), repeat=points):
        out.append(tuple((x, v) for x, v in enumerate(choice) if v >= 0))
    return sorted(out)


def _leq_matrix(elements, le):
    import numpy as np

    n = len(elements)
    m = np.zeros((n, n), dtype=bool)
    sets = [{s: set(f) for s, f in e} for e in elements]
    for i in range(n):
        qi = sets[i]
        for j in range(n):
            pj = sets[j]
            m[i, j] = all(s in qi and f <= qi[s] for s, f in pj.items())
    return m


def laver_alphabet(frame: CardinalFrame, stages, alphabet: Mapping[int, int] | None = None):
    out = {}
    for s in stages:
        if alphabet is not None and s in alphabet:
            out[s] = alphabet[s]
        else:
            out[s] = frame.alphabet_at(s)
    return out


def build_laver(frame: CardinalFrame, lower: int, upper: int,
                alphabet: Mapping[int, int] | None = None) -> LaverPoset:
    """All Laver conditions over the regular stages strictly between
    ``lower`` and ``upper``; ``alphabet`` overrides the frame's value sizes."""
    for name, s in (("lower", lower), ("upper", upper)):
        if s not in frame.regulars and s != frame.lambda_top:
            raise FrameError(f"parameter not regular: {name}={s}")
    if not lower < upper:
        raise FrameError(f"need lower < upper, got {lower}, {upper}")
    stages = frame.stages_between(lower, upper)
    sizes = laver_alphabet(frame, stages, alphabet)
    points = frame.domain_points(lower)
    entries = {s: partial_functions(points, sizes[s]) for s in stages}

    elements: list[LaverCondition] = []
    for k in range(len(stages) + 1):
        for X in itertools.combinations(stages, k):
            if not is_easton(X, frame):
                continue
            for fs in itertools.product(*(entries[s] for s in X)):
                elements.append(tuple(zip(X, fs)))
    elements.sort(key=lambda c: (tuple(s for s, _ in c), tuple(f for _, f in c)))
    return LaverPoset(elements, _leq_matrix(elements, laver_leq), top=0, validate=False,
                      frame=frame, lower=lower, upper=upper, alphabet=sizes)


def audit_laver(P: LaverPoset, c: LaverCondition) -> bool:
    """Type invariants of a Laver condition of ``P``."""
    stages = [s for s, _ in c]
    if stages != sorted(set(stages)) or not set(stages) <= set(P.stages):
        return False
    if not is_easton(stages, P.frame):
        return False
    # one xi bounds every entry domain
    xi = 1 + max((x for _, f in c for x, _ in f), default=-1)
    if xi > P.points:
        return False
    for s, f in c:
        xs = [x for x, _ in f]
        if xs != sorted(set(xs)):
            return False
        if any(not 0 <= v < P.alphabet[s] for _, v in f):
            return False
    return True


def laver_count(frame: CardinalFrame, lower: int, upper: int,
                alphabet: Mapping[int, int] | None = None) -> int:
    """Closed-form size: each stage is absent or carries one of
    ``(a + 1) ** points`` partial functions."""
    stages = frame.stages_between(lower, upper)
    sizes = laver_alphabet(frame, stages, alphabet)
    points = frame.domain_points(lower)
    total = 1
    for s in stages:
        total *= 1 + (sizes[s] + 1) ** points
    return total


def restrict_laver(P: FinitePoset, cut: int, side: str) -> FinitePoset:
    """Conditions whose stages lie below ``cut`` (``side="below"``) or at and
    above it (``side="above"``)."""
    if cut not in P.frame.regulars:
        raise FrameError(f"cut {cut} is not regular")
    if side == "below":
        keep = [i for i, c in enumerate(P.elements) if all(s < cut for s, _ in c)]
    elif side == "above":
        keep = [i for i, c in enumerate(P.elements) if all(s >= cut for s, _ in c)]
    else:
        raise ValueError(f"side must be 'below' or 'above', not {side!r}")
    out = subposet(P, keep)
    out.frame = P.frame  # so restrictions can be chained
    return out


# --- Levy collapse Col(mu, kappa) ----------------------------------------

def col_leq(q: Entry, p: Entry) -> bool:
    return set(p) <= set(q)


def build_col(frame: CardinalFrame) -> FinitePoset:
    """Functions from ``x`` contained in ``[0, mu)`` with ``|x| < mu`` into
    ``[0, col_alphabet)``, ordered by reverse inclusion."""
    mu, a = frame.mu, frame.col_alphabet
    elements: list[Entry] = []
    for k in range(mu):
        for xs in itertools.combinations(range(mu), k):
            for vs in itertools.product(range(a), repeat=k):
                elements.append(tuple(zip(xs, vs)))
    elements.sort(key=lambda e: (tuple(x for x, _ in e), e))
    return FinitePoset.from_order(elements, col_leq, top=0, validate=False)


def ordinal_col_conditions(frame: CardinalFrame) -> list[tuple[int, ...]]:
    out = []
    for k in range(frame.mu):
        out.extend(itertools.product(range(frame.col_alphabet), repeat=k))
    return out


def prefix_leq(q: tuple, p: tuple) -> bool:
    return len(p) <= len(q) and q[:len(p)] == p


def build_col_dense(frame: CardinalFrame) -> FinitePoset:
    """Collapse conditions whose domain is an initial segment, as value tuples."""
    return FinitePoset.from_order(ordinal_col_conditions(frame), prefix_leq, top=0,
                                  validate=False)


def as_partial(p: tuple[int, ...]) -> Entry:
    return tuple(enumerate(p))


def col_dense_inclusion(frame: CardinalFrame) -> OrderMap:
    full = build_col(frame)
    dense = build_col_dense(frame)
    return OrderMap.from_function(dense, full, as_partial)
