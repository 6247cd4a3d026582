"""Explicit finite posets and checkers for maps between them.

Orders follow the forcing convention: ``x <= y`` means ``x`` is the stronger
condition, and every poset has a greatest element ``top``.  The order is held
as a boolean matrix ``leq`` with ``leq[i, j]`` true iff element ``i <= j``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np


class PosetError(ValueError):
    pass


class FinitePoset:
    """An immutable finite partial order with a top element."""

    def __init__(self, elements: Iterable[Hashable], leq, top: int | None = None,
                 *, validate: bool = True):
        self.elements = tuple(elements)
        n = len(self.elements)
        leq = np.array(leq, dtype=bool).reshape(n, n)
        leq.flags.writeable = False
        self.leq = leq
        self.index = {e: i for i, e in enumerate(self.elements)}
        if len(self.index) != n:
            raise PosetError("duplicate elements")
        if top is None:
            tops = np.flatnonzero(leq.all(axis=0)) if n else []
            if len(tops) != 1:
                raise PosetError("no unique top element")
            top = int(tops[0])
        self.top = int(top)
        if validate:
            self._validate()

    @classmethod
    def from_order(cls, elements: Sequence[Hashable], le: Callable[[Hashable, Hashable], bool],
                   **kwargs) -> "FinitePoset":
        elements = list(elements)
        n = len(elements)
        m = np.zeros((n, n), dtype=bool)
        for i, x in enumerate(elements):
            for j, y in enumerate(elements):
                m[i, j] = i == j or le(x, y)
        return cls(elements, m, **kwargs)

    def _validate(self):
        L = self.leq
        n = len(self)
        if n == 0:
            raise PosetError("empty poset")
        if not L.diagonal().all():
            raise PosetError("order is not reflexive")
        both = L & L.T
        np.fill_diagonal(both, False)
        if both.any():
            i, j = map(int, np.argwhere(both)[0])
            raise PosetError(f"order is not antisymmetric at ({i}, {j})")
        Li = L.astype(np.int32)
        if ((Li @ Li > 0) & ~L).any():
            raise PosetError("order is not transitive")
        if not L[:, self.top].all():
            raise PosetError("top is not above every element")

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"FinitePoset(size={len(self)}, top={self.top})"

    def le(self, i: int, j: int) -> bool:
        return bool(self.leq[i, j])

    @cached_property
    def compat(self) -> np.ndarray:
        """``compat[i, j]`` iff ``i`` and ``j`` have a common lower bound."""
        L = self.leq.astype(np.float32)
        c = (L.T @ L) > 0.5
        c.flags.writeable = False
        return c

    @cached_property
    def minimal(self) -> tuple[int, ...]:
        below = self.leq.sum(axis=0)
        return tuple(int(i) for i in np.flatnonzero(below == 1))

    def up(self, i: int) -> frozenset[int]:
        return frozenset(int(j) for j in np.flatnonzero(self.leq[i]))

    def down(self, i: int) -> frozenset[int]:
        return frozenset(int(j) for j in np.flatnonzero(self.leq[:, i]))

    def same_as(self, other: "FinitePoset") -> bool:
        return (self.elements == other.elements and self.top == other.top
                and np.array_equal(self.leq, other.leq))


@dataclass(frozen=True)
class Filter:
    poset: FinitePoset = field(compare=False, repr=False)
    members: frozenset[int]

    def __contains__(self, i):
        return i in self.members

    def __len__(self):
        return len(self.members)

    def is_filter(self) -> bool:
        P = self.poset
        ms = sorted(self.members)
        if P.top not in self.members:
            return False
        for i in ms:
            if not P.up(i) <= self.members:
                return False
        for i, j in itertools.combinations(ms, 2):
            if not any(P.leq[k, i] and P.leq[k, j] for k in ms):
                return False
        return True

    def is_generic(self) -> bool:
        """A filter of a finite poset is generic iff it holds a minimal element."""
        return self.is_filter() and any(m in self.members for m in self.poset.minimal)


@dataclass
class OrderMap:
    source: FinitePoset
    target: FinitePoset
    map: np.ndarray

    def __post_init__(self):
        self.map = np.asarray(self.map, dtype=np.int64).reshape(len(self.source))
        if len(self.map) and (self.map.min() < 0 or self.map.max() >= len(self.target)):
            raise PosetError("map leaves the target poset")
        self._reports = {}

    @classmethod
    def identity(cls, P: FinitePoset) -> "OrderMap":
        return cls(P, P, np.arange(len(P)))

    @classmethod
    def from_function(cls, source: FinitePoset, target: FinitePoset,
                      fn: Callable[[Hashable], Hashable]) -> "OrderMap":
        return cls(source, target, [target.index[fn(e)] for e in source.elements])

    def __call__(self, i: int) -> int:
        return int(self.map[i])

    def compose(self, after: "OrderMap") -> "OrderMap":
        """``after . self``."""
        if after.source is not self.target:
            raise PosetError("maps do not compose")
        return OrderMap(self.source, after.target, after.map[self.map])


# --- reports --------------------------------------------------------------

PASS, FAIL, SKIP = "PASS", "FAIL", "SKIP"


@dataclass(frozen=True)
class Check:
    name: str
    status: str
    counterexample: tuple | None = None
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def line(self, prefix: str = "") -> str:
        out = f"CHECK {prefix}{self.name} {self.status}"
        if self.counterexample is not None:
            out += " counterexample=" + ",".join(str(x) for x in _flatten(self.counterexample))
        return out


def _flatten(x):
    if isinstance(x, (tuple, list, frozenset)):
        for y in x:
            yield from _flatten(y)
    else:
        yield x


def check(name: str, ok: bool, counterexample=None, detail: str = "") -> Check:
    return Check(name, PASS if ok else FAIL, None if ok else counterexample, detail)


@dataclass
class Report:
    subject: str
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    def add(self, c: Check) -> "Report":
        self.checks.append(c)
        return self


def _first_pair(mask: np.ndarray):
    hits = np.argwhere(mask)
    if len(hits) == 0:
        return None
    return tuple(int(x) for x in hits[0])


# --- basic operations ------------------------------------------------------

def compatible(P: FinitePoset, x: int, y: int) -> bool:
    return bool(P.compat[x, y])


def generic_filters(P: FinitePoset) -> list[Filter]:
    """Generic filters of a finite poset: the upward cones of its minimal elements."""
    return [Filter(P, P.up(m)) for m in P.minimal]


def _order_preservation(m: OrderMap) -> Check:
    S, T = m.source.leq, m.target.leq
    bad = S & ~T[np.ix_(m.map, m.map)]
    return check("order_preserving", not bad.any(), _first_pair(bad))


def check_projection(m: OrderMap) -> Report:
    """Check that ``m`` is a projection (order and top preserving, with the
    lifting law: ``p <= m(q)`` implies some ``q' <= q`` has ``m(q') <= p``)."""
    rep = Report("projection")
    rep.add(_order_preservation(m))
    top_ok = m(m.source.top) == m.target.top
    rep.add(check("top", top_ok, (m.source.top,)))
    S, T = m.source.leq, m.target.leq
    cex = None
    for q in range(len(m.source)):
        below = S[:, q]
        reach = T[m.map[below]].any(axis=0)
        need = T[:, m.map[q]]
        bad = np.flatnonzero(need & ~reach)
        if len(bad):
            cex = (q, int(bad[0]))
            break
    rep.add(check("lifting", cex is None, cex))
    return rep


def check_dense_embedding(m: OrderMap) -> Report:
    rep = Report("dense_embedding")
    S = m.source.leq
    img = m.target.leq[np.ix_(m.map, m.map)]
    rep.add(check("order_preserving", not (S & ~img).any(), _first_pair(S & ~img)))
    rep.add(check("order_reflecting", not (img & ~S).any(), _first_pair(img & ~S)))
    seen: dict[int, int] = {}
    cex = None
    for i, t in enumerate(m.map):
        t = int(t)
        if t in seen:
            cex = (seen[t], i)
            break
        seen[t] = i
    rep.add(check("injective", cex is None, cex))
    reach = m.target.leq[m.map].any(axis=0) if len(m.map) else np.zeros(len(m.target), bool)
    missing = np.flatnonzero(~reach)
    rep.add(check("dense", len(missing) == 0, (int(missing[0]),) if len(missing) else None))
    return rep


def check_complete_embedding(m: OrderMap) -> Report:
    """Order preservation, incompatibility preservation and the reduction
    criterion: every target condition ``t`` has a source ``s`` all of whose
    extensions map to conditions compatible with ``t``."""
    rep = Report("complete_embedding")
    rep.add(_order_preservation(m))
    Sc = m.source.compat
    Tc = m.target.compat[np.ix_(m.map, m.map)]
    bad = ~Sc & Tc
    rep.add(check("incompatibility_preserving", not bad.any(), _first_pair(bad)))
    S = m.source.leq
    # good[s, t]: every s' <= s has m(s') compatible with t
    compat_img = m.target.compat[m.map].astype(np.int32)  # [s', t]
    below = S.T.astype(np.int32)  # below[s, s'] = s' <= s
    count_ok = below @ compat_img
    good = count_ok == below.sum(axis=1, keepdims=True)
    missing = np.flatnonzero(~good.any(axis=0))
    rep.add(check("reduction", len(missing) == 0, (int(missing[0]),) if len(missing) else None))
    return rep


def image_generic(m: OrderMap, H: Filter, *, assume_projection: bool = False) -> Filter:
    """Upward closure of ``m[H]`` in the target; generic whenever ``m`` is a projection."""
    if not assume_projection and not check_projection(m).ok:
        raise PosetError("not a projection")
    T = m.target
    members = set()
    for h in H.members:
        members |= T.up(m(h))
    image = Filter(T, frozenset(members))
    if not image.is_generic():
        raise PosetError("image not generic")
    return image


def subposet(P: FinitePoset, indices: Iterable[int]) -> FinitePoset:
    idx = sorted(set(int(i) for i in indices))
    if P.top not in idx:
        raise PosetError("predicate excludes top")
    return FinitePoset([P.elements[i] for i in idx], P.leq[np.ix_(idx, idx)],
                       top=idx.index(P.top), validate=False)


def quotient_poset(m: OrderMap, G: Filter) -> FinitePoset:
    """The sub-poset ``m^{-1}[G]`` of the source."""
    idx = [i for i in range(len(m.source)) if m(i) in G.members]
    if not idx:
        raise PosetError("empty quotient")
    return subposet(m.source, idx)


def restrict(P: FinitePoset, predicate: Callable[[Hashable], bool]) -> FinitePoset:
    return subposet(P, [i for i, e in enumerate(P.elements) if predicate(e)])


def product(*posets: FinitePoset) -> FinitePoset:
    """Coordinatewise product; elements are tuples, in row-major order."""
    if not posets:
        raise PosetError("empty product")
    elements = list(itertools.product(*(P.elements for P in posets)))
    leq = np.ones((1, 1), dtype=bool)
    top = 0
    for P in posets:
        n = len(P)
        leq = (leq[:, None, :, None] & P.leq[None, :, None, :]).reshape(
            leq.shape[0] * n, leq.shape[1] * n)
        top = top * n + P.top
    return FinitePoset(elements, leq, top=top, validate=False)


def collapse_preorder(elements: Sequence[Hashable], leq: np.ndarray,
                      top: int | None = None) -> tuple[FinitePoset, np.ndarray]:
    """Identify mutually below elements of a preorder.

    Each class is represented by its least index; returns the poset and the
    array sending every carrier index to its class index.
    """
    leq = np.asarray(leq, dtype=bool)
    same = leq & leq.T
    rep = same.argmax(axis=0)  # least index equivalent to each element
    reps = np.unique(rep)
    pos = np.full(len(elements), -1, dtype=np.int64)
    pos[reps] = np.arange(len(reps))
    cls = pos[rep]
    P = FinitePoset([elements[i] for i in reps], leq[np.ix_(reps, reps)],
                    top=None if top is None else int(cls[top]), validate=False)
    return P, cls


def separative_quotient(P: FinitePoset) -> tuple[FinitePoset, OrderMap]:
    """Quotient by equal compatibility, ordered by ``[x] <= [y]`` iff every
    ``z <= x`` is compatible with ``y``.  Classes are labelled by their least
    member's element."""
    C = P.compat
    # sep_le[x, y]: all z <= x compatible with y
    below = P.leq.T.astype(np.int32)
    sep_le = (below @ C.astype(np.int32)) == below.sum(axis=1, keepdims=True)
    Q, cls = collapse_preorder(P.elements, sep_le, top=P.top)
    return Q, OrderMap(P, Q, cls)


# --- isomorphism ------------------------------------------------------------

@dataclass(frozen=True)
class IsoResult:
    status: str  # "found" | "no" | "exhausted"
    mapping: tuple[int, ...] | None = None

    def __bool__(self):
        return self.status == "found"


def _invariants(P: FinitePoset) -> list[tuple]:
    L = P.leq
    up = L.sum(axis=1)
    down = L.sum(axis=0)
    inc = P.compat.sum(axis=1)
    return [(int(up[i]), int(down[i]), int(inc[i])) for i in range(len(P))]


def poset_isomorphic(P: FinitePoset, Q: FinitePoset, cap: int = 16,
                     budget: int = 1_000_000) -> IsoResult:
    """Backtracking order-isomorphism search ``P -> Q``."""
    if len(P) > cap or len(Q) > cap:
        raise PosetError("cap exceeded")
    if len(P) != len(Q):
        return IsoResult("no")
    ip, iq = _invariants(P), _invariants(Q)
    if sorted(ip) != sorted(iq):
        return IsoResult("no")
    n = len(P)
    # most constrained first: rarest invariant class, then index
    freq = {}
    for v in ip:
        freq[v] = freq.get(v, 0) + 1
    order = sorted(range(n), key=lambda i: (freq[ip[i]], -ip[i][1], i))
    cands = {i: [j for j in range(n) if iq[j] == ip[i]] for i in range(n)}
    PL, QL = P.leq, Q.leq
    assign = [-1] * n
    used = [False] * n
    nodes = 0

    def extend(k):
        nonlocal nodes
        if k == n:
            return True
        i = order[k]
        for j in cands[i]:
            if used[j]:
                continue
            nodes += 1
            if nodes > budget:
                raise _Exhausted
            ok = True
            for kk in range(k):
                a = order[kk]
                b = assign[a]
                if PL[i, a] != QL[j, b] or PL[a, i] != QL[b, j]:
                    ok = False
                    break
            if not ok:
                continue
            assign[i] = j
            used[j] = True
            if extend(k + 1):
                return True
            used[j] = False
            assign[i] = -1
        return False

    try:
        found = extend(0)
    except _Exhausted:
        return IsoResult("exhausted")
    return IsoResult("found", tuple(assign)) if found else IsoResult("no")


class _Exhausted(Exception):
    pass


# --- antichains -------------------------------------------------------------

@dataclass(frozen=True)
class Census:
    max_size: int
    maximal_count: int
    antichains: tuple[tuple[int, ...], ...] | None = None


def antichain_census(P: FinitePoset, *, full: bool = False, cap: int = 20) -> Census:
    """Maximum antichain size and number of maximal antichains.

    Antichains are sets of pairwise incompatible conditions; maximal ones are
    the maximal cliques of the incompatibility graph, found by Bron-Kerbosch
    with pivoting over bitmasks.
    """
    if full and len(P) > cap:
        raise PosetError("census cap exceeded")
    n = len(P)
    inc = ~P.compat
    nbr = [sum(1 << int(j) for j in np.flatnonzero(inc[i]) if j != i) for i in range(n)]
    found: list[int] = []
    best = 0

    def bk(r, p, x, size):
        nonlocal best
        if not p and not x:
            found.append(r)
            best = max(best, size)
            return
        pu = p | x
        # pivot with most neighbours in p
        u = max(_bits(pu), key=lambda v: (nbr[v] & p).bit_count())
        cand = p & ~nbr[u]
        for v in _bits(cand):
            bit = 1 << v
            bk(r | bit, p & nbr[v], x & nbr[v], size + 1)
            p &= ~bit
            x |= bit

    bk(0, (1 << n) - 1, 0, 0)
    lists = None
    if full:
        lists = tuple(sorted(tuple(_bits(r)) for r in found))
    return Census(best, len(found), lists)


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def preserves_maximal_antichains(m: OrderMap, cap: int = 10) -> bool:
    """Direct check that every maximal antichain maps to a maximal antichain."""
    if len(m.source) > cap:
        raise PosetError("cap exceeded")
    T = m.target
    for A in antichain_census(m.source, full=True, cap=cap).antichains:
        image = [m(a) for a in A]
        if len(set(image)) != len(image):
            return False
        for a, b in itertools.combinations(image, 2):
            if T.compat[a, b]:
                return False
        for t in range(len(T)):
            if not any(T.compat[t, b] for b in image):
                return False
    return True


def check_directed_closed(P: FinitePoset, bound: int) -> Report:
    """Every directed subset with fewer than ``bound`` elements has a lower bound."""
    L = P.leq
    cex = None
    n = len(P)
    for size in range(1, bound):
        for S in itertools.combinations(range(n), size):
            directed = all(any(L[z, x] and L[z, y] for z in S)
                           for x, y in itertools.combinations(S, 2))
            if directed and not L[:, list(S)].all(axis=1).any():
                cex = S
                break
        if cex:
            break
    return Report("directed_closed", [check("lower_bounds", cex is None, cex)])
