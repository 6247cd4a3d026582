"""Brute-force reference enumerators for small posets.

Everything here works from the raw order relation only, by literal
definition and subset enumeration, and shares no code with
:mod:`forcinglab.poset` beyond reading ``P.leq``.  Exponential by design;
intended for posets of at most a dozen elements.
"""

from __future__ import annotations

from itertools import combinations

NAIVE_CAP = 12


def _le(P, i, j):
    return bool(P.leq[i][j])


def _guard(P, cap):
    if len(P) > cap:
        raise ValueError(f"oracle cap {cap} exceeded ({len(P)} elements)")


def naive_compatible(P, x, y):
    return any(_le(P, z, x) and _le(P, z, y) for z in range(len(P)))


def naive_filters(P, cap=NAIVE_CAP):
    """All filters: nonempty, upward closed, any two members have a common
    lower bound among the members."""
    _guard(P, cap)
    n = len(P)
    out = []
    for mask in range(1, 1 << n):
        S = [i for i in range(n) if mask >> i & 1]
        up_closed = all(mask >> j & 1 for i in S for j in range(n) if _le(P, i, j))
        if not up_closed:
            continue
        if all(any(_le(P, z, a) and _le(P, z, b) for z in S) for a, b in combinations(S, 2)):
            out.append(frozenset(S))
    return out


def naive_dense_sets(P, cap=NAIVE_CAP):
    _guard(P, cap)
    n = len(P)
    return [mask for mask in range(1, 1 << n)
            if all(any(mask >> d & 1 and _le(P, d, x) for d in range(n)) for x in range(n))]


def naive_generic_filters(P, cap=NAIVE_CAP):
    """Filters meeting every dense subset, sorted by their least-below member."""
    dense = naive_dense_sets(P, cap)
    out = []
    for F in naive_filters(P, cap):
        fmask = sum(1 << i for i in F)
        if all(fmask & D for D in dense):
            out.append(F)
    return sorted(out, key=lambda F: sorted(F))


def naive_separative_classes(P, cap=NAIVE_CAP):
    """Partition by ``forall z (z || x <-> z || y)`` and the induced class order."""
    _guard(P, cap)
    n = len(P)
    comp = [[naive_compatible(P, x, y) for y in range(n)] for x in range(n)]
    classes: list[list[int]] = []
    for x in range(n):
        for c in classes:
            if comp[c[0]] == comp[x]:
                c.append(x)
                break
        else:
            classes.append([x])

    def below(x, y):
        return all(comp[z][y] for z in range(n) if _le(P, z, x))

    order = {(a, b) for a in range(len(classes)) for b in range(len(classes))
             if below(classes[a][0], classes[b][0])}
    return [tuple(c) for c in classes], order


def naive_antichain_census(P, cap=NAIVE_CAP):
    """(max antichain size, number of maximal antichains, sorted list)."""
    _guard(P, cap)
    n = len(P)
    comp = [[naive_compatible(P, x, y) for y in range(n)] for x in range(n)]
    anti = []
    for mask in range(1, 1 << n):
        S = [i for i in range(n) if mask >> i & 1]
        if all(not comp[a][b] for a, b in combinations(S, 2)):
            anti.append(mask)
    antiset = set(anti)
    maximal = [m for m in anti
               if not any((m | 1 << j) in antiset for j in range(n) if not m >> j & 1)]
    lists = sorted(tuple(i for i in range(n) if m >> i & 1) for m in maximal)
    best = max(bin(m).count("1") for m in anti)
    return best, len(maximal), lists
