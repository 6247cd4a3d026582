"""Term forcing over finite posets.

Names are extensional: a ``P``-name for a condition of ``Q`` is the tuple of
``Q`` indices it takes at the generic filters of ``P``, listed in the order
of :func:`~forcinglab.poset.generic_filters`.  Over a finite poset every name
is forced equal to such an assignment, and ``1 forces s1 <= s0`` becomes
pointwise comparison.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .club import block_decode, block_encode
from .collapse import LaverCondition, LaverPoset, build_laver
from .frame import CardinalFrame
from .poset import (
    FinitePoset, Filter, OrderMap, PosetError, Report, check, check_projection,
    collapse_preorder, generic_filters, product,
)

DEFAULT_CAP = 4096

Name = tuple[int, ...]


class TermError(ValueError):
    pass


class TermPoset(FinitePoset):
    def __init__(self, elements, leq, *, base, quoted, generics, **kw):
        super().__init__(elements, leq, **kw)
        self.base = base
        self.quoted = quoted
        self.generics = generics


class IterationPoset(FinitePoset):
    """``P * Q`` on representatives ``(p, name)`` of the preorder classes."""

    def __init__(self, elements, leq, *, names, classes, **kw):
        super().__init__(elements, leq, **kw)
        self.names = names
        self._classes = classes

    def class_of(self, p: int, name: Name) -> int:
        return int(self._classes[p * len(self.names) + self.names.index[name]])


def build_term_poset(P: FinitePoset, Q: FinitePoset, cap: int = DEFAULT_CAP) -> TermPoset:
    generics = generic_filters(P)
    g = len(generics)
    if len(Q) ** g > cap:
        raise TermError(f"term poset too large: {len(Q)}^{g} > {cap}")
    names = list(itertools.product(range(len(Q)), repeat=g))
    N = np.array(names, dtype=np.int64).reshape(len(names), g)
    leq = np.ones((len(names), len(names)), dtype=bool)
    for k in range(g):
        leq &= Q.leq[np.ix_(N[:, k], N[:, k])]
    return TermPoset(names, leq, top=names.index((Q.top,) * g), validate=False,
                     base=P, quoted=Q, generics=generics)


def _iteration_preorder(T: TermPoset, all_generics: bool) -> np.ndarray:
    P, Q = T.base, T.quoted
    nP, nT = len(P), len(T)
    N = np.array(T.elements, dtype=np.int64).reshape(nT, len(T.generics))
    M = np.broadcast_to(P.leq[:, None, :, None], (nP, nT, nP, nT)).copy()
    for k, G in enumerate(T.generics):
        outside = np.ones(nP, dtype=bool)
        if not all_generics:
            outside[list(G.members)] = False
        else:
            outside[:] = False
        Tk = Q.leq[np.ix_(N[:, k], N[:, k])]
        M &= outside[:, None, None, None] | Tk[None, :, None, :]
    return M.reshape(nP * nT, nP * nT)


def build_iteration(P: FinitePoset, Q: FinitePoset, cap: int = DEFAULT_CAP, *,
                    names: TermPoset | None = None,
                    all_generics: bool = False) -> IterationPoset:
    """Two-step iteration: ``(p1, s1) <= (p0, s0)`` iff ``p1 <= p0`` and
    ``s1(G) <= s0(G)`` at every generic ``G`` containing ``p1``.

    Mutually below pairs are identified.  ``all_generics`` compares names at
    every generic instead (a deliberately wrong order for mutation tests).
    """
    T = names if names is not None else build_term_poset(P, Q, cap)
    if len(P) * len(T) > cap:
        raise TermError(f"iteration too large: {len(P)}*{len(T)} > {cap}")
    carrier = [(p, name) for p in range(len(P)) for name in T.elements]
    pre = _iteration_preorder(T, all_generics)
    top = P.top * len(T) + T.top
    collapsed, classes = collapse_preorder(carrier, pre, top=top)
    return IterationPoset(collapsed.elements, collapsed.leq, top=collapsed.top,
                          validate=False, names=T, classes=classes)


def laver_projection_map(P: FinitePoset, Q: FinitePoset, cap: int = DEFAULT_CAP, *,
                         all_generics: bool = False) -> OrderMap:
    """The identity on carriers, ``P x T(P, Q) -> P * Q``."""
    T = build_term_poset(P, Q, cap)
    it = build_iteration(P, Q, cap, names=T, all_generics=all_generics)
    prod = product(P, T)
    return OrderMap(prod, it, [it.class_of(P.index[p], name) for p, name in prod.elements])


def check_laver_projection(P: FinitePoset, Q: FinitePoset, cap: int = DEFAULT_CAP) -> Report:
    rep = check_projection(laver_projection_map(P, Q, cap))
    rep.subject = "laver_projection"
    return rep


def iteration_orders_differ(P: FinitePoset, Q: FinitePoset, cap: int = DEFAULT_CAP) -> bool:
    """Whether comparing names at all generics changes the iteration order."""
    T = build_term_poset(P, Q, cap)
    return not np.array_equal(_iteration_preorder(T, False), _iteration_preorder(T, True))


def eval_name(name: Name, G: Filter, terms) -> object:
    """The value of ``name`` at the generic ``G``, as a quoted-poset element."""
    for k, H in enumerate(terms.generics):
        if H.members == G.members:
            return terms.quoted.elements[name[k]]
    raise TermError("not a generic of P")


# --- names for Laver conditions -------------------------------------------

def tau_enumeration(P: FinitePoset, stage: int, frame: CardinalFrame,
                    a: int | None = None) -> list[tuple[int, ...]]:
    """Every function ``generics(P) -> [0, a(stage))``, the ``i``-th being
    ``block_decode(i)`` over the generics in order."""
    g = len(generic_filters(P))
    a = frame.alphabet_at(stage) if a is None else a
    return [block_decode(i, 0, g, a) for i in range(a ** g)]


@dataclass
class LaverTerms:
    """``P = L(mu, kappa)`` and names for ``Q = L(kappa, lambda)``.

    ``source`` is ``L(kappa, lambda)`` with each alphabet ``a(d)`` widened to
    the number of names for values below it, ``a(d) ** #generics``.
    """
    frame: CardinalFrame
    base: LaverPoset
    quoted: LaverPoset
    source: LaverPoset
    generics: list[Filter]
    tau: dict[int, list[tuple[int, ...]]]
    cap: int = DEFAULT_CAP

    @cached_property
    def names(self) -> TermPoset:
        return build_term_poset(self.base, self.quoted, self.cap)

    @cached_property
    def iteration(self) -> IterationPoset:
        return build_iteration(self.base, self.quoted, self.cap, names=self.names)

    @cached_property
    def embedding(self) -> OrderMap:
        return OrderMap.from_function(self.source, self.names,
                                      lambda q: term_embed(q, self))


def laver_terms(frame: CardinalFrame, cap_term: int = DEFAULT_CAP) -> LaverTerms:
    base = build_laver(frame, frame.mu, frame.kappa)
    quoted = build_laver(frame, frame.kappa, frame.lambda_top)
    generics = generic_filters(base)
    g = len(generics)
    if len(quoted) ** g > cap_term:
        raise TermError(f"term poset too large: {len(quoted)}^{g} > {cap_term}")
    wide = {s: quoted.alphabet[s] ** g for s in quoted.stages}
    source = build_laver(frame, frame.kappa, frame.lambda_top, wide)
    tau = {s: tau_enumeration(base, s, frame, quoted.alphabet[s]) for s in quoted.stages}
    return LaverTerms(frame, base, quoted, source, generics, tau, cap_term)


def term_embed(q: LaverCondition, terms: LaverTerms) -> Name:
    """The name with the domains of ``q`` whose value at ``(d, x)`` is
    ``tau[d][q(d)(x)]``."""
    out = []
    for k in range(len(terms.generics)):
        cond = []
        for stage, f in q:
            tau = terms.tau[stage]
            if any(not 0 <= v < len(tau) for _, v in f):
                raise TermError(f"alphabet mismatch at stage {stage}")
            cond.append((stage, tuple((x, tau[v][k]) for x, v in f)))
        out.append(terms.quoted.index[tuple(cond)])
    return tuple(out)


def term_reduce(name: Name, terms: LaverTerms) -> LaverCondition:
    """A condition ``q`` with ``term_embed(q) <= name`` at every generic.

    ``dom q`` is the union of the stages used by ``name``; every entry has
    domain ``[0, gamma)`` and the value at ``(d, x)`` indexes the mixture that
    reads ``name``'s value where defined and 0 elsewhere.
    """
    conds = [dict(terms.quoted.elements[i]) for i in name]
    stages = sorted({s for c in conds for s in c})
    gamma = 1 + max((x for c in conds for f in c.values() for x, _ in f), default=-1)
    g = len(conds)
    q = []
    for s in stages:
        a = terms.quoted.alphabet[s]
        entry = []
        for x in range(gamma):
            mixed = [dict(c.get(s, ())).get(x, 0) for c in conds]
            entry.append((x, block_encode(mixed, 0, g, a)))
        q.append((s, tuple(entry)))
    return tuple(q)


def term_embedding_report(terms: LaverTerms) -> Report:
    from .poset import check_dense_embedding

    m = terms.embedding
    rep = check_dense_embedding(m)
    rep.subject = "term"
    T = terms.names
    cex = None
    for j, name in enumerate(T.elements):
        q = term_reduce(name, terms)
        if not T.leq[T.index[term_embed(q, terms)], j]:
            cex = (j,)
            break
    rep.add(check("reduce_below", cex is None, cex))
    cex = None
    for i, q in enumerate(terms.source.elements):
        name = term_embed(q, terms)
        shapes = {tuple((s, tuple(x for x, _ in f)) for s, f in terms.quoted.elements[v])
                  for v in name}
        want = tuple((s, tuple(x for x, _ in f)) for s, f in q)
        if shapes != {want}:
            cex = (i,)
            break
    rep.add(check("domains_constant", cex is None, cex))
    return rep
