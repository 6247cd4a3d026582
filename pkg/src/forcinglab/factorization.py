"""Club-coded factorization of the Laver collapse above ``kappa``.

The uniform dense set ``D`` is modelled by :class:`BlockIndexedCondition`: a
collapse condition ``p`` at ``kappa`` plus, for each upper stage, a sequence
of block indices.  Position ``i`` indexes a function on the block
``[C_p(i), C_p(i+1))`` through :func:`~forcinglab.club.block_decode`, so the
index bound there is ``a(d) ** (C_p(i+1) - C_p(i))``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .club import block_decode, block_encode, derive_club
from .collapse import (
    LaverCondition, LaverPoset, build_col_dense, build_laver, laver_alphabet,
    ordinal_col_conditions, prefix_leq,
)
from .frame import CardinalFrame
from .poset import (
    Check, FinitePoset, Filter, OrderMap, PosetError, Report, SKIP, check,
    check_dense_embedding, poset_isomorphic, product, quotient_poset, separative_quotient,
)


class FactorizationError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class BlockIndexedCondition:
    col: tuple[int, ...]
    upper: tuple[tuple[int, tuple[int, ...]], ...] = ()

    @property
    def gamma(self) -> int:
        return len(self.col)

    def is_uniform(self) -> bool:
        return all(len(seq) == self.gamma for _, seq in self.upper)


def bic_leq(r1: BlockIndexedCondition, r0: BlockIndexedCondition) -> bool:
    if not prefix_leq(r1.col, r0.col):
        return False
    u1 = dict(r1.upper)
    for stage, seq in r0.upper:
        if stage not in u1 or not prefix_leq(u1[stage], seq):
            return False
    return True


def block_bounds(col: tuple[int, ...], a: int) -> list[int]:
    club = derive_club(col)
    return [a ** (club[i + 1] - club[i]) for i in range(len(col))]


@dataclass
class DomainPosets:
    ambient: FinitePoset
    dense: FinitePoset
    inclusion: OrderMap
    alphabet: dict[int, int]


def build_domain_posets(frame: CardinalFrame,
                        alphabet: Mapping[int, int] | None = None) -> DomainPosets:
    """The ambient poset ``A`` (upper sequences no longer than ``gamma``),
    its uniform part ``D`` and the inclusion ``D -> A``."""
    stages = frame.upper_stages
    sizes = laver_alphabet(frame, stages, alphabet)
    ambient, dense = [], []
    for col in ordinal_col_conditions(frame):
        gamma = len(col)
        options = {}
        for s in stages:
            bounds = block_bounds(col, sizes[s])
            seqs = []
            for length in range(gamma + 1):
                seqs.extend(itertools.product(*(range(b) for b in bounds[:length])))
            options[s] = seqs
        for k in range(len(stages) + 1):
            for X in itertools.combinations(stages, k):
                for seqs in itertools.product(*(options[s] for s in X)):
                    r = BlockIndexedCondition(col, tuple(zip(X, seqs)))
                    ambient.append(r)
                    if r.is_uniform():
                        dense.append(r)
    A = FinitePoset.from_order(ambient, bic_leq, top=0, validate=False)
    D = FinitePoset.from_order(dense, bic_leq, top=0, validate=False)
    return DomainPosets(A, D, OrderMap.from_function(D, A, lambda r: r), sizes)


def densify(r: BlockIndexedCondition) -> BlockIndexedCondition:
    """Pad every upper sequence with index 0 up to length ``gamma``."""
    g = r.gamma
    return BlockIndexedCondition(
        r.col, tuple((s, seq + (0,) * (g - len(seq))) for s, seq in r.upper))


def pi_factorize(r: BlockIndexedCondition, alphabet: Mapping[int, int]
                 ) -> tuple[tuple[int, ...], LaverCondition]:
    """``r -> (p, s)`` with ``s(d)`` on ``[0, sup C_p)`` assembled block by block."""
    if not r.is_uniform():
        raise FactorizationError("block invariant violated: condition is not uniform")
    club = derive_club(r.col)
    s = []
    for stage, seq in r.upper:
        a = alphabet[stage]
        values: list[int] = []
        for i, idx in enumerate(seq):
            try:
                values.extend(block_decode(idx, club[i], club[i + 1], a))
            except ValueError as exc:
                raise FactorizationError(f"block invariant violated: {exc}") from None
        s.append((stage, tuple(enumerate(values))))
    return r.col, tuple(s)


def strengthen(p: tuple[int, ...], s: LaverCondition) -> LaverCondition:
    """Pad every entry of ``s`` with value 0 to the domain ``[0, sup C_p)``."""
    top = derive_club(p)[-1]
    out = []
    for stage, f in s:
        if any(x >= top for x, _ in f):
            raise FactorizationError(
                f"domain mismatch: entry at stage {stage} reaches past sup C_p = {top}")
        fd = dict(f)
        out.append((stage, tuple((x, fd.get(x, 0)) for x in range(top))))
    return tuple(out)


def pi_inverse(p: tuple[int, ...], s: LaverCondition, alphabet: Mapping[int, int],
               *, strengthen_first: bool = False) -> BlockIndexedCondition:
    """The uniform condition mapped to ``(p, s)``; each block index is the
    position of the corresponding piece of ``s(d)`` in the enumeration."""
    if strengthen_first:
        s = strengthen(p, s)
    club = derive_club(p)
    top = club[-1]
    upper = []
    for stage, f in s:
        if [x for x, _ in f] != list(range(top)):
            raise FactorizationError(
                f"domain mismatch at stage {stage}: expected [0, {top})")
        values = [v for _, v in f]
        a = alphabet[stage]
        seq = tuple(block_encode(values[club[i]:club[i + 1]], club[i], club[i + 1], a)
                    for i in range(len(p)))
        upper.append((stage, seq))
    return BlockIndexedCondition(tuple(p), tuple(upper))


# --- the factorization as an order map -----------------------------------

@dataclass
class Factorization:
    frame: CardinalFrame
    domains: DomainPosets
    col_dense: FinitePoset
    laver_upper: LaverPoset
    target: FinitePoset  # Col_dense x L(kappa, lambda)
    pi: OrderMap

    @property
    def alphabet(self):
        return self.domains.alphabet


def build_factorization(frame: CardinalFrame,
                        alphabet: Mapping[int, int] | None = None) -> Factorization:
    doms = build_domain_posets(frame, alphabet)
    col = build_col_dense(frame)
    upper = build_laver(frame, frame.kappa, frame.lambda_top, doms.alphabet)
    target = product(col, upper)
    D = doms.dense
    pi = OrderMap.from_function(D, target, lambda r: pi_factorize(r, doms.alphabet))
    return Factorization(frame, doms, col, upper, target, pi)


def coherent_targets(fac: Factorization) -> list[int]:
    """Target indices ``(p, s)`` whose entries all lie inside ``[0, sup C_p)``."""
    out = []
    for t, (p, s) in enumerate(fac.target.elements):
        top = derive_club(p)[-1]
        if all(x < top for _, f in s for x, _ in f):
            out.append(t)
    return out


def factorization_report(fac: Factorization) -> Report:
    """Injectivity, order isomorphism onto the range, range density, both
    roundtrips of the inverse, and density of ``D`` in the ambient poset."""
    rep = Report("factorize")
    emb = check_dense_embedding(fac.pi)
    for c in emb.checks:
        rep.add(Check(c.name if c.name != "dense" else "range_density",
                      c.status, c.counterexample, c.detail))

    D = fac.domains.dense
    cex = None
    for i, r in enumerate(D.elements):
        p, s = pi_factorize(r, fac.alphabet)
        if pi_inverse(p, s, fac.alphabet) != r:
            cex = (i,)
            break
    rep.add(check("inverse_roundtrip", cex is None, cex))

    cex = None
    strengthened_cex = None
    T = fac.target
    for t in coherent_targets(fac):
        p, s = T.elements[t]
        top = derive_club(p)[-1]
        if all([x for x, _ in f] == list(range(top)) for _, f in s):
            r = pi_inverse(p, s, fac.alphabet)
            if pi_factorize(r, fac.alphabet) != (p, s) and cex is None:
                cex = (t,)
        r = pi_inverse(p, s, fac.alphabet, strengthen_first=True)
        if not T.leq[T.index[pi_factorize(r, fac.alphabet)], t] and strengthened_cex is None:
            strengthened_cex = (t,)
    rep.add(check("forward_roundtrip", cex is None, cex))
    rep.add(check("strengthened_density", strengthened_cex is None, strengthened_cex,
                  "targets inside [0, sup C_p) are reached by padding with 0"))

    dense_in_a = fac.domains.ambient.leq[fac.domains.inclusion.map].any(axis=0)
    missing = np.flatnonzero(~dense_in_a)
    rep.add(check("d_dense_in_ambient", len(missing) == 0,
                  (int(missing[0]),) if len(missing) else None))
    return rep


# --- the triple map -------------------------------------------------------

@dataclass
class Triple:
    fac: Factorization
    laver_lower: LaverPoset
    source: FinitePoset  # D' = L(mu, kappa) x D
    target: FinitePoset  # L(mu, kappa) x Col_dense x L(kappa, lambda)
    map: OrderMap


def corollary_triple(frame: CardinalFrame,
                     alphabet: Mapping[int, int] | None = None) -> Triple:
    """``(a, r) -> (a, r(kappa), pi_kappa(r))`` on ``D' = L(mu, kappa) x D``.

    The stages of ``L(mu, kappa)`` and ``D`` are disjoint, so the order of the
    Laver collapse on ``D'`` is the product order.
    """
    fac = build_factorization(frame, alphabet)
    low = build_laver(frame, frame.mu, frame.kappa)
    source = product(low, fac.domains.dense)
    target = product(low, fac.col_dense, fac.laver_upper)

    def f(e):
        a, r = e
        p, s = pi_factorize(r, fac.alphabet)
        return (a, p, s)

    return Triple(fac, low, source, target, OrderMap.from_function(source, target, f))


# --- composition with term forcing ---------------------------------------

@dataclass
class TheoremMap:
    triple: Triple
    terms: "object"  # forcinglab.terms.LaverTerms
    map: OrderMap


def theorem_pi(frame: CardinalFrame, terms=None, *, cap_term: int = 20000,
               embed=None) -> TheoremMap:
    """``(a, r) -> (a, pi_T(pi_kappa(r)))`` from ``D'`` into ``L(mu,kappa) * L(kappa,lambda)``.

    ``D'`` is built with the upper alphabets widened to the name counts
    ``a(d) ** #generics``, the source alphabet of the term embedding.
    ``embed`` replaces the term embedding (used for mutation tests).
    """
    from .terms import laver_terms, term_embed

    if terms is None:
        terms = laver_terms(frame, cap_term=cap_term)
    triple = corollary_triple(frame, terms.source.alphabet)
    it = terms.iteration
    embed = embed or (lambda s: term_embed(s, terms))
    P = terms.base

    def f(e):
        a, r = e
        _, s = pi_factorize(r, triple.fac.alphabet)
        return it.class_of(P.index[a], embed(s))

    m = OrderMap(triple.source, it, [f(e) for e in triple.source.elements])
    return TheoremMap(triple, terms, m)


def iteration_generic_parts(terms, generic: Filter) -> tuple[int, int]:
    """``(k, h)``: the base generic ``G_k`` and the minimal ``h`` of the quoted
    poset with ``H`` the cone of ``h``, read off a generic of the iteration."""
    it = terms.iteration
    least = [i for i in generic.members if all(it.leq[i, j] for j in generic.members)]
    if len(least) != 1:
        raise PosetError("not a generic of the iteration")
    p, name = it.elements[least[0]]
    k = next(k for k, G in enumerate(terms.generics) if p in G.members)
    return k, name[k]


def quotient_Q(terms, G: Filter, H: Filter) -> FinitePoset:
    """``{q : pi_T(q)^G in H}`` inside the widened ``L(kappa, lambda)``."""
    from .poset import subposet
    from .terms import term_embed

    k = next(k for k, g in enumerate(terms.generics) if g.members == G.members)
    keep = [i for i, q in enumerate(terms.source.elements)
            if term_embed(q, terms)[k] in H.members]
    return subposet(terms.source, keep)


def check_quotient_equivalence(tm: TheoremMap, generic: Filter, *, cap: int = 16,
                               drop: int | None = None) -> Report:
    """Compare the separative quotients of ``pi^{-1}[G * H]`` and ``Q x Col_dense``.

    ``drop`` removes one non-top element of ``Q`` first (mutation tests).
    """
    terms = tm.terms
    rep = Report("quotient")
    lhs = quotient_poset(tm.map, generic)
    k, h = iteration_generic_parts(terms, generic)
    G = terms.generics[k]
    H = Filter(terms.quoted, terms.quoted.up(h))
    Q = quotient_Q(terms, G, H)
    if drop is not None:
        from .poset import subposet

        Q = subposet(Q, [i for i in range(len(Q)) if i != drop or i == Q.top])
    rhs = product(Q, tm.triple.fac.col_dense)
    sl, _ = separative_quotient(lhs)
    sr, _ = separative_quotient(rhs)
    name = "isomorphic"
    detail = f"|lhs|={len(lhs)} |rhs|={len(rhs)} |sep lhs|={len(sl)} |sep rhs|={len(sr)}"
    if len(sl) != len(sr):
        # different sizes settle the question without a search, so no cap applies
        rep.add(check(name, False, (k, h), detail))
        return rep
    try:
        res = poset_isomorphic(sl, sr, cap=cap)
    except PosetError:
        rep.add(Check(name, SKIP, None, detail + " (isomorphism cap exceeded)"))
        return rep
    if res.status == "exhausted":
        rep.add(Check(name, SKIP, None, detail + " (search budget exhausted)"))
    else:
        rep.add(check(name, bool(res), (k, h), detail))
    return rep
