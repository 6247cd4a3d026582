"""Checker suites run by the command line driver.

Each suite maps a frame to a list of :class:`~forcinglab.poset.Check` named
``<suite>.<property>``.  Suites are pure functions of their inputs, so they
may run in any order or process and still produce identical reports.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import repeat

from . import oracles
from .club import block_decode, block_encode, derive_club, recover_from_club
from .collapse import (
    audit_laver, build_col, build_col_dense, build_laver, laver_count,
    ordinal_col_conditions,
)
from .factorization import (
    build_factorization, corollary_triple, factorization_report,
    check_quotient_equivalence, theorem_pi,
)
from .frame import CardinalFrame
from .poset import (
    Check, SKIP, antichain_census, check, check_dense_embedding,
    check_directed_closed, check_projection, generic_filters, image_generic,
    separative_quotient,
)
from .terms import TermError, check_laver_projection, laver_terms, term_embedding_report


@dataclass(frozen=True)
class Caps:
    term: int = 4096
    iso: int = 16
    census: int = 20


def _prefixed(suite: str, checks) -> list[Check]:
    return [Check(f"{suite}.{c.name}", c.status, c.counterexample, c.detail) for c in checks]


# --- club and codec ----------------------------------------------------------

def club_suite(frame: CardinalFrame, caps: Caps) -> list[Check]:
    conds = ordinal_col_conditions(frame)
    out = []
    bad = next((i for i, p in enumerate(conds) if recover_from_club(derive_club(p)) != p), None)
    out.append(check("roundtrip", bad is None, (bad,)))
    bad = next((i for i, p in enumerate(conds)
                if len(derive_club(p)) != len(p) + 1
                or derive_club(p)[-1] > frame.max_club_top), None)
    out.append(check("shape", bad is None, (bad,)))
    cex = None
    for i, p in enumerate(conds):
        for j, q in enumerate(conds):
            if p[:len(q)] == q:  # p <= q
                cp, cq = derive_club(p), derive_club(q)
                if cp[:len(cq)] != cq:
                    cex = (i, j)
                    break
        if cex:
            break
    out.append(check("initial_segment", cex is None, cex))
    return _prefixed("club", out)


def frame_blocks(frame: CardinalFrame, limit: int = 4096) -> list[tuple[int, int, int]]:
    """Every block ``[alpha, beta)`` inside ``[0, max_club_top]`` over every
    alphabet the frame's constructions use, with at most ``limit`` functions."""
    alphabets = {frame.col_alphabet} | set(frame.alphabet.values())
    alphabets |= {a ** g for a in list(alphabets) for g in range(1, 4)}
    top = frame.max_club_top
    out = []
    for a in sorted(alphabets):
        for alpha in range(top + 1):
            for beta in range(alpha, top + 1):
                if a ** (beta - alpha) <= limit:
                    out.append((alpha, beta, a))
    return out


def codec_sweep(blocks) -> Check | None:
    """Check ``encode(decode(i)) == i`` for every index of every block.

    ``block_encode`` rejects anything that is not a function into the
    alphabet, so passing shows that decoding injects ``[0, a ** L)`` into the
    ``a ** L`` functions of the block, hence is a bijection with inverse
    ``block_encode``.  Returns a failing check or ``None``.
    """
    for alpha, beta, a in blocks:
        size = a ** (beta - alpha)
        alphas, betas, sizes = repeat(alpha, size), repeat(beta, size), repeat(a, size)
        try:
            decoded = map(block_decode, range(size), alphas, betas, sizes)
            back = list(map(block_encode, decoded, repeat(alpha, size),
                            repeat(beta, size), repeat(a, size)))
        except ValueError:
            return check("roundtrip", False, (alpha, beta, a))
        if back != list(range(size)):
            i = next(i for i, x in enumerate(back) if x != i)
            return check("roundtrip", False, (alpha, beta, a, i))
    return None


def all_blocks(limit: int = 4096, max_len: int = 12):
    """``(0, L, a)`` for every alphabet ``a`` and length ``L`` with ``a ** L <= limit``."""
    for a in range(1, limit + 1):
        for n in range(max_len + 1):
            if a ** n > limit:
                break
            yield (0, n, a)


def codec_suite(frame: CardinalFrame, caps: Caps) -> list[Check]:
    blocks = frame_blocks(frame)
    failure = codec_sweep(blocks)
    out = [check("bijective", failure is None,
                 failure.counterexample if failure else None,
                 f"{len(blocks)} blocks")]
    return _prefixed("codec", out)


# --- factorization -----------------------------------------------------------

def factorize_suite(frame: CardinalFrame, caps: Caps) -> list[Check]:
    return _prefixed("factorize", factorization_report(build_factorization(frame)).checks)


def corollary_suite(frame: CardinalFrame, caps: Caps) -> list[Check]:
    t = corollary_triple(frame)
    return _prefixed("corollary", check_dense_embedding(t.map).checks)


def _terms_or_skip(frame, caps, suite, names):
    try:
        return laver_terms(frame, caps.term), None
    except TermError as exc:
        return None, [Check(f"{suite}.{n}", SKIP, None, str(exc)) for n in names]


def term_suite(frame: CardinalFrame, caps: Caps) -> list[Check]:
    names = ["order_preserving", "order_reflecting", "injective", "dense",
             "reduce_below", "domains_constant"]
    terms, skipped = _terms_or_skip(frame, caps, "term", names)
    if skipped:
        return skipped
    return _prefixed("term", term_embedding_report(terms).checks)


def laver_projection_suite(frame: CardinalFrame, caps: Caps) -> list[Check]:
    names = ["order_preserving", "top", "lifting"]
    terms, skipped = _terms_or_skip(frame, caps, "laver_projection", names)
    if skipped:
        return skipped
    try:
        rep = check_laver_projection(terms.base, terms.quoted, caps.term)
    except TermError as exc:
        return [Check(f"laver_projection.{n}", SKIP, None, str(exc)) for n in names]
    return _prefixed("laver_projection", rep.checks)


def theorem_pi_suite(frame: CardinalFrame, caps: Caps) -> list[Check]:
    names = ["order_preserving", "top", "lifting", "image_generic"]
    terms, skipped = _terms_or_skip(frame, caps, "theorem_pi", names)
    if skipped:
        return skipped
    try:
        tm = theorem_pi(frame, terms)
    except TermError as exc:
        return [Check(f"theorem_pi.{n}", SKIP, None, str(exc)) for n in names]
    out = list(check_projection(tm.map).checks)
    cex = None
    for k, H in enumerate(generic_filters(tm.map.source)):
        try:
            image_generic(tm.map, H, assume_projection=True)
        except ValueError:
            cex = (k,)
            break
    out.append(check("image_generic", cex is None, cex))
    return _prefixed("theorem_pi", out)


def quotient_suite(frame: CardinalFrame, caps: Caps) -> list[Check]:
    terms, skipped = _terms_or_skip(frame, caps, "quotient", ["isomorphic"])
    if skipped:
        return skipped
    tm = theorem_pi(frame, terms)
    out = []
    for k, G in enumerate(generic_filters(tm.map.target)):
        c = check_quotient_equivalence(tm, G, cap=caps.iso).checks[0]
        out.append(Check(f"quotient.generic_{k:03d}.{c.name}", c.status,
                         c.counterexample, c.detail))
    return out


# --- census and oracle agreement --------------------------------------------

def suite_posets(frame: CardinalFrame, caps: Caps) -> dict:
    """The named posets the suites construct for a frame."""
    fac = build_factorization(frame)
    posets = {
        "laver_lower": build_laver(frame, frame.mu, frame.kappa),
        "laver_upper": build_laver(frame, frame.kappa, frame.lambda_top),
        "laver_full": build_laver(frame, frame.mu, frame.lambda_top),
        "col": build_col(frame),
        "col_dense": build_col_dense(frame),
        "domain_ambient": fac.domains.ambient,
        "domain_dense": fac.domains.dense,
    }
    try:
        terms = laver_terms(frame, caps.term)
    except TermError:
        terms = None
    if terms is not None:
        posets["laver_upper_wide"] = terms.source
    return posets


def census_suite(frame: CardinalFrame, caps: Caps) -> list[Check]:
    out = []
    for name, P in sorted(suite_posets(frame, caps).items()):
        census = antichain_census(P, full=len(P) <= caps.census, cap=caps.census)
        detail = (f"size={len(P)} max_antichain={census.max_size} "
                  f"maximal_antichains={census.maximal_count}")
        out.append(Check(f"{name}.census", "PASS", None, detail))
        if hasattr(P, "stages"):
            ok = len(P) == laver_count(P.frame, P.lower, P.upper, P.alphabet)
            out.append(check(f"{name}.closed_form_size", ok, (len(P),)))
            bad = next((i for i, c in enumerate(P.elements) if not audit_laver(P, c)), None)
            out.append(check(f"{name}.audit", bad is None, (bad,)))
            out.append(Check(f"{name}.directed_closed",
                             *_status(check_directed_closed(P, min(P.lower, 4)).checks[0])))
        if len(P) <= oracles.NAIVE_CAP:
            out.extend(oracle_checks(name, P))
    return _prefixed("census", out)


def _status(c: Check):
    return c.status, c.counterexample, c.detail


def oracle_checks(name: str, P) -> list[Check]:
    out = []
    census = antichain_census(P, full=True, cap=oracles.NAIVE_CAP)
    best, count, lists = oracles.naive_antichain_census(P)
    out.append(check(f"{name}.antichain_oracle",
                     (census.max_size, census.maximal_count, list(census.antichains))
                     == (best, count, lists)))
    mine = [G.members for G in generic_filters(P)]
    out.append(check(f"{name}.generic_oracle",
                     sorted(mine, key=sorted) == oracles.naive_generic_filters(P)))
    S, cls = separative_quotient(P)
    classes, order = oracles.naive_separative_classes(P)
    mine_classes = sorted(tuple(i for i in range(len(P)) if cls(i) == c) for c in range(len(S)))
    same_order = all(
        S.le(cls(a[0]), cls(b[0])) == ((ia, ib) in order)
        for ia, a in enumerate(classes) for ib, b in enumerate(classes))
    out.append(check(f"{name}.separative_oracle",
                     mine_classes == sorted(classes) and same_order))
    return out


SUITES = {
    "club": (club_suite, "club codes: recovery of a condition from its code, "
                         "initial segments under extension"),
    "codec": (codec_suite, "block enumerations: the mixed-radix codec is a bijection"),
    "factorize": (factorize_suite, "the uniform dense set embeds densely into "
                                   "Col(mu,kappa) x L(kappa,lambda)"),
    "corollary": (corollary_suite, "p -> (p|kappa, p(kappa), pi_kappa(p)) is a dense "
                                   "embedding into L(mu,kappa) x Col x L(kappa,lambda)"),
    "term": (term_suite, "L(kappa,lambda) embeds densely into the term forcing "
                         "T(L(mu,kappa), L(kappa,lambda))"),
    "laver-projection": (laver_projection_suite, "Laver: the identity P x T(P,Q) -> P * Q "
                                                 "is a projection"),
    "theorem-pi": (theorem_pi_suite, "the composed map onto L(mu,kappa) * L(kappa,lambda) "
                                     "is a projection"),
    "quotient": (quotient_suite, "the quotient by each generic is equivalent to "
                                 "Q x Col(mu,kappa)"),
    "census": (census_suite, "antichains, generic filters and separative quotients "
                             "agree with brute force"),
}


def run_named(name: str, frame: CardinalFrame, caps: Caps) -> list[Check]:
    fn, _ = SUITES[name]
    return fn(frame, caps)
