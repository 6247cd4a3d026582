"""The ten acceptance criteria, each at its stated runtime budget.

Every test records one ``criterion N PASS|FAIL`` line, printed together in the
terminal summary, before asserting.
"""

import subprocess
import sys
import time

import numpy as np
import pytest

from forcinglab import oracles
from forcinglab.factorization import (
    build_factorization, check_quotient_equivalence, corollary_triple,
    factorization_report, iteration_generic_parts, quotient_Q, theorem_pi,
)
from forcinglab.poset import (
    FAIL, Filter, OrderMap, antichain_census, check_complete_embedding,
    check_dense_embedding, check_projection, generic_filters, image_generic,
    product, quotient_poset, separative_quotient,
)
from forcinglab.suites import Caps, all_blocks, club_suite, codec_sweep, suite_posets
from forcinglab.terms import (
    TermError, check_laver_projection, laver_projection_map, laver_terms,
    term_embedding_report,
)

from builders import FRAMES, atoms, chain, frame, from_cover


class Clock:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def record(lines, n, title, ok, clock, budget, detail=""):
    within = budget is None or clock.elapsed < budget
    status = "PASS" if ok and within else "FAIL"
    limit = f" < {budget}s" if budget is not None else ""
    line = f"criterion {n:2d} {status} {title} [{clock.elapsed:.2f}s{limit}]"
    if detail:
        line += f" {detail}"
    lines[n] = line
    print(line)
    return status == "PASS", line


def failing(report, names=None):
    return [c.line() for c in report.checks
            if (names is None or c.name in names) and not c.passed]


# 1 -------------------------------------------------------------------------

def test_criterion_01_club_roundtrip(acceptance_lines):
    with Clock() as clock:
        bad = []
        for name in ("F1", "F2"):
            bad += [f"{name}:{c.line()}" for c in club_suite(frame(name), Caps()) if not c.passed]
    ok, line = record(acceptance_lines, 1, "club roundtrip and initial segments on F1, F2",
                      not bad, clock, 1, "; ".join(bad))
    assert ok, line


# 2 -------------------------------------------------------------------------

def test_criterion_02_codec_bijective(acceptance_lines):
    blocks = list(all_blocks(4096))
    with Clock() as clock:
        failure = codec_sweep(blocks)
    total = sum(a ** (b - al) for al, b, a in blocks)
    detail = f"{len(blocks)} blocks, {total} functions"
    if failure is not None:
        detail += f"; {failure.line()}"
    ok, line = record(acceptance_lines, 2, "codec bijective for every a**L <= 4096",
                      failure is None, clock, 5, detail)
    assert ok, line


# 3 -------------------------------------------------------------------------

FACTORIZE_PROPS = ("injective", "order_preserving", "order_reflecting",
                   "range_density", "inverse_roundtrip")


def test_criterion_03_factorization(acceptance_lines):
    with Clock() as clock:
        bad = []
        for name in ("F1", "F2"):
            rep = factorization_report(build_factorization(frame(name)))
            bad += [f"{name}:{x}" for x in failing(rep, FACTORIZE_PROPS)]
    ok, line = record(acceptance_lines, 3, "factorization suite on F1, F2",
                      not bad, clock, 10, "; ".join(bad))
    assert ok, line


# 4 -------------------------------------------------------------------------

def test_criterion_04_triple_dense_embedding(acceptance_lines):
    with Clock() as clock:
        rep = check_dense_embedding(corollary_triple(frame("F1L")).map)
    ok, line = record(acceptance_lines, 4, "triple map dense embedding on F1L",
                      rep.ok, clock, 30, "; ".join(failing(rep)))
    assert ok, line


# 5 -------------------------------------------------------------------------

def test_criterion_05_laver_projection(acceptance_lines):
    with Clock() as clock:
        bad, covered = [], []
        for name in ("F1", "F2", "F1L", "S1"):
            try:
                t = laver_terms(frame(name))
                rep = check_laver_projection(t.base, t.quoted, t.cap)
            except TermError:
                continue
            covered.append((name, len(t.generics)))
            bad += [f"{name}:{x}" for x in failing(rep)]
        generics = [g for _, g in covered]
        enough = len(covered) >= 2 and 1 in generics and max(generics) >= 2
    detail = "frames " + ",".join(f"{n}(#G={g})" for n, g in covered)
    if bad:
        detail += "; " + "; ".join(bad)
    ok, line = record(acceptance_lines, 5, "product order projects onto the iteration",
                      enough and not bad, clock, 60, detail)
    assert ok, line


# 6 -------------------------------------------------------------------------

def test_criterion_06_term_embedding(acceptance_lines):
    with Clock() as clock:
        t = laver_terms(frame("F1L"))
        rep = term_embedding_report(t)
        props = ("order_preserving", "order_reflecting", "injective", "dense", "reduce_below")
        bad = failing(rep, props)
    ok, line = record(acceptance_lines, 6, "term embedding dense, witnessed by term_reduce on F1L",
                      len(t.generics) == 2 and not bad, clock, 60,
                      f"#G={len(t.generics)} |T|={len(t.names)}" + ("; " + "; ".join(bad) if bad else ""))
    assert ok, line


# 7 -------------------------------------------------------------------------

def theorem_checks(name):
    tm = theorem_pi(frame(name))
    bad = failing(check_projection(tm.map))
    for k, H in enumerate(generic_filters(tm.map.source)):
        try:
            image_generic(tm.map, H)
        except ValueError as exc:
            bad.append(f"image_generic H{k}: {exc}")
            break
    generics = generic_filters(tm.map.target)
    for k, G in enumerate(generics):
        c = check_quotient_equivalence(tm, G).checks[0]
        if not c.passed:
            bad.append(f"quotient G{k}: {c.status} {c.detail}")
    return bad, len(generics)


def test_criterion_07_theorem_projection_and_quotients(acceptance_lines):
    with Clock() as clock:
        bad, count = theorem_checks("F1L")
        extra, extra_count = theorem_checks("S1")
    detail = (f"F1L: {count} generics, {len(bad)} failures"
              + (f" (first: {bad[0]})" if bad else "")
              + f"; S1 (collapse alphabet 1): {extra_count} generics, {len(extra)} failures")
    ok, line = record(acceptance_lines, 7, "composed projection and quotient equivalence on F1L",
                      not bad, clock, 120, detail)
    assert ok, line


# 8 -------------------------------------------------------------------------

def swapped(m, i, j):
    images = m.map.copy()
    images[i], images[j] = images[j], images[i]
    return OrderMap(m.source, m.target, images)


def projection_mutations():
    P = from_cover(4, [(1, 0), (3, 1), (2, 0)])
    yield "identity with incomparable images swapped", OrderMap(P, P, [0, 2, 1, 3])
    m = laver_projection_map(atoms(2), chain(2))
    yield "laver projection with top and a minimal image swapped", swapped(m, m.source.top, m.source.minimal[0])
    terms = laver_terms(frame("S1"))
    top = terms.names.elements[terms.names.top]
    yield "composed projection through a constant term embedding", theorem_pi(
        frame("S1"), terms, embed=lambda s: top).map


def dense_mutations():
    yield "inclusion of the top into a 2-chain", OrderMap(chain(1), chain(2), [0])
    m = laver_terms(frame("F1L")).embedding
    yield "term embedding with top and a minimal image swapped", swapped(m, m.source.top, m.source.minimal[0])
    pi = build_factorization(frame("S1")).pi
    yield "factorization with top and a minimal image swapped", swapped(pi, pi.source.top, pi.source.minimal[0])


def complete_mutations():
    yield "incompatible atoms sent into a chain", OrderMap(atoms(2), chain(3), [0, 1, 2])
    m = laver_terms(frame("F1L")).embedding
    images = m.map.copy()
    images[m.source.minimal[0]] = m.map[m.source.top]
    yield "term embedding sending a minimal element to the top", OrderMap(m.source, m.target, images)
    P, Q = atoms(2), chain(2)
    prod = product(P, Q)
    e = OrderMap.from_function(P, prod, lambda p: (p, 0))
    yield "coordinate embedding with both atoms sent to one column", OrderMap(P, prod, [e(0), e(1), e(1)])


def test_criterion_08_mutation_sensitivity(acceptance_lines):
    originals = [
        ("projection", check_projection, OrderMap.identity(atoms(2))),
        ("projection", check_projection, laver_projection_map(atoms(2), chain(2))),
        ("dense", check_dense_embedding, laver_terms(frame("F1L")).embedding),
        ("dense", check_dense_embedding, build_factorization(frame("S1")).pi),
        ("complete", check_complete_embedding, laver_terms(frame("F1L")).embedding),
    ]
    with Clock() as clock:
        silent = [f"{kind} baseline" for kind, checker, m in originals if not checker(m).ok]
        count = 0
        for kind, checker, mutations in (("projection", check_projection, projection_mutations()),
                                         ("dense", check_dense_embedding, dense_mutations()),
                                         ("complete", check_complete_embedding, complete_mutations())):
            for title, m in mutations:
                count += 1
                failures = checker(m).failures()
                if not failures or any(c.counterexample is None for c in failures):
                    silent.append(f"{kind}: {title}")
    ok, line = record(acceptance_lines, 8, "mutations of passing maps are caught",
                      not silent, clock, None,
                      f"{count} mutations" + ("; silent: " + ", ".join(silent) if silent else ""))
    assert ok, line


# 9 -------------------------------------------------------------------------

def small_posets(name):
    """Every poset the suites build on a frame, with at most a dozen elements."""
    f = frame(name)
    found = dict(suite_posets(f, Caps()))
    try:
        terms = laver_terms(f)
    except TermError:
        terms = None
    if terms is not None:
        found["terms.names"] = terms.names
        found["terms.iteration"] = terms.iteration
        tm = theorem_pi(f, terms)
        found["theorem.source"] = tm.map.source
        fac = build_factorization(f)
        found["factorize.target"] = fac.target
        for k, G in enumerate(generic_filters(tm.map.target)):
            kk, h = iteration_generic_parts(terms, G)
            H = Filter(terms.quoted, terms.quoted.up(h))
            Q = quotient_Q(terms, terms.generics[kk], H)
            lhs = quotient_poset(tm.map, G)
            found[f"quotient.{k}.lhs"] = lhs
            found[f"quotient.{k}.Q"] = Q
            found[f"quotient.{k}.rhs"] = product(Q, tm.triple.fac.col_dense)
            found[f"quotient.{k}.sep_lhs"] = separative_quotient(lhs)[0]
    for key in list(found):
        found[key + ".sep"] = separative_quotient(found[key])[0]
    return {k: P for k, P in found.items() if len(P) <= oracles.NAIVE_CAP}


def oracle_disagreements(label, P):
    bad = []
    c = antichain_census(P, full=True, cap=oracles.NAIVE_CAP)
    if (c.max_size, c.maximal_count, list(c.antichains)) != oracles.naive_antichain_census(P):
        bad.append(f"{label}: antichain census")
    mine = sorted((G.members for G in generic_filters(P)), key=sorted)
    if mine != oracles.naive_generic_filters(P):
        bad.append(f"{label}: generic filters")
    S, cls = separative_quotient(P)
    classes, order = oracles.naive_separative_classes(P)
    ours = sorted(tuple(i for i in range(len(P)) if cls(i) == c) for c in range(len(S)))
    if ours != sorted(classes) or any(
            S.le(cls(A[0]), cls(B[0])) != ((a, b) in order)
            for a, A in enumerate(classes) for b, B in enumerate(classes)):
        bad.append(f"{label}: separative quotient")
    return bad


def test_criterion_09_oracle_cross_validation(acceptance_lines):
    with Clock() as clock:
        bad, count = [], 0
        for name in ("F1", "F2", "F1L", "S1"):
            for label, P in small_posets(name).items():
                count += 1
                bad += oracle_disagreements(f"{name}:{label}", P)
    ok, line = record(acceptance_lines, 9, "census, generics, separative quotient match brute force",
                      not bad and count > 0, clock, None,
                      f"{count} posets" + ("; " + "; ".join(bad) if bad else ""))
    assert ok, line


# 10 ------------------------------------------------------------------------

def invoke(*args):
    return subprocess.run([sys.executable, "-m", "forcinglab", "run", *args],
                          capture_output=True).stdout


def test_criterion_10_determinism(acceptance_lines):
    frame_path = str(FRAMES / "F1.frame")
    with Clock() as clock:
        reports = [invoke("--frame", frame_path, "--suite", "all", "--format", fmt,
                          "--workers", str(w))
                   for fmt in ("lines", "text") for w in (1, 1, 2, 4)]
    same = all(r == reports[0] for r in reports[:4]) and all(r == reports[4] for r in reports[4:])
    ok, line = record(acceptance_lines, 10, "run --suite all on F1 is byte-identical across runs and workers",
                      same and bool(reports[0]), clock, None,
                      f"{len(reports)} runs, {reports[0].count(b'CHECK')} checks")
    assert ok, line
