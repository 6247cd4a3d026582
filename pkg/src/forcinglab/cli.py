"""Command line driver: ``forcinglab run --frame F1.frame --suite all``.

Exit codes: 0 when every check passes, 1 on any failure, 2 on a configuration
or parse error, 3 when ``--strict`` is given and some check was skipped by a
cap.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .frame import CardinalFrame, FrameError, validate_frame
from .poset import FAIL, SKIP, Check
from .suites import SUITES, Caps, run_named

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_SKIP = 0, 1, 2, 3

SCALAR_KEYS = ("stages", "mu", "kappa", "lambda", "col_alphabet")
REQUIRED_KEYS = SCALAR_KEYS + ("regulars",)
SUITE_NAMES = tuple(SUITES) + ("all",)


class ParseError(FrameError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _int(text: str, lineno: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"expected an integer, got {text!r}", lineno) from None


def parse_frame_file(text: str) -> dict:
    """Parse the ``key = value`` frame format into a raw description for
    :func:`~forcinglab.frame.validate_frame`."""
    raw: dict = {"alphabet": {}}
    seen: dict[str, int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {line!r}", lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        words = key.split()
        if key in seen:
            raise ParseError(f"duplicate key {key!r} (first on line {seen[key]})", lineno)
        seen[key] = lineno
        if len(words) == 2 and words[0] == "alphabet":
            raw["alphabet"][_int(words[1], lineno)] = _int(value, lineno)
        elif key == "regulars":
            raw["regulars"] = [_int(w, lineno) for w in value.split()]
        elif key in SCALAR_KEYS:
            raw[key] = _int(value, lineno)
        else:
            raise ParseError(f"unknown key {key!r}", lineno)
    missing = [k for k in REQUIRED_KEYS if k not in raw]
    if missing:
        raise ParseError(f"missing key {missing[0]!r}")
    return raw


def load_frame(path: str | Path) -> CardinalFrame:
    return validate_frame(parse_frame_file(Path(path).read_text()))


@dataclass(frozen=True)
class RunConfig:
    frame: str
    suite: str = "all"
    caps: Caps = field(default_factory=Caps)
    format: str = "lines"
    strict: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.suite not in SUITE_NAMES:
            raise ValueError(f"unknown suite {self.suite!r}")
        if self.format not in ("text", "lines"):
            raise ValueError(f"unknown format {self.format!r}")
        if min(self.caps.term, self.caps.iso, self.caps.census) < 1:
            raise ValueError("caps must be positive")
        if self.workers < 1:
            raise ValueError("workers must be positive")


def _run_one(args) -> list[Check]:
    name, raw, caps = args
    return run_named(name, validate_frame(raw), caps)


def collect(frame: CardinalFrame, names, caps: Caps, workers: int = 1) -> dict[str, list[Check]]:
    """Run suites, possibly in parallel; results are keyed by suite name so
    the merge does not depend on completion order."""
    jobs = [(n, frame.to_raw(), caps) for n in names]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]
    return dict(zip(names, results))


def format_report(results: dict[str, list[Check]], fmt: str) -> str:
    if fmt == "lines":
        lines = sorted(c.line() for checks in results.values() for c in checks)
        return "\n".join(lines) + "\n"
    out = []
    for name in sorted(results):
        out.append(f"== {name}: {SUITES[name][1]}")
        for c in sorted(results[name], key=lambda c: c.name):
            out.append(c.line() + (f"  # {c.detail}" if c.detail else ""))
    checks = [c for cs in results.values() for c in cs]
    counts = {s: sum(c.status == s for c in checks) for s in ("PASS", FAIL, SKIP)}
    out.append(f"-- {counts['PASS']} passed, {counts[FAIL]} failed, {counts[SKIP]} skipped")
    return "\n".join(out) + "\n"


def exit_code(results: dict[str, list[Check]], strict: bool) -> int:
    statuses = {c.status for cs in results.values() for c in cs}
    if FAIL in statuses:
        return EXIT_FAIL
    if strict and SKIP in statuses:
        return EXIT_SKIP
    return EXIT_OK


def run_suite(config: RunConfig) -> tuple[int, str]:
    """Run the selected suite; returns the exit code and the report text."""
    try:
        frame = load_frame(config.frame)
    except (OSError, FrameError) as exc:
        return EXIT_CONFIG, f"error: {exc}\n"
    names = sorted(SUITES) if config.suite == "all" else [config.suite]
    results = collect(frame, names, config.caps, config.workers)
    return exit_code(results, config.strict), format_report(results, config.format)


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {n}")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="forcinglab",
                                     description="Exhaustive checks of finite forcing constructions.")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run checker suites on a frame file")
    run.add_argument("--frame", required=True, help="path to a frame file")
    run.add_argument("--suite", default="all", choices=SUITE_NAMES)
    run.add_argument("--cap-term", type=_positive, default=Caps.term)
    run.add_argument("--cap-iso", type=_positive, default=Caps.iso)
    run.add_argument("--cap-census", type=_positive, default=Caps.census)
    run.add_argument("--format", choices=("text", "lines"), default="text")
    run.add_argument("--strict", action="store_true", help="exit 3 if a cap skipped a check")
    run.add_argument("--workers", type=_positive, default=1)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    config = RunConfig(
        frame=args.frame, suite=args.suite,
        caps=Caps(args.cap_term, args.cap_iso, args.cap_census),
        format=args.format, strict=args.strict, workers=args.workers,
    )
    code, report = run_suite(config)
    (sys.stderr if code == EXIT_CONFIG else sys.stdout).write(report)
    return code


if __name__ == "__main__":
    sys.exit(main())
