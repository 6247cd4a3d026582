"""Finite cardinal frames.

A frame fixes the stages ``0..stage_count-1`` standing in for ordinals, the
stages designated regular, the three parameters ``mu < kappa < lambda_top``
and the size of the value set at every coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping


class FrameError(ValueError):
    """Raised when a frame description violates a frame invariant."""


@dataclass(frozen=True)
class CardinalFrame:
    stage_count: int
    regulars: frozenset[int]
    mu: int
    kappa: int
    lambda_top: int
    alphabet: Mapping[int, int] = field(compare=False)
    col_alphabet: int = 1

    # frozen dataclasses cannot hash a dict; compare the sorted items instead
    _alphabet_items: tuple[tuple[int, int], ...] = field(init=False, repr=False)

    def __post_init__(self):
        items = tuple(sorted(self.alphabet.items()))
        object.__setattr__(self, "alphabet", MappingProxyType(dict(items)))
        object.__setattr__(self, "_alphabet_items", items)

    @property
    def max_club_top(self) -> int:
        """Largest value of ``sup C_p`` over collapse conditions with ordinal domain.

        Each step of a club code adds ``1 + p(i) <= col_alphabet`` and a
        condition has fewer than ``mu`` entries.
        """
        return (self.mu - 1) * self.col_alphabet

    def stages_between(self, lower: int, upper: int) -> tuple[int, ...]:
        """Regular stages strictly between ``lower`` and ``upper``."""
        return tuple(s for s in sorted(self.regulars) if lower < s < upper)

    @property
    def lower_stages(self) -> tuple[int, ...]:
        return self.stages_between(self.mu, self.kappa)

    @property
    def upper_stages(self) -> tuple[int, ...]:
        return self.stages_between(self.kappa, self.lambda_top)

    def alphabet_at(self, stage: int) -> int:
        if stage == self.kappa:
            return self.col_alphabet
        try:
            return self.alphabet[stage]
        except KeyError:
            raise FrameError(f"missing alphabet for stage {stage}") from None

    def domain_points(self, lower: int) -> int:
        """Number of points ``[0, n)`` available to entry domains of ``L(lower, .)``.

        Entries of ``L(lower, .)`` live below ``lower``.  Below ``kappa`` this is
        the abstract segment holding the club codes, of length ``max_club_top``;
        below any other stage it is ``[0, lower - 1)``, the union of all
        ``[0, xi)`` with ``xi < lower``.
        """
        if lower == self.kappa:
            return self.max_club_top
        return max(lower - 1, 0)

    def to_raw(self) -> dict:
        return {
            "stages": self.stage_count,
            "regulars": sorted(self.regulars),
            "mu": self.mu,
            "kappa": self.kappa,
            "lambda": self.lambda_top,
            "alphabet": dict(self._alphabet_items),
            "col_alphabet": self.col_alphabet,
        }


def _as_int(raw: Mapping, key: str) -> int:
    if key not in raw:
        raise FrameError(f"missing key {key!r}")
    value = raw[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise FrameError(f"{key} must be an integer, got {value!r}")
    return value


def validate_frame(config: Mapping | CardinalFrame) -> CardinalFrame:
    """Check a raw frame description and return the frozen frame.

    ``config`` uses the keys produced by :func:`forcinglab.cli.parse_frame_file`
    (``stages, regulars, mu, kappa, lambda, alphabet, col_alphabet``).  A
    :class:`CardinalFrame` is accepted as well and revalidated.
    """
    if isinstance(config, CardinalFrame):
        config = config.to_raw()

    stages = _as_int(config, "stages")
    mu = _as_int(config, "mu")
    kappa = _as_int(config, "kappa")
    lam = _as_int(config, "lambda")
    col_alphabet = _as_int(config, "col_alphabet")
    regulars: Iterable[int] = config.get("regulars", ())
    regulars = frozenset(int(r) for r in regulars)
    alphabet = {int(k): int(v) for k, v in dict(config.get("alphabet", {})).items()}

    if stages < 1:
        raise FrameError("stage count must be positive")
    for r in regulars:
        if not 0 <= r < stages:
            raise FrameError(f"regular stage {r} outside 0..{stages - 1}")
    if not (0 <= mu < kappa < lam <= stages):
        raise FrameError(
            f"ordering violation: need 0 <= mu < kappa < lambda <= stages, "
            f"got mu={mu} kappa={kappa} lambda={lam} stages={stages}"
        )
    for name, stage in (("mu", mu), ("kappa", kappa)):
        if stage not in regulars:
            raise FrameError(f"non-regular designated stage: {name}={stage}")
    # lambda may sit at the frame's top, which is not itself a stage
    if lam < stages and lam not in regulars:
        raise FrameError(f"non-regular designated stage: lambda={lam}")

    if col_alphabet < 1:
        raise FrameError("zero alphabet: col_alphabet must be positive")
    for stage, size in alphabet.items():
        if stage not in regulars:
            raise FrameError(f"alphabet on non-regular stage {stage}")
        if size < 1:
            raise FrameError(f"zero alphabet at stage {stage}")
    if kappa in alphabet and alphabet[kappa] != col_alphabet:
        raise FrameError(
            f"alphabet conflict at kappa: {alphabet[kappa]} != col_alphabet {col_alphabet}"
        )
    for stage in sorted(regulars):
        if mu < stage < lam and stage != kappa and stage not in alphabet:
            raise FrameError(f"missing alphabet for regular stage {stage}")

    return CardinalFrame(
        stage_count=stages,
        regulars=regulars,
        mu=mu,
        kappa=kappa,
        lambda_top=lam,
        alphabet=alphabet,
        col_alphabet=col_alphabet,
    )


def is_easton(stages: Iterable[int], frame: CardinalFrame) -> bool:
    """True iff ``sup(X & alpha) < alpha`` for every regular stage ``alpha``.

    With finitely many stages the supremum is a maximum and the test always
    succeeds; it is kept literal so that constructions call it where required.
    """
    xs = sorted(set(stages))
    for alpha in frame.regulars:
        below = [x for x in xs if x < alpha]
        if below and not max(below) < alpha:
            return False
    return True
