"""Small posets and strategies shared by the tests."""

from pathlib import Path

import numpy as np
from hypothesis import strategies as st

from forcinglab.cli import load_frame
from forcinglab.poset import FinitePoset

FRAMES = Path(__file__).resolve().parent.parent / "frames"


def frame(name):
    return load_frame(FRAMES / f"{name}.frame")


def chain(n):
    """``0 > 1 > ... > n-1`` with 0 on top."""
    return FinitePoset(range(n), [[i >= j for j in range(n)] for i in range(n)], top=0)


def atoms(n):
    """A top above ``n`` pairwise incompatible atoms."""
    m = np.eye(n + 1, dtype=bool)
    m[:, 0] = True
    return FinitePoset(range(n + 1), m, top=0)


def from_cover(n, below):
    """Poset on ``0..n-1`` generated by pairs ``(i, j)`` meaning ``i <= j``;
    every element sits below 0."""
    m = np.eye(n, dtype=bool)
    m[:, 0] = True
    for i, j in below:
        m[i, j] = True
    for k in range(n):  # Warshall closure
        m |= m[:, [k]] & m[[k], :]
    return FinitePoset(range(n), m, top=0)


@st.composite
def posets(draw, max_size=8):
    """Random finite posets with top 0; edges only run from larger to smaller
    index, so antisymmetry is automatic."""
    n = draw(st.integers(1, max_size))
    pairs = [(i, j) for i in range(1, n) for j in range(1, i)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return from_cover(n, chosen)
