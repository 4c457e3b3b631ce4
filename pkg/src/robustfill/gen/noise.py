"""Character-level noise over observed examples (simulated typos).

Each edit picks a uniformly random observed example, side (input or output
string), position, and kind (insert/delete/substitute), with replacement
characters uniform over printable ASCII. Assessment pairs and the reference
program are never touched. Edits are verified to each add exactly one unit
of edit distance against the original string (value collisions are
resampled), so a noised instance is a known distance from its clean source.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..dsl import PRINTABLE
from ..strings import edit_distance
from .sampler import Instance

_EDIT_KINDS = ("insert", "delete", "substitute")


@dataclass(frozen=True)
class NoiseSpec:
    """Number of single-character edits to apply to the observed examples."""

    n_chars: int

    def __post_init__(self) -> None:
        if self.n_chars < 0:
            raise ValueError("n_chars must be >= 0")


def _apply_edit(rng: np.random.Generator, s: str) -> str:
    kind = _EDIT_KINDS[int(rng.integers(3))]
    if kind == "delete" and len(s) == 1:
        kind = "substitute"  # never produce an empty string
    if kind == "insert":
        pos = int(rng.integers(len(s) + 1))
        ch = PRINTABLE[int(rng.integers(len(PRINTABLE)))]
        return s[:pos] + ch + s[pos:]
    pos = int(rng.integers(len(s)))
    if kind == "delete":
        return s[:pos] + s[pos + 1 :]
    old = s[pos]
    ch = old
    while ch == old:
        ch = PRINTABLE[int(rng.integers(len(PRINTABLE)))]
    return s[:pos] + ch + s[pos:][1:]


def inject_noise(rng: np.random.Generator, inst: Instance, spec: NoiseSpec) -> Instance:
    """Exactly ``spec.n_chars`` verified single-character edits over the observed pairs."""
    if spec.n_chars == 0:
        return inst
    observed = [list(pair) for pair in inst.observed]
    originals = [list(pair) for pair in inst.observed]
    edits_applied = [[0, 0] for _ in inst.observed]

    for _ in range(spec.n_chars):
        for _ in range(64):
            j = int(rng.integers(len(observed)))
            side = int(rng.integers(2))
            candidate = _apply_edit(rng, observed[j][side])
            # interacting edits can cancel; require the distance to grow by one
            if edit_distance(originals[j][side], candidate) == edits_applied[j][side] + 1:
                observed[j][side] = candidate
                edits_applied[j][side] += 1
                break
        else:  # pragma: no cover - astronomically unlikely
            raise RuntimeError("could not place a distance-increasing edit")

    return Instance(
        observed=tuple((i, o) for i, o in observed),
        assessment=inst.assessment,
        reference=inst.reference,
        noise=inst.noise + spec.n_chars,
    )
