"""Simplicial signal matrices and their CSV serialization.

Format: one row per simplex in canonical order, one column per time sample,
optionally preceded by a header row of sample indices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .complexes import OrientedComplex
from .errors import DimensionMismatch


@dataclass
class SignalMatrix:
    """R x M signal matrix; level 0/1/2 selects nodes/edges/triangles."""

    values: np.ndarray
    level: int

    def __post_init__(self):
        self.values = np.atleast_2d(np.asarray(self.values, dtype=np.float64))
        if self.level not in (0, 1, 2):
            raise DimensionMismatch(f"level must be 0, 1 or 2, got {self.level}")

    @property
    def n_samples(self) -> int:
        return self.values.shape[1]

    def check_against(self, cx: OrientedComplex) -> None:
        expected = (cx.n_nodes, cx.n_edges, cx.n_triangles)[self.level]
        if self.values.shape[0] != expected:
            raise DimensionMismatch(
                f"level-{self.level} signal has {self.values.shape[0]} rows, "
                f"complex expects {expected}"
            )


def save_signal_csv(sig: SignalMatrix, path, header: bool = False) -> None:
    with open(path, "w") as fh:
        if header:
            fh.write(",".join(str(m) for m in range(sig.n_samples)) + "\n")
        for row in sig.values:
            fh.write(",".join(format(v, ".17g") for v in row) + "\n")


def load_signal_csv(path, level: int) -> SignalMatrix:
    """Load a signal CSV, skipping a header row if the first line is one."""
    with open(path) as fh:
        first = fh.readline()
        try:
            first_vals = [float(tok) for tok in first.strip().split(",")]
            # header rows are written as 0,1,...,M-1 by save_signal_csv
            is_header = len(first_vals) >= 2 and first_vals == [
                float(m) for m in range(len(first_vals))
            ]
        except ValueError:
            is_header = True
    data = np.loadtxt(path, delimiter=",", skiprows=1 if is_header else 0, ndmin=2)
    return SignalMatrix(values=data, level=level)
