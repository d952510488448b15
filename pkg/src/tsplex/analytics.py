"""Time-averaged divergence/curl analytics and plot-ready summaries."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .complexes import IncidencePair, OrientedComplex, Triangle
from .errors import DimensionMismatch, EmptyInput
from .signals import SignalMatrix


def mean_divergence(inc: IncidencePair, s1: SignalMatrix) -> np.ndarray:
    """Divergence of the time-averaged edge signal (= average of divergences)."""
    if s1.values.shape[0] != inc.n_edges:
        raise DimensionMismatch(
            f"signal has {s1.values.shape[0]} rows, complex has {inc.n_edges} edges"
        )
    return inc.b1 @ s1.values.mean(axis=1)


def mean_curl(inc: IncidencePair, s1: SignalMatrix) -> np.ndarray:
    """Curl of the time-averaged edge signal."""
    if s1.values.shape[0] != inc.n_edges:
        raise DimensionMismatch(
            f"signal has {s1.values.shape[0]} rows, complex has {inc.n_edges} edges"
        )
    return inc.b2.T @ s1.values.mean(axis=1)


def conservative_ranking(
    curl_values: np.ndarray, triangles: Sequence[Triangle], k: int
) -> list[tuple[Triangle, float]]:
    """The k triangles with weakest |circulation|, ascending; ties lexicographic."""
    curl_values = np.asarray(curl_values, dtype=np.float64)
    if k > len(curl_values):
        raise ValueError("k exceeds number of triangles")
    t = np.array(triangles, dtype=np.int64).reshape(-1, 3)
    order = np.lexsort((t[:, 2], t[:, 1], t[:, 0], np.abs(curl_values)))[:k]
    return [(tuple(int(v) for v in t[p]), float(curl_values[p])) for p in order]


def histogram(values: np.ndarray, n_bins: int) -> tuple[np.ndarray, np.ndarray]:
    """Equal-width histogram over [min, max]; the last bin is right-inclusive."""
    values = np.asarray(values, dtype=np.float64).ravel()
    if values.size == 0:
        raise EmptyInput("cannot histogram an empty vector")
    if n_bins < 1:
        raise ValueError("n_bins must be >= 1")
    lo, hi = float(values.min()), float(values.max())
    if hi == lo:
        hi = lo + 1.0
    counts, edges = np.histogram(values, bins=n_bins, range=(lo, hi))
    return edges, counts


@dataclass
class AnalysisReport:
    """Plot-ready summary of an edge-signal run over a complex."""

    mean_divergence: np.ndarray
    mean_curl: np.ndarray
    histograms: dict[str, tuple[np.ndarray, np.ndarray]]
    top_sources: list[tuple[int, float]]
    top_sinks: list[tuple[int, float]]
    conservative_triangles: list[tuple[Triangle, float]]
    node_triangle_participation: np.ndarray


def analyze(
    cx: OrientedComplex,
    inc: IncidencePair,
    s1: SignalMatrix,
    n_bins: int = 50,
    top_nodes: int = 10,
    conservative_k: int = 20,
) -> AnalysisReport:
    """Full report: averaged operators, histograms, and rankings.

    Sources are the most positive mean-divergence nodes, sinks the most
    negative. Participation counts nodes over the conservative triangle set.
    """
    div = mean_divergence(inc, s1)
    crl = mean_curl(inc, s1)
    node_order = np.argsort(-div, kind="stable")
    k_nodes = min(top_nodes, cx.n_nodes)
    sources = [(int(i), float(div[i])) for i in node_order[:k_nodes]]
    sinks = [(int(i), float(div[i])) for i in node_order[::-1][:k_nodes]]
    k_cons = min(conservative_k, cx.n_triangles)
    conservative = conservative_ranking(crl, cx.triangles, k_cons)
    participation = np.zeros(cx.n_nodes, dtype=np.int64)
    for tri, _ in conservative:
        for node in tri:
            participation[node] += 1
    histograms = {"divergence": histogram(div, n_bins)}
    if crl.size:
        histograms["curl"] = histogram(crl, n_bins)
    return AnalysisReport(
        mean_divergence=div,
        mean_curl=crl,
        histograms=histograms,
        top_sources=sources,
        top_sinks=sinks,
        conservative_triangles=conservative,
        node_triangle_participation=participation,
    )
