"""Statistical inference of a 2-order complex from node time series.

Pipeline: z-score per subject, average absolute Pearson matrices, keep the
strongest edge fraction, weight every node triple by total correlation,
z-score and average the weights across subjects, keep the strongest
triangles, then repair inclusion.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _backend
from .complexes import (
    Edge,
    OrientedComplex,
    Triangle,
    all_triples,
    build_complex,
    close_under_inclusion,
)
from .errors import DegenerateCovariance, DimensionMismatch, ZeroVariance
from .signals import SignalMatrix

_LOG_2PIE = np.log(2.0 * np.pi * np.e)


@dataclass
class NodeSeriesSet:
    """One subject's node time series: N rows, M time samples."""

    values: np.ndarray
    subject_id: str | None = None

    def __post_init__(self):
        self.values = np.atleast_2d(np.asarray(self.values, dtype=np.float64))
        if self.values.shape[1] < 2:
            raise DimensionMismatch("need at least 2 time samples")

    @property
    def n_nodes(self) -> int:
        return self.values.shape[0]

    @property
    def n_samples(self) -> int:
        return self.values.shape[1]


@dataclass
class TriangleWeights:
    """Weight per canonical node triple (all C(N,3), lexicographic)."""

    triples: np.ndarray
    weights: np.ndarray


def zscore(series: NodeSeriesSet) -> NodeSeriesSet:
    """Standardize each row to mean 0, sample std 1 (ddof=1)."""
    vals = series.values
    std = vals.std(axis=1, ddof=1)
    zero = np.flatnonzero(std == 0.0)
    if zero.size:
        raise ZeroVariance(int(zero[0]))
    out = (vals - vals.mean(axis=1, keepdims=True)) / std[:, None]
    return NodeSeriesSet(values=out, subject_id=series.subject_id)


def pearson_abs_matrix(series: NodeSeriesSet) -> np.ndarray:
    """Absolute Pearson correlations; symmetric, unit diagonal, in [0, 1]."""
    std = series.values.std(axis=1, ddof=1)
    zero = np.flatnonzero(std == 0.0)
    if zero.size:
        raise ZeroVariance(int(zero[0]))
    corr = np.abs(np.corrcoef(series.values))
    corr = np.clip(corr, 0.0, 1.0)
    np.fill_diagonal(corr, 1.0)
    return corr


def select_top_edges(corr: np.ndarray, fraction: float) -> list[Edge]:
    """The floor(fraction * C(N,2)) strongest pairs, lexicographic tie-break."""
    if not 0.0 < fraction <= 1.0:
        raise ValueError(f"fraction must be in (0, 1], got {fraction}")
    n = corr.shape[0]
    ii, jj = np.triu_indices(n, k=1)
    w = np.asarray(corr)[ii, jj]
    count = int(np.floor(fraction * len(w)))
    order = np.lexsort((jj, ii, -w))[:count]
    return sorted((int(ii[p]), int(jj[p])) for p in order)


def _gaussian_entropy(cov: np.ndarray) -> float:
    k = cov.shape[0]
    det = float(np.linalg.det(cov + _backend.COV_REGULARIZATION * np.eye(k)))
    if det < 1e-300:
        raise DegenerateCovariance(f"covariance determinant {det} underflows")
    return 0.5 * (k * _LOG_2PIE + np.log(det))


def _hist_entropy(counts: np.ndarray) -> float:
    p = counts[counts > 0] / counts.sum()
    return float(-(p * np.log(p)).sum())


def _bin_codes(x: np.ndarray, n_bins: int) -> np.ndarray:
    lo, hi = x.min(), x.max()
    if hi == lo:
        return np.zeros(x.shape, dtype=np.int64)
    codes = np.floor((x - lo) / (hi - lo) * n_bins).astype(np.int64)
    return np.minimum(codes, n_bins - 1)


def total_correlation(
    xi: np.ndarray,
    xj: np.ndarray,
    xk: np.ndarray,
    estimator: str = "gaussian",
    n_bins: int = 8,
) -> float:
    """Three-way redundancy H(xi) + H(xj) + H(xk) - H(xi, xj, xk).

    The default estimator uses Gaussian differential entropies from the
    empirical covariance (ddof=1); "histogram" uses plug-in entropies over
    equal-width bins.
    """
    stack = np.vstack([np.asarray(v, dtype=np.float64).ravel() for v in (xi, xj, xk)])
    if stack.shape[1] < 3:
        raise DimensionMismatch("need at least 3 time samples")
    if estimator == "gaussian":
        cov = np.cov(stack, ddof=1)
        marginals = sum(_gaussian_entropy(cov[[d]][:, [d]]) for d in range(3))
        return marginals - _gaussian_entropy(cov)
    if estimator == "histogram":
        codes = np.vstack([_bin_codes(row, n_bins) for row in stack])
        marginals = sum(
            _hist_entropy(np.bincount(codes[d], minlength=n_bins)) for d in range(3)
        )
        joint_codes = (codes[0] * n_bins + codes[1]) * n_bins + codes[2]
        joint = _hist_entropy(np.bincount(joint_codes, minlength=n_bins**3))
        return marginals - joint
    raise ValueError(f"unknown estimator {estimator!r}")


def all_triangle_weights(
    series: NodeSeriesSet,
    estimator: str = "gaussian",
    n_bins: int = 8,
    threads: int = 1,
) -> TriangleWeights:
    """Total correlation for every one of the C(N,3) canonical triples.

    The Gaussian path reduces to one covariance matrix plus a per-triple
    3x3 determinant sweep (compiled kernel when available); output order is
    canonical and independent of the thread count.
    """
    triples = np.array(all_triples(series.n_nodes), dtype=np.int64).reshape(-1, 3)
    n = triples.shape[0]
    if estimator == "gaussian":
        cov = np.cov(series.values, ddof=1)
        weights = np.empty(n, dtype=np.float64)
        if threads <= 1 or n < 1024:
            weights[:] = _backend.gaussian_tc_from_cov(cov, triples)
        else:
            bounds = np.linspace(0, n, threads + 1, dtype=int)
            with ThreadPoolExecutor(max_workers=threads) as pool:
                futures = [
                    pool.submit(
                        lambda lo, hi: weights.__setitem__(
                            slice(lo, hi), _backend.gaussian_tc_from_cov(cov, triples[lo:hi])
                        ),
                        lo,
                        hi,
                    )
                    for lo, hi in zip(bounds[:-1], bounds[1:])
                    if hi > lo
                ]
                for f in futures:
                    f.result()
        bad = np.flatnonzero(np.isnan(weights))
        if bad.size:
            raise DegenerateCovariance(
                f"degenerate covariance for triple {tuple(triples[bad[0]])}"
            )
    elif estimator == "histogram":
        codes = np.vstack([_bin_codes(row, n_bins) for row in series.values])
        h1 = np.array(
            [_hist_entropy(np.bincount(c, minlength=n_bins)) for c in codes]
        )
        weights = np.empty(n, dtype=np.float64)
        for m, (i, j, k) in enumerate(triples):
            joint_codes = (codes[i] * n_bins + codes[j]) * n_bins + codes[k]
            joint = _hist_entropy(np.bincount(joint_codes))
            weights[m] = h1[i] + h1[j] + h1[k] - joint
    else:
        raise ValueError(f"unknown estimator {estimator!r}")
    return TriangleWeights(triples=triples, weights=weights)


def zscore_and_average_weights(per_subject: Sequence[TriangleWeights]) -> TriangleWeights:
    """z-score each subject's weight vector, then average element-wise."""
    if not per_subject:
        raise ValueError("need at least one subject")
    first = per_subject[0].triples
    for tw in per_subject[1:]:
        if not np.array_equal(tw.triples, first):
            raise DimensionMismatch("triple lists are not aligned across subjects")
    stacked = []
    for s, tw in enumerate(per_subject):
        std = tw.weights.std(ddof=1) if tw.weights.size > 1 else 0.0
        if std == 0.0:
            raise ZeroVariance(s)
        stacked.append((tw.weights - tw.weights.mean()) / std)
    return TriangleWeights(triples=first, weights=np.mean(stacked, axis=0))


def select_top_triangles(weights: TriangleWeights, count: int) -> list[Triangle]:
    """The `count` largest-weight triples, lexicographic tie-break."""
    if count > len(weights.weights):
        raise ValueError("count exceeds number of triples")
    t = weights.triples
    order = np.lexsort((t[:, 2], t[:, 1], t[:, 0], -weights.weights))[:count]
    return sorted(tuple(int(v) for v in t[p]) for p in order)


def cofluctuation_edge_signals(series: NodeSeriesSet, edges: Sequence[Edge]) -> SignalMatrix:
    """Edge co-fluctuation magnitude |z_i(m) * z_j(m)| per edge and sample."""
    z = series.values
    rows = np.abs(np.array([z[i] * z[j] for i, j in edges], dtype=np.float64))
    return SignalMatrix(values=rows.reshape(len(edges), series.n_samples), level=1)


@dataclass
class StatisticalLearnResult:
    complex: OrientedComplex
    skeleton_edges: list[Edge]  # pre-closure selection
    mean_weights: TriangleWeights
    selected_triangles: list[Triangle]


def learn_statistical_detailed(
    subjects: Sequence[NodeSeriesSet],
    edge_fraction: float = 0.05,
    triangle_count: int = 200,
    estimator: str = "gaussian",
    n_bins: int = 8,
    threads: int = 1,
) -> StatisticalLearnResult:
    """Full pipeline, returning intermediates alongside the learned complex."""
    if not subjects:
        raise ValueError("need at least one subject")
    n = subjects[0].n_nodes
    for s in subjects[1:]:
        if s.n_nodes != n:
            raise DimensionMismatch("subjects disagree on node count")
    mean_corr = np.mean([pearson_abs_matrix(s) for s in subjects], axis=0)
    edges = select_top_edges(mean_corr, edge_fraction)
    per_subject = [
        all_triangle_weights(zscore(s), estimator=estimator, n_bins=n_bins, threads=threads)
        for s in subjects
    ]
    mean_weights = zscore_and_average_weights(per_subject)
    triangles = select_top_triangles(mean_weights, triangle_count)
    closed = close_under_inclusion(edges, triangles)
    cx = build_complex(n, closed, triangles)
    return StatisticalLearnResult(
        complex=cx,
        skeleton_edges=edges,
        mean_weights=mean_weights,
        selected_triangles=triangles,
    )


def learn_statistical(
    subjects: Sequence[NodeSeriesSet],
    edge_fraction: float = 0.05,
    triangle_count: int = 200,
    estimator: str = "gaussian",
    n_bins: int = 8,
    threads: int = 1,
) -> OrientedComplex:
    """Infer the 2-order complex from node time series (see module docstring)."""
    return learn_statistical_detailed(
        subjects, edge_fraction, triangle_count, estimator, n_bins, threads
    ).complex
