"""Pure-numpy implementations of the hot kernels.

Mirrors the compiled Cython module `tsplex._kernels`; selected as a fallback
at import time when the extension is unavailable (see `tsplex._backend`).
"""

from __future__ import annotations

import numpy as np

COV_REGULARIZATION = 1e-12
DET_FLOOR = 1e-300


def gaussian_tc_from_cov(cov: np.ndarray, triples: np.ndarray) -> np.ndarray:
    """Gaussian total correlation per node triple from a covariance matrix.

    TC(i,j,k) = H(i) + H(j) + H(k) - H(i,j,k) with Gaussian differential
    entropies; the 2*pi*e constants cancel, leaving half the log ratio of
    marginal-variance product to joint determinant. The 3x3 covariance
    blocks get a 1e-12 diagonal regularizer; determinants below 1e-300
    produce NaN (degenerate covariance), flagged to the caller.
    """
    cov = np.asarray(cov, dtype=np.float64)
    triples = np.asarray(triples, dtype=np.int64)
    i, j, k = triples[:, 0], triples[:, 1], triples[:, 2]
    vii = cov[i, i] + COV_REGULARIZATION
    vjj = cov[j, j] + COV_REGULARIZATION
    vkk = cov[k, k] + COV_REGULARIZATION
    cij = cov[i, j]
    cik = cov[i, k]
    cjk = cov[j, k]
    det3 = (
        vii * (vjj * vkk - cjk * cjk)
        - cij * (cij * vkk - cjk * cik)
        + cik * (cij * cjk - vjj * cik)
    )
    with np.errstate(divide="ignore", invalid="ignore"):
        weights = 0.5 * (np.log(vii) + np.log(vjj) + np.log(vkk) - np.log(det3))
    weights[det3 < DET_FLOOR] = np.nan
    return weights


def l1ball_project_columns(x: np.ndarray, radius: float) -> np.ndarray:
    """Euclidean projection of each column of `x` onto the l1 ball.

    Sort-based exact projection (Duchi et al.); columns already inside the
    ball are returned unchanged.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.size == 0:
        return x.copy()
    if radius <= 0.0:
        return np.zeros_like(x)
    out = x.copy()
    over = np.abs(x).sum(axis=0) > radius
    if not over.any():
        return out
    v = np.abs(x[:, over])
    n = v.shape[0]
    u = -np.sort(-v, axis=0)
    cssv = np.cumsum(u, axis=0)
    ranks = np.arange(1, n + 1, dtype=np.float64)[:, None]
    cond = u > (cssv - radius) / ranks
    rho = n - 1 - np.argmax(cond[::-1], axis=0)
    theta = (cssv[rho, np.arange(v.shape[1])] - radius) / (rho + 1)
    out[:, over] = np.sign(x[:, over]) * np.maximum(v - theta[None, :], 0.0)
    return out
