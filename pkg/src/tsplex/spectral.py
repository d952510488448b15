"""Hodge Laplacians, spectral bases, SFT, Hodge decomposition, div and curl.

Edge-flow space splits orthogonally into gradient (img b1.T), curl
(img b2) and harmonic (ker L1) subspaces. The gradient and curl bases are
taken from the nonzero-eigenvalue eigenvectors of the lower and upper
Laplacians respectively, the harmonic basis from the near-zero eigenvectors
of L1; this avoids ambiguity when L1 has eigenvalues repeated across
subspaces.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .complexes import IncidencePair
from .errors import DimensionMismatch, EigenFailure


class Laplacians(NamedTuple):
    l0: np.ndarray
    l1_low: np.ndarray
    l1_up: np.ndarray
    l1: np.ndarray


@dataclass
class HodgeSpectrum:
    """Eigenpairs of a Hodge Laplacian with a subspace partition.

    `eigenvalues` ascending; `eigenvectors` orthonormal with columns aligned
    to them. The index arrays are disjoint; for a plain `spectrum` call only
    `harm_idx` is populated (gradient/curl need the order-1 partition).
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    grad_idx: np.ndarray
    curl_idx: np.ndarray
    harm_idx: np.ndarray

    @property
    def dims(self) -> tuple[int, int, int]:
        return len(self.grad_idx), len(self.curl_idx), len(self.harm_idx)

    @property
    def grad_basis(self) -> np.ndarray:
        return self.eigenvectors[:, self.grad_idx]

    @property
    def curl_basis(self) -> np.ndarray:
        return self.eigenvectors[:, self.curl_idx]

    @property
    def harm_basis(self) -> np.ndarray:
        return self.eigenvectors[:, self.harm_idx]


@dataclass
class HodgeParts:
    """Irrotational/solenoidal/harmonic split of an edge signal."""

    irrotational: np.ndarray
    solenoidal: np.ndarray
    harmonic: np.ndarray

    @property
    def total(self) -> np.ndarray:
        return self.irrotational + self.solenoidal + self.harmonic


def laplacians(inc: IncidencePair) -> Laplacians:
    """L0 = b1 b1.T, L1_low = b1.T b1, L1_up = b2 b2.T, L1 = L1_low + L1_up."""
    b1 = inc.b1.astype(np.float64)
    b2 = inc.b2.astype(np.float64)
    l0 = b1 @ b1.T
    l1_low = b1.T @ b1
    l1_up = b2 @ b2.T
    return Laplacians(l0=l0, l1_low=l1_low, l1_up=l1_up, l1=l1_low + l1_up)


def default_zero_tol(eigenvalues: np.ndarray) -> float:
    lam_max = float(eigenvalues.max()) if eigenvalues.size else 0.0
    return 1e-8 * max(1.0, lam_max)


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip each column so its largest-magnitude entry is positive."""
    if vectors.size == 0:
        return vectors
    lead = np.abs(vectors).argmax(axis=0)
    signs = np.sign(vectors[lead, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def _eigh(mat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    try:
        vals, vecs = scipy.linalg.eigh(mat)
    except scipy.linalg.LinAlgError as exc:
        raise EigenFailure(str(exc)) from exc
    return vals, _fix_signs(vecs)


def spectrum(mat: np.ndarray, zero_tol: float | None = None) -> HodgeSpectrum:
    """Eigendecomposition of a symmetric matrix, eigenvalues ascending.

    `harm_idx` collects indices with eigenvalue below `zero_tol`
    (default 1e-8 * max(1, lambda_max)); the gradient/curl split is left
    empty here.
    """
    mat = np.asarray(mat, dtype=np.float64)
    vals, vecs = _eigh(mat)
    if zero_tol is None:
        zero_tol = default_zero_tol(vals)
    harm = np.flatnonzero(vals < zero_tol)
    empty = np.array([], dtype=np.intp)
    return HodgeSpectrum(
        eigenvalues=vals, eigenvectors=vecs,
        grad_idx=empty, curl_idx=empty.copy(), harm_idx=harm,
    )


def partition_subspaces(inc: IncidencePair, zero_tol: float | None = None) -> HodgeSpectrum:
    """Order-1 spectrum with the gradient/curl/harmonic partition.

    Gradient vectors are the nonzero-eigenvalue eigenvectors of L1_low,
    curl vectors those of L1_up, harmonic vectors the near-null
    eigenvectors of L1. Columns are re-sorted by eigenvalue ascending.
    """
    lap = laplacians(inc)
    vals_low, vecs_low = _eigh(lap.l1_low)
    vals_up, vecs_up = _eigh(lap.l1_up)
    vals_full, vecs_full = _eigh(lap.l1)
    if zero_tol is None:
        zero_tol = default_zero_tol(vals_full)

    g = vals_low >= zero_tol
    c = vals_up >= zero_tol
    h = vals_full < zero_tol
    # L1_low and L1_up eigenvectors with nonzero eigenvalue are also L1
    # eigenvectors (the two Laplacians annihilate each other's range).
    vals = np.concatenate([vals_low[g], vals_up[c], vals_full[h]])
    vecs = np.hstack([vecs_low[:, g], vecs_up[:, c], vecs_full[:, h]])
    labels = np.concatenate([
        np.zeros(int(g.sum()), dtype=np.intp),
        np.ones(int(c.sum()), dtype=np.intp),
        np.full(int(h.sum()), 2, dtype=np.intp),
    ])
    order = np.argsort(vals, kind="stable")
    vals, vecs, labels = vals[order], vecs[:, order], labels[order]
    return HodgeSpectrum(
        eigenvalues=vals,
        eigenvectors=vecs,
        grad_idx=np.flatnonzero(labels == 0),
        curl_idx=np.flatnonzero(labels == 1),
        harm_idx=np.flatnonzero(labels == 2),
    )


def sft(spec: HodgeSpectrum, signal: np.ndarray) -> np.ndarray:
    """Simplicial Fourier transform: coefficients U.T @ s."""
    signal = np.asarray(signal, dtype=np.float64)
    if signal.shape[0] != spec.eigenvectors.shape[0]:
        raise DimensionMismatch(
            f"signal length {signal.shape[0]} != basis size {spec.eigenvectors.shape[0]}"
        )
    return spec.eigenvectors.T @ signal


def inverse_sft(spec: HodgeSpectrum, coeffs: np.ndarray) -> np.ndarray:
    coeffs = np.asarray(coeffs, dtype=np.float64)
    if coeffs.shape[0] != spec.eigenvectors.shape[1]:
        raise DimensionMismatch(
            f"coefficient length {coeffs.shape[0]} != basis size {spec.eigenvectors.shape[1]}"
        )
    return spec.eigenvectors @ coeffs


def hodge_decompose(inc: IncidencePair, s1: np.ndarray) -> HodgeParts:
    """Split an edge signal (vector or E x M matrix) into its three parts.

    Projections use the orthonormal subspace bases; the harmonic part is the
    remainder, so the parts sum to the input exactly.
    """
    s1 = np.asarray(s1, dtype=np.float64)
    if s1.shape[0] != inc.n_edges:
        raise DimensionMismatch(f"signal has {s1.shape[0]} rows, complex has {inc.n_edges} edges")
    spec = partition_subspaces(inc)
    u_g, u_c = spec.grad_basis, spec.curl_basis
    irr = u_g @ (u_g.T @ s1)
    sol = u_c @ (u_c.T @ s1)
    return HodgeParts(irrotational=irr, solenoidal=sol, harmonic=s1 - irr - sol)


def divergence(inc: IncidencePair, s1: np.ndarray) -> np.ndarray:
    """Net in/out flow per node: b1 @ s1 (positive = source)."""
    s1 = np.asarray(s1, dtype=np.float64)
    if s1.shape[0] != inc.n_edges:
        raise DimensionMismatch(f"signal has {s1.shape[0]} rows, complex has {inc.n_edges} edges")
    return inc.b1 @ s1


def curl(inc: IncidencePair, s1: np.ndarray) -> np.ndarray:
    """Circulation around each filled triangle: b2.T @ s1."""
    s1 = np.asarray(s1, dtype=np.float64)
    if s1.shape[0] != inc.n_edges:
        raise DimensionMismatch(f"signal has {s1.shape[0]} rows, complex has {inc.n_edges} edges")
    return inc.b2.T @ s1
