"""Seeded generators for ground-truth complexes and edge signals.

All randomness comes from numpy's default_rng (PCG64); a given seed
reproduces the same streams bit-exactly across platforms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .complexes import (
    OrientedComplex,
    Triangle,
    build_complex,
    candidate_triangles,
    incidence,
)
from .errors import ZeroSubspace
from .joint import project_off_gradient
from .spectral import partition_subspaces


def gen_complex(
    n_nodes: int, edge_prob: float, triangle_fill_prob: float, seed: int
) -> OrientedComplex:
    """Erdos-Renyi 1-skeleton; each 3-clique filled independently.

    Inclusion holds by construction since only existing cliques are filled.
    """
    if not (0.0 <= edge_prob <= 1.0 and 0.0 <= triangle_fill_prob <= 1.0):
        raise ValueError("probabilities must be in [0, 1]")
    rng = np.random.default_rng(seed)
    edges = [
        (i, j)
        for i in range(n_nodes)
        for j in range(i + 1, n_nodes)
        if rng.random() < edge_prob
    ]
    skeleton = build_complex(n_nodes, edges)
    triangles = [
        t for t in candidate_triangles(skeleton) if rng.random() < triangle_fill_prob
    ]
    return build_complex(n_nodes, edges, triangles)


def _unit_energy(component: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(component)
    if norm == 0.0:
        raise ZeroSubspace("requested component lives in an empty subspace")
    return component / norm


def gen_edge_signals(
    cx: OrientedComplex,
    mix: tuple[float, float, float],
    n_samples: int,
    snr_db: float | None,
    seed: int,
) -> np.ndarray:
    """E x M edge signals with prescribed gradient/solenoidal/harmonic energies.

    Each requested component is drawn with Gaussian coefficients, normalized
    to unit energy and scaled by sqrt(weight), so the mix entries are the
    exact component energy fractions of the noiseless signal. Gaussian noise
    is added at `snr_db` (Frobenius-energy SNR); None disables it.
    """
    w_grad, w_sol, w_harm = mix
    if min(mix) < 0:
        raise ValueError("mix weights must be nonnegative")
    rng = np.random.default_rng(seed)
    inc = incidence(cx)
    spec = partition_subspaces(inc)
    y = np.zeros((cx.n_edges, n_samples))
    if w_grad > 0:
        if spec.dims[0] == 0:
            raise ZeroSubspace("gradient subspace is empty")
        s0 = rng.standard_normal((cx.n_nodes, n_samples))
        y += np.sqrt(w_grad) * _unit_energy(inc.b1.T @ s0)
    if w_sol > 0:
        if spec.dims[1] == 0:
            raise ZeroSubspace("curl subspace is empty")
        s2 = rng.standard_normal((cx.n_triangles, n_samples))
        y += np.sqrt(w_sol) * _unit_energy(inc.b2.astype(float) @ s2)
    if w_harm > 0:
        if spec.dims[2] == 0:
            raise ZeroSubspace("harmonic subspace is empty")
        c = rng.standard_normal((spec.dims[2], n_samples))
        y += np.sqrt(w_harm) * _unit_energy(spec.harm_basis @ c)
    if snr_db is not None and np.isfinite(snr_db):
        noise = rng.standard_normal(y.shape)
        target = np.linalg.norm(y) * 10.0 ** (-snr_db / 20.0)
        y = y + _unit_energy(noise) * target
    return y


@dataclass
class PlantedInstance:
    """A complex with known filled triangles plus signals that are
    conservative on them (gradient + harmonic of the planted complex).

    `alpha1`/`alpha2` are calibrated l1 budgets: a small margin above what a
    perfect fit needs in the planted complex's own spectral basis.
    """

    complex: OrientedComplex
    planted_triangles: list[Triangle]
    node_coeffs: np.ndarray
    harmonic_coeffs: np.ndarray
    signals: np.ndarray
    snr_db: float
    seed: int
    alpha1: float
    alpha2: float


def gen_planted_instance(
    n_nodes: int = 10,
    n_planted: int = 5,
    n_samples: int = 200,
    snr_db: float = 20.0,
    seed: int = 0,
    edge_prob: float = 0.75,
    harmonic_support: int = 4,
    grad_energy: float = 1.0,
    alpha_margin: float = 1.05,
) -> PlantedInstance:
    """Seeded recovery instance for the joint topology learner.

    The skeleton is a dense random graph; `n_planted` of its 3-cliques are
    filled. Signals circulate only around the unfilled cycles (harmonic
    component, sparse in the planted harmonic basis) plus a gradient part
    and noise, so the planted triangles are the conservative ones.
    """
    rng = np.random.default_rng(seed)
    for attempt in range(64):
        skeleton = gen_complex(n_nodes, edge_prob, 0.0, int(rng.integers(2**63)))
        cands = candidate_triangles(skeleton)
        if len(cands) < n_planted + 2:
            continue
        planted_pos = rng.choice(len(cands), size=n_planted, replace=False)
        planted = sorted(cands[i] for i in planted_pos)
        cx = build_complex(n_nodes, skeleton.edges, planted)
        inc = incidence(cx)
        spec = partition_subspaces(inc)
        n_g, n_c, n_h = spec.dims
        if n_h < harmonic_support or n_c < n_planted:
            continue
        s0 = rng.standard_normal((n_nodes, n_samples))
        grad = inc.b1.T @ s0
        grad = np.sqrt(grad_energy) * grad / np.linalg.norm(grad)
        support = np.sort(rng.choice(n_h, size=harmonic_support, replace=False))
        coeffs = np.zeros((n_h, n_samples))
        coeffs[support] = rng.standard_normal((harmonic_support, n_samples))
        harm = spec.harm_basis @ coeffs
        harm /= np.linalg.norm(harm)
        clean = grad + harm
        noise = rng.standard_normal(clean.shape)
        noise *= np.linalg.norm(clean) * 10.0 ** (-snr_db / 20.0) / np.linalg.norm(noise)
        y = clean + noise
        y_sh = project_off_gradient(y, spec.grad_basis)
        alpha1 = alpha_margin * float(
            np.abs(spec.curl_basis.T @ y_sh).sum(axis=0).max()
        ) if n_c else 0.0
        alpha2 = alpha_margin * float(
            np.abs(spec.harm_basis.T @ y_sh).sum(axis=0).max()
        )
        return PlantedInstance(
            complex=cx,
            planted_triangles=planted,
            node_coeffs=s0,
            harmonic_coeffs=coeffs,
            signals=y,
            snr_db=snr_db,
            seed=seed,
            alpha1=alpha1,
            alpha2=alpha2,
        )
    raise ValueError("could not generate a viable planted instance; adjust parameters")
