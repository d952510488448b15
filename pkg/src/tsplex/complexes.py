"""Oriented 2-order simplicial complexes and their incidence matrices.

A complex is a node count plus canonically ordered edge and triangle lists.
Simplices are oriented by increasing node index; this fixed convention makes
every incidence matrix (and everything downstream of it) reproducible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import InclusionViolation, IndexOutOfRange

Edge = tuple[int, int]
Triangle = tuple[int, int, int]


def _canonical_edges(edges: Iterable[Sequence[int]]) -> tuple[Edge, ...]:
    out = {tuple(sorted(int(v) for v in e)) for e in edges}
    for e in out:
        if len(set(e)) != 2:
            raise IndexOutOfRange(f"edge {e} does not have two distinct nodes")
    return tuple(sorted(out))


def _canonical_triangles(triangles: Iterable[Sequence[int]]) -> tuple[Triangle, ...]:
    out = {tuple(sorted(int(v) for v in t)) for t in triangles}
    for t in out:
        if len(set(t)) != 3:
            raise IndexOutOfRange(f"triangle {t} does not have three distinct nodes")
    return tuple(sorted(out))


def triangle_faces(tri: Triangle) -> tuple[Edge, Edge, Edge]:
    i, j, k = tri
    return (i, j), (i, k), (j, k)


@dataclass(frozen=True)
class OrientedComplex:
    """Immutable 2-order simplicial complex with canonical simplex ordering.

    `edges` and `triangles` are lexicographically sorted tuples of node
    index tuples (each sorted ascending); all matrix column orders refer to
    these lists.
    """

    n_nodes: int
    edges: tuple[Edge, ...]
    triangles: tuple[Triangle, ...]

    @cached_property
    def edge_index(self) -> dict[Edge, int]:
        return {e: c for c, e in enumerate(self.edges)}

    @cached_property
    def triangle_index(self) -> dict[Triangle, int]:
        return {t: c for c, t in enumerate(self.triangles)}

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)


@dataclass(frozen=True)
class IncidencePair:
    """Signed node-edge (b1, N x E) and edge-triangle (b2, E x T) matrices."""

    b1: np.ndarray
    b2: np.ndarray

    @property
    def n_nodes(self) -> int:
        return self.b1.shape[0]

    @property
    def n_edges(self) -> int:
        return self.b1.shape[1]

    @property
    def n_triangles(self) -> int:
        return self.b2.shape[1]


def build_complex(
    n_nodes: int,
    edges: Iterable[Sequence[int]],
    triangles: Iterable[Sequence[int]] = (),
) -> OrientedComplex:
    """Canonicalize and validate a complex description.

    Members of each simplex are sorted, duplicate simplices dropped, and the
    simplex lists sorted lexicographically. Raises IndexOutOfRange for bad
    node indices and InclusionViolation when a triangle face is missing from
    the edge list.
    """
    e = _canonical_edges(edges)
    t = _canonical_triangles(triangles)
    for s in (*e, *t):
        if min(s) < 0 or max(s) >= n_nodes:
            raise IndexOutOfRange(f"simplex {s} out of range for n_nodes={n_nodes}")
    edge_set = set(e)
    missing = [
        (tri, face)
        for tri in t
        for face in triangle_faces(tri)
        if face not in edge_set
    ]
    if missing:
        raise InclusionViolation(missing)
    return OrientedComplex(n_nodes=int(n_nodes), edges=e, triangles=t)


def close_under_inclusion(
    edges: Iterable[Sequence[int]], triangles: Iterable[Sequence[int]]
) -> list[Edge]:
    """Return the edge list augmented with every missing triangle face.

    Idempotent; the output is a canonically sorted superset of the input.
    """
    e = set(_canonical_edges(edges))
    for tri in _canonical_triangles(triangles):
        e.update(triangle_faces(tri))
    return sorted(e)


def incidence(cx: OrientedComplex) -> IncidencePair:
    """Materialize b1 and b2 under the increasing-index orientation.

    Edge (i, j), i < j, is oriented i -> j: b1[i] = -1, b1[j] = +1.
    Triangle (i, j, k), i < j < k, has boundary +(i,j) - (i,k) + (j,k).
    """
    b1 = np.zeros((cx.n_nodes, cx.n_edges), dtype=np.int64)
    for c, (i, j) in enumerate(cx.edges):
        b1[i, c] = -1
        b1[j, c] = 1
    b2 = np.zeros((cx.n_edges, cx.n_triangles), dtype=np.int64)
    eidx = cx.edge_index
    for c, tri in enumerate(cx.triangles):
        f_ij, f_ik, f_jk = triangle_faces(tri)
        b2[eidx[f_ij], c] = 1
        b2[eidx[f_ik], c] = -1
        b2[eidx[f_jk], c] = 1
    return IncidencePair(b1=b1, b2=b2)


def candidate_triangles(cx: OrientedComplex) -> list[Triangle]:
    """All 3-cliques of the 1-skeleton, lexicographically sorted.

    The complex's own triangle list is ignored; only edges matter.
    """
    adj: list[set[int]] = [set() for _ in range(cx.n_nodes)]
    for i, j in cx.edges:
        adj[i].add(j)
        adj[j].add(i)
    out: list[Triangle] = []
    for i, j in cx.edges:
        for k in sorted(adj[i] & adj[j]):
            if k > j:
                out.append((i, j, k))
    return out


def all_triples(n_nodes: int) -> list[Triangle]:
    """Canonical list of all C(N,3) node triples."""
    return list(combinations(range(n_nodes), 3))


def save_complex(cx: OrientedComplex, path, extra: dict | None = None) -> None:
    """Write the complex as JSON; canonical order is preserved on round-trip."""
    doc = {
        "n_nodes": cx.n_nodes,
        "edges": [list(e) for e in cx.edges],
        "triangles": [list(t) for t in cx.triangles],
    }
    if extra:
        doc.update(extra)
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_complex(path) -> OrientedComplex:
    with open(path) as fh:
        doc = json.load(fh)
    return build_complex(doc["n_nodes"], doc["edges"], doc.get("triangles", []))
