"""Core and truss decompositions by bucket peeling.

Truss numbers count triangles: the edges of a lone triangle have truss
number 1 and every edge belongs to the 0-truss.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .graph import Graph

__all__ = [
    "CoreResult",
    "TrussResult",
    "core_decompose",
    "k_core_components",
    "k_truss_components",
    "triangle_supports",
    "truss_decompose",
]


@dataclass(frozen=True)
class CoreResult:
    core_numbers: np.ndarray
    core_degeneracy: int


@dataclass(frozen=True)
class TrussResult:
    truss_numbers: np.ndarray
    triangle_support: np.ndarray
    truss_degeneracy: int


@njit(cache=True)
def _bucket_init(val, maxval):
    # counting sort of ids by value; ties keep ascending id order
    n = len(val)
    start = np.zeros(maxval + 2, dtype=np.int64)
    for i in range(n):
        start[val[i] + 1] += 1
    for d in range(1, maxval + 2):
        start[d] += start[d - 1]
    order = np.empty(n, dtype=np.int64)
    pos = np.empty(n, dtype=np.int64)
    fill = start[:-1].copy()
    for i in range(n):
        p = fill[val[i]]
        order[p] = i
        pos[i] = p
        fill[val[i]] += 1
    return start[:-1].copy(), order, pos


@njit(cache=True)
def _bucket_decrement(x, val, bucket, order, pos):
    # move x to the front of its bucket, shrink the bucket by one
    d = val[x]
    px = pos[x]
    pw = bucket[d]
    w = order[pw]
    if w != x:
        order[px] = w
        pos[w] = px
        order[pw] = x
        pos[x] = pw
    bucket[d] += 1
    val[x] = d - 1


@njit(cache=True)
def _core_numbers(indptr, indices):
    n = len(indptr) - 1
    deg = np.empty(n, dtype=np.int64)
    md = 0
    for v in range(n):
        deg[v] = indptr[v + 1] - indptr[v]
        if deg[v] > md:
            md = deg[v]
    bucket, order, pos = _bucket_init(deg, md)
    for i in range(n):
        v = order[i]
        for j in range(indptr[v], indptr[v + 1]):
            u = indices[j]
            if deg[u] > deg[v]:
                _bucket_decrement(u, deg, bucket, order, pos)
    return deg


@njit(cache=True)
def _supports(indptr, indices, edges):
    m = len(edges)
    sup = np.zeros(m, dtype=np.int64)
    for e in range(m):
        u = edges[e, 0]
        v = edges[e, 1]
        i = indptr[u]
        iend = indptr[u + 1]
        j = indptr[v]
        jend = indptr[v + 1]
        c = 0
        while i < iend and j < jend:
            a = indices[i]
            b = indices[j]
            if a == b:
                c += 1
                i += 1
                j += 1
            elif a < b:
                i += 1
            else:
                j += 1
        sup[e] = c
    return sup


@njit(cache=True)
def _truss_numbers(indptr, indices, adj_eid, edges, sup0):
    m = len(edges)
    sup = sup0.copy()
    ms = 0
    for e in range(m):
        if sup[e] > ms:
            ms = sup[e]
    bucket, order, pos = _bucket_init(sup, ms)
    removed = np.zeros(m, dtype=np.bool_)
    for t in range(m):
        e = order[t]
        k = sup[e]
        u = edges[e, 0]
        v = edges[e, 1]
        i = indptr[u]
        iend = indptr[u + 1]
        j = indptr[v]
        jend = indptr[v + 1]
        while i < iend and j < jend:
            a = indices[i]
            b = indices[j]
            if a == b:
                e1 = adj_eid[i]
                e2 = adj_eid[j]
                if not removed[e1] and not removed[e2]:
                    if sup[e1] > k:
                        _bucket_decrement(e1, sup, bucket, order, pos)
                    if sup[e2] > k:
                        _bucket_decrement(e2, sup, bucket, order, pos)
                i += 1
                j += 1
            elif a < b:
                i += 1
            else:
                j += 1
        removed[e] = True
    return sup


def core_decompose(g: Graph) -> CoreResult:
    """Core number of every vertex (Batagelj-Zaversnik, O(|E|))."""
    if g.num_vertices == 0:
        return CoreResult(np.zeros(0, dtype=np.int64), 0)
    k = _core_numbers(g.indptr, g.indices)
    k.setflags(write=False)
    return CoreResult(k, int(k.max()))


def triangle_supports(g: Graph) -> np.ndarray:
    """Per-edge triangle count ``|N(u) & N(v)|``, indexed by edge id."""
    if g.num_edges == 0:
        return np.zeros(0, dtype=np.int64)
    return _supports(g.indptr, g.indices, g.edges)


def truss_decompose(g: Graph, support: np.ndarray | None = None) -> TrussResult:
    """Truss number of every edge by peeling minimum-support edges."""
    if g.num_edges == 0:
        z = np.zeros(0, dtype=np.int64)
        return TrussResult(z, z, 0)
    sup = triangle_supports(g) if support is None else np.asarray(support, dtype=np.int64)
    t = _truss_numbers(g.indptr, g.indices, g.adj_edge_ids, g.edges, sup)
    t.setflags(write=False)
    sup = sup.copy()
    sup.setflags(write=False)
    return TrussResult(t, sup, int(t.max()))


def _components(n, edges, vertex_mask):
    # components of the graph on masked vertices spanned by `edges`
    if len(edges):
        a = coo_matrix((np.ones(len(edges)), (edges[:, 0], edges[:, 1])), shape=(n, n))
    else:
        a = coo_matrix((n, n))
    _, lab = connected_components(a, directed=False)
    verts = np.flatnonzero(vertex_mask)
    groups: dict[int, list[int]] = {}
    for v in verts.tolist():
        groups.setdefault(int(lab[v]), []).append(v)
    return lab, sorted(groups.values(), key=lambda c: c[0])


def k_core_components(g: Graph, core: CoreResult, k: int) -> list[set[int]]:
    """Vertex sets of the connected components induced by ``K(u) >= k``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    keep = np.asarray(core.core_numbers) >= k
    e = g.edges
    e = e[keep[e[:, 0]] & keep[e[:, 1]]] if len(e) else e
    _, comps = _components(g.num_vertices, e, keep)
    return [set(c) for c in comps]


def k_truss_components(g: Graph, truss: TrussResult, k: int) -> list[set[tuple[int, int]]]:
    """Edge sets of the components formed by edges with ``T >= k``.

    Components are joined through shared vertices.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    emask = np.asarray(truss.truss_numbers) >= k
    e = g.edges[emask]
    vmask = np.zeros(g.num_vertices, dtype=bool)
    vmask[e.ravel()] = True
    lab, _ = _components(g.num_vertices, e, vmask)
    groups: dict[int, set[tuple[int, int]]] = {}
    for u, v in e.tolist():
        groups.setdefault(int(lab[u]), set()).add((u, v))
    return sorted(groups.values(), key=min)
