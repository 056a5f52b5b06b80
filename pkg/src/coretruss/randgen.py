"""Seeded null-model generators: Erdos-Renyi, erased configuration, BTER.

Randomness comes from ``numpy.random.Generator(PCG64(seed))``. Draw order:

* ER: one ``choice(n*(n-1)/2, m, replace=False)`` over pair ranks.
* configuration: one ``permutation`` of the stub array
  (``np.repeat(arange(n), degrees)``); consecutive stubs are paired.
* BTER: for each affinity block in construction order, one
  ``binomial(pairs, p)`` followed by one ``choice(pairs, count,
  replace=False)``; then one ``permutation`` of the residual stub array.

Pair ranks enumerate ``(i, j)``, ``j < i``, as ``i*(i-1)/2 + j``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .decomposition import triangle_supports
from .graph import Graph

__all__ = [
    "GeneratorSpec",
    "bter_blocks",
    "degree_tv_distance",
    "extract_reference_stats",
    "generate",
    "generate_bter",
    "generate_config",
    "generate_er",
]

MODELS = ("er", "config", "bter")


@dataclass
class GeneratorSpec:
    model: str
    seed: int = 0
    n: int | None = None
    m: int | None = None
    degree_sequence: Sequence[int] | None = None
    ccd: Mapping[int, float] = field(default_factory=dict)

    def validate(self):
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.model == "er":
            if self.n is None or self.m is None:
                raise ValueError("er requires n and m")
            if self.n < 0 or self.m < 0:
                raise ValueError("n and m must be nonnegative")
            if self.m > self.n * (self.n - 1) // 2:
                raise ValueError(f"m={self.m} exceeds n(n-1)/2 for n={self.n}")
            return
        if self.degree_sequence is None:
            raise ValueError(f"{self.model} requires a degree sequence")
        d = np.asarray(self.degree_sequence, dtype=np.int64)
        if np.any(d < 0):
            raise ValueError("degrees must be nonnegative")
        if self.model == "config" and int(d.sum()) % 2:
            raise ValueError("degree sum must be even")
        if self.model == "bter":
            if len(d) == 0:
                raise ValueError("degree sequence is empty")
            for deg, c in self.ccd.items():
                if not 0.0 <= c <= 1.0:
                    raise ValueError(f"ccd({deg})={c} outside [0, 1]")


def _rng(seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed)))


def _unrank_pairs(ranks: np.ndarray) -> np.ndarray:
    """Map pair ranks to ``(j, i)`` with ``j < i``."""
    k = np.asarray(ranks, dtype=np.int64)
    i = ((1 + np.sqrt(1 + 8 * k.astype(np.float64))) / 2).astype(np.int64)
    # float sqrt can be off by one for large ranks
    i = np.where(i * (i - 1) // 2 > k, i - 1, i)
    i = np.where((i + 1) * i // 2 <= k, i + 1, i)
    j = k - i * (i - 1) // 2
    return np.column_stack([j, i])


def extract_reference_stats(g: Graph) -> tuple[np.ndarray, dict[int, float]]:
    """Degree sequence and mean local clustering coefficient per degree (d >= 2)."""
    deg = g.degrees.astype(np.int64)
    tri = np.zeros(g.num_vertices, dtype=np.int64)
    if g.num_edges:
        sup = triangle_supports(g)
        np.add.at(tri, g.edges[:, 0], sup)
        np.add.at(tri, g.edges[:, 1], sup)
        tri //= 2
    ccd: dict[int, float] = {}
    mask = deg >= 2
    if mask.any():
        d = deg[mask]
        local = 2.0 * tri[mask] / (d * (d - 1))
        vals, inv = np.unique(d, return_inverse=True)
        sums = np.bincount(inv, weights=local)
        counts = np.bincount(inv)
        ccd = {int(v): float(s / c) for v, s, c in zip(vals, sums, counts)}
    return deg, ccd


def generate_er(n: int, m: int, seed: int = 0) -> Graph:
    """Uniform graph with exactly ``n`` vertices and ``m`` edges."""
    GeneratorSpec("er", seed, n=n, m=m).validate()
    total = n * (n - 1) // 2
    rng = _rng(seed)
    ranks = rng.choice(total, size=m, replace=False) if m else np.zeros(0, dtype=np.int64)
    return Graph(n, _unrank_pairs(ranks))


def generate_config(degree_sequence: Sequence[int], seed: int = 0) -> Graph:
    """Erased configuration model: random stub matching, loops and multi-edges dropped."""
    d = np.asarray(degree_sequence, dtype=np.int64)
    GeneratorSpec("config", seed, degree_sequence=d).validate()
    rng = _rng(seed)
    stubs = rng.permutation(np.repeat(np.arange(len(d)), d))
    return Graph(len(d), stubs.reshape(-1, 2))


def bter_blocks(degree_sequence: Sequence[int]) -> list[np.ndarray]:
    """Affinity blocks: vertices with degree >= 2 taken in ascending degree
    order (ties by id), each block sized one more than its first member's degree."""
    d = np.asarray(degree_sequence, dtype=np.int64)
    order = np.argsort(d, kind="stable")
    order = order[d[order] >= 2]
    blocks = []
    i = 0
    while i < len(order):
        size = int(d[order[i]]) + 1
        blocks.append(order[i:i + size])
        i += size
    return blocks


def generate_bter(degree_sequence: Sequence[int], ccd: Mapping[int, float],
                  seed: int = 0) -> Graph:
    """Two-phase BTER graph.

    Phase 1 draws an ER graph inside every affinity block with density
    ``ccd(d_min) ** (1/3)``. Phase 2 pairs the degree left over after
    phase 1 by uniform stub matching. Loops and duplicates are erased, so
    no vertex exceeds its target degree.
    """
    d = np.asarray(degree_sequence, dtype=np.int64)
    spec = GeneratorSpec("bter", seed, degree_sequence=d, ccd=dict(ccd))
    spec.validate()
    n = len(d)
    rng = _rng(seed)

    inner = []
    for block in bter_blocks(d):
        dmin = int(d[block[0]])
        p = float(ccd.get(dmin, 0.0)) ** (1.0 / 3.0)
        pairs = len(block) * (len(block) - 1) // 2
        cnt = int(rng.binomial(pairs, p)) if pairs else 0
        if cnt:
            local = _unrank_pairs(rng.choice(pairs, size=cnt, replace=False))
            inner.append(block[local])
    inner_edges = np.concatenate(inner) if inner else np.zeros((0, 2), dtype=np.int64)

    used = np.bincount(inner_edges.ravel(), minlength=n)
    residual = d - used
    if residual.sum() % 2:
        # drop one stub from the highest-degree vertex that still has one
        cand = np.flatnonzero(residual > 0)
        residual[cand[np.lexsort((cand, d[cand]))[-1]]] -= 1
    stubs = rng.permutation(np.repeat(np.arange(n), residual))
    outer = stubs.reshape(-1, 2)
    # outer pairs duplicating inner edges are erased by Graph
    return Graph(n, np.concatenate([inner_edges, outer]))


def generate(spec: GeneratorSpec) -> Graph:
    spec.validate()
    if spec.model == "er":
        return generate_er(spec.n, spec.m, spec.seed)
    if spec.model == "config":
        return generate_config(spec.degree_sequence, spec.seed)
    return generate_bter(spec.degree_sequence, spec.ccd, spec.seed)


def degree_tv_distance(target: Sequence[int], generated: Sequence[int]) -> float:
    """Total variation distance between two degree distributions."""
    a = np.bincount(np.asarray(target, dtype=np.int64))
    b = np.bincount(np.asarray(generated, dtype=np.int64))
    size = max(len(a), len(b))
    pa = np.pad(a, (0, size - len(a))) / max(a.sum(), 1)
    pb = np.pad(b, (0, size - len(b))) / max(b.sum(), 1)
    return 0.5 * float(np.abs(pa - pb).sum())
