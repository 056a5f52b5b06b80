"""Simple undirected graph stored in CSR form, plus edge-list I/O."""
from __future__ import annotations

import gzip
import io
import os
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

__all__ = [
    "EdgeListParseError",
    "Graph",
    "GraphValidationError",
    "load_edge_list",
    "read_canonical",
    "subgraph_induced_by_edges",
    "validate_graph",
    "write_edge_list",
]


class EdgeListParseError(ValueError):
    """Raised for malformed edge-list input."""

    def __init__(self, message, lineno=None, source=None):
        self.lineno = lineno
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if lineno is not None:
            where += f"{lineno}: "
        elif where:
            where += " "
        super().__init__(where + message)


class GraphValidationError(ValueError):
    pass


def _frozen(a):
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


class Graph:
    """Immutable simple undirected graph with contiguous vertex ids.

    Edges are identified by their index into :attr:`edges`, the array of
    canonical ``(u, v)`` pairs with ``u < v`` sorted lexicographically.
    ``indptr``/``indices`` is the sorted CSR adjacency and ``adj_edge_ids``
    maps each adjacency slot to the id of the corresponding edge.
    """

    __slots__ = ("indptr", "indices", "adj_edge_ids", "edges", "labels", "_label_index")

    def __init__(self, num_vertices: int, edges, labels: Sequence[Hashable] | None = None):
        n = int(num_vertices)
        if n < 0:
            raise ValueError("num_vertices must be nonnegative")
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if e.size and (e.min() < 0 or e.max() >= n):
            raise ValueError("edge endpoint out of range")
        # canonicalise: drop loops, orient u < v, dedupe, sort
        e = e[e[:, 0] != e[:, 1]]
        e = np.sort(e, axis=1)
        if len(e):
            e = np.unique(e, axis=0)
        m = len(e)

        src = np.concatenate([e[:, 0], e[:, 1]])
        dst = np.concatenate([e[:, 1], e[:, 0]])
        eid = np.concatenate([np.arange(m), np.arange(m)])
        order = np.lexsort((dst, src))
        deg = np.bincount(src, minlength=n) if m else np.zeros(n, dtype=np.int64)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(deg, out=indptr[1:])

        self.indptr = _frozen(indptr)
        self.indices = _frozen(dst[order].astype(np.int64))
        self.adj_edge_ids = _frozen(eid[order].astype(np.int64))
        self.edges = _frozen(e)
        if labels is None:
            labels = list(range(n))
        elif len(labels) != n:
            raise ValueError("labels must have one entry per vertex")
        self.labels = tuple(labels)
        self._label_index = None

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[Hashable, Hashable]]) -> "Graph":
        """Build a graph from arbitrary hashable endpoint labels (first-appearance ids)."""
        index: dict = {}
        pairs = []
        for a, b in edges:
            ia = index.setdefault(a, len(index))
            ib = index.setdefault(b, len(index))
            pairs.append((ia, ib))
        return cls(len(index), pairs, list(index))

    @property
    def num_vertices(self) -> int:
        return len(self.indptr) - 1

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, u: int) -> np.ndarray:
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    def incident_edges(self, u: int) -> np.ndarray:
        return self.adj_edge_ids[self.indptr[u]:self.indptr[u + 1]]

    @property
    def adjacency(self) -> list[np.ndarray]:
        return [self.neighbors(u) for u in range(self.num_vertices)]

    def edge_id(self, u: int, v: int) -> int:
        """Id of edge ``{u, v}``; ``KeyError`` if absent."""
        nb = self.neighbors(u)
        i = int(np.searchsorted(nb, v))
        if i == len(nb) or nb[i] != v:
            raise KeyError((u, v))
        return int(self.adj_edge_ids[self.indptr[u] + i])

    def has_edge(self, u: int, v: int) -> bool:
        try:
            self.edge_id(u, v)
        except KeyError:
            return False
        return True

    @property
    def label_map(self) -> dict:
        """External label -> internal id."""
        if self._label_index is None:
            self._label_index = {lab: i for i, lab in enumerate(self.labels)}
        return self._label_index

    def vertex_of(self, label) -> int:
        return self.label_map[label]

    def edge_set(self) -> set[tuple[int, int]]:
        return {(int(u), int(v)) for u, v in self.edges}

    def labelled_edge_set(self) -> set[frozenset]:
        lab = self.labels
        return {frozenset((lab[u], lab[v])) for u, v in self.edges}

    def __repr__(self):
        return f"Graph(num_vertices={self.num_vertices}, num_edges={self.num_edges})"


def validate_graph(g: Graph) -> None:
    """Check the structural invariants; raise :class:`GraphValidationError` on failure."""
    n, m = g.num_vertices, g.num_edges
    deg = g.degrees
    if deg.sum() != 2 * m:
        raise GraphValidationError("degree sum is not 2|E|")
    owner = np.repeat(np.arange(n), deg)
    nb = g.indices
    if np.any(nb == owner):
        raise GraphValidationError("self-loop present")
    # strictly increasing within each row
    same_row = owner[1:] == owner[:-1]
    if np.any(nb[1:][same_row] <= nb[:-1][same_row]):
        raise GraphValidationError("adjacency not strictly increasing")
    fwd = np.column_stack([owner, nb])
    back = np.column_stack([nb, owner])
    if not np.array_equal(fwd[np.lexsort((fwd[:, 1], fwd[:, 0]))],
                          back[np.lexsort((back[:, 1], back[:, 0]))]):
        raise GraphValidationError("adjacency is not symmetric")
    if m and not np.all(g.edges[:, 0] < g.edges[:, 1]):
        raise GraphValidationError("edge not canonical")
    if len(g.labels) != n or len(set(g.labels)) != n:
        raise GraphValidationError("label map is not a bijection")


def _open_text(source):
    """Return (iterable of str lines, display name, closer)."""
    if isinstance(source, (str, os.PathLike)):
        path = os.fspath(source)
        if path.endswith(".gz"):
            fh = gzip.open(path, "rt", encoding="utf-8", errors="replace")
        else:
            fh = open(path, "r", encoding="utf-8", errors="replace")
        return fh, path, fh.close
    if isinstance(source, (bytes, bytearray)):
        return io.StringIO(source.decode("utf-8", errors="replace")), None, lambda: None
    if isinstance(source, io.TextIOBase):
        return source, getattr(source, "name", None), lambda: None
    if hasattr(source, "read"):
        return io.TextIOWrapper(source, encoding="utf-8", errors="replace"), None, lambda: None
    # any iterable of lines
    return iter(source), None, lambda: None


def load_edge_list(source, comment_prefix: str | tuple[str, ...] = "#",
                   delimiter: str | None = None, extra_columns: str = "error") -> Graph:
    """Parse a whitespace (or ``delimiter``) separated edge list.

    ``source`` may be a path (``.gz`` is decompressed), a binary or text
    stream, raw bytes, or an iterable of lines. Self-loops are dropped
    (their endpoint is still kept as a vertex), duplicates and reversed
    duplicates are merged and labels are numbered in order of first
    appearance. ``extra_columns="ignore"`` keeps the first two tokens of
    longer lines (weights, timestamps) instead of raising.
    """
    if extra_columns not in ("error", "ignore"):
        raise ValueError("extra_columns must be 'error' or 'ignore'")
    lenient = extra_columns == "ignore"
    lines, name, close = _open_text(source)
    index: dict[str, int] = {}
    us: list[int] = []
    vs: list[int] = []
    seen_any = False
    try:
        for lineno, raw in enumerate(lines, 1):
            if isinstance(raw, bytes):
                raw = raw.decode("utf-8", errors="replace")
            line = raw.strip()
            if not line or (comment_prefix and line.startswith(comment_prefix)):
                continue
            toks = line.split(delimiter)
            if delimiter is not None:
                toks = [t.strip() for t in toks]
            if lenient and len(toks) > 2:
                toks = toks[:2]
            if len(toks) != 2 or not toks[0] or not toks[1]:
                raise EdgeListParseError(
                    f"expected 2 tokens, got {len(toks)}: {line[:60]!r}", lineno, name)
            a, b = toks
            ia = index.get(a)
            if ia is None:
                ia = index[a] = len(index)
            ib = index.get(b)
            if ib is None:
                ib = index[b] = len(index)
            us.append(ia)
            vs.append(ib)
            seen_any = True
    finally:
        close()
    if not seen_any:
        raise EdgeListParseError("no edges", None, name)
    edges = np.column_stack([np.asarray(us, dtype=np.int64), np.asarray(vs, dtype=np.int64)])
    return Graph(len(index), edges, list(index))


def write_edge_list(g: Graph, out, label_out=None) -> None:
    """Write ``u v`` internal-id lines (u < v, sorted) and optionally the label sidecar."""
    def _emit(fh):
        for u, v in g.edges:
            fh.write(f"{u} {v}\n")

    if isinstance(out, (str, os.PathLike)):
        with open(out, "w", encoding="utf-8") as fh:
            _emit(fh)
    else:
        _emit(out)
    if label_out is not None:
        write_label_map(g, label_out)


def write_label_map(g: Graph, out) -> None:
    def _emit(fh):
        for i, lab in enumerate(g.labels):
            fh.write(f"{i}\t{lab}\n")

    if isinstance(out, (str, os.PathLike)):
        with open(out, "w", encoding="utf-8") as fh:
            _emit(fh)
    else:
        _emit(out)


def read_canonical(edge_source, label_source) -> Graph:
    """Reload a graph written by :func:`write_edge_list`, preserving internal ids."""
    lines, name, close = _open_text(label_source)
    labels: dict[int, str] = {}
    try:
        for lineno, raw in enumerate(lines, 1):
            raw = raw.rstrip("\r\n")
            if not raw:
                continue
            parts = raw.split("\t", 1)
            if len(parts) != 2:
                raise EdgeListParseError("expected id<TAB>label", lineno, name)
            labels[int(parts[0])] = parts[1]
    finally:
        close()
    n = len(labels)
    if sorted(labels) != list(range(n)):
        raise EdgeListParseError("label ids are not contiguous", None, name)

    lines, name, close = _open_text(edge_source)
    pairs = []
    try:
        for lineno, raw in enumerate(lines, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            toks = line.split()
            if len(toks) != 2:
                raise EdgeListParseError("expected 2 tokens", lineno, name)
            pairs.append((int(toks[0]), int(toks[1])))
    finally:
        close()
    return Graph(n, pairs, [labels[i] for i in range(n)])


def subgraph_induced_by_edges(g: Graph, keep: Callable[[int, int], bool] | np.ndarray) -> Graph:
    """Graph made of the kept edges and their endpoints.

    ``keep`` is either a boolean mask over edge ids or a predicate called
    with the canonical ``(u, v)`` pair. Surviving vertices keep their
    relative order and their external labels.
    """
    if callable(keep):
        mask = np.fromiter((bool(keep(int(u), int(v))) for u, v in g.edges),
                           dtype=bool, count=g.num_edges)
    else:
        mask = np.asarray(keep, dtype=bool)
        if mask.shape != (g.num_edges,):
            raise ValueError("mask must have one entry per edge")
    kept = g.edges[mask]
    verts = np.unique(kept)
    remap = np.full(g.num_vertices, -1, dtype=np.int64)
    remap[verts] = np.arange(len(verts))
    return Graph(len(verts), remap[kept], [g.labels[v] for v in verts])
