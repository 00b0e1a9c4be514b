"""Facet-listed simplicial complexes.

A complex stores its maximal faces grouped by cardinality (pure complexes
have a single group), vertex labels carrying provenance through surgeries,
and lazily-built derived data: the 1-skeleton graph, the triangle set and
per-dimension face counts.  Instances are immutable; all operations return
new values.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    EmptyInputError,
    NonPureError,
    UnknownVertexError,
)
from .graphs import SkeletonGraph


class DisjointSet:
    """Array-backed union-find."""

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True

    def groups(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for i in range(len(self.parent)):
            out.setdefault(self.find(i), []).append(i)
        return out


def _canonical_rows(rows: np.ndarray) -> np.ndarray:
    """Sort each row, then lexsort rows and drop duplicates."""
    rows = np.sort(rows, axis=1)
    if rows.shape[0] == 0:
        return rows
    order = np.lexsort(rows.T[::-1])
    rows = rows[order]
    keep = np.ones(rows.shape[0], dtype=bool)
    keep[1:] = (rows[1:] != rows[:-1]).any(axis=1)
    return rows[keep]


class SimplicialComplex:
    """A complex given by its maximal faces.

    `groups` maps facet cardinality -> (m, cardinality) int32 array with
    sorted rows.  Vertex ids are dense 0..n-1; `labels[i]` is the provenance
    string of vertex i.
    """

    def __init__(self, groups: dict[int, np.ndarray], labels: tuple[str, ...]):
        self._groups = {k: np.ascontiguousarray(v, dtype=np.int32)
                        for k, v in sorted(groups.items())}
        for arr in self._groups.values():
            arr.setflags(write=False)
        self.labels = tuple(labels)

    # -- construction -----------------------------------------------------

    @classmethod
    def from_facets(cls, facet_list: Iterable[Sequence[int]],
                    labels: Sequence[str] | None = None) -> "SimplicialComplex":
        """Canonical pure complex from facet tuples.

        Non-contiguous ids are compacted (default labels keep the original
        ids as strings).  Mixed facet sizes raise NonPureError; use
        `from_maximal_faces` for non-pure inputs.
        """
        facets = [tuple(f) for f in facet_list]
        if not facets:
            raise EmptyInputError("no facets given")
        sizes = {len(f) for f in facets}
        if len(sizes) != 1:
            raise NonPureError(f"facet sizes differ: {sorted(sizes)}")
        (size,) = sizes
        if size == 0:
            raise EmptyInputError("empty facet tuple")
        for f in facets:
            if len(set(f)) != len(f):
                raise NonPureError(f"repeated vertex in facet {f}")
        return cls.from_maximal_faces(facets, labels)

    @classmethod
    def from_maximal_faces(cls, faces: Iterable[Sequence[int]],
                           labels: Sequence[str] | None = None) -> "SimplicialComplex":
        """Like `from_facets` but accepts faces of mixed cardinality.

        Faces contained in another face are dropped, so the result is a
        legitimate (possibly non-pure) facet list.
        """
        raw = sorted({tuple(sorted(f)) for f in faces if len(f) > 0})
        if not raw:
            raise EmptyInputError("no faces given")
        for f in raw:
            if len(set(f)) != len(f):
                raise NonPureError(f"repeated vertex in facet {f}")
        # drop faces contained in a larger one
        by_size: dict[int, set[tuple[int, ...]]] = {}
        for f in raw:
            by_size.setdefault(len(f), set()).add(f)
        sizes = sorted(by_size, reverse=True)
        kept: dict[int, set[tuple[int, ...]]] = {sizes[0]: by_size[sizes[0]]}
        for s in sizes[1:]:
            surviving = {f for f in by_size[s] if not _contained_in_any(f, kept)}
            if surviving:
                kept[s] = surviving
        used = sorted({v for group in kept.values() for f in group for v in f})
        rank = {v: i for i, v in enumerate(used)}
        if labels is None:
            labels = tuple(str(v) for v in used)
        else:
            labels = tuple(labels)
            if len(labels) != len(used):
                raise UnknownVertexError(
                    f"{len(labels)} labels for {len(used)} vertices")
        groups = {}
        for s, group in kept.items():
            arr = np.array([[rank[v] for v in f] for f in sorted(group)],
                           dtype=np.int32)
            groups[s] = _canonical_rows(arr)
        return cls(groups, labels)

    @classmethod
    def _raw(cls, facets: np.ndarray, labels: Sequence[str]) -> "SimplicialComplex":
        """Fast path for internally-built pure complexes (already canonical
        ids 0..n-1, rows sorted)."""
        return cls({facets.shape[1]: _canonical_rows(facets)}, tuple(labels))

    # -- basic queries ----------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.labels)

    @property
    def dim(self) -> int:
        return max(self._groups) - 1

    @property
    def is_pure(self) -> bool:
        return len(self._groups) == 1

    @property
    def facets(self) -> np.ndarray:
        """The (m, dim+1) facet array; requires a pure complex."""
        if not self.is_pure:
            raise NonPureError("complex is not pure")
        return next(iter(self._groups.values()))

    @property
    def facet_groups(self) -> dict[int, np.ndarray]:
        return self._groups

    def facet_list(self) -> list[tuple[int, ...]]:
        out: list[tuple[int, ...]] = []
        for arr in self._groups.values():
            out.extend(map(tuple, arr.tolist()))
        return sorted(out, key=lambda f: (len(f), f))

    @property
    def facet_count(self) -> int:
        return sum(arr.shape[0] for arr in self._groups.values())

    @cached_property
    def label_index(self) -> dict[str, int]:
        return {lbl: i for i, lbl in enumerate(self.labels)}

    def vertex_by_label(self, label: str) -> int:
        try:
            return self.label_index[label]
        except KeyError:
            raise UnknownVertexError(f"no vertex labelled {label!r}") from None

    def _check_vertex(self, v: int) -> None:
        if not (0 <= v < self.n_vertices):
            raise UnknownVertexError(f"vertex {v} outside 0..{self.n_vertices - 1}")

    @cached_property
    def graph(self) -> SkeletonGraph:
        """The 1-skeleton."""
        pieces = []
        for size, arr in self._groups.items():
            if size == 1:
                continue
            for i, j in combinations(range(size), 2):
                pieces.append(np.column_stack([arr[:, i], arr[:, j]]))
        if pieces:
            edges = np.concatenate(pieces)
        else:
            edges = np.empty((0, 2), dtype=np.int32)
        return SkeletonGraph.from_edges(self.n_vertices, edges)

    @cached_property
    def triangles(self) -> np.ndarray:
        """Unique 3-element faces, rows sorted and lexsorted."""
        return self.faces_of_size(3)

    def faces_of_size(self, k: int) -> np.ndarray:
        """All k-element faces as a unique (m, k) array."""
        pieces = []
        for size, arr in self._groups.items():
            if size < k:
                continue
            for cols in combinations(range(size), k):
                pieces.append(arr[:, cols])
        if not pieces:
            return np.empty((0, k), dtype=np.int32)
        return _canonical_rows(np.concatenate(pieces))

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        if self.labels != other.labels:
            return False
        if set(self._groups) != set(other._groups):
            return False
        return all(np.array_equal(self._groups[k], other._groups[k])
                   for k in self._groups)

    def __repr__(self) -> str:
        return (f"SimplicialComplex(dim={self.dim}, vertices={self.n_vertices}, "
                f"facets={self.facet_count})")


def _contained_in_any(face: tuple[int, ...],
                      kept: dict[int, set[tuple[int, ...]]]) -> bool:
    fset = set(face)
    for s, group in kept.items():
        if s <= len(face):
            continue
        for g in group:
            if fset.issubset(g):
                return True
    return False


# -- spec operations -------------------------------------------------------

def from_facets(facet_list: Iterable[Sequence[int]],
                labels: Sequence[str] | None = None) -> SimplicialComplex:
    return SimplicialComplex.from_facets(facet_list, labels)


def f_vector(K: SimplicialComplex) -> tuple[int, ...]:
    """(f_0, ..., f_dim) by face enumeration."""
    return tuple(K.faces_of_size(k).shape[0] for k in range(1, K.dim + 2))


def euler_characteristic(K: SimplicialComplex) -> int:
    f = f_vector(K)
    return sum((-1) ** i * fi for i, fi in enumerate(f))


def link_vertex_set(K: SimplicialComplex, v: int) -> np.ndarray:
    K._check_vertex(v)
    return K.graph.neighbors(v)


def link_facets(K: SimplicialComplex, v: int) -> np.ndarray:
    """Maximal faces of lk_v in K's vertex ids (pure complexes)."""
    K._check_vertex(v)
    facets = K.facets
    rows = facets[(facets == v).any(axis=1)]
    out = np.empty((rows.shape[0], rows.shape[1] - 1), dtype=np.int32)
    for i, row in enumerate(rows):
        out[i] = row[row != v]
    return _canonical_rows(out)


def link(K: SimplicialComplex, v: int) -> SimplicialComplex:
    """lk_v(K) = {sigma : sigma u {v} in K, v not in sigma}, labels kept."""
    K._check_vertex(v)
    faces = []
    for arr in K.facet_groups.values():
        rows = arr[(arr == v).any(axis=1)]
        for row in rows:
            faces.append(tuple(int(x) for x in row if x != v))
    faces = [f for f in faces if f]
    if not faces:
        raise UnknownVertexError(f"vertex {v} has an empty link")
    used = sorted({x for f in faces for x in f})
    return SimplicialComplex.from_maximal_faces(
        faces, labels=[K.labels[u] for u in used])


def antistar(K: SimplicialComplex, v: int) -> SimplicialComplex:
    """Ast_v(K): all faces of K not containing v."""
    K._check_vertex(v)
    faces: list[tuple[int, ...]] = []
    for arr in K.facet_groups.values():
        has_v = (arr == v).any(axis=1)
        faces.extend(map(tuple, arr[~has_v].tolist()))
        for row in arr[has_v]:
            face = tuple(int(x) for x in row if x != v)
            if face:
                faces.append(face)
    used = sorted({x for f in faces for x in f})
    return SimplicialComplex.from_maximal_faces(
        faces, labels=[K.labels[u] for u in used])


def induced(K: SimplicialComplex, S: Iterable[int]) -> SimplicialComplex:
    """Induced subcomplex on vertex set S."""
    S = set(S)
    for v in S:
        K._check_vertex(v)
    faces = []
    for arr in K.facet_groups.values():
        for row in arr.tolist():
            face = tuple(x for x in row if x in S)
            if face:
                faces.append(face)
    if not faces:
        raise EmptyInputError("induced subcomplex is empty")
    used = sorted({x for f in faces for x in f})
    return SimplicialComplex.from_maximal_faces(
        faces, labels=[K.labels[u] for u in used])


def relabel(K: SimplicialComplex, perm: Sequence[int]) -> SimplicialComplex:
    """Bijective rename of vertex ids: new id of old vertex i is perm[i].
    Labels travel with their vertices."""
    perm = np.asarray(perm, dtype=np.int32)
    if perm.shape != (K.n_vertices,) or set(perm.tolist()) != set(range(K.n_vertices)):
        raise UnknownVertexError("perm is not a bijection on the vertex ids")
    labels = [""] * K.n_vertices
    for old, new in enumerate(perm.tolist()):
        labels[new] = K.labels[old]
    groups = {k: _canonical_rows(perm[arr]) for k, arr in K.facet_groups.items()}
    return SimplicialComplex(groups, tuple(labels))


def disjoint_union(K: SimplicialComplex, L: SimplicialComplex) -> SimplicialComplex:
    """Union with L's vertex ids shifted above K's."""
    shift = K.n_vertices
    groups: dict[int, np.ndarray] = {}
    for k in set(K.facet_groups) | set(L.facet_groups):
        parts = []
        if k in K.facet_groups:
            parts.append(K.facet_groups[k])
        if k in L.facet_groups:
            parts.append(L.facet_groups[k] + shift)
        groups[k] = _canonical_rows(np.concatenate(parts))
    return SimplicialComplex(groups, K.labels + L.labels)


@dataclass
class PseudomanifoldReport:
    """Report-style validation flags (None = not evaluated)."""
    pure: bool
    ridges_ok: bool | None = None
    connected: bool | None = None
    links_connected: bool | None = None
    link_spheres: bool | None = None
    detail: str = ""

    @property
    def is_closed_pseudomanifold(self) -> bool:
        return bool(self.pure and self.ridges_ok and self.connected
                    and self.links_connected)


def _ridge_counts(facets: np.ndarray) -> np.ndarray:
    """Multiplicity of each ridge ((dim)-subset of a facet) across facets."""
    d1 = facets.shape[1]
    ridges = np.concatenate([np.delete(facets, i, axis=1) for i in range(d1)])
    order = np.lexsort(ridges.T[::-1])
    ridges = ridges[order]
    fresh = np.ones(ridges.shape[0], dtype=bool)
    fresh[1:] = (ridges[1:] != ridges[:-1]).any(axis=1)
    starts = np.where(fresh)[0]
    return np.diff(np.append(starts, ridges.shape[0]))


def validate_closed_pseudomanifold(K: SimplicialComplex,
                                   check_link_spheres: bool = False
                                   ) -> PseudomanifoldReport:
    """Closed-pseudomanifold report: purity, every ridge in exactly two
    facets, connectivity, connected vertex links.

    `check_link_spheres` adds the decidable part of link-sphere recognition:
    each vertex link closed, with the Euler characteristic of a sphere of its
    dimension (full recognition for dim <= 2 links; chi + closedness only for
    dim-3 links).
    """
    if not K.is_pure:
        return PseudomanifoldReport(pure=False, detail="mixed facet sizes")
    facets = K.facets
    if facets.shape[1] == 1:
        return PseudomanifoldReport(pure=True, ridges_ok=False,
                                    detail="dimension 0")
    counts = _ridge_counts(facets)
    ridges_ok = bool((counts == 2).all())
    connected = K.graph.is_connected()

    links_connected = True
    for v in range(K.n_vertices):
        lf = link_facets(K, v)
        verts = np.unique(lf)
        pos = {int(x): i for i, x in enumerate(verts)}
        dsu = DisjointSet(len(verts))
        for row in lf.tolist():
            for a, b in zip(row, row[1:]):
                dsu.union(pos[a], pos[b])
        if len({dsu.find(i) for i in range(len(verts))}) > 1:
            links_connected = False
            break

    link_spheres: bool | None = None
    if check_link_spheres and ridges_ok:
        link_spheres = True
        sphere_chi = 2 if K.dim % 2 == 1 else 0  # links have dim K.dim-1
        for v in range(K.n_vertices):
            lk = link(K, v)
            rep = validate_closed_pseudomanifold(lk)
            if not rep.is_closed_pseudomanifold or \
                    euler_characteristic(lk) != sphere_chi:
                link_spheres = False
                break

    return PseudomanifoldReport(pure=True, ridges_ok=ridges_ok,
                                connected=connected,
                                links_connected=links_connected,
                                link_spheres=link_spheres)
