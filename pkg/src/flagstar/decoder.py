"""Recovering the permutation from the bare 1-skeleton of an encoder output.

The procedure follows the construction's reconstruction argument: find a
diametric pair, walk a shortest path that avoids handle-junction vertices,
read off the junction runs (classified through BFS-sphere cluster structure),
take run middles as u_1, v_1, ..., u_k, v_k and match u_i to v_j through the
short-through-the-handle distances.

Cluster grouping runs one multi-source labelled BFS per probe: growing BFS
regions from all sphere vertices at once discovers, for every pair of
single-linkage groups, the exact minimal pairwise distance (the contact-graph
minimum-spanning structure realises all set distances), so one probe costs a
couple of truncated sweeps instead of |sphere| full BFS runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field, asdict
from enum import Enum

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .complexes import DisjointSet, SimplicialComplex
from .errors import NoSeparationError, StructureNotRecognizedError
from .graphs import SkeletonGraph, UNREACHED, diameter


class VertexClass(str, Enum):
    JUNCTION = "junction_vertex"
    HANDLE = "handle_junction_vertex"
    OTHER = "other"


@dataclass
class DecoderThresholds:
    """All decision constants of the decoder; every field is overridable.

    The classmethod `paper_defaults` instantiates the construction's values
    (valid once the base-block diameter is large, d >= 77); `calibrate`
    measures replacements at desk scale.  After calibration nonmatch_dist >
    match_dist must hold, mirroring the d >= 77 regime where 8(d-2) > 7d+51.
    """
    ball_radius: int
    intra_cluster: int
    inter_cluster: int
    small_component: int
    match_dist: int
    nonmatch_dist: int

    @classmethod
    def paper_defaults(cls, d: int, base_vertices: int) -> "DecoderThresholds":
        return cls(
            ball_radius=-(-3 * d // 2),
            intra_cluster=d + 18,
            inter_cluster=-(-3 * d // 2) - 20,
            small_component=2 * base_vertices,
            match_dist=7 * d + 51,
            nonmatch_dist=8 * d - 16,
        )

    @property
    def separating(self) -> bool:
        return (self.nonmatch_dist > self.match_dist
                and self.inter_cluster > self.intra_cluster)


@dataclass
class DecodeReport:
    sigma: tuple[int, ...]
    endpoints: tuple[int, int]
    junction_runs: list[tuple[int, int, int]]  # (path start, path end, middle vertex)
    cluster_gap_stats: dict[str, int | None]
    match_distances: dict[str, int]
    classification: dict[int, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["classification"] = {str(k): v for k, v in self.classification.items()}
        return out


def sphere(g: SkeletonGraph, x: int, r: int) -> np.ndarray:
    """Vertices at graph distance exactly r from x."""
    dist = g.bfs(x, cap=r)
    return np.where(dist == r)[0]


def ball(g: SkeletonGraph, x: int, r: int) -> np.ndarray:
    """Vertices at graph distance at most r from x."""
    dist = g.bfs(x, cap=r)
    return np.where(dist >= 0)[0]


def _contact_merges(g: SkeletonGraph, seeds: np.ndarray, r_bfs: int
                    ) -> tuple[list[tuple[int, int, int]], np.ndarray]:
    """Single-linkage merge events among `seeds` from one labelled BFS.

    Returns (merges, dist): merges is the ascending list of (weight, i, j)
    union events over seed indices (the contact-graph Kruskal run, which by
    the Voronoi-contact property yields the exact single-linkage dendrogram
    up to distance 2*r_bfs+1).
    """
    n = g.n
    dist = np.full(n, UNREACHED, dtype=np.int32)
    owner = np.full(n, -1, dtype=np.int32)
    dist[seeds] = 0
    owner[seeds] = np.arange(seeds.size, dtype=np.int32)
    frontier = seeds.astype(np.int64)
    d = 0
    while frontier.size and d < r_bfs:
        nxt = g._expand(frontier)
        owners = np.repeat(owner[frontier],
                           g.indptr[frontier + 1] - g.indptr[frontier])
        freshmask = dist[nxt] == UNREACHED
        nxt, owners = nxt[freshmask], owners[freshmask]
        if nxt.size == 0:
            break
        nxt, first = np.unique(nxt, return_index=True)
        d += 1
        dist[nxt] = d
        owner[nxt] = owners[first]
        frontier = nxt.astype(np.int64)

    visited = np.where(dist >= 0)[0]
    rows = np.repeat(visited, (g.indptr[visited + 1] - g.indptr[visited]))
    cols = g._expand(visited)
    keep = dist[cols] >= 0
    rows, cols = rows[keep], cols[keep]
    diff = owner[rows] != owner[cols]
    rows, cols = rows[diff], cols[diff]
    weights = dist[rows].astype(np.int64) + dist[cols] + 1
    oa, ob = owner[rows], owner[cols]

    order = np.argsort(weights, kind="stable")
    dsu = DisjointSet(seeds.size)
    merges: list[tuple[int, int, int]] = []
    for idx in order.tolist():
        a, b = int(oa[idx]), int(ob[idx])
        if dsu.union(a, b):
            merges.append((int(weights[idx]), a, b))
    return merges, dist


def cluster_partition(g: SkeletonGraph, sigma: np.ndarray,
                      thr: DecoderThresholds
                      ) -> tuple[list[np.ndarray], dict[str, int | None]] | None:
    """Single-linkage grouping of the sphere at the intra threshold.

    Returns the partition iff exactly three groups result and every
    cross-group distance is at least the inter threshold, else None.  The
    stats dict carries the largest merge used (max intra evidence) and the
    smallest distance between distinct groups (min inter evidence).
    """
    if sigma.size == 0:
        return None
    r_bfs = thr.inter_cluster // 2 + 1
    merges, _ = _contact_merges(g, sigma, r_bfs)
    dsu = DisjointSet(sigma.size)
    used_max = None
    cross_min = None
    for w, a, b in merges:
        if w <= thr.intra_cluster:
            dsu.union(a, b)
            used_max = w if used_max is None else max(used_max, w)
        else:
            cross_min = w if cross_min is None else min(cross_min, w)
    groups = dsu.groups()
    if len(groups) != 3:
        return None
    if cross_min is not None and cross_min < thr.inter_cluster:
        return None
    clusters = [sigma[np.array(members)] for members in groups.values()]
    stats = {"max_intra": used_max, "min_inter": cross_min}
    return clusters, stats


class _Prober:
    """Caches per-graph arrays for repeated classification probes."""

    def __init__(self, g: SkeletonGraph, thr: DecoderThresholds):
        self.g = g
        self.thr = thr
        self.rows = g._row_of_entry()
        self.cache: dict[int, VertexClass] = {}
        self.gap_stats: dict[str, int | None] = {"max_intra": None, "min_inter": None}

    def classify(self, x: int) -> VertexClass:
        if x in self.cache:
            return self.cache[x]
        thr = self.thr
        dist = self.g.bfs(x, cap=thr.ball_radius)
        sig = np.where(dist == thr.ball_radius)[0]
        part = cluster_partition(self.g, sig, thr)
        if part is None:
            out = VertexClass.OTHER
        else:
            _, stats = part
            self._fold_stats(stats)
            ball_mask = dist >= 0
            out = (VertexClass.HANDLE if self._small_component_cut(ball_mask)
                   else VertexClass.JUNCTION)
        self.cache[x] = out
        return out

    def _fold_stats(self, stats):
        mi, ci = stats["max_intra"], stats["min_inter"]
        if mi is not None:
            prev = self.gap_stats["max_intra"]
            self.gap_stats["max_intra"] = mi if prev is None else max(prev, mi)
        if ci is not None:
            prev = self.gap_stats["min_inter"]
            self.gap_stats["min_inter"] = ci if prev is None else min(prev, ci)

    def _small_component_cut(self, ball_mask: np.ndarray) -> bool:
        """True iff removing the ball disconnects the graph with exactly one
        component of size at most the small-component bound."""
        g = self.g
        keep = ~ball_mask
        emask = keep[self.rows] & keep[g.indices]
        idx = g.indices[emask]
        counts = np.bincount(self.rows[emask], minlength=g.n)
        indptr = np.concatenate(([0], np.cumsum(counts)))
        mat = sparse.csr_matrix(
            (np.ones(idx.size, dtype=np.int8), idx, indptr), shape=(g.n, g.n))
        _, labels = csgraph.connected_components(mat, directed=False)
        sizes = np.bincount(labels[keep])
        sizes = sizes[sizes > 0]
        if sizes.size < 2:
            return False
        return int((sizes <= self.thr.small_component).sum()) == 1


def classify_vertex(g: SkeletonGraph, x: int,
                    thr: DecoderThresholds) -> VertexClass:
    """junction_vertex / handle_junction_vertex / other for one probe."""
    return _Prober(g, thr).classify(x)


def _junction_runs(flags: list[bool]) -> list[tuple[int, int]]:
    runs = []
    i = 0
    while i < len(flags):
        if flags[i]:
            j = i
            while j + 1 < len(flags) and flags[j + 1]:
                j += 1
            runs.append((i, j))
            i = j + 1
        else:
            i += 1
    return runs


def recover_permutation(g: SkeletonGraph, thr: DecoderThresholds,
                        k: int) -> DecodeReport:
    """Full Step-3 recovery from an unlabelled 1-skeleton.

    (a) diametric endpoints, oriented so the start lies on the long-row side
    (farther from the nearest junction run); (b) shortest path avoiding
    handle-junction vertices, found by re-running BFS with the
    handle-classified vertices removed until the path is clean; (c) junction
    runs along the path, alternately labelled u_i, v_i by their middles;
    (d) sigma(i) = j for the unique j != i with d(u_i, v_j) within the match
    threshold, else sigma(i) = i.
    """
    _, (s, e) = diameter(g)
    prober = _Prober(g, thr)
    blocked = np.zeros(g.n, dtype=bool)

    path = None
    for _ in range(4 * k + 8):
        path = g.shortest_path(s, e, blocked=blocked)
        if path is None:
            raise StructureNotRecognizedError(
                "endpoints disconnected after removing handle junctions")
        handle_hits = [v for v in path
                       if prober.classify(v) is VertexClass.HANDLE]
        if not handle_hits:
            break
        blocked[handle_hits] = True
    else:
        raise StructureNotRecognizedError("handle excision did not converge")

    flags = [prober.classify(v) is VertexClass.JUNCTION for v in path]
    runs = _junction_runs(flags)
    if len(runs) != 2 * k:
        raise StructureNotRecognizedError(
            f"expected {2 * k} junction runs along the path, found {len(runs)}")

    # orient: the first run must be farther from its endpoint than the last
    gap_start = runs[0][0]
    gap_end = (len(path) - 1) - runs[-1][1]
    if gap_start < gap_end:
        path = path[::-1]
        last = len(path) - 1
        runs = [(last - b, last - a) for a, b in reversed(runs)]
        s, e = e, s

    middles = [path[(a + b) // 2] for a, b in runs]
    u = middles[0::2]
    v = middles[1::2]

    sigma = []
    match_distances: dict[str, int] = {}
    for i in range(k):
        dist = g.bfs(u[i], cap=thr.match_dist)
        close = []
        for j in range(k):
            dj = int(dist[v[j]])
            if dj >= 0:
                match_distances[f"d(u{i + 1},v{j + 1})"] = dj
            if j != i and 0 <= dj <= thr.match_dist:
                close.append(j)
        if len(close) > 1:
            raise StructureNotRecognizedError(
                f"ambiguous match for u_{i + 1}: {[c + 1 for c in close]}")
        sigma.append(close[0] + 1 if close else i + 1)

    if sorted(sigma) != list(range(1, k + 1)):
        raise StructureNotRecognizedError(f"recovered map {sigma} is not a bijection")

    return DecodeReport(
        sigma=tuple(sigma),
        endpoints=(int(s), int(e)),
        junction_runs=[(a, b, int(path[(a + b) // 2])) for a, b in runs],
        cluster_gap_stats=prober.gap_stats,
        match_distances=match_distances,
        classification={int(x): c.value for x, c in prober.cache.items()},
    )


def decode_complex(K: SimplicialComplex, thr: DecoderThresholds,
                   k: int) -> DecodeReport:
    return recover_permutation(K.graph, thr, k)


def calibrate(K: SimplicialComplex, ground_truth) -> DecoderThresholds:
    """Measure separating thresholds on an encode output with ground truth.

    Cluster thresholds come from the single-linkage dendrogram at each
    ground-truth junction centre: the largest merge needed to reach three
    groups (intra evidence) against the smallest merge that would fuse them
    further (inter evidence).  Match thresholds compare the through-handle
    distances d(jt_i, jb_sigma(i)) against all off-pair distances.  Raises
    NoSeparationError, reporting the overlapping ranges, when the instance
    is too small to separate.
    """
    g = K.graph
    gt = ground_truth
    d = gt.d
    ball_radius = -(-3 * d // 2)

    worst_t3 = None
    best_t2 = None
    centers = list(gt.jt_centers) + list(gt.jb_centers) + list(gt.h_centers)
    for c in centers:
        sig = sphere(g, c, ball_radius)
        if sig.size < 3:
            raise NoSeparationError(f"sphere around {c} has {sig.size} vertices")
        merges, _ = _contact_merges(g, sig, ball_radius + 1)
        if len(merges) < sig.size - 2:
            raise NoSeparationError(f"sphere around {c} has over 2 far groups")
        t3 = merges[sig.size - 4][0] if sig.size >= 4 else 0
        t2 = merges[sig.size - 3][0]
        worst_t3 = t3 if worst_t3 is None else max(worst_t3, t3)
        best_t2 = t2 if best_t2 is None else min(best_t2, t2)
    if worst_t3 >= best_t2:
        raise NoSeparationError(
            f"cluster ranges overlap: max intra {worst_t3} >= min inter {best_t2}")
    intra = (worst_t3 + best_t2) // 2
    inter = intra + 1

    k = gt.k
    d_match = 0
    d_non = None
    for i in range(k):
        dist = g.bfs(gt.jt_centers[i])
        j_match = gt.sigma[i] - 1
        d_match = max(d_match, int(dist[gt.jb_centers[j_match]]))
        for j in range(k):
            if j in (i, j_match):
                continue
            val = int(dist[gt.jb_centers[j]])
            d_non = val if d_non is None else min(d_non, val)
    if d_non is None:
        match = d_match + d
        nonmatch = max(8 * d - 16, match + 1)
    else:
        if d_non <= d_match:
            raise NoSeparationError(
                f"match range overlaps: max match {d_match} >= min non-match {d_non}")
        match = (d_match + d_non) // 2
        nonmatch = match + 1

    return DecoderThresholds(
        ball_radius=ball_radius,
        intra_cluster=intra,
        inter_cluster=inter,
        small_component=2 * gt.base_vertices,
        match_dist=match,
        nonmatch_dist=nonmatch,
    )
