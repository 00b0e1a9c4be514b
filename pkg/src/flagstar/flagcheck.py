"""Flagness, induced-square detection and k-largeness.

The square scan is the hot loop on encoder outputs (~10^5 vertices), so it
works blockwise over numpy wedge arrays; blocks can be fanned out to worker
threads.  The witness returned is the lexicographically least one regardless
of worker count or schedule.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from math import inf

import numpy as np

from .complexes import SimplicialComplex
from .errors import SizeLimitError

_BLOCK = 4096


def worker_count(workers: int | None = None) -> int:
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("FLAGSTAR_WORKERS")
    return max(1, int(env)) if env else 1


@dataclass
class LargenessReport:
    is_flag: bool
    max_k: int | float
    witness: tuple[int, ...] | None
    witness_kind: str | None = None  # "clique" | "cycle"

    @property
    def is_fns(self) -> bool:
        return self.is_flag and self.max_k >= 5


def _pack(rows: np.ndarray, n: int) -> np.ndarray:
    """Pack sorted id-rows into single int64 keys for fast membership."""
    keys = rows[:, 0].astype(np.int64)
    for j in range(1, rows.shape[1]):
        keys = keys * n + rows[:, j]
    return keys


def is_flag(K: SimplicialComplex, workers: int | None = None
            ) -> tuple[bool, tuple[int, ...] | None]:
    """True iff every clique of the 1-skeleton is a face.

    Checks cliques level by level, extending face cliques by common
    neighbours; the witness is an inclusion-minimal non-face clique
    (lexicographically least among the smallest).
    """
    g = K.graph
    n = K.n_vertices
    adj = g.adjacency_sets()
    dim = K.dim

    # level 3: every graph triangle must be a face
    triangles = []
    for v in range(n):
        nbv = [w for w in g.neighbors(v).tolist() if w > v]
        for i, a in enumerate(nbv):
            sa = adj[a]
            for b in nbv[i + 1:]:
                if b in sa:
                    triangles.append((v, a, b))
    level = np.array(triangles, dtype=np.int32).reshape(-1, 3)
    for t in range(3, dim + 3):
        if level.shape[0] == 0:
            return True, None
        if t > dim + 1:
            # any clique of this size exceeds the facet size
            bad = level
        else:
            faces = K.faces_of_size(t)
            keys = _pack(level, n)
            face_keys = _pack(faces, n) if faces.size else np.empty(0, np.int64)
            member = np.isin(keys, face_keys)
            bad = level[~member]
        if bad.shape[0]:
            order = np.lexsort(bad.T[::-1])
            witness = tuple(int(x) for x in bad[order[0]])
            return False, witness
        # extend face cliques by common neighbours above the max vertex
        nxt = []
        for row in level.tolist():
            common = adj[row[0]]
            for x in row[1:]:
                common = common & adj[x]
            top = row[-1]
            for w in common:
                if w > top:
                    nxt.append(row + [w])
        level = np.array(nxt, dtype=np.int32).reshape(-1, t + 1)
    return True, None


def _square_key(a: int, c: int, b: int, d: int) -> tuple[int, int, int, int]:
    """Canonical key of the square with diagonals {a,c} and {b,d}."""
    d1 = (min(a, c), max(a, c))
    d2 = (min(b, d), max(b, d))
    if d2 < d1:
        d1, d2 = d2, d1
    return (*d1, *d2)


def _square_block(g, adj, edge_keys, n, lo, hi):
    """Scan middles in [lo, hi); return the least square key found or None."""
    pieces = []
    for m in range(lo, hi):
        nb = g.neighbors(m)
        k = nb.size
        if k < 2:
            continue
        ii, jj = np.triu_indices(k, 1)
        rows = np.empty((ii.size, 3), dtype=np.int64)
        rows[:, 0] = nb[ii]
        rows[:, 1] = nb[jj]
        rows[:, 2] = m
        pieces.append(rows)
    if not pieces:
        return None
    wedges = np.concatenate(pieces)
    # keep only non-adjacent (a, c) pairs
    keys = wedges[:, 0] * n + wedges[:, 1]
    pos = np.searchsorted(edge_keys, keys)
    pos[pos >= edge_keys.size] = 0
    adjacent = edge_keys[pos] == keys
    wedges = wedges[~adjacent]
    keys = keys[~adjacent]
    if wedges.size == 0:
        return None
    order = np.argsort(keys, kind="stable")
    wedges, keys = wedges[order], keys[order]
    fresh = np.ones(keys.size, dtype=bool)
    fresh[1:] = keys[1:] != keys[:-1]
    starts = np.where(fresh)[0]
    ends = np.append(starts[1:], keys.size)
    best = None
    for s, e in zip(starts.tolist(), ends.tolist()):
        if e - s < 2:
            continue
        a, c = int(wedges[s, 0]), int(wedges[s, 1])
        mids = wedges[s:e, 2].tolist()
        for i, b in enumerate(mids):
            ab = adj[b]
            for d in mids[i + 1:]:
                if d not in ab:
                    cand = _square_key(a, c, b, d)
                    if best is None or cand < best:
                        best = cand
                    break
            else:
                continue
            break
    return best


def has_induced_square(K: SimplicialComplex, workers: int | None = None
                       ) -> tuple[bool, tuple[int, ...] | None]:
    """Chordless 4-cycle detection.

    Scans non-adjacent vertex pairs {a, c} for two pairwise non-adjacent
    common neighbours; pairs are grouped from wedges (a, c, middle) per
    middle-vertex block.  Witness is (a, b, c, d) meaning edges ab, bc, cd,
    da with diagonals ac, bd absent, least key first.
    """
    g = K.graph
    n = K.n_vertices
    adj = g.adjacency_sets()
    edges = g.edges()
    both = np.concatenate([edges, edges[:, ::-1]])
    edge_keys = np.sort(both[:, 0].astype(np.int64) * n + both[:, 1])

    blocks = [(lo, min(lo + _BLOCK, n)) for lo in range(0, n, _BLOCK)]
    nw = worker_count(workers)
    if nw == 1 or len(blocks) == 1:
        results = [_square_block(g, adj, edge_keys, n, lo, hi)
                   for lo, hi in blocks]
    else:
        with ThreadPoolExecutor(max_workers=nw) as pool:
            futures = [pool.submit(_square_block, g, adj, edge_keys, n, lo, hi)
                       for lo, hi in blocks]
            results = [f.result() for f in futures]  # merged in block order
    found = [r for r in results if r is not None]
    if not found:
        return False, None
    a, c, b, d = min(found)
    witness = (a, b, c, d)
    assert _verify_square(adj, witness)
    return True, witness


def _verify_square(adj, w) -> bool:
    a, b, c, d = w
    sides = (b in adj[a]) and (c in adj[b]) and (d in adj[c]) and (a in adj[d])
    return sides and (c not in adj[a]) and (d not in adj[b])


def is_fns(K: SimplicialComplex, workers: int | None = None) -> bool:
    flag, _ = is_flag(K, workers)
    if not flag:
        return False
    square, _ = has_induced_square(K, workers)
    return not square


def shortest_induced_cycle(K: SimplicialComplex, cap: int = 8
                           ) -> tuple[int, tuple[int, ...]] | None:
    """Least-length induced cycle of length >= 4, or None if none <= cap.

    Enumerates induced paths with a canonical least-vertex start and
    direction (second vertex < last), so the result is deterministic.
    """
    g = K.graph
    n = K.n_vertices
    if n > 20000:
        raise SizeLimitError("induced-cycle search is for small complexes")
    adj = g.adjacency_sets()

    for length in range(4, cap + 1):
        for s in range(n):
            cycle = _cycle_from(s, length, adj)
            if cycle is not None:
                assert _verify_chordless(adj, cycle)
                return length, cycle
    return None


def _cycle_from(s: int, length: int, adj) -> tuple[int, ...] | None:
    """Induced cycle of exactly `length` through s with s minimal."""
    target = length - 1  # edges in the path before closing

    def extend(path: list[int], forbidden: set[int]):
        last = path[-1]
        if len(path) == target:
            for w in sorted(adj[last]):
                if w <= s or w in forbidden or w == path[1]:
                    continue
                if s in adj[w] and path[1] < w and not (adj[w] & set(path[1:-1])):
                    return path + [w]
            return None
        for w in sorted(adj[last]):
            if w <= s or w in forbidden:
                continue
            if adj[w] & set(path[:-1]):
                continue
            got = extend(path + [w], forbidden | {w})
            if got is not None:
                return got
        return None

    for x in sorted(adj[s]):
        if x <= s:
            continue
        got = extend([s, x], {s, x})
        if got is not None:
            return tuple(got)
    return None


def _verify_chordless(adj, cycle) -> bool:
    L = len(cycle)
    for i in range(L):
        for j in range(i + 1, L):
            expected = (j - i) % L in (1, L - 1)
            if ((cycle[j] in adj[cycle[i]]) != expected):
                return False
    return True


def k_largeness(K: SimplicialComplex, cap: int = 8,
                workers: int | None = None) -> LargenessReport:
    """Largest k (capped) such that K is k-large.

    k-largeness counts induced cycles of length >= 4 only; flagness covers
    the triangles.  A complete 1-skeleton has no induced cycles at all.
    """
    if cap < 4:
        raise SizeLimitError("cap must be at least 4")
    flag, clique_witness = is_flag(K, workers)
    if not flag:
        return LargenessReport(False, 0, clique_witness, "clique")
    found = shortest_induced_cycle(K, cap)
    if found is None:
        g = K.graph
        complete = g.edge_count == K.n_vertices * (K.n_vertices - 1) // 2
        return LargenessReport(True, inf if complete else cap, None, None)
    length, cycle = found
    return LargenessReport(True, length, cycle, "cycle")


# -- brute-force oracles (dual route for the pair scan / clique extension) --

BRUTE_FORCE_LIMIT = 48


def brute_force_has_induced_square(K: SimplicialComplex
                                   ) -> tuple[bool, tuple[int, ...] | None]:
    """Exhaustive 4-subset enumeration; complexes up to ~48 vertices."""
    n = K.n_vertices
    if n > BRUTE_FORCE_LIMIT:
        raise SizeLimitError(f"brute force limited to {BRUTE_FORCE_LIMIT} vertices")
    adj = K.graph.adjacency_sets()
    best = None
    for quad in combinations(range(n), 4):
        for a, b, c, d in _pairings(quad):
            if (b in adj[a] and c in adj[b] and d in adj[c] and a in adj[d]
                    and c not in adj[a] and d not in adj[b]):
                key = _square_key(a, c, b, d)
                if best is None or key < best:
                    best = key
    if best is None:
        return False, None
    a, c, b, d = best
    return True, (a, b, c, d)


def _pairings(quad):
    a, b, c, d = quad
    yield a, b, c, d  # diagonals ac, bd
    yield a, b, d, c  # diagonals ad, bc
    yield a, c, b, d  # diagonals ab, cd


def brute_force_is_flag(K: SimplicialComplex
                        ) -> tuple[bool, tuple[int, ...] | None]:
    """Exhaustive clique enumeration over all vertex subsets up to dim+2."""
    n = K.n_vertices
    if n > BRUTE_FORCE_LIMIT:
        raise SizeLimitError(f"brute force limited to {BRUTE_FORCE_LIMIT} vertices")
    adj = K.graph.adjacency_sets()
    faces = {tuple(row) for t in range(3, K.dim + 2)
             for row in K.faces_of_size(t).tolist()}
    for t in range(3, K.dim + 3):
        for sub in combinations(range(n), t):
            if all(b in adj[a] for a, b in combinations(sub, 2)):
                if t > K.dim + 1 or sub not in faces:
                    return False, sub
    return True, None
