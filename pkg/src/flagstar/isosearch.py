"""Combinatorial isomorphism search for small complexes.

Degree-refinement backtracking: vertices are coloured by iterated
Wasserman-Leman-style refinement of (colour, sorted neighbour colours),
then a backtracking search maps refinement classes across, pruning on
adjacency.  Candidate maps are verified against the full facet sets, so the
output bijections are complex isomorphisms, not merely graph isomorphisms.
"""

from __future__ import annotations

import numpy as np

from .complexes import SimplicialComplex
from .errors import SizeLimitError

DEFAULT_SIZE_LIMIT = 512


def _refine(adj: list[list[int]], colors: list[int]) -> list[int]:
    while True:
        keys = [(colors[v], tuple(sorted(colors[w] for w in adj[v])))
                for v in range(len(adj))]
        palette = {k: i for i, k in enumerate(sorted(set(keys)))}
        new = [palette[k] for k in keys]
        if new == colors:
            return colors
        colors = new


def iso_search(A: SimplicialComplex, B: SimplicialComplex,
               limit: int = 1,
               size_limit: int = DEFAULT_SIZE_LIMIT) -> list[np.ndarray]:
    """Up to `limit` vertex bijections A -> B inducing complex isomorphisms.

    Returns an empty list when A and B are non-isomorphic.  Intended for
    links and other small complexes; inputs above `size_limit` vertices
    raise SizeLimitError.
    """
    if max(A.n_vertices, B.n_vertices) > size_limit:
        raise SizeLimitError(
            f"iso_search limited to {size_limit} vertices")
    if A.n_vertices != B.n_vertices or A.dim != B.dim:
        return []
    if sorted(arr.shape for arr in A.facet_groups.values()) != \
            sorted(arr.shape for arr in B.facet_groups.values()):
        return []
    n = A.n_vertices
    adj_a = [A.graph.neighbors(v).tolist() for v in range(n)]
    adj_b = [B.graph.neighbors(v).tolist() for v in range(n)]
    col_a = _refine(adj_a, [len(x) for x in adj_a])
    col_b = _refine(adj_b, [len(x) for x in adj_b])
    if sorted(col_a) != sorted(col_b):
        return []

    by_color_b: dict[int, list[int]] = {}
    for v, c in enumerate(col_b):
        by_color_b.setdefault(c, []).append(v)

    # map vertices in order of ascending colour-class size, then id
    class_size = {c: len(vs) for c, vs in by_color_b.items()}
    order = sorted(range(n), key=lambda v: (class_size[col_a[v]], v))

    set_b = [set(x) for x in adj_b]
    results: list[np.ndarray] = []
    mapping = np.full(n, -1, dtype=np.int64)
    used = np.zeros(n, dtype=bool)

    facets_b = {tuple(row) for arr in B.facet_groups.values()
                for row in arr.tolist()}

    def facets_match(m: np.ndarray) -> bool:
        for arr in A.facet_groups.values():
            for row in m[arr]:
                if tuple(sorted(row.tolist())) not in facets_b:
                    return False
        return True

    def backtrack(i: int) -> bool:
        if i == n:
            if facets_match(mapping):
                results.append(mapping.copy())
            return len(results) >= limit
        v = order[i]
        mapped_images = [int(mapping[w]) for w in adj_a[v] if mapping[w] >= 0]
        for cand in by_color_b[col_a[v]]:
            if used[cand]:
                continue
            # mapped neighbours of v must land on neighbours of cand, and no
            # other already-used vertex may be adjacent to cand
            if any(img not in set_b[cand] for img in mapped_images):
                continue
            if sum(1 for x in set_b[cand] if used[x]) != len(mapped_images):
                continue
            mapping[v] = cand
            used[cand] = True
            if backtrack(i + 1):
                return True
            mapping[v] = -1
            used[cand] = False
        return False

    backtrack(0)
    return results


def are_isomorphic(A: SimplicialComplex, B: SimplicialComplex) -> bool:
    return bool(iso_search(A, B, limit=1))
