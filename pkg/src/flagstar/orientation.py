"""Coherent orientations of pseudomanifolds and orientation signs of maps.

A coherent orientation assigns each facet a sign so that the two facets on
every ridge induce opposite orientations on it.  The canonical orientation
seeds +1 at the lexicographically least facet of each strongly connected
piece, making every derived sign deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from collections import deque

import numpy as np

from .complexes import SimplicialComplex, link_facets
from .errors import NonOrientableError, NotPseudomanifoldError

Mapping = dict[int, int]


@dataclass
class Orientation:
    """Facet signs aligned with K.facets rows."""
    signs: np.ndarray

    def flipped(self) -> "Orientation":
        return Orientation(-self.signs)


@dataclass
class LinkIso:
    """A vertex bijection between two vertex links.

    `bijection` maps source-complex vertex ids (the neighbours of
    `source_vertex`) onto target-complex vertex ids.
    """
    source: SimplicialComplex
    source_vertex: int
    target: SimplicialComplex
    target_vertex: int
    bijection: Mapping
    orientation_sign: int | None = field(default=None)


def _facet_adjacency(facets: np.ndarray):
    """Pairs of facets sharing a ridge, with the dropped-column positions."""
    m, width = facets.shape
    ridges = np.concatenate([np.delete(facets, i, axis=1) for i in range(width)])
    owner = np.tile(np.arange(m, dtype=np.int64), width)
    dropped = np.repeat(np.arange(width, dtype=np.int64), m)
    order = np.lexsort(ridges.T[::-1])
    ridges, owner, dropped = ridges[order], owner[order], dropped[order]
    fresh = np.ones(ridges.shape[0], dtype=bool)
    fresh[1:] = (ridges[1:] != ridges[:-1]).any(axis=1)
    starts = np.where(fresh)[0]
    ends = np.append(starts[1:], ridges.shape[0])
    if ((ends - starts) != 2).any():
        raise NotPseudomanifoldError(
            "some ridge is not contained in exactly two facets")
    a, b = starts, starts + 1
    return owner[a], dropped[a], owner[b], dropped[b]


def coherent_orientation(K: SimplicialComplex) -> Orientation:
    """Canonical coherent orientation of a closed pseudomanifold.

    Raises NotPseudomanifoldError / NonOrientableError.  With sorted facet
    rows, coherence across a shared ridge reads sign(G) = -sign(F) *
    (-1)^(posF + posG) where pos* are the dropped-column positions.
    """
    facets = K.facets
    m = facets.shape[0]
    if facets.shape[1] < 2:
        raise NotPseudomanifoldError("orientation needs dimension >= 1")
    fa, pa, fb, pb = _facet_adjacency(facets)
    neigh: list[list[tuple[int, int]]] = [[] for _ in range(m)]
    for i in range(fa.size):
        rel = -1 if (pa[i] + pb[i]) % 2 == 0 else 1
        neigh[fa[i]].append((int(fb[i]), rel))
        neigh[fb[i]].append((int(fa[i]), rel))

    signs = np.zeros(m, dtype=np.int8)
    for seed in range(m):
        if signs[seed]:
            continue
        signs[seed] = 1
        queue = deque([seed])
        while queue:
            f = queue.popleft()
            for g, rel in neigh[f]:
                want = rel * signs[f]
                if signs[g] == 0:
                    signs[g] = want
                    queue.append(g)
                elif signs[g] != want:
                    raise NonOrientableError(
                        "coherence propagation reached a contradiction")
    return Orientation(signs.astype(np.int64))


def is_coherent(K: SimplicialComplex, signs: np.ndarray) -> bool:
    """Check a sign assignment for coherence (test helper)."""
    try:
        fa, pa, fb, pb = _facet_adjacency(K.facets)
    except NotPseudomanifoldError:
        return False
    rel = np.where((pa + pb) % 2 == 0, -1, 1)
    return bool((signs[fb] == rel * signs[fa]).all())


def _perm_parity(values: list[int]) -> int:
    """Sign of the permutation sorting `values` (+1 even, -1 odd)."""
    seen = [False] * len(values)
    order = sorted(range(len(values)), key=lambda i: values[i])
    rank = {order[i]: i for i in range(len(order))}
    parity = 1
    for start in range(len(values)):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = True
            i = rank[i]
            length += 1
        if length % 2 == 0:
            parity = -parity
    return parity


def _row_lookup(facets: np.ndarray) -> dict[tuple[int, ...], int]:
    return {tuple(row): i for i, row in enumerate(facets.tolist())}


def automorphism_sign(K: SimplicialComplex, mapping: np.ndarray) -> int:
    """Degree of a simplicial automorphism w.r.t. the coherent orientation."""
    orient = coherent_orientation(K)
    facets = K.facets
    lookup = _row_lookup(facets)
    row = facets[0].tolist()
    image = [int(mapping[v]) for v in row]
    parity = _perm_parity(image)
    target = lookup[tuple(sorted(image))]
    return int(orient.signs[0] * parity * orient.signs[target])


def _induced_link_orientation(K: SimplicialComplex, v: int,
                              ambient: Orientation) -> dict[tuple[int, ...], int]:
    """Orientation induced on lk_v by the ambient orientation: the link facet
    sigma inherits sign(sigma u {v}) * (-1)^(position of v in the sorted facet)."""
    facets = K.facets
    lookup = _row_lookup(facets)
    out: dict[tuple[int, ...], int] = {}
    for row in link_facets(K, v).tolist():
        full = tuple(sorted(row + [v]))
        pos = full.index(v)
        s = int(ambient.signs[lookup[full]]) * (-1) ** pos
        out[tuple(row)] = s
    return out


def iso_sign(iso: LinkIso) -> int:
    """+1 / -1 for an orientation preserving / reversing link isomorphism.

    Both links receive the orientation induced by their ambient complex's
    canonical coherent orientation, so within one complex (e.g. the 600-cell
    mirror) the sign is independent of the global sign convention.  Between
    two different complexes it is deterministic but depends on each side's
    canonical seed.
    """
    amb_src = coherent_orientation(iso.source)
    amb_tgt = (amb_src if iso.target is iso.source
               else coherent_orientation(iso.target))
    src = _induced_link_orientation(iso.source, iso.source_vertex, amb_src)
    tgt = _induced_link_orientation(iso.target, iso.target_vertex, amb_tgt)

    sign = 0
    for face, s in src.items():
        image = [iso.bijection[v] for v in face]
        parity = _perm_parity(image)
        t = tgt[tuple(sorted(image))]
        this = s * parity * t
        if sign == 0:
            sign = this
        elif sign != this:
            raise NonOrientableError(
                "bijection is not compatible with any orientation pair")
    return sign
