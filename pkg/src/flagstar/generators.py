"""Seed complexes: cycles, spheres, the icosahedron and the 600-cell boundary.

The 600-cell is built from its 120 unit-quaternion vertices in exact
arithmetic over Z[phi] (coordinates scaled by 2 so that every entry is
a + b*phi with integer a, b).  Edges are pairs at the minimal nonzero squared
distance, an exact equality test; facets are the 4-cliques of that graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations, product

import numpy as np

from .complexes import SimplicialComplex
from .errors import ParameterOutOfRangeError


# -- exact arithmetic in Z[phi], phi^2 = phi + 1 ----------------------------

Zphi = tuple[int, int]  # (a, b) means a + b*phi


def _zp_sub(x: Zphi, y: Zphi) -> Zphi:
    return (x[0] - y[0], x[1] - y[1])


def _zp_add(x: Zphi, y: Zphi) -> Zphi:
    return (x[0] + y[0], x[1] + y[1])


def _zp_square(x: Zphi) -> Zphi:
    a, b = x
    return (a * a + b * b, 2 * a * b + b * b)


def _zp_neg(x: Zphi) -> Zphi:
    return (-x[0], -x[1])


def _zp_sign(x: Zphi) -> int:
    """Exact sign of a + b*phi (phi irrational, so zero only at (0, 0))."""
    a, b = x
    A, B = 2 * a + b, b  # 2(a + b*phi) = A + B*sqrt(5)
    if A == 0 and B == 0:
        return 0
    if A >= 0 and B >= 0:
        return 1
    if A <= 0 and B <= 0:
        return -1
    if A > 0:  # B < 0
        return 1 if A * A > 5 * B * B else -1
    return 1 if A * A < 5 * B * B else -1


def _zp_lt(x: Zphi, y: Zphi) -> bool:
    return _zp_sign(_zp_sub(x, y)) < 0


def _sq_dist(p: tuple[Zphi, ...], q: tuple[Zphi, ...]) -> Zphi:
    total: Zphi = (0, 0)
    for a, b in zip(p, q):
        total = _zp_add(total, _zp_square(_zp_sub(a, b)))
    return total


def _min_distance_graph(points: list[tuple[Zphi, ...]]) -> list[tuple[int, int]]:
    """Edges between points at the minimal nonzero squared distance."""
    n = len(points)
    best: Zphi | None = None
    dists: dict[tuple[int, int], Zphi] = {}
    for i in range(n):
        for j in range(i + 1, n):
            d = _sq_dist(points[i], points[j])
            if _zp_sign(d) == 0:
                continue
            dists[(i, j)] = d
            if best is None or _zp_lt(d, best):
                best = d
    return [e for e, d in dists.items() if d == best]


def _cliques_of_size(n: int, edges: list[tuple[int, int]], size: int
                     ) -> list[tuple[int, ...]]:
    adj = [set() for _ in range(n)]
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    level = [tuple(e) for e in edges]
    for t in range(3, size + 1):
        nxt = []
        for clique in level:
            common = adj[clique[0]]
            for x in clique[1:]:
                common = common & adj[x]
            for w in sorted(common):
                if w > clique[-1]:
                    nxt.append(clique + (w,))
        level = nxt
    return level


@dataclass
class NamedAutomorphism:
    """A vertex bijection of a generated complex, known to be an automorphism."""
    name: str
    mapping: np.ndarray

    def fixed_points(self) -> np.ndarray:
        return np.where(self.mapping == np.arange(self.mapping.size))[0]


# -- small standard complexes ------------------------------------------------

def cycle(n: int) -> SimplicialComplex:
    if n < 3:
        raise ParameterOutOfRangeError("cycle needs n >= 3")
    return SimplicialComplex.from_facets(
        [(i, (i + 1) % n) for i in range(n)])


def simplex_boundary(d: int) -> SimplicialComplex:
    """Boundary of the d-simplex: d+1 vertices, all d-subsets as facets."""
    if d < 1:
        raise ParameterOutOfRangeError("simplex_boundary needs d >= 1")
    return SimplicialComplex.from_facets(
        list(combinations(range(d + 1), d)))


def cross_polytope_boundary(d: int) -> SimplicialComplex:
    """Boundary of the d-dimensional cross polytope; antipodal pairs (i, i+d)."""
    if d < 1:
        raise ParameterOutOfRangeError("cross_polytope_boundary needs d >= 1")
    facets = [tuple(sorted(i + d * s for i, s in enumerate(signs)))
              for signs in product((0, 1), repeat=d)]
    return SimplicialComplex.from_facets(facets)


def suspension(K: SimplicialComplex) -> SimplicialComplex:
    """Join with two non-adjacent apexes."""
    a, b = K.n_vertices, K.n_vertices + 1
    facets = []
    for arr in K.facet_groups.values():
        for row in arr.tolist():
            facets.append(tuple(row) + (a,))
            facets.append(tuple(row) + (b,))
    labels = K.labels + ("apex0", "apex1")
    return SimplicialComplex.from_maximal_faces(facets, labels)


# -- icosahedron --------------------------------------------------------------

def _ico_points() -> list[tuple[Zphi, ...]]:
    one, phi = (1, 0), (0, 1)
    zero = (0, 0)
    pts = []
    for template in ((zero, one, phi), (one, phi, zero), (phi, zero, one)):
        i, j = (k for k, t in enumerate(template) if t != zero)
        for si, sj in product((1, -1), repeat=2):
            p = list(template)
            p[i] = p[i] if si == 1 else _zp_neg(p[i])
            p[j] = p[j] if sj == 1 else _zp_neg(p[j])
            pts.append(tuple(p))
    return pts


def icosahedron() -> SimplicialComplex:
    """The 12-vertex fns triangulation of the 2-sphere."""
    pts = _ico_points()
    edges = _min_distance_graph(pts)
    faces = _cliques_of_size(12, edges, 3)
    assert len(edges) == 30 and len(faces) == 20
    return SimplicialComplex.from_facets(faces)


# -- 600-cell boundary ---------------------------------------------------------

def _cell600_points() -> list[tuple[Zphi, ...]]:
    zero, one, two = (0, 0), (1, 0), (2, 0)
    phi, inv_phi = (0, 1), (-1, 1)  # 1/phi = phi - 1
    pts: list[tuple[Zphi, ...]] = []
    # 8 permutations of (+-2, 0, 0, 0)
    for i in range(4):
        for s in (1, -1):
            p = [zero] * 4
            p[i] = two if s == 1 else _zp_neg(two)
            pts.append(tuple(p))
    # 16 points (+-1, +-1, +-1, +-1)
    for signs in product((1, -1), repeat=4):
        pts.append(tuple(one if s == 1 else _zp_neg(one) for s in signs))
    # 96 even coordinate permutations of (+-phi, +-1, +-(phi-1), 0)
    base = (phi, one, inv_phi, zero)
    even_perms = [p for p in permutations(range(4)) if _parity(p) == 0]
    for perm in even_perms:
        arranged = tuple(base[perm[i]] for i in range(4))
        nonzero = [i for i in range(4) if arranged[i] != zero]
        for signs in product((1, -1), repeat=3):
            p = list(arranged)
            for i, s in zip(nonzero, signs):
                if s == -1:
                    p[i] = _zp_neg(p[i])
            pts.append(tuple(p))
    assert len(pts) == 120 and len(set(pts)) == 120
    return pts


def _parity(perm) -> int:
    inv = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm))
              if perm[i] > perm[j])
    return inv % 2


def cell600_boundary() -> tuple[SimplicialComplex, NamedAutomorphism]:
    """Boundary complex of the 600-cell plus its last-coordinate mirror map."""
    pts = _cell600_points()
    edges = _min_distance_graph(pts)
    tets = _cliques_of_size(120, edges, 4)
    assert len(edges) == 720 and len(tets) == 600
    K = SimplicialComplex.from_facets(tets)

    index = {p: i for i, p in enumerate(pts)}
    mapping = np.array(
        [index[(p[0], p[1], p[2], _zp_neg(p[3]))] for p in pts],
        dtype=np.int64)
    return K, NamedAutomorphism("mirror", mapping)
