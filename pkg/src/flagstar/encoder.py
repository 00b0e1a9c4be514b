"""Permutation encoding: base blocks, rows, the E and H blocks, and T_sigma.

Everything is assembled from copies of one base block (a row of 600-cell
boundaries) glued by star connected sums.  Gluings between same-role sites of
two copies use the identity map on like-named link vertices (the crucial
choice that pins down row diameters); gluings between different roles use a
canonical link isomorphism computed once on the base block.

Distinguished vertices are tracked as ports (glueable: u, v, w, t, b) and
marks (probe points such as the junction centre m) and are remapped through
every surgery.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .complexes import SimplicialComplex, euler_characteristic, link
from .errors import (
    DistanceAssertionFailedError,
    ParameterOutOfRangeError,
    RoleLinkNotFoundError,
    TargetUnreachableError,
)
from .generators import cell600_boundary, icosahedron
from .graphs import diameter
from .isosearch import iso_search
from .surgery import star_connected_sum, star_handle


@dataclass
class Port:
    """A glueable distinguished vertex.

    The labels of its link vertices are `prefix` + (base link label of
    `base_role`), which is what makes identity and canonical gluing maps
    reconstructible at any nesting depth.
    """
    vertex: int
    base_role: str
    prefix: str


@dataclass
class BaseInfo:
    """Shared data of the base building block (one level of the hierarchy)."""
    complex: SimplicialComplex
    roles: dict[str, int]                  # role name -> vertex id
    d: int                                 # measured diameter
    link_diameter: int                     # L: diameter of any glue link
    _link_labels: dict[str, list[str]] = field(default_factory=dict)
    _psi: dict[tuple[str, str], dict[str, str]] = field(default_factory=dict)

    def link_labels(self, role: str) -> list[str]:
        if role not in self._link_labels:
            v = self.roles[role]
            self._link_labels[role] = [
                self.complex.labels[w]
                for w in self.complex.graph.neighbors(v).tolist()]
        return self._link_labels[role]

    def psi(self, r1: str, r2: str) -> dict[str, str]:
        """Canonical link isomorphism lk(r1) -> lk(r2) on base labels."""
        key = (r1, r2)
        if key not in self._psi:
            a, b = self.roles[r1], self.roles[r2]
            la, lb = link(self.complex, a), link(self.complex, b)
            found = iso_search(la, lb, limit=1)
            if not found:
                raise RoleLinkNotFoundError(
                    f"links of roles {r1} and {r2} are not isomorphic")
            amb_a = sorted(self.complex.graph.neighbors(a).tolist())
            amb_b = sorted(self.complex.graph.neighbors(b).tolist())
            m = found[0]
            self._psi[key] = {
                self.complex.labels[amb_a[i]]: self.complex.labels[amb_b[int(m[i])]]
                for i in range(len(amb_a))}
        return self._psi[key]


@dataclass
class Block:
    """A complex with tracked distinguished vertices."""
    complex: SimplicialComplex
    ports: dict[str, Port]
    marks: dict[str, int]
    base: BaseInfo
    n_atoms: int = 1          # 600-cell copies contained
    n_gluings: int = 0        # star connected sums / handles performed


def copy_block(b: Block, prefix: str) -> Block:
    """Fresh copy with `prefix`/ prepended to every label and role name."""
    labels = tuple(f"{prefix}/{lbl}" for lbl in b.complex.labels)
    K = SimplicialComplex(b.complex.facet_groups, labels)
    ports = {f"{prefix}/{name}": replace(p, prefix=f"{prefix}/{p.prefix}")
             for name, p in b.ports.items()}
    marks = {f"{prefix}/{name}": v for name, v in b.marks.items()}
    return Block(K, ports, marks, b.base, b.n_atoms, b.n_gluings)


def _remap_tracking(ports: dict[str, Port], marks: dict[str, int],
                    vmap: np.ndarray) -> tuple[dict[str, Port], dict[str, int]]:
    new_ports = {}
    for name, p in ports.items():
        nv = int(vmap[p.vertex])
        if nv >= 0:
            new_ports[name] = replace(p, vertex=nv)
    new_marks = {}
    for name, v in marks.items():
        nv = int(vmap[v])
        if nv >= 0:
            new_marks[name] = nv
    return new_ports, new_marks


def _phi_between(left: Block, pa: Port, right: Block, pb: Port) -> dict[int, int]:
    """Gluing bijection lk(pa) -> lk(pb): identity on like-named link
    vertices when the base roles agree, the canonical base isomorphism
    otherwise."""
    base = left.base
    translate = (None if pa.base_role == pb.base_role
                 else base.psi(pa.base_role, pb.base_role))
    nb = left.complex.graph.neighbors(pa.vertex).tolist()
    right_ids = right.complex.label_index
    out: dict[int, int] = {}
    for w in nb:
        lbl = left.complex.labels[w]
        assert lbl.startswith(pa.prefix), \
            f"port link label {lbl!r} lost its prefix {pa.prefix!r}"
        suffix = lbl[len(pa.prefix):]
        if translate is not None:
            suffix = translate[suffix]
        out[w] = right_ids[pb.prefix + suffix]
    return out


def glue_blocks(left: Block, left_port: str,
                right: Block, right_port: str) -> Block:
    """Star connected sum of two blocks at the named ports."""
    pa, pb = left.ports[left_port], right.ports[right_port]
    phi = _phi_between(left, pa, right, pb)
    res = star_connected_sum(left.complex, pa.vertex,
                             right.complex, pb.vertex, phi)
    lports, lmarks = _remap_tracking(left.ports, left.marks, res.left_map)
    rports, rmarks = _remap_tracking(right.ports, right.marks, res.right_map)
    overlap = set(lports) & set(rports)
    assert not overlap, f"port name collision: {overlap}"
    return Block(res.complex, {**lports, **rports}, {**lmarks, **rmarks},
                 left.base, left.n_atoms + right.n_atoms,
                 left.n_gluings + right.n_gluings + 1)


def handle_blocks(b: Block, port_a: str, port_b: str, *,
                  enforce_fns: bool = True) -> Block:
    """Star handle inside one block, between the two named ports."""
    pa, pb = b.ports[port_a], b.ports[port_b]
    pseudo_right = b  # same complex on both sides of the map
    phi = _phi_between(b, pa, pseudo_right, pb)
    res = star_handle(b.complex, pa.vertex, pb.vertex, phi,
                      enforce_fns=enforce_fns)
    ports, marks = _remap_tracking(b.ports, b.marks, res.left_map)
    return Block(res.complex, ports, marks, b.base, b.n_atoms, b.n_gluings + 1)


# -- the base block hierarchy -------------------------------------------------

def _atom_block() -> Block:
    """The 600-cell boundary with a diametric (u, v) pair as ports."""
    K, _ = cell600_boundary()
    dist = K.graph.bfs(0)
    d = int(dist.max())
    v = int(np.where(dist == d)[0][0])
    base = BaseInfo(K, {"u": 0, "v": v}, d,
                    link_diameter=diameter(icosahedron().graph)[0])
    ports = {"u": Port(0, "u", ""), "v": Port(v, "v", "")}
    return Block(K, ports, dict(), base)


_ICO_FVEC = (12, 30, 20)


def _has_base_link(K: SimplicialComplex, v: int,
                   ico: SimplicialComplex) -> bool:
    if K.graph.degree(v) != 12:
        return False
    lk = link(K, v)
    from .complexes import f_vector
    if f_vector(lk) != _ICO_FVEC:
        return False
    return bool(iso_search(lk, ico, limit=1))


def make_row(base: Block, a: int, copy_prefix: str = "c") -> Block:
    """Row R_a: a copies glued v-v, u-u, v-v, ... via identity maps.

    Output ports: `u` (the u of the first copy) and `v` (the free vertex of
    the last copy); every surviving per-copy port and mark is retained under
    its copy-prefixed name.
    """
    if a < 1:
        raise ParameterOutOfRangeError("row length must be >= 1")
    row = copy_block(base, f"{copy_prefix}1")
    for i in range(2, a + 1):
        nxt = copy_block(base, f"{copy_prefix}{i}")
        role = "v" if (i - 1) % 2 == 1 else "u"
        row = glue_blocks(row, f"{copy_prefix}{i - 1}/{role}",
                          nxt, f"{copy_prefix}{i}/{role}")
    free_role = "u" if a % 2 == 0 else "v"
    row.ports["u"] = row.ports[f"{copy_prefix}1/u"]
    row.ports["v"] = row.ports[f"{copy_prefix}{a}/{free_role}" if a > 1
                               else f"{copy_prefix}1/v"]
    return row


def row_diameter_bounds(d: int, L: int, a: int) -> tuple[int, int]:
    """Diameter sandwich for a row of blocks of diameter d, glue-link
    diameter L: [2(d-1) + (a-2)(d-2), 2(d+L-2) + (a-2)(d-2)]."""
    return 2 * (d - 1) + (a - 2) * (d - 2), 2 * (d + L - 2) + (a - 2) * (d - 2)


def make_base_block(target_d: int | None = None,
                    row_length: int | None = None) -> Block:
    """Base block: a row of 600-cell boundaries with roles u, v, w, m.

    u, v realise the measured diameter (links isomorphic to the icosahedron);
    w sits on a shortest u-v path at distance ceil(d/2) from u, re-selected to
    the nearest valid-link vertex at the same distance if the path vertex
    lies on a glue sphere; m is an interior probe point of maximal distance
    from u, v and w.
    """
    if (target_d is None) == (row_length is None):
        raise ParameterOutOfRangeError("give exactly one of target_d, row_length")
    atom = _atom_block()
    d0, L = atom.base.d, atom.base.link_diameter
    if row_length is None:
        if target_d < 9:
            raise ParameterOutOfRangeError("target_d must be >= 9")
        a = max(2, (target_d - 2 * (d0 + L - 2)) // (d0 - 2) + 2)
    else:
        if row_length < 2:
            raise ParameterOutOfRangeError("base block needs >= 2 copies")
        a = row_length

    ico = icosahedron()
    while True:
        row = make_row(atom, a, copy_prefix="b")
        K = row.complex
        d, _ = diameter(K.graph)
        if target_d is not None and d < target_d:
            a += 1
            continue
        break

    g = K.graph
    # diametric pair with base-isomorphic links, least ids
    u = v = -1
    for p in range(K.n_vertices):
        if not _has_base_link(K, p, ico):
            continue
        dist = g.bfs(p)
        far = np.where(dist == d)[0]
        for q in far.tolist():
            if _has_base_link(K, q, ico):
                u, v = p, q
                break
        if u >= 0:
            break
    if u < 0:
        raise RoleLinkNotFoundError("no diametric pair with base links")

    path = g.shortest_path(u, v)
    half = -(-d // 2)  # ceil
    w = path[half]
    if not _has_base_link(K, w, ico):
        dist_u = g.bfs(u)
        ring = np.where(dist_u == half)[0]
        from_w = g.bfs(w)
        order = sorted(ring.tolist(), key=lambda x: (int(from_w[x]), x))
        w = next((x for x in order if _has_base_link(K, x, ico)), -1)
        if w < 0:
            raise RoleLinkNotFoundError("no valid w near the midpoint")

    du, dv, dw = g.bfs(u), g.bfs(v), g.bfs(w)
    score = np.minimum(np.minimum(du, dv), dw)
    m = int(np.argmax(score))

    base = BaseInfo(K, {"u": u, "v": v, "w": w, "m": m}, d, L)
    ports = {r: Port(base.roles[r], r, "") for r in ("u", "v", "w")}
    return Block(K, ports, {"m": m}, base, n_atoms=a, n_gluings=a - 1)


# -- the decorated blocks E and H ---------------------------------------------

def make_E(base: Block) -> Block:
    """17-copy block: R_13 with 2-copy arms at the w of the 5th copy (top,
    exposing t) and the w of the 9th copy (bottom, exposing b)."""
    E = make_row(base, 13)
    for spot, arm in (("c5", "at"), ("c9", "ab")):
        a1 = copy_block(base, f"{arm}1")
        a2 = copy_block(base, f"{arm}2")
        E = glue_blocks(E, f"{spot}/w", a1, f"{arm}1/u")
        E = glue_blocks(E, f"{arm}1/v", a2, f"{arm}2/v")
    E.ports["t"] = E.ports["at2/u"]
    E.ports["b"] = E.ports["ab2/u"]
    assert E.n_atoms == 17 * base.n_atoms
    return E


def make_H(base: Block) -> Block:
    """3-copy connector: bottom.w glued to middle.u, middle.v to top.v.
    Its ports u and v are the bottom copy's u and v; after attachment the
    bottom copy is the handle-junction and the middle/top pair dangles."""
    hb = copy_block(base, "hb")
    hc = copy_block(base, "hc")
    ht = copy_block(base, "ht")
    H = glue_blocks(hb, "hb/w", hc, "hc/u")
    H = glue_blocks(H, "hc/v", ht, "ht/v")
    H.ports["u"] = H.ports["hb/u"]
    H.ports["v"] = H.ports["hb/v"]
    assert H.n_atoms == 3 * base.n_atoms
    return H


# -- parameters and T_sigma ----------------------------------------------------

@dataclass
class ConstructionParams:
    k: int
    base_row_length: int = 6
    left_row_factor: int = 15
    right_row_factor: int = 14
    paper_scale: bool = False

    def __post_init__(self):
        if self.k < 1:
            raise ParameterOutOfRangeError("k must be >= 1")
        if self.base_row_length < 2:
            raise ParameterOutOfRangeError("base_row_length must be >= 2")
        if self.left_row_factor <= self.right_row_factor:
            raise ParameterOutOfRangeError(
                "decoder needs left_row_factor > right_row_factor")


@dataclass
class GroundTruth:
    """Construction-side evidence for tests and calibration (the decoder
    itself never sees this)."""
    sigma: tuple[int, ...]
    k: int
    d: int
    link_diameter: int
    base_vertices: int
    jt_centers: tuple[int, ...]   # junction centre per E_i, t-arm side
    jb_centers: tuple[int, ...]   # junction centre per E_i, b-arm side
    h_centers: tuple[int, ...]    # handle-junction centre per H_i
    marks: dict[str, int]
    n_atoms: int


def _check_sigma(sigma, k) -> tuple[int, ...]:
    sigma = tuple(int(x) for x in sigma)
    if sorted(sigma) != list(range(1, k + 1)):
        raise ParameterOutOfRangeError(
            f"sigma must be a permutation of 1..{k}, got {sigma}")
    return sigma


def encode(sigma, params: ConstructionParams,
           base: Block | None = None) -> tuple[SimplicialComplex, GroundTruth]:
    """Build T_sigma: N_k = R_{15k} # E_1 # ... # E_k # R_{14k}, then one H
    per i glued along its u to t_i (star connected sum) and along its v to
    b_{sigma(i)} (star handle; both sites asserted at distance >= 7).

    Every E enters the chain through its u port, so a left-to-right walk
    meets the t-side junction of each E_i before its b-side junction.
    """
    k = params.k
    sigma = _check_sigma(sigma, k)
    if base is None:
        base = make_base_block(row_length=params.base_row_length)
    d = base.base.d
    if params.paper_scale and d < 77:
        raise ParameterOutOfRangeError(
            f"paper-scale construction needs d >= 77, measured {d}")

    E_template = make_E(base)
    H_template = make_H(base)

    chain = copy_block(make_row(base, params.left_row_factor * k), "L")
    prev_v = "L/v"
    for i in range(1, k + 1):
        Ei = copy_block(E_template, f"E{i}")
        chain = glue_blocks(chain, prev_v, Ei, f"E{i}/u")
        prev_v = f"E{i}/v"
    right = copy_block(make_row(base, params.right_row_factor * k), "R")
    chain = glue_blocks(chain, prev_v, right, "R/u")

    for i in range(1, k + 1):
        Hi = copy_block(H_template, f"H{i}")
        chain = glue_blocks(chain, f"E{i}/t", Hi, f"H{i}/u")
        j = sigma[i - 1]
        pa, pb = chain.ports[f"H{i}/v"], chain.ports[f"E{j}/b"]
        dist = chain.complex.graph.bfs(pa.vertex, cap=7)
        if 0 <= dist[pb.vertex] < 7:
            raise DistanceAssertionFailedError(
                f"H{i}/v and E{j}/b at distance {int(dist[pb.vertex])} < 7")
        chain = handle_blocks(chain, f"H{i}/v", f"E{j}/b", enforce_fns=True)

    expected_atoms = (params.left_row_factor + params.right_row_factor
                      + 17 + 3) * k * base.n_atoms
    assert chain.n_atoms == expected_atoms, "copy accounting failed"

    gt = GroundTruth(
        sigma=sigma, k=k, d=d, link_diameter=base.base.link_diameter,
        base_vertices=base.complex.n_vertices,
        jt_centers=tuple(chain.marks[f"E{i}/c5/m"] for i in range(1, k + 1)),
        jb_centers=tuple(chain.marks[f"E{i}/c9/m"] for i in range(1, k + 1)),
        h_centers=tuple(chain.marks[f"H{i}/hb/m"] for i in range(1, k + 1)),
        marks=dict(chain.marks),
        n_atoms=chain.n_atoms)
    return chain.complex, gt


# -- Euler characteristic targets ------------------------------------------------

def chi_target_plan(s: int, m: int) -> dict[str, int]:
    """Symbolic bookkeeping of the G_s scheme for a base of (4-dimensional)
    Euler characteristic m: a row of k blocks, k - r star-handled copies and
    r plain copies, with chi(row) = k(m-4) + 2 + 2r = s."""
    if s % 2 != 0 or m % 2 != 0:
        raise ParameterOutOfRangeError("s and m must be even")
    if m < 8:
        raise ParameterOutOfRangeError("m must be >= 8")
    threshold = (m - 6) * (m - 4) // 2 + 2
    if s < threshold:
        raise TargetUnreachableError(
            f"chi target {s} below the scheme threshold {threshold}")
    k = (s - 2) // (m - 4)
    r = (s - k * (m - 4) - 2) // 2
    assert 0 <= r <= k
    assert k * (m - 4) + 2 + 2 * r == s
    return {"k": k, "replaced": r, "threshold": threshold,
            "chi_handled": m - 2, "chi_plain": m}


def make_chi_target(s: int, base: Block, m_symbolic: int = 8
                    ) -> tuple[SimplicialComplex, dict[str, int]]:
    """Build the G_s row shape (handled and plain base copies glued v'-u')
    and verify both the symbolic chi arithmetic and the measured chi (0 in
    the 3-dimensional instantiation)."""
    plan = chi_target_plan(s, m_symbolic)
    k, r = plan["k"], plan["replaced"]

    prepared = _with_prime_ports(base)
    handled = _star_handled(prepared)

    blocks = [handled] * (k - r) + [prepared] * r
    row = copy_block(blocks[0], "g1")
    for i in range(2, k + 1):
        nxt = copy_block(blocks[i - 1], f"g{i}")
        row = glue_blocks(row, f"g{i - 1}/vp", nxt, f"g{i}/up")
    measured = euler_characteristic(row.complex)
    plan["chi_measured"] = measured
    assert measured == 0, "closed odd-dimensional output must have chi 0"
    return row.complex, plan


def _with_prime_ports(base: Block) -> Block:
    """Add ports u' and v' at distance 3 from u resp. v on a shortest u-v
    path (re-selected to valid-link vertices at the same distance)."""
    K = base.complex
    g = K.graph
    u, v = base.base.roles["u"], base.base.roles["v"]
    path = g.shortest_path(u, v)
    ico = icosahedron()

    def pick(anchor: int, cand: int) -> int:
        if _has_base_link(K, cand, ico):
            return cand
        ring = np.where(g.bfs(anchor) == 3)[0]
        from_c = g.bfs(cand)
        for x in sorted(ring.tolist(), key=lambda x: (int(from_c[x]), x)):
            if _has_base_link(K, x, ico):
                return x
        raise RoleLinkNotFoundError("no valid prime port at distance 3")

    up = pick(u, path[3])
    vp = pick(v, path[-4])
    out = Block(K, dict(base.ports), dict(base.marks), base.base,
                base.n_atoms, base.n_gluings)
    out.base = replace(base.base, roles={**base.base.roles,
                                         "up": up, "vp": vp})
    out.ports["up"] = Port(up, "up", "")
    out.ports["vp"] = Port(vp, "vp", "")
    return out


def _star_handled(b: Block) -> Block:
    """h(M): the block with lk(u) identified to lk(v) by a canonical map."""
    return handle_blocks(b, "u", "v", enforce_fns=True)
