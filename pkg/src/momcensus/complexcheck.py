"""The cell complex obtained by gluing dipyramid faces, and the torus filter.

Faces are glued apex to apex, EQ_CW to EQ_CCW and EQ_CCW to EQ_CW, which
reverses the boundary orientation of the faces; with every dipyramid
oriented the same way the glued space is therefore orientable.  What the
filter checks is that all poles end up at one ideal vertex and that every
ideal vertex has a torus link.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .enumeration import validate_pairing
from .kernels import NONORIENTABLE, NONTORUS, NOT_INVOLUTION, PASSED, POLAR_SPLIT, REASONS, get_kernel
from .polyhedra import ROTATIONAL, DipyramidSpec, EDGE_CORNERS, EdgeSlot, Slot, face_table, intra_adjacency

# corner slot of the partner face glued to each corner slot
PARTNER_SLOT = (Slot.APEX, Slot.EQ_CCW, Slot.EQ_CW)
# edge slot of the partner face glued to each edge slot
PARTNER_EDGE = (EdgeSlot.CCW, EdgeSlot.CW, EdgeSlot.EQUATOR)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        parent = self.parent
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


@dataclass(frozen=True)
class EdgeClass:
    edges: tuple[int, ...]                 # polyhedral edges, ascending
    cycle: tuple[tuple[int, int], ...]     # (face, edge slot) in rotation order
    reversed: bool                         # some edge is glued to itself backwards

    @property
    def valence(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class VertexLink:
    vertices: tuple[int, ...]              # polyhedral vertices in the class
    num_vertices: int
    num_edges: int
    num_faces: int
    orientable: bool

    @property
    def euler_characteristic(self) -> int:
        return self.num_vertices - self.num_edges + self.num_faces

    @property
    def is_torus(self) -> bool:
        return self.euler_characteristic == 0 and self.orientable


@dataclass(frozen=True)
class GluedComplex:
    spec: DipyramidSpec
    perm: tuple[int, ...]
    vertex_classes: tuple[tuple[int, ...], ...]
    polar_classes: tuple[int, ...]         # indices into vertex_classes holding a pole
    edge_classes: tuple[EdgeClass, ...]
    links: tuple[VertexLink, ...]

    @property
    def num_cusps(self) -> int:
        return len(self.vertex_classes)

    @property
    def num_edge_classes(self) -> int:
        return len(self.edge_classes)

    def link_euler(self) -> list[int]:
        return [link.euler_characteristic for link in self.links]

    def euler_identity_holds(self) -> bool:
        """Sum of link Euler characteristics equals 2 (E - F/2 + P)."""
        s = self.spec
        return sum(self.link_euler()) == 2 * (self.num_edge_classes - s.num_faces // 2 + s.num_polyhedra)


def build_complex(spec: DipyramidSpec, perm: Sequence[int]) -> GluedComplex:
    perm = validate_pairing(spec, perm)
    table = face_table(spec)
    F = spec.num_faces
    NV = spec.num_vertices
    NE = spec.num_edges

    verts = _UnionFind(NV)
    # an edge end is 2*edge + (0 at its first endpoint, 1 at its second)
    ends = _UnionFind(2 * NE)
    edges = _UnionFind(NE)
    # orientation of link polygons: parity union-find over polyhedral vertices
    opar = list(range(NV))
    oparity = [0] * NV
    orient_bad = set()

    def find_parity(a):
        acc = 0
        while opar[a] != a:
            acc ^= oparity[a]
            a = opar[a]
        return a, acc

    def end_at(edge, vertex):
        a, b = table.edge_endpoints[edge]
        return 2 * edge + (0 if vertex == a else 1)

    for i in range(F):
        j = perm[i]
        if j < i:
            continue
        ci, cj = table.corners[i], table.corners[j]
        for s in Slot:
            verts.union(ci[s], cj[PARTNER_SLOT[s]])
            # the gluing reverses face orientation, as do both induced link maps,
            # so a consistent orientation needs equal parity on glued corners
            ra, pa = find_parity(ci[s])
            rb, pb = find_parity(cj[PARTNER_SLOT[s]])
            if ra != rb:
                opar[rb] = ra
                oparity[rb] = pa ^ pb
            elif pa != pb:
                orient_bad.add(ra)
        for s in EdgeSlot:
            t = PARTNER_EDGE[s]
            ei, ej = table.edges[i][s], table.edges[j][t]
            edges.union(ei, ej)
            for c in EDGE_CORNERS[s]:
                vi = ci[c]
                vj = cj[PARTNER_SLOT[c]]
                ends.union(end_at(ei, vi), end_at(ej, vj))

    # vertex classes in order of their smallest member
    by_root: dict[int, list[int]] = {}
    for v in range(NV):
        by_root.setdefault(verts.find(v), []).append(v)
    vertex_classes = tuple(tuple(vs) for vs in sorted(by_root.values()))
    class_of = {v: n for n, vs in enumerate(vertex_classes) for v in vs}

    link_v = [0] * len(vertex_classes)
    for n in range(2 * NE):
        if ends.find(n) == n:
            a, b = table.edge_endpoints[n // 2]
            link_v[class_of[a if n % 2 == 0 else b]] += 1
    links = []
    bad_roots = {find_parity(r)[0] for r in orient_bad}
    for n, vs in enumerate(vertex_classes):
        corners = sum(table.vertex_degree[v] for v in vs)
        orientable = find_parity(vs[0])[0] not in bad_roots
        links.append(VertexLink(vs, link_v[n], corners // 2, len(vs), orientable))
    polar = tuple(sorted({class_of[v] for v in range(NV) if table.vertex_is_polar[v]}))

    # rotation cycles: cross the gluing, then pivot to the other face at that edge
    edge_classes = []
    members: dict[int, list[int]] = {}
    for e in range(NE):
        members.setdefault(edges.find(e), []).append(e)
    start_of = {}
    for f in range(F):
        for s in EdgeSlot:
            root = edges.find(table.edges[f][s])
            start_of.setdefault(root, (f, int(s)))
    for root in sorted(members, key=lambda r: start_of[r]):
        f0, s0 = start_of[root]
        cycle = []
        f, s = f0, s0
        while True:
            cycle.append((f, s))
            g, t = perm[f], PARTNER_EDGE[s]
            f, s = intra_adjacency(spec, g, t)
            s = int(s)
            if (f, s) == (f0, s0):
                break
        rev = any(ends.find(2 * e) == ends.find(2 * e + 1) for e in members[root])
        edge_classes.append(EdgeClass(tuple(members[root]), tuple(cycle), rev))
    return GluedComplex(spec, perm, vertex_classes, polar, tuple(edge_classes), tuple(links))


@dataclass(frozen=True)
class FilterOutcome:
    passed: bool
    reason: str
    vertex: int = -1                       # a polyhedral vertex of the offending class
    boundary_count: int = 0
    edge_class_count: int = 0
    reversed_edges: int = 0

    def __bool__(self) -> bool:
        return self.passed


def link_euler(cx: GluedComplex, vertex_class: int) -> int:
    return cx.links[vertex_class].euler_characteristic


def filter_pairing(spec: DipyramidSpec, perm: Sequence[int], mode: str = ROTATIONAL) -> FilterOutcome:
    """Run the fast filter; the outcome names the first failing check.

    Checks run cheapest first: involution, one polar class, torus links.
    Counts are reported only once the polar check has passed.
    """
    code, bad, nvc, nec, nrev = get_kernel(spec, mode).filter_pairing(tuple(perm))
    return FilterOutcome(code == PASSED, REASONS[code], bad, nvc, nec, nrev)


def check_complex(cx: GluedComplex) -> FilterOutcome:
    """The same checks, read off a fully built complex."""
    nrev = sum(1 for ec in cx.edge_classes if ec.reversed)
    common = dict(boundary_count=cx.num_cusps, edge_class_count=cx.num_edge_classes, reversed_edges=nrev)
    if len(cx.polar_classes) > 1:
        v = cx.vertex_classes[cx.polar_classes[1]][0]
        return FilterOutcome(False, REASONS[POLAR_SPLIT], v, 0, 0, 0)
    for link in cx.links:
        if link.euler_characteristic != 0:
            return FilterOutcome(False, REASONS[NONTORUS], link.vertices[0], **common)
    for link in cx.links:
        if not link.orientable:
            return FilterOutcome(False, REASONS[NONORIENTABLE], link.vertices[0], **common)
    return FilterOutcome(True, REASONS[PASSED], -1, **common)


__all__ = [
    "EdgeClass", "VertexLink", "GluedComplex", "FilterOutcome", "build_complex",
    "filter_pairing", "check_complex", "link_euler", "NOT_INVOLUTION", "PARTNER_SLOT", "PARTNER_EDGE",
]
