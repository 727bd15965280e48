"""Combinatorics of ideal dipyramids.

A k-dipyramid has two poles N and S, equatorial vertices e_0 .. e_{k-1},
north faces (N, e_m, e_{m+1}) and south faces (S, e_m, e_{m+1}).  Faces of
a set of dipyramids are numbered globally: every north face of polyhedron 0,
then of polyhedron 1, and so on, followed by all south faces in the same
polyhedron order.  Within a polyhedron faces are ordered by position m.

Each dipyramid carries the orientation for which the north face m has
boundary orientation (N, e_m, e_{m+1}) seen from outside; the south face m
then reads (S, e_{m+1}, e_m).  The corner slots of a face are named after
that boundary orientation: ``APEX``, then ``EQ_CW``, then ``EQ_CCW``.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from enum import IntEnum
from itertools import combinations_with_replacement
from typing import Iterable, Sequence

NORTH = "north"
SOUTH = "south"

ROTATIONAL = "rotational"
FULL = "full"
MODES = (ROTATIONAL, FULL)


class Slot(IntEnum):
    """Corner slots of a triangular face."""

    APEX = 0
    EQ_CW = 1
    EQ_CCW = 2


class EdgeSlot(IntEnum):
    """Edge slots of a triangular face.

    ``CW`` is the polar edge apex--EQ_CW, ``CCW`` the polar edge
    apex--EQ_CCW and ``EQUATOR`` the edge EQ_CW--EQ_CCW.
    """

    CW = 0
    CCW = 1
    EQUATOR = 2


# corner slots spanned by each edge slot, in boundary-orientation order
EDGE_CORNERS = {
    EdgeSlot.CW: (Slot.APEX, Slot.EQ_CW),
    EdgeSlot.CCW: (Slot.EQ_CCW, Slot.APEX),
    EdgeSlot.EQUATOR: (Slot.EQ_CW, Slot.EQ_CCW),
}


class SpecError(ValueError):
    pass


@dataclass(frozen=True)
class DipyramidSpec:
    """Ordered multiset of dipyramid side counts (ascending)."""

    sides: tuple[int, ...]

    def __post_init__(self):
        sides = tuple(int(k) for k in self.sides)
        object.__setattr__(self, "sides", sides)
        if not sides:
            raise SpecError("a dipyramid spec needs at least one polyhedron")
        if any(k < 3 for k in sides):
            raise SpecError(f"side counts must be >= 3, got {sides}")
        if list(sides) != sorted(sides):
            raise SpecError(f"side counts must be sorted ascending, got {sides}")

    @classmethod
    def of(cls, sides: Iterable[int]) -> "DipyramidSpec":
        return cls(tuple(sorted(sides)))

    @property
    def num_polyhedra(self) -> int:
        return len(self.sides)

    @property
    def num_north(self) -> int:
        return sum(self.sides)

    @property
    def num_faces(self) -> int:
        return 2 * sum(self.sides)

    @property
    def num_edges(self) -> int:
        return 3 * sum(self.sides)

    @property
    def num_vertices(self) -> int:
        return sum(k + 2 for k in self.sides)

    def __str__(self) -> str:
        return ",".join(str(k) for k in self.sides)


def pyramid_sets_for_mom(n: int) -> list[DipyramidSpec]:
    """Dipyramid sets that a Mom-n can decompose into.

    The 1-handle valences of a Mom-n are n integers >= 2 summing to 3n.
    Valence-2 handles give digonal pyramids that collapse away; every other
    handle of valence k gives one k-dipyramid.
    """
    if not 2 <= n <= 4:
        raise SpecError(f"Mom-n enumeration supports 2 <= n <= 4, got {n}")
    found = []
    for valences in combinations_with_replacement(range(2, 3 * n + 1), n):
        if sum(valences) != 3 * n:
            continue
        sides = tuple(k for k in valences if k > 2)
        if sides and DipyramidSpec(sides) not in found:
            found.append(DipyramidSpec(sides))
    found.sort(key=lambda s: (-len(s.sides), s.sides))
    return found


@dataclass(frozen=True)
class FaceInfo:
    polyhedron: int
    hemisphere: str
    position: int


class FaceTable:
    """Face numbering and incidence tables for a dipyramid spec.

    Polyhedral vertices are numbered per polyhedron as N, S, e_0 .. e_{k-1};
    polyhedral edges per polyhedron as the k edges N-e_m, the k edges S-e_m
    and the k equatorial edges e_m-e_{m+1}.
    """

    def __init__(self, spec: DipyramidSpec):
        self.spec = spec
        ks = spec.sides
        self.num_faces = spec.num_faces
        self.north_offset = [sum(ks[:p]) for p in range(len(ks))]
        self.vertex_offset = [sum(k + 2 for k in ks[:p]) for p in range(len(ks))]
        self.edge_offset = [3 * off for off in self.north_offset]
        K = spec.num_north

        self.info: list[FaceInfo] = []
        for hemisphere in (NORTH, SOUTH):
            for p, k in enumerate(ks):
                for m in range(k):
                    self.info.append(FaceInfo(p, hemisphere, m))
        assert len(self.info) == 2 * K

        # polyhedral vertex at each corner slot, per face
        self.corners: list[tuple[int, int, int]] = []
        # polyhedral edge at each edge slot, per face
        self.edges: list[tuple[int, int, int]] = []
        for f, fi in enumerate(self.info):
            p, m = fi.polyhedron, fi.position
            k = ks[p]
            vN, vS = self.vertex_offset[p], self.vertex_offset[p] + 1
            e_m = self.vertex_offset[p] + 2 + m
            e_next = self.vertex_offset[p] + 2 + (m + 1) % k
            eo = self.edge_offset[p]
            if fi.hemisphere == NORTH:
                self.corners.append((vN, e_m, e_next))
                self.edges.append((eo + m, eo + (m + 1) % k, eo + 2 * k + m))
            else:
                self.corners.append((vS, e_next, e_m))
                self.edges.append((eo + k + (m + 1) % k, eo + k + m, eo + 2 * k + m))

        self.edge_endpoints: list[tuple[int, int]] = []
        self.vertex_is_polar: list[bool] = []
        self.vertex_degree: list[int] = []
        for p, k in enumerate(ks):
            vo = self.vertex_offset[p]
            self.vertex_is_polar += [True, True] + [False] * k
            self.vertex_degree += [k, k] + [4] * k
            for pole in (vo, vo + 1):
                for m in range(k):
                    self.edge_endpoints.append((pole, vo + 2 + m))
            for m in range(k):
                self.edge_endpoints.append((vo + 2 + m, vo + 2 + (m + 1) % k))
        assert len(self.edge_endpoints) == spec.num_edges

    def index(self, polyhedron: int, hemisphere: str, position: int) -> int:
        k = self.spec.sides[polyhedron]
        if not 0 <= position < k:
            raise IndexError(f"position {position} out of range for a {k}-dipyramid")
        base = self.north_offset[polyhedron] + position
        if hemisphere == NORTH:
            return base
        if hemisphere == SOUTH:
            return self.spec.num_north + base
        raise ValueError(f"unknown hemisphere {hemisphere!r}")

    def __getitem__(self, face: int) -> FaceInfo:
        return self.info[face]

    def __len__(self) -> int:
        return self.num_faces

    def local_index(self, face: int) -> int:
        """Index of a face within its own polyhedron: north m -> m, south m -> k + m."""
        fi = self.info[face]
        k = self.spec.sides[fi.polyhedron]
        return fi.position + (k if fi.hemisphere == SOUTH else 0)

    def global_index(self, polyhedron: int, local: int) -> int:
        k = self.spec.sides[polyhedron]
        if local < k:
            return self.north_offset[polyhedron] + local
        return self.spec.num_north + self.north_offset[polyhedron] + local - k


@functools.lru_cache(maxsize=None)
def face_table(spec: DipyramidSpec) -> FaceTable:
    return FaceTable(spec)


def intra_adjacency(spec: DipyramidSpec, face: int, edge_slot: EdgeSlot) -> tuple[int, EdgeSlot]:
    """The other face of the same dipyramid sharing the given edge of ``face``."""
    table = face_table(spec)
    fi = table[face]
    k = spec.sides[fi.polyhedron]
    m = fi.position
    edge_slot = EdgeSlot(edge_slot)
    if edge_slot == EdgeSlot.EQUATOR:
        other = SOUTH if fi.hemisphere == NORTH else NORTH
        return table.index(fi.polyhedron, other, m), EdgeSlot.EQUATOR
    # a north face runs e_m -> e_{m+1}, a south face e_{m+1} -> e_m
    step = 1 if fi.hemisphere == NORTH else -1
    if edge_slot == EdgeSlot.CCW:
        return table.index(fi.polyhedron, fi.hemisphere, (m + step) % k), EdgeSlot.CW
    return table.index(fi.polyhedron, fi.hemisphere, (m - step) % k), EdgeSlot.CCW


# ---------------------------------------------------------------------------
# symmetries

@dataclass(frozen=True)
class SymmetryElement:
    """A combinatorial symmetry of a set of dipyramids.

    ``face_perm[f]`` is the image of face f; ``slot_swap[f]`` records whether
    the EQ_CW and EQ_CCW corners of f are exchanged on the way.
    """

    face_perm: tuple[int, ...]
    slot_swap: tuple[bool, ...]

    @property
    def orientation(self) -> str:
        # per polyhedron the swap flag is uniform; a mixed element is neither
        return "reversing" if any(self.slot_swap) else "preserving"

    def map_corner(self, face: int, slot: Slot) -> tuple[int, Slot]:
        slot = Slot(slot)
        if self.slot_swap[face] and slot != Slot.APEX:
            slot = Slot.EQ_CCW if slot == Slot.EQ_CW else Slot.EQ_CW
        return self.face_perm[face], slot

    def compose(self, other: "SymmetryElement") -> "SymmetryElement":
        """``self`` after ``other``."""
        perm = tuple(self.face_perm[other.face_perm[f]] for f in range(len(other.face_perm)))
        swap = tuple(other.slot_swap[f] != self.slot_swap[other.face_perm[f]]
                     for f in range(len(other.face_perm)))
        return SymmetryElement(perm, swap)

    def inverse(self) -> "SymmetryElement":
        n = len(self.face_perm)
        inv = [0] * n
        swap = [False] * n
        for f, g in enumerate(self.face_perm):
            inv[g] = f
            swap[g] = self.slot_swap[f]
        return SymmetryElement(tuple(inv), tuple(swap))

    @classmethod
    def identity(cls, num_faces: int) -> "SymmetryElement":
        return cls(tuple(range(num_faces)), (False,) * num_faces)


def local_symmetries(k: int, mode: str = ROTATIONAL) -> list[tuple[tuple[int, ...], bool]]:
    """Symmetries of one k-dipyramid as permutations of its 2k local faces.

    Returns (local permutation, swaps slots) pairs; rotations first, then
    pole-swapping flips, then (full mode) mirrors and mirror-flips.
    """
    if mode not in MODES:
        raise ValueError(f"unknown symmetry mode {mode!r}")
    out = []
    for s in range(k):
        # rotation e_m -> e_{m+s}
        out.append((tuple([(m + s) % k for m in range(k)] + [k + (m + s) % k for m in range(k)]), False))
    for s in range(k):
        # flip N <-> S composed with e_m -> e_{s-m}; face (e_m, e_{m+1}) -> (e_{s-m-1}, e_{s-m})
        out.append((tuple([k + (s - m - 1) % k for m in range(k)] + [(s - m - 1) % k for m in range(k)]), False))
    if mode == FULL:
        for s in range(k):
            out.append((tuple([(s - m - 1) % k for m in range(k)] + [k + (s - m - 1) % k for m in range(k)]), True))
        for s in range(k):
            out.append((tuple([k + (m + s) % k for m in range(k)] + [(m + s) % k for m in range(k)]), True))
    return out


def symmetry_generators(spec: DipyramidSpec, mode: str = ROTATIONAL) -> list[SymmetryElement]:
    """Rotation, flip (and mirror) of each dipyramid plus swaps of equal dipyramids."""
    if mode not in MODES:
        raise ValueError(f"unknown symmetry mode {mode!r}")
    table = face_table(spec)
    F = spec.num_faces
    gens = []

    def lift(p: int, local: Sequence[int], swap: bool) -> SymmetryElement:
        perm = list(range(F))
        sw = [False] * F
        for l, img in enumerate(local):
            perm[table.global_index(p, l)] = table.global_index(p, img)
            sw[table.global_index(p, l)] = swap
        return SymmetryElement(tuple(perm), tuple(sw))

    for p, k in enumerate(spec.sides):
        syms = local_symmetries(k, mode)
        gens.append(lift(p, *syms[1]))      # rotation by one step
        gens.append(lift(p, *syms[k]))      # flip with s = 0
        if mode == FULL:
            gens.append(lift(p, *syms[2 * k]))
    for p in range(spec.num_polyhedra - 1):
        q = p + 1
        if spec.sides[p] == spec.sides[q]:
            perm = list(range(F))
            for l in range(2 * spec.sides[p]):
                a, b = table.global_index(p, l), table.global_index(q, l)
                perm[a], perm[b] = b, a
            gens.append(SymmetryElement(tuple(perm), (False,) * F))
    return gens


def close_group(generators: Sequence[SymmetryElement], num_faces: int) -> list[SymmetryElement]:
    """Explicit closure of a set of symmetry elements, identity first."""
    identity = SymmetryElement.identity(num_faces)
    seen = {identity.face_perm: identity}
    order = [identity]
    frontier = [identity]
    while frontier:
        nxt = []
        for g in frontier:
            for s in generators:
                h = s.compose(g)
                key = (h.face_perm, h.slot_swap)
                if h.face_perm in seen:
                    old = seen[h.face_perm]
                    if old.slot_swap != h.slot_swap:
                        raise AssertionError(f"face permutation with two corner actions: {key}")
                    continue
                seen[h.face_perm] = h
                order.append(h)
                nxt.append(h)
        frontier = nxt
    return order


@functools.lru_cache(maxsize=None)
def _symmetry_group_cached(spec: DipyramidSpec, mode: str) -> tuple[SymmetryElement, ...]:
    return tuple(close_group(symmetry_generators(spec, mode), spec.num_faces))


def symmetry_group(spec: DipyramidSpec, mode: str = ROTATIONAL) -> list[SymmetryElement]:
    """All combinatorial symmetries of ``spec`` in the given mode, identity first."""
    return list(_symmetry_group_cached(spec, mode))


def predicted_group_order(spec: DipyramidSpec, mode: str = ROTATIONAL) -> int:
    """Order of the direct product of dihedral groups extended by equal-type swaps."""
    from collections import Counter
    from math import factorial

    per = 2 if mode == ROTATIONAL else 4
    order = 1
    for k in spec.sides:
        order *= per * k
    for count in Counter(spec.sides).values():
        order *= factorial(count)
    return order
