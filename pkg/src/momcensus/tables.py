"""Flat integer tables shared by the search and filter kernels."""
from __future__ import annotations

import functools
from dataclasses import dataclass

from .polyhedra import (
    MODES,
    ROTATIONAL,
    DipyramidSpec,
    EDGE_CORNERS,
    EdgeSlot,
    face_table,
    local_symmetries,
)


@dataclass(frozen=True)
class KernelTables:
    spec: DipyramidSpec
    mode: str
    flips: tuple[bool, ...]
    num_faces: int
    num_polyhedra: int
    num_vertices: int
    num_edges: int
    face_poly: tuple[int, ...]
    face_local: tuple[int, ...]
    poly_type: tuple[int, ...]
    # global face index of local face l of polyhedron P
    poly_faces: tuple[tuple[int, ...], ...]
    # polyhedra of each type, ascending
    type_polys: tuple[tuple[int, ...], ...]
    # local symmetry group of each type: permutations and their inverses
    type_perms: tuple[tuple[tuple[int, ...], ...], ...]
    type_inv: tuple[tuple[tuple[int, ...], ...], ...]
    # per face: polyhedral vertex at (APEX, EQ_CW, EQ_CCW) after the corner convention
    face_corners: tuple[tuple[int, int, int], ...]
    # per face and edge slot: edge id and the edge-end ids at the two corners
    face_edges: tuple[tuple[int, int, int], ...]
    face_ends: tuple[tuple[tuple[int, int], ...], ...]
    face_flip: tuple[int, ...]
    vertex_polar: tuple[int, ...]
    vertex_degree: tuple[int, ...]
    end_vertex: tuple[int, ...]


@functools.lru_cache(maxsize=None)
def kernel_tables(spec: DipyramidSpec, mode: str = ROTATIONAL,
                  flips: tuple[bool, ...] | None = None) -> KernelTables:
    """Build the tables for ``spec``.

    ``flips[P]`` exchanges the EQ_CW/EQ_CCW labels on every face of
    polyhedron P, i.e. glues that dipyramid as if it carried the opposite
    orientation.  The default convention flips nothing.
    """
    if mode not in MODES:
        raise ValueError(f"unknown symmetry mode {mode!r}")
    P = spec.num_polyhedra
    if flips is None:
        flips = (False,) * P
    flips = tuple(bool(x) for x in flips)
    if len(flips) != P:
        raise ValueError(f"need one flip flag per polyhedron ({P}), got {len(flips)}")
    table = face_table(spec)
    F = spec.num_faces

    kinds = sorted(set(spec.sides))
    poly_type = tuple(kinds.index(k) for k in spec.sides)
    type_polys = tuple(tuple(p for p in range(P) if poly_type[p] == t) for t in range(len(kinds)))
    type_perms = []
    type_inv = []
    for k in kinds:
        perms = tuple(perm for perm, _ in local_symmetries(k, mode))
        invs = []
        for perm in perms:
            inv = [0] * len(perm)
            for a, b in enumerate(perm):
                inv[b] = a
            invs.append(tuple(inv))
        type_perms.append(perms)
        type_inv.append(tuple(invs))

    poly_faces = tuple(tuple(table.global_index(p, l) for l in range(2 * k))
                       for p, k in enumerate(spec.sides))

    face_corners = []
    face_edges = []
    face_ends = []
    face_flip = []
    for f in range(F):
        flip = flips[table[f].polyhedron]
        apex, cw, ccw = table.corners[f]
        e_cw, e_ccw, e_eq = table.edges[f]
        if flip:
            cw, ccw = ccw, cw
            e_cw, e_ccw = e_ccw, e_cw
        corners = (apex, cw, ccw)
        edges = (e_cw, e_ccw, e_eq)
        ends = []
        for slot in EdgeSlot:
            e = edges[slot]
            c0, c1 = EDGE_CORNERS[slot]
            a, b = table.edge_endpoints[e]
            end0 = 2 * e + (0 if a == corners[c0] else 1)
            end1 = 2 * e + (0 if a == corners[c1] else 1)
            assert {a, b} == {corners[c0], corners[c1]}
            ends.append((end0, end1))
        face_corners.append(corners)
        face_edges.append(edges)
        face_ends.append(tuple(ends))
        face_flip.append(int(flip))

    end_vertex = []
    for a, b in table.edge_endpoints:
        end_vertex += [a, b]

    return KernelTables(
        spec=spec,
        mode=mode,
        flips=flips,
        num_faces=F,
        num_polyhedra=P,
        num_vertices=spec.num_vertices,
        num_edges=spec.num_edges,
        face_poly=tuple(table[f].polyhedron for f in range(F)),
        face_local=tuple(table.local_index(f) for f in range(F)),
        poly_type=poly_type,
        poly_faces=poly_faces,
        type_polys=type_polys,
        type_perms=tuple(type_perms),
        type_inv=tuple(type_inv),
        face_corners=tuple(face_corners),
        face_edges=tuple(face_edges),
        face_ends=tuple(face_ends),
        face_flip=tuple(face_flip),
        vertex_polar=tuple(int(x) for x in table.vertex_is_polar),
        vertex_degree=tuple(table.vertex_degree),
        end_vertex=tuple(end_vertex),
    )
