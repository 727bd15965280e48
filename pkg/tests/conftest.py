from __future__ import annotations

import random
from collections import defaultdict

import pytest

from momcensus.polyhedra import DipyramidSpec, face_table

SMALL_SPECS = [DipyramidSpec.of(s) for s in [(3,), (4,), (5,), (3, 3), (3, 4)]]
MOM4_SPECS = [DipyramidSpec.of(s) for s in [(3, 3, 3, 3), (3, 3, 4), (3, 5), (4, 4), (6,)]]
# gluing rule on corner slots: apex, cw, ccw -> apex, ccw, cw
PARTNER = (0, 2, 1)


def random_pairing(rng: random.Random, num_faces: int) -> tuple[int, ...]:
    faces = list(range(num_faces))
    rng.shuffle(faces)
    p = [0] * num_faces
    for a, b in zip(faces[::2], faces[1::2]):
        p[a], p[b] = b, a
    return tuple(p)


@pytest.fixture
def rng():
    return random.Random(20240611)


def link_surfaces(spec: DipyramidSpec, perm):
    """Explicit triangulated vertex links, built without the package's union-finds.

    Each polyhedral vertex v contributes a cone over its link polygon: one
    triangle (centre, end_a, end_b) per face corner at v, where end_x is the
    point where edge x meets the small sphere around v.  Glued face corners
    identify the outer sides of these triangles.  Returns a list of
    components, each a dict with the polyhedral vertices involved, V, E, F and
    an orientability flag.
    """
    table = face_table(spec)
    corners = table.corners

    # the outer side of the triangle at (face, corner slot): from the end on the
    # edge to the previous corner towards the end on the edge to the next corner
    def side(f, c):
        v = corners[f][c]
        prev_v = corners[f][(c - 1) % 3]
        next_v = corners[f][(c + 1) % 3]
        return v, (v, frozenset((v, prev_v))), (v, frozenset((v, next_v)))

    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    # polygon orientation parity, per polyhedral vertex
    opar = {}
    oflip = {}
    bad = set()

    def ofind(x):
        opar.setdefault(x, x)
        oflip.setdefault(x, 0)
        acc = 0
        while opar[x] != x:
            acc ^= oflip[x]
            x = opar[x]
        return x, acc

    for i, j in enumerate(perm):
        if j < i:
            continue
        for c in range(3):
            vi, ai, bi = side(i, c)
            vj, aj, bj = side(j, PARTNER[c])
            union(("v", vi), ("v", vj))
            # the corner of i before c maps to the corner of j before or after PARTNER[c]
            prev_j = corners[j][(PARTNER[(c - 1) % 3])]
            image_of_ai = (vj, frozenset((vj, prev_j)))
            same_direction = image_of_ai == aj
            if same_direction:
                union(("end",) + ai, ("end",) + aj)
                union(("end",) + bi, ("end",) + bj)
            else:
                union(("end",) + ai, ("end",) + bj)
                union(("end",) + bi, ("end",) + aj)
            # consistent orientations traverse glued sides in opposite directions
            need = 1 if same_direction else 0
            ra, pa = ofind(vi)
            rb, pb = ofind(vj)
            if ra != rb:
                opar[rb] = ra
                oflip[rb] = pa ^ pb ^ need
            elif pa ^ pb != need:
                bad.add(ra)

    comps = defaultdict(lambda: {"vertices": set(), "ends": set(), "corners": 0})
    for f in range(len(perm)):
        for c in range(3):
            v, a, b = side(f, c)
            comp = comps[find(("v", v))]
            comp["vertices"].add(v)
            comp["ends"].add(find(("end",) + a))
            comp["ends"].add(find(("end",) + b))
            comp["corners"] += 1
    out = []
    bad_roots = {ofind(r)[0] for r in bad}
    for comp in comps.values():
        nv = len(comp["vertices"])
        # centres + end classes; spokes + glued sides; one triangle per corner
        V = nv + len(comp["ends"])
        spokes = sum(table.vertex_degree[v] for v in comp["vertices"])
        E = spokes + comp["corners"] // 2
        F = comp["corners"]
        orientable = all(ofind(v)[0] not in bad_roots for v in comp["vertices"])
        out.append({"vertices": sorted(comp["vertices"]), "V": V, "E": E, "F": F,
                    "chi": V - E + F, "orientable": orientable})
    return sorted(out, key=lambda c: c["vertices"])
