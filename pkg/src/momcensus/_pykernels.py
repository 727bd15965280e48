"""Pure-Python search and filter kernels.

Mirrors ``_ckernels.pyx`` line for line; selected automatically when the
compiled extension is unavailable.  Filter codes and the search protocol
are documented in ``kernels.py``.
"""
from __future__ import annotations

PASSED = 0
NOT_INVOLUTION = 1
POLAR_SPLIT = 2
NONTORUS = 3
NONORIENTABLE = 4

IMPLEMENTATION = "python"


class _Witness:
    """Backtracking search for a symmetry g with g p g^-1 < p.

    The symmetry is built one polyhedron at a time: a source polyhedron S is
    sent to a target polyhedron of the same type by a local symmetry.
    Entries of ``p`` equal to -1 are unknown; comparisons that hit an
    unknown value are treated as undecided, so a witness found on a partial
    pairing is a witness for every completion.
    """

    def __init__(self, T):
        self.T = T
        P = T.num_polyhedra
        self.src_of_tgt = [-1] * P
        self.tgt_of_src = [-1] * P
        self.h_of_src = [-1] * P

    def run(self, p) -> bool:
        self.p = p
        return self._step(0)

    def _step(self, y: int) -> bool:
        T = self.T
        if y == T.num_faces:
            return False
        py = self.p[y]
        if py < 0:
            return False
        ty = T.face_poly[y]
        ly = T.face_local[y]
        s = self.src_of_tgt[ty]
        if s >= 0:
            inv = T.type_inv[T.poly_type[s]][self.h_of_src[s]]
            return self._after_source(y, py, T.poly_faces[s][inv[ly]])
        typ = T.poly_type[ty]
        for s in T.type_polys[typ]:
            if self.tgt_of_src[s] >= 0:
                continue
            faces = T.poly_faces[s]
            for hi, inv in enumerate(T.type_inv[typ]):
                self.src_of_tgt[ty] = s
                self.tgt_of_src[s] = ty
                self.h_of_src[s] = hi
                found = self._after_source(y, py, faces[inv[ly]])
                self.src_of_tgt[ty] = -1
                self.tgt_of_src[s] = -1
                self.h_of_src[s] = -1
                if found:
                    return True
        return False

    def _after_source(self, y: int, py: int, x: int) -> bool:
        T = self.T
        z = self.p[x]
        if z < 0:
            return False
        zp = T.face_poly[z]
        lz = T.face_local[z]
        tz = self.tgt_of_src[zp]
        if tz >= 0:
            v = T.poly_faces[tz][T.type_perms[T.poly_type[zp]][self.h_of_src[zp]][lz]]
            if v < py:
                return True
            if v > py:
                return False
            return self._step(y + 1)
        typ = T.poly_type[zp]
        for tz in T.type_polys[typ]:
            if self.src_of_tgt[tz] >= 0:
                continue
            faces = T.poly_faces[tz]
            for hi, perm in enumerate(T.type_perms[typ]):
                v = faces[perm[lz]]
                if v > py:
                    continue
                if v < py:
                    return True
                self.src_of_tgt[tz] = zp
                self.tgt_of_src[zp] = tz
                self.h_of_src[zp] = hi
                found = self._step(y + 1)
                self.src_of_tgt[tz] = -1
                self.tgt_of_src[zp] = -1
                self.h_of_src[zp] = -1
                if found:
                    return True
        return False


def has_smaller_conjugate(T, p) -> bool:
    return _Witness(T).run(list(p))


def _find(parent, a):
    while parent[a] != a:
        parent[a] = parent[parent[a]]
        a = parent[a]
    return a


def _find_parity(parent, parity, a):
    # returns (root, parity of a relative to root)
    acc = 0
    while parent[a] != a:
        acc ^= parity[a]
        a = parent[a]
    return a, acc


def run_filter(T, p, full=False):
    """Topological filter.

    Returns (code, bad_vertex, nvc, nec, nrev, polar_ok, chi_ok, orient_ok).
    ``bad_vertex`` is a polyhedral vertex of the first offending class (or
    -1).  With ``full`` every check runs even after a failure so that all
    three flags are meaningful.
    """
    F = T.num_faces
    for i in range(F):
        j = p[i]
        if j < 0 or j >= F or j == i or p[j] != i:
            return NOT_INVOLUTION, -1, 0, 0, 0, 0, 0, 0

    code, bad = PASSED, -1
    polar_ok = chi_ok = orient_ok = 1
    NV = T.num_vertices
    NE = T.num_edges
    vpar = list(range(NV))
    for i in range(F):
        j = p[i]
        if j < i:
            continue
        ci = T.face_corners[i]
        cj = T.face_corners[j]
        for a, b in ((ci[0], cj[0]), (ci[1], cj[2]), (ci[2], cj[1])):
            ra, rb = _find(vpar, a), _find(vpar, b)
            if ra != rb:
                vpar[rb] = ra

    polar_root = -1
    for v in range(NV):
        if T.vertex_polar[v]:
            r = _find(vpar, v)
            if polar_root < 0:
                polar_root = r
            elif r != polar_root and polar_ok:
                code, bad, polar_ok = POLAR_SPLIT, v, 0
                if not full:
                    return code, bad, 0, 0, 0, polar_ok, chi_ok, orient_ok

    epar = list(range(NE))
    npar = list(range(2 * NE))
    opar = list(range(NV))
    oparity = [0] * NV
    bad_orient = [0] * NV
    for i in range(F):
        j = p[i]
        if j < i:
            continue
        ends_i = T.face_ends[i]
        ends_j = T.face_ends[j]
        edges_i = T.face_edges[i]
        edges_j = T.face_edges[j]
        for s, t in ((0, 1), (1, 0), (2, 2)):
            ra, rb = _find(epar, edges_i[s]), _find(epar, edges_j[t])
            if ra != rb:
                epar[rb] = ra
            x0, x1 = ends_i[s]
            y0, y1 = ends_j[t]
            for a, b in ((x0, y1), (x1, y0)):
                ra, rb = _find(npar, a), _find(npar, b)
                if ra != rb:
                    npar[rb] = ra
        par = T.face_flip[i] ^ T.face_flip[j]
        ci = T.face_corners[i]
        cj = T.face_corners[j]
        for a, b in ((ci[0], cj[0]), (ci[1], cj[2]), (ci[2], cj[1])):
            ra, pa = _find_parity(opar, oparity, a)
            rb, pb = _find_parity(opar, oparity, b)
            if ra != rb:
                opar[rb] = ra
                oparity[rb] = pa ^ pb ^ par
                bad_orient[ra] |= bad_orient[rb]
            elif pa ^ pb != par:
                bad_orient[ra] = 1

    nec = sum(1 for e in range(NE) if _find(epar, e) == e)
    nrev = sum(1 for e in range(NE) if _find(npar, 2 * e) == _find(npar, 2 * e + 1))

    # per vertex class: F_L (polygons), 2 E_L (corners), V_L (end classes)
    faces_l = [0] * NV
    corners_l = [0] * NV
    verts_l = [0] * NV
    nvc = 0
    for v in range(NV):
        r = _find(vpar, v)
        if r == v:
            nvc += 1
        faces_l[r] += 1
        corners_l[r] += T.vertex_degree[v]
    for n in range(2 * NE):
        if _find(npar, n) == n:
            verts_l[_find(vpar, T.end_vertex[n])] += 1
    for v in range(NV):
        if _find(vpar, v) != v:
            continue
        if verts_l[v] - corners_l[v] // 2 + faces_l[v] != 0 and chi_ok:
            chi_ok = 0
            if code == PASSED:
                code, bad = NONTORUS, v
            if not full:
                return code, bad, nvc, nec, nrev, polar_ok, chi_ok, orient_ok
    for v in range(NV):
        if _find(vpar, v) != v:
            continue
        if bad_orient[_find_parity(opar, oparity, v)[0]] and orient_ok:
            orient_ok = 0
            if code == PASSED:
                code, bad = NONORIENTABLE, v
            if not full:
                break
    return code, bad, nvc, nec, nrev, polar_ok, chi_ok, orient_ok


def filter_pairing(T, p):
    """(code, bad_vertex, num_vertex_classes, num_edge_classes, num_reversed_edges)."""
    return run_filter(T, p)[:5]


def _next_free(p, start):
    F = len(p)
    while start < F and p[start] >= 0:
        start += 1
    return start


class _Counters:
    __slots__ = ("nodes", "leaves", "survivors", "rejects", "tally")

    def __init__(self):
        self.nodes = self.leaves = self.survivors = 0
        self.rejects = [0] * 5
        self.tally = [0] * 8

    def stats(self, diagnostics):
        return (self.nodes, self.leaves, self.survivors,
                (self.rejects[POLAR_SPLIT], self.rejects[NONTORUS], self.rejects[NONORIENTABLE]),
                tuple(self.tally) if diagnostics else None)


def _leaf(T, p, use_filter, diagnostics, c, out):
    c.leaves += 1
    if not use_filter:
        c.survivors += 1
        out.append((tuple(p), None))
        return
    r = run_filter(T, p, diagnostics)
    c.rejects[r[0]] += 1
    if diagnostics:
        c.tally[r[5] * 4 + r[6] * 2 + r[7]] += 1
    if r[0] == PASSED:
        c.survivors += 1
        out.append((tuple(p), r[:5]))


def search(T, prefix, resume, node_limit, use_filter, diagnostics=False):
    """Orderly enumeration of canonical pairings below a decision prefix.

    ``prefix`` is a list of partner choices fixing the shard root; the search
    never backtracks above it.  ``resume`` is a decision stack below the
    prefix (as returned in a previous result) at which to continue;
    ``node_limit`` bounds the number of nodes visited (-1 for none).

    Returns ``(pairings, stats, next_stack)``.  ``pairings`` lists
    (pairing tuple, filter result) for emitted leaves; ``stats`` is
    (nodes, canonical_leaves, survivors, (polar, nontorus, nonorientable
    rejections), tally or None); ``next_stack`` is None once the shard is
    exhausted, else the stack to pass back as ``resume``.
    """
    F = T.num_faces
    p = [-1] * F
    witness = _Witness(T)
    out = []
    c = _Counters()

    def assign(t, j):
        p[t] = j
        p[j] = t

    t_stack = []
    j_stack = []
    for j in prefix:
        t = _next_free(p, 0)
        if t >= F or j <= t or j >= F or p[j] >= 0:
            raise ValueError(f"invalid prefix {list(prefix)!r}")
        assign(t, j)
        t_stack.append(t)
        j_stack.append(j)
    floor = len(t_stack)
    if witness.run(p):
        return out, c.stats(diagnostics), None

    if resume:
        for j in resume:
            t = _next_free(p, 0)
            if t >= F or j <= t or j >= F or p[j] >= 0:
                raise ValueError(f"invalid resume stack {list(resume)!r}")
            assign(t, j)
            t_stack.append(t)
            j_stack.append(j)
        t = _next_free(p, 0)
        if t == F:
            # resume point was a leaf that had already been reported
            t = t_stack.pop()
            j = j_stack.pop()
            p[t] = p[j] = -1
        else:
            j = t
    else:
        t = _next_free(p, 0)
        if t == F:
            if t_stack:
                _leaf(T, p, use_filter, diagnostics, c, out)
            return out, c.stats(diagnostics), None
        j = t

    while True:
        j += 1
        while j < F and p[j] >= 0:
            j += 1
        if j >= F:
            if len(t_stack) == floor:
                return out, c.stats(diagnostics), None
            t = t_stack.pop()
            j = j_stack.pop()
            p[t] = p[j] = -1
            continue
        assign(t, j)
        c.nodes += 1
        if witness.run(p):
            p[t] = p[j] = -1
            continue
        t2 = _next_free(p, t + 1)
        if t2 == F:
            _leaf(T, p, use_filter, diagnostics, c, out)
            p[t] = p[j] = -1
            if node_limit >= 0 and c.nodes >= node_limit:
                # resume continues after this leaf
                return out, c.stats(diagnostics), j_stack[floor:] + [j]
            continue
        t_stack.append(t)
        j_stack.append(j)
        if node_limit >= 0 and c.nodes >= node_limit:
            return out, c.stats(diagnostics), j_stack[floor:]
        t = t2
        j = t2


class Kernel:
    """Search/filter kernel bound to one set of ``KernelTables``."""

    def __init__(self, tables):
        if tables.num_faces > 64:
            raise ValueError("at most 64 faces are supported")
        self.tables = tables

    def has_smaller_conjugate(self, p) -> bool:
        if len(p) != self.tables.num_faces:
            raise ValueError("pairing length does not match the spec")
        return has_smaller_conjugate(self.tables, p)

    def filter_pairing(self, p):
        if len(p) != self.tables.num_faces:
            return (NOT_INVOLUTION, -1, 0, 0, 0)
        return filter_pairing(self.tables, p)

    def diagnose(self, p):
        """(polar class single, every link chi 0, every link orientable); all computed."""
        if len(p) != self.tables.num_faces:
            return (False, False, False)
        r = run_filter(self.tables, p, True)
        if r[0] == NOT_INVOLUTION:
            return (False, False, False)
        return (bool(r[5]), bool(r[6]), bool(r[7]))

    def search(self, prefix, resume, node_limit, use_filter, diagnostics=False):
        return search(self.tables, prefix, resume, node_limit, use_filter, diagnostics)
