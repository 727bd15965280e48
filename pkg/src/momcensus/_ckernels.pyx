# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled search and filter kernels.

Same algorithms and return conventions as ``_pykernels``; the pure-Python
module is the reference these are tested against.
"""

cdef enum:
    MAXF = 64
    MAXP = 16
    MAXL = 32
    MAXH = 64
    MAXT = 8
    MAXV = 96
    MAXE = 96

cdef enum:
    C_PASSED = 0
    C_NOT_INVOLUTION = 1
    C_POLAR_SPLIT = 2
    C_NONTORUS = 3
    C_NONORIENTABLE = 4

PASSED = C_PASSED
NOT_INVOLUTION = C_NOT_INVOLUTION
POLAR_SPLIT = C_POLAR_SPLIT
NONTORUS = C_NONTORUS
NONORIENTABLE = C_NONORIENTABLE

IMPLEMENTATION = "cython"


cdef struct Tab:
    int F
    int P
    int NV
    int NE
    int face_poly[MAXF]
    int face_local[MAXF]
    int poly_type[MAXP]
    int poly_faces[MAXP][MAXL]
    int ntypes
    int type_npolys[MAXT]
    int type_polys[MAXT][MAXP]
    int type_nh[MAXT]
    int type_perm[MAXT][MAXH][MAXL]
    int type_inv[MAXT][MAXH][MAXL]
    int corners[MAXF][3]
    int edges[MAXF][3]
    int ends[MAXF][3][2]
    int flip[MAXF]
    int vpolar[MAXV]
    int vdeg[MAXV]
    int end_vertex[2 * MAXE]


cdef struct WState:
    int src_of_tgt[MAXP]
    int tgt_of_src[MAXP]
    int h_of_src[MAXP]


cdef bint w_step(Tab* T, WState* W, int* p, int y) noexcept nogil:
    cdef int py, ty, ly, s, typ, hi, k
    if y == T.F:
        return False
    py = p[y]
    if py < 0:
        return False
    ty = T.face_poly[y]
    ly = T.face_local[y]
    s = W.src_of_tgt[ty]
    if s >= 0:
        return w_after(T, W, p, y, py,
                       T.poly_faces[s][T.type_inv[T.poly_type[s]][W.h_of_src[s]][ly]])
    typ = T.poly_type[ty]
    for k in range(T.type_npolys[typ]):
        s = T.type_polys[typ][k]
        if W.tgt_of_src[s] >= 0:
            continue
        for hi in range(T.type_nh[typ]):
            W.src_of_tgt[ty] = s
            W.tgt_of_src[s] = ty
            W.h_of_src[s] = hi
            if w_after(T, W, p, y, py, T.poly_faces[s][T.type_inv[typ][hi][ly]]):
                W.src_of_tgt[ty] = -1
                W.tgt_of_src[s] = -1
                W.h_of_src[s] = -1
                return True
            W.src_of_tgt[ty] = -1
            W.tgt_of_src[s] = -1
            W.h_of_src[s] = -1
    return False


cdef bint w_after(Tab* T, WState* W, int* p, int y, int py, int x) noexcept nogil:
    cdef int z, zp, lz, tz, v, typ, hi, k
    z = p[x]
    if z < 0:
        return False
    zp = T.face_poly[z]
    lz = T.face_local[z]
    tz = W.tgt_of_src[zp]
    if tz >= 0:
        v = T.poly_faces[tz][T.type_perm[T.poly_type[zp]][W.h_of_src[zp]][lz]]
        if v < py:
            return True
        if v > py:
            return False
        return w_step(T, W, p, y + 1)
    typ = T.poly_type[zp]
    for k in range(T.type_npolys[typ]):
        tz = T.type_polys[typ][k]
        if W.src_of_tgt[tz] >= 0:
            continue
        for hi in range(T.type_nh[typ]):
            v = T.poly_faces[tz][T.type_perm[typ][hi][lz]]
            if v > py:
                continue
            if v < py:
                return True
            W.src_of_tgt[tz] = zp
            W.tgt_of_src[zp] = tz
            W.h_of_src[zp] = hi
            if w_step(T, W, p, y + 1):
                W.src_of_tgt[tz] = -1
                W.tgt_of_src[zp] = -1
                W.h_of_src[zp] = -1
                return True
            W.src_of_tgt[tz] = -1
            W.tgt_of_src[zp] = -1
            W.h_of_src[zp] = -1
    return False


cdef bint has_witness(Tab* T, int* p) noexcept nogil:
    cdef WState W
    cdef int i
    for i in range(T.P):
        W.src_of_tgt[i] = -1
        W.tgt_of_src[i] = -1
        W.h_of_src[i] = -1
    return w_step(T, &W, p, 0)


cdef inline int uf_find(int* parent, int a) noexcept nogil:
    while parent[a] != a:
        parent[a] = parent[parent[a]]
        a = parent[a]
    return a


cdef inline int uf_find_parity(int* parent, int* parity, int a, int* acc) noexcept nogil:
    cdef int x = 0
    while parent[a] != a:
        x ^= parity[a]
        a = parent[a]
    acc[0] = x
    return a


cdef struct FilterResult:
    int code
    int bad
    int nvc
    int nec
    int nrev
    int polar_ok
    int chi_ok
    int orient_ok


cdef FilterResult run_filter(Tab* T, int* p, bint full) noexcept nogil:
    cdef FilterResult R
    cdef int F = T.F, NV = T.NV, NE = T.NE
    cdef int i, j, v, e, n, r, ra, rb, pa, pb, par, s, t, a, b, chi, polar_root
    cdef int vpar[MAXV]
    cdef int epar[MAXE]
    cdef int npar[2 * MAXE]
    cdef int opar[MAXV]
    cdef int opty[MAXV]
    cdef int bad_orient[MAXV]
    cdef int faces_l[MAXV]
    cdef int corners_l[MAXV]
    cdef int verts_l[MAXV]
    cdef int pairs[3][2]
    cdef int st[3][2]
    st[0][0] = 0; st[0][1] = 1
    st[1][0] = 1; st[1][1] = 0
    st[2][0] = 2; st[2][1] = 2
    R.code = 0; R.bad = -1; R.nvc = 0; R.nec = 0; R.nrev = 0
    R.polar_ok = 1; R.chi_ok = 1; R.orient_ok = 1

    for i in range(F):
        j = p[i]
        if j < 0 or j >= F or j == i or p[j] != i:
            R.code = C_NOT_INVOLUTION
            return R

    for v in range(NV):
        vpar[v] = v
        opar[v] = v
        opty[v] = 0
        bad_orient[v] = 0
        faces_l[v] = 0
        corners_l[v] = 0
        verts_l[v] = 0
    for i in range(F):
        j = p[i]
        if j < i:
            continue
        pairs[0][0] = T.corners[i][0]; pairs[0][1] = T.corners[j][0]
        pairs[1][0] = T.corners[i][1]; pairs[1][1] = T.corners[j][2]
        pairs[2][0] = T.corners[i][2]; pairs[2][1] = T.corners[j][1]
        for s in range(3):
            ra = uf_find(vpar, pairs[s][0])
            rb = uf_find(vpar, pairs[s][1])
            if ra != rb:
                vpar[rb] = ra

    polar_root = -1
    for v in range(NV):
        if T.vpolar[v]:
            r = uf_find(vpar, v)
            if polar_root < 0:
                polar_root = r
            elif r != polar_root and R.polar_ok:
                R.code = C_POLAR_SPLIT
                R.bad = v
                R.polar_ok = 0
                if not full:
                    return R

    for e in range(NE):
        epar[e] = e
    for n in range(2 * NE):
        npar[n] = n
    for i in range(F):
        j = p[i]
        if j < i:
            continue
        for s in range(3):
            a = st[s][0]
            b = st[s][1]
            ra = uf_find(epar, T.edges[i][a])
            rb = uf_find(epar, T.edges[j][b])
            if ra != rb:
                epar[rb] = ra
            ra = uf_find(npar, T.ends[i][a][0])
            rb = uf_find(npar, T.ends[j][b][1])
            if ra != rb:
                npar[rb] = ra
            ra = uf_find(npar, T.ends[i][a][1])
            rb = uf_find(npar, T.ends[j][b][0])
            if ra != rb:
                npar[rb] = ra
        par = T.flip[i] ^ T.flip[j]
        pairs[0][0] = T.corners[i][0]; pairs[0][1] = T.corners[j][0]
        pairs[1][0] = T.corners[i][1]; pairs[1][1] = T.corners[j][2]
        pairs[2][0] = T.corners[i][2]; pairs[2][1] = T.corners[j][1]
        for s in range(3):
            ra = uf_find_parity(opar, opty, pairs[s][0], &pa)
            rb = uf_find_parity(opar, opty, pairs[s][1], &pb)
            if ra != rb:
                opar[rb] = ra
                opty[rb] = pa ^ pb ^ par
                bad_orient[ra] |= bad_orient[rb]
            elif (pa ^ pb) != par:
                bad_orient[ra] = 1

    for e in range(NE):
        if uf_find(epar, e) == e:
            R.nec += 1
        if uf_find(npar, 2 * e) == uf_find(npar, 2 * e + 1):
            R.nrev += 1
    for v in range(NV):
        r = uf_find(vpar, v)
        if r == v:
            R.nvc += 1
        faces_l[r] += 1
        corners_l[r] += T.vdeg[v]
    for n in range(2 * NE):
        if uf_find(npar, n) == n:
            verts_l[uf_find(vpar, T.end_vertex[n])] += 1
    for v in range(NV):
        if uf_find(vpar, v) != v:
            continue
        chi = verts_l[v] - corners_l[v] // 2 + faces_l[v]
        if chi != 0 and R.chi_ok:
            R.chi_ok = 0
            if R.code == C_PASSED:
                R.code = C_NONTORUS
                R.bad = v
            if not full:
                return R
    for v in range(NV):
        if uf_find(vpar, v) != v:
            continue
        if bad_orient[uf_find_parity(opar, opty, v, &pa)] and R.orient_ok:
            R.orient_ok = 0
            if R.code == C_PASSED:
                R.code = C_NONORIENTABLE
                R.bad = v
            if not full:
                return R
    return R


cdef class Kernel:
    """Search/filter kernel bound to one set of ``KernelTables``."""

    cdef Tab T
    cdef readonly object tables

    def __init__(self, tables):
        cdef int i, j, k, t, h
        self.tables = tables
        if (tables.num_faces > MAXF or tables.num_polyhedra > MAXP
                or tables.num_vertices > MAXV or tables.num_edges > MAXE
                or len(tables.type_perms) > MAXT):
            raise ValueError("spec too large for the compiled kernel")
        self.T.F = tables.num_faces
        self.T.P = tables.num_polyhedra
        self.T.NV = tables.num_vertices
        self.T.NE = tables.num_edges
        for i in range(self.T.F):
            self.T.face_poly[i] = tables.face_poly[i]
            self.T.face_local[i] = tables.face_local[i]
            for j in range(3):
                self.T.corners[i][j] = tables.face_corners[i][j]
                self.T.edges[i][j] = tables.face_edges[i][j]
                self.T.ends[i][j][0] = tables.face_ends[i][j][0]
                self.T.ends[i][j][1] = tables.face_ends[i][j][1]
            self.T.flip[i] = tables.face_flip[i]
        for i in range(self.T.P):
            self.T.poly_type[i] = tables.poly_type[i]
            if len(tables.poly_faces[i]) > MAXL:
                raise ValueError("dipyramid too large for the compiled kernel")
            for j, f in enumerate(tables.poly_faces[i]):
                self.T.poly_faces[i][j] = f
        self.T.ntypes = len(tables.type_perms)
        for t in range(self.T.ntypes):
            self.T.type_npolys[t] = len(tables.type_polys[t])
            for k, q in enumerate(tables.type_polys[t]):
                self.T.type_polys[t][k] = q
            if len(tables.type_perms[t]) > MAXH:
                raise ValueError("local symmetry group too large for the compiled kernel")
            self.T.type_nh[t] = len(tables.type_perms[t])
            for h in range(self.T.type_nh[t]):
                for j, v in enumerate(tables.type_perms[t][h]):
                    self.T.type_perm[t][h][j] = v
                for j, v in enumerate(tables.type_inv[t][h]):
                    self.T.type_inv[t][h][j] = v
        for i in range(self.T.NV):
            self.T.vpolar[i] = tables.vertex_polar[i]
            self.T.vdeg[i] = tables.vertex_degree[i]
        for i in range(2 * self.T.NE):
            self.T.end_vertex[i] = tables.end_vertex[i]

    def has_smaller_conjugate(self, p):
        cdef int buf[MAXF]
        cdef int i
        if len(p) != self.T.F:
            raise ValueError("pairing length does not match the spec")
        for i in range(self.T.F):
            buf[i] = p[i]
        return has_witness(&self.T, buf)

    def filter_pairing(self, p):
        cdef int buf[MAXF]
        cdef int i
        cdef FilterResult R
        if len(p) != self.T.F:
            return (NOT_INVOLUTION, -1, 0, 0, 0)
        for i in range(self.T.F):
            buf[i] = p[i]
        R = run_filter(&self.T, buf, False)
        return (R.code, R.bad, R.nvc, R.nec, R.nrev)

    def diagnose(self, p):
        """(polar class single, every link chi 0, every link orientable); all computed."""
        cdef int buf[MAXF]
        cdef int i
        cdef FilterResult R
        if len(p) != self.T.F:
            return (False, False, False)
        for i in range(self.T.F):
            buf[i] = p[i]
        R = run_filter(&self.T, buf, True)
        if R.code == C_NOT_INVOLUTION:
            return (False, False, False)
        return (bool(R.polar_ok), bool(R.chi_ok), bool(R.orient_ok))

    def search(self, prefix, resume, long long node_limit, bint use_filter, bint diagnostics=False):
        cdef Tab* T = &self.T
        cdef int F = T.F
        cdef int p[MAXF]
        cdef int t_stack[MAXF]
        cdef int j_stack[MAXF]
        cdef int depth = 0, floor, t, j, t2, i
        cdef long long nodes = 0, leaves = 0, survivors = 0
        cdef long long rejects[5]
        cdef long long tally[8]
        cdef FilterResult R
        for i in range(5):
            rejects[i] = 0
        for i in range(8):
            tally[i] = 0
        out = []
        for i in range(F):
            p[i] = -1
        for jj in prefix:
            t = 0
            while t < F and p[t] >= 0:
                t += 1
            j = jj
            if t >= F or j <= t or j >= F or p[j] >= 0:
                raise ValueError(f"invalid prefix {list(prefix)!r}")
            p[t] = j
            p[j] = t
            t_stack[depth] = t
            j_stack[depth] = j
            depth += 1
        floor = depth
        if has_witness(T, p):
            return out, self._stats(0, 0, 0, rejects, tally, diagnostics), None

        t = 0
        while t < F and p[t] >= 0:
            t += 1
        if resume:
            for jj in resume:
                j = jj
                if t >= F or j <= t or j >= F or p[j] >= 0:
                    raise ValueError(f"invalid resume stack {list(resume)!r}")
                p[t] = j
                p[j] = t
                t_stack[depth] = t
                j_stack[depth] = j
                depth += 1
                while t < F and p[t] >= 0:
                    t += 1
            if t == F:
                depth -= 1
                t = t_stack[depth]
                j = j_stack[depth]
                p[t] = -1
                p[j] = -1
            else:
                j = t
        else:
            if t == F:
                if depth > 0:
                    leaves += 1
                    if self._leaf(p, use_filter, diagnostics, rejects, tally, out):
                        survivors += 1
                return out, self._stats(nodes, leaves, survivors, rejects, tally, diagnostics), None
            j = t

        while True:
            j += 1
            while j < F and p[j] >= 0:
                j += 1
            if j >= F:
                if depth == floor:
                    return out, self._stats(nodes, leaves, survivors, rejects, tally, diagnostics), None
                depth -= 1
                t = t_stack[depth]
                j = j_stack[depth]
                p[t] = -1
                p[j] = -1
                continue
            p[t] = j
            p[j] = t
            nodes += 1
            if has_witness(T, p):
                p[t] = -1
                p[j] = -1
                continue
            t2 = t + 1
            while t2 < F and p[t2] >= 0:
                t2 += 1
            if t2 == F:
                leaves += 1
                if self._leaf(p, use_filter, diagnostics, rejects, tally, out):
                    survivors += 1
                p[t] = -1
                p[j] = -1
                if node_limit >= 0 and nodes >= node_limit:
                    return out, self._stats(nodes, leaves, survivors, rejects, tally, diagnostics), [j_stack[i] for i in range(floor, depth)] + [j]
                continue
            t_stack[depth] = t
            j_stack[depth] = j
            depth += 1
            if node_limit >= 0 and nodes >= node_limit:
                return out, self._stats(nodes, leaves, survivors, rejects, tally, diagnostics), [j_stack[i] for i in range(floor, depth)]
            t = t2
            j = t2

    cdef bint _leaf(self, int* p, bint use_filter, bint diagnostics,
                    long long* rejects, long long* tally, list out):
        cdef FilterResult R
        cdef int i
        perm = None
        if not use_filter:
            out.append((tuple([p[i] for i in range(self.T.F)]), None))
            return True
        R = run_filter(&self.T, p, diagnostics)
        rejects[R.code] += 1
        if diagnostics:
            tally[R.polar_ok * 4 + R.chi_ok * 2 + R.orient_ok] += 1
        if R.code != C_PASSED:
            return False
        out.append((tuple([p[i] for i in range(self.T.F)]),
                    (R.code, R.bad, R.nvc, R.nec, R.nrev)))
        return True

    cdef object _stats(self, long long nodes, long long leaves, long long survivors,
                       long long* rejects, long long* tally, bint diagnostics):
        return (nodes, leaves, survivors,
                (rejects[C_POLAR_SPLIT], rejects[C_NONTORUS], rejects[C_NONORIENTABLE]),
                tuple([tally[i] for i in range(8)]) if diagnostics else None)
