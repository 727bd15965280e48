"""Survey orchestration, per-survivor analysis and tetrahedral export."""
from __future__ import annotations

import json
import multiprocessing
import os
import time
from collections import Counter
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Sequence

from .complexcheck import GluedComplex, build_complex, check_complex
from .enumeration import shard_prefixes, validate_pairing
from .formats import (
    FormatError,
    Triangulation,
    manifest_line,
    parse_manifest_line,
    read_checkpoint,
    write_checkpoint,
)
from .groups import (
    AbelianGroup,
    Presentation,
    abelianization,
    recognize_commutator_power,
    spine_presentation,
    tietze_simplify,
)
from .kernels import IMPLEMENTATION, get_kernel
from .polyhedra import MODES, NORTH, ROTATIONAL, DipyramidSpec, Slot, face_table, pyramid_sets_for_mom


class InvariantError(AssertionError):
    """A survivor violated a structural invariant; indicates a bug."""


class SurveyInterrupted(Exception):
    """Stopped on budget or signal; the checkpoint allows resuming."""

    def __init__(self, message: str, checkpoint: str):
        super().__init__(message)
        self.checkpoint = checkpoint


class SurveyIOError(OSError):
    pass


# ---------------------------------------------------------------------------
# analysis of one pairing

@dataclass(frozen=True)
class SurveyRecord:
    spec: DipyramidSpec
    pairing: tuple[int, ...]
    boundary_count: int
    edge_class_count: int
    reversed_edges: int
    presentation: Presentation | None
    h1: AbelianGroup | None
    commutator_power: int | None

    def to_manifest(self) -> dict[str, Any]:
        pres = self.presentation
        return {
            "spec": ",".join(map(str, self.spec.sides)),
            "pairing": list(self.pairing),
            "boundary_count": self.boundary_count,
            "edge_class_count": self.edge_class_count,
            "reversed_edges": self.reversed_edges,
            "generators": pres.num_generators if pres else None,
            "relators": len(pres.relators) if pres else None,
            "relator_length": pres.total_length if pres else None,
            "h1_rank": self.h1.rank if self.h1 else None,
            "h1_torsion": list(self.h1.torsion) if self.h1 else None,
            "commutator_power": self.commutator_power,
        }


def check_survivor_invariants(cx: GluedComplex) -> None:
    s = cx.spec
    outcome = check_complex(cx)
    if not outcome.passed:
        raise InvariantError(f"survivor fails the filter: {outcome.reason}")
    if any(not link.orientable for link in cx.links):
        raise InvariantError("orientability check fired on an enumerated pairing")
    if cx.num_edge_classes != s.num_faces // 2 - s.num_polyhedra:
        raise InvariantError(f"{cx.num_edge_classes} edge classes, expected F/2 - P")
    if sum(cx.link_euler()) != 0 or len(cx.polar_classes) != 1:
        raise InvariantError("link Euler characteristics do not sum to zero")
    if cx.num_cusps < 2:
        raise InvariantError("survivor has a single boundary component")


def analyze_pairing(spec: DipyramidSpec, perm: Sequence[int], groups: bool = True) -> SurveyRecord:
    """Build, check and (optionally) compute group invariants of a survivor."""
    cx = build_complex(spec, perm)
    check_survivor_invariants(cx)
    nrev = sum(1 for ec in cx.edge_classes if ec.reversed)
    if not groups:
        return SurveyRecord(spec, cx.perm, cx.num_cusps, cx.num_edge_classes, nrev, None, None, None)
    pres = spine_presentation(spec, complex_=cx)
    if pres.num_generators - len(pres.relators) != 1:
        raise InvariantError("spine presentation does not have deficiency one")
    simple = tietze_simplify(pres)
    h1 = abelianization(pres)
    if abelianization(simple) != h1:
        raise InvariantError("simplification changed the abelianization")
    if h1.rank < 1:
        raise InvariantError("first Betti number is zero")
    n = recognize_commutator_power(simple)
    return SurveyRecord(spec, cx.perm, cx.num_cusps, cx.num_edge_classes, nrev, simple, h1, n)


# ---------------------------------------------------------------------------
# tetrahedral subdivision
#
# Tetrahedron (P, m) has vertices 0: N, 1: S, 2: e_m, 3: e_{m+1} and takes
# the index of north face m of P.  The north face m is opposite vertex 1,
# the south face m opposite vertex 0.

_NORTH_SLOTS = (0, 2, 3, 1)     # tet vertex at APEX, EQ_CW, EQ_CCW; opposite vertex
_SOUTH_SLOTS = (1, 3, 2, 0)


def subdivide_to_tetrahedra(spec: DipyramidSpec, perm: Sequence[int]) -> Triangulation:
    perm = validate_pairing(spec, perm)
    table = face_table(spec)
    K = spec.num_north

    def tet_of(face):
        fi = table[face]
        tet = table.index(fi.polyhedron, NORTH, fi.position)
        return tet, (_NORTH_SLOTS if fi.hemisphere == NORTH else _SOUTH_SLOTS)

    gluings: list[list] = [[None] * 4 for _ in range(K)]
    for p, k in enumerate(spec.sides):
        for m in range(k):
            t = table.index(p, NORTH, m)
            prev = table.index(p, NORTH, (m - 1) % k)
            nxt = table.index(p, NORTH, (m + 1) % k)
            # (N, S, e_m) is opposite e_{m+1} here and opposite e_{m-1} in tet m-1
            gluings[t][3] = (prev, (0, 1, 3, 2))
            gluings[t][2] = (nxt, (0, 1, 3, 2))
    for i in range(spec.num_faces):
        j = perm[i]
        ti, si = tet_of(i)
        tj, sj = tet_of(j)
        image = [0] * 4
        image[si[Slot.APEX]] = sj[Slot.APEX]
        image[si[Slot.EQ_CW]] = sj[Slot.EQ_CCW]
        image[si[Slot.EQ_CCW]] = sj[Slot.EQ_CW]
        image[si[3]] = sj[3]
        gluings[ti][si[3]] = (tj, tuple(image))
    tri = Triangulation(tuple(tuple(g) for g in gluings))
    tri.validate()
    return tri


def triangulation_vertex_links(tri: Triangulation) -> dict[tuple[int, int], tuple[int, int]]:
    """Vertex classes of a triangulation with the Euler characteristic of each link.

    Returns a map from each (tetrahedron, vertex) to (class id, chi).
    """
    n = tri.size
    parent = {(t, v): (t, v) for t in range(n) for v in range(4)}
    ends = {(t, v, w): (t, v, w) for t in range(n) for v in range(4) for w in range(4) if v != w}

    def find(uf, a):
        while uf[a] != a:
            uf[a] = uf[uf[a]]
            a = uf[a]
        return a

    def union(uf, a, b):
        ra, rb = find(uf, a), find(uf, b)
        if ra != rb:
            uf[max(ra, rb)] = min(ra, rb)

    for t, faces in enumerate(tri.gluings):
        for f, (u, perm) in enumerate(faces):
            others = [v for v in range(4) if v != f]
            for v in others:
                union(parent, (t, v), (u, perm[v]))
                for w in others:
                    if w != v:
                        union(ends, (t, v, w), (u, perm[v], perm[w]))
    triangles = Counter(find(parent, x) for x in parent)
    link_vertices = Counter(find(parent, (t, v)) for (t, v, w) in ends if find(ends, (t, v, w)) == (t, v, w))
    roots = sorted(triangles)
    chi = {r: link_vertices[r] - 3 * triangles[r] // 2 + triangles[r] for r in roots}
    return {x: (roots.index(find(parent, x)), chi[find(parent, x)]) for x in parent}


def polyhedral_vertex_to_tet(spec: DipyramidSpec, vertex: int) -> tuple[int, int]:
    """A (tetrahedron, vertex) realizing a polyhedral vertex of the subdivision."""
    table = face_table(spec)
    p = max(q for q in range(spec.num_polyhedra) if table.vertex_offset[q] <= vertex)
    local = vertex - table.vertex_offset[p]
    k = spec.sides[p]
    if local < 2:
        return table.index(p, NORTH, 0), local
    return table.index(p, NORTH, local - 2), 2


# ---------------------------------------------------------------------------
# survey

def _default_depth(spec: DipyramidSpec) -> int:
    return 2 if spec.num_faces < 20 else 4


def _run_shard(job):
    spec_sides, mode, prefix, groups, pure = job
    spec = DipyramidSpec(tuple(spec_sides))
    kernel = get_kernel(spec, mode, pure)
    out, stats, _ = kernel.search(list(prefix), None, -1, True)
    lines = []
    comm = Counter()
    bound = Counter()
    for perm, res in out:
        rec = analyze_pairing(spec, perm, groups)
        if rec.edge_class_count != res[3] or rec.boundary_count != res[2]:
            raise InvariantError("kernel and complex disagree on class counts")
        lines.append(manifest_line(rec.to_manifest()))
        bound[rec.boundary_count] += 1
        if rec.commutator_power is not None:
            comm[rec.commutator_power] += 1
    return lines, stats, comm, bound


def _empty_spec_summary():
    return {"candidates": 0, "survivors": 0, "nodes": 0,
            "rejected": {"polar_class_split": 0, "nontorus_link": 0, "nonorientable_link": 0},
            "commutator_powers": {}, "boundary_counts": {}}


def _merge(summary, stats, comm, bound):
    summary["nodes"] += stats[0]
    summary["candidates"] += stats[1]
    summary["survivors"] += stats[2]
    for key, v in zip(("polar_class_split", "nontorus_link", "nonorientable_link"), stats[3]):
        summary["rejected"][key] += v
    for table, counter in ((summary["commutator_powers"], comm), (summary["boundary_counts"], bound)):
        for k, v in counter.items():
            table[str(k)] = table.get(str(k), 0) + v


def survey_paths(out: str) -> tuple[str, str]:
    return out + ".ckpt", out + ".summary.json"


def run_survey(n: int, out: str, mode: str = ROTATIONAL, workers: int = 1, resume: bool = False,
               *, specs: Iterable[DipyramidSpec] | None = None, groups: bool = True,
               shard_depth: int | None = None, max_shards: int | None = None,
               time_budget: float | None = None, pure: bool = False,
               progress: Callable[[str], None] | None = None) -> dict[str, Any]:
    """Enumerate, filter and analyze every dipyramid collection of a Mom-n.

    Survivors are appended to the manifest at ``out`` in shard order, so
    the file is identical for any number of workers.  A checkpoint is
    rewritten after every shard; with ``resume`` the survey continues from
    it.  ``specs`` restricts the run to some of the collections, and
    ``max_shards``/``time_budget`` stop it early with ``SurveyInterrupted``.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    all_specs = pyramid_sets_for_mom(n)
    if specs is not None:
        wanted = list(specs)
        bad = [s for s in wanted if s not in all_specs]
        if bad:
            raise ValueError(f"{bad[0]} is not a dipyramid collection for Mom-{n}")
        all_specs = [s for s in all_specs if s in wanted]
    ckpt_path, summary_path = survey_paths(out)
    params = {"n": n, "mode": mode, "specs": [str(s) for s in all_specs], "groups": groups,
              "shard_depth": shard_depth}

    state = None
    if resume and os.path.exists(ckpt_path):
        state = read_checkpoint(ckpt_path)
        if state["params"] != params:
            raise FormatError("checkpoint was written for a different survey")
    if state is None:
        state = {"params": params, "spec_index": 0, "shard_index": 0, "prefix": None,
                 "manifest_bytes": 0, "emitted": 0, "complete": False,
                 "per_spec": {str(s): _empty_spec_summary() for s in all_specs}}
    try:
        with open(out, "ab") as fh:
            fh.truncate(state["manifest_bytes"])
    except OSError as exc:
        raise SurveyIOError(f"cannot open manifest {out}: {exc}") from exc

    started = time.monotonic()
    done_shards = 0
    pool = None
    try:
        if workers > 1:
            pool = multiprocessing.get_context("fork").Pool(workers)
        for si in range(state["spec_index"], len(all_specs)):
            spec = all_specs[si]
            depth = shard_depth if shard_depth is not None else _default_depth(spec)
            prefixes = shard_prefixes(spec, mode, depth)
            first = state["shard_index"] if si == state["spec_index"] else 0
            if first and state["prefix"] is not None and list(prefixes[first]) != state["prefix"]:
                raise FormatError("checkpoint decision stack does not match the shard plan")
            jobs = [(spec.sides, mode, pre, groups, pure) for pre in prefixes[first:]]
            results = pool.imap(_run_shard, jobs) if pool else map(_run_shard, jobs)
            for offset, (lines, stats, comm, bound) in enumerate(results):
                shard = first + offset
                try:
                    with open(out, "a") as fh:
                        fh.writelines(lines)
                        fh.flush()
                        os.fsync(fh.fileno())
                        size = fh.tell()
                except OSError as exc:
                    raise SurveyIOError(f"writing {out}: {exc}") from exc
                _merge(state["per_spec"][str(spec)], stats, comm, bound)
                state["emitted"] += len(lines)
                state["manifest_bytes"] = size
                if shard + 1 < len(prefixes):
                    state["spec_index"], state["shard_index"] = si, shard + 1
                    state["prefix"] = list(prefixes[shard + 1])
                else:
                    state["spec_index"], state["shard_index"], state["prefix"] = si + 1, 0, None
                write_checkpoint(ckpt_path, state)
                done_shards += 1
                if progress:
                    progress(f"{spec} shard {shard + 1}/{len(prefixes)}: {state['emitted']} survivors so far")
                over_time = time_budget is not None and time.monotonic() - started > time_budget
                if (max_shards is not None and done_shards >= max_shards) or over_time:
                    if state["spec_index"] < len(all_specs):
                        raise SurveyInterrupted("survey budget reached", ckpt_path)
    except KeyboardInterrupt:
        raise SurveyInterrupted("interrupted", ckpt_path) from None
    finally:
        if pool:
            pool.terminate()

    state["complete"] = True
    write_checkpoint(ckpt_path, state)
    summary = survey_summary(state, n, mode)
    try:
        with open(summary_path, "w") as fh:
            json.dump(summary, fh, indent=1)
            fh.write("\n")
    except OSError as exc:
        raise SurveyIOError(f"writing {summary_path}: {exc}") from exc
    return summary


def survey_summary(state: dict[str, Any], n: int, mode: str) -> dict[str, Any]:
    per_spec = state["per_spec"]
    total = _empty_spec_summary()
    for s in per_spec.values():
        total["nodes"] += s["nodes"]
        total["candidates"] += s["candidates"]
        total["survivors"] += s["survivors"]
        for key in total["rejected"]:
            total["rejected"][key] += s["rejected"][key]
        for name in ("commutator_powers", "boundary_counts"):
            for k, v in s[name].items():
                total[name][k] = total[name].get(k, 0) + v
    return {"n": n, "mode": mode, "kernel": IMPLEMENTATION, "per_spec": per_spec, "total": total}


def manifest_stats(path: str) -> dict[str, Any]:
    """Per-spec survivor counts, commutator-power hits and boundary histogram."""
    per_spec: dict[str, dict[str, Any]] = {}
    last = None
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            try:
                rec = parse_manifest_line(line)
            except (FormatError, ValueError) as exc:
                raise FormatError(f"{path}:{lineno}: {exc}") from None
            key = (rec["spec"], rec["pairing"])
            if last is not None and last[0] == key[0] and not last[1] < key[1]:
                raise FormatError(f"{path}:{lineno}: records out of order or duplicated")
            last = key
            s = per_spec.setdefault(rec["spec"], {"survivors": 0, "commutator_powers": {},
                                                  "boundary_counts": {}, "h1_ranks": {}})
            s["survivors"] += 1
            for name, value in (("commutator_powers", rec["commutator_power"]),
                                ("boundary_counts", rec["boundary_count"]),
                                ("h1_ranks", rec["h1_rank"])):
                if value is not None:
                    s[name][str(value)] = s[name].get(str(value), 0) + 1
    return {"per_spec": per_spec, "survivors": sum(s["survivors"] for s in per_spec.values())}
