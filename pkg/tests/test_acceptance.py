"""Acceptance criteria, one test per criterion.

Each test prints a single ``criterion N: PASS|FAIL ...`` line (visible
without ``-s``).  The full Mom-4 survey in criterion 3 takes a long time on
one core; set MOMCENSUS_SKIP_MOM4=1 to run only its reduced-scope
checkpoint/resume part.
"""
import itertools
import os
import random
import time

import pytest

from momcensus.cli import main
from momcensus.complexcheck import build_complex, filter_pairing
from momcensus.enumeration import all_pairings, canonical_form, enumerate_pairings, validate_pairing
from momcensus.formats import (
    emit_description,
    format_triangulation,
    parse_description,
    parse_manifest_line,
    parse_triangulation,
)
from momcensus.groups import (
    Presentation,
    abelianization,
    format_presentation,
    free_reduce,
    invariant_factors_by_minors,
    invert,
    parse_presentation,
    recognize_commutator_power,
    smith_normal_form,
    spine_presentation,
)
from momcensus.handles import (
    Complexity,
    classify,
    complexity,
    dual_pyramid_spec,
    load_fixture,
    rho1,
    valence,
)
from momcensus.pipeline import SurveyInterrupted, analyze_pairing, run_survey, subdivide_to_tetrahedra
from momcensus.polyhedra import DipyramidSpec, pyramid_sets_for_mom

from test_handles import random_mom, random_structure

MOM23_TOTAL = 4231
MOM4_TOTAL = 1_033_610


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
    return emit


@pytest.fixture(scope="module")
def mom23(tmp_path_factory):
    d = tmp_path_factory.mktemp("mom23")
    out = {}
    for n in (2, 3):
        path = str(d / f"mom{n}.jsonl")
        summary = run_survey(n, path)
        with open(path) as fh:
            records = [parse_manifest_line(line) for line in fh]
        out[n] = (summary, records)
    return out


def test_criterion_1_pyramid_sets(report, capsys):
    start = time.perf_counter()
    got = {}
    for n in (2, 3, 4):
        assert main(["sets", str(n)]) == 0
        got[n] = capsys.readouterr().out.split()
    elapsed = time.perf_counter() - start
    expected = {2: ["{3,3}", "{4}"], 3: ["{3,3,3}", "{3,4}", "{5}"],
                4: ["{3,3,3,3}", "{3,3,4}", "{3,5}", "{4,4}", "{6}"]}
    ok = got == expected and elapsed < 1
    report(1, ok, f"sets 2/3/4 -> {[len(got[n]) for n in (2, 3, 4)]} in {elapsed:.3f}s")
    assert ok


def test_criterion_2_mom23_count(report, mom23):
    total = mom23[2][0]["total"]["survivors"] + mom23[3][0]["total"]["survivors"]
    per = {k: v["survivors"] for n in (2, 3) for k, v in mom23[n][0]["per_spec"].items()}
    ok = total == MOM23_TOTAL and mom23[2][0]["mode"] == "rotational"
    report(2, ok, f"{total} survivors (target {MOM23_TOTAL}) under the default mode; per spec {per}")
    assert ok


@pytest.mark.slow
def test_criterion_3_mom4_count(report, tmp_path):
    # reduced-scope checkpoint/resume on {6}
    spec6 = [DipyramidSpec.of((6,))]
    ref, out = str(tmp_path / "ref.jsonl"), str(tmp_path / "out.jsonl")
    run_survey(4, ref, specs=spec6, groups=False, shard_depth=3)
    try:
        run_survey(4, out, specs=spec6, groups=False, shard_depth=3, max_shards=3)
        interrupted = False
    except SurveyInterrupted:
        interrupted = True
    run_survey(4, out, specs=spec6, groups=False, shard_depth=3, resume=True)
    resume_ok = interrupted and open(ref, "rb").read() == open(out, "rb").read()
    if os.environ.get("MOMCENSUS_SKIP_MOM4", "") not in ("", "0"):
        report(3, False, f"full Mom-4 survey skipped; {{6}} checkpoint/resume {'ok' if resume_ok else 'broken'}")
        pytest.skip("MOMCENSUS_SKIP_MOM4 set")
    start = time.perf_counter()
    summary = run_survey(4, str(tmp_path / "mom4.jsonl"), groups=False, workers=os.cpu_count() or 1)
    total = summary["total"]["survivors"]
    per = {k: v["survivors"] for k, v in summary["per_spec"].items()}
    ok = total == MOM4_TOTAL and resume_ok
    report(3, ok, f"{total} survivors (target {MOM4_TOTAL}) in {time.perf_counter() - start:.0f}s; "
                  f"per spec {per}; {{6}} checkpoint/resume {'ok' if resume_ok else 'broken'}; "
                  "see docs/discrepancy.md")
    assert resume_ok
    assert total == MOM4_TOTAL


def test_criterion_4_reference_gluings(report):
    from importlib import resources
    text = resources.files("momcensus").joinpath("data/reference_gluings.txt").read_text()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    problems = []
    canon = set()
    for line in lines:
        spec, perm = parse_description(line)
        if emit_description(spec, perm) != line:
            problems.append(f"round trip {line}")
        validate_pairing(spec, perm)
        if not filter_pairing(spec, perm).passed:
            problems.append(f"filter {line}")
            continue
        rec = analyze_pairing(spec, perm)
        pres = spine_presentation(spec, perm)
        if rec.boundary_count < 2 or pres.num_generators - len(pres.relators) != 1 or rec.h1.rank < 1:
            problems.append(f"invariants {line}")
        canon.add((spec, canonical_form(spec, perm)))
    distinct = len(canon) == len(lines)
    ok = len(lines) == 34 and not problems and distinct
    report(4, ok, f"{len(lines)} entries, {len(problems)} problems, pairwise non-conjugate: {distinct}")
    assert ok, problems


def test_criterion_5_orbit_oracle(report):
    details = []
    ok = True
    for sides, n_inv in (((3,), 15), ((4,), 105), ((3, 3), 10395)):
        spec = DipyramidSpec.of(sides)
        invs = list(all_pairings(spec.num_faces))
        reps = sorted({canonical_form(spec, p) for p in invs})
        found = list(enumerate_pairings(spec))
        ok &= len(invs) == n_inv and found == reps
        details.append(f"{spec}: {len(invs)} involutions, {len(reps)} orbits")
    report(5, ok, "; ".join(details))
    assert ok


def test_criterion_6_structural_invariants(report, mom23):
    bad = 0
    count = 0
    for n in (2, 3):
        for rec in mom23[n][1]:
            spec = DipyramidSpec.of(int(x) for x in rec["spec"].split(","))
            cx = build_complex(spec, rec["pairing"])
            count += 1
            good = (cx.num_edge_classes == spec.num_faces // 2 - spec.num_polyhedra
                    and all(l.euler_characteristic == 0 and l.orientable for l in cx.links)
                    and len(cx.polar_classes) == 1 and sum(cx.link_euler()) == 0
                    and rec["edge_class_count"] == cx.num_edge_classes)
            bad += not good
    ok = bad == 0 and count == MOM23_TOTAL
    report(6, ok, f"{count} survivors rechecked, {bad} violations")
    assert ok


def test_criterion_7_rho1(report):
    rng = random.Random(1)
    for _ in range(10_000):
        h = random_structure(rng)
        definitional = sum(max(valence(h, b) - 2, 0) for b in h.one_handles)
        assert rho1(h) == definitional
    moms = 0
    for n in range(1, 8):
        for _ in range(200):
            h = random_mom(rng, n)
            assert classify(h).kind == "mom" and complexity(h) == Complexity(n, n)
            moms += 1
    f8 = load_fixture("figure8")
    fig8_ok = ([valence(f8, b) for b in f8.one_handles] == [4, 2] and rho1(f8) == 2
               and dual_pyramid_spec(f8).sides == (4,))
    report(7, fig8_ok, f"10000 random structures agree, {moms} random Mom-n have C=(n,n), figure-8 fixture ok: {fig8_ok}")
    assert fig8_ok


def _pattern_class(n):
    """Every cyclically reduced spelling of [a, b^n] up to the allowed symmetries."""
    base = [1] + [2] * n + [-1] + [-2] * n
    out = set()
    for swap, sa, sb, inv in itertools.product((False, True), (1, -1), (1, -1), (False, True)):
        w = []
        for x in base:
            a = abs(x)
            a = 3 - a if swap else a
            s = sa if a == 1 else sb
            w.append((1 if x > 0 else -1) * s * a)
        if inv:
            w = list(invert(w))
        for k in range(len(w)):
            out.add(tuple(w[k:] + w[:k]))
    return out


def test_criterion_8_groups(report):
    rng = random.Random(8)
    letters = [1, -1, 2, -2]
    hits = 0
    for _ in range(1000):
        n = rng.randint(2, 7)
        w = rng.choice(sorted(_pattern_class(n)))
        c = [rng.choice(letters) for _ in range(rng.randint(0, 4))]
        disguised = free_reduce(c + list(w) + list(invert(c)))
        hits += recognize_commutator_power(Presentation(2, (disguised,))) == n
    patterns = set().union(*(_pattern_class(n) for n in range(1, 10)))
    false_pos = rejected = 0
    while rejected < 1000:
        L = rng.randint(1, 20)
        w = []
        while len(w) < L:
            x = rng.choice(letters)
            if not w or w[-1] != -x:
                w.append(x)
        w = tuple(w)
        if len(w) >= 2 and w[0] == -w[-1]:
            continue
        if w in patterns:
            continue
        rejected += 1
        false_pos += recognize_commutator_power(Presentation(2, (w,))) is not None
    snf_bad = 0
    for _ in range(500):
        m, k = rng.randint(1, 6), rng.randint(1, 6)
        A = [[rng.randint(-9, 9) for _ in range(k)] for _ in range(m)]
        snf_bad += smith_normal_form(A) != invariant_factors_by_minors(A)
    ok = hits == 1000 and false_pos == 0 and snf_bad == 0
    report(8, ok, f"{hits}/1000 disguises recognized, {false_pos} false positives in 1000 non-patterns, "
                  f"{snf_bad} Smith form mismatches in 500 matrices")
    assert ok


def test_criterion_9_exports(report, mom23):
    bad = 0
    count = 0
    for n in (2, 3):
        for rec in mom23[n][1]:
            spec = DipyramidSpec.of(int(x) for x in rec["spec"].split(","))
            tri = subdivide_to_tetrahedra(spec, rec["pairing"])
            pres = spine_presentation(spec, rec["pairing"])
            count += 1
            if parse_triangulation(format_triangulation(tri)) != tri:
                bad += 1
            if parse_presentation(format_presentation(pres)) != pres:
                bad += 1
    ok = bad == 0 and count == MOM23_TOTAL
    report(9, ok, f"{count} Mom-2/3 survivors exported and re-parsed, {bad} failures; "
                  "hyperbolicity verdicts are out of scope")
    assert ok
