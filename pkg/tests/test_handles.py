import random

import pytest
from hypothesis import given, strategies as st

from momcensus.handles import (
    ClassificationError,
    Complexity,
    HandleError,
    HandleStructure,
    classify,
    complexity,
    dual_pyramid_spec,
    emit_fixture,
    load_fixture,
    parse_fixture,
    rho1,
    valence,
)


def random_structure(rng, max_ones=6, max_twos=6, max_mult=3):
    ones = [f"b{i}" for i in range(rng.randint(0, max_ones))]
    twos = {}
    for j in range(rng.randint(0, max_twos)):
        inc = {}
        for b in ones:
            if rng.random() < 0.4:
                inc[b] = rng.randint(1, max_mult)
        twos[f"s{j}"] = inc
    return HandleStructure.build(ones, twos)


def random_mom(rng, n):
    """A random incidence pattern with n 1-handles and n valence-3 2-handles."""
    while True:
        ones = [f"b{i}" for i in range(n)]
        twos = {}
        for j in range(n):
            inc = {}
            for _ in range(3):
                b = rng.choice(ones)
                inc[b] = inc.get(b, 0) + 1
            twos[f"s{j}"] = inc
        h = HandleStructure.build(ones, twos)
        if all(valence(h, b) >= 2 for b in ones):
            return h


def test_figure8_fixture():
    h = load_fixture("figure8")
    assert [valence(h, b) for b in h.one_handles] == [4, 2]
    assert rho1(h) == 2
    assert complexity(h) == Complexity(2, 2)
    assert str(classify(h)) == "mom(2)"
    assert dual_pyramid_spec(h).sides == (4,)


def test_other_fixtures():
    m003 = load_fixture("m003")
    assert [valence(m003, b) for b in m003.one_handles] == [3, 3]
    assert dual_pyramid_spec(m003).sides == (3, 3)
    m011 = load_fixture("m011")
    assert classify(m011).kind == "mom" and dual_pyramid_spec(m011).sides == (3, 3)
    m017 = load_fixture("m017")
    assert [valence(m017, b) for b in m017.one_handles] == [4, 2]


def test_valence_lookup():
    h = parse_fixture("1-handles: a b c\ns: a*2 b\n")
    assert valence(h, "s") == 3 and valence(h, "a") == 2 and valence(h, "c") == 0
    with pytest.raises(KeyError):
        valence(h, "zz")


def test_empty_structure():
    h = HandleStructure.build([], {})
    assert rho1(h) == 0 and complexity(h) == Complexity(0, 0)
    assert classify(h).kind == "invalid"


def test_classification_cases():
    strictly_weak = parse_fixture("s1: a b c\ns2: a b c\ns3: a b\n")
    c = classify(strictly_weak)
    assert c.kind == "strictly_weak_mom" and c.n == 2
    with pytest.raises(ClassificationError):
        dual_pyramid_spec(strictly_weak)
    low = parse_fixture("1-handles: a b\ns1: a b*2\ns2: b*2 a*0\n".replace(" a*0", ""))
    assert classify(low).kind == "invalid"      # a has valence 1
    assert dual_pyramid_spec(parse_fixture("s1: a*3\ns2: a*2 b\ns3: b c*2\n")).sides == (5,)


def test_construction_errors():
    with pytest.raises(HandleError):
        HandleStructure.build(["a", "a"], {})
    with pytest.raises(HandleError):
        HandleStructure.build(["a"], {"s": {"b": 1}})
    with pytest.raises(HandleError):
        HandleStructure.build(["a"], {"s": {"a": 0}})
    with pytest.raises(HandleError):
        parse_fixture("s: a*x")
    with pytest.raises(HandleError):
        parse_fixture("s: a\ns: b")


def test_fixture_round_trip():
    h = load_fixture("m011")
    assert parse_fixture(emit_fixture(h)) == h


def test_rho1_formula_random(rng):
    for _ in range(2000):
        h = random_structure(rng)
        # rho1 raises if the two expressions disagree
        assert rho1(h) == sum(max(valence(h, b) - 2, 0) for b in h.one_handles)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_mom_complexity_is_n_n(rng, n):
    for _ in range(200):
        h = random_mom(rng, n)
        assert classify(h).kind == "mom" and classify(h).n == n
        assert complexity(h) == Complexity(n, n)
        spec = dual_pyramid_spec(h)
        assert sum(2 * valence(h, b) for b in h.one_handles) == 6 * n


@given(st.integers(0, 2**32), st.integers(2, 4))
def test_dual_spec_invariant_under_relabelling(seed, n):
    r = random.Random(seed)
    h = random_mom(r, n)
    names = list(h.one_handles)
    shuffled = names[:]
    r.shuffle(shuffled)
    ren = dict(zip(names, shuffled))
    h2 = HandleStructure.build(
        [ren[b] for b in names],
        {s: {ren[b]: m for b, m in h.incidences(s).items()} for s in h.two_handle_names})
    assert dual_pyramid_spec(h2) == dual_pyramid_spec(h)
    assert dual_pyramid_spec(h).sides in {s.sides for s in __import__("momcensus").pyramid_sets_for_mom(n)}


def test_complexity_order():
    assert Complexity(1, 5) < Complexity(2, 0) < Complexity(2, 1)


@pytest.fixture
def rng():
    return random.Random(7)
