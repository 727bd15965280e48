"""Abstract Mom-n handle structures: incidence counts, valences and complexity.

Only the multiplicity with which each 2-handle runs over each 1-handle is
recorded.  The embedding in the base torus (islands, bridges, lakes) is not
modelled, so fullness cannot be decided here.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .polyhedra import DipyramidSpec


class HandleError(ValueError):
    pass


class ClassificationError(HandleError):
    pass


@dataclass(frozen=True, order=True)
class Complexity:
    """(rho1, number of 1-handles), ordered lexicographically."""

    rho1: int
    num_one_handles: int


@dataclass(frozen=True)
class Classification:
    kind: str   # "mom", "weak_mom", "strictly_weak_mom" or "invalid"
    n: int | None = None

    def __str__(self) -> str:
        return self.kind if self.n is None else f"{self.kind}({self.n})"


@dataclass(frozen=True)
class HandleStructure:
    """1-handles and 2-handles attached to a base torus, without 0-handles.

    ``two_handles`` maps each 2-handle name to a mapping from 1-handle names
    to positive multiplicities.
    """

    one_handles: tuple[str, ...]
    two_handles: tuple[tuple[str, tuple[tuple[str, int], ...]], ...]
    _lookup: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        ones = tuple(self.one_handles)
        if len(set(ones)) != len(ones):
            raise HandleError("duplicate 1-handle identifiers")
        twos = []
        names = set()
        for name, incidences in self.two_handles:
            if name in names or name in ones:
                raise HandleError(f"duplicate handle identifier {name!r}")
            names.add(name)
            inc = Counter()
            for one, mult in (incidences.items() if isinstance(incidences, Mapping) else incidences):
                if one not in ones:
                    raise HandleError(f"2-handle {name!r} runs over unknown 1-handle {one!r}")
                if int(mult) != mult or mult <= 0:
                    raise HandleError(f"multiplicity of {name!r} over {one!r} must be a positive integer")
                inc[one] += int(mult)
            twos.append((name, tuple(sorted(inc.items(), key=lambda kv: ones.index(kv[0])))))
        object.__setattr__(self, "one_handles", ones)
        object.__setattr__(self, "two_handles", tuple(twos))
        object.__setattr__(self, "_lookup", {name: dict(inc) for name, inc in twos})

    @classmethod
    def build(cls, one_handles: Iterable[str],
              two_handles: Mapping[str, Mapping[str, int]]) -> "HandleStructure":
        return cls(tuple(one_handles), tuple((k, tuple(v.items())) for k, v in two_handles.items()))

    @property
    def two_handle_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.two_handles)

    def incidences(self, two_handle: str) -> dict[str, int]:
        return dict(self._lookup[two_handle])


def valence(h: HandleStructure, handle: str) -> int:
    """Valence of a 1-handle or 2-handle, counted with multiplicity."""
    if handle in h._lookup:
        return sum(h._lookup[handle].values())
    if handle in h.one_handles:
        return sum(inc.get(handle, 0) for inc in h._lookup.values())
    raise KeyError(handle)


def one_handle_valences(h: HandleStructure) -> list[int]:
    return [valence(h, b) for b in h.one_handles]


def two_handle_valences(h: HandleStructure) -> list[int]:
    return [valence(h, s) for s in h.two_handle_names]


def rho1(h: HandleStructure) -> int:
    """Sum over 1-handles of max(valence - 2, 0).

    Cross-checked against the equivalent expression through 2-handle
    valences and the counts of valence-0 and valence-1 1-handles.
    """
    beams = one_handle_valences(h)
    direct = sum(max(v - 2, 0) for v in beams)
    via_plates = (sum(two_handle_valences(h)) - 2 * len(beams)
                  + beams.count(1) + 2 * beams.count(0))
    if direct != via_plates:
        raise AssertionError(f"rho1 mismatch: {direct} != {via_plates}")
    return direct


def complexity(h: HandleStructure) -> Complexity:
    return Complexity(rho1(h), len(h.one_handles))


def classify(h: HandleStructure) -> Classification:
    beams = one_handle_valences(h)
    plates = two_handle_valences(h)
    if len(beams) != len(plates) or any(v < 2 for v in beams):
        return Classification("invalid")
    if any(v not in (2, 3) for v in plates):
        return Classification("invalid")
    n = plates.count(3)
    if n == 0:
        return Classification("invalid")
    if 2 in plates:
        return Classification("strictly_weak_mom", n)
    return Classification("mom", n)


def is_weak_mom(h: HandleStructure) -> bool:
    return classify(h).kind in ("mom", "strictly_weak_mom")


def dual_pyramid_spec(h: HandleStructure) -> DipyramidSpec:
    """Dipyramid side counts of the ideal cellulation dual to a Mom-n.

    A valence-k 1-handle with k >= 3 gives a k-dipyramid; valence-2 handles
    give digonal pyramids and drop out.
    """
    c = classify(h)
    if c.kind != "mom":
        raise ClassificationError(f"dual dipyramids need a Mom-n structure, got {c}")
    beams = one_handle_valences(h)
    # each 1-handle end v has n_v - 1 = valence; two ends per handle
    if sum(2 * v for v in beams) != 6 * c.n:
        raise AssertionError("sum of (n_v - 1) over 1-handle ends is not 6n")
    return DipyramidSpec.of(v for v in beams if v > 2)


# ---------------------------------------------------------------------------
# fixture text format: "sigma1: lambda1*2 lambda2*1", one 2-handle per line

_LINE = re.compile(r"^\s*([^:\s]+)\s*:\s*(.*?)\s*$")
_TERM = re.compile(r"^([^*\s]+)(?:\*(\d+))?$")


def parse_fixture(text: str) -> HandleStructure:
    """Parse the plain-text fixture format.

    Blank lines and ``#`` comments are ignored.  An optional line
    ``1-handles: a b c`` lists 1-handles up front (needed for valence-0
    handles); otherwise they are taken in order of first appearance.
    """
    ones: list[str] = []
    twos: dict[str, dict[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _LINE.match(line)
        if not m:
            raise HandleError(f"line {lineno}: expected 'name: handle*mult ...'")
        name, body = m.groups()
        if name == "1-handles":
            for one in body.split():
                if one not in ones:
                    ones.append(one)
            continue
        if name in twos:
            raise HandleError(f"line {lineno}: 2-handle {name!r} listed twice")
        inc: dict[str, int] = {}
        for term in body.split():
            t = _TERM.match(term)
            if not t:
                raise HandleError(f"line {lineno}: bad incidence {term!r}")
            one, mult = t.group(1), int(t.group(2) or 1)
            if one not in ones:
                ones.append(one)
            inc[one] = inc.get(one, 0) + mult
        twos[name] = inc
    return HandleStructure.build(ones, twos)


def emit_fixture(h: HandleStructure) -> str:
    lines = ["1-handles: " + " ".join(h.one_handles)]
    for name, inc in h.two_handles:
        lines.append(f"{name}: " + " ".join(f"{one}*{mult}" for one, mult in inc))
    return "\n".join(lines) + "\n"


def load_fixture(name: str) -> HandleStructure:
    """Load a bundled example: ``figure8``, ``m003``, ``m011`` or ``m017``."""
    from importlib import resources

    text = resources.files("momcensus").joinpath("data", f"handles_{name}.txt").read_text()
    return parse_fixture(text)
