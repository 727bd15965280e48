"""Text formats: pairing descriptions, manifest records, tetrahedral
triangulations and survey checkpoints.  Layouts are documented in
docs/formats.md.
"""
from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass
from typing import Any, Sequence

from .enumeration import PairingError, validate_pairing
from .polyhedra import DipyramidSpec, SpecError


class FormatError(ValueError):
    pass


# ---------------------------------------------------------------------------
# "(3,3,4 ; 3,6,8,0,...)"

class DescriptionSyntaxError(FormatError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class DescriptionSpecError(FormatError):
    pass


class DescriptionPairingError(FormatError):
    """Wraps the pairing's own error; ``kind`` is length, fixed_point or involution."""

    def __init__(self, message: str, kind: str):
        super().__init__(message)
        self.kind = kind


def _scan(text: str) -> tuple[list[int], list[int]]:
    pos = 0
    n = len(text)

    def skip():
        nonlocal pos
        while pos < n and text[pos] in " \t":
            pos += 1

    def expect(ch):
        nonlocal pos
        skip()
        if pos >= n or text[pos] != ch:
            found = repr(text[pos]) if pos < n else "end of input"
            raise DescriptionSyntaxError(f"expected {ch!r}, found {found}", pos)
        pos += 1

    def numbers(stop):
        nonlocal pos
        out = []
        while True:
            skip()
            start = pos
            while pos < n and text[pos].isdigit():
                pos += 1
            if start == pos:
                found = repr(text[pos]) if pos < n else "end of input"
                raise DescriptionSyntaxError(f"expected a number, found {found}", pos)
            out.append(int(text[start:pos]))
            skip()
            if pos < n and text[pos] == ",":
                pos += 1
                continue
            if pos < n and text[pos] == stop:
                return out
            found = repr(text[pos]) if pos < n else "end of input"
            raise DescriptionSyntaxError(f"expected ',' or {stop!r}, found {found}", pos)

    expect("(")
    sides = numbers(";")
    expect(";")
    perm = numbers(")")
    expect(")")
    skip()
    if pos != n:
        raise DescriptionSyntaxError("trailing characters", pos)
    return sides, perm


def parse_description(text: str) -> tuple[DipyramidSpec, tuple[int, ...]]:
    """Parse ``(k1,...,kr ; p0,...,pF-1)``; surrounding whitespace is ignored."""
    from .enumeration import FixedPointError, InvolutionError, LengthError

    sides, perm = _scan(text.strip())
    if sides != sorted(sides):
        raise DescriptionSpecError(f"side counts must be non-decreasing: {sides}")
    try:
        spec = DipyramidSpec.of(sides)
    except SpecError as exc:
        raise DescriptionSpecError(str(exc)) from None
    try:
        perm = validate_pairing(spec, perm)
    except LengthError as exc:
        raise DescriptionPairingError(str(exc), "length") from None
    except FixedPointError as exc:
        raise DescriptionPairingError(str(exc), "fixed_point") from None
    except (InvolutionError, PairingError) as exc:
        raise DescriptionPairingError(str(exc), "involution") from None
    return spec, perm


def emit_description(spec: DipyramidSpec, perm: Sequence[int]) -> str:
    return "(" + ",".join(map(str, spec.sides)) + " ; " + ",".join(map(str, perm)) + ")"


# ---------------------------------------------------------------------------
# manifest: one JSON object per line, keys in a fixed order

MANIFEST_KEYS = ("spec", "pairing", "boundary_count", "edge_class_count", "reversed_edges",
                 "generators", "relators", "relator_length", "h1_rank", "h1_torsion",
                 "commutator_power")


def manifest_line(record: dict[str, Any]) -> str:
    missing = [k for k in MANIFEST_KEYS if k not in record]
    if missing:
        raise FormatError(f"manifest record lacks {missing}")
    ordered = {k: record[k] for k in MANIFEST_KEYS}
    return json.dumps(ordered, separators=(",", ":")) + "\n"


def parse_manifest_line(line: str) -> dict[str, Any]:
    try:
        rec = json.loads(line)
    except json.JSONDecodeError as exc:
        raise FormatError(f"bad manifest line: {exc}") from None
    if not isinstance(rec, dict) or list(rec) != list(MANIFEST_KEYS):
        raise FormatError("manifest line has unexpected keys")
    parse_description(f"({rec['spec']} ; {','.join(map(str, rec['pairing']))})")
    return rec


# ---------------------------------------------------------------------------
# tetrahedral triangulation
#
#   momcensus-tri 1
#   tetrahedra <n>
#   <t>: <t0>/<p0> <t1>/<p1> <t2>/<p2> <t3>/<p3>
#
# Entry f of line t says that the face of tetrahedron t opposite vertex f is
# glued to tetrahedron t_f, with vertex v of t going to vertex p_f[v].

TRI_HEADER = "momcensus-tri 1"


@dataclass(frozen=True)
class Triangulation:
    # gluings[t][f] = (target tetrahedron, vertex permutation as a 4-tuple)
    gluings: tuple[tuple[tuple[int, tuple[int, int, int, int]], ...], ...]

    @property
    def size(self) -> int:
        return len(self.gluings)

    def validate(self) -> None:
        n = self.size
        for t, faces in enumerate(self.gluings):
            if len(faces) != 4:
                raise FormatError(f"tetrahedron {t} needs four faces")
            for f, (u, perm) in enumerate(faces):
                if not 0 <= u < n or sorted(perm) != [0, 1, 2, 3]:
                    raise FormatError(f"bad gluing at tetrahedron {t} face {f}")
                g = perm[f]
                back_u, back = self.gluings[u][g]
                if back_u != t or any(back[perm[v]] != v for v in range(4)):
                    raise FormatError(f"gluing at tetrahedron {t} face {f} is not matched")
                if (u, g) == (t, f):
                    raise FormatError(f"face {f} of tetrahedron {t} is glued to itself")


def format_triangulation(tri: Triangulation) -> str:
    lines = [TRI_HEADER, f"tetrahedra {tri.size}"]
    for t, faces in enumerate(tri.gluings):
        lines.append(f"{t}: " + " ".join(f"{u}/{''.join(map(str, perm))}" for u, perm in faces))
    return "\n".join(lines) + "\n"


def parse_triangulation(text: str) -> Triangulation:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if len(lines) < 2 or lines[0] != TRI_HEADER:
        raise FormatError(f"missing '{TRI_HEADER}' header")
    m = re.fullmatch(r"tetrahedra (\d+)", lines[1])
    if not m or int(m.group(1)) != len(lines) - 2:
        raise FormatError("tetrahedron count does not match the body")
    gluings = []
    for t, ln in enumerate(lines[2:]):
        m = re.fullmatch(r"(\d+):((?: \d+/[0-3]{4}){4})", ln)
        if not m or int(m.group(1)) != t:
            raise FormatError(f"bad line for tetrahedron {t}: {ln!r}")
        faces = []
        for item in m.group(2).split():
            u, perm = item.split("/")
            faces.append((int(u), tuple(int(c) for c in perm)))
        gluings.append(tuple(faces))
    tri = Triangulation(tuple(gluings))
    tri.validate()
    return tri


# ---------------------------------------------------------------------------
# checkpoint: a JSON object written atomically next to the manifest

CHECKPOINT_FORMAT = "momcensus-checkpoint"
CHECKPOINT_VERSION = 1


def write_checkpoint(path: str, state: dict[str, Any]) -> None:
    data = {"format": CHECKPOINT_FORMAT, "version": CHECKPOINT_VERSION, **state}
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(data, fh, indent=1, sort_keys=True)
        fh.write("\n")
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


def read_checkpoint(path: str) -> dict[str, Any]:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"corrupt checkpoint {path}: {exc}") from None
    if data.get("format") != CHECKPOINT_FORMAT or data.get("version") != CHECKPOINT_VERSION:
        raise FormatError(f"{path} is not a version {CHECKPOINT_VERSION} checkpoint")
    return data
