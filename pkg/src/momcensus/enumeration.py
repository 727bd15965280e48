"""Face pairings of dipyramid collections and their orderly enumeration.

A pairing is a fixed-point-free involution on the global face indices.  It
is canonical when no symmetry of the collection conjugates it to a
lexicographically smaller involution.  Enumeration pairs the lowest unpaired
face with every larger free face in turn and prunes any partial pairing that
already has a smaller conjugate, so canonical pairings come out in
lexicographic order and each conjugacy class exactly once.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .kernels import get_kernel
from .polyhedra import ROTATIONAL, DipyramidSpec, SymmetryElement, symmetry_group


class PairingError(ValueError):
    pass


class LengthError(PairingError):
    pass


class FixedPointError(PairingError):
    pass


class InvolutionError(PairingError):
    pass


def validate_pairing(spec: DipyramidSpec, perm: Sequence[int]) -> tuple[int, ...]:
    perm = tuple(int(x) for x in perm)
    F = spec.num_faces
    if len(perm) != F:
        raise LengthError(f"{spec} has {F} faces, pairing lists {len(perm)}")
    for i, j in enumerate(perm):
        if not 0 <= j < F:
            raise PairingError(f"face {i} paired with out-of-range index {j}")
    fixed = [i for i, j in enumerate(perm) if i == j]
    if fixed:
        raise FixedPointError(f"fixed points at {', '.join(map(str, fixed))}")
    for i, j in enumerate(perm):
        if perm[j] != i:
            raise InvolutionError(f"not an involution: face {i} goes to {perm[i]}, which goes to {perm[perm[i]]}")
    return perm


@dataclass(frozen=True)
class Pairing:
    spec: DipyramidSpec
    perm: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "perm", validate_pairing(self.spec, self.perm))

    def pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i, j in enumerate(self.perm) if i < j]

    def conjugate(self, g: SymmetryElement) -> "Pairing":
        return Pairing(self.spec, conjugate(self.perm, g))

    def is_canonical(self, mode: str = ROTATIONAL) -> bool:
        return is_canonical(self.spec, self.perm, mode)


def conjugate(perm: Sequence[int], g: SymmetryElement) -> tuple[int, ...]:
    """g p g^-1: if p pairs i with j, the result pairs g(i) with g(j)."""
    q = [0] * len(perm)
    fp = g.face_perm
    for i, j in enumerate(perm):
        q[fp[i]] = fp[j]
    return tuple(q)


def orbit_of(spec: DipyramidSpec, perm: Sequence[int], mode: str = ROTATIONAL) -> set[tuple[int, ...]]:
    return {conjugate(perm, g) for g in symmetry_group(spec, mode)}


def canonical_form(spec: DipyramidSpec, perm: Sequence[int], mode: str = ROTATIONAL) -> tuple[int, ...]:
    return min(orbit_of(spec, perm, mode))


def is_canonical(spec: DipyramidSpec, perm: Sequence[int], mode: str = ROTATIONAL) -> bool:
    perm = validate_pairing(spec, perm)
    return not get_kernel(spec, mode).has_smaller_conjugate(perm)


def is_canonical_bruteforce(spec: DipyramidSpec, perm: Sequence[int], mode: str = ROTATIONAL) -> bool:
    perm = validate_pairing(spec, perm)
    return all(conjugate(perm, g) >= perm for g in symmetry_group(spec, mode))


def all_pairings(num_faces: int) -> Iterator[tuple[int, ...]]:
    """Every fixed-point-free involution on ``range(num_faces)``, lexicographically."""
    if num_faces % 2:
        return
    p = [-1] * num_faces

    def rec(t):
        while t < num_faces and p[t] >= 0:
            t += 1
        if t == num_faces:
            yield tuple(p)
            return
        for j in range(t + 1, num_faces):
            if p[j] < 0:
                p[t], p[j] = j, t
                yield from rec(t + 1)
                p[t] = p[j] = -1

    yield from rec(0)


def shard_prefixes(spec: DipyramidSpec, mode: str = ROTATIONAL, depth: int = 2) -> list[tuple[int, ...]]:
    """Canonical partial pairings with ``depth`` decisions, in search order.

    Searching below each prefix in turn visits exactly the canonical
    pairings, in lexicographic order.  Branches that complete before
    ``depth`` appear as full-length prefixes.
    """
    kernel = get_kernel(spec, mode)
    F = spec.num_faces
    p = [-1] * F
    out: list[tuple[int, ...]] = []
    decisions: list[int] = []

    def rec(t):
        while t < F and p[t] >= 0:
            t += 1
        if t == F or len(decisions) == depth:
            out.append(tuple(decisions))
            return
        for j in range(t + 1, F):
            if p[j] >= 0:
                continue
            p[t], p[j] = j, t
            if not kernel.has_smaller_conjugate(p):
                decisions.append(j)
                rec(t + 1)
                decisions.pop()
            p[t] = p[j] = -1

    rec(0)
    return out


def enumerate_pairings(spec: DipyramidSpec, mode: str = ROTATIONAL, *, use_filter: bool = False,
                       prefix: Sequence[int] = (), chunk_nodes: int = 200_000,
                       pure: bool = False) -> Iterator[tuple[int, ...]]:
    """Stream canonical pairings (or, with ``use_filter``, filter survivors).

    Work is done in bounded chunks so memory stays flat however large the
    search is.
    """
    kernel = get_kernel(spec, mode, pure)
    resume = None
    while True:
        out, _, resume = kernel.search(list(prefix), resume, chunk_nodes, use_filter)
        for perm, _ in out:
            yield perm
        if resume is None:
            return


def count_canonical(spec: DipyramidSpec, mode: str = ROTATIONAL, *, use_filter: bool = False,
                    pure: bool = False) -> dict[str, int]:
    """Node, leaf and survivor counts of the full search for ``spec``."""
    kernel = get_kernel(spec, mode, pure)
    totals = dict(nodes=0, leaves=0, survivors=0)
    resume = None
    while True:
        _, stats, resume = kernel.search([], resume, 1_000_000, use_filter)
        totals["nodes"] += stats[0]
        totals["leaves"] += stats[1]
        totals["survivors"] += stats[2]
        if resume is None:
            return totals


def enumerate_to_sink(spec: DipyramidSpec, sink, mode: str = ROTATIONAL, *, use_filter: bool = False,
                      checkpoint: str | None = None, resume: bool = False,
                      chunk_nodes: int = 200_000, max_chunks: int | None = None) -> int | None:
    """Feed canonical pairings to ``sink`` with a decision-stack checkpoint.

    After every chunk of ``chunk_nodes`` search nodes the checkpoint records
    the spec, mode, decision stack and number of pairings emitted so far.
    Returns the final count, or None when ``max_chunks`` stopped the run
    early (the checkpoint then allows resuming).  If ``sink`` raises, the
    exception propagates and the last checkpoint is still valid.
    """
    from .formats import FormatError, read_checkpoint, write_checkpoint

    kernel = get_kernel(spec, mode)
    stack, emitted = None, 0
    if resume and checkpoint:
        state = read_checkpoint(checkpoint)
        if state.get("kind") != "enumeration" or state["spec"] != list(spec.sides) or state["mode"] != mode \
                or state["use_filter"] != use_filter:
            raise FormatError("checkpoint belongs to a different enumeration")
        if state["done"]:
            return state["emitted"]
        stack, emitted = state["stack"], state["emitted"]
    chunks = 0
    while True:
        out, _, next_stack = kernel.search([], stack, chunk_nodes, use_filter)
        for perm, _ in out:
            sink(perm)
        emitted += len(out)
        stack = next_stack
        if checkpoint:
            write_checkpoint(checkpoint, {"kind": "enumeration", "spec": list(spec.sides), "mode": mode,
                                          "use_filter": use_filter, "stack": stack, "emitted": emitted,
                                          "done": stack is None})
        if stack is None:
            return emitted
        chunks += 1
        if max_chunks is not None and chunks >= max_chunks:
            return None
