"""Fundamental group presentations from the dual spine, and their invariants.

Words are tuples of nonzero integers: ``g + 1`` stands for generator ``g``
and ``-(g + 1)`` for its inverse.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Sequence

from .complexcheck import GluedComplex, build_complex
from .polyhedra import DipyramidSpec, face_table

Word = tuple[int, ...]


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class Presentation:
    num_generators: int
    relators: tuple[Word, ...]
    # set when simplification stopped on its budget rather than at a fixpoint
    unsimplified: bool = field(default=False, compare=False)

    def __post_init__(self):
        rels = tuple(tuple(int(x) for x in r) for r in self.relators)
        for r in rels:
            for x in r:
                if x == 0 or abs(x) > self.num_generators:
                    raise PresentationError(f"letter {x} out of range for {self.num_generators} generators")
        object.__setattr__(self, "relators", rels)

    @property
    def total_length(self) -> int:
        return sum(len(r) for r in self.relators)

    def __str__(self) -> str:
        return format_presentation(self)


# ---------------------------------------------------------------------------
# word utilities

def invert(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def free_reduce(w: Sequence[int]) -> Word:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(w: Sequence[int]) -> Word:
    w = free_reduce(w)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j]


def cyclic_normal_form(w: Sequence[int]) -> Word:
    """Least rotation of the word or its inverse, after cyclic reduction."""
    w = cyclic_reduce(w)
    if not w:
        return w
    cands = []
    for v in (w, invert(w)):
        cands += [v[i:] + v[:i] for i in range(len(v))]
    return min(cands, key=lambda v: (len(v), tuple((abs(x), x < 0) for x in v)))


# ---------------------------------------------------------------------------
# spine presentation

def spine_presentation(spec: DipyramidSpec, perm: Sequence[int] | None = None,
                       complex_: GluedComplex | None = None) -> Presentation:
    """Presentation read off the 2-complex dual to the cellulation.

    One 0-cell per dipyramid, one 1-cell per glued face pair and one 2-cell
    per edge class.  A spanning tree of the dual graph is chosen greedily,
    taking face pairs in order of their lower face; the remaining
    F/2 - P + 1 face pairs are the generators, numbered in the same order.
    """
    cx = complex_ if complex_ is not None else build_complex(spec, perm)
    perm = cx.perm
    F = spec.num_faces
    P = spec.num_polyhedra
    table = face_table(spec)
    parent = list(range(P))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    gen_of: dict[int, int] = {}
    for i in range(F):
        j = perm[i]
        if j < i:
            continue
        a, b = find(table[i].polyhedron), find(table[j].polyhedron)
        if a != b:
            parent[b] = a
        else:
            gen_of[i] = len(gen_of)
    if len({find(x) for x in range(P)}) != 1:
        raise PresentationError("dual graph is disconnected")
    expected = F // 2 - P + 1
    if len(gen_of) != expected:
        raise AssertionError(f"{len(gen_of)} generators, expected {expected}")

    relators = []
    for ec in cx.edge_classes:
        word = []
        for f, _ in ec.cycle:
            lo = min(f, perm[f])
            g = gen_of.get(lo)
            if g is not None:
                word.append(g + 1 if f == lo else -(g + 1))
        relators.append(tuple(word))
    return Presentation(len(gen_of), tuple(relators))


# ---------------------------------------------------------------------------
# Tietze moves

def _substitute(w: Word, g: int, image: Word) -> Word:
    out: list[int] = []
    inv = invert(image)
    for x in w:
        if x == g:
            out.extend(image)
        elif x == -g:
            out.extend(inv)
        else:
            out.append(x)
    return free_reduce(out)


def _renumber(rels: list[Word], num: int, dropped: int) -> list[Word]:
    def f(x):
        a = abs(x)
        a = a - 1 if a > dropped else a
        return a if x > 0 else -a

    return [tuple(f(x) for x in r) for r in rels]


def tietze_simplify(pres: Presentation, budget: int | None = None) -> Presentation:
    """Simplify by relator cleanup and eliminating generators that occur once.

    Every step either removes a generator or a relator, so the loop ends.
    ``budget`` caps the total relator length any substitution may produce;
    when the only available eliminations would exceed it the best result so
    far is returned with ``unsimplified`` set.  The default budget is ten
    times the initial total length.
    """
    if budget is None:
        budget = 10 * max(pres.total_length, 1)
    n = pres.num_generators
    rels = [cyclic_reduce(r) for r in pres.relators]
    blocked = False
    while True:
        seen = set()
        cleaned = []
        for r in rels:
            r = cyclic_reduce(r)
            key = cyclic_normal_form(r)
            if not r or key in seen:
                continue
            seen.add(key)
            cleaned.append(r)
        rels = cleaned

        best = None
        for ri in sorted(range(len(rels)), key=lambda i: (len(rels[i]), i)):
            r = rels[ri]
            counts: dict[int, int] = {}
            for x in r:
                counts[abs(x)] = counts.get(abs(x), 0) + 1
            for g in sorted(a for a, c in counts.items() if c == 1):
                pos = next(i for i, x in enumerate(r) if abs(x) == g)
                rot = r[pos:] + r[:pos]
                rest = rot[1:]
                # rot = x^e rest = 1, so x = rest^-1 when e = 1, x = rest when e = -1
                image = invert(rest) if rot[0] > 0 else rest
                occurrences = sum(1 for k, s in enumerate(rels) if k != ri for x in s if abs(x) == g)
                new_len = sum(len(s) for k, s in enumerate(rels) if k != ri) + occurrences * (len(image) - 1)
                if new_len > budget:
                    blocked = True
                    continue
                best = (ri, g, image)
                break
            if best:
                break
        if best is None:
            return Presentation(n, tuple(rels), unsimplified=blocked)
        ri, g, image = best
        rels = [_substitute(s, g, image) for k, s in enumerate(rels) if k != ri]
        rels = _renumber(rels, n, g)
        n -= 1
        blocked = False


# ---------------------------------------------------------------------------
# abelianization

@dataclass(frozen=True)
class AbelianGroup:
    rank: int
    torsion: tuple[int, ...]   # invariant factors > 1, each dividing the next

    def __str__(self) -> str:
        parts = [f"Z/{t}" for t in self.torsion]
        if self.rank:
            parts.insert(0, "Z" if self.rank == 1 else f"Z^{self.rank}")
        return " + ".join(parts) if parts else "0"


def exponent_matrix(pres: Presentation) -> list[list[int]]:
    rows = []
    for r in pres.relators:
        row = [0] * pres.num_generators
        for x in r:
            row[abs(x) - 1] += 1 if x > 0 else -1
        rows.append(row)
    return rows


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors d1 | d2 | ... of an integer matrix."""
    A = [list(map(int, row)) for row in matrix]
    m = len(A)
    n = len(A[0]) if m else 0
    diag = []
    t = 0
    while t < min(m, n):
        nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        A[t], A[pi] = A[pi], A[t]
        for row in A:
            row[t], row[pj] = row[pj], row[t]
        while True:
            piv = A[t][t]
            done = True
            for i in range(t + 1, m):
                q = A[i][t] // piv
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                if A[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = A[t][j] // piv
                if q:
                    for row in A:
                        row[j] -= q * row[t]
                if A[t][j]:
                    done = False
            if done:
                # the pivot must divide the whole remaining block
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % piv), None)
                if bad is None:
                    break
                A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
                continue
            # move the smallest nonzero entry of row/column t to the pivot
            cands = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
            cands += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
            _, pi, pj = min(cands)
            A[t], A[pi] = A[pi], A[t]
            for row in A:
                row[t], row[pj] = row[pj], row[t]
        diag.append(abs(A[t][t]))
        t += 1
    return diag


def abelianization(pres: Presentation) -> AbelianGroup:
    rows = exponent_matrix(pres)
    diag = smith_normal_form(rows) if rows else []
    rank = pres.num_generators - len(diag)
    return AbelianGroup(rank, tuple(d for d in diag if d > 1))


def invariant_factors_by_minors(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Invariant factors from gcds of k x k minors; slow, used as a check."""
    from itertools import combinations

    m = len(matrix)
    n = len(matrix[0]) if m else 0

    def det(M):
        M = [list(map(int, r)) for r in M]
        k = len(M)
        # Bareiss fraction-free elimination
        sign, prev = 1, 1
        for c in range(k - 1):
            if M[c][c] == 0:
                sw = next((r for r in range(c + 1, k) if M[r][c]), None)
                if sw is None:
                    return 0
                M[c], M[sw] = M[sw], M[c]
                sign = -sign
            for r in range(c + 1, k):
                for cc in range(c + 1, k):
                    M[r][cc] = (M[r][cc] * M[c][c] - M[r][c] * M[c][cc]) // prev
            prev = M[c][c]
        return sign * M[k - 1][k - 1] if k else 1

    out = []
    prev_d = 1
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in combinations(range(m), k):
            for cols in combinations(range(n), k):
                g = math.gcd(g, det([[matrix[r][c] for c in cols] for r in rows]))
        if g == 0:
            break
        out.append(g // prev_d)
        prev_d = g
    return out


# ---------------------------------------------------------------------------
# commutator pattern

def _is_commutator_power(w: Word) -> int | None:
    # w == a b^n A B^n up to rotation, inversion and relabelling of a, b
    L = len(w)
    if L < 4 or L % 2:
        return None
    n = (L - 2) // 2
    variants = []
    for v in (w, invert(w)):
        for swap in (False, True):
            for sa in (1, -1):
                for sb in (1, -1):
                    def relabel(x):
                        a = abs(x)
                        if swap:
                            a = 3 - a
                        s = sa if a == 1 else sb
                        return s * a if x > 0 else -s * a
                    variants.append(tuple(relabel(x) for x in v))
    target = (1,) + (2,) * n + (-1,) + (-2,) * n
    for v in variants:
        for i in range(L):
            if v[i:] + v[:i] == target:
                return n
    return None


def recognize_commutator_power(pres: Presentation, budget: int | None = None) -> int | None:
    """n if the group is <a, b | [a, b^n]> on the nose after simplification.

    The check is syntactic: the simplified presentation must have two
    generators and one relator which, after cyclic reduction, is a
    rotation of a b^n a^-1 b^-n up to inverting the word, inverting either
    generator or swapping them.  A non-match is not a proof that the group
    differs.
    """
    if pres.num_generators != 2 or len(pres.relators) != 1:
        pres = tietze_simplify(pres, budget)
    if pres.num_generators != 2 or len(pres.relators) != 1:
        return None
    return _is_commutator_power(cyclic_reduce(pres.relators[0]))


# ---------------------------------------------------------------------------
# text format: "gens: <count>", then one relator per line in a, b, c, ...
# with upper case for inverses; "1" is the empty relator

_LETTERS = "abcdefghijklmnopqrstuvwxyz"


def word_to_text(w: Sequence[int]) -> str:
    return "".join(_LETTERS[x - 1] if x > 0 else _LETTERS[-x - 1].upper() for x in w) or "1"


def text_to_word(s: str, num_generators: int) -> Word:
    s = s.strip()
    if s == "1":
        return ()
    out = []
    for ch in s:
        k = _LETTERS.find(ch.lower())
        if k < 0 or k >= num_generators:
            raise PresentationError(f"unknown generator letter {ch!r}")
        out.append(k + 1 if ch.islower() else -(k + 1))
    return tuple(out)


def format_presentation(pres: Presentation) -> str:
    if pres.num_generators > len(_LETTERS):
        raise PresentationError("too many generators for the letter format")
    lines = [f"gens: {pres.num_generators}"] + [word_to_text(r) for r in pres.relators]
    return "\n".join(lines) + "\n"


def parse_presentation(text: str) -> Presentation:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    m = re.fullmatch(r"gens:\s*(\d+)", lines[0]) if lines else None
    if not m:
        raise PresentationError("presentation must start with a 'gens: <count>' line")
    g = int(m.group(1))
    if g > len(_LETTERS):
        raise PresentationError("too many generators for the letter format")
    return Presentation(g, tuple(text_to_word(ln, g) for ln in lines[1:]))
