"""Winding numbers of 3-colorings and template colorability.

For a proper coloring by {0,1,2}, each edge step contributes +1 or -1
according to whether the color increases or decreases mod 3.  Around any
closed walk the sum is divisible by 3, has the parity of the walk length,
and is bounded by it.  A template coloring must additionally realize, on
every face, a value attainable by a winding number assignment of the
face's census.

Colorings are enumerated up to the 6 color permutations by fixing color 0
on vertex 0 and color 1 on its first rotation neighbor.  Every quantity
used downstream (face windings, barrier inequalities, blocking) is
invariant under color rotations and negates coherently under the odd
permutations, so one representative per class suffices.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

from .surface import EmbeddedGraph
from .templates import Census, Template

Coloring = tuple[int, ...]

_STEP = (None, 1, -1)  # indexed by (cv - cu) % 3


def omega_edge(color_u: int, color_v: int) -> int:
    """+1 when the color steps up mod 3, -1 when it steps down."""
    diff = (color_v - color_u) % 3
    if diff == 0:
        raise ValueError("winding step needs distinct colors")
    return _STEP[diff]


def omega_walk(g: EmbeddedGraph, coloring: Sequence[int], darts: Iterable[int]) -> int:
    total = 0
    for d in darts:
        total += omega_edge(coloring[g.vertex_of[d]], coloring[g.vertex_of[d ^ 1]])
    return total


def omega_face(g: EmbeddedGraph, coloring: Sequence[int], face_index: int) -> int:
    return omega_walk(g, coloring, g.faces[face_index])


@lru_cache(maxsize=None)
def element_domain(value: int) -> tuple[int, ...]:
    """Admissible winding contributions of one census element."""
    return tuple(n for n in range(-value, value + 1)
                 if n % 3 == 0 and (n - value) % 2 == 0)


def assignments_for(census: Census, k: int) -> list[tuple[int, ...]]:
    """All winding number assignments for the census summing to ``k``,
    as tuples aligned with the census positions."""
    return list(_assignments_cached(tuple(census), k))


@lru_cache(maxsize=None)
def _assignments_cached(census: Census, k: int) -> tuple[tuple[int, ...], ...]:
    if not census:
        return ((),) if k == 0 else ()
    doms = [element_domain(v) for v in census]
    return tuple(tup for tup in product(*doms) if sum(tup) == k)


@lru_cache(maxsize=None)
def omega_set(census: Census) -> frozenset[int]:
    """All attainable assignment sums for a census."""
    sums = {0}
    for v in census:
        sums = {s + n for s in sums for n in element_domain(v)}
    return frozenset(sums)


@lru_cache(maxsize=None)
def _walk_values(length: int) -> frozenset[int]:
    """Values a closed walk of this length can take: 3|x, parity, |x| <= length."""
    return frozenset(x for x in range(-length, length + 1)
                     if x % 3 == 0 and (x - length) % 2 == 0)


class _ColoringEngine:
    """Backtracking enumeration of template colorings.

    Vertices are ordered to maximize adjacency to earlier vertices; every
    face's winding condition is checked the moment its last vertex gets a
    color.  Faces whose census admits every feasible walk value are never
    checked.
    """

    __slots__ = ("g", "order", "pos_of", "earlier", "face_checks", "fixed",
                 "normalize")

    def __init__(self, t: Template, fixed: dict[int, int] | None = None,
                 extra_faces_all: bool = False):
        g = t.graph
        self.g = g
        n = g.nverts
        adj = [[] for _ in range(n)]
        for d in range(0, g.ndarts, 2):
            u, w = g.vertex_of[d], g.vertex_of[d ^ 1]
            if u != w:
                adj[u].append(w)
                adj[w].append(u)

        fixed = dict(fixed) if fixed else {}
        self.fixed = fixed
        self.normalize = not fixed

        order: list[int] = []
        placed = [False] * n
        if fixed:
            for v in sorted(fixed):
                order.append(v)
                placed[v] = True
        else:
            v0 = 0
            v1 = g.vertex_of[g.vertices[0][0] ^ 1]
            order = [v0, v1]
            placed[v0] = placed[v1] = True
        score = [0] * n
        for v in order:
            for w in adj[v]:
                score[w] += 1
        while len(order) < n:
            best, best_key = -1, (-1, 0)
            for v in range(n):
                if not placed[v]:
                    key = (score[v], -v)
                    if key > best_key:
                        best, best_key = v, key
            order.append(best)
            placed[best] = True
            for w in adj[best]:
                score[w] += 1

        pos_of = [0] * n
        for i, v in enumerate(order):
            pos_of[v] = i
        self.order = order
        self.pos_of = pos_of
        self.earlier = [
            sorted({pos_of[w] for w in adj[v] if pos_of[w] < pos_of[v]})
            for v in order
        ]

        # face winding checks at the position completing each face
        checks: list[list[tuple[tuple[int, ...], frozenset[int]]]] = [[] for _ in range(n)]
        for fi, walk in enumerate(g.faces):
            cen = t.theta_of(fi)
            allowed = omega_set(cen)
            if not extra_faces_all and _walk_values(len(walk)) <= allowed:
                continue
            seq = tuple(pos_of[g.vertex_of[d]] for d in walk)
            checks[max(seq)].append((seq, allowed))
        self.face_checks = checks

    def enumerate(self, limit: int | None = None,
                  fixed_values: dict[int, int] | None = None) -> list[Coloring]:
        n = len(self.order)
        col = [0] * n  # by position
        out: list[Coloring] = []
        fixed = self.fixed if fixed_values is None else fixed_values
        order = self.order
        earlier = self.earlier
        checks = self.face_checks

        def ok_at(i: int) -> bool:
            for seq, allowed in checks[i]:
                total = 0
                prev = col[seq[-1]]
                for p in seq:
                    c = col[p]
                    d = (c - prev) % 3
                    if d == 1:
                        total += 1
                    else:
                        total -= 1
                    prev = c
                if total not in allowed:
                    return False
            return True

        normalize = self.normalize

        def rec(i: int) -> bool:
            if i == n:
                out.append(tuple(col[self.pos_of[v]] for v in range(n)))
                return limit is not None and len(out) >= limit
            v = order[i]
            banned = 0
            for p in earlier[i]:
                banned |= 1 << col[p]
            if v in fixed:
                cands: tuple[int, ...] = (fixed[v],)
            elif normalize and i == 0:
                cands = (0,)
            elif normalize and i == 1:
                cands = (1,)
            else:
                cands = (0, 1, 2)
            for c in cands:
                if (banned >> c) & 1:
                    continue
                col[i] = c
                if ok_at(i) and rec(i + 1):
                    return True
            return False

        rec(0)
        return out


def proper_colorings(t: Template, limit: int | None = None) -> list[Coloring]:
    """All proper 3-colorings of the template, one per color-permutation class."""
    return _ColoringEngine(t).enumerate(limit)


_colorable_cache: dict[bytes, bool] = {}


def is_template_3colorable(t: Template) -> bool:
    if t._colorable is None:
        code = t.canonical_code()
        val = _colorable_cache.get(code)
        if val is None:
            val = bool(_ColoringEngine(t).enumerate(limit=1))
            _colorable_cache[code] = val
        t._colorable = val
    return t._colorable


def extends_to(t: Template, fixed: dict[int, int]) -> bool:
    """Whether a partial coloring extends to a proper coloring of the template."""
    return bool(_ColoringEngine(t, fixed=fixed).enumerate(limit=1))
