"""Census tables and the template transformations used to grow the catalog.

The census-level operations (splitting, filling, boosting) consult a fixed
table of the censuses of boundary-critical triangle-free disk graphs for
boundary lengths 4..9; census values never exceed 7, so the table is never
consulted beyond 9.

The six partial-amplification cases mirror, on templates, the ways a
4-face collapse can be undone in a host graph: pure census boosts (i-a,
iii-a), re-expanding a vertex through a parallel edge (i-b, ii-b, with an
optional preceding chord recorded as a census split), and re-expanding
through a new degree-2 vertex (iii-b).  An amplification is a filling of a
partial amplification; only relevant amplifications are kept.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable, Iterator

from .surface import add_parallel_edge, add_pendant_edge, add_path_in_face, split_vertex
from .templates import (Census, Template, TemplateError, census_union, census_splits,
                        is_relevant)


class GrowthError(Exception):
    pass


_S_TABLE: dict[int, frozenset[Census]] = {
    4: frozenset(),
    5: frozenset(),
    6: frozenset({()}),
    7: frozenset({(5,)}),
    8: frozenset({(), (5, 5), (6,)}),
    9: frozenset({(5,), (5, 5, 5), (5, 6), (7,)}),
}


def s_table(k: int) -> frozenset[Census]:
    """Censuses of boundary-critical triangle-free disk graphs, boundary k."""
    if k not in _S_TABLE:
        raise GrowthError("census table consulted outside 4..9 (k=%d)" % k)
    return _S_TABLE[k]


def census_feasible(k: int, census: Census) -> bool:
    """Whether a boundary-critical triangle-free disk with boundary length
    ``k`` can carry this census.

    Parity plus total excess sum(i - 4) <= k - 6; this closed form
    reproduces the hardcoded table on 4 <= k <= 9 exactly and extends it
    to the longer quadrangulated faces that criticalization produces.
    """
    if any(v < 5 for v in census):
        return False
    if (sum(census) - k) % 2:
        return False
    return sum(v - 4 for v in census) <= k - 6


for _k, _set in _S_TABLE.items():
    _expected = frozenset(
        c for c in [(), (5,), (5, 5), (5, 5, 5), (5, 6), (6,), (7,), (5, 7),
                    (5, 5, 6), (5, 5, 5, 5), (6, 6), (8,)]
        if census_feasible(_k, c)
    )
    assert _set == _expected, (_k, _set, _expected)


def splittings(census: Census) -> set[Census]:
    """One chord drawn through a filled region, at census level."""
    out: set[Census] = set()
    for idx, v in enumerate(sorted(set(census))):
        rest = list(census)
        rest.remove(v)
        if v == 6:
            out.add(tuple(sorted(rest)))
        if v >= 7:
            out.add(tuple(sorted(rest + [v - 2])))
        if v >= 8:
            for v1 in range(5, v + 2 - 5 + 1):
                v2 = v + 2 - v1
                if v2 >= 5:
                    out.add(tuple(sorted(rest + [v1, v2])))
    return out


def fillings(census: Census) -> set[Census]:
    """Replace each element by itself or by any table census of its value."""
    options = []
    for v in census:
        opts = [(v,)]
        opts.extend(s_table(v))
        options.append(opts)
    out = set()
    for combo in product(*options):
        out.add(census_union(*combo))
    return out


def boostings(census: Census) -> set[Census]:
    """The census itself, plus one element replaced from the table two higher."""
    out = {tuple(census)}
    for v in sorted(set(census)):
        rest = list(census)
        rest.remove(v)
        for repl in s_table(v + 2):
            out.add(census_union(rest, repl))
    return out


def boostings_twice(census: Census) -> set[Census]:
    out = set()
    for b1 in boostings(census):
        out.update(boostings(b1))
    return out


# ----------------------------------------------------------------------
# graph-level helpers carrying censuses through surgeries


def _carry(t: Template, new_graph, exclude_darts: frozenset[int] = frozenset()
           ) -> dict[int, list[int]]:
    """Censuses re-keyed to the new graph via a surviving representative dart.

    Valid whenever every census-carrying face keeps at least one dart
    outside ``exclude_darts`` in a single new face (appending surgeries).
    """
    theta: dict[int, list[int]] = {}
    for fi, cen in t.theta.items():
        rep = None
        for d in t.graph.faces[fi]:
            if d not in exclude_darts:
                rep = d
                break
        if rep is None:
            raise GrowthError("census face lost all representative darts")
        theta.setdefault(new_graph.face_of[rep], []).extend(cen)
    return theta


def reveals_with_dart(t: Template, face: int, at_vertex: int | None = None
                      ) -> Iterator[tuple[Template, int]]:
    """Reveal candidates inside one face, with the new dart exposed."""
    g = t.graph
    walk = g.faces[face]
    cen = t.theta_of(face)
    n = g.ndarts
    for i, ca in enumerate(walk):
        if at_vertex is not None and g.vertex_of[ca] != at_vertex:
            continue
        h, _, nd = add_pendant_edge(g, ca)
        theta = _carry(t, h)
        yield Template(h, theta), nd
        for j, cb in enumerate(walk):
            if j == i or g.vertex_of[cb] == g.vertex_of[ca]:
                continue
            if at_vertex is None and j < i:
                continue
            h, _, nd = add_path_in_face(g, ca, cb, 0)
            base = _carry_excluding_face(t, h, face)
            fa, fb = h.face_of[nd], h.face_of[nd ^ 1]
            la, lb = len(h.faces[fa]), len(h.faces[fb])
            for part_a, part_b in census_splits(cen):
                if (sum(part_a) - la) % 2 or (sum(part_b) - lb) % 2:
                    continue
                theta = {k: list(v) for k, v in base.items()}
                if part_a:
                    theta.setdefault(fa, []).extend(part_a)
                if part_b:
                    theta.setdefault(fb, []).extend(part_b)
                yield Template(h, theta), nd


def _carry_excluding_face(t: Template, new_graph, face: int) -> dict[int, tuple[int, ...]]:
    theta: dict[int, list[int]] = {}
    for fi, cen in t.theta.items():
        if fi == face:
            continue
        rep = t.graph.faces[fi][0]
        theta.setdefault(new_graph.face_of[rep], []).extend(cen)
    return {k: tuple(v) for k, v in theta.items()}


def parallel_and_split(t: Template, e_dart: int, carve_side: int, angle_corner_picker=None
                       ) -> Iterator[tuple[Template, int]]:
    """Add an edge parallel to ``e_dart``, split its tail vertex so the new
    2-face merges with a chosen angle, for every angle choice.

    Yields (template, merged_face_index) with censuses carried; the merged
    face's census is left unboosted for the caller.
    """
    g = t.graph
    v = g.vertex_of[e_dart]
    h2, _, n1 = add_parallel_edge(g, e_dart, carve_side)
    if carve_side == 1:
        two_face_corner = n1
        moved = e_dart ^ 1
    else:
        two_face_corner = e_dart
        moved = e_dart
    theta2 = _carry(t, h2, exclude_darts=frozenset({moved}))
    t2 = Template(h2, theta2, check=False)
    for c in h2.vertices[v]:
        if c == two_face_corner:
            continue
        if angle_corner_picker is not None and not angle_corner_picker(c):
            continue
        h3, _, _ = split_vertex(h2, two_face_corner, c)
        theta3 = _carry(t2, h3)
        merged = h3.face_of[c]
        yield Template(h3, theta3, check=False), merged


def split_with_path(t: Template, c1: int, c2: int) -> tuple[Template, int, int]:
    """Split the corners' vertex and draw a 2-edge path through the gap.

    Returns (template, face_at_c1, face_at_c2); the two faces coincide when
    both corners lay in one face.
    """
    g = t.graph
    h, _, _ = split_vertex(g, c1, c2, path_interior=1)
    theta = _carry(t, h)
    return Template(h, theta, check=False), h.face_of[c1], h.face_of[c2]


# ----------------------------------------------------------------------
# partial amplification and amplification


def _with_theta(t: Template, fi: int, cen: Census) -> Template:
    theta = {k: v for k, v in t.theta.items() if k != fi}
    if cen:
        theta[fi] = cen
    return Template(t.graph, theta, check=False)


def partial_amplifications(t: Template) -> list[tuple[Template, str]]:
    """All templates produced by one partial-amplification case.

    Outputs with triangles are dropped (filling cannot repair a triangle);
    full relevance is only decided after filling.
    """
    out: list[tuple[Template, str]] = []
    seen: set[bytes] = set()

    def push(cand: Template, label: str) -> None:
        if cand.graph.has_triangle():
            return
        code = cand.canonical_code()
        if code not in seen:
            seen.add(code)
            out.append((cand, label))

    g = t.graph

    # (i-a)/(iii-a): boost a face's census once or twice
    for fi in range(g.nfaces):
        cen = t.theta_of(fi)
        for b in boostings(cen):
            push(_with_theta(t, fi, b), "i-a")
        for b in boostings_twice(cen):
            push(_with_theta(t, fi, b), "iii-a")

    # (i-b): choose or reveal an edge at v, double it, split v into an angle
    for v in range(g.nverts):
        sources: list[tuple[Template, int]] = [(t, d) for d in g.vertices[v]]
        for fi in {g.face_of[c] for c in g.vertices[v]}:
            sources.extend(reveals_with_dart(t, fi, at_vertex=v))
        for t1, e_dart in sources:
            if t1.graph.vertex_of[e_dart] != v:
                raise GrowthError("revealed edge not anchored at the vertex")
            for side in (0, 1):
                for t3, merged in parallel_and_split(t1, e_dart, side):
                    for b in boostings(t3.theta_of(merged)):
                        push(_with_theta(t3, merged, b), "i-b")

    # (ii-a): census split inside a face, then boost it
    for fi in range(g.nfaces):
        cen = t.theta_of(fi)
        if not cen or max(cen) < 6:
            continue
        for sp in splittings(cen):
            base = _with_theta(t, fi, sp)
            for b in boostings(sp):
                push(_with_theta(base, fi, b), "ii-a")

    # (ii-b): census split inside f, reveal in f at a vertex of f, then as (i-b)
    for fi in range(g.nfaces):
        cen = t.theta_of(fi)
        if not cen or max(cen) < 6:
            continue
        face_vertices = {g.vertex_of[d] for d in g.faces[fi]}
        for sp in splittings(cen):
            base = _with_theta(t, fi, sp)
            for v in sorted(face_vertices):
                for t1, e_dart in reveals_with_dart(base, fi, at_vertex=v):
                    for side in (0, 1):
                        for t3, merged in parallel_and_split(t1, e_dart, side):
                            for b in boostings(t3.theta_of(merged)):
                                push(_with_theta(t3, merged, b), "ii-b")

    # (iii-b): split a vertex with a new 2-path between two distinct angles
    for v in range(g.nverts):
        cors = g.vertices[v]
        for i in range(len(cors)):
            for j in range(i + 1, len(cors)):
                t3, f1, f2 = split_with_path(t, cors[i], cors[j])
                if f1 == f2:
                    for b in boostings_twice(t3.theta_of(f1)):
                        push(_with_theta(t3, f1, b), "iii-b")
                else:
                    for b1 in boostings(t3.theta_of(f1)):
                        mid = _with_theta(t3, f1, b1)
                        for b2 in boostings(t3.theta_of(f2)):
                            push(_with_theta(mid, f2, b2), "iii-b")
    return out


def amplifications(t: Template) -> list[tuple[Template, str]]:
    """Relevant fillings of the partial amplifications, deduplicated."""
    out: list[tuple[Template, str]] = []
    seen: set[bytes] = set()
    for part, label in partial_amplifications(t):
        face_opts: list[list[tuple[int, Census]]] = []
        for fi, cen in sorted(part.theta.items()):
            face_opts.append([(fi, f) for f in sorted(fillings(cen))])
        for combo in product(*face_opts):
            theta = {fi: cen for fi, cen in combo if cen}
            cand = Template(part.graph, theta, check=False)
            code = cand.canonical_code()
            if code in seen:
                continue
            seen.add(code)
            if is_relevant(cand):
                out.append((cand, label))
    return out
