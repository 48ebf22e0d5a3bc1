"""Independent brute-force ground truth and random instance generation.

Everything here works at the plain-graph level (no winding machinery), so
it can cross-check the template pipeline.  All randomized operations take
an explicit seed and reproduce bit-exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .surface import (EmbeddedGraph, SurfaceError, add_edge_in_face, add_path_in_face,
                      add_pendant_edge, circulant_quadrangulation, contract_edge,
                      delete_edge, grid_quadrangulation)
from .templates import SimpleTemplate, Template, as_simple

DEFAULT_VERTEX_BOUND = 24


class OracleError(Exception):
    pass


class VertexBoundExceeded(OracleError):
    pass


# ----------------------------------------------------------------------
# plain 3-colorability


def _adjacency_lists(g: EmbeddedGraph) -> list[list[int]]:
    return [sorted(s) for s in g.adjacency()]


def brute_force_3colorable(g: EmbeddedGraph, bound: int = DEFAULT_VERTEX_BOUND,
                           witness: bool = False):
    """Exact 3-colorability by backtracking; parallel edges are immaterial.

    Returns a bool, or (bool, coloring-or-None) when ``witness`` is set.
    """
    n = g.nverts
    if n > bound:
        raise VertexBoundExceeded("%d vertices exceeds the bound %d" % (n, bound))
    adj = _adjacency_lists(g)

    order: list[int] = []
    placed = [False] * n
    score = [0] * n
    for _ in range(n):
        best, key = -1, (-1, -1, 0)
        for v in range(n):
            if not placed[v]:
                k = (score[v], len(adj[v]), -v)
                if k > key:
                    best, key = v, k
        order.append(best)
        placed[best] = True
        for w in adj[best]:
            score[w] += 1
    pos = [0] * n
    for i, v in enumerate(order):
        pos[v] = i
    earlier = [[pos[w] for w in adj[v] if pos[w] < pos[v]] for v in order]

    col = [0] * n

    def rec(i: int) -> bool:
        if i == n:
            return True
        banned = 0
        for p in earlier[i]:
            banned |= 1 << col[p]
        for c in range(3):
            if i == 0 and c > 0:
                break
            if (banned >> c) & 1:
                continue
            col[i] = c
            if rec(i + 1):
                return True
        return False

    ok = rec(0)
    if witness:
        return ok, (tuple(col[pos[v]] for v in range(n)) if ok else None)
    return ok


def is_4_critical(g: EmbeddedGraph, bound: int = DEFAULT_VERTEX_BOUND) -> bool:
    """Not 3-colorable, and every single-edge deletion is 3-colorable."""
    if g.nverts > bound:
        raise VertexBoundExceeded("%d vertices exceeds the bound %d" % (g.nverts, bound))
    pairs = g.edge_list()
    if len({tuple(sorted(p)) for p in pairs}) != len(pairs):
        return False  # a parallel mate makes one copy redundant
    if brute_force_3colorable(g, bound):
        return False
    for d in range(0, g.ndarts, 2):
        h, _ = delete_edge(g, d)
        if not brute_force_3colorable(h, bound):
            return False
    return True


def extract_4critical_subgraph(g: EmbeddedGraph, bound: int = DEFAULT_VERTEX_BOUND,
                               rng: random.Random | None = None) -> EmbeddedGraph:
    """Greedily delete edges while the graph stays non-3-colorable.

    The result is a 4-critical subgraph with its inherited drawing.
    """
    if brute_force_3colorable(g, bound):
        raise OracleError("graph is 3-colorable; no 4-critical subgraph")
    changed = True
    while changed:
        changed = False
        darts = list(range(0, g.ndarts, 2))
        if rng is not None:
            rng.shuffle(darts)
        for d in darts:
            h, _ = delete_edge(g, d)
            if not brute_force_3colorable(h, bound):
                g = h
                changed = True
                break
    return g


# ----------------------------------------------------------------------
# 4-face collapse and irreducibility


@dataclass
class CollapseResult:
    graph: EmbeddedGraph
    triangle_created: bool
    merged_vertex: int
    path: tuple[int, int, int]  # v1, merged, v3 in the new numbering


def collapse_4face(g: EmbeddedGraph, face_index: int, diagonal: int) -> CollapseResult:
    """Identify opposite vertices of a 4-face and suppress the 2-faces.

    ``diagonal`` 0 merges the walk's odd-position vertices, 1 the even.
    """
    walk = g.faces[face_index]
    if len(walk) != 4:
        raise OracleError("face %d is not a 4-face" % face_index)
    vs = [g.vertex_of[d] for d in walk]
    if len(set(vs)) != 4:
        raise OracleError("4-face is not bounded by a cycle")
    i = 1 - diagonal % 2
    keep1, merge1, keep2, merge2 = vs[(i + 3) % 4], vs[i], vs[(i + 1) % 4], vs[(i + 2) % 4]
    adj = g.adjacency()
    if merge2 in adj[merge1]:
        raise OracleError("diagonal vertices are adjacent; collapse would make a loop")

    ca = walk[i]
    cb = walk[(i + 2) % 4]
    h, _, nd = add_edge_in_face(g, ca, cb)
    h2, dmap2 = contract_edge(h, nd)
    # the collapsed face leaves two 2-faces at the merged vertex; drop one
    # edge of each
    for _ in range(2):
        two = next((f for f in h2.faces if len(f) == 2), None)
        if two is None:
            raise OracleError("expected a 2-face to suppress")
        h2, dmap3 = delete_edge(h2, two[0])
        dmap2 = [(-1 if x < 0 else dmap3[x]) for x in dmap2]
    if any(len(f) == 2 for f in h2.faces):
        raise OracleError("unexpected extra 2-face after collapse")

    # recover vertex names in the collapsed graph
    def new_vertex(old_v: int) -> int:
        for d in g.vertices[old_v]:
            nd2 = dmap2[d]
            if nd2 >= 0:
                return h2.vertex_of[nd2]
        raise OracleError("vertex lost all darts in collapse")

    merged = new_vertex(merge1)
    return CollapseResult(h2, h2.has_triangle(), merged,
                          (new_vertex(keep1), merged, new_vertex(keep2)))


def collapsible_4faces(g: EmbeddedGraph) -> list[tuple[int, int]]:
    """(face, diagonal) pairs whose collapse keeps the graph triangle-free."""
    out = []
    for fi, walk in enumerate(g.faces):
        if len(walk) != 4 or len({g.vertex_of[d] for d in walk}) != 4:
            continue
        for diag in (0, 1):
            try:
                res = collapse_4face(g, fi, diag)
            except OracleError:
                continue
            if not res.triangle_created:
                out.append((fi, diag))
    return out


def is_irreducible(g: EmbeddedGraph) -> bool:
    """Every 4-face collapse (both diagonals) creates a triangle."""
    return not collapsible_4faces(g)


def reduce_to_irreducible(g: EmbeddedGraph, seed: int = 0,
                          bound: int = DEFAULT_VERTEX_BOUND) -> EmbeddedGraph:
    """Alternate 4-face collapses with criticality extraction to a fixpoint.

    Starting from a non-3-colorable triangle-free drawing, this walks the
    reduction order all the way down to an irreducible 4-critical graph.
    """
    rng = random.Random(seed)
    g = extract_4critical_subgraph(g, bound, rng)
    while True:
        options = collapsible_4faces(g)
        if not options:
            return g
        fi, diag = rng.choice(options)
        res = collapse_4face(g, fi, diag)
        g = extract_4critical_subgraph(res.graph, bound, rng)


# ----------------------------------------------------------------------
# quadrangulation fills


def fill_face_with_quadrangulation(g: EmbeddedGraph, face_index: int,
                                   rng: random.Random, interior_budget: int
                                   ) -> EmbeddedGraph:
    """Quadrangulate one even face by random ear moves.

    Keeps the whole graph triangle-free and never duplicates an edge.  The
    face may gain up to ``interior_budget`` interior vertices.
    """
    L = len(g.faces[face_index])
    if L % 2 != 0:
        raise OracleError("cannot quadrangulate an odd face")
    hole = face_index
    budget = interior_budget
    adj = g.adjacency()

    while True:
        walk = g.faces[hole]
        L = len(walk)
        if L == 4 and (budget <= 0 or rng.random() < 0.6):
            return g
        moves = []
        if L >= 6:
            for i in range(L):
                a, b = walk[i], walk[(i + 3) % L]
                u, w = g.vertex_of[a], g.vertex_of[b]
                if u != w and w not in adj[u] and not (adj[u] & adj[w]):
                    moves.append(("fold", i))
        if budget >= 1 and L >= 4:
            for i in range(L):
                u = g.vertex_of[walk[i]]
                w = g.vertex_of[walk[(i + 2) % L]]
                if u != w and w not in adj[u]:
                    moves.append(("tent", i))
        if budget >= 2:
            for i in range(L):
                moves.append(("grow", i))
        if not moves:
            if L == 4:
                return g
            raise OracleError("no quadrangulation move available")
        kind, i = moves[rng.randrange(len(moves))]
        walk = g.faces[hole]
        if kind == "fold":
            a, b = walk[i], walk[(i + 3) % L]
            g, _, nd = add_edge_in_face(g, a, b)
            fa, fb = g.face_of[nd], g.face_of[nd ^ 1]
            if len(g.faces[fa]) == 4 and len(g.faces[fb]) == 4:
                return g
            hole = fa if len(g.faces[fa]) != 4 else fb
        elif kind == "tent":
            # new vertex across two consecutive boundary edges
            a, c = walk[i], walk[(i + 2) % L]
            g, _, nd = add_path_in_face(g, a, c, interior=1)
            budget -= 1
            fa, fb = g.face_of[nd], g.face_of[nd ^ 1]
            if len(g.faces[fa]) == 4 and len(g.faces[fb]) == 4:
                return g
            hole = fa if len(g.faces[fa]) != 4 else fb
        else:
            # two new vertices over one boundary edge
            a, b = walk[i], walk[(i + 1) % L]
            g, _, nd = add_path_in_face(g, a, b, interior=2)
            budget -= 2
            fa, fb = g.face_of[nd], g.face_of[nd ^ 1]
            if len(g.faces[fa]) == 4 and len(g.faces[fb]) == 4:
                return g
            hole = fa if len(g.faces[fa]) != 4 else fb
        adj = g.adjacency()


def random_quadrangulation_fill(t: Template | SimpleTemplate, seed: int = 0,
                                interior_budget: int = 4) -> EmbeddedGraph:
    """A random graph represented by a direct template.

    Each quadrangulated face is filled by a random triangle-free disk
    quadrangulation with the matching boundary; proper faces stay faces.
    """
    simple = t if isinstance(t, SimpleTemplate) else as_simple(t)
    rng = random.Random(seed)
    g = simple.graph
    # face identity tracked by the original face's smallest dart (fills only
    # ever append darts)
    for fi in sorted(simple.quadrangulated):
        hole_key = min(simple.graph.faces[fi])
        g = fill_face_with_quadrangulation(g, g.face_of[hole_key], rng,
                                           interior_budget)
    return g


# ----------------------------------------------------------------------
# random embedded instances


def random_trifree_torus_graph(n: int, min_edge_width: int = 1, seed: int = 0,
                               attempts: int = 400) -> EmbeddedGraph:
    """Random triangle-free 2-cell torus drawing with bounded vertex count.

    Rejection sampling over twisted grids, circulant quadrangulations and
    random face subdivisions; raises after the attempt budget.
    """
    rng = random.Random(seed)
    for _ in range(attempts):
        kind = rng.random()
        try:
            if kind < 0.45:
                nn = rng.randrange(max(7, min(9, n)), n + 1)
                s = rng.randrange(3, nn - 2)
                g = circulant_quadrangulation(nn, s)
            else:
                rows = rng.randrange(2, 5)
                cols = rng.randrange(3, 7)
                if rows * cols > n:
                    continue
                g = grid_quadrangulation(rows, cols, rng.randrange(cols))
        except SurfaceError:
            continue
        if not g.is_two_cell_torus():
            continue
        # sprinkle face subdivisions to vary the census
        for _ in range(rng.randrange(0, 3)):
            if g.nverts >= n:
                break
            fi = rng.randrange(g.nfaces)
            walk = g.faces[fi]
            i = rng.randrange(len(walk))
            j = rng.randrange(len(walk))
            if i == j:
                continue
            a, b = walk[i], walk[j]
            if g.vertex_of[a] == g.vertex_of[b]:
                continue
            g2, _, _ = add_path_in_face(g, a, b, interior=rng.randrange(1, 3))
            if not g2.has_triangle():
                g = g2
        if g.nverts > n or g.has_triangle() or not g.is_two_cell_torus():
            continue
        if g.edge_width() >= min_edge_width:
            return g
    raise OracleError("sampling budget exhausted (n=%d, ew>=%d, seed=%d)"
                      % (n, min_edge_width, seed))
