"""Combinatorial-map kernel for multigraphs 2-cell embedded in the torus.

A drawing is encoded as a rotation system on darts (half-edges): dart ``d``
is paired with ``d ^ 1`` (the two halves of edge ``d // 2``), and ``sigma``
maps each dart to the next dart counterclockwise around the same vertex.
Faces are the orbits of ``d -> sigma[d ^ 1]``; we fix this traversal
direction once and for all and call the resulting walks the clockwise
boundary walks.  Flipping the convention mirrors every drawing at once, so
nothing observable depends on it.

All graphs are immutable; surgeries return new graphs together with a dart
map relating old darts to new ones (-1 for deleted darts).
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence


class SurfaceError(Exception):
    """Malformed rotation data or an invalid surgery request."""


class LoopEdgeError(SurfaceError):
    """Operation would create, or input contains, a loop edge."""


def _cycles_of(perm: Sequence[int]) -> list[list[int]]:
    seen = [False] * len(perm)
    out = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        cyc = []
        d = start
        while not seen[d]:
            seen[d] = True
            cyc.append(d)
            d = perm[d]
        out.append(cyc)
    return out


class EmbeddedGraph:
    """A multigraph with a fixed 2-cell drawing, encoded by its rotation system.

    Loops are rejected outright.  Parallel edges are allowed, and faces of
    length two may occur transiently inside composite surgeries.
    """

    __slots__ = ("sigma", "vertex_of", "vertices", "faces", "face_of",
                 "_inv_sigma", "_hom", "_canon_cache", "_hash")

    def __init__(self, sigma: Sequence[int], check: bool = True):
        sigma = tuple(sigma)
        n = len(sigma)
        if check:
            if n % 2 != 0:
                raise SurfaceError("odd number of darts")
            if sorted(sigma) != list(range(n)):
                raise SurfaceError("rotation is not a permutation of the darts")
        self.sigma = sigma

        vcycles = _cycles_of(sigma)
        vcycles.sort(key=min)
        self.vertices = tuple(tuple(c) for c in vcycles)
        vertex_of = [0] * n
        for i, cyc in enumerate(vcycles):
            for d in cyc:
                vertex_of[d] = i
        self.vertex_of = tuple(vertex_of)

        if check:
            for d in range(0, n, 2):
                if vertex_of[d] == vertex_of[d ^ 1]:
                    raise LoopEdgeError("loop edge on darts (%d %d)" % (d, d ^ 1))

        fcycles = _cycles_of([sigma[d ^ 1] for d in range(n)])
        fcycles.sort(key=min)
        self.faces = tuple(tuple(c) for c in fcycles)
        face_of = [0] * n
        for i, cyc in enumerate(fcycles):
            for d in cyc:
                face_of[d] = i
        self.face_of = tuple(face_of)

        self._inv_sigma = None
        self._hom = None
        self._canon_cache = {}
        self._hash = None

    # ------------------------------------------------------------------
    # basic structure

    @property
    def ndarts(self) -> int:
        return len(self.sigma)

    @property
    def nedges(self) -> int:
        return len(self.sigma) // 2

    @property
    def nverts(self) -> int:
        return len(self.vertices)

    @property
    def nfaces(self) -> int:
        return len(self.faces)

    def euler(self) -> int:
        return self.nverts - self.nedges + self.nfaces

    def is_connected(self) -> bool:
        if self.ndarts == 0:
            return True
        seen = bytearray(self.ndarts)
        seen[0] = 1
        stack = [0]
        count = 1
        while stack:
            d = stack.pop()
            for e in (self.sigma[d], d ^ 1):
                if not seen[e]:
                    seen[e] = 1
                    count += 1
                    stack.append(e)
        return count == self.ndarts

    def is_two_cell_torus(self) -> bool:
        """True iff the rotation system describes a 2-cell drawing in the torus."""
        return self.ndarts > 0 and self.is_connected() and self.euler() == 0

    def tail(self, d: int) -> int:
        return self.vertex_of[d]

    def head(self, d: int) -> int:
        return self.vertex_of[d ^ 1]

    def degree(self, v: int) -> int:
        return len(self.vertices[v])

    def neighbors(self, v: int) -> list[int]:
        return [self.vertex_of[d ^ 1] for d in self.vertices[v]]

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.nverts)]
        for d in range(0, self.ndarts, 2):
            u, w = self.vertex_of[d], self.vertex_of[d ^ 1]
            adj[u].add(w)
            adj[w].add(u)
        return adj

    def edge_list(self) -> list[tuple[int, int]]:
        return [(self.vertex_of[d], self.vertex_of[d ^ 1]) for d in range(0, self.ndarts, 2)]

    def has_triangle(self) -> bool:
        adj = self.adjacency()
        for u in range(self.nverts):
            for w in adj[u]:
                if w <= u:
                    continue
                for x in adj[u]:
                    if x > w and x in adj[w]:
                        return True
        return False

    def is_two_connected(self) -> bool:
        """Connected, at least 3 vertices, and no cut vertex."""
        n = self.nverts
        if n < 3 or not self.is_connected():
            return False
        adj = [sorted(s) for s in self.adjacency()]
        num = [-1] * n
        low = [0] * n
        parent = [-1] * n
        counter = 1
        num[0] = low[0] = 1
        stack: list[tuple[int, Iterable[int]]] = [(0, iter(adj[0]))]
        root_children = 0
        while stack:
            v, it = stack[-1]
            advanced = False
            for w in it:
                if num[w] == -1:
                    parent[w] = v
                    counter += 1
                    num[w] = low[w] = counter
                    if v == 0:
                        root_children += 1
                    stack.append((w, iter(adj[w])))
                    advanced = True
                    break
                elif w != parent[v]:
                    if num[w] < low[v]:
                        low[v] = num[w]
            if not advanced:
                stack.pop()
                p = parent[v]
                if p != -1:
                    if low[v] < low[p]:
                        low[p] = low[v]
                    if p != 0 and low[v] >= num[p]:
                        return False
        return root_children <= 1

    def __eq__(self, other) -> bool:
        return isinstance(other, EmbeddedGraph) and self.sigma == other.sigma

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.sigma)
        return self._hash

    def __repr__(self) -> str:
        return "EmbeddedGraph(V=%d, E=%d, F=%d)" % (self.nverts, self.nedges, self.nfaces)

    # ------------------------------------------------------------------
    # census

    def census(self, face_indices: Iterable[int] | None = None) -> tuple[int, ...]:
        """Multiset (sorted tuple) of face lengths, excluding length-4 faces."""
        idx = range(self.nfaces) if face_indices is None else face_indices
        return tuple(sorted(len(self.faces[i]) for i in idx if len(self.faces[i]) != 4))

    # ------------------------------------------------------------------
    # homology

    def homology(self) -> tuple[tuple[int, int], ...]:
        """Per-dart vectors in Z^2 whose sum vanishes around every face.

        Darts of a spanning tree carry (0, 0); the two cotree edges missed
        by the dual spanning tree carry the generator classes.
        """
        if self._hom is not None:
            return self._hom
        if not self.is_two_cell_torus():
            raise SurfaceError("homology requires a 2-cell torus drawing")
        tail = self.vertex_of

        tree_edges = set()
        seen_v = {tail[0]}
        queue = deque([tail[0]])
        while queue:
            v = queue.popleft()
            for d in self.vertices[v]:
                w = tail[d ^ 1]
                if w not in seen_v:
                    seen_v.add(w)
                    tree_edges.add(d // 2)
                    queue.append(w)

        nontree = [k for k in range(self.nedges) if k not in tree_edges]
        val: dict[int, tuple[int, int]] = {k: (0, 0) for k in tree_edges}
        face_of = self.face_of
        incid: dict[int, list[int]] = {i: [] for i in range(self.nfaces)}
        for k in nontree:
            incid[face_of[2 * k]].append(k)
            incid[face_of[2 * k + 1]].append(k)

        # dual spanning tree over faces through the cotree edges
        dual_parent_edge: dict[int, int] = {}
        dual_order = [0]
        seen_f = {0}
        dual_tree = set()
        qi = 0
        while qi < len(dual_order):
            f = dual_order[qi]
            qi += 1
            for k in incid[f]:
                g = face_of[2 * k] if face_of[2 * k] != f else face_of[2 * k + 1]
                if g != f and g not in seen_f:
                    seen_f.add(g)
                    dual_parent_edge[g] = k
                    dual_tree.add(k)
                    dual_order.append(g)
        free = [k for k in nontree if k not in dual_tree]
        if len(free) != 2:
            raise SurfaceError("expected 2 generator edges, found %d" % len(free))
        val[free[0]] = (1, 0)
        val[free[1]] = (0, 1)

        # peel the dual tree from the leaves: one unknown edge per face
        for f in reversed(dual_order[1:]):
            k_unknown = dual_parent_edge[f]
            sx = sy = 0
            sign = 0
            for d in self.faces[f]:
                if d // 2 == k_unknown:
                    sign += 1 if d % 2 == 0 else -1
                    continue
                vx, vy = val[d // 2]
                if d % 2:
                    vx, vy = -vx, -vy
                sx += vx
                sy += vy
            if abs(sign) != 1:
                raise SurfaceError("degenerate dual tree edge")
            val[k_unknown] = (-sx * sign, -sy * sign)

        hom = tuple(
            (val[d // 2] if d % 2 == 0 else (-val[d // 2][0], -val[d // 2][1]))
            for d in range(self.ndarts)
        )
        for f in self.faces:
            if (sum(hom[d][0] for d in f), sum(hom[d][1] for d in f)) != (0, 0):
                raise SurfaceError("face with nonzero homology sum")
        self._hom = hom
        return hom

    def walk_class(self, darts: Iterable[int]) -> tuple[int, int]:
        hom = self.homology()
        x = y = 0
        for d in darts:
            x += hom[d][0]
            y += hom[d][1]
        return (x, y)

    def is_contractible(self, cycle: Sequence[int]) -> bool:
        """Whether a simple closed walk (dart sequence) bounds a disk."""
        tail = self.vertex_of
        m = len(cycle)
        if m == 0:
            raise SurfaceError("empty cycle")
        verts = []
        for i, d in enumerate(cycle):
            if tail[d ^ 1] != tail[cycle[(i + 1) % m]]:
                raise SurfaceError("dart sequence is not a closed walk")
            verts.append(tail[d])
        if len(set(verts)) != m:
            raise SurfaceError("closed walk is not a simple cycle")
        return self.walk_class(cycle) == (0, 0)

    def edge_width(self) -> int:
        """Length of the shortest non-contractible cycle (exhaustive BFS)."""
        hom = self.homology()
        tail = self.vertex_of
        best = self._generator_cycle_bound()
        for start in range(self.nverts):
            init = (start, 0, 0)
            seen = {init}
            frontier = [init]
            depth = 0
            while frontier and depth + 1 < best:
                depth += 1
                nxt = []
                for (v, hx, hy) in frontier:
                    for d in self.vertices[v]:
                        w = tail[d ^ 1]
                        hx2, hy2 = hx + hom[d][0], hy + hom[d][1]
                        if w == start and (hx2 or hy2):
                            if depth < best:
                                best = depth
                        state = (w, hx2, hy2)
                        if state not in seen:
                            seen.add(state)
                            nxt.append(state)
                frontier = nxt
        return best

    def _generator_cycle_bound(self) -> int:
        """Length of some non-contractible closed walk, via fundamental cycles.

        Fundamental cycles of a BFS tree generate the cycle space, hence
        some of them carry a nonzero class; the shortest such walk bounds
        the edge-width from above.
        """
        hom = self.homology()
        tail = self.vertex_of
        root = 0
        dist = {root: 0}
        cls = {root: (0, 0)}
        tree_edges = set()
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for d in self.vertices[v]:
                w = tail[d ^ 1]
                if w not in dist:
                    dist[w] = dist[v] + 1
                    cls[w] = (cls[v][0] + hom[d][0], cls[v][1] + hom[d][1])
                    tree_edges.add(d // 2)
                    queue.append(w)
        best = None
        for d in range(0, self.ndarts, 2):
            if d // 2 in tree_edges:
                continue
            u, w = tail[d], tail[d ^ 1]
            cx = cls[u][0] + hom[d][0] - cls[w][0]
            cy = cls[u][1] + hom[d][1] - cls[w][1]
            if (cx, cy) != (0, 0):
                cand = dist[u] + dist[w] + 1
                if best is None or cand < best:
                    best = cand
        if best is None:
            raise SurfaceError("no non-contractible fundamental cycle found")
        return best

    # ------------------------------------------------------------------
    # canonical form

    def mirror_sigma(self) -> tuple[int, ...]:
        if self._inv_sigma is None:
            inv = [0] * self.ndarts
            for d, e in enumerate(self.sigma):
                inv[e] = d
            self._inv_sigma = tuple(inv)
        return self._inv_sigma

    def mirrored(self) -> "EmbeddedGraph":
        return EmbeddedGraph(self.mirror_sigma(), check=False)

    def canonical_code(self, theta=None, vertex_colors=None, edge_colors=None) -> bytes:
        """Canonical byte string, equal iff the decorated drawings are homeomorphic.

        Minimizes a traversal code over all starting darts and both
        orientations (torus homeomorphisms may reverse orientation).
        ``theta`` decorates faces (face index -> tuple of ints),
        ``vertex_colors`` decorates vertices (vertex index -> int tuple),
        ``edge_colors`` decorates edges (edge index -> int).
        """
        key = (
            None if theta is None else tuple(sorted(theta.items())),
            None if vertex_colors is None else tuple(sorted(vertex_colors.items())),
            None if edge_colors is None else tuple(sorted(edge_colors.items())),
        )
        cached = self._canon_cache.get(key)
        if cached is not None:
            return cached
        if self.ndarts == 0:
            raise SurfaceError("canonical form of the empty graph")
        if not self.is_connected():
            raise SurfaceError("canonical form requires a connected graph")
        n = self.ndarts
        best_main: list[int] | None = None
        best_labels: list[tuple[list[int], bool]] = []

        for mirrored, nxt in ((False, self.sigma), (True, self.mirror_sigma())):
            for start in range(n):
                lab = [-1] * n
                lab[start] = 0
                order = [start]
                out: list[int] = []
                i = 0
                worse = False
                while i < len(order):
                    d = order[i]
                    i += 1
                    a = nxt[d]
                    b = d ^ 1
                    if lab[a] < 0:
                        lab[a] = len(order)
                        order.append(a)
                    if lab[b] < 0:
                        lab[b] = len(order)
                        order.append(b)
                    la, lb = lab[a], lab[b]
                    if best_main is not None:
                        j = len(out)
                        ba, bb = best_main[j], best_main[j + 1]
                        if la > ba or (la == ba and lb > bb):
                            worse = True
                            break
                        if la < ba or lb < bb:
                            best_main = None
                            best_labels = []
                    out.append(la)
                    out.append(lb)
                if worse:
                    continue
                if best_main is None:
                    best_main = out
                    best_labels = [(lab, mirrored)]
                else:
                    best_labels.append((lab, mirrored))

        assert best_main is not None and len(best_main) == 2 * n
        deco_best = None
        if theta is not None or vertex_colors is not None or edge_colors is not None:
            for lab, mirrored in best_labels:
                deco: list = []
                if theta is not None:
                    items = []
                    for fi, cen in theta.items():
                        # mirrored maps carry the reversed faces (dartwise ^1)
                        if mirrored:
                            mlab = min(lab[d ^ 1] for d in self.faces[fi])
                        else:
                            mlab = min(lab[d] for d in self.faces[fi])
                        items.append((mlab, tuple(cen)))
                    deco.append(tuple(sorted(items)))
                if vertex_colors is not None:
                    items = []
                    for vi, col in vertex_colors.items():
                        mlab = min(lab[d] for d in self.vertices[vi])
                        items.append((mlab, col))
                    deco.append(tuple(sorted(items)))
                if edge_colors is not None:
                    items = []
                    for k, col in edge_colors.items():
                        mlab = min(lab[2 * k], lab[2 * k + 1])
                        items.append((mlab, col))
                    deco.append(tuple(sorted(items)))
                deco_t = tuple(deco)
                if deco_best is None or deco_t < deco_best:
                    deco_best = deco_t
        code = repr((tuple(best_main), deco_best)).encode()
        self._canon_cache[key] = code
        return code

    def relabeled(self, edge_perm: Sequence[int], flips: Sequence[bool]) -> "EmbeddedGraph":
        """Rename edge k to edge_perm[k], optionally swapping its two darts."""
        dmap = [0] * self.ndarts
        for k in range(self.nedges):
            j = edge_perm[k]
            if flips[k]:
                dmap[2 * k], dmap[2 * k + 1] = 2 * j + 1, 2 * j
            else:
                dmap[2 * k], dmap[2 * k + 1] = 2 * j, 2 * j + 1
        sig = [0] * self.ndarts
        for d in range(self.ndarts):
            sig[dmap[d]] = dmap[self.sigma[d]]
        return EmbeddedGraph(sig)

    # ------------------------------------------------------------------
    # radial graph and representativity

    def radial_graph(self) -> "EmbeddedGraph":
        """Vertex-face incidence quadrangulation of the same surface.

        Corner ``d`` becomes a radial edge joining vertex ``tail(d)`` to the
        face containing that corner.
        """
        for face_dir in (1, -1):
            n = self.ndarts
            sig = [0] * (2 * n)
            for v_cycle in self.vertices:
                m = len(v_cycle)
                for i, d in enumerate(v_cycle):
                    sig[2 * d] = 2 * v_cycle[(i + 1) % m]
            for f_cycle in self.faces:
                m = len(f_cycle)
                for i, d in enumerate(f_cycle):
                    sig[2 * d + 1] = 2 * f_cycle[(i + face_dir) % m] + 1
            rad = EmbeddedGraph(sig, check=False)
            if rad.euler() == self.euler() and all(len(f) == 4 for f in rad.faces):
                return rad
        raise SurfaceError("radial construction lost the surface")

    def representativity_at_least(self, r: int) -> bool:
        """Face-width test via the radial graph (fw = radial edge-width / 2)."""
        return self.radial_graph().edge_width() >= 2 * r

    # ------------------------------------------------------------------
    # corners

    def corner_face(self, d: int) -> int:
        """Face containing the corner named by dart ``d``.

        The corner sits at ``tail(d)`` between ``sigma^-1(d)`` and ``d``.
        """
        return self.face_of[d]

    def corners_at(self, v: int) -> tuple[int, ...]:
        return self.vertices[v]


# ----------------------------------------------------------------------
# construction helpers


def build_graph(rotations: Sequence[Sequence[int]],
                involution: Sequence[tuple[int, int]] | None = None) -> EmbeddedGraph:
    """Build a graph from per-vertex counterclockwise dart lists.

    ``involution`` pairs darts into edges; when omitted, darts are assumed
    already paired as (0 1)(2 3)...  Arbitrary pairings are normalized to
    that internal form (edges numbered by first appearance).
    """
    all_darts = [d for rot in rotations for d in rot]
    n = len(all_darts)
    if sorted(all_darts) != list(range(n)):
        raise SurfaceError("rotation lists do not partition darts 0..%d" % (n - 1))
    if involution is None:
        if n % 2 != 0:
            raise SurfaceError("odd number of darts")
        pairs = [(2 * k, 2 * k + 1) for k in range(n // 2)]
    else:
        pairs = [(int(a), int(b)) for a, b in involution]
    seen = set()
    for a, b in pairs:
        if a == b:
            raise SurfaceError("involution has a fixed point: %d" % a)
        seen.update((a, b))
    if len(seen) != n or len(pairs) != n // 2:
        raise SurfaceError("involution is not a perfect matching on the darts")
    rename = {}
    for k, (a, b) in enumerate(pairs):
        rename[a] = 2 * k
        rename[b] = 2 * k + 1
    sig = [0] * n
    for rot in rotations:
        m = len(rot)
        for i, d in enumerate(rot):
            sig[rename[d]] = rename[rot[(i + 1) % m]]
    return EmbeddedGraph(sig)


def graph_from_adjacency(rotations: Sequence[Sequence[int]]) -> EmbeddedGraph:
    """Build a graph from per-vertex counterclockwise neighbor lists.

    Neighbor multiplicities must match; parallel edges are paired in the
    order they occur around the two endpoints.
    """
    n = len(rotations)
    slots: dict[tuple[int, int], list[int]] = {}
    counter = 0
    dart_rot: list[list[int]] = [[] for _ in range(n)]
    for v in range(n):
        for w in rotations[v]:
            if w == v:
                raise LoopEdgeError("loop in adjacency rotation at %d" % v)
            if v < w or (w, v) not in slots or not slots[(w, v)]:
                if (v, w) not in slots:
                    slots[(v, w)] = []
                d = counter
                counter += 2
                slots[(v, w)].append(d + 1)
                dart_rot[v].append(d)
            else:
                dart_rot[v].append(slots[(w, v)].pop(0))
    if any(s for s in slots.values()):
        raise SurfaceError("unmatched adjacency multiplicities")
    return build_graph(dart_rot)


def circulant_quadrangulation(n: int, s: int) -> EmbeddedGraph:
    """Quadrangulation of the torus on Z_n with steps +1 and +s."""
    if not (2 <= s <= n - 2):
        raise SurfaceError("step out of range")
    rotations = []
    pairs = []
    for i in range(n):
        pairs.append((4 * i, 4 * i + 1))       # edge i -> i+1
        pairs.append((4 * i + 2, 4 * i + 3))   # edge i -> i+s
    for i in range(n):
        plus1 = 4 * i
        plus_s = 4 * i + 2
        minus1 = 4 * ((i - 1) % n) + 1
        minus_s = 4 * ((i - s) % n) + 3
        rotations.append([plus1, plus_s, minus1, minus_s])
    return build_graph(rotations, pairs)


def grid_quadrangulation(rows: int, cols: int, twist: int = 0) -> EmbeddedGraph:
    """Toroidal rows x cols grid of quadrilaterals, with a column shift of
    ``twist`` where the top row wraps back to the bottom."""
    if rows < 2 or cols < 3:
        raise SurfaceError("grid too small for a loopless simple drawing")
    east = {}
    north = {}
    counter = 0
    for i in range(rows):
        for j in range(cols):
            east[(i, j)] = counter
            counter += 2
            north[(i, j)] = counter
            counter += 2
    pairs = [(2 * k, 2 * k + 1) for k in range(counter // 2)]

    def north_target(i, j):
        if i + 1 == rows:
            return (0, (j + twist) % cols)
        return (i + 1, j)

    incident: dict[tuple[int, int], dict[str, int]] = {
        (i, j): {} for i in range(rows) for j in range(cols)
    }
    for i in range(rows):
        for j in range(cols):
            e = east[(i, j)]
            incident[(i, j)]["E"] = e
            incident[(i, (j + 1) % cols)]["W"] = e + 1
            nn = north[(i, j)]
            incident[(i, j)]["N"] = nn
            incident[north_target(i, j)]["S"] = nn + 1
    rotations = []
    for i in range(rows):
        for j in range(cols):
            slot = incident[(i, j)]
            rotations.append([slot["E"], slot["N"], slot["W"], slot["S"]])
    return build_graph(rotations, pairs)


# ----------------------------------------------------------------------
# serialization


def format_graph(g: EmbeddedGraph) -> str:
    lines = ["nv %d" % g.nverts]
    for v, cyc in enumerate(g.vertices):
        lines.append("rot %d: %s" % (v, " ".join(str(d) for d in cyc)))
    lines.append("inv: " + " ".join("(%d %d)" % (2 * k, 2 * k + 1) for k in range(g.nedges)))
    return "\n".join(lines) + "\n"


def strip_comments(text: str) -> list[str]:
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def parse_graph(text: str) -> EmbeddedGraph:
    return parse_graph_lines(strip_comments(text))


def parse_graph_lines(lines: Sequence[str]) -> EmbeddedGraph:
    if not lines or not lines[0].startswith("nv"):
        raise SurfaceError("graph record must start with 'nv <n>'")
    try:
        nv = int(lines[0].split()[1])
    except (IndexError, ValueError) as exc:
        raise SurfaceError("malformed nv line") from exc
    rotations: list[list[int]] = []
    pairs: list[tuple[int, int]] = []
    for line in lines[1:]:
        if line.startswith("rot"):
            head, _, rest = line.partition(":")
            try:
                v = int(head.split()[1])
            except (IndexError, ValueError) as exc:
                raise SurfaceError("malformed rot line: %r" % line) from exc
            if v != len(rotations):
                raise SurfaceError("rot lines out of order at vertex %d" % v)
            rotations.append([int(t) for t in rest.split()])
        elif line.startswith("inv"):
            _, _, rest = line.partition(":")
            toks = rest.replace("(", " ").replace(")", " ").split()
            if len(toks) % 2 != 0:
                raise SurfaceError("malformed inv line")
            pairs = [(int(toks[i]), int(toks[i + 1])) for i in range(0, len(toks), 2)]
        else:
            raise SurfaceError("unrecognized graph line: %r" % line)
    if len(rotations) != nv:
        raise SurfaceError("expected %d rot lines, found %d" % (nv, len(rotations)))
    return build_graph(rotations, pairs if pairs else None)


# ----------------------------------------------------------------------
# surgeries
#
# Every surgery returns (new_graph, dart_map, ...) where dart_map[d] is the
# new name of old dart d, or -1 when it was deleted.  Additional returns
# name the darts created by the operation (in new numbering).


def _predecessors(g: EmbeddedGraph) -> list[int]:
    pred = [0] * g.ndarts
    for d, e in enumerate(g.sigma):
        pred[e] = d
    return pred


def _compact(sig: list[int], killed_edges: set[int]) -> tuple[EmbeddedGraph, list[int]]:
    """Drop the killed edges' darts and renumber the rest densely."""
    n = len(sig)
    dmap = [-1] * n
    new_id = 0
    for k in range(0, n, 2):
        if k // 2 not in killed_edges:
            dmap[k] = new_id
            dmap[k + 1] = new_id + 1
            new_id += 2
    out = [0] * new_id
    for d in range(n):
        if dmap[d] >= 0:
            out[dmap[d]] = dmap[sig[d]]
    return EmbeddedGraph(out), dmap


def _unlink(sig: list[int], darts: Iterable[int]) -> None:
    """Remove darts from their rotation cycles in place."""
    n = len(sig)
    pred = [0] * n
    for d in range(n):
        pred[sig[d]] = d
    for d in darts:
        p, s = pred[d], sig[d]
        sig[p] = s
        pred[s] = p
        sig[d] = d
        pred[d] = d


def delete_edge(g: EmbeddedGraph, dart: int) -> tuple[EmbeddedGraph, list[int]]:
    """Remove the edge of ``dart``; endpoints left with no darts disappear."""
    k = dart & ~1
    sig = list(g.sigma)
    _unlink(sig, (k, k + 1))
    return _compact(sig, {k // 2})


def delete_edges(g: EmbeddedGraph, darts: Iterable[int]) -> tuple[EmbeddedGraph, list[int]]:
    kill = {d & ~1 for d in darts}
    sig = list(g.sigma)
    _unlink(sig, [d for k in kill for d in (k, k + 1)])
    return _compact(sig, {k // 2 for k in kill})


def add_path_in_face(g: EmbeddedGraph, corner_a: int, corner_b: int, interior: int = 0
                     ) -> tuple[EmbeddedGraph, list[int], int]:
    """Draw a path with ``interior`` new vertices between two corners of a face.

    Returns the new dart at corner_a (its edge partner sits at the first new
    vertex, or at corner_b's vertex when interior == 0).
    """
    if g.face_of[corner_a] != g.face_of[corner_b]:
        raise SurfaceError("corners lie in different faces")
    if corner_a == corner_b:
        raise SurfaceError("path endpoints on the same corner")
    if interior == 0 and g.vertex_of[corner_a] == g.vertex_of[corner_b]:
        raise LoopEdgeError("edge between two corners of one vertex")
    n = g.ndarts
    pred = _predecessors(g)
    sig = list(g.sigma) + [0] * (2 * (interior + 1))
    first = n
    last_back = n + 2 * interior + 1
    sig[pred[corner_a]] = first
    sig[first] = corner_a
    sig[pred[corner_b]] = last_back
    sig[last_back] = corner_b
    for i in range(interior):
        arrive = n + 2 * i + 1
        leave = n + 2 * (i + 1)
        sig[arrive] = leave
        sig[leave] = arrive
    return EmbeddedGraph(sig), list(range(n)), first


def add_edge_in_face(g: EmbeddedGraph, corner_a: int, corner_b: int
                     ) -> tuple[EmbeddedGraph, list[int], int]:
    return add_path_in_face(g, corner_a, corner_b, 0)


def add_pendant_edge(g: EmbeddedGraph, corner: int) -> tuple[EmbeddedGraph, list[int], int]:
    """Attach a new degree-1 vertex inside the corner's face."""
    n = g.ndarts
    pred = _predecessors(g)
    sig = list(g.sigma) + [0, 0]
    sig[pred[corner]] = n
    sig[n] = corner
    sig[n + 1] = n + 1
    return EmbeddedGraph(sig), list(range(n)), n


def add_parallel_edge(g: EmbeddedGraph, dart: int, carve_side: int
                      ) -> tuple[EmbeddedGraph, list[int], int]:
    """Add an edge parallel to ``dart`` bounding a 2-face with it.

    The 2-face is carved out of ``face_of(dart)`` when carve_side == 0 and
    out of ``face_of(dart ^ 1)`` when carve_side == 1.  Returns the new
    dart at tail(dart).
    """
    n = g.ndarts
    pred = _predecessors(g)
    sig = list(g.sigma) + [0, 0]
    a = dart
    n1, n2 = n, n + 1
    if carve_side == 1:
        # 2-face (n1, a^1): n1 after a at the tail, n2 before a^1 at the head
        sig[n1] = sig[a]
        sig[a] = n1
        sig[pred[a ^ 1]] = n2
        sig[n2] = a ^ 1
    else:
        # 2-face (n2, a): n1 before a at the tail, n2 after a^1 at the head
        sig[pred[a]] = n1
        sig[n1] = a
        sig[n2] = sig[a ^ 1]
        sig[a ^ 1] = n2
    return EmbeddedGraph(sig), list(range(n)), n1


def split_vertex(g: EmbeddedGraph, corner_a: int, corner_b: int,
                 path_interior: int | None = None
                 ) -> tuple[EmbeddedGraph, list[int], int | None]:
    """Split a vertex at two of its corners.

    The rotation cycle is cut into the arcs [corner_a .. pred(corner_b)]
    and [corner_b .. pred(corner_a)].  Without a path the two corners must
    lie in distinct faces, which merge; with ``path_interior >= 1`` new
    vertices, a path joining the two halves is drawn through the opened
    gap.  Returns the first path dart (at the corner_a half) or None.
    """
    v = g.vertex_of[corner_a]
    if g.vertex_of[corner_b] != v:
        raise SurfaceError("split corners on different vertices")
    if corner_a == corner_b:
        raise SurfaceError("split corners must differ")
    if path_interior is None and g.face_of[corner_a] == g.face_of[corner_b]:
        raise SurfaceError("bare split needs corners in distinct faces")
    n = g.ndarts
    pred = _predecessors(g)
    sig = list(g.sigma)
    sig[pred[corner_a]] = corner_b
    sig[pred[corner_b]] = corner_a
    first = None
    if path_interior is not None:
        k = path_interior
        if k < 1:
            raise SurfaceError("path needs at least one interior vertex")
        sig += [0] * (2 * (k + 1))
        first = n
        last_back = n + 2 * k + 1
        # the half [corner_a .. old pred(corner_b)] gets the path start
        sig[pred[corner_b]] = first
        sig[first] = corner_a
        # the half [corner_b .. old pred(corner_a)] gets the path end
        sig[pred[corner_a]] = last_back
        sig[last_back] = corner_b
        for i in range(k):
            arrive = n + 2 * i + 1
            leave = n + 2 * (i + 1)
            sig[arrive] = leave
            sig[leave] = arrive
    return EmbeddedGraph(sig), list(range(n)), first


def contract_edge(g: EmbeddedGraph, dart: int) -> tuple[EmbeddedGraph, list[int]]:
    """Contract a non-loop edge, merging its endpoints."""
    u, w = g.vertex_of[dart], g.vertex_of[dart ^ 1]
    if u == w:
        raise LoopEdgeError("cannot contract a loop")
    if sum(1 for d in g.vertices[u] if g.vertex_of[d ^ 1] == w) > 1:
        raise LoopEdgeError("contraction would turn a parallel edge into a loop")
    a, b = dart, dart ^ 1
    deg_u, deg_w = g.degree(u), g.degree(w)
    if deg_u == 1 and deg_w == 1:
        raise SurfaceError("cannot contract an isolated edge")
    pred = _predecessors(g)
    sig = list(g.sigma)
    if deg_w == 1:
        sig[pred[a]] = sig[a]
    elif deg_u == 1:
        sig[pred[b]] = sig[b]
    else:
        sa, sb = sig[a], sig[b]
        sig[pred[a]] = sb
        sig[pred[b]] = sa
    sig[a] = a
    sig[b] = b
    return _compact(sig, {a // 2})


def contract_degree2_path(g: EmbeddedGraph, z: int) -> tuple[EmbeddedGraph, list[int]]:
    """Contract both edges at a degree-2 vertex with distinct neighbors."""
    if g.degree(z) != 2:
        raise SurfaceError("vertex is not of degree 2")
    d1, d2 = g.vertices[z]
    u, w = g.vertex_of[d1 ^ 1], g.vertex_of[d2 ^ 1]
    if u == w:
        raise SurfaceError("contraction target has equal neighbors")
    g1, m1 = contract_edge(g, d1)
    g2, m2 = contract_edge(g1, m1[d2])
    return g2, [(-1 if m1[d] < 0 else m2[m1[d]]) for d in range(g.ndarts)]


# ----------------------------------------------------------------------
# embedded subgraph matching


def embedded_subgraph_matches(pattern: EmbeddedGraph, host: EmbeddedGraph,
                              limit: int | None = None
                              ) -> list[tuple[tuple[int, ...], bool]]:
    """All embeddings of ``pattern`` into ``host`` as a drawn subgraph.

    A match maps pattern darts to host darts respecting the edge pairing
    and the cyclic order around every vertex up to insertion of host darts,
    in either orientation.  Returns (dart_map, mirrored) pairs.
    """
    out: list[tuple[tuple[int, ...], bool]] = []
    for mirrored, pat in ((False, pattern), (True, pattern.mirrored())):
        _oriented_matches(pat, host, mirrored, out, limit)
        if limit is not None and len(out) >= limit:
            break
    return out


def _cyclic_subsequence_ok(positions: list[int]) -> bool:
    """At most one cyclic descent, and no repeats."""
    k = len(positions)
    if k <= 1:
        return True
    if len(set(positions)) != k:
        return False
    descents = sum(1 for i in range(k) if positions[i] > positions[(i + 1) % k])
    return descents <= 1


def _oriented_matches(pat: EmbeddedGraph, host: EmbeddedGraph, mirrored: bool,
                      out: list, limit: int | None) -> None:
    np_, nh = pat.ndarts, host.ndarts
    if np_ == 0 or np_ > nh or pat.nverts > host.nverts:
        return
    if not pat.is_connected():
        raise SurfaceError("pattern must be connected")
    # BFS order over pattern darts; each step is forced to a known vertex
    order = [0]
    seend = {0}
    qi = 0
    while qi < len(order):
        d = order[qi]
        qi += 1
        for e in (pat.sigma[d], d ^ 1):
            if e not in seend:
                seend.add(e)
                order.append(e)

    host_pos = [0] * nh  # position of a dart inside its vertex rotation
    for cyc in host.vertices:
        for i, d in enumerate(cyc):
            host_pos[d] = i

    pdeg = [pat.degree(pat.vertex_of[d]) for d in range(np_)]
    hdeg = [host.degree(host.vertex_of[d]) for d in range(nh)]

    dmap = [-1] * np_
    vmap = [-1] * pat.nverts
    vused = [False] * host.nverts
    dused = [False] * nh

    def vertex_ok(pv: int) -> bool:
        cyc = pat.vertices[pv]
        pos = [host_pos[dmap[d]] for d in cyc if dmap[d] >= 0]
        return _cyclic_subsequence_ok(pos)

    def assign(d: int, h: int) -> list | None:
        """Try dmap[d]=h, dmap[d^1]=h^1; return undo list or None."""
        undo = []
        for pd, hd in ((d, h), (d ^ 1, h ^ 1)):
            if dmap[pd] >= 0:
                if dmap[pd] != hd:
                    for x in undo:
                        _undo_one(x)
                    return None
                continue
            if dused[hd]:
                for x in undo:
                    _undo_one(x)
                return None
            pv, hv = pat.vertex_of[pd], host.vertex_of[hd]
            if pdeg[pd] > hdeg[hd]:
                for x in undo:
                    _undo_one(x)
                return None
            if vmap[pv] == -1:
                if vused[hv]:
                    for x in undo:
                        _undo_one(x)
                    return None
                vmap[pv] = hv
                vused[hv] = True
                undo.append(("v", pv, hv))
            elif vmap[pv] != hv:
                for x in undo:
                    _undo_one(x)
                return None
            dmap[pd] = hd
            dused[hd] = True
            undo.append(("d", pd, hd))
            if not vertex_ok(pv):
                for x in undo:
                    _undo_one(x)
                return None
        return undo

    def _undo_one(x) -> None:
        kind, a, b = x
        if kind == "d":
            dmap[a] = -1
            dused[b] = False
        else:
            vmap[a] = -1
            vused[b] = False

    def rec(idx: int) -> bool:
        if limit is not None and len(out) >= limit:
            return True
        if idx == len(order):
            out.append((tuple(dmap), mirrored))
            return limit is not None and len(out) >= limit
        d = order[idx]
        if dmap[d] >= 0:
            return rec(idx + 1)
        pv = pat.vertex_of[d]
        hv = vmap[pv]
        candidates = host.vertices[hv] if hv >= 0 else range(nh)
        for h in candidates:
            undo = assign(d, h)
            if undo is None:
                continue
            if rec(idx + 1):
                return True
            for x in reversed(undo):
                _undo_one(x)
        return False

    rec(0)


def match_face_regions(pattern: EmbeddedGraph, host: EmbeddedGraph,
                       dart_map: Sequence[int], mirrored: bool
                       ) -> dict[int, set[int]]:
    """Host faces inside each pattern face's region under a match.

    The regions partition the host faces when the pattern is 2-cell.
    """
    image = set(dart_map)
    seeds: dict[int, set[int]] = {}
    owner: dict[int, int] = {}
    for fi, walk in enumerate(pattern.faces):
        s = set()
        for d in walk:
            hd = dart_map[d ^ 1] if mirrored else dart_map[d]
            s.add(host.face_of[hd])
        seeds[fi] = s
        for hf in s:
            if hf in owner and owner[hf] != fi:
                raise SurfaceError("inconsistent face regions in match")
            owner[hf] = fi
    # flood across host edges not used by the image
    changed = True
    while changed:
        changed = False
        for hf in range(host.nfaces):
            if hf not in owner:
                continue
            for d in host.faces[hf]:
                if d in image or (d ^ 1) in image:
                    continue
                g = host.face_of[d ^ 1]
                if g not in owner:
                    owner[g] = owner[hf]
                    changed = True
    if len(owner) != host.nfaces:
        raise SurfaceError("match regions do not cover the host")
    regions: dict[int, set[int]] = {fi: set() for fi in range(pattern.nfaces)}
    for hf, fi in owner.items():
        regions[fi].add(hf)
    return regions


def face_key_map(g: EmbeddedGraph, h: EmbeddedGraph, dmap: Sequence[int]) -> dict[int, int]:
    """Map face indices of ``g`` to face indices of ``h`` through a dart map.

    Faces whose darts were all deleted are dropped; merged faces map to the
    same target.
    """
    out = {}
    for fi, walk in enumerate(g.faces):
        for d in walk:
            nd = dmap[d]
            if nd >= 0:
                out[fi] = h.face_of[nd]
                break
    return out
