"""Struts, barriers, the realization search, and criticalization.

Starting from an amplification, the search repeatedly picks a surviving
coloring and a face, and blocks the coloring on that face by drawing
struts: paths across the face whose region splits the face's census so
that the winding balance fails the extension inequality for every winding
assignment.  States with no surviving colorings are realizations; their
critical subtemplates feed the catalog.

Only path obstructions are drawn.  A closed curve meeting the boundary in
at most one point cannot obstruct a relevant template (its census subset
would need an assignment sum larger than every admissible value), so
cycle obstructions are never enumerated; a branch whose colorings cannot
all be blocked by struts simply yields nothing.

Census elements are tracked as individual tokens so that equal values
with different winding assignments stay distinguishable; a realization's
census map reads the token placement off the final arrangement.  Tokens
and sub-faces are identified by darts, which appending surgeries never
rename.
"""

from __future__ import annotations

from typing import Iterator, Sequence

from .templates import Census, Template, TemplateError, hide_edge, hideable_edges
from .winding import assignments_for, extends_to, is_template_3colorable, omega_walk, proper_colorings

MIN_FACE_LEN = 4


class BarrierEngineError(Exception):
    pass


# ----------------------------------------------------------------------
# spec-level barrier predicates (used by tests and for re-verification)


def region_walk(tprime: Template, face: int, start_pos: int, end_pos: int) -> list[int]:
    """Boundary darts from the strut's head back to its tail.

    Positions name boundary darts: a strut leaving the corner before dart
    ``start_pos`` and arriving at the corner before ``end_pos`` closes up
    with the boundary walk from ``end_pos`` around to ``start_pos``.  For
    equal positions the walk is empty or the full boundary; callers pick.
    """
    walk = tprime.graph.faces[face]
    i = walk.index(start_pos)
    j = walk.index(end_pos)
    out = []
    k = j
    while k != i:
        out.append(walk[k])
        k = (k + 1) % len(walk)
    return out


def barrier_holds(omega_region: int, assignment_sum: int, path_edges: int) -> bool:
    return abs(omega_region - assignment_sum) > path_edges


def is_barrier(tprime: Template, face: int, coloring: Sequence[int],
               assignment: Sequence[int], region_darts: Sequence[int],
               path_edges: int, token_positions: Sequence[int]) -> bool:
    """The strut inequality for one recorded barrier.

    ``assignment`` is aligned with the face's sorted census and
    ``token_positions`` selects the census elements inside the region.
    """
    om = omega_walk(tprime.graph, coloring, region_darts)
    return barrier_holds(om, sum(assignment[p] for p in token_positions), path_edges)


def blocks(barriers: Sequence[tuple], tprime: Template, face: int,
           coloring: Sequence[int]) -> bool:
    """Every winding assignment of the face is contradicted by some barrier.

    Barriers are (region_darts, path_edges, token_positions) triples.
    """
    cen = tprime.theta_of(face)
    target = omega_walk(tprime.graph, coloring, tprime.graph.faces[face])
    for n in assignments_for(cen, target):
        if not any(
            is_barrier(tprime, face, coloring, n, reg, plen, toks)
            for (reg, plen, toks) in barriers
        ):
            return False
    return True


def system_blocks(system: dict[int, list[tuple]], tprime: Template,
                  coloring: Sequence[int]) -> bool:
    return any(blocks(bs, tprime, f, coloring) for f, bs in system.items())


# ----------------------------------------------------------------------
# realization search



def _piece_ok(L: int, cen: tuple[int, ...]) -> bool:
    """Parity plus the relevance bullet for one arrangement face."""
    if (sum(cen) - L) % 2:
        return False
    if L == 4:
        return not cen
    if cen == (L,):
        return True
    from .growth import census_feasible
    return census_feasible(L, cen)


class _Arrangement:
    """Mutable overlay over a state's drawing for the strut search.

    Tracks the rotation, per-dart vertex/face/container tables, face walks,
    face owners (the pre-strut face each piece came from) and an adjacency
    multiset, with a journal for backtracking.  Real graphs are built only
    for candidates that survive every check.
    """

    __slots__ = ("sig", "vertex_of", "container", "face_id", "walks", "owner",
                 "adj", "next_fid", "next_vid", "base_ndarts", "journal")

    def __init__(self, state: "_State"):
        g = state.g
        self.sig = list(g.sigma)
        self.vertex_of = list(g.vertex_of)
        self.container = list(state.container)
        self.face_id = list(g.face_of)
        self.walks: dict[int, list[int]] = {i: list(w) for i, w in enumerate(g.faces)}
        self.owner: dict[int, int] = {i: i for i in range(g.nfaces)}
        self.adj: list[dict[int, int]] = [{} for _ in range(g.nverts)]
        for d in range(0, g.ndarts, 2):
            u, w = g.vertex_of[d], g.vertex_of[d ^ 1]
            self.adj[u][w] = self.adj[u].get(w, 0) + 1
            self.adj[w][u] = self.adj[w].get(u, 0) + 1
        self.next_fid = g.nfaces
        self.next_vid = g.nverts
        self.base_ndarts = g.ndarts
        self.journal: list[tuple] = []

    # -- queries -------------------------------------------------------

    def darts_at(self, seed: int):
        d = seed
        while True:
            yield d
            d = self.sig[d]
            if d == seed:
                return

    def pred(self, d: int) -> int:
        p = d
        while self.sig[p] != d:
            p = self.sig[p]
        return p

    def position(self, dart: int, orig_ndarts: int, orig_sigma) -> int:
        d = dart
        while d >= orig_ndarts:
            d = self.pred(d)
        return d if d == dart else orig_sigma[d]

    def common_neighbor(self, u: int, w: int) -> bool:
        au = self.adj[u]
        aw = self.adj[w]
        if len(aw) < len(au):
            au, aw = aw, au
        return any(x in aw for x in au)

    def inside_fids(self, face: int, state: "_State") -> list[int]:
        out = []
        for fid, own in self.owner.items():
            if fid in self.walks and \
                    state.container[state.g.faces[own][0]] == face:
                out.append(fid)
        return out

    def region_fids(self, region, blocked, face) -> set[int]:
        seeds = {self.face_id[d] for d in region}
        out: set[int] = set()
        stack = list(seeds)
        while stack:
            fid = stack.pop()
            if fid in out:
                continue
            out.add(fid)
            for d in self.walks[fid]:
                if d in blocked or (d ^ 1) in blocked:
                    continue
                if self.container[d ^ 1] != face:
                    continue
                nb = self.face_id[d ^ 1]
                if nb not in out:
                    stack.append(nb)
        return out

    # -- mutation ------------------------------------------------------

    def checkpoint(self) -> tuple[int, int, int, int]:
        return (len(self.journal), len(self.sig), self.next_fid, self.next_vid)

    def fresh_of(self, mark) -> set[int]:
        return set(range(mark[3], self.next_vid))

    def cut(self, c: int, x: int, m: int, face: int) -> None:
        """Draw a path with m interior vertices between corners c and x."""
        sig = self.sig
        jr = self.journal
        n0 = len(sig)
        pc, px = self.pred(c), self.pred(x)
        fid = self.face_id[c]
        old_walk = self.walks[fid]

        first = n0
        last_back = n0 + 2 * m + 1
        sig.extend([0] * (2 * (m + 1)))
        jr.append(("sig", pc, sig[pc]))
        jr.append(("sig", px, sig[px]))
        sig[pc] = first
        sig[first] = c
        sig[px] = last_back
        sig[last_back] = x
        for i in range(m):
            arrive = n0 + 2 * i + 1
            leave = n0 + 2 * (i + 1)
            sig[arrive] = leave
            sig[leave] = arrive

        u, w = self.vertex_of[c], self.vertex_of[x]
        for i in range(m + 1):
            self.vertex_of.append(u if i == 0 else self.next_vid + i - 1)
            self.vertex_of.append(w if i == m else self.next_vid + i)
        self.container.extend([face] * (2 * (m + 1)))
        self.face_id.extend([0] * (2 * (m + 1)))
        for i in range(m):
            self.adj.append({})

        chain = [u] + [self.next_vid + i for i in range(m)] + [w]
        for a, b in zip(chain, chain[1:]):
            self.adj[a][b] = self.adj[a].get(b, 0) + 1
            self.adj[b][a] = self.adj[b].get(a, 0) + 1
            jr.append(("adj", a, b))
        self.next_vid += m

        # retrace the two pieces
        fa, fb = self.next_fid, self.next_fid + 1
        self.next_fid += 2
        for fnew, start in ((fa, first), (fb, first ^ 1)):
            walk = []
            d = start
            while True:
                walk.append(d)
                jr.append(("fid", d, self.face_id[d]))
                self.face_id[d] = fnew
                d = sig[d ^ 1]
                if d == start:
                    break
            self.walks[fnew] = walk
            jr.append(("walk_del", fnew))
            self.owner[fnew] = self.owner[fid]
            jr.append(("owner_del", fnew))
        del self.walks[fid]
        jr.append(("walk_add", fid, old_walk))

    def undo(self, mark) -> None:
        jlen, ndarts, fid0, vid0 = mark
        while len(self.journal) > jlen:
            entry = self.journal.pop()
            kind = entry[0]
            if kind == "sig":
                _, i, old = entry
                if i < ndarts:
                    self.sig[i] = old
            elif kind == "fid":
                _, d, old = entry
                if d < ndarts:
                    self.face_id[d] = old
            elif kind == "adj":
                _, a, b = entry
                self.adj[a][b] -= 1
                if not self.adj[a][b]:
                    del self.adj[a][b]
                self.adj[b][a] -= 1
                if not self.adj[b][a]:
                    del self.adj[b][a]
            elif kind == "walk_del":
                self.walks.pop(entry[1], None)
            elif kind == "owner_del":
                self.owner.pop(entry[1], None)
            elif kind == "walk_add":
                self.walks[entry[1]] = entry[2]
        del self.sig[ndarts:]
        del self.vertex_of[ndarts:]
        del self.container[ndarts:]
        del self.face_id[ndarts:]
        del self.adj[vid0:]
        self.next_fid = fid0
        self.next_vid = vid0

    def freeze(self, state: "_State", placement: dict[int, int],
               search: "RealizationSearch", rec) -> "_State":
        from .surface import EmbeddedGraph
        g2 = EmbeddedGraph(tuple(self.sig), check=False)
        reps = list(state.token_rep)
        for t, fid in placement.items():
            reps[t] = self.walks[fid][0]
        return _State(g2, list(self.container), reps, state.colorings,
                      state.records + [rec])


class _State:
    __slots__ = ("g", "container", "token_rep", "colorings", "records")

    def __init__(self, g: Template | None, container, token_rep, colorings, records):
        self.g = g                     # current arrangement (EmbeddedGraph)
        self.container = container     # per dart: owning amplification face
        self.token_rep = token_rep     # per token: a dart inside its face
        self.colorings = colorings     # surviving colorings, sorted tuple
        self.records = records         # barrier records for re-verification

    def key(self, token_val: list[int]):
        # equal-valued census tokens are interchangeable: assignments range
        # over all their permutations, so placement by value suffices
        per_face: dict[int, list[int]] = {}
        for t, rep in enumerate(self.token_rep):
            per_face.setdefault(self.g.face_of[rep], []).append(token_val[t])
        placement = tuple(sorted((f, tuple(sorted(vs)))
                                 for f, vs in per_face.items()))
        return (self.g.sigma, placement, self.colorings)

    def canonical_key(self, search: "RealizationSearch") -> bytes:
        g = self.g
        theta_deco = {}
        for fidx in range(g.nfaces):
            toks = sorted(search.token_val[t]
                          for t, rep in enumerate(self.token_rep)
                          if g.face_of[rep] == fidx)
            cont = self.container[g.faces[fidx][0]]
            theta_deco[fidx] = (cont,) + tuple(toks)
        vdeco = {v: (v,) + tuple(psi[v] for psi in self.colorings)
                 for v in range(search.orig_nverts)}
        edeco = {k: 1 for k in range(search.orig_ndarts // 2)}
        return g.canonical_code(theta=theta_deco, vertex_colors=vdeco,
                                edge_colors=edeco)


class RealizationSearch:
    """Recursive blocking search over one amplification."""

    def __init__(self, tprime: Template, trace: bool = False,
                 node_budget: int | None = None):
        self.tp = tprime
        g = tprime.graph
        self.orig_ndarts = g.ndarts
        self.orig_nverts = g.nverts
        self.boundary_vertices = [
            frozenset(g.vertex_of[d] for d in walk) for walk in g.faces
        ]
        # census tokens, listed per face in sorted-census order
        self.token_face: list[int] = []
        self.token_val: list[int] = []
        self.face_tokens: list[list[int]] = [[] for _ in range(g.nfaces)]
        for fi in range(g.nfaces):
            for v in tprime.theta_of(fi):
                self.face_tokens[fi].append(len(self.token_val))
                self.token_face.append(fi)
                self.token_val.append(v)
        self.trace = trace
        self.node_budget = node_budget
        self.nodes = 0
        self.outputs: dict[bytes, Template] = {}
        self.memo: set = set()
        self._phi_cost: dict[tuple, int] = {}

    # -- bookkeeping helpers -------------------------------------------

    def _position(self, g, dart: int) -> int:
        """Boundary dart naming the original corner this corner sits in."""
        if dart < self.orig_ndarts:
            return dart
        d = dart
        while True:
            p = d
            while g.sigma[p] != d:
                p = g.sigma[p]
            d = p
            if d < self.orig_ndarts:
                return self.tp.graph.sigma[d]

    def _theta_map(self, g, token_rep) -> dict[int, list[int]]:
        theta: dict[int, list[int]] = {}
        for tok, rep in enumerate(token_rep):
            theta.setdefault(g.face_of[rep], []).append(self.token_val[tok])
        return theta

    def template_of(self, state: _State) -> Template:
        return Template(state.g, self._theta_map(state.g, state.token_rep))

    def _face_ok(self, g, token_rep, face_index: int) -> bool:
        """Parity plus the relevance bullet for one face of the arrangement."""
        L = len(g.faces[face_index])
        vals = sorted(self.token_val[t] for t, rep in enumerate(token_rep)
                      if g.face_of[rep] == face_index)
        cen = tuple(vals)
        if L == 4:
            return not cen
        if cen == (L,):
            return True
        from .growth import census_feasible
        return census_feasible(L, cen)

    # -- main recursion --------------------------------------------------

    def run(self, colorings: Sequence[tuple] | None = None) -> list[Template]:
        if colorings is None:
            colorings = proper_colorings(self.tp)
        g = self.tp.graph
        container = list(g.face_of)
        token_rep = [g.faces[f][0] for f in self.token_face]
        state = _State(g, container, token_rep, tuple(sorted(colorings)), [])
        self._expand(state, 0)
        return list(self.outputs.values())

    def _expand(self, state: _State, depth: int) -> None:
        if self.node_budget is not None and self.nodes >= self.node_budget:
            raise BarrierEngineError("node budget exhausted")
        self.nodes += 1
        if not state.colorings:
            self._verify_records(state)
            t = self.template_of(state)
            self.outputs[t.canonical_code()] = t
            return
        key = state.key(self.token_val)
        if key in self.memo:
            return
        self.memo.add(key)

        phi = self._pick_coloring(state)
        if self.trace:
            print("  " * min(depth, 8) +
                  "depth=%d |K|=%d V=%d" % (depth, len(state.colorings),
                                            state.g.nverts), flush=True)
        for face in range(self.tp.graph.nfaces):
            cen = self.tp.theta_of(face)
            target = omega_walk(self.tp.graph, phi, self.tp.graph.faces[face])
            ns = assignments_for(cen, target)
            for final in self._sequences(state, face, phi, ns, 0):
                check = self._extension_checker(final)
                survivors = tuple(
                    psi for psi in state.colorings if check(psi)
                )
                if phi in survivors:
                    raise BarrierEngineError("blocked coloring survived")
                self._expand(
                    _State(final.g, final.container, final.token_rep,
                           survivors, final.records), depth + 1)

    def _pick_coloring(self, state: _State) -> tuple:
        best = None
        best_cost = None
        for phi in state.colorings:
            cost = self._phi_cost.get(phi)
            if cost is None:
                cost = 0
                for face in range(self.tp.graph.nfaces):
                    target = omega_walk(self.tp.graph, phi,
                                        self.tp.graph.faces[face])
                    cost += len(assignments_for(self.tp.theta_of(face), target))
                self._phi_cost[phi] = cost
            if best_cost is None or cost < best_cost:
                best, best_cost = phi, cost
        return best

    def _extension_checker(self, state: _State):
        """One engine per state; reruns the free-vertex search per coloring."""
        from .winding import _ColoringEngine
        t = Template(state.g, self._theta_map(state.g, state.token_rep),
                     check=False)
        keys = {v: 0 for v in range(self.orig_nverts)}
        engine = _ColoringEngine(t, fixed=keys)

        def check(psi: tuple) -> bool:
            vals = {v: psi[v] for v in range(self.orig_nverts)}
            return bool(engine.enumerate(limit=1, fixed_values=vals))
        return check

    def _sequences(self, state: _State, face: int, phi: tuple,
                   ns: list[tuple], i: int) -> Iterator[_State]:
        if i == len(ns):
            yield state
            return
        for nxt in self._barrier_steps(state, face, phi, ns[i]):
            yield from self._sequences(nxt, face, phi, ns, i + 1)

    # -- strut drawing -----------------------------------------------------

    def _barrier_steps(self, state: _State, face: int, phi: tuple,
                       n: tuple) -> list[_State]:
        self._owner_tokens_cache = {
            fid: any(state.g.face_of[r] == fid for r in state.token_rep)
            for fid in range(state.g.nfaces)
        }
        return self._barrier_candidates(state, face, phi, n)

    def _discrepancy_caps(self, face: int, phi: tuple, n: tuple):
        """Per-endpoint-pair length caps from the barrier inequality.

        A strut from position i to position j can only be a barrier when
        its length is below max_I |omega(R) - sum_I n|, and the maximum
        over census subsets bounds the search.
        """
        walk = self.tp.graph.faces[face]
        L = len(walk)
        g = self.tp.graph
        pref = [0] * (L + 1)
        for k, d in enumerate(walk):
            du = phi[g.vertex_of[d]]
            dv = phi[g.vertex_of[d ^ 1]]
            pref[k + 1] = pref[k] + (1 if (dv - du) % 3 == 1 else -1)
        total = pref[L]
        sums = {0}
        for nv in n:
            sums |= {s + nv for s in sums}
        index = {d: k for k, d in enumerate(walk)}

        def maxdisc(i: int, j: int) -> int:
            # region runs from position j around to position i
            if j <= i:
                om = pref[i] - pref[j]
            else:
                om = total - (pref[j] - pref[i])
            return max(abs(om - s) for s in sums)

        caps = {}
        for i in range(L):
            best = 0
            for j in range(L):
                if i != j:
                    md = maxdisc(i, j)
                    caps[(walk[i], walk[j])] = md - 1
                    best = max(best, md - 1)
            caps[walk[i]] = best
        return caps

    def _barrier_candidates(self, state: _State, face: int, phi: tuple,
                            n: tuple) -> list[_State]:
        """All states obtained by adding one barrier for (phi, n) on the face.

        Runs a depth-first strut search over a mutable arrangement overlay,
        testing the inequality and the census redistribution in place, and
        materializes a real graph only for the successes.
        """
        arr = _Arrangement(state)
        caps = self._discrepancy_caps(face, phi, n)
        out: list[_State] = []
        seen: set = set()
        bverts = self.boundary_vertices[face]
        for s in sorted(bverts):
            for e in list(arr.darts_at(state.g.vertices[s][0])):
                if e >= self.orig_ndarts and arr.container[e] == face:
                    pos = arr.position(e, self.orig_ndarts, self.tp.graph.sigma)
                    self._dfs_move(arr, state, face, phi, n, caps, s, pos,
                                   frozenset({s}), frozenset(), 0, caps[pos],
                                   ("edge", e), out, seen)
                if arr.container[e] == face:
                    pos = arr.position(e, self.orig_ndarts, self.tp.graph.sigma)
                    self._dfs_move(arr, state, face, phi, n, caps, s, pos,
                                   frozenset({s}), frozenset(), 0, caps[pos],
                                   ("cut", e), out, seen)
        return out

    def _dfs_move(self, arr, state, face, phi, n, caps, s, start_pos, visited,
                  reused, plen, cap, move, out, seen) -> None:
        kind, e = move
        if kind == "edge":
            if plen + 1 > cap or e in reused or (e ^ 1) in reused:
                pass
            else:
                w = arr.vertex_of[e ^ 1]
                if w in self.boundary_vertices[face]:
                    if w != s:
                        end_pos = arr.position(e ^ 1, self.orig_ndarts,
                                               self.tp.graph.sigma)
                        if plen + 1 <= caps.get((start_pos, end_pos), -1):
                            self._try_placements(arr, state, face, phi, n,
                                                 start_pos, end_pos,
                                                 reused | {e, e ^ 1}, plen + 1,
                                                 out, seen)
                elif w not in visited:
                    self._dfs_continue(arr, state, face, phi, n, caps, s,
                                       start_pos, visited | {w},
                                       reused | {e, e ^ 1}, plen + 1, cap,
                                       e ^ 1, out, seen)
            return

        # cut across the sub-face at corner e
        c = e
        fid = arr.face_id[c]
        walk = arr.walks[fid]
        Lg = len(walk)
        pos_c = walk.index(c)
        owner_tokens = self._owner_tokens_cache.get(arr.owner[fid])
        u = arr.vertex_of[c]
        for off in range(1, Lg):
            x = walk[(pos_c + off) % Lg]
            w = arr.vertex_of[x]
            if w == u:
                continue
            terminal = w in self.boundary_vertices[face]
            if terminal and w == s:
                continue
            if not terminal and w in visited:
                continue
            max_m = cap - plen - 1
            for m in range(0, max_m + 1):
                p1 = off + m + 1
                p2 = Lg - off + m + 1
                if p1 < MIN_FACE_LEN or p2 < MIN_FACE_LEN:
                    continue
                if not owner_tokens and (p1 % 2 or p2 % 2):
                    continue
                if m == 0 and arr.common_neighbor(u, w):
                    continue
                mark = arr.checkpoint()
                arr.cut(c, x, m, face)
                if terminal:
                    end_pos = arr.position(x, self.orig_ndarts,
                                           self.tp.graph.sigma)
                    if plen + m + 1 <= caps.get((start_pos, end_pos), -1):
                        self._try_placements(arr, state, face, phi, n,
                                             start_pos, end_pos, reused,
                                             plen + m + 1, out, seen)
                else:
                    arrive = len(arr.sig) - 1
                    self._dfs_continue(arr, state, face, phi, n, caps, s,
                                       start_pos,
                                       visited | {w} | arr.fresh_of(mark),
                                       reused, plen + m + 1, cap, arrive,
                                       out, seen)
                arr.undo(mark)

    def _dfs_continue(self, arr, state, face, phi, n, caps, s, start_pos,
                      visited, reused, plen, cap, at_dart, out, seen) -> None:
        """Moves from the interior vertex carrying ``at_dart``."""
        if plen >= cap:
            return
        for e in list(arr.darts_at(at_dart)):
            if arr.container[e] != face:
                continue
            if self.orig_ndarts <= e < arr.base_ndarts \
                    and e not in reused and (e ^ 1) not in reused:
                self._dfs_move(arr, state, face, phi, n, caps, s, start_pos,
                               visited, reused, plen, cap, ("edge", e),
                               out, seen)
            self._dfs_move(arr, state, face, phi, n, caps, s, start_pos,
                           visited, reused, plen, cap, ("cut", e), out, seen)

    def _try_placements(self, arr, state, face, phi, n, start_pos, end_pos,
                        reused, plen, out, seen) -> None:
        region = region_walk(self.tp, face, start_pos, end_pos)
        if not region:
            return
        om = omega_walk(self.tp.graph, phi, region)

        blocked = set(reused)
        for d in range(arr.base_ndarts, len(arr.sig)):
            blocked.add(d)
        for d in region:
            blocked.add(d)
            blocked.add(d ^ 1)
        rfaces = arr.region_fids(region, blocked, face)

        face_tokens = self.face_tokens[face]
        token_pos = {t: p for p, t in enumerate(face_tokens)}
        # final faces grouped by their pre-strut owner
        leaves: dict[int, list[int]] = {}
        for fid in arr.inside_fids(face, state):
            leaves.setdefault(arr.owner[fid], []).append(fid)
        moved = [t for t in face_tokens
                 if len(leaves.get(state.g.face_of[state.token_rep[t]], [0])) > 1]
        token_fid = {}
        for t in face_tokens:
            if t not in moved:
                token_fid[t] = state.g.face_of[state.token_rep[t]]

        def finish(assign: dict[int, int]) -> None:
            placement = dict(token_fid)
            placement.update(assign)
            total = 0
            for t in face_tokens:
                if placement[t] in rfaces:
                    total += n[token_pos[t]]
            if not barrier_holds(om, total, plen):
                return
            census_at: dict[int, list[int]] = {}
            for t, fid in placement.items():
                census_at.setdefault(fid, []).append(self.token_val[t])
            for fid in leaves_flat:
                L = len(arr.walks[fid])
                cen = tuple(sorted(census_at.get(fid, ())))
                if not _piece_ok(L, cen):
                    return
            rec = (face, tuple(region), plen,
                   tuple(token_pos[t] for t in face_tokens
                         if placement[t] in rfaces),
                   phi, tuple(n))
            st = arr.freeze(state, placement, self, rec)
            k = st.key(self.token_val)
            if k not in seen:
                seen.add(k)
                out.append(st)

        leaves_flat = [fid for fids in leaves.values() for fid in fids]

        if not moved:
            finish({})
            return
        from itertools import combinations_with_replacement
        groups: dict[tuple[int, int], list[int]] = {}
        for t in moved:
            home = state.g.face_of[state.token_rep[t]]
            groups.setdefault((home, self.token_val[t]), []).append(t)
        group_list = list(groups.items())

        def rec_group(i: int, assign: dict[int, int]) -> None:
            if i == len(group_list):
                finish(assign)
                return
            (home, _val), toks = group_list[i]
            for combo in combinations_with_replacement(sorted(leaves[home]),
                                                       len(toks)):
                for t, leaf in zip(toks, combo):
                    assign[t] = leaf
                rec_group(i + 1, assign)
            for t in toks:
                assign.pop(t, None)

        rec_group(0, {})

    def _verify_records(self, state: _State) -> None:
        for (face, region, plen, tok_positions, phi, n) in state.records:
            if not is_barrier(self.tp, face, phi, n, region, plen, tok_positions):
                raise BarrierEngineError("recorded barrier fails re-verification")


def expand_to_noncolorable(tprime: Template, colorings=None, trace: bool = False,
                           node_budget: int | None = None) -> list[Template]:
    """All realizations blocking every proper coloring of the amplification."""
    return RealizationSearch(tprime, trace=trace, node_budget=node_budget).run(colorings)


# ----------------------------------------------------------------------
# criticalization


def criticalize(t: Template) -> Template:
    """A critical subtemplate, preferring one the census table certifies.

    Greedy hiding with backtracking: whenever several hidings keep the
    template non-3-colorable, those whose result stays within the
    table-checkable relevance class are tried first, and dead ends (only
    non-certifiable critical subtemplates below) are undone.  Any critical
    subtemplate may be selected, so steering the choice is sound; a
    non-certifiable critical subtemplate is returned only when nothing
    better exists.
    """
    if is_template_3colorable(t):
        raise BarrierEngineError("cannot criticalize a 3-colorable template")
    from .templates import is_relevant

    # pure greedy pass first: at each step hide the most conservative edge
    cur = t
    while True:
        nexts = []
        for d in hideable_edges(cur):
            try:
                sub = hide_edge(cur, d)
            except TemplateError:
                continue
            if not is_template_3colorable(sub):
                nexts.append(sub)
        if not nexts:
            break
        nexts.sort(key=lambda s: (not is_relevant(s),
                                  max(len(f) for f in s.graph.faces)))
        cur = nexts[0]
    if is_relevant(cur):
        return cur

    seen: set[bytes] = set()
    fallback: list[Template] = [cur]

    def dfs(cur: Template) -> Template | None:
        code = cur.canonical_code()
        if code in seen:
            return None
        seen.add(code)
        nexts = []
        for d in hideable_edges(cur):
            try:
                sub = hide_edge(cur, d)
            except TemplateError:
                continue
            if not is_template_3colorable(sub):
                nexts.append(sub)
        if not nexts:
            if is_relevant(cur):
                return cur
            if not fallback:
                fallback.append(cur)
            return None
        nexts.sort(key=lambda s: (not is_relevant(s),
                                  max(len(f) for f in s.graph.faces)))
        for sub in nexts:
            got = dfs(sub)
            if got is not None:
                return got
        return None

    got = dfs(t)
    if got is not None:
        return got
    return fallback[0]


_criticalize_cache: dict[bytes, Template] = {}


def criticalize_cached(t: Template) -> Template:
    code = t.canonical_code()
    got = _criticalize_cache.get(code)
    if got is None:
        got = criticalize(t)
        _criticalize_cache[code] = got
    return got
