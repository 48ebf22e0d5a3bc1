"""Templates: torus-embedded graphs with per-face census multisets.

A census is a sorted tuple of integers >= 5 with multiset semantics (union
is concatenation).  A template assigns a census ``theta(f)`` to every face
so that ``sum(theta(f)) == |f| (mod 2)``; faces with empty census are kept
implicit.  Faces are identified by their index in the graph's face list,
which orders faces by smallest dart, so face identity survives
serialization round trips.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .surface import (EmbeddedGraph, SurfaceError, delete_edge, add_edge_in_face,
                      add_pendant_edge, embedded_subgraph_matches, match_face_regions,
                      face_key_map, format_graph, parse_graph_lines, strip_comments)

Census = tuple[int, ...]

ALLOWED_UNIONS: tuple[Census, ...] = ((), (5, 5), (5, 5, 5, 5), (5, 5, 6), (5, 7))


class TemplateError(Exception):
    """Invalid census assignment or template operation."""


def census_union(*parts: Iterable[int]) -> Census:
    out: list[int] = []
    for p in parts:
        out.extend(p)
    return tuple(sorted(out))


class Template:
    """An embedded graph plus a census for each face."""

    __slots__ = ("graph", "theta", "_hash", "_canon", "_colorable")

    def __init__(self, graph: EmbeddedGraph, theta: Mapping[int, Iterable[int]],
                 check: bool = True):
        self.graph = graph
        norm: dict[int, Census] = {}
        for fi, cen in theta.items():
            cen = tuple(sorted(cen))
            if cen:
                norm[fi] = cen
        self.theta = norm
        self._hash = None
        self._canon = None
        self._colorable = None
        if check:
            self._validate()

    def _validate(self) -> None:
        g = self.graph
        if not g.is_two_cell_torus():
            raise TemplateError("template graph must be 2-cell in the torus")
        for fi, cen in self.theta.items():
            if not (0 <= fi < g.nfaces):
                raise TemplateError("census on a nonexistent face %r" % (fi,))
            if any(v < 5 for v in cen):
                raise TemplateError("census value below 5 in %r" % (cen,))
        for fi in range(g.nfaces):
            cen = self.theta.get(fi, ())
            if (sum(cen) - len(g.faces[fi])) % 2 != 0:
                raise TemplateError(
                    "parity violation on face %d: theta=%r, |f|=%d"
                    % (fi, cen, len(g.faces[fi])))

    # ------------------------------------------------------------------

    def theta_of(self, fi: int) -> Census:
        return self.theta.get(fi, ())

    def theta_union(self) -> Census:
        return census_union(*self.theta.values())

    def face_len(self, fi: int) -> int:
        return len(self.graph.faces[fi])

    def canonical_code(self) -> bytes:
        if self._canon is None:
            self._canon = self.graph.canonical_code(theta=self.theta)
        return self._canon

    def __eq__(self, other) -> bool:
        return (isinstance(other, Template) and self.graph == other.graph
                and self.theta == other.theta)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.graph, tuple(sorted(self.theta.items()))))
        return self._hash

    def __repr__(self) -> str:
        return "Template(V=%d, E=%d, theta=%s)" % (
            self.graph.nverts, self.graph.nedges,
            {fi: list(c) for fi, c in sorted(self.theta.items())})


class SimpleTemplate:
    """A direct template presented as a graph plus its quadrangulated faces.

    Faces in ``quadrangulated`` (even length >= 6, empty census) are the
    ones a represented graph fills with an arbitrary quadrangulation;
    4-faces and faces with census {|f|} stay faces.
    """

    __slots__ = ("graph", "quadrangulated")

    def __init__(self, graph: EmbeddedGraph, quadrangulated: frozenset[int]):
        self.graph = graph
        self.quadrangulated = quadrangulated

    def __repr__(self) -> str:
        return "SimpleTemplate(V=%d, E=%d, Q=%s)" % (
            self.graph.nverts, self.graph.nedges, sorted(self.quadrangulated))


# ----------------------------------------------------------------------
# construction


def make_template(graph: EmbeddedGraph, theta: Mapping[int, Iterable[int]]) -> Template:
    return Template(graph, theta)


def template_from_graph(graph: EmbeddedGraph) -> Template:
    """Census {|f|} on every long face, empty on 4-faces."""
    theta = {}
    for fi, walk in enumerate(graph.faces):
        if len(walk) >= 5:
            theta[fi] = (len(walk),)
        elif len(walk) != 4:
            raise TemplateError("face of length %d cannot carry a census" % len(walk))
    return Template(graph, theta)


# ----------------------------------------------------------------------
# hiding and revealing


def hideable_edges(t: Template) -> list[int]:
    """Darts (one per edge) whose edge can be hidden."""
    g = t.graph
    out = []
    for d in range(0, g.ndarts, 2):
        if g.face_of[d] != g.face_of[d ^ 1]:
            out.append(d)
        elif g.degree(g.vertex_of[d]) == 1 or g.degree(g.vertex_of[d ^ 1]) == 1:
            out.append(d)
    return out


def hide_edge(t: Template, dart: int) -> Template:
    """Remove an edge, merging the censuses of the faces it separated.

    An edge inside a single face can only be hidden when it carries a
    degree-1 vertex (which is deleted with it).
    """
    g = t.graph
    f1, f2 = g.face_of[dart], g.face_of[dart ^ 1]
    pendant = g.degree(g.vertex_of[dart]) == 1 or g.degree(g.vertex_of[dart ^ 1]) == 1
    if f1 == f2 and not pendant:
        raise TemplateError("hiding is undefined for a bridge between equal faces")
    h, dmap = delete_edge(g, dart)
    if not h.is_connected():
        raise TemplateError("hiding would disconnect the drawing")
    fmap = face_key_map(g, h, dmap)
    theta: dict[int, list[int]] = {}
    for fi, cen in t.theta.items():
        theta.setdefault(fmap[fi], []).extend(cen)
    return Template(h, theta)


def enumerate_reveals(t: Template, face: int, at_vertex: int | None = None
                      ) -> list[Template]:
    """All templates obtained by drawing one new edge inside ``face``.

    The edge joins two corners of the face (the census splitting into two
    parity-consistent parts in every possible way) or hangs a new pendant
    vertex off one corner (census unchanged).  With ``at_vertex`` the new
    edge must be incident with that vertex.
    """
    g = t.graph
    walk = g.faces[face]
    cen = t.theta_of(face)
    out: list[Template] = []
    seen: set[bytes] = set()

    corners = list(walk)
    for i, ca in enumerate(corners):
        if at_vertex is not None and g.vertex_of[ca] != at_vertex:
            continue
        # pendant reveal
        h, dmap, _ = add_pendant_edge(g, ca)
        cand = _carry_theta_into(t, h, dmap)
        _push(out, seen, cand)
        # chords
        for j, cb in enumerate(corners):
            if j == i or g.vertex_of[cb] == g.vertex_of[ca]:
                continue
            if at_vertex is None and j < i:
                continue  # unordered pairs unless filtered by vertex
            h, dmap, nd = add_edge_in_face(g, ca, cb)
            base = _carry_theta_into(t, h, dmap, skip={face})
            fa, fb = h.face_of[nd], h.face_of[nd ^ 1]
            la, lb = len(h.faces[fa]), len(h.faces[fb])
            for part_a, part_b in census_splits(cen):
                if (sum(part_a) - la) % 2 or (sum(part_b) - lb) % 2:
                    continue
                theta = dict(base)
                if part_a:
                    theta[fa] = part_a
                if part_b:
                    theta[fb] = part_b
                _push(out, seen, Template(h, theta))
    return out


def _push(out: list[Template], seen: set[bytes], t: Template) -> None:
    code = t.canonical_code()
    if code not in seen:
        seen.add(code)
        out.append(t)


def _carry_theta_into(t: Template, h: EmbeddedGraph, dmap: Sequence[int],
                      skip: set[int] | None = None) -> Template | dict[int, Census]:
    """Map censuses through a surgery that never splits a census-carrying face."""
    fmap = face_key_map(t.graph, h, dmap)
    theta: dict[int, list[int]] = {}
    for fi, cen in t.theta.items():
        if skip and fi in skip:
            continue
        theta.setdefault(fmap[fi], []).extend(cen)
    if skip is None:
        return Template(h, theta)
    return {fi: tuple(sorted(c)) for fi, c in theta.items()}


def census_splits(cen: Census) -> list[tuple[Census, Census]]:
    """All ordered partitions of a census multiset into two censuses."""
    items = sorted(set(cen))
    counts = [cen.count(v) for v in items]
    out = []

    def rec(i: int, left: list[int]):
        if i == len(items):
            left_t = tuple(left)
            right = list(cen)
            for v in left_t:
                right.remove(v)
            out.append((left_t, tuple(right)))
            return
        for k in range(counts[i] + 1):
            rec(i + 1, left + [items[i]] * k)

    rec(0, [])
    return out


# ----------------------------------------------------------------------
# predicates


def is_subtemplate(tsub: Template, t: Template) -> bool:
    """Whether some homeomorphism embeds tsub into t with matching census unions."""
    if tsub.theta_union() != t.theta_union():
        return False
    for dart_map, mirrored in embedded_subgraph_matches(tsub.graph, t.graph):
        try:
            regions = match_face_regions(tsub.graph, t.graph, dart_map, mirrored)
        except SurfaceError:
            continue
        if all(
            census_union(*(t.theta_of(hf) for hf in regions[fi])) == tsub.theta_of(fi)
            for fi in range(tsub.graph.nfaces)
        ):
            return True
    return False


def is_relevant(t: Template) -> bool:
    """Triangle-free, census union allowed, per-face census feasible."""
    if t.theta_union() not in ALLOWED_UNIONS:
        return False
    g = t.graph
    for fi in range(g.nfaces):
        L = len(g.faces[fi])
        cen = t.theta_of(fi)
        if L == 4:
            if cen:
                return False
            continue
        if cen == (L,):
            continue
        from .growth import census_feasible
        if not census_feasible(L, cen):
            return False
    return not g.has_triangle()


def is_direct(t: Template) -> bool:
    """Every face with a nonempty census is proper."""
    for fi, cen in t.theta.items():
        if cen != (t.face_len(fi),):
            return False
    return True


def as_simple(t: Template) -> SimpleTemplate:
    """View a direct template as graph + quadrangulated faces.

    Empty-census faces of length >= 6 must be quadrangulated by any
    represented graph; 4-faces stay faces either way and are kept fixed.
    """
    if not is_direct(t):
        raise TemplateError("template is not direct")
    quad = frozenset(
        fi for fi in range(t.graph.nfaces)
        if not t.theta_of(fi) and t.face_len(fi) >= 6
    )
    return SimpleTemplate(t.graph, quad)


def is_represented(host: EmbeddedGraph, t: Template) -> bool:
    """Whether some homeomorphism maps the template graph into ``host`` so
    that each face's region carries exactly the prescribed census."""
    if not host.is_two_cell_torus():
        raise TemplateError("host must be 2-cell in the torus")
    if host.census() != t.theta_union():
        return False
    for dart_map, mirrored in embedded_subgraph_matches(t.graph, host):
        try:
            regions = match_face_regions(t.graph, host, dart_map, mirrored)
        except SurfaceError:
            continue
        if all(
            host.census(regions[fi]) == t.theta_of(fi)
            for fi in range(t.graph.nfaces)
        ):
            return True
    return False


# ----------------------------------------------------------------------
# serialization


def format_template(t: Template) -> str:
    lines = [format_graph(t.graph).rstrip("\n")]
    for fi in range(t.graph.nfaces):
        key = min(t.graph.faces[fi])
        cen = t.theta_of(fi)
        lines.append(("theta %d:" % key) + ("" if not cen else " " + " ".join(map(str, cen))))
    return "\n".join(lines) + "\n"


def parse_template(text: str) -> Template:
    return parse_template_lines(strip_comments(text))


def parse_template_lines(lines: Sequence[str]) -> Template:
    glines = [ln for ln in lines if not ln.startswith("theta")]
    tlines = [ln for ln in lines if ln.startswith("theta")]
    g = parse_graph_lines(glines)
    theta: dict[int, Census] = {}
    for ln in tlines:
        head, _, rest = ln.partition(":")
        try:
            key = int(head.split()[1])
        except (IndexError, ValueError) as exc:
            raise TemplateError("malformed theta line: %r" % ln) from exc
        cen = tuple(int(x) for x in rest.split())
        if cen:
            fi = g.face_of[key]
            if min(g.faces[fi]) != key:
                raise TemplateError("theta key %d is not a minimal face dart" % key)
            theta[fi] = cen
    return Template(g, theta)


def format_catalog(templates: Sequence[Template]) -> str:
    parts = ["count %d" % len(templates)]
    for t in templates:
        parts.append(format_template(t).rstrip("\n"))
    return "\n---\n".join(parts) + "\n"


def parse_catalog(text: str) -> list[Template]:
    chunks = text.split("---")
    head = strip_comments(chunks[0])
    if not head or not head[0].startswith("count"):
        raise TemplateError("catalog must start with 'count <n>'")
    n = int(head[0].split()[1])
    out = []
    first_rest = head[1:]
    if first_rest:
        out.append(parse_template_lines(first_rest))
    for chunk in chunks[1:]:
        lines = strip_comments(chunk)
        if lines:
            out.append(parse_template_lines(lines))
    if len(out) != n:
        raise TemplateError("catalog count %d does not match %d records" % (n, len(out)))
    return out
