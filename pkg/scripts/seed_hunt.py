"""Hunt for the irreducible 4-critical triangle-free torus graphs by
expanding vertices (inverse 4-face collapse) and rescanning all reduction
paths."""
import sys, time
from toric3.surface import *
from toric3.oracle import *

def expand_vertex_candidates(g):
    """All full inverse collapses: double two edges at a vertex and split it
    so the two 2-faces merge into a new 4-face."""
    out = []
    seen = set()
    for v in range(g.nverts):
        darts = g.vertices[v]
        for e1 in darts:
            for e2 in darts:
                if e1 == e2 or g.vertex_of[e1 ^ 1] == g.vertex_of[e2 ^ 1]:
                    continue  # need distinct neighbors for a 4-face cycle
                for s1 in (0, 1):
                    for s2 in (0, 1):
                        try:
                            h1, _, n1 = add_parallel_edge(g, e1, s1)
                            h2, _, n2 = add_parallel_edge(h1, e2, s2)
                            # corners of the two 2-faces at v
                            c1 = n1 if s1 == 1 else e1
                            c2 = n2 if s2 == 1 else e2
                            if h2.face_of[c1] == h2.face_of[c2]:
                                continue
                            h3, _, _ = split_vertex(h2, c1, c2)
                        except SurfaceError:
                            continue
                        if h3.has_triangle() or not h3.is_two_cell_torus():
                            continue
                        # the merged face must be the new 4-face
                        if len(h3.faces[h3.face_of[c1]]) != 4:
                            continue
                        code = h3.canonical_code()
                        if code not in seen:
                            seen.add(code)
                            out.append(h3)
    return out

def all_reductions_to_irreducible(g, found, depth=0, seen=None):
    if seen is None:
        seen = set()
    code = g.canonical_code()
    if code in seen:
        return
    seen.add(code)
    opts = collapsible_4faces(g)
    if not opts:
        found[code] = g
        return
    for fi, diag in opts:
        res = collapse_4face(g, fi, diag)
        h = extract_4critical_subgraph(res.graph, bound=26)
        all_reductions_to_irreducible(h, found, depth + 1, seen)

def main(max_verts=15, rounds=2):
    g0 = circulant_quadrangulation(13, 5)
    pool = {g0.canonical_code(): g0}
    frontier = [g0]
    irreducibles = {}
    t0 = time.time()
    for rnd in range(rounds):
        new_frontier = []
        for g in frontier:
            if g.nverts >= max_verts:
                continue
            for h in expand_vertex_candidates(g):
                if h.nverts > max_verts + 2:
                    continue
                try:
                    if brute_force_3colorable(h, bound=26):
                        continue
                    crit = extract_4critical_subgraph(h, bound=26)
                except (VertexBoundExceeded, OracleError):
                    continue
                code = crit.canonical_code()
                if code not in pool:
                    pool[code] = crit
                    new_frontier.append(crit)
        frontier = new_frontier
        print(f"round {rnd}: pool={len(pool)} new={len(new_frontier)} ({time.time()-t0:.0f}s)",
              flush=True)
        for g in list(pool.values()):
            all_reductions_to_irreducible(g, irreducibles)
        print("  irreducibles so far:", len(irreducibles))
        for code, g in irreducibles.items():
            print("   ", g, "census", g.census(), "ew", g.edge_width(),
                  "irred", is_irreducible(g), "4crit", is_4_critical(g, bound=26))
        if len(irreducibles) >= 4:
            break
    # persist
    import os
    os.makedirs("scripts/out", exist_ok=True)
    for i, (code, g) in enumerate(sorted(irreducibles.items())):
        with open(f"scripts/out/irred_{i}.txt", "w") as f:
            f.write(format_graph(g))
    print("saved", len(irreducibles), "irreducibles")

if __name__ == "__main__":
    main()
