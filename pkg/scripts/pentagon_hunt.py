"""Hunt the pentagon-pair irreducible: delete an edge of a quadrangulation,
split the 6-face into two 5-faces with a new degree-2 vertex, test
3-colorability, reduce."""
import sys, time
from toric3.surface import *
from toric3.oracle import *

def pentagon_defects(g):
    """All census-(5,5) one-vertex extensions of a quadrangulation."""
    out = []
    seen = set()
    for d in range(0, g.ndarts, 2):
        if g.face_of[d] == g.face_of[d ^ 1]:
            continue
        h, dmap = delete_edge(g, d)
        if not h.is_two_cell_torus():
            continue
        # the merged 6-face
        sixes = [fi for fi, f in enumerate(h.faces) if len(f) == 6]
        for fi in sixes:
            walk = h.faces[fi]
            for i in range(3):
                a, b = walk[i], walk[(i + 3) % 6]
                if h.vertex_of[a] == h.vertex_of[b]:
                    continue
                h2, _, _ = add_path_in_face(h, a, b, interior=1)
                if h2.has_triangle():
                    continue
                if h2.census() != (5, 5):
                    continue
                code = h2.canonical_code()
                if code not in seen:
                    seen.add(code)
                    out.append(h2)
    return out

def main():
    bases = [circulant_quadrangulation(13, 5)]
    for n in range(9, 22):
        for s in range(3, n - 2):
            try:
                g = circulant_quadrangulation(n, s)
            except SurfaceError:
                continue
            if not g.has_triangle() and g.is_two_cell_torus():
                bases.append(g)
    for rows in range(2, 6):
        for cols in range(3, 11):
            if rows * cols > 22:
                continue
            for tw in range(cols):
                try:
                    g = grid_quadrangulation(rows, cols, tw)
                except SurfaceError:
                    continue
                if not g.has_triangle() and g.is_two_cell_torus():
                    bases.append(g)
    print("bases:", len(bases))
    t0 = time.time()
    irreducibles = {}
    tested = 0
    hits = 0
    for bi, base in enumerate(bases):
        for h in pentagon_defects(base):
            tested += 1
            if brute_force_3colorable(h, bound=26):
                continue
            hits += 1
            crit = extract_4critical_subgraph(h, bound=26)
            red = reduce_to_irreducible(crit, seed=0, bound=26)
            code = red.canonical_code()
            if code not in irreducibles:
                irreducibles[code] = red
                print(f"irreducible: {red} census={red.census()} ew={red.edge_width()} "
                      f"irred={is_irreducible(red)} (base {bi}, {time.time()-t0:.0f}s)", flush=True)
        if bi % 10 == 0:
            print(f"... base {bi}/{len(bases)} tested={tested} non3col={hits} ({time.time()-t0:.0f}s)", flush=True)
    print("distinct irreducibles:", len(irreducibles), "tested:", tested, "non-3-colorable:", hits)
    import os
    os.makedirs("scripts/out", exist_ok=True)
    for i, (code, g) in enumerate(sorted(irreducibles.items())):
        with open(f"scripts/out/pent_{i}.txt", "w") as f:
            f.write(format_graph(g))

main()
