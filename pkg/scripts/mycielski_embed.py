"""Sample rotation systems of the Mycielskian of C5, keep torus embeddings."""
import random, sys, time
from itertools import permutations
from toric3.surface import build_graph, EmbeddedGraph
from toric3.oracle import is_4_critical, is_irreducible, brute_force_3colorable

# adjacency: 0-4 cycle, u_i=5+i ~ c_{i-1}, c_{i+1}, z=10 ~ all u
adj = {i: [] for i in range(11)}
def add(a, b):
    adj[a].append(b); adj[b].append(a)
for i in range(5):
    add(i, (i + 1) % 5)
for i in range(5):
    add(5 + i, (i - 1) % 5); add(5 + i, (i + 1) % 5)
for i in range(5):
    add(10, 5 + i)

# darts: edge list
edges = []
for a in range(11):
    for b in adj[a]:
        if a < b:
            edges.append((a, b))
assert len(edges) == 20
dart_at = {v: [] for v in range(11)}
for k, (a, b) in enumerate(edges):
    dart_at[a].append(2 * k)
    dart_at[b].append(2 * k + 1)

def euler_of(rotations):
    try:
        g = build_graph(rotations)
    except Exception:
        return None
    return g

def main(samples=300000, seed=1):
    rng = random.Random(seed)
    found = {}
    t0 = time.time()
    for it in range(samples):
        rotations = []
        for v in range(11):
            ds = dart_at[v][:]
            rest = ds[1:]
            rng.shuffle(rest)
            rotations.append([ds[0]] + rest)
        g = build_graph(rotations)
        if g.euler() == 0 and g.is_connected():
            code = g.canonical_code()
            if code not in found:
                found[code] = g
                print(f"[{it}] torus embedding census={g.census()} ew={g.edge_width()} "
                      f"irred={is_irreducible(g)} total={len(found)}", flush=True)
        if it % 50000 == 0 and it:
            print(f"... {it} samples, {len(found)} embeddings, {time.time()-t0:.0f}s", flush=True)
    print("distinct torus embeddings found:", len(found))
    import os
    os.makedirs("scripts/out", exist_ok=True)
    from toric3.surface import format_graph
    for i, (code, g) in enumerate(sorted(found.items())):
        with open(f"scripts/out/myc_{i}.txt", "w") as f:
            f.write(format_graph(g))

main(int(sys.argv[1]) if len(sys.argv) > 1 else 300000)
