"""Exhaustively enumerate all torus embeddings of the Mycielskian of C5."""
import sys, time
from itertools import permutations, product
from toric3.surface import EmbeddedGraph, format_graph
from toric3.oracle import is_irreducible

adj = {i: [] for i in range(11)}
def add(a, b):
    adj[a].append(b); adj[b].append(a)
for i in range(5):
    add(i, (i + 1) % 5)
for i in range(5):
    add(5 + i, (i - 1) % 5); add(5 + i, (i + 1) % 5)
for i in range(5):
    add(10, 5 + i)
edges = [(a, b) for a in range(11) for b in adj[a] if a < b]
dart_at = {v: [] for v in range(11)}
for k, (a, b) in enumerate(edges):
    dart_at[a].append(2 * k)
    dart_at[b].append(2 * k + 1)

# per-vertex rotation options: cyclic orders with first dart fixed
options = []
for v in range(11):
    ds = dart_at[v]
    opts = []
    for perm in permutations(ds[1:]):
        cyc = [ds[0]] + list(perm)
        succ = [(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc))]
        opts.append(succ)
    options.append(opts)

ndarts = 40
t0 = time.time()
count = 0
hits = {}
sigma = [0] * ndarts
# iterate product; vertices ordered by fewest options first doesn't matter for full product
for combo in product(*options):
    count += 1
    for succs in combo:
        for a, b in succs:
            sigma[a] = b
    # count orbits of d -> sigma[d^1]
    seen = 0
    faces = 0
    mask = 0
    for d0 in range(ndarts):
        if (mask >> d0) & 1:
            continue
        faces += 1
        d = d0
        while not (mask >> d) & 1:
            mask |= 1 << d
            d = sigma[d ^ 1]
    # V - E + F = 11 - 20 + faces
    if faces == 9:
        g = EmbeddedGraph(sigma)
        if g.is_connected():
            code = g.canonical_code()
            if code not in hits:
                hits[code] = EmbeddedGraph(list(sigma))
                print(f"embedding #{len(hits)}: census={g.census()} ew={g.edge_width()} "
                      f"irred={is_irreducible(g)}  ({count} combos, {time.time()-t0:.0f}s)", flush=True)
    if count % 1000000 == 0:
        print(f"... {count} ({time.time()-t0:.0f}s)", flush=True)

print("total combos:", count, "distinct embeddings:", len(hits))
import os
os.makedirs("scripts/out", exist_ok=True)
for i, (code, g) in enumerate(sorted(hits.items())):
    with open(f"scripts/out/myc_exact_{i}.txt", "w") as f:
        f.write(format_graph(g))
