"""Seeds, the grow step, and the worklist fixpoint producing the catalog.

The catalog is the closure of the four verified seed templates under
growing: for every amplification of a member, every realization of the
blocking search contributes its critical subtemplate.  Provenance records
which parent and which amplification case first produced each member.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field

from .barriers import BarrierEngineError, criticalize, expand_to_noncolorable
from .growth import amplifications
from .oracle import (DEFAULT_VERTEX_BOUND, brute_force_3colorable, is_4_critical,
                     is_irreducible)
from .surface import EmbeddedGraph, format_graph, parse_graph
from .templates import (Template, format_catalog, format_template, is_direct,
                        is_relevant, parse_catalog, parse_template,
                        template_from_graph)
from .winding import is_template_3colorable, proper_colorings

SEED_NAMES = ("quadrangulation_w5", "pentagon_pair", "heptagon_a", "heptagon_b")

ALLOWED_CENSUSES = ((), (5, 5), (5, 5, 5, 5), (5, 5, 6), (5, 7))


class EnumerationError(Exception):
    pass


def _data_path(*parts: str) -> str:
    return os.path.join(os.path.dirname(__file__), "data", *parts)


def seed_graphs(directory: str | None = None) -> dict[str, EmbeddedGraph]:
    """The four shipped irreducible drawings, keyed by seed name."""
    directory = directory or _data_path("seeds")
    out = {}
    for name in SEED_NAMES:
        path = os.path.join(directory, name + ".txt")
        with open(path, "r", encoding="ascii") as fh:
            out[name] = parse_graph(fh.read())
    return out


@dataclass
class SeedReport:
    name: str
    triangle_free: bool
    two_cell: bool
    four_critical: bool
    irreducible: bool
    two_connected: bool
    representativity2: bool
    census_allowed: bool

    @property
    def ok(self) -> bool:
        return all((self.triangle_free, self.two_cell, self.four_critical,
                    self.irreducible, self.two_connected,
                    self.representativity2, self.census_allowed))

    def failures(self) -> list[str]:
        return [k for k in ("triangle_free", "two_cell", "four_critical",
                            "irreducible", "two_connected",
                            "representativity2", "census_allowed")
                if not getattr(self, k)]


def verify_seed(g: EmbeddedGraph, name: str = "?",
                bound: int = DEFAULT_VERTEX_BOUND + 4) -> SeedReport:
    two_cell = g.is_two_cell_torus()
    return SeedReport(
        name=name,
        triangle_free=not g.has_triangle(),
        two_cell=two_cell,
        four_critical=is_4_critical(g, bound=bound),
        irreducible=is_irreducible(g),
        two_connected=g.is_two_connected(),
        representativity2=two_cell and g.representativity_at_least(2),
        census_allowed=g.census() in ALLOWED_CENSUSES,
    )


def seed_templates(directory: str | None = None, verify: bool = True) -> list[Template]:
    """Critical templates of the four irreducible drawings."""
    out = []
    for name, g in seed_graphs(directory).items():
        if verify:
            report = verify_seed(g, name)
            if not report.ok:
                raise EnumerationError(
                    "seed %s fails verification: %s" % (name, report.failures()))
        out.append(criticalize(template_from_graph(g)))
    codes = {t.canonical_code() for t in out}
    if len(codes) != len(out):
        raise EnumerationError("seed templates are not pairwise distinct")
    return out


# ----------------------------------------------------------------------
# growing


@dataclass
class GrowStats:
    amplifications: int = 0
    realizations: int = 0
    nonrelevant_critical: int = 0
    seconds: float = 0.0


def grow(t: Template, stats: GrowStats | None = None,
         node_budget: int | None = None) -> dict[bytes, tuple[Template, str]]:
    """Criticalized realizations over every amplification, deduplicated."""
    start = time.time()
    stats = stats if stats is not None else GrowStats()
    out: dict[bytes, tuple[Template, str]] = {}
    seen_real: set[bytes] = set()
    for amp, label in amplifications(t):
        stats.amplifications += 1
        colorings = proper_colorings(amp)
        for real in expand_to_noncolorable(amp, colorings, node_budget=node_budget):
            code = real.canonical_code()
            if code in seen_real:
                continue
            seen_real.add(code)
            stats.realizations += 1
            if is_template_3colorable(real):
                raise BarrierEngineError("realization is 3-colorable")
            crit = criticalize(real)
            if not is_relevant(crit):
                stats.nonrelevant_critical += 1
                continue
            ccode = crit.canonical_code()
            if ccode not in out:
                out[ccode] = (crit, label)
    stats.seconds += time.time() - start
    return out


@dataclass
class Catalog:
    templates: dict[bytes, Template] = field(default_factory=dict)
    provenance: list[str] = field(default_factory=list)
    complete: bool = False

    def members(self) -> list[Template]:
        return [self.templates[c] for c in sorted(self.templates)]

    def __len__(self) -> int:
        return len(self.templates)


def close_under_growing(seeds: list[Template],
                        max_members: int | None = None,
                        max_seconds: float | None = None,
                        node_budget: int | None = None,
                        jobs: int = 1,
                        checkpoint: str | None = None,
                        verbose: bool = False) -> Catalog:
    """Worklist fixpoint of the grow step (FIFO order)."""
    catalog = Catalog()
    worklist: list[bytes] = []
    for s in seeds:
        code = s.canonical_code()
        if code not in catalog.templates:
            catalog.templates[code] = s
            catalog.provenance.append("%s <- seed" % _short(code))
            worklist.append(code)
    start = time.time()
    stats = GrowStats()
    processed = 0

    def budget_exceeded() -> bool:
        if max_members is not None and len(catalog) > max_members:
            return True
        if max_seconds is not None and time.time() - start > max_seconds:
            return True
        return False

    if jobs > 1:
        _close_parallel(catalog, worklist, jobs, stats, verbose, checkpoint,
                        budget_exceeded, node_budget)
    else:
        while worklist:
            if budget_exceeded():
                catalog.complete = False
                return catalog
            code = worklist.pop(0)
            t = catalog.templates[code]
            for ccode, (crit, label) in grow(t, stats, node_budget).items():
                if ccode not in catalog.templates:
                    catalog.templates[ccode] = crit
                    catalog.provenance.append(
                        "%s <- %s via %s" % (_short(ccode), _short(code), label))
                    worklist.append(ccode)
            processed += 1
            if verbose:
                print("[%6.0fs] processed %d, catalog %d, queued %d"
                      % (time.time() - start, processed, len(catalog),
                         len(worklist)), flush=True)
            if checkpoint:
                save_checkpoint(checkpoint, catalog, worklist)
    catalog.complete = True
    return catalog


def _grow_worker(text: str) -> list[tuple[str, str]]:
    t = parse_template(text)
    return [(format_template(crit), label)
            for crit, label in grow(t).values()]


def _close_parallel(catalog: Catalog, worklist: list[bytes], jobs: int,
                    stats: GrowStats, verbose: bool, checkpoint: str | None,
                    budget_exceeded, node_budget) -> None:
    from concurrent.futures import ProcessPoolExecutor

    start = time.time()
    processed = 0
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        pending: dict = {}
        while worklist or pending:
            while worklist and len(pending) < 2 * jobs:
                code = worklist.pop(0)
                fut = pool.submit(_grow_worker, format_template(catalog.templates[code]))
                pending[fut] = code
            from concurrent.futures import FIRST_COMPLETED, wait
            done, _ = wait(list(pending), return_when=FIRST_COMPLETED)
            for fut in done:
                parent = pending.pop(fut)
                processed += 1
                for text, label in fut.result():
                    crit = parse_template(text)
                    ccode = crit.canonical_code()
                    if ccode not in catalog.templates:
                        catalog.templates[ccode] = crit
                        catalog.provenance.append(
                            "%s <- %s via %s" % (_short(ccode), _short(parent), label))
                        worklist.append(ccode)
                if verbose:
                    print("[%6.0fs] processed %d, catalog %d, queued %d"
                          % (time.time() - start, processed, len(catalog),
                             len(worklist) + len(pending)), flush=True)
            if checkpoint:
                save_checkpoint(checkpoint, catalog, worklist)
            if budget_exceeded():
                for fut in pending:
                    fut.cancel()
                catalog.complete = False
                return


def _short(code: bytes) -> str:
    import hashlib
    return hashlib.sha256(code).hexdigest()[:12]


def save_checkpoint(path: str, catalog: Catalog, worklist: list[bytes]) -> None:
    tmp = path + ".tmp"
    members = catalog.members()
    index = {t.canonical_code(): i for i, t in enumerate(members)}
    with open(tmp, "w", encoding="ascii") as fh:
        fh.write("# checkpoint\n")
        fh.write("pending " + " ".join(str(index[c]) for c in worklist
                                       if c in index) + "\n")
        for line in catalog.provenance:
            fh.write("# prov %s\n" % line)
        fh.write(format_catalog(members))
    os.replace(tmp, path)


def load_checkpoint(path: str) -> tuple[Catalog, list[bytes]]:
    with open(path, "r", encoding="ascii") as fh:
        text = fh.read()
    pending_ids: list[int] = []
    prov: list[str] = []
    for line in text.splitlines():
        if line.startswith("pending "):
            pending_ids = [int(x) for x in line.split()[1:]]
        elif line.startswith("# prov "):
            prov.append(line[len("# prov "):])
    body = "\n".join(ln for ln in text.splitlines()
                     if not (ln.startswith("pending ") or ln.startswith("#")))
    members = parse_catalog(body)
    catalog = Catalog()
    for t in members:
        catalog.templates[t.canonical_code()] = t
    catalog.provenance = prov
    worklist = [members[i].canonical_code() for i in pending_ids]
    return catalog, worklist


# ----------------------------------------------------------------------
# seed rediscovery (expensive; the shipped data was produced this way)


def rediscover_seeds(rounds: int = 2, fills_per_template: int = 3,
                     bound: int = DEFAULT_VERTEX_BOUND + 4,
                     verbose: bool = False) -> dict[bytes, EmbeddedGraph]:
    """Re-derive the irreducible seed drawings from the quadrangulation alone.

    Grows a partial catalog from the edge-width-5 seed, fills members and
    walks every fill down the reduction order, collecting the irreducible
    graphs encountered.  Finding all four this way cross-checks the
    shipped seed data.
    """
    from .oracle import random_quadrangulation_fill, reduce_to_irreducible

    seeds = seed_graphs()
    quad = seeds["quadrangulation_w5"]
    t0 = criticalize(template_from_graph(quad))
    catalog = close_under_growing([t0], max_members=40,
                                  max_seconds=600.0, verbose=verbose)
    found: dict[bytes, EmbeddedGraph] = {quad.canonical_code(): quad}
    for t in catalog.members():
        for k in range(fills_per_template):
            g = random_quadrangulation_fill(t, seed=k)
            if g.nverts > bound:
                continue
            if brute_force_3colorable(g, bound):
                continue
            red = reduce_to_irreducible(g, seed=k, bound=bound)
            code = red.canonical_code()
            if code not in found:
                found[code] = red
                if verbose:
                    print("irreducible found: %s census=%s" % (red, red.census()),
                          flush=True)
    return found
