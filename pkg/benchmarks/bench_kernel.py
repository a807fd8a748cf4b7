#!/usr/bin/env python3
"""Kernel backend comparison: bulk insert, pattern matching, and a rule
fixpoint, timed against every importable kernel.

    python3 benchmarks/bench_kernel.py [--quads 20000] [--chain 40]
"""

import argparse
import random
import time

from semwiki import _kernel
from semwiki.namespaces import HUTO_BEFORE
from semwiki.rules import RuleSet, rule_from_text, run_fixpoint
from semwiki.store import DATA, init_store
from semwiki.terms import Iri, Quad

TRANSITIVITY = """
INSERT { ?a huto:before ?c }
WHERE {
    ?a huto:before ?b .
    ?b huto:before ?c .
    FILTER NOT EXISTS { ?a huto:before ?c }
}
"""


def make_quads(n, rng):
    subjects = [Iri(f"urn:bench:s{i}") for i in range(max(16, n // 20))]
    preds = [Iri(f"urn:bench:p{i}") for i in range(12)]
    objects = [Iri(f"urn:bench:o{i}") for i in range(max(16, n // 20))]
    return [Quad(rng.choice(subjects), rng.choice(preds),
                 rng.choice(objects), DATA) for _ in range(n)]


def bench_backend(name, kernel_cls, quads, chain):
    rng = random.Random(0)
    store = init_store(kernel_cls=kernel_cls)

    t0 = time.perf_counter()
    for q in quads:
        store.insert(q)
    insert_s = time.perf_counter() - t0

    patterns = []
    for q in rng.sample(quads, min(2000, len(quads))):
        roll = rng.random()
        if roll < 0.4:
            patterns.append((q.subject, None, None))
        elif roll < 0.7:
            patterns.append((None, q.predicate, None))
        else:
            patterns.append((q.subject, q.predicate, None))
    t0 = time.perf_counter()
    hits = 0
    for s, p, o in patterns:
        hits += len(store.match(s, p, o))
    match_s = time.perf_counter() - t0

    fix_store = init_store(kernel_cls=kernel_cls)
    for i in range(chain):
        fix_store.insert(Quad(Iri(f"urn:bench:c{i}"), Iri(HUTO_BEFORE),
                              Iri(f"urn:bench:c{i+1}"), DATA))
    ruleset = RuleSet([rule_from_text("trans", TRANSITIVITY)])
    t0 = time.perf_counter()
    report = run_fixpoint(fix_store, ruleset)
    fixpoint_s = time.perf_counter() - t0

    return {
        "backend": name,
        "insert_s": insert_s,
        "match_s": match_s,
        "match_hits": hits,
        "fixpoint_s": fixpoint_s,
        "fixpoint_added": report.total_added,
    }


def bench_raw_kernel(name, kernel_cls, n):
    """Interned-id operations straight on the kernel, no store wrapper."""
    rng = random.Random(2)
    ids = [(rng.randrange(n // 10), rng.randrange(12), rng.randrange(n // 10))
           for _ in range(n)]
    kernel = kernel_cls()
    kernel.ensure_graph(0)
    t0 = time.perf_counter()
    for s, p, o in ids:
        kernel.add(0, s, p, o)
    add_s = time.perf_counter() - t0

    t0 = time.perf_counter()
    hits = 0
    for s, p, o in ids[:4000]:
        hits += len(kernel.match(0, s, -1, -1))
        hits += len(kernel.match(0, -1, p, o))
    match_s = time.perf_counter() - t0

    t0 = time.perf_counter()
    for s, p, o in ids:
        kernel.discard(0, s, p, o)
    discard_s = time.perf_counter() - t0
    return {"backend": name, "add_s": add_s, "match_s": match_s,
            "discard_s": discard_s, "hits": hits}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quads", type=int, default=20000)
    parser.add_argument("--chain", type=int, default=40)
    args = parser.parse_args()

    rng = random.Random(1)
    quads = make_quads(args.quads, rng)
    backends = _kernel.available_backends()
    print(f"kernels available: {', '.join(backends)} "
          f"(selected by default: {_kernel.BACKEND})")
    print(f"workload: {args.quads} inserts, 2000 matches, "
          f"transitive closure over a {args.chain}-chain\n")

    rows = [bench_backend(name, cls, quads, args.chain)
            for name, cls in sorted(backends.items())]
    header = f"{'backend':<8} {'insert':>9} {'match':>9} {'fixpoint':>9} {'derived':>8}"
    print(header)
    print("-" * len(header))
    for r in rows:
        print(f"{r['backend']:<8} {r['insert_s']:>8.3f}s {r['match_s']:>8.3f}s "
              f"{r['fixpoint_s']:>8.3f}s {r['fixpoint_added']:>8}")
    if len(rows) == 2:
        pure = next(r for r in rows if r["backend"] == "pure")
        native = next(r for r in rows if r["backend"] == "native")
        print(f"\nnative speedup: insert x{pure['insert_s']/native['insert_s']:.2f}, "
              f"match x{pure['match_s']/native['match_s']:.2f}, "
              f"fixpoint x{pure['fixpoint_s']/native['fixpoint_s']:.2f}")

    print(f"\nraw kernel (interned ids, {args.quads} adds, 8000 matches):")
    header = f"{'backend':<8} {'add':>9} {'match':>9} {'discard':>9}"
    print(header)
    print("-" * len(header))
    raw = [bench_raw_kernel(name, cls, args.quads)
           for name, cls in sorted(backends.items())]
    for r in raw:
        print(f"{r['backend']:<8} {r['add_s']:>8.3f}s {r['match_s']:>8.3f}s "
              f"{r['discard_s']:>8.3f}s")
    if len(raw) == 2:
        pure = next(r for r in raw if r["backend"] == "pure")
        native = next(r for r in raw if r["backend"] == "native")
        print(f"\nraw speedup: add x{pure['add_s']/native['add_s']:.2f}, "
              f"match x{pure['match_s']/native['match_s']:.2f}, "
              f"discard x{pure['discard_s']/native['discard_s']:.2f}")


if __name__ == "__main__":
    main()
