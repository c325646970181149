"""
Loose competitiveness: worst-case ratios are rare across cache sizes
====================================================================

Fix a trace and sweep the server count k over 1..n.  Call k a violator
for strategy X against a target curve c(k) when X's cost at k is both
significant (at least OPT(1)/n^d) and at least c(k) times OPT(k).  Even
for curves far below the classical worst-case ratio k, only a scattering
of k values violate: high competitive ratios require cache sizes tuned
against the trace.

This demo sweeps an adversarially cyclic trace and a random trace, prints
cost/OPT per k, and counts violators against c(k) = 1.5 (a brutally low
constant target) and c(k) = 4 ln(k+1).
"""

from cachecomp import (
    count_violators,
    generate_cyclic,
    generate_random,
    parse_family,
    sweep,
    table_to_csv,
)

N = 24

for label, trace in [
    ("cyclic over 9 nodes", generate_cyclic(9, 600)),
    ("uniform random over 60 nodes", generate_random(60, 600, 1, seed=5)),
]:
    table = sweep(trace, ["lru", "fwf", "mark"], N, mark_trials=25, seed=1)
    print(f"--- {label}: {len(trace)} requests, k = 1..{N}")
    print(" k    lru/opt    fwf/opt   mark/opt")
    for row in table.rows:
        if row.k % 2:
            continue
        cells = []
        for name in table.strategies:
            cells.append(
                f"{float(row.costs[name]) / row.opt_cost:>8.2f}"
                if row.opt_cost
                else "       -"
            )
        print(f"{row.k:>2} " + " ".join(cells))
    for family_text in ("const:3/2", "log:4"):
        family = parse_family(family_text)
        counts = {
            name: count_violators(table, name, family, 1).count
            for name in table.strategies
        }
        print(f"violators vs c(k)={family_text}, d=1: {counts}")
    print()

print("CSV output (same table the CLI's `sweep` subcommand writes):")
print("\n".join(table_to_csv(table, parse_family("log:4"), 1).splitlines()[:5]))
