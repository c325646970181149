"""
Tour of the online strategies
=============================

Runs every built-in strategy over one small weighted trace and prints the
event logs side by side.  Requests to served nodes are free hits; a miss
is served by an unplaced server while one remains, and only afterwards do
paid moves start.  The cost of a move is the weight of the node the
server leaves.
"""

from cachecomp import parse_trace, run

TRACE_TEXT = """\
# three cheap nodes and one expensive one
a 4
b
c
a 4
d
b
a 4
c
"""

K = 2

trace = parse_trace(TRACE_TEXT)
print(f"trace: {[trace.labels[v] for v in trace.requests]}")
print(f"weights: {dict(zip(trace.labels, trace.weights))}")
print(f"servers: k = {K}")
print()

for name in ("lru", "fifo", "fwf", "balance", "mark", "greedydual:max", "greedydual:min"):
    result = run(name, K, trace, seed=0)
    steps = []
    for e in result.events:
        if e.kind == "hit":
            steps.append(f"{trace.labels[e.node]}=hit")
        elif e.kind == "free":
            steps.append(f"{trace.labels[e.node]}=place")
        elif e.kind == "flush":
            steps.append(f"{trace.labels[e.node]}=FLUSH({e.cost})")
        else:
            steps.append(f"{trace.labels[e.node]}=evict:{trace.labels[e.evicted]}({e.cost})")
    print(f"{result.strategy:>15}  cost={result.total_cost:<3}  " + "  ".join(steps))

print()
print("LRU ignores weights and happily evicts the expensive node; the two")
print("GreedyDual variants keep it resident and pay for cheap nodes instead.")
