"""
k-phases: the combinatorial backbone of the paging bounds
=========================================================

A trace tiles into k-phases: maximal substrings touching at most k
distinct nodes.  Writing P for the phase count minus one and m_i for the
requests in phase i that are new (unseen in that phase and the previous
one), three quantities fall out:

  * flush-when-full flushes exactly P times, paying k each, so any
    strategy that moves at most k times per phase costs at most k*P;
  * the offline optimum with h servers pays at least (k - h + avg m) * P/2;
  * the randomized marking strategy pays at most sum m_i*(H_k - H_m + 1)
    in expectation.

The shrink property makes those bounds bite for most k at once: raising k
to k + 2*avg(m) cuts the number of phases by a quarter or more.
"""

from cachecomp import (
    generate_random,
    mark_upper_bound,
    opt_flow,
    opt_phase_lower_bound,
    partition,
    run,
    verify_phase_shrink,
)

trace = generate_random(num_nodes=30, length=1200, weight_max=1, seed=12)
print(f"trace: {len(trace)} requests over {trace.num_nodes} nodes\n")

print(" k   phases-1   avg new   FWF cost   k*P    OPT(k)   lower bnd   mark mean<=bnd")
for k in (2, 4, 8, 16):
    p = partition(trace, k)
    fwf_cost = run("fwf", k, trace).total_cost
    opt_k = opt_flow(trace, k).cost
    lower = opt_phase_lower_bound(p, k)
    bound = mark_upper_bound(p)
    trials = 60
    mark_mean = sum(run("mark", k, trace, seed=s).total_cost for s in range(trials)) / trials
    print(
        f"{k:>2}  {p.num_phases:>8}   {float(p.avenew):>7.2f}   {fwf_cost:>8} "
        f"  {k * p.num_phases:>4}   {opt_k:>5}   {float(lower):>8.2f}"
        f"   {mark_mean:>8.1f} <= {float(bound):.1f}"
    )

print("\nphase shrink when k grows by 2*avg(m):")
for k in (2, 4, 8, 16):
    p = partition(trace, k)
    if p.num_phases == 0:
        continue
    import math

    k2 = k + math.ceil(2 * p.avenew)
    p2 = partition(trace, k2)
    print(
        f"  P({k}) = {p.num_phases:>4}  ->  P({k2}) = {p2.num_phases:>4}"
        f"   (<= 3/4: {verify_phase_shrink(trace, k)})"
    )
