"""Offline optimal cost OPT(h): exact solvers and test oracles.

The optimum is the minimum-cost assignment of a predecessor to every
request: request j is served either by the server that previously served
request i (cost 0 if both are to the same node, otherwise the weight of
node r_i) or by one of h initial placements (cost 0).  ``opt_flow`` solves
this exactly as an integral min-cost flow by successive shortest
augmenting paths with node potentials.

Rather than materializing one arc per (i, j) pair, the network routes
"server became free at time i" units along a shared timeline chain, which
is cost-equivalent and keeps the arc count linear:

    source -> first timeline node        cap h, cost 0   (initial servers)
    source -> A_i                        cap 1, cost 0
    A_i -> B_(next request of same node) cap 1, cost 0   (server stays put)
    A_i -> timeline at i+1               cap 1, cost w(r_i)  (eviction)
    timeline t -> timeline t+1           cap N, cost 0
    timeline j -> B_j                    cap 1, cost 0
    B_j -> sink                          cap 1, cost 0

Restricting the stay arc to the next occurrence of the same node loses no
optimality: any solution using a later occurrence can be rewired pairwise
without changing cost.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass

from .trace import RequestTrace

__all__ = [
    "OptSchedule",
    "InstanceSizeError",
    "opt_flow",
    "opt_flow_profile",
    "opt_belady",
    "opt_bruteforce",
    "opt_single_server",
]

_INF = float("inf")

DEFAULT_FLOW_CAP = 5000
BRUTE_FORCE_MAX_LEN = 12
BRUTE_FORCE_MAX_K = 4


class InstanceSizeError(ValueError):
    """Instance exceeds the solver's configured size cap."""


@dataclass(frozen=True)
class OptSchedule:
    """A minimum-cost schedule.

    ``predecessor[j]`` (1-based over the trace, entry 0 unused) is the
    request whose server serves request j; 0 denotes one of the k free
    initial placements.  Each i >= 1 precedes at most one j, and 0 precedes
    at most k.
    """

    predecessor: tuple[int, ...]
    cost: int
    k: int


class _MinCostFlow:
    """Paired-arc residual network; successive shortest paths with potentials.

    All arc costs are nonnegative, so zero initial potentials are valid and
    each augmentation is one Dijkstra over reduced costs.
    """

    def __init__(self, n: int):
        self.n = n
        self.adj: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[int] = []
        self.cost: list[int] = []
        self.pot: list[int] = [0] * n

    def add_arc(self, u: int, v: int, cap: int, cost: int) -> int:
        aid = len(self.to)
        self.adj[u].append(aid)
        self.to.append(v)
        self.cap.append(cap)
        self.cost.append(cost)
        self.adj[v].append(aid + 1)
        self.to.append(u)
        self.cap.append(0)
        self.cost.append(-cost)
        return aid

    def flow_on(self, aid: int) -> int:
        return self.cap[aid ^ 1]

    def _dijkstra(self, src: int) -> tuple[list[float], list[int]]:
        dist: list[float] = [_INF] * self.n
        parent = [-1] * self.n
        done = bytearray(self.n)
        dist[src] = 0
        heap: list[tuple[float, int]] = [(0, src)]
        adj, to, cap, cost, pot = self.adj, self.to, self.cap, self.cost, self.pot
        while heap:
            d, u = heapq.heappop(heap)
            if done[u]:
                continue
            done[u] = 1
            pu = pot[u]
            for aid in adj[u]:
                if cap[aid] <= 0:
                    continue
                v = to[aid]
                if done[v]:
                    continue
                nd = d + cost[aid] + pu - pot[v]
                if nd < dist[v]:
                    dist[v] = nd
                    parent[v] = aid
                    heapq.heappush(heap, (nd, v))
        return dist, parent

    def _apply_potentials(self, dist: list[float], cap_at: float) -> None:
        pot = self.pot
        for v in range(self.n):
            d = dist[v]
            if d < cap_at:
                pot[v] += int(d)
            else:
                pot[v] += int(cap_at)

    def _augment_unit(self, parent: list[int], sink: int, stop: int) -> int:
        """Push one unit along parent arcs from sink back to stop; true cost."""
        cost = 0
        v = sink
        while v != stop:
            aid = parent[v]
            self.cap[aid] -= 1
            self.cap[aid ^ 1] += 1
            cost += self.cost[aid]
            v = self.to[aid ^ 1]
        return cost

    def send_unit(self, src: int, sink: int) -> int | None:
        """One shortest-path augmentation of a single unit; None if blocked."""
        dist, parent = self._dijkstra(src)
        if dist[sink] == _INF:
            return None
        true_cost = int(dist[sink]) + self.pot[sink] - self.pot[src]
        self._apply_potentials(dist, dist[sink])
        self._augment_unit(parent, sink, src)
        return true_cost


class _OfflineSolver:
    """Holds the compressed network for one trace; supports raising the
    initial-placement capacity one unit at a time so the whole OPT(1..k)
    profile costs a single solve plus one reoptimization per extra server."""

    def __init__(self, trace: RequestTrace):
        n = len(trace)
        self.trace = trace
        self.n_requests = n
        self.src = 0
        self.sink = 1
        base_a = 2                     # A_i, requests 1..n-1
        base_b = base_a + max(n - 1, 0)  # B_j, requests 1..n
        base_t = base_b + n            # timeline nodes 1..n
        self._base_b = base_b
        self._base_t = base_t
        self.g = _MinCostFlow(base_t + n if n else 2)
        self.cost_so_far = 0
        self.placed_cap = 0
        self.free_arc = -1
        self.stay_arcs: dict[int, int] = {}
        self.evict_arcs: dict[int, int] = {}
        self.tb_arcs: list[int] = [-1] * (n + 1)
        if n == 0:
            return
        reqs = trace.requests
        # next occurrence of the same node, 1-based; 0 = none
        nxt = [0] * (n + 1)
        last_seen: dict[int, int] = {}
        for j in range(n, 0, -1):
            v = reqs[j - 1]
            nxt[j] = last_seen.get(v, 0)
            last_seen[v] = j
        g = self.g
        self.free_arc = g.add_arc(self.src, self._t(1), 0, 0)
        for i in range(1, n):
            a_i = base_a + (i - 1)
            g.add_arc(self.src, a_i, 1, 0)
            self.evict_arcs[i] = g.add_arc(
                a_i, self._t(i + 1), 1, trace.weights[reqs[i - 1]]
            )
            if nxt[i]:
                self.stay_arcs[i] = g.add_arc(a_i, self._b(nxt[i]), 1, 0)
        for j in range(1, n):
            g.add_arc(self._t(j), self._t(j + 1), n, 0)
        for j in range(1, n + 1):
            self.tb_arcs[j] = g.add_arc(self._t(j), self._b(j), 1, 0)
            g.add_arc(self._b(j), self.sink, 1, 0)

    def _b(self, j: int) -> int:
        return self._base_b + (j - 1)

    def _t(self, j: int) -> int:
        return self._base_t + (j - 1)

    def solve(self, h: int) -> int:
        """Min cost with h initial placements; call once, then raise_cap."""
        if self.n_requests == 0:
            self.placed_cap = h
            return 0
        self.g.cap[self.free_arc] += h - self.placed_cap
        self.placed_cap = h
        for _ in range(self.n_requests):
            pushed = self.g.send_unit(self.src, self.sink)
            assert pushed is not None, "every instance with h >= 1 is feasible"
            self.cost_so_far += pushed
        return self.cost_so_far

    def raise_cap(self) -> int:
        """Allow one more initial placement and reoptimize.

        The extra unit of capacity admits at most one cost-improving cycle
        through the raised arc; a single Dijkstra finds it or proves none
        exists, and the potentials are patched so later raises stay valid.
        """
        self.placed_cap += 1
        if self.n_requests == 0:
            return 0
        g = self.g
        aid = self.free_arc
        g.cap[aid] += 1
        head = g.to[aid]  # first timeline node
        mu = g.cost[aid] + g.pot[self.src] - g.pot[head]
        if mu >= 0:
            return self.cost_so_far
        dist, parent = g._dijkstra(head)
        gain = dist[self.src]
        if gain == _INF or int(gain) + mu >= 0:
            g._apply_potentials(dist, float(-mu))
            return self.cost_so_far
        cycle_cost = g._augment_unit(parent, self.src, head)
        g.cap[aid] -= 1
        g.cap[aid ^ 1] += 1
        self.cost_so_far += cycle_cost + g.cost[aid]
        g._apply_potentials(dist, float(-mu))
        return self.cost_so_far

    def decode(self) -> tuple[int, ...]:
        """Predecessor array from the current flow.

        Units freed onto the timeline are matched to later timeline-served
        requests first-freed-first-reused, which is deterministic and keeps
        every predecessor strictly earlier than the request it serves.
        """
        n = self.n_requests
        pred = [0] * (n + 1)
        if n == 0:
            return tuple(pred)
        g = self.g
        stay_into: dict[int, int] = {}
        for i, aid in self.stay_arcs.items():
            if g.flow_on(aid):
                j = g.to[aid] - self._base_b + 1
                stay_into[j] = i
        freed_at: dict[int, list[int]] = {}
        for i, aid in self.evict_arcs.items():
            if g.flow_on(aid):
                freed_at.setdefault(i + 1, []).append(i)
        pool: deque[int] = deque([0] * g.flow_on(self.free_arc))
        for j in range(1, n + 1):
            for i in sorted(freed_at.get(j, ())):
                pool.append(i)
            if j in stay_into:
                pred[j] = stay_into[j]
            else:
                assert g.flow_on(self.tb_arcs[j]), "every request is served"
                pred[j] = pool.popleft()
        return tuple(pred)


def opt_flow(trace: RequestTrace, k: int, size_cap: int = DEFAULT_FLOW_CAP) -> OptSchedule:
    """Exact minimum cost with k servers, with the serving schedule.

    Raises InstanceSizeError beyond ``size_cap`` requests; use
    ``opt_belady`` (unit weights) or sample the trace instead.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if len(trace) > size_cap:
        raise InstanceSizeError(
            f"trace has {len(trace)} requests > cap {size_cap}; "
            "use opt_belady for unit weights or raise size_cap"
        )
    solver = _OfflineSolver(trace)
    cost = solver.solve(k)
    return OptSchedule(solver.decode(), cost, k)


def opt_flow_profile(
    trace: RequestTrace, k: int, size_cap: int = DEFAULT_FLOW_CAP
) -> list[int]:
    """[OPT(1), OPT(2), ..., OPT(k)] from one incremental flow solve."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if len(trace) > size_cap:
        raise InstanceSizeError(
            f"trace has {len(trace)} requests > cap {size_cap}"
        )
    solver = _OfflineSolver(trace)
    profile = [solver.solve(1)]
    for _ in range(k - 1):
        profile.append(solver.raise_cap())
    return profile


def opt_belady(trace: RequestTrace, k: int) -> int:
    """Farthest-in-future optimum for unit-weight traces (cost = paid moves).

    Equals ``opt_flow(trace, k).cost`` on every unit-weight trace; runs in
    O(N log N) and serves large paging sweeps.
    """
    if not trace.is_paging:
        raise ValueError("opt_belady requires a unit-weight (paging) trace")
    if k < 1:
        raise ValueError("k must be >= 1")
    n = len(trace)
    reqs = trace.requests
    nxt = [n] * n  # position of the next request to the same node, n = never
    last_seen: dict[int, int] = {}
    for i in range(n - 1, -1, -1):
        v = reqs[i]
        nxt[i] = last_seen.get(v, n)
        last_seen[v] = i
    cached: set[int] = set()
    upcoming: dict[int, int] = {}  # node -> its next use position
    heap: list[tuple[int, int]] = []  # (-next use, node), lazily invalidated
    cost = 0
    for i, v in enumerate(reqs):
        if v not in cached:
            if len(cached) >= k:
                while True:
                    negpos, u = heapq.heappop(heap)
                    if u in cached and upcoming[u] == -negpos:
                        break
                cached.remove(u)
                cost += 1
            cached.add(v)
        upcoming[v] = nxt[i]
        heapq.heappush(heap, (-nxt[i], v))
    return cost


def opt_bruteforce(
    trace: RequestTrace,
    k: int,
    max_len: int = BRUTE_FORCE_MAX_LEN,
    max_k: int = BRUTE_FORCE_MAX_K,
) -> int:
    """Exhaustive minimum over all demand schedules (the test oracle).

    Explores every reachable cache-content set with its cheapest cost;
    intended only for tiny instances.
    """
    if len(trace) > max_len or k > max_k:
        raise InstanceSizeError(
            f"brute force capped at {max_len} requests / k <= {max_k}"
        )
    if k < 1:
        raise ValueError("k must be >= 1")
    states: dict[frozenset[int], int] = {frozenset(): 0}
    for v in trace.requests:
        nxt_states: dict[frozenset[int], int] = {}

        def offer(cache: frozenset[int], c: int) -> None:
            cur = nxt_states.get(cache)
            if cur is None or c < cur:
                nxt_states[cache] = c

        for cache, c in states.items():
            if v in cache:
                offer(cache, c)
            elif len(cache) < k:
                offer(cache | {v}, c)
            else:
                for u in cache:
                    offer((cache - {u}) | {v}, c + trace.weights[u])
        states = nxt_states
    return min(states.values()) if states else 0


def opt_single_server(trace: RequestTrace) -> int:
    """OPT(1) in closed form: a lone server must chase every node change,
    paying the weight of the node it leaves."""
    reqs = trace.requests
    return sum(
        trace.weights[reqs[i - 1]]
        for i in range(1, len(reqs))
        if reqs[i] != reqs[i - 1]
    )
