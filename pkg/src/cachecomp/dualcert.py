"""GreedyDual with a live dual certificate.

The offline optimum is the value of an assignment-style linear program
over the trace (see ``offline``).  Its dual has one variable a[i] per
request 0..N-1 and one variable b[j] per request 1..N (request 0 is an
artificial node of weight 0 injected here, never stored in user traces),
with constraints

    b[j] - a[i] <= d(r_i, r_j)   for all 0 <= i < j <= N
    a[i] >= 0

where d(r_i, r_j) is 0 when both requests are to the same node and the
weight of r_i otherwise.  Any feasible (a, b) prices the instance from
below: its value  -h*a[0] - sum(a[1..N-1]) + sum(b[1..N])  never exceeds
the offline cost with h servers.

``run_greedydual_certified`` replays GreedyDual in these dual terms: every
miss uniformly raises {a[i] : i < n, i unserved} and {b[1..n]} just far
enough to pay for some eviction, keeping (a, b) feasible throughout.  Two
invariants are enforced after every step (all arithmetic is exact):

  * feasibility of (a, b), and
  * paid distance <= k/(k-h+1) * value(a, b, h) - sum over served requests
    i of b[i' + 1], where i' is the request at which i's server last moved,

which together certify that the run costs at most k/(k-h+1) times the
offline optimum with h <= k servers, with no additive slack.

Per-server labels relate to the dual by L = w(r_i) - b[i'+1] and
H = w(r_i) - b[i+1] for the request i the server currently satisfies; the
label simulation in ``strategies`` and this one are two views of the same
algorithm and must produce identical event logs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .strategies import (
    FREE,
    HIT,
    MAX_LOWER,
    MIN_LOWER,
    MOVE,
    Event,
    SimulationResult,
)
from .trace import RequestTrace

__all__ = [
    "DualSolution",
    "ServedEntry",
    "StepRecord",
    "CertifiedRun",
    "CertificateError",
    "Violation",
    "run_greedydual_certified",
    "dual_cost",
    "check_feasibility",
    "check_feasibility_fast",
    "check_primal_dual_bound",
    "dual_at_step",
    "export_certificate",
]


class CertificateError(AssertionError):
    """A certified-run invariant failed (never expected on valid inputs)."""


@dataclass(frozen=True)
class DualSolution:
    """Dual vectors for a trace of N user requests.

    ``a`` has length N+1 (indices 0..N; a[N] is vacuous and always 0 in
    generated solutions), ``b`` has length N+1 with index 0 unused.  Only
    shapes are validated here: infeasible vectors are legal values, and
    ``check_feasibility`` reports their violations as data.
    """

    a: tuple[int, ...]
    b: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.a) != len(self.b):
            raise ValueError("a and b must both have length N+1")
        if not self.a:
            raise ValueError("vectors must have length >= 1")

    @property
    def n(self) -> int:
        return len(self.a) - 1


@dataclass(frozen=True)
class ServedEntry:
    """One served request: request ``i`` holds the server ``chain`` (server
    ids count placements, matching the label simulation), which last moved
    at request ``moved``.  Indices are 1-based; the artificial request 0
    appears via StepRecord.zero_mult instead."""

    i: int
    moved: int
    chain: int


@dataclass(frozen=True)
class StepRecord:
    """State after one request: served multiset, cumulative raise, paid
    distance, and the served-set term of the certified bound."""

    zero_mult: int
    served: tuple[ServedEntry, ...]
    raised: int
    distance: int
    served_b_sum: int


@dataclass(frozen=True)
class CertifiedRun:
    result: SimulationResult
    dual: DualSolution
    k: int
    relabel: str
    trace: RequestTrace
    history: tuple[StepRecord, ...]
    relabels: tuple[tuple[int, int], ...]  # (1-based request, raise amount)
    raise_at_start: tuple[int, ...]  # cumulative raise before request j
    leave_raise: dict[int, int]  # request -> cumulative raise when it left S


def run_greedydual_certified(
    trace: RequestTrace,
    k: int,
    relabel: str = MAX_LOWER,
    step_check: bool = True,
) -> CertifiedRun:
    """Run GreedyDual maintaining (a, b) explicitly; see module docstring.

    The event log equals ``strategies.run_greedydual`` on the same inputs.
    With ``step_check`` the feasibility-critical inequalities and the
    certified cost bound are verified after every request.
    """
    if relabel not in (MAX_LOWER, MIN_LOWER):
        raise ValueError(f"unknown relabel policy {relabel!r}")
    if k < 1:
        raise ValueError("k must be >= 1")
    n = len(trace)
    reqs = trace.requests
    weights = trace.weights

    raised = 0  # cumulative uniform raise
    raise_at_start = [0] * (n + 1)  # indexed by 1-based request
    relabels: list[tuple[int, int]] = []
    leave_raise: dict[int, int] = {}
    zero_mult = k
    placements = 0
    served: dict[int, ServedEntry] = {}  # node -> entry
    sum_served_b = 0  # sum over S of current b[moved+1] (zero entries: b[1])
    distance = 0
    events: list[Event] = []
    history: list[StepRecord] = []

    def b_now(j: int) -> int:
        # current b[j]: the raise accumulated by relabels at requests >= j.
        # Callers only pass j <= the request being processed.
        return raised - raise_at_start[j]

    def snapshot() -> None:
        history.append(
            StepRecord(
                zero_mult,
                tuple(sorted(served.values(), key=lambda e: e.i)),
                raised,
                distance,
                sum_served_b,
            )
        )

    for idx in range(1, n + 1):
        raise_at_start[idx] = raised
        v = reqs[idx - 1]
        w = weights[v]
        if v in served:
            old = served[v]
            served[v] = ServedEntry(idx, old.moved, old.chain)
            leave_raise[old.i] = raised  # the superseded request exits S here
            events.append(Event(idx - 1, v, HIT))
            snapshot()
            continue

        # Relabel: the uniform raise this policy allows.
        slack_h = [weights[reqs[e.i - 1]] - b_now(e.i + 1) for e in served.values()]
        slack_l = [
            weights[reqs[e.i - 1]] - b_now(e.moved + 1) for e in served.values()
        ]
        if zero_mult > 0:
            slack_h.append(0 - b_now(1))
            slack_l.append(0 - b_now(1))
        rho = min(slack_h) if relabel == MAX_LOWER else min(slack_l)
        if step_check and rho < 0:
            raise CertificateError(f"negative raise {rho} at request {idx}")
        if step_check and zero_mult > 0 and rho != 0:
            raise CertificateError("raise must be degenerate while placements remain")
        if rho:
            relabels.append((idx, rho))
        raised += rho
        sum_served_b += k * rho

        if step_check:
            for e in served.values():
                if b_now(e.i + 1) > weights[reqs[e.i - 1]]:
                    raise CertificateError(
                        f"b[{e.i + 1}] exceeds served weight after raise at {idx}"
                    )

        # Move: satisfy the request with a server whose raise pays for it.
        if zero_mult > 0:
            zero_mult -= 1
            sum_served_b -= b_now(1)
            if zero_mult == 0:
                leave_raise[0] = raised
            served[v] = ServedEntry(idx, idx, placements)
            placements += 1
            events.append(Event(idx - 1, v, FREE))
        else:
            entries = sorted(served.values(), key=lambda e: e.i)
            eligible = [
                e
                for e in entries
                if weights[reqs[e.i - 1]] - b_now(e.moved + 1) <= 0
            ]
            if not eligible:
                raise CertificateError(f"no eligible eviction at request {idx}")
            if relabel == MAX_LOWER:
                victim = min(
                    eligible,
                    key=lambda e: (weights[reqs[e.i - 1]] - b_now(e.i + 1), e.i),
                )
            else:
                victim = min(
                    eligible,
                    key=lambda e: (
                        weights[reqs[e.i - 1]] - b_now(e.moved + 1),
                        e.moved,
                    ),
                )
            old_node = reqs[victim.i - 1]
            cost = weights[old_node]
            del served[old_node]
            leave_raise[victim.i] = raised
            sum_served_b -= b_now(victim.moved + 1)
            distance += cost
            served[v] = ServedEntry(idx, idx, victim.chain)
            events.append(Event(idx - 1, v, MOVE, evicted=old_node, cost=cost))

        if step_check and distance > k * raised - sum_served_b:
            raise CertificateError(
                f"certified bound violated after request {idx}: "
                f"{distance} > {k}*{raised} - {sum_served_b}"
            )
        snapshot()

    a = [0] * (n + 1)
    for i, left in leave_raise.items():
        a[i] = raised - left
    b = [0] * (n + 1)
    for j in range(1, n + 1):
        b[j] = raised - raise_at_start[j]

    final_nodes: list[int | None] = [None] * k
    for node, e in served.items():
        final_nodes[e.chain] = node
    result = SimulationResult(
        f"greedydual:{relabel}",
        k,
        tuple(events),
        distance,
        tuple(final_nodes),
    )
    return CertifiedRun(
        result=result,
        dual=DualSolution(tuple(a), tuple(b)),
        k=k,
        relabel=relabel,
        trace=trace,
        history=tuple(history),
        relabels=tuple(relabels),
        raise_at_start=tuple(raise_at_start),
        leave_raise=leave_raise,
    )


def dual_cost(dual: DualSolution, h: int) -> int:
    """Value of (a, b) against h offline servers:
    -h*a[0] - sum(a[1..N-1]) + sum(b[1..N])."""
    if h < 1:
        raise ValueError("h must be >= 1")
    n = dual.n
    return -h * dual.a[0] - sum(dual.a[1:n]) + sum(dual.b[1:])


@dataclass(frozen=True)
class Violation:
    """One broken dual constraint; ``i`` is None for an a[j] >= 0 breach or
    (with j == 0) a non-monotone b reported by the fast check."""

    i: int | None
    j: int
    excess: int


def check_feasibility(dual: DualSolution, trace: RequestTrace) -> list[Violation]:
    """Exhaustive O(N^2) constraint check; an empty list means feasible."""
    if dual.n != len(trace):
        raise ValueError("dual solution and trace lengths differ")
    out: list[Violation] = []
    a, b = dual.a, dual.b
    n = dual.n
    for i in range(n + 1):
        if a[i] < 0:
            out.append(Violation(None, i, -a[i]))
    reqs = trace.requests
    weights = trace.weights
    for i in range(n):
        ai = a[i]
        if i == 0:
            for j in range(1, n + 1):
                if b[j] - ai > 0:
                    out.append(Violation(i, j, b[j] - ai))
            continue
        vi = reqs[i - 1]
        wi = weights[vi]
        for j in range(i + 1, n + 1):
            d = 0 if reqs[j - 1] == vi else wi
            if b[j] - ai > d:
                out.append(Violation(i, j, b[j] - ai - d))
    return out


def check_feasibility_fast(
    dual: DualSolution, trace: RequestTrace
) -> list[Violation]:
    """Linear-time feasibility check for monotone-b solutions.

    When b is non-increasing (true of every certified run), each request's
    binding constraints are the next same-node and the next different-node
    requests only, so the quadratic constraint family reduces to O(N)
    checks.  Reports a pseudo-violation at (None, 0) when b is not
    monotone, in which case only ``check_feasibility`` can certify.
    """
    if dual.n != len(trace):
        raise ValueError("dual solution and trace lengths differ")
    a, b = dual.a, dual.b
    n = dual.n
    out: list[Violation] = []
    for j in range(1, n):
        if b[j] < b[j + 1]:
            out.append(Violation(None, 0, b[j + 1] - b[j]))
            return out
    for i in range(n + 1):
        if a[i] < 0:
            out.append(Violation(None, i, -a[i]))
    if n == 0:
        return out
    reqs = trace.requests
    weights = trace.weights
    # next same-node / next different-node occurrence, 1-based; 0 = none
    nso = [0] * (n + 1)
    ndo = [0] * (n + 1)
    last: dict[int, int] = {}
    for i in range(n, 0, -1):
        v = reqs[i - 1]
        nso[i] = last.get(v, 0)
        last[v] = i
    for i in range(n - 1, 0, -1):
        ndo[i] = i + 1 if reqs[i] != reqs[i - 1] else ndo[i + 1]
    if b[1] - a[0] > 0:
        out.append(Violation(0, 1, b[1] - a[0]))
    for i in range(1, n):
        wi = weights[reqs[i - 1]]
        if nso[i] and b[nso[i]] - a[i] > 0:
            out.append(Violation(i, nso[i], b[nso[i]] - a[i]))
        if ndo[i] and b[ndo[i]] - a[i] > wi:
            out.append(Violation(i, ndo[i], b[ndo[i]] - a[i] - wi))
    return out


def check_primal_dual_bound(run: CertifiedRun, h: int) -> bool:
    """True iff at termination the paid distance satisfies

        cost <= k/(k-h+1) * dual_cost(h) - sum over served i of b[i'+1]

    evaluated exactly as (k-h+1)*cost <= k*dual_cost - (k-h+1)*sum(...).
    """
    k = run.k
    if not 1 <= h <= k:
        raise ValueError("need 1 <= h <= k")
    dc = dual_cost(run.dual, h)
    cost = run.result.total_cost
    served_sum = served_b_sum(run, len(run.history) - 1) if run.history else 0
    return (k - h + 1) * cost <= k * dc - (k - h + 1) * served_sum


def served_b_sum(run: CertifiedRun, step: int) -> int:
    """Recompute, from raw records, the served-set term sum over S of
    b[moved+1] as of ``step`` (0-based); cross-checks the running value."""
    rec = run.history[step]
    n = run.dual.n

    def b_at_step(j: int) -> int:
        if j > n or j > step + 1:
            return 0
        return rec.raised - run.raise_at_start[j]

    total = rec.zero_mult * b_at_step(1)
    for e in rec.served:
        total += b_at_step(e.moved + 1)
    return total


def dual_at_step(run: CertifiedRun, step: int) -> DualSolution:
    """The dual solution as it stood after processing request ``step``
    (0-based), with zeros for variables not yet raised."""
    n = run.dual.n
    if not 0 <= step < len(run.history):
        raise ValueError("step out of range")
    rec = run.history[step]
    b = [0] * (n + 1)
    for j in range(1, min(step + 1, n) + 1):
        b[j] = rec.raised - run.raise_at_start[j]
    in_s = {e.i for e in rec.served}
    a = [0] * (n + 1)
    if rec.zero_mult == 0 and 0 in run.leave_raise:
        a[0] = rec.raised - run.leave_raise[0]
    for i in range(1, step + 2):
        if i not in in_s and i in run.leave_raise:
            a[i] = rec.raised - run.leave_raise[i]
    return DualSolution(tuple(a), tuple(b))


def export_certificate(run: CertifiedRun) -> str:
    """Text certificate listing the trace, dual vectors, and per-step
    served multiset with last-move pointers, so third-party tools can
    re-verify feasibility and the cost bound without this library.

    Served entries are rendered ``i:i'`` and the artificial request as
    ``0*multiplicity``.
    """
    trace = run.trace
    n = run.dual.n
    lines = [
        "cachecomp-certificate 1",
        f"k {run.k}",
        f"policy {run.relabel}",
        f"requests {n}",
        f"cost {run.result.total_cost}",
        "labels " + " ".join(trace.labels),
        "weights " + " ".join(str(w) for w in trace.weights),
        "trace " + " ".join(str(v) for v in trace.requests),
        "a " + " ".join(str(x) for x in run.dual.a),
        "b " + " ".join(str(x) for x in run.dual.b[1:]),
    ]
    for t, (rec, ev) in enumerate(zip(run.history, run.result.events), start=1):
        parts = [f"0*{rec.zero_mult}"] if rec.zero_mult else []
        parts += [f"{e.i}:{e.moved}" for e in rec.served]
        lines.append(
            f"step {t} kind={ev.kind} cost={ev.cost} raised={rec.raised} "
            f"dist={rec.distance} S=" + ",".join(parts)
        )
    return "\n".join(lines) + "\n"
