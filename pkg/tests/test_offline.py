import random

import pytest

from cachecomp.offline import (
    InstanceSizeError,
    opt_belady,
    opt_bruteforce,
    opt_flow,
    opt_flow_profile,
    opt_single_server,
)
from cachecomp.trace import RequestTrace, generate_cyclic, generate_random, parse_trace

ABCA = parse_trace("a\nb\nc\na\n")


class TestOptFlow:
    def test_abca_k2(self):
        assert opt_flow(ABCA, 2).cost == 1

    def test_fits_in_cache_costs_zero(self):
        t = parse_trace("a\nb\na\nb\n")
        for k in (2, 3, 5):
            assert opt_flow(t, k).cost == 0

    def test_weighted_keeps_heavy_node(self):
        t = parse_trace("a 5\nb\nc\n")
        assert opt_flow(t, 2).cost == 1

    def test_empty_trace(self):
        t = parse_trace("")
        assert opt_flow(t, 3).cost == 0

    def test_size_cap(self):
        t = generate_random(3, 30, 1, seed=0)
        with pytest.raises(InstanceSizeError):
            opt_flow(t, 2, size_cap=10)

    def test_k_validation(self):
        with pytest.raises(ValueError):
            opt_flow(ABCA, 0)

    def test_schedule_is_well_formed(self):
        rng = random.Random(1)
        for trial in range(40):
            t = generate_random(rng.choice([2, 3, 5]), rng.randint(1, 40), 6, seed=trial)
            k = rng.randint(1, 4)
            sched = opt_flow(t, k)
            used = set()
            zero_uses = 0
            cost = 0
            for j in range(1, len(t) + 1):
                i = sched.predecessor[j]
                assert 0 <= i < j
                if i == 0:
                    zero_uses += 1
                else:
                    assert i not in used
                    used.add(i)
                    vi, vj = t.requests[i - 1], t.requests[j - 1]
                    cost += 0 if vi == vj else t.weights[vi]
            assert zero_uses <= k
            assert cost == sched.cost


class TestOracleTriangle:
    def test_flow_equals_bruteforce_small(self):
        rng = random.Random(2024)
        for trial in range(120):
            nodes = rng.randint(1, 4)
            length = rng.randint(1, 10)
            weights = tuple(rng.choice([1, 5]) for _ in range(nodes))
            reqs = tuple(rng.randrange(nodes) for _ in range(length))
            t = RequestTrace(reqs, weights, tuple(f"n{i}" for i in range(nodes)))
            k = rng.randint(1, 3)
            assert opt_flow(t, k).cost == opt_bruteforce(t, k)

    def test_belady_equals_flow_unit_weights(self):
        rng = random.Random(7)
        for trial in range(40):
            t = generate_random(rng.choice([3, 5, 10]), rng.randint(5, 120), 1, seed=trial)
            k = rng.randint(1, 12)
            assert opt_belady(t, k) == opt_flow(t, k).cost

    def test_belady_on_cyclic(self):
        t = generate_cyclic(5, 60)
        for k in range(1, 7):
            assert opt_belady(t, k) == opt_flow(t, k).cost


class TestBelady:
    def test_abca(self):
        assert opt_belady(ABCA, 2) == 1

    def test_rejects_weighted(self):
        with pytest.raises(ValueError):
            opt_belady(parse_trace("a 2\n"), 1)

    def test_all_nodes_fit(self):
        t = generate_random(4, 50, 1, seed=5)
        assert opt_belady(t, 4) == 0

    def test_single_server_closed_form(self):
        for seed in range(6):
            t = generate_random(5, 60, 8, seed=seed)
            assert opt_single_server(t) == opt_flow(t, 1).cost


class TestBruteForce:
    def test_abca(self):
        assert opt_bruteforce(ABCA, 2) == 1

    def test_single_node(self):
        assert opt_bruteforce(parse_trace("a\na\n"), 1) == 0

    def test_alternation_single_server(self):
        t = parse_trace("a\nb\na\nb\na\nb\n")
        assert opt_bruteforce(t, 1) == 5

    def test_caps(self):
        t = generate_random(3, 20, 1, seed=0)
        with pytest.raises(InstanceSizeError):
            opt_bruteforce(t, 2)
        with pytest.raises(InstanceSizeError):
            opt_bruteforce(parse_trace("a\n"), 5)


class TestProfiles:
    def test_profile_matches_independent_solves(self):
        rng = random.Random(3)
        for trial in range(15):
            t = generate_random(rng.choice([3, 5, 8]), rng.randint(5, 60), 9, seed=trial)
            kmax = 6
            profile = opt_flow_profile(t, kmax)
            assert profile == [opt_flow(t, h).cost for h in range(1, kmax + 1)]

    def test_profile_non_increasing(self):
        t = generate_random(10, 150, 4, seed=11)
        profile = opt_flow_profile(t, 12)
        assert profile == sorted(profile, reverse=True)

    def test_profile_head_is_single_server(self):
        t = generate_random(6, 80, 5, seed=13)
        assert opt_flow_profile(t, 3)[0] == opt_single_server(t)
