import random
from collections import deque

from marx.checker import (BOTTOM, annotate, check_feasible, monitor_step)
from marx.envsim import CompletionEvent
from marx.querylang import QueryItem, TemporalQuery, parse_query

from oracles import oracle_feasible, path_matches, random_mmdp, random_query


def ev(task, *agents):
    return CompletionEvent(task, frozenset(agents))


def q(*pairs):
    return TemporalQuery(tuple(QueryItem(t, frozenset(c)) for t, c in pairs))


class TestMonitorStep:
    QUERY = q(("fire", {2, 3}), ("obstacle", {2}))

    def test_wrong_coalition_violates(self):
        events = frozenset({ev("obstacle", 1, 2)})
        assert monitor_step(1, events, self.QUERY) is BOTTOM

    def test_matching_event_advances(self):
        events = frozenset({ev("fire", 2, 3)})
        assert monitor_step(0, events, self.QUERY) == 1

    def test_no_events_is_neutral(self):
        assert monitor_step(0, frozenset(), self.QUERY) == 0

    def test_double_advance_on_simultaneous_events(self):
        query = q(("fire", {2, 3}), ("obstacle", {1, 2}))
        events = frozenset({ev("fire", 2, 3), ev("obstacle", 1, 2)})
        assert monitor_step(0, events, query) == 2

    def test_later_task_completing_early_violates(self):
        events = frozenset({ev("obstacle", 2)})
        assert monitor_step(0, events, self.QUERY) is BOTTOM

    def test_bottom_is_absorbing(self):
        events = frozenset({ev("fire", 2, 3)})
        assert monitor_step(BOTTOM, events, self.QUERY) is BOTTOM

    def test_unqueried_tasks_are_neutral(self):
        events = frozenset({ev("victim", 1, 3)})
        assert monitor_step(0, events, self.QUERY) == 0

    def test_double_advance_agrees_with_step_by_step_oracle(self):
        # cross-check simultaneous advancement against a nondeterministic
        # monitor that tries every advance prefix
        rng = random.Random(0)
        tasks = ("a", "b", "c")
        for _ in range(300):
            items = []
            used = set()
            for _k in range(rng.randint(1, 3)):
                t = rng.choice(tasks)
                if t in used:
                    continue
                used.add(t)
                items.append(QueryItem(
                    t, frozenset(rng.sample(range(1, 4), rng.randint(1, 3)))))
            query = TemporalQuery(tuple(items))
            events = frozenset(
                ev(t, *rng.sample(range(1, 4), rng.randint(1, 3)))
                for t in rng.sample(tasks, rng.randint(0, 3)))
            j = rng.randint(0, len(items))
            got = monitor_step(j, events, query)

            # oracle: try all advance counts, keep the best non-violated
            best = BOTTOM
            k_max = 0
            while (j + k_max < len(items)
                   and ev(items[j + k_max].task,
                          *items[j + k_max].coalition) in events):
                k_max += 1
            for k in range(k_max + 1):
                level = j + k
                pending = {items[m].task: m for m in range(level, len(items))}
                violated = any(
                    e.task in pending and (
                        pending[e.task] > level
                        or e.coalition != items[level].coalition)
                    for e in events)
                if not violated and (best is BOTTOM or level > best):
                    best = level
            assert got == best


class TestCheckFeasible:
    def test_rescue_query_feasible_with_chain_witness(self, fig_mmdp):
        query = parse_query("fire:r2,r3 -> victim:r1,r3", fig_mmdp)
        result = check_feasible(fig_mmdp, query)
        assert result.feasible
        assert [(e.src, e.dst) for e in result.witness] == [(0, 1), (1, 2), (2, 3)]

    def test_misordered_query_infeasible(self, fig_mmdp):
        query = parse_query("obstacle:r1,r2 -> victim:r1 -> fire:r2,r3",
                            fig_mmdp)
        assert not check_feasible(fig_mmdp, query).feasible

    def test_empty_query_trivially_feasible(self, fig_mmdp):
        result = check_feasible(fig_mmdp, TemporalQuery(()))
        assert result.feasible and result.witness == []

    def test_witness_replays_to_full_conformance(self, fig_mmdp):
        query = parse_query("fire:r2,r3 -> victim:r1,r3", fig_mmdp)
        witness = check_feasible(fig_mmdp, query).witness
        levels = [0]
        for edge in witness:
            levels.append(monitor_step(levels[-1], edge.events, query))
        assert levels[-1] == len(query.items)
        assert all(b is not BOTTOM and b >= a for a, b in zip(levels, levels[1:]))


class TestAnnotate:
    def test_first_item_failure_gives_zero(self, fig_mmdp):
        query = parse_query("obstacle:r1,r2 -> victim:r1 -> fire:r2,r3",
                            fig_mmdp)
        umax, _ = annotate(fig_mmdp, query)
        assert umax == 0

    def test_reordered_query_reaches_two(self, fig_mmdp):
        query = parse_query("fire:r2,r3 -> obstacle:r1,r2 -> victim:r1",
                            fig_mmdp)
        umax, _ = annotate(fig_mmdp, query)
        assert umax == 2

    def test_empty_query_annotates_zero(self, fig_mmdp):
        umax, node_u = annotate(fig_mmdp, TemporalQuery(()))
        assert umax == 0
        assert set(node_u) == set(fig_mmdp.states)

    def test_violating_states_are_excluded(self, fig_mmdp):
        query = parse_query("fire:r2,r3 -> obstacle:r2", fig_mmdp)
        _umax, node_u = annotate(fig_mmdp, query)
        assert node_u == {0: 0, 1: 1}


def greedy_product_feasible(mmdp, query) -> bool:
    """Reachability with the deterministic monitor only."""
    goal = len(query.items)
    start = (mmdp.initial, 0)
    seen = {start}
    queue = deque([start])
    while queue:
        sid, level = queue.popleft()
        if level == goal:
            return True
        for dst in mmdp.successors(sid):
            if dst == sid:
                continue
            nxt_level = monitor_step(level, mmdp.edge_events(sid, dst), query)
            if nxt_level is BOTTOM:
                continue
            node = (dst, nxt_level)
            if node not in seen:
                seen.add(node)
                queue.append(node)
    return goal == 0


class TestOracleAgreement:
    def test_check_feasible_matches_enumeration(self):
        rng = random.Random(202)
        for _ in range(300):
            mmdp = random_mmdp(rng)
            query = random_query(rng, mmdp)
            got = check_feasible(mmdp, query)
            expected = oracle_feasible(mmdp, query)
            assert got.feasible == expected
            if got.feasible:
                assert path_matches([e.events for e in got.witness],
                                    query.items)

    def test_greedy_and_nondeterministic_products_agree(self):
        rng = random.Random(203)
        for _ in range(300):
            mmdp = random_mmdp(rng)
            query = random_query(rng, mmdp)
            assert (check_feasible(mmdp, query).feasible
                    == greedy_product_feasible(mmdp, query))

    def test_feasible_query_annotates_to_full_length(self):
        rng = random.Random(204)
        checked = 0
        for _ in range(200):
            mmdp = random_mmdp(rng)
            query = random_query(rng, mmdp)
            if check_feasible(mmdp, query).feasible:
                umax, _ = annotate(mmdp, query)
                assert umax == len(query.items)
                checked += 1
        assert checked > 20
