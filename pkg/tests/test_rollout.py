import random

import pytest

from marx.abstraction import Mmdp, ProgressMatrix, build_mmdp
from marx.checker import check_feasible
from marx.envsim import CompletionEvent
from marx.errors import EmptySampleMap
from marx.querylang import QueryItem, TemporalQuery, parse_query
from marx.rollout import RolloutParams, frontier, guided_rollout

from oracles import add_edge, mmdp_edge_counts, random_query


class TestParams:
    def test_defaults(self):
        params = RolloutParams()
        assert (params.rollout_num, params.depth_limit) == (10, 50)

    def test_validation(self):
        with pytest.raises(ValueError):
            RolloutParams(rollout_num=-1)
        with pytest.raises(ValueError):
            RolloutParams(depth_limit=0)


class TestFrontier:
    def test_conforming_state_precedes_initial(self, fig_mmdp):
        query = parse_query("fire:r2,r3 -> obstacle:r2", fig_mmdp)
        order = frontier(fig_mmdp, query)
        assert order == [1, 0]  # U=1 before U=0; violating states excluded

    def test_equal_conformance_orders_by_visits(self):
        mmdp = Mmdp(2, ("a", "b"))
        zero = ProgressMatrix.zero(2, ("a", "b"))
        left = add_edge(mmdp, zero, {CompletionEvent("a", frozenset({1}))},
                        count=2)
        right = add_edge(mmdp, zero, {CompletionEvent("b", frozenset({2}))},
                         count=6)
        query = TemporalQuery(())
        order = frontier(mmdp, query)
        left_id = mmdp._ids_by_mask[left.mask]
        right_id = mmdp._ids_by_mask[right.mask]
        assert mmdp.visit_counts[left_id] < mmdp.visit_counts[right_id]
        assert order.index(left_id) < order.index(right_id)

    def test_empty_query_orders_by_visits_ascending(self, fig_mmdp):
        order = frontier(fig_mmdp, TemporalQuery(()))
        visits = [fig_mmdp.visit_counts[s] for s in order]
        assert visits == sorted(visits)
        assert set(order) == set(fig_mmdp.states)


class TestGuidedRollout:
    def test_zero_rollouts_change_nothing(self, fig_mmdp, sr3_env, sr3_policy):
        query = parse_query("obstacle:r1,r2", fig_mmdp)
        before = fig_mmdp.to_dict()
        guided_rollout(fig_mmdp, sr3_env, sr3_policy, query,
                       RolloutParams(rollout_num=0, seed=1))
        assert fig_mmdp.to_dict() == before

    def test_rollout_flip(self, race_setup):
        config, env, policy = race_setup
        mmdp = build_mmdp(env, policy, episodes=1, max_steps=80, seed=7)
        query = parse_query("beta:r2 -> alpha:r1", mmdp)
        assert not check_feasible(mmdp, query).feasible
        guided_rollout(mmdp, env, policy, query,
                       RolloutParams(rollout_num=10, depth_limit=50, seed=7))
        assert check_feasible(mmdp, query).feasible

    def test_rollout_is_deterministic(self, race_setup):
        config, env, policy = race_setup

        def run():
            mmdp = build_mmdp(env, policy, episodes=1, max_steps=80, seed=7)
            query = parse_query("beta:r2 -> alpha:r1", mmdp)
            guided_rollout(mmdp, env, policy, query,
                           RolloutParams(10, 50, seed=7))
            return mmdp.to_dict()

        assert run() == run()

    def test_counts_grow_by_recount_of_new_samples(self, sr3_env, sr3_policy,
                                                   sr3_env_config):
        mmdp = build_mmdp(sr3_env, sr3_policy, episodes=2, max_steps=50,
                          seed=3)
        before = mmdp_edge_counts(mmdp)
        query = parse_query("victim:r1,r3", mmdp)
        guided_rollout(mmdp, sr3_env, sr3_policy, query,
                       RolloutParams(rollout_num=4, depth_limit=30, seed=5))
        after = mmdp_edge_counts(mmdp)
        grown = {k: after[k] - before.get(k, 0) for k in after}
        assert all(v >= 0 for v in grown.values())
        assert sum(grown.values()) > 0

    def test_work_bound(self, race_setup):
        config, env, policy = race_setup
        mmdp = build_mmdp(env, policy, episodes=1, max_steps=80, seed=7)
        query = parse_query("beta:r2 -> alpha:r1", mmdp)
        visits_before = sum(mmdp.visit_counts.values())
        params = RolloutParams(rollout_num=6, depth_limit=20, seed=7)
        guided_rollout(mmdp, env, policy, query, params)
        new_steps = sum(mmdp.visit_counts.values()) - visits_before
        # each rollout of k steps adds k+1 visits
        assert new_steps <= params.rollout_num * (params.depth_limit + 1)

    def test_invariants_preserved(self, race_setup):
        config, env, policy = race_setup
        mmdp = build_mmdp(env, policy, episodes=2, max_steps=80, seed=9)
        query = parse_query("beta:r2", mmdp)
        guided_rollout(mmdp, env, policy, query, RolloutParams(8, 40, seed=2))
        for (src, action), targets in mmdp.transitions.items():
            total = sum(targets.values())
            for dst, count in targets.items():
                assert mmdp.edge_probability(src, action, dst) == count / total
                assert mmdp.states[dst].progress.covers(
                    mmdp.states[src].progress)
        for sid in mmdp.states:
            assert mmdp.samples[sid].items

    def test_feasibility_is_monotone_under_rollout(self, race_setup):
        config, env, policy = race_setup
        rng = random.Random(17)
        for trial in range(5):
            mmdp = build_mmdp(env, policy, episodes=2, max_steps=80,
                              seed=trial)
            queries = [random_query(rng, mmdp) for _ in range(6)]
            feasible_before = [check_feasible(mmdp, q).feasible
                               for q in queries]
            guided_rollout(mmdp, env, policy, queries[0],
                           RolloutParams(5, 30, seed=trial))
            for query, was in zip(queries, feasible_before):
                if was:
                    assert check_feasible(mmdp, query).feasible

    def test_empty_sample_map_raises(self):
        mmdp = Mmdp(2, ("a", "b"))
        zero = ProgressMatrix.zero(2, ("a", "b"))
        add_edge(mmdp, zero, {CompletionEvent("a", frozenset({1}))})
        mmdp.samples[0].items.clear()
        query = TemporalQuery((QueryItem("b", frozenset({1})),))
        with pytest.raises(EmptySampleMap):
            guided_rollout(mmdp, object(), object(), query,
                           RolloutParams(2, 10, seed=0))