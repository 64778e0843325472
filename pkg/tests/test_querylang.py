import random

import pytest

from marx.errors import ParseError, UnknownAgent, UnknownTask
from marx.querylang import (QueryItem, TemporalQuery, parse_query,
                            render_query, to_pctl, validate)


class TestParse:
    def test_two_item_query(self, sr3_env_config):
        query = parse_query("obstacle:r1,r2 -> fire:r2", sr3_env_config)
        assert query.items == (
            QueryItem("obstacle", frozenset({1, 2})),
            QueryItem("fire", frozenset({2})))

    def test_empty_text_is_the_empty_query(self, sr3_env_config):
        assert parse_query("", sr3_env_config) == TemporalQuery(())
        assert parse_query("   ", sr3_env_config) == TemporalQuery(())

    def test_out_of_range_agent(self, sr3_env_config):
        with pytest.raises(UnknownAgent):
            parse_query("fire:r9", sr3_env_config)

    def test_unknown_task(self, sr3_env_config):
        with pytest.raises(UnknownTask):
            parse_query("flood:r1", sr3_env_config)

    def test_whitespace_insensitive(self, sr3_env_config):
        a = parse_query("fire:r2,r3->victim:r1,r3", sr3_env_config)
        b = parse_query("  fire : r2 , r3  ->  victim : r1 , r3 ",
                        sr3_env_config)
        assert a == b

    def test_syntax_error_carries_offset(self, sr3_env_config):
        with pytest.raises(ParseError) as err:
            parse_query("fire:r1,fire:r2", sr3_env_config)
        assert err.value.offset == 8

    def test_missing_colon(self, sr3_env_config):
        with pytest.raises(ParseError):
            parse_query("fire r1", sr3_env_config)

    def test_trailing_arrow(self, sr3_env_config):
        with pytest.raises(ParseError):
            parse_query("fire:r1 ->", sr3_env_config)


class TestValidate:
    def test_duplicate_task(self, sr3_env_config):
        query = TemporalQuery((QueryItem("fire", frozenset({2})),
                               QueryItem("fire", frozenset({3}))))
        violations = validate(query, sr3_env_config)
        assert [v.kind for v in violations] == ["DuplicateTask"]

    def test_valid_query_has_no_violations(self, sr3_env_config):
        query = TemporalQuery((QueryItem("fire", frozenset({2, 3})),
                               QueryItem("victim", frozenset({1, 3}))))
        assert validate(query, sr3_env_config) == []

    def test_empty_coalition(self, sr3_env_config):
        query = TemporalQuery((QueryItem("fire", frozenset()),))
        assert [v.kind for v in validate(query, sr3_env_config)] == [
            "EmptyCoalition"]

    def test_out_of_range_agent_reported(self, sr3_env_config):
        query = TemporalQuery((QueryItem("fire", frozenset({7})),))
        assert "UnknownAgent" in [v.kind for v in validate(query, sr3_env_config)]


class TestRendering:
    def test_formula_for_two_items(self):
        query = TemporalQuery((QueryItem("fire", frozenset({2, 3})),
                               QueryItem("victim", frozenset({1, 3}))))
        assert to_pctl(query) == (
            "P>0 [ F (fire_robotII_robotIII & F (victim_robotI_robotIII)) ]")

    def test_formula_for_empty_query(self):
        assert to_pctl(TemporalQuery(())) == "P>0 [ true ]"

    def test_formula_for_single_item(self):
        query = TemporalQuery((QueryItem("obstacle", frozenset({1, 2})),))
        assert to_pctl(query) == "P>0 [ F (obstacle_robotI_robotII) ]"

    def test_nesting_depth_equals_item_count(self, sr3_env_config):
        rng = random.Random(3)
        tasks = list(sr3_env_config.task_names)
        for _ in range(50):
            rng.shuffle(tasks)
            n = rng.randint(0, 3)
            items = tuple(
                QueryItem(tasks[k],
                          frozenset(rng.sample(range(1, 4), rng.randint(1, 3))))
                for k in range(n))
            rendered = to_pctl(TemporalQuery(items))
            assert rendered.count("F (") == n

    def test_parse_render_round_trip(self, sr3_env_config):
        rng = random.Random(4)
        tasks = list(sr3_env_config.task_names)
        for _ in range(200):
            rng.shuffle(tasks)
            n = rng.randint(0, 3)
            items = tuple(
                QueryItem(tasks[k],
                          frozenset(rng.sample(range(1, 4), rng.randint(1, 3))))
                for k in range(n))
            query = TemporalQuery(items)
            assert parse_query(render_query(query), sr3_env_config) == query
