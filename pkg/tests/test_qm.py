import random

import pytest

from marx.abstraction import ProgressMatrix
from marx.errors import TooManyVariables
from marx.explainer import Implicant, minimal_dnf, prime_implicants

from oracles import check_cover, oracle_min_cover_size

TASKS = ("fire", "obstacle", "victim")


def literal_names(term, tasks=TASKS, num_agents=3):
    roman = {1: "I", 2: "II", 3: "III", 4: "IV", 5: "V"}
    return {
        f"{tasks[v % len(tasks)]}_{roman[v // len(tasks) + 1]}"
        for v in term.positive_vars()}


class TestKnownCases:
    def test_single_state_yields_its_full_minterm(self):
        # the state where fire was fought by II+III and the obstacle removed
        # by I+II: one ON assignment over 9 variables
        progress = ProgressMatrix.from_bitstring("010110100", 3, TASKS)
        terms = minimal_dnf({progress.mask}, 9)
        assert len(terms) == 1
        (term,) = terms
        assert len(term.literals()) == 9  # every variable bound
        assert literal_names(term) == {
            "fire_II", "fire_III", "obstacle_I", "obstacle_II"}

    def test_full_on_set_is_constant_true(self):
        terms = minimal_dnf(set(range(16)), 4)
        assert len(terms) == 1
        assert terms[0].literals() == []
        assert terms[0].encoded() == "----"

    def test_single_variable_function(self):
        # f(x0..x2) = x0: ON = all assignments with bit0 set
        on = {m for m in range(8) if m & 1}
        terms = minimal_dnf(on, 3)
        assert [t.encoded() for t in terms] == ["1--"]

    def test_xor_needs_two_minterms(self):
        terms = minimal_dnf({0b01, 0b10}, 2)
        assert sorted(t.encoded() for t in terms) == ["01", "10"]

    def test_var_cap_raises(self):
        with pytest.raises(TooManyVariables):
            minimal_dnf({0}, 30)

    def test_var_cap_is_configurable(self):
        terms = minimal_dnf({0}, 30, var_cap=30)
        assert len(terms) == 1

    def test_empty_on_set_rejected(self):
        with pytest.raises(ValueError):
            minimal_dnf(set(), 4)

    def test_accepts_boolean_vectors(self):
        terms = minimal_dnf({(True, False, True)}, 3)
        assert terms[0].encoded() == "101"

    def test_encoded_round_trip(self):
        term = Implicant.from_encoded("1-0")
        assert term.encoded() == "1-0"
        assert term.covers(0b001) and term.covers(0b011)
        assert not term.covers(0b101)


def random_on_set(rng, num_vars):
    """Random ON-set; above 8 variables dense uniform functions make exact
    covering intractable (the method is exponential), so larger instances
    are sampled as unions of random subcubes plus noise minterms, which is
    also the shape progress-matrix target sets actually have."""
    universe = 1 << num_vars
    if num_vars <= 6:
        density = rng.uniform(0.1, 0.9)
        on = {m for m in range(universe) if rng.random() < density}
    elif num_vars <= 8:
        density = rng.uniform(0.05, 0.4)
        on = {m for m in range(universe) if rng.random() < density}
    else:
        on = set()
        for _ in range(rng.randint(2, 6)):
            care = bits = 0
            for v in range(num_vars):
                if rng.random() < 0.45:
                    care |= 1 << v
                    bits |= (rng.random() < 0.5) << v
            on |= {m for m in range(universe) if (m & care) == bits}
        for _ in range(rng.randint(0, 15)):
            on.add(rng.randrange(universe))
    return on or {rng.randrange(universe)}


class TestRandomizedCover:
    def test_truth_table_properties(self):
        rng = random.Random(77)
        for _ in range(200):
            num_vars = rng.randint(3, 10)
            on = random_on_set(rng, num_vars)
            terms = minimal_dnf(on, num_vars)
            check_cover(terms, on, num_vars)

    def test_minimum_cardinality_matches_exhaustive_search(self):
        rng = random.Random(78)
        for _ in range(120):
            num_vars = rng.randint(3, 6)
            universe = 1 << num_vars
            density = rng.uniform(0.1, 0.9)
            on = {m for m in range(universe) if rng.random() < density}
            if not on:
                on = {rng.randrange(universe)}
            terms = minimal_dnf(on, num_vars)
            assert len(terms) == oracle_min_cover_size(on, num_vars)

    def test_output_is_deterministic(self):
        rng = random.Random(79)
        for _ in range(40):
            num_vars = rng.randint(3, 8)
            on = random_on_set(rng, num_vars)
            a = [t.encoded() for t in minimal_dnf(on, num_vars)]
            b = [t.encoded() for t in minimal_dnf(set(on), num_vars)]
            assert a == b

    def test_lexicographic_choice_among_minimum_covers(self):
        rng = random.Random(81)
        from itertools import combinations
        for _ in range(60):
            num_vars = rng.randint(3, 5)
            on = random_on_set(rng, num_vars)
            terms = minimal_dnf(on, num_vars)
            primes = prime_implicants(on, num_vars)
            k = len(terms)
            best = None
            for combo in combinations(primes, k):
                covered = set()
                for p in combo:
                    covered |= {m for m in on if p.covers(m)}
                if covered == on:
                    key = sorted(p.encoded() for p in combo)
                    if best is None or key < best:
                        best = key
            assert sorted(t.encoded() for t in terms) == best

    def test_primes_are_supersets_of_cover(self):
        rng = random.Random(80)
        for _ in range(40):
            num_vars = rng.randint(3, 7)
            on = {m for m in range(1 << num_vars) if rng.random() < 0.5}
            if not on:
                continue
            primes = {p.encoded() for p in prime_implicants(on, num_vars)}
            cover = {t.encoded() for t in minimal_dnf(on, num_vars)}
            assert cover <= primes
