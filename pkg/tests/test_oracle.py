import pytest

from centralized import phase1_centralized
from core import RngHandle
from invariants import check_injection
from matroids import LaminarMatroid, MatroidOracle, UniformMatroid
from message import PreconditionError, RefusalError
from objectives import ObjectiveOracle, dominating_objective, modular_objective
from oracle import (brute_force_opt, check_matroid_axioms, check_submodular_monotone, enumerate_opt,
                    find_transversal, hall_condition)
from synth import random_matroid, random_objective
from verify import axioms_transversal


class EvenSizeMatroid(MatroidOracle):
    'Not a matroid: only the sets of even size count as independent'
    kind = 'even-size'

    def _independent(self, s):
        return len(s) % 2 == 0


class SetFunction(ObjectiveOracle):
    'Objective given by a plain function of a frozenset'

    def __init__(self, n, function):
        super().__init__(n)
        self.function = function

    def _value(self, s):
        return self.function(s)

    def _empty_state(self):
        return frozenset()

    def _extend(self, state, x):
        return state | {x}

    def _gain(self, state, e):
        return self.function(state | {e}) - self.function(state)


def test_brute_force_on_modular():
    result = brute_force_opt(range(3), modular_objective([5, 3, 1]), UniformMatroid(3, 2))
    assert result.opt_set == {0, 1}
    assert result.opt_value == 8


def test_brute_force_guardrail():
    with pytest.raises(RefusalError):
        brute_force_opt(range(21), modular_objective([1.0] * 21), UniformMatroid(21, 2))


@pytest.mark.parametrize('seed', range(30))
def test_pruned_search_agrees_with_enumeration(seed):
    rng = RngHandle(seed, 21)
    n = 1 + rng.integers(8)
    f = random_objective(rng, n)
    m = random_matroid(rng, n)
    assert brute_force_opt(range(n), f, m).opt_value == pytest.approx(enumerate_opt(range(n), f, m).opt_value)


def test_axioms_hold_for_uniform():
    assert check_matroid_axioms(UniformMatroid(6, 3))


def test_axioms_hold_for_laminar():
    m = LaminarMatroid(8, [([0, 1, 2, 3], 2), ([0, 1], 1), ([4, 5, 6, 7], 3), (range(8), 4)])
    assert check_matroid_axioms(m)


def test_broken_matroid_yields_augmentation_counterexample():
    result = check_matroid_axioms(EvenSizeMatroid(4))
    assert not result
    assert result.counterexample == ('augmentation', frozenset(), frozenset({0, 1}))


def test_axiom_check_size_limit():
    with pytest.raises(PreconditionError):
        check_matroid_axioms(UniformMatroid(11, 3))


def test_modular_has_zero_margin():
    result = check_submodular_monotone(modular_objective([1.0, 2.0, 3.0]), range(3))
    assert result.passed
    assert result.margin == 0


def test_dominating_passes_exhaustively():
    f = dominating_objective([(0, 1), (1, 2), (2, 3), (3, 4), (5, 6), (0, 7)], n=8)
    result = check_submodular_monotone(f, range(8))
    assert result.passed
    assert result.details['monotone_margin'] >= 0


def test_max_function_is_submodular():
    weights = [3.0, 1.0, 4.0, 1.5, 5.0]
    f = SetFunction(5, lambda s: max((weights[e] for e in s), default=0.0))
    assert check_submodular_monotone(f, range(5))


def test_square_of_size_is_not_submodular():
    f = SetFunction(4, lambda s: float(len(s) ** 2))
    result = check_submodular_monotone(f, range(4))
    assert not result
    assert result.counterexample[0] == 'submodular'


def test_sampled_check_on_larger_ground_set():
    f = random_objective(RngHandle(3), 14, 'dominating')
    result = check_submodular_monotone(f, range(14), samples=200, rng=RngHandle(4))
    assert result.passed
    assert result.details['chains'] == 200


def test_transversal_examples():
    blocked = find_transversal([{'a'}, {'a'}])
    assert not blocked
    assert blocked.violation == [0, 1]
    assert blocked.union == {'a'}

    found = find_transversal([{'a', 'b'}, {'a'}])
    assert found.mapping == {0: 'b', 1: 'a'}


def test_transversal_of_empty_family():
    assert find_transversal([]).mapping == {}


@pytest.mark.parametrize('seed', range(200))
def test_transversal_matches_hall_condition(seed):
    rng = RngHandle(seed, 22)
    family = [{e for e in range(6) if rng.integers(3) == 0} for _ in range(1 + rng.integers(4))]
    result = find_transversal(family)
    assert bool(result) == hall_condition(family)
    if result:
        assert len(set(result.mapping.values())) == len(family)
        assert all(result.mapping[i] in members for i, members in enumerate(family))
    else:
        assert len(result.violation) > len(result.union)


@pytest.mark.slow
def test_transversal_matches_hall_condition_exhaustively():
    runs, errmsgs = axioms_transversal(RngHandle(0), 1.0)
    assert runs > 800000
    assert errmsgs == []


@pytest.mark.parametrize('seed', range(25))
def test_injection_exists_on_realized_runs(seed):
    rng = RngHandle(seed, 23)
    n = 6 + rng.integers(7)
    f = random_objective(rng, n)
    m = random_matroid(rng, n)
    d = rng.integers(3)
    summary = phase1_centralized(range(n), f, m, d, 0.2, RngHandle(seed, 24))
    assert check_injection(summary, f.fresh(), m, range(n)) == []
