import math

import numpy as np
import pytest

from centralized import (bucket_threshold, ceil_ratio, phase1_centralized, threshold_bound, threshold_floor,
                         threshold_set)
from core import RngHandle
from invariants import check_centralized_trace, check_summary_size
from matroids import UniformMatroid
from message import InvalidConfiguration
from objectives import modular_objective
from solvers import InnerSolver, phase2
from synth import random_objective, synth_instance


def test_ceil_ratio_is_exact():
    assert ceil_ratio(3, 0.3) == 10
    assert ceil_ratio(2, 0.5) == 4
    assert bucket_threshold(0, 0.5) == 1
    assert bucket_threshold(1, 0.99) == 2


def test_threshold_floor():
    assert threshold_floor(1.0, 0.5) == 0
    assert threshold_floor(2.25, 0.5) == 2
    assert threshold_floor(2.2, 0.5) == 1
    assert threshold_floor(0.5, 0.5) == -2


def test_threshold_set_ladder():
    taus = threshold_set(16, 4, 0.5).taus
    assert taus == pytest.approx([11.390625, 7.59375, 5.0625, 3.375, 2.25, 1.5])


def test_threshold_set_empty_for_zero_delta():
    assert len(threshold_set(0, 3, 0.5)) == 0


def test_threshold_set_takes_negative_exponents():
    ladder = threshold_set(1, 1, 0.5)
    assert ladder.exponents == (0, -1, -2)
    assert ladder.taus == pytest.approx([1.0, 1 / 1.5, 1 / 2.25])


@pytest.mark.parametrize('k', [1, 3, 10])
@pytest.mark.parametrize('eps', [0.3, 0.5, 0.99])
def test_threshold_set_respects_bound(k, eps):
    ladder = threshold_set(7.3, k, eps)
    assert len(ladder) <= threshold_bound(k, eps)
    for tau in ladder:
        assert eps * 7.3 / ((1 + eps) * k) < tau <= 7.3


def test_modular_run_finds_the_optimum():
    f = modular_objective([5, 4, 3, 2, 1])
    for seed in range(5):
        summary = phase1_centralized(range(5), f, UniformMatroid(5, 2), 0, 0.5, RngHandle(seed))
        assert summary.a_set == {0, 1}
        assert f.value(summary.a_set) == 9


def test_summary_size_on_small_coverage():
    rng = RngHandle(8)
    f = random_objective(rng, 10, 'dominating')
    m = UniformMatroid(10, 3)
    for seed in range(20):
        summary = phase1_centralized(range(10), f, m, 2, 0.5, RngHandle(seed))
        assert summary.bucket_threshold == 4
        assert summary.size <= 2 + m.rank() + len(summary.thresholds) * 3
        assert check_summary_size(summary, m.rank()) == []
        assert check_centralized_trace(summary, f.fresh(), m) == []


def test_withheld_are_the_top_singletons():
    f = modular_objective([1, 7, 7, 3, 9])
    summary = phase1_centralized(range(5), f, UniformMatroid(5, 2), 2, 0.5, RngHandle(0))
    # ties go to the smaller id
    assert summary.withheld == {4, 1}
    assert summary.thresholds.delta == 7
    assert summary.withheld <= summary.b


def test_everything_withheld():
    f = modular_objective([1, 2])
    summary = phase1_centralized(range(2), f, UniformMatroid(2, 1), 2, 0.5, RngHandle(0))
    assert summary.a == () and summary.b == {0, 1}
    assert len(summary.thresholds) == 0


def test_trace_and_export():
    f = modular_objective([4, 3, 2, 1])
    summary = phase1_centralized(range(4), f, UniformMatroid(4, 2), 1, 0.5, RngHandle(3))
    kinds = {event.kind for event in summary.trace}
    assert 'withhold' in kinds
    exported = summary.to_dict()
    assert [x['id'] for x in exported['A']] == [x.element for x in summary.a]
    assert exported['B'] == sorted(summary.b)
    assert exported['params']['bucket_threshold'] == 2
    assert summary.peak_memory == 4


@pytest.mark.parametrize('d, eps', [(6, 0.5), (-1, 0.5), (1, 0.0), (1, 1.0)])
def test_configuration_errors(d, eps):
    with pytest.raises(InvalidConfiguration):
        phase1_centralized(range(5), modular_objective([1] * 5), UniformMatroid(5, 2), d, eps, RngHandle(0))


def test_lower_bound_instance_keeps_k_after_deletions():
    k, d, eps = 3, 2, 0.3
    data = synth_instance('modular-lowerbound', {'k': k, 'd': d, 'n': 20}, seed=4)
    f = modular_objective(data.weights)
    m = UniformMatroid(data.n, k)
    values = []
    for seed in range(200):
        summary = phase1_centralized(range(data.n), f, m, d, eps, RngHandle(seed))
        support = sorted(e for e in summary.a_set | summary.b if data.weights[e] > 0)
        deleted = set(support[:d])
        values.append(phase2(summary, deleted, f, m, InnerSolver()).value)
    stderr = np.std(values, ddof=1) / math.sqrt(len(values))
    assert np.mean(values) + 3 * stderr >= (1 - eps) * k
