import itertools
import math

import numpy as np
import pytest

from core import RngHandle
from message import DomainError, InvalidConfiguration
from objectives import (dominating_objective, haversine_row, kmedoid_objective, logdet_objective, marginal,
                        modular_objective, movie_objective, value)
from oracle import check_submodular_monotone


def subsets(n):
    for size in range(n + 1):
        yield from (frozenset(s) for s in itertools.combinations(range(n), size))


def test_dominating_value():
    assert value(dominating_objective([(0, 1), (0, 2)]), {0}) == 2


def test_dominating_marginal():
    assert marginal(dominating_objective([(0, 1), (0, 2), (1, 2)]), 1, {0}) == 1


def test_modular_marginal():
    f = modular_objective([3, 2, 1])
    assert marginal(f, 1, {0}) == 2
    assert marginal(f, 0, {0}) == 0
    assert value(f, ()) == 0


def test_modular_rejects_negative_weights():
    with pytest.raises(InvalidConfiguration):
        modular_objective([1, -1])


def test_foreign_element():
    f = modular_objective([1, 2])
    with pytest.raises(DomainError):
        f.value({2})
    with pytest.raises(DomainError):
        f.marginal(5, ())


def test_calls_are_counted():
    f = modular_objective([1, 2, 3])
    f.value({0})
    f.marginal(1, {0})
    f.marginals([0, 1, 2], ())
    assert f.calls == 5
    assert f.fresh().calls == 0


def test_logdet_singletons_and_duplicates():
    f = logdet_objective(np.array([[0.0, 0.0], [3.0, 4.0]]), h=1.0, alpha=10.0)
    assert value(f, ()) == 0
    assert value(f, {1}) == pytest.approx(math.log(11))
    twins = logdet_objective(np.array([[1.0, 1.0], [1.0, 1.0]]), h=1.0, alpha=10.0)
    assert value(twins, {0, 1}) == pytest.approx(math.log(21))
    assert marginal(twins, 1, {0}) == pytest.approx(math.log(21) - math.log(11))


def test_logdet_default_bandwidth_is_distance_std():
    points = RngHandle(3).generator.random((6, 2))
    f = logdet_objective(points)
    distances = [np.linalg.norm(p - q) for p, q in itertools.combinations(points, 2)]
    assert f.h == pytest.approx(np.std(distances))


def test_logdet_construction_errors():
    with pytest.raises(InvalidConfiguration):
        logdet_objective(np.array([[0.0, np.inf]]))
    with pytest.raises(InvalidConfiguration):
        logdet_objective(np.zeros((2, 2)), h=1.0, alpha=0.0)


def test_kmedoid_matches_direct_loss():
    points = RngHandle(11).generator.random((6, 2))
    f = kmedoid_objective(points, e0=0)
    distance = np.linalg.norm(points[:, None, :] - points[None, :, :], axis=2)

    def loss(s):
        return float(np.mean(np.min(distance[sorted(s)], axis=0)))

    assert value(f, ()) == 0
    assert value(f, {0}) == pytest.approx(0.0, abs=1e-12)
    for s in subsets(6):
        if s:
            assert value(f, s) == pytest.approx(loss({0}) - loss(s | {0}))


def test_kmedoid_marginals_match_differences():
    points = RngHandle(12).generator.random((5, 2))
    f = kmedoid_objective(points)
    reference = f.fresh()
    for s in subsets(5):
        if len(s) > 3:
            continue
        for e in range(5):
            expected = reference.value(s | {e}) - reference.value(s)
            assert f.marginal(e, s) == pytest.approx(expected, abs=1e-12)


def test_haversine_distances():
    rome = np.array([41.9028, 12.4964])
    milan = np.array([[45.4642, 9.1900]])
    assert haversine_row(rome, milan)[0] == pytest.approx(477, abs=5)
    f = kmedoid_objective(np.array([[41.9028, 12.4964], [45.4642, 9.1900], [40.8518, 14.2681]]),
                          metric='haversine')
    assert value(f, {1}) > 0


def test_movie_alpha_zero_is_modular():
    rng = RngHandle(5)
    user = rng.generator.standard_normal(3)
    movies = rng.generator.standard_normal((4, 3))
    f = movie_objective(user, movies, 0.0)
    linear = np.maximum(movies @ user, 0.0)
    assert value(f, {0, 2}) == pytest.approx(linear[0] + linear[2])


def test_movie_single_facility():
    f = movie_objective(np.array([0.0, 1.0]), np.array([[1.0, 0.0]]), 1.0)
    assert value(f, {0}) == pytest.approx(1.0)


def test_movie_random_instance_is_monotone_submodular():
    rng = RngHandle(6)
    f = movie_objective(np.abs(rng.generator.standard_normal(4)),
                        np.abs(rng.generator.standard_normal((5, 4))), 0.95)
    assert check_submodular_monotone(f, range(5))
    assert f.check_instance() == []


def test_movie_negative_similarity_warning():
    f = movie_objective(np.array([1.0, 0.0]), np.array([[1.0, 0.0], [-1.0, 0.0]]), 0.5)
    warnings = f.check_instance()
    assert warnings and warnings[0].message_type == 'Instance Warning'


def test_movie_dimension_mismatch():
    with pytest.raises(InvalidConfiguration):
        movie_objective(np.zeros(3), np.zeros((2, 2)), 0.5)


@pytest.mark.parametrize('kind', ['modular', 'dominating', 'kmedoid', 'logdet'])
def test_cached_marginals_follow_a_random_walk(kind):
    rng = RngHandle(21)
    n = 10
    points = rng.generator.random((n, 2))
    f = {
        'modular': lambda: modular_objective(rng.generator.integers(0, 5, size=n).astype(float)),
        'dominating': lambda: dominating_objective([(u, (u * 3 + 1) % n) for u in range(n)], n=n),
        'kmedoid': lambda: kmedoid_objective(points),
        'logdet': lambda: logdet_objective(points),
    }[kind]()
    reference = f.fresh()
    s = set()
    for step in range(300):
        if step % 7 == 0:
            s = set()
        s.add(rng.integers(n))
        e = rng.integers(n)
        expected = reference.value(s | {e}) - reference.value(s)
        assert f.marginal(e, s) == pytest.approx(expected, rel=1e-9, abs=1e-10)
