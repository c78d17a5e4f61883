from collections import Counter

import pytest
from scipy.stats import chisquare

from core import PRNG_ALGORITHM, GroundSet, RngHandle, Trace, uniform_pick
from message import DomainError, PreconditionError


def test_ground_set_membership_and_labels():
    v = GroundSet(3, ['a', 'b', 'c'])
    assert list(v) == [0, 1, 2]
    assert 2 in v and 3 not in v and -1 not in v
    assert v.label(1) == 'b'
    assert v.id_of('c') == 2
    with pytest.raises(DomainError):
        v.id_of('z')
    with pytest.raises(DomainError):
        v.check([0, 5])


def test_ground_set_rejects_bad_sizes():
    with pytest.raises(DomainError):
        GroundSet(-1)
    with pytest.raises(DomainError):
        GroundSet(2, ['only-one'])


def test_uniform_pick_singleton_is_forced():
    assert uniform_pick(RngHandle(5), {7}) == 7


def test_uniform_pick_empty_pool():
    with pytest.raises(PreconditionError):
        uniform_pick(RngHandle(0), set())


def test_uniform_pick_is_deterministic():
    first = [uniform_pick(RngHandle(42, 3), {1, 2, 3, 4}) for _ in range(5)]
    second = [uniform_pick(RngHandle(42, 3), {4, 3, 2, 1}) for _ in range(5)]
    assert first == second


@pytest.mark.parametrize('p', [2, 4, 7, 16, 64])
def test_uniform_pick_frequencies(p):
    rng = RngHandle(2024, p)
    pool = set(range(100, 100 + p))
    counts = Counter(uniform_pick(rng, pool) for _ in range(10000 * p))
    assert set(counts) == pool
    assert chisquare([counts[e] for e in sorted(pool)]).pvalue > 0.001


def test_streams_are_independent():
    a = RngHandle(9, 0).permutation(list(range(20)))
    b = RngHandle(9, 1).permutation(list(range(20)))
    assert a != b
    assert RngHandle(9, 1).permutation(list(range(20))) == b
    assert RngHandle(9).child(1).permutation(list(range(20))) == b


def test_rng_describe():
    assert RngHandle(3, 4).describe() == {'prng-algorithm': PRNG_ALGORITHM, 'seed': 3, 'stream-id': 4}
    with pytest.raises(PreconditionError):
        RngHandle(-1)


def test_sample_is_a_subset():
    chosen = RngHandle(1).sample(list(range(10)), 4)
    assert len(set(chosen)) == 4 and set(chosen) <= set(range(10))


def test_trace_records_in_order():
    trace = Trace()
    trace.record('insert', 3, tau=2.0, size=0)
    trace.record('leftover', 4, tau=2.0)
    trace.record('insert', 5, tau=1.0, size=1)
    assert [event.element for event in trace.of_kind('insert')] == [3, 5]
    assert len(trace) == 3
    assert trace.events[1].to_dict() == {'kind': 'leftover', 'element': 4, 'tau': 2.0}
