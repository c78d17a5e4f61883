import pytest

import streaming
from message import InvalidConfiguration
from verify import SUITES, verify


@pytest.mark.parametrize('suite', sorted(SUITES))
def test_suites_pass_at_small_scale(suite):
    report = verify(suite, scale=0.01, seed=3)
    assert [outcome.name for outcome in report.outcomes] == [name for name, _ in SUITES[suite]]
    assert report.passed, '\n'.join(report.lines())
    assert all(line.startswith('PASS {}/'.format(suite)) for line in report.lines())


def test_unknown_suite():
    with pytest.raises(InvalidConfiguration):
        verify('speed')


@pytest.mark.slow
def test_full_sweep():
    report = verify('all', scale=1.0, seed=0)
    assert report.passed, '\n'.join(report.lines())


def test_lemmas_catch_a_reversed_swap_rule(monkeypatch):
    monkeypatch.setattr(streaming, 'swap_pays', lambda weight, evicted: weight < 2 * evicted)
    report = verify('lemmas', scale=0.05)
    assert not report.passed
    failed = [outcome.name for outcome in report.outcomes if not outcome.passed]
    assert 'summary-size' in failed
