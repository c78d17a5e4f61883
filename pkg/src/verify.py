# NOTICE
# Robust Summary Toolkit.
# See README.md for usage and CHANGELOG.md for release history.

'''
Property suites run by `robust-summary verify`.

    axioms    matroid axioms, circuits, truncation, objective properties,
              marginal cache consistency, transversal finder vs Hall
    lemmas    summary-size bound, centralized trace and injection checks,
              streaming bucket and weight properties, sampling bound
    ratios    baseline guarantees and end-to-end approximation ratios
              against the exhaustive optimum

`scale` multiplies the number of randomized runs; 1.0 is the full
acceptance sweep.  Every check is timed and returns Message objects.
'''
import itertools
import logging
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Tuple

import numpy as np

from adversary import greedy_adversary
from centralized import phase1_centralized
from core import RngHandle
from invariants import (check_centralized_trace, check_drained_dominance, check_injection,
                        check_peak_memory, check_sampling_bound, check_stream_state, check_summary_size,
                        check_swaps, check_weight_bounds)
from matroids import MatroidOracle, PartitionMatroid, UniformMatroid
from message import BoundError, InvalidConfiguration, InvariantError, Message, SoftwareBug
from objectives import (dominating_objective, kmedoid_objective, logdet_objective, modular_objective,
                        movie_objective)
from oracle import (brute_force_opt, check_matroid_axioms, check_submodular_monotone, enumerate_opt,
                    find_transversal, hall_condition, plain_greedy, tolerance)
from solvers import InnerSolver, lazy_greedy, phase2, robust_swapping_cascade, swapping
from streaming import phase1_streaming, stream_finalize, stream_init, stream_process
from synth import random_matroid, random_objective

logger = logging.getLogger(__name__)


@dataclass
class CheckOutcome:
    suite: str
    name: str
    runs: int
    seconds: float
    messages: List[Message] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.messages

    def format(self) -> str:
        return '{} {}/{} ({} runs, {:.2f}s)'.format(
            'PASS' if self.passed else 'FAIL', self.suite, self.name, self.runs, self.seconds)


@dataclass
class VerifyReport:
    outcomes: List[CheckOutcome]

    @property
    def passed(self) -> bool:
        return all(outcome.passed for outcome in self.outcomes)

    def lines(self) -> List[str]:
        lines = []
        for outcome in self.outcomes:
            lines.append(outcome.format())
            for errmsg in outcome.messages[:20]:
                lines.append('    ' + errmsg.format())
            if len(outcome.messages) > 20:
                lines.append('    ... {} more'.format(len(outcome.messages) - 20))
        return lines


def _runs(base: int, scale: float, floor: int = 2) -> int:
    return max(floor, int(round(base * scale)))


def _small_instance(rng: RngHandle, n: int):
    return random_objective(rng, n), random_matroid(rng, n)


# ---------------------------------------------------------------- axioms

def axioms_matroids(rng: RngHandle, scale: float) -> Tuple[int, List[Message]]:
    errmsgs = []
    matroids: List[MatroidOracle] = [
        UniformMatroid(6, 3),
        PartitionMatroid.from_parts([[0, 1], [2]], [1, 1]),
        PartitionMatroid.from_parts([[0, 1, 2, 3], [4], []], [2, 2, 2]),
    ]
    for kind in ('uniform', 'partition', 'laminar', 'truncation'):
        for _ in range(_runs(5, scale)):
            matroids.append(random_matroid(rng, 8, kind))
    for m in matroids:
        result = check_matroid_axioms(m)
        if not result:
            errmsgs.append(InvariantError(message='{!r} violates {}'.format(m, result.counterexample[0]),
                                          message_source='matroid-axioms'))
        elif result.details['basis_sizes'] != [m.rank()]:
            errmsgs.append(InvariantError(message='{!r} has bases of sizes {} but rank {}'.format(
                m, result.details['basis_sizes'], m.rank()), message_source='matroid-axioms'))
    # Truncation at the rank changes nothing.
    for _ in range(_runs(4, scale)):
        m = random_matroid(rng, 10)
        truncated = m.truncate(m.rank())
        for mask in range(1 << 10):
            subset = [e for e in range(10) if mask >> e & 1]
            if m.is_independent(subset) != truncated.is_independent(subset):
                errmsgs.append(InvariantError(message='truncation at the rank differs on {}'.format(subset),
                                              message_source='truncation'))
                break
    return len(matroids), errmsgs


def minimal_dependent_subsets(m: MatroidOracle, elements: List[int]) -> List[frozenset]:
    found = []
    for size in range(1, len(elements) + 1):
        for subset in itertools.combinations(elements, size):
            subset = frozenset(subset)
            if not m.is_independent(subset) and all(m.is_independent(subset - {x}) for x in subset):
                found.append(subset)
    return found


def axioms_circuits(rng: RngHandle, scale: float) -> Tuple[int, List[Message]]:
    errmsgs = []
    runs = 0
    for _ in range(_runs(100, scale)):
        m = random_matroid(rng, 8, 'laminar')
        a = []
        for e in rng.permutation(list(range(8))):
            if rng.integers(2) and m.can_add(a, e):
                a.append(e)
        closing = [e for e in range(8) if e not in a and not m.can_add(a, e)]
        if not closing:
            continue
        e = closing[rng.integers(len(closing))]
        runs += 1
        circuit = m.fundamental_circuit(a, e)
        expected = minimal_dependent_subsets(m, sorted(a + [e]))
        if expected != [circuit.members]:
            errmsgs.append(InvariantError(message='circuit {} differs from brute force {}'.format(
                sorted(circuit.members), [sorted(c) for c in expected]), message_source='circuits', element=e))
    return runs, errmsgs


def _small_objectives(rng: RngHandle, n: int):
    points = rng.generator.random((n, 2))
    vectors = np.abs(rng.generator.standard_normal((n, 4)))
    return [
        modular_objective(rng.generator.integers(0, 10, size=n).astype(float)),
        random_objective(rng, n, 'dominating'),
        movie_objective(np.abs(rng.generator.standard_normal(4)), vectors, 0.95),
        kmedoid_objective(points),
        logdet_objective(points),
    ]


def axioms_objectives(rng: RngHandle, scale: float) -> Tuple[int, List[Message]]:
    errmsgs = []
    runs = 0
    for _ in range(_runs(3, scale, 1)):
        for f in _small_objectives(rng, 8):
            runs += 1
            result = check_submodular_monotone(f, range(8))
            if not result:
                errmsgs.append(InvariantError(message='{} objective fails {}'.format(f.kind, result.counterexample[0]),
                                              message_source='objectives'))
            if abs(f.value(())) > 0:
                errmsgs.append(InvariantError(message='{} objective is not normalized'.format(f.kind),
                                              message_source='objectives'))
    return runs, errmsgs


def axioms_cache(rng: RngHandle, scale: float) -> Tuple[int, List[Message]]:
    'Cached marginals against from-scratch differences on a random walk of sets'
    errmsgs = []
    n = 20
    per_kind = _runs(2000, scale, 50)
    runs = 0
    for f in _small_objectives(rng, n):
        reference = f.fresh()
        s = set()
        for _ in range(per_kind):
            move = rng.integers(4)
            if move == 0:
                s = set()
            elif move == 1 and s:
                s.discard(sorted(s)[rng.integers(len(s))])
            else:
                s.add(rng.integers(n))
            e = rng.integers(n)
            cached = f.marginal(e, s)
            fresh = reference.value(s | {e}) - reference.value(s)
            runs += 1
            if abs(cached - fresh) > tolerance(max(abs(fresh), reference.value(s | {e}))):
                errmsgs.append(InvariantError(message='{} cached gain {} vs {}'.format(f.kind, cached, fresh),
                                              message_source='cache', element=e))
                break
    return runs, errmsgs


def _check_family(family) -> List[Message]:
    result = find_transversal(family)
    holds = hall_condition(family)
    if bool(result) != holds:
        return [InvariantError(message='transversal {} but Hall condition {} for {}'.format(
            bool(result), holds, [sorted(s) for s in family]), message_source='transversal')]
    if result:
        chosen = [result.mapping[i] for i in range(len(family))]
        if len(set(chosen)) != len(chosen) or any(chosen[i] not in family[i] for i in range(len(family))):
            return [InvariantError(message='invalid transversal {}'.format(chosen), message_source='transversal')]
    elif len(result.violation) <= len(result.union):
        return [InvariantError(message='certificate {} is not a Hall violation'.format(result.violation),
                               message_source='transversal')]
    return []


def axioms_transversal(rng: RngHandle, scale: float) -> Tuple[int, List[Message]]:
    '''
    All families of at most 4 sets over 6 elements at full scale; a
    random sample of them otherwise.
    '''
    subsets = [frozenset(e for e in range(6) if mask >> e & 1) for mask in range(64)]
    errmsgs = []
    runs = 0
    if scale >= 1:
        families = (family for size in range(1, 5)
                    for family in itertools.combinations_with_replacement(subsets, size))
    else:
        families = ([subsets[rng.integers(64)] for _ in range(1 + rng.integers(4))]
                    for _ in range(_runs(20000, scale)))
    for family in families:
        runs += 1
        errmsgs.extend(_check_family(list(family)))
        if len(errmsgs) > 20:
            break
    return runs, errmsgs


# ---------------------------------------------------------------- lemmas

def lemmas_summary_size(rng: RngHandle, scale: float) -> Tuple[int, List[Message]]:
    errmsgs = []
    max_n = 200 if scale >= 1 else max(20, int(200 * scale))
    runs = _runs(1000, scale)
    for run in range(runs):
        n = 10 + rng.integers(max_n - 9)
        f = random_objective(rng, n)
        m = random_matroid(rng, n)
        if m.rank() > 10:
            m = m.truncate(10)
        d = rng.integers(min(20, n) + 1)
        eps = (0.3, 0.5, 0.99)[rng.integers(3)]
        centralized = phase1_centralized(range(n), f, m, d, eps, RngHandle(run, 0))
        errmsgs.extend(check_summary_size(centralized, m.rank()))
        streaming = phase1_streaming(rng.permutation(list(range(n))), f, m, d, eps, RngHandle(run, 1))
        errmsgs.extend(check_summary_size(streaming, m.rank()))
        errmsgs.extend(check_peak_memory(streaming))
        errmsgs.extend(check_weight_bounds(streaming, f.fresh()))
        errmsgs.extend(check_swaps(streaming))
    return runs, errmsgs


def lemmas_centralized(rng: RngHandle, scale: float) -> Tuple[int, List[Message]]:
    errmsgs = []
    runs = _runs(200, scale)
    for run in range(runs):
        n = 6 + rng.integers(7)
        f, m = _small_instance(rng, n)
        d = rng.integers(3)
        eps = (0.3, 0.5)[rng.integers(2)]
        deleted = greedy_adversary(range(n), f.fresh(), m, d).deleted
        summary = phase1_centralized(range(n), f, m, d, eps, RngHandle(run))
        errmsgs.extend(check_centralized_trace(summary, f.fresh(), m))
        errmsgs.extend(check_injection(summary, f.fresh(), m, range(n), deleted))
    return runs, errmsgs


def lemmas_streaming(rng: RngHandle, scale: float) -> Tuple[int, List[Message]]:
    errmsgs = []
    runs = _runs(100, scale)
    for run in range(runs):
        f = random_objective(rng, 30)
        m = UniformMatroid(30, 3) if run % 2 else random_matroid(rng, 30, 'partition').truncate(3)
        state = stream_init(2, 0.5, m, f, RngHandle(run))
        reference = f.fresh()
        for e in rng.permutation(list(range(30))):
            stream_process(state, e)
            errmsgs.extend(check_stream_state(state, reference))
        summary = stream_finalize(state)
        errmsgs.extend(check_weight_bounds(summary, reference, [summary.a_set]))
        errmsgs.extend(check_swaps(summary))

        n = 6 + rng.integers(7)
        f, m = _small_instance(rng, n)
        small = phase1_streaming(rng.permutation(list(range(n))), f, m, rng.integers(3), 0.5, RngHandle(run, 1))
        errmsgs.extend(check_drained_dominance(small, m))
    return runs, errmsgs


def lemmas_sampling(rng: RngHandle, scale: float) -> Tuple[int, List[Message]]:
    '''
    Fixed D, eps = 0.5: mean f(A) (centralized) and mean w(A) (streaming)
    stay within ((1+eps)/(1-eps)) mean f(A minus D) + 3 standard errors.
    '''
    errmsgs = []
    n, d, eps = 40, 3, 0.5
    f = random_objective(RngHandle(11), n, 'dominating')
    m = UniformMatroid(n, 5)
    deleted = greedy_adversary(range(n), f.fresh(), m, d).deleted
    order = list(range(n))
    seeds = _runs(500, scale, 30)
    full, kept, weights, kept_stream = [], [], [], []
    for seed in range(seeds):
        summary = phase1_centralized(range(n), f, m, d, eps, RngHandle(seed))
        full.append(f.value(summary.a_set))
        kept.append(f.value(summary.a_set - deleted))
        streamed = phase1_streaming(order, f, m, d, eps, RngHandle(seed))
        weights.append(streamed.weight(streamed.a))
        kept_stream.append(f.value(streamed.a_set - deleted))
    errmsgs.extend(check_sampling_bound(full, kept, eps))
    errmsgs.extend(check_sampling_bound(weights, kept_stream, eps))
    return seeds, errmsgs


# ---------------------------------------------------------------- ratios

def ratios_baselines(rng: RngHandle, scale: float) -> Tuple[int, List[Message]]:
    errmsgs = []
    runs = _runs(500, scale)
    eps0 = 0.0001
    for _ in range(runs):
        n = 4 + rng.integers(9)
        f, m = _small_instance(rng, n)
        opt = brute_force_opt(range(n), f.fresh(), m)
        if n <= 8:
            other = enumerate_opt(range(n), f.fresh(), m)
            if abs(other.opt_value - opt.opt_value) > tolerance(opt.opt_value):
                errmsgs.append(SoftwareBug(message='pruned optimum {} differs from full enumeration {}'.format(
                    opt.opt_value, other.opt_value), message_source='brute-force'))
        greedy = lazy_greedy(range(n), f.fresh(), m, eps0)
        if greedy.value * (2 + 3 * eps0) < opt.opt_value - tolerance(opt.opt_value):
            errmsgs.append(BoundError(message='lazy greedy {} below OPT {}/(2+3eps0)'.format(
                greedy.value, opt.opt_value), message_source='baselines'))
        swapped = swapping(rng.permutation(list(range(n))), f.fresh(), m)
        if swapped.value * 4 < opt.opt_value - tolerance(opt.opt_value):
            errmsgs.append(BoundError(message='swapping {} below OPT {}/4'.format(swapped.value, opt.opt_value),
                                      message_source='baselines'))
        exact = lazy_greedy(range(n), f.fresh(), m, 1e-9)
        reference = f.fresh()
        plain = reference.value(plain_greedy(range(n), reference, m))
        if abs(exact.value - plain) > tolerance(plain):
            errmsgs.append(InvariantError(message='lazy greedy with tiny eps0 reached {} but plain greedy {}'.format(
                exact.value, plain), message_source='baselines'))
    return runs, errmsgs


def ratios_pipeline(rng: RngHandle, scale: float) -> Tuple[int, List[Message]]:
    '''
    f(OPT(V minus D)) / mean f(S) within the centralized and streaming
    bounds, plus three standard errors, with the greedy adversary.
    '''
    errmsgs = []
    runs = _runs(500, scale)
    seeds = _runs(200, scale, 5)
    inner = InnerSolver('lazy-greedy')
    for run in range(runs):
        n = 6 + rng.integers(7)
        f, m = _small_instance(rng, n)
        d = 1 + rng.integers(2)
        eps = (0.3, 0.5)[rng.integers(2)]
        deleted = greedy_adversary(range(n), f.fresh(), m, d).deleted
        opt = brute_force_opt(sorted(set(range(n)) - deleted), f.fresh(), m).opt_value
        if opt <= 0:
            continue
        tail = (2 * inner.beta + 15) * eps
        bounds = {'centralized': 2 + inner.beta + tail, 'streaming': 4 + inner.beta + tail}
        order = rng.permutation(list(range(n)))
        for algorithm, bound in bounds.items():
            values = []
            for seed in range(seeds):
                g = f.fresh()
                if algorithm == 'centralized':
                    summary = phase1_centralized(range(n), g, m, d, eps, RngHandle(seed, run))
                else:
                    summary = phase1_streaming(order, g, m, d, eps, RngHandle(seed, run))
                values.append(phase2(summary, deleted, g, m, inner).value)
            mean = float(np.mean(values))
            stderr = float(np.std(values, ddof=1) / math.sqrt(len(values)))
            if (mean + 3 * stderr) * bound < opt - tolerance(opt):
                errmsgs.append(BoundError(message='{}: OPT {} / mean {} exceeds {:.3f}'.format(
                    algorithm, opt, mean, bound), message_source='pipeline'))
    return runs, errmsgs


def ratios_cascade(rng: RngHandle, scale: float) -> Tuple[int, List[Message]]:
    'Deleting one instance leaves an untouched instance within 4 of OPT(V minus D)'
    errmsgs = []
    runs = _runs(200, scale)
    for _ in range(runs):
        n = 6 + rng.integers(7)
        f, m = _small_instance(rng, n)
        d = max(1, m.rank())
        cascade = robust_swapping_cascade(rng.permutation(list(range(n))), d, f.fresh(), m)
        seen = set()
        for solution in cascade.solutions:
            if seen & set(solution):
                errmsgs.append(InvariantError(message='cascade instances overlap', message_source='cascade'))
            seen |= set(solution)
        deleted = frozenset(cascade.solutions[0])
        result = cascade.phase2(deleted, f.fresh())
        opt = brute_force_opt(sorted(set(range(n)) - deleted), f.fresh(), m).opt_value
        if not result.details['untouched']:
            errmsgs.append(InvariantError(message='no cascade instance survived', message_source='cascade'))
        elif result.value * 4 < opt - tolerance(opt):
            errmsgs.append(BoundError(message='cascade {} below OPT {}/4'.format(result.value, opt),
                                      message_source='cascade'))
    return runs, errmsgs


SUITES: Dict[str, List[Tuple[str, Callable]]] = {
    'axioms': [('matroids', axioms_matroids), ('circuits', axioms_circuits),
               ('objectives', axioms_objectives), ('cache', axioms_cache),
               ('transversal', axioms_transversal)],
    'lemmas': [('summary-size', lemmas_summary_size), ('centralized', lemmas_centralized),
               ('streaming', lemmas_streaming), ('sampling-bound', lemmas_sampling)],
    'ratios': [('baselines', ratios_baselines), ('pipeline', ratios_pipeline),
               ('cascade', ratios_cascade)],
}


def verify(suite: str = 'all', scale: float = 1.0, seed: int = 0) -> VerifyReport:
    '''
    Arguments:
        suite   axioms, lemmas, ratios or all
        scale   Multiplier on the number of randomized runs
        seed    Base seed; each check gets its own stream

    Return:
        VerifyReport
    '''
    if suite != 'all' and suite not in SUITES:
        raise InvalidConfiguration('unknown suite {!r}; choose from {}, all'.format(suite, ', '.join(SUITES)))
    names = list(SUITES) if suite == 'all' else [suite]
    outcomes = []
    stream = 0
    for name in names:
        for check_name, check in SUITES[name]:
            stream += 1
            started = time.perf_counter()
            try:
                runs, errmsgs = check(RngHandle(seed, stream), scale)
            except Exception as exc:
                logger.exception('check %s/%s raised', name, check_name)
                runs, errmsgs = 0, [SoftwareBug(message='check raised an exception', message_source=check_name, exc=exc)]
            outcome = CheckOutcome(name, check_name, runs, time.perf_counter() - started, errmsgs)
            logger.info(outcome.format())
            outcomes.append(outcome)
    return VerifyReport(outcomes)
