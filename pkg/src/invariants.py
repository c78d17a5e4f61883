# NOTICE
# Robust Summary Toolkit.
# See README.md for usage and CHANGELOG.md for release history.

'''
Checks of Phase-I summaries and traces against the properties the
robustness guarantees rest on.

Every check returns a list of Message objects; an empty list means the
property held.  The checks never modify the summary.  Objective values
are recomputed from scratch on the oracle passed in, so callers should
pass a fresh() copy when they care about the call counter of a run.
'''
import logging
import math
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from centralized import CentralizedSummary, ceil_ratio, threshold_bound
from matroids import MatroidOracle
from message import BoundError, InvariantError, Message
from objectives import ModularObjective, ObjectiveOracle
from oracle import brute_force_opt, find_transversal, tolerance
from streaming import StreamingSummary, StreamState

logger = logging.getLogger(__name__)


def summary_size_bound(summary, rank: int) -> int:
    '''
    d + k + |T| * ceil(d/eps).  |T| is the realized ladder for a
    centralized summary and the ladder-length bound for a streaming one.
    '''
    ladder = len(summary.thresholds) if isinstance(summary, CentralizedSummary) else \
        (threshold_bound(rank, summary.eps) if rank >= 1 else 0)
    return summary.d + rank + ladder * ceil_ratio(summary.d, summary.eps)


def check_summary_size(summary, rank: int) -> List[Message]:
    error_messages = []
    bound = summary_size_bound(summary, rank)
    if summary.size > bound:
        error_messages.append(BoundError(
            message='summary holds {} elements, above the bound {}'.format(summary.size, bound),
            message_source='summary-size'))
    if isinstance(summary, CentralizedSummary):
        bt = summary.bucket_threshold
        finer = summary.d + len(summary.thresholds) * (bt - 1) + (bt - 1)
        if len(summary.b) > finer:
            error_messages.append(BoundError(
                message='|B| = {} exceeds d + |T|(bt-1) + (bt-1) = {}'.format(len(summary.b), finer),
                message_source='summary-size'))
    if len(summary.a) > rank:
        error_messages.append(BoundError(
            message='|A| = {} exceeds the rank {}'.format(len(summary.a), rank),
            message_source='summary-size'))
    if summary.a_set & summary.b:
        error_messages.append(InvariantError(
            message='A and B share elements {}'.format(sorted(summary.a_set & summary.b)),
            message_source='summary-size'))
    return error_messages


def peak_memory_bound(summary) -> int:
    'rank + d + |T| * bucket_threshold + 1, the +1 being the element in flight'
    ladder = threshold_bound(summary.rank, summary.eps) if summary.rank >= 1 else 0
    return summary.rank + summary.d + ladder * summary.bucket_threshold + 1


def check_peak_memory(summary: StreamingSummary) -> List[Message]:
    bound = peak_memory_bound(summary)
    if summary.peak_memory > bound:
        return [BoundError(message='peak memory {} exceeds the bound {}'.format(summary.peak_memory, bound),
                           message_source='peak-memory')]
    return []


def check_centralized_trace(summary: CentralizedSummary, f: ObjectiveOracle,
                            m: MatroidOracle) -> List[Message]:
    '''
    Every prefix of A is independent, insertion thresholds never increase
    and each insertion gain mu satisfies tau <= mu < (1+eps) tau.
    '''
    error_messages = []
    prefix: List[int] = []
    previous_tau = math.inf
    for insertion in summary.a:
        element, tau, mu = insertion.element, insertion.tau, insertion.marginal
        fresh = f.value(prefix + [element]) - f.value(prefix)
        tol = tolerance(max(abs(fresh), tau))
        if abs(fresh - mu) > tolerance(max(abs(fresh), abs(mu))):
            error_messages.append(InvariantError(
                message='recorded gain {} differs from recomputed gain {}'.format(mu, fresh),
                message_source='centralized-trace', element=element))
        if mu < tau - tol or mu >= (1 + summary.eps) * tau + tol:
            error_messages.append(InvariantError(
                message='gain {} outside [{}, {})'.format(mu, tau, (1 + summary.eps) * tau),
                message_source='centralized-trace', element=element))
        if tau > previous_tau:
            error_messages.append(InvariantError(
                message='insertion threshold rose from {} to {}'.format(previous_tau, tau),
                message_source='centralized-trace', element=element))
        previous_tau = tau
        prefix.append(element)
        if not m.is_independent(prefix):
            error_messages.append(InvariantError(
                message='solution became dependent', message_source='centralized-trace', element=element))
    return error_messages


def check_injection(summary: CentralizedSummary, f: ObjectiveOracle, m: MatroidOracle,
                    v: Iterable[int], deleted: Iterable[int] = ()) -> List[Message]:
    '''
    Each element x of OPT(V minus D) whose gain against the final A is at
    least eps f(OPT)/k, and that is neither in A nor in B minus D, must
    have been rejected as infeasible.  The A-prefixes at those rejections
    must admit a system of distinct representatives h, and
    f(x|A) <= (1+eps) f(h(x)|A before h(x)) must hold.  The deletion set
    should hold at most d elements.
    '''
    error_messages = []
    deleted = frozenset(deleted)
    survivors = sorted(set(v) - deleted)
    opt = brute_force_opt(survivors, f, m)
    k = m.rank()
    if k == 0 or opt.opt_value <= 0:
        return error_messages
    a_order = [x.element for x in summary.a]
    a_set = frozenset(a_order)
    gains_at_insert = {x.element: x.marginal for x in summary.a}
    failure_size = {}
    for event in summary.trace.of_kind('infeasible'):
        failure_size.setdefault(event.element, event.size)

    cutoff = summary.eps * opt.opt_value / k
    family, members = [], []
    for x in sorted(opt.opt_set):
        if x in a_set or x in summary.b:
            continue
        gain = f.value(a_set | {x}) - f.value(a_set)
        if gain < cutoff - tolerance(cutoff):
            continue
        if x not in failure_size:
            error_messages.append(InvariantError(
                message='element of the optimum left the sweep without a feasibility rejection',
                message_source='injection', element=x))
            continue
        family.append(frozenset(a_order[:failure_size[x]]))
        members.append((x, gain))

    result = find_transversal(family)
    if not result:
        error_messages.append(InvariantError(
            message='no injection exists; sets {} cover only {} elements'.format(result.violation, sorted(result.union)),
            message_source='injection'))
        return error_messages
    for index, (x, gain) in enumerate(members):
        h = result.mapping[index]
        limit = (1 + summary.eps) * gains_at_insert[h]
        if gain > limit + tolerance(limit):
            error_messages.append(InvariantError(
                message='gain {} exceeds (1+eps) times the insertion gain {} of {}'.format(gain, gains_at_insert[h], h),
                message_source='injection', element=x))
    return error_messages


def check_stream_state(state: StreamState, reference: Optional[ObjectiveOracle] = None) -> List[Message]:
    '''
    After stream_process returns: A is independent, every bucket is below
    the drain size and above tau_min, every buffered gain lies in
    [tau, (1+eps) tau) against a from-scratch recomputation, and the number
    of active thresholds respects the ladder bound.
    '''
    f = reference if reference is not None else state.f.fresh()
    error_messages = []
    a = sorted(state.a)
    if not state.m.is_independent(a):
        error_messages.append(InvariantError(message='solution is dependent', message_source='stream-state'))
    if state.rank >= 1 and len(state.buckets) > threshold_bound(state.rank, state.eps):
        error_messages.append(BoundError(
            message='{} active thresholds exceed the ladder bound'.format(len(state.buckets)),
            message_source='stream-state'))
    base = f.value(a)
    for exponent in sorted(state.buckets):
        members = state.buckets[exponent]
        tau = state.tau(exponent)
        if len(members) >= state.bucket_threshold:
            error_messages.append(InvariantError(
                message='bucket {} still holds {} elements'.format(tau, len(members)), message_source='stream-state'))
        if tau < state.tau_min * (1 - 1e-12):
            error_messages.append(InvariantError(
                message='bucket {} lies below tau_min {}'.format(tau, state.tau_min), message_source='stream-state'))
        for e in sorted(members):
            gain = f.value(a + [e]) - base
            tol = tolerance(max(abs(gain), tau))
            if gain < tau - tol or gain >= (1 + state.eps) * tau + tol:
                error_messages.append(InvariantError(
                    message='gain {} outside [{}, {})'.format(gain, tau, (1 + state.eps) * tau),
                    message_source='stream-state', element=e))
    if state.memory() > state.peak_memory:
        error_messages.append(InvariantError(message='peak memory under-reported', message_source='stream-state'))
    return error_messages


def check_weight_bounds(summary: StreamingSummary, f: ObjectiveOracle,
                        deletion_sets: Sequence[Iterable[int]] = ()) -> List[Message]:
    '''
    w(K) <= w(A) <= f(A), w(A minus D) <= f(A minus D) for each D, and
    f(A + K) <= w(A + K).
    '''
    error_messages = []
    a, k = sorted(summary.a), sorted(summary.k)
    w_a, w_k = summary.weight(a), summary.weight(k)
    f_a = f.value(a)
    if w_k > w_a + tolerance(w_a):
        error_messages.append(InvariantError(
            message='w(K) = {} exceeds w(A) = {}'.format(w_k, w_a), message_source='weights'))
    if w_a > f_a + tolerance(f_a):
        error_messages.append(InvariantError(
            message='w(A) = {} exceeds f(A) = {}'.format(w_a, f_a), message_source='weights'))
    for deleted in deletion_sets:
        survivors = [e for e in a if e not in set(deleted)]
        w_s, f_s = summary.weight(survivors), f.value(survivors)
        if w_s > f_s + tolerance(f_s):
            error_messages.append(InvariantError(
                message='w(A minus D) = {} exceeds f(A minus D) = {}'.format(w_s, f_s), message_source='weights'))
    union = sorted(set(a) | set(k))
    f_u, w_u = f.value(union), summary.weight(union)
    if f_u > w_u + tolerance(w_u):
        error_messages.append(InvariantError(
            message='f(A + K) = {} exceeds w(A + K) = {}'.format(f_u, w_u), message_source='weights'))
    return error_messages


def check_swaps(summary: StreamingSummary) -> List[Message]:
    'Every eviction was paid for by more than twice the evicted weight'
    error_messages = []
    for event in summary.trace.of_kind('swap'):
        evicted = summary.weights[event.other]
        if not event.weight > 2 * evicted:
            error_messages.append(InvariantError(
                message='swap weight {} is not above twice the evicted weight {}'.format(event.weight, evicted),
                message_source='swaps', element=event.element))
    return error_messages


def check_drained_dominance(summary: StreamingSummary, m: MatroidOracle, limit: int = 16) -> List[Message]:
    '''
    w(X) <= 2 w(A) for every independent X of drained elements.  The
    heaviest such X is found exhaustively when few elements were drained
    and by the matroid greedy (exact for modular weights) otherwise.
    '''
    gamma = sorted(summary.gamma)
    weights = np.zeros(m.n)
    for e in gamma:
        weights[e] = max(summary.weights[e], 0.0)
    heaviest: float
    if len(gamma) <= limit:
        heaviest = brute_force_opt(gamma, ModularObjective(weights), m, guardrail=limit).opt_value
    else:
        order = sorted(gamma, key=lambda e: (-weights[e], e))
        heaviest = float(sum(weights[e] for e in m.greedy_basis(order)))
    w_a = summary.weight(summary.a)
    if heaviest > 2 * w_a + tolerance(w_a):
        return [InvariantError(
            message='an independent set of drained elements weighs {} > 2 w(A) = {}'.format(heaviest, 2 * w_a),
            message_source='drained-dominance')]
    return []


def sampling_bound(with_a: Sequence[float], survivors: Sequence[float], eps: float) -> dict:
    '''
    Compare mean f(A) (or w(A)) with ((1+eps)/(1-eps)) mean f(A minus D)
    over repeated seeds.

    Return:
        dict with the means, the ratio, the standard error of the per-seed
        difference and the slack (positive slack means the bound held with
        three standard errors to spare or less)
    '''
    with_a = np.asarray(with_a, dtype=float)
    survivors = np.asarray(survivors, dtype=float)
    ratio = (1 + eps) / (1 - eps)
    difference = with_a - ratio * survivors
    stderr = float(np.std(difference, ddof=1) / math.sqrt(len(difference))) if len(difference) > 1 else 0.0
    stats = {
        'mean_a': float(np.mean(with_a)),
        'mean_survivors': float(np.mean(survivors)),
        'ratio': ratio,
        'stderr': stderr,
        'slack': ratio * float(np.mean(survivors)) + 3 * stderr - float(np.mean(with_a)),
    }
    if eps < 1 / 3:
        stats['refined_ratio'] = 1 + 3 * eps
    return stats


def check_sampling_bound(with_a: Sequence[float], survivors: Sequence[float], eps: float) -> List[Message]:
    stats = sampling_bound(with_a, survivors, eps)
    if stats['slack'] < -tolerance(stats['mean_a']):
        return [BoundError(
            message='mean {:.6g} exceeds {:.4g} x {:.6g} + 3 x {:.3g}'.format(
                stats['mean_a'], stats['ratio'], stats['mean_survivors'], stats['stderr']),
            message_source='sampling-bound')]
    return []
