# NOTICE
# Robust Summary Toolkit.
# See README.md for usage and CHANGELOG.md for release history.

'''
Phase I of the two-phase deletion-robust model, streaming setting.

One pass over the stream.  The first d arrivals fill V_d; afterwards an
arrival displaces the least valuable member of V_d when it is worth more.
The element that does not stay in V_d is placed in the bucket of the
largest power (1+eps)^i not above its marginal gain, unless that gain is
below tau_min = eps/(1+eps) * delta/k.

Whenever a bucket reaches max(1, ceil(d/eps)) elements a uniformly random
member g is drained with the fixed weight w(g) = f(g|A).  g joins A if A+g
is independent; otherwise it replaces the lightest member k_g of the
fundamental circuit of A+g when w(g) > 2 w(k_g), and k_g moves to K.
Each change of A re-buckets every buffered element against the new A.
'''
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional

from centralized import bucket_threshold, threshold_floor
from core import RngHandle, Trace, uniform_pick
from matroids import MatroidOracle
from message import DomainError, DuplicateElement, InvalidConfiguration
from objectives import ObjectiveOracle

logger = logging.getLogger(__name__)


@dataclass
class StreamState:
    '''
    Mutable state of one streaming pass.

    a, k        Element -> fixed weight, for the solution and for every
                element ever evicted from it
    withheld    V_d, element -> singleton value
    buckets     Ladder exponent i -> elements in the bucket of (1+eps)^i
    weights     Fixed weight of every drained element
    '''
    d: int
    eps: float
    m: MatroidOracle
    f: ObjectiveOracle
    rng: RngHandle
    rank: int
    bucket_threshold: int
    a: Dict[int, float] = field(default_factory=dict)
    k: Dict[int, float] = field(default_factory=dict)
    withheld: Dict[int, float] = field(default_factory=dict)
    buckets: Dict[int, set] = field(default_factory=dict)
    weights: Dict[int, float] = field(default_factory=dict)
    delta: float = 0.0
    tau_min: float = 0.0
    seen: set = field(default_factory=set)
    trace: Trace = field(default_factory=Trace)
    peak_memory: int = 0

    def tau(self, exponent: int) -> float:
        return (1.0 + self.eps) ** exponent

    def buffered(self) -> int:
        return sum(len(members) for members in self.buckets.values())

    def memory(self) -> int:
        return len(self.a) + len(self.withheld) + self.buffered()

    def bucket_of(self, element: int) -> Optional[int]:
        for exponent, members in self.buckets.items():
            if element in members:
                return exponent
        return None


@dataclass
class StreamingSummary:
    a: Dict[int, float]
    k: Dict[int, float]
    b: FrozenSet[int]
    withheld: FrozenSet[int]
    weights: Dict[int, float]
    d: int
    eps: float
    bucket_threshold: int
    rank: int
    delta: float
    tau_min: float
    peak_memory: int
    trace: Trace

    @property
    def a_set(self) -> FrozenSet[int]:
        return frozenset(self.a)

    @property
    def gamma(self) -> FrozenSet[int]:
        'Every drained element'
        return frozenset(self.weights)

    @property
    def size(self) -> int:
        return len(self.a) + len(self.b)

    def weight(self, elements: Iterable[int]) -> float:
        return float(sum(self.weights[e] for e in sorted(elements)))

    def to_dict(self) -> dict:
        return {
            'A': [{'id': e, 'weight': w} for e, w in self.a.items()],
            'K': [{'id': e, 'weight': w} for e, w in self.k.items()],
            'B': sorted(self.b),
            'weights': {str(e): w for e, w in sorted(self.weights.items())},
            'params': {'d': self.d, 'eps': self.eps, 'bucket_threshold': self.bucket_threshold,
                       'k': self.rank, 'delta': self.delta, 'tau_min': self.tau_min,
                       'peak_memory': self.peak_memory},
        }


def stream_init(d: int, eps: float, m: MatroidOracle, f: ObjectiveOracle,
                rng: Optional[RngHandle] = None) -> StreamState:
    '''
    Arguments:
        d     Deletion budget
        eps   Ladder step in (0, 1)
        m     Matroid oracle
        f     Objective oracle
        rng   Source of the drain draws (default: seed 0, stream 0)
    '''
    if not 0.0 < eps < 1.0:
        raise InvalidConfiguration('eps must lie in (0, 1), got {}'.format(eps))
    if d < 0:
        raise InvalidConfiguration('deletion budget must be non-negative, got {}'.format(d))
    return StreamState(d=d, eps=eps, m=m, f=f, rng=rng if rng is not None else RngHandle(0),
                       rank=m.rank(), bucket_threshold=bucket_threshold(d, eps))


def _place(state: StreamState, e: int, gain: float) -> bool:
    'Bucket e by its gain; False when e falls below tau_min'
    if gain <= 0 or gain < state.tau_min:
        return False
    exponent = threshold_floor(gain, state.eps)
    if state.tau(exponent) < state.tau_min:
        return False
    state.buckets.setdefault(exponent, set()).add(e)
    return True


def _refresh(state: StreamState):
    'Re-bucket every buffered element against the current A'
    members = sorted(e for bucket in state.buckets.values() for e in bucket)
    state.buckets = {}
    a = frozenset(state.a)
    for e in members:
        gain = state.f.marginal(e, a)
        if not _place(state, e, gain):
            state.trace.record('discard', e, marginal=gain)


def _prune(state: StreamState):
    for exponent in sorted(state.buckets):
        tau = state.tau(exponent)
        if tau < state.tau_min:
            for e in sorted(state.buckets[exponent]):
                state.trace.record('prune', e, tau=tau)
            del state.buckets[exponent]


def swap_pays(weight: float, evicted: float) -> bool:
    'A drained element replaces its lightest circuit member only when twice as heavy'
    return weight > 2 * evicted


def _drain(state: StreamState):
    while True:
        full = [i for i, members in state.buckets.items() if len(members) >= state.bucket_threshold]
        if not full:
            return
        exponent = max(full)
        tau = state.tau(exponent)
        g = uniform_pick(state.rng, state.buckets[exponent])
        state.buckets[exponent].discard(g)
        if not state.buckets[exponent]:
            del state.buckets[exponent]
        w = state.f.marginal(g, frozenset(state.a))
        state.weights[g] = w

        if state.m.can_add(state.a, g):
            state.a[g] = w
            state.trace.record('insert', g, tau=tau, weight=w, size=len(state.a) - 1)
            _refresh(state)
            continue

        circuit = state.m.fundamental_circuit(state.a, g)
        candidates = [x for x in circuit if x != g]
        if candidates:
            lightest = min(candidates, key=lambda x: (state.a[x], x))
            if swap_pays(w, state.a[lightest]):
                state.k[lightest] = state.a.pop(lightest)
                state.a[g] = w
                state.trace.record('swap', g, tau=tau, weight=w, other=lightest)
                logger.debug('swap %d (w=%s) for %d (w=%s)', g, w, lightest, state.k[lightest])
                _refresh(state)
                continue
        state.trace.record('reject', g, tau=tau, weight=w)


def stream_process(state: StreamState, element: int):
    '''
    Process one arrival.

    Raise:
        DuplicateElement if element was processed before
        DomainError if element is outside the ground set
    '''
    if not 0 <= element < state.f.n:
        raise DomainError('element {} is outside the ground set of size {}'.format(element, state.f.n))
    if element in state.seen:
        raise DuplicateElement('element {} arrived twice'.format(element))
    state.seen.add(element)
    value = state.f.marginal(element, ())

    # Step 1. Maintain V_d
    if len(state.withheld) < state.d:
        state.withheld[element] = value
        state.trace.record('withhold', element, marginal=value)
        state.peak_memory = max(state.peak_memory, state.memory())
        return
    e, e_value = element, value
    if state.withheld:
        lowest = min(state.withheld, key=lambda x: (state.withheld[x], -x))
        if value > state.withheld[lowest]:
            e, e_value = lowest, state.withheld.pop(lowest)
            state.withheld[element] = value
            state.trace.record('withhold', element, marginal=value, other=lowest)

    # Step 2. Update delta and tau_min, drop buckets below tau_min
    state.delta = max(state.delta, e_value)
    if state.rank >= 1:
        state.tau_min = state.eps / (1.0 + state.eps) * state.delta / state.rank
    else:
        state.tau_min = float('inf')
    _prune(state)

    # Step 3. Bucket the working element
    gain = state.f.marginal(e, frozenset(state.a))
    if _place(state, e, gain):
        state.trace.record('bucket', e, tau=state.tau(threshold_floor(gain, state.eps)), marginal=gain)
    else:
        state.trace.record('discard', e, marginal=gain)
    state.peak_memory = max(state.peak_memory, state.memory())

    # Step 4. Drain full buckets, largest threshold first
    _drain(state)


def stream_finalize(state: StreamState) -> StreamingSummary:
    buffered = frozenset(e for members in state.buckets.values() for e in members)
    return StreamingSummary(
        a=dict(state.a), k=dict(state.k), b=frozenset(state.withheld) | buffered,
        withheld=frozenset(state.withheld), weights=dict(state.weights), d=state.d, eps=state.eps,
        bucket_threshold=state.bucket_threshold, rank=state.rank, delta=state.delta,
        tau_min=state.tau_min, peak_memory=state.peak_memory, trace=state.trace)


def phase1_streaming(stream: Iterable[int], f: ObjectiveOracle, m: MatroidOracle,
                     d: int, eps: float, rng: RngHandle) -> StreamingSummary:
    'Run stream_init, stream_process over every arrival and stream_finalize'
    state = stream_init(d, eps, m, f, rng)
    for element in stream:
        stream_process(state, element)
    summary = stream_finalize(state)
    logger.debug('streaming summary: |A|=%d |K|=%d |B|=%d peak=%d',
                 len(summary.a), len(summary.k), len(summary.b), summary.peak_memory)
    return summary
