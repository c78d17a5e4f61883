# NOTICE
# Robust Summary Toolkit.
# See README.md for usage and CHANGELOG.md for release history.

'''
Phase I of the two-phase deletion-robust model, centralized setting.

The d elements of largest singleton value are withheld into the summary
verbatim.  The rest are swept over a descending ladder of thresholds
(1+eps)^i.  At each threshold tau the bucket B_tau holds every element
that is still feasible and gains at least tau; while the bucket has at
least max(1, ceil(d/eps)) elements a uniformly random member joins the
solution A.  Whatever remains in the bucket is moved to B.
'''
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from core import RngHandle, Trace, uniform_pick
from matroids import MatroidOracle
from message import InvalidConfiguration
from objectives import ObjectiveOracle

logger = logging.getLogger(__name__)


def ceil_ratio(d: int, eps: float) -> int:
    '''
    ceil(d/eps), evaluated in exact rational arithmetic on the decimal
    form of eps so that ceil(3/0.3) is 10.
    '''
    return math.ceil(Fraction(d) / Fraction(repr(float(eps))))


def bucket_threshold(d: int, eps: float) -> int:
    'max(1, ceil(d/eps)), the bucket size that triggers a draw'
    return max(1, ceil_ratio(d, eps))


def threshold_floor(value: float, eps: float) -> int:
    '''
    Arguments:
        value   Positive real
        eps     Ladder step

    Return:
        The largest integer i with (1+eps)^i <= value
    '''
    base = 1.0 + eps
    i = math.floor(math.log(value) / math.log(base))
    # The logarithm only gives an estimate; settle it by multiplication.
    while base ** i > value:
        i -= 1
    while base ** (i + 1) <= value:
        i += 1
    return i


def threshold_bound(k: int, eps: float) -> int:
    'Upper bound ceil(log_{1+eps}((1+eps) k / eps)) + 1 on the ladder length'
    return math.ceil(math.log((1.0 + eps) * k / eps) / math.log(1.0 + eps)) + 1


@dataclass(frozen=True)
class ThresholdSet:
    eps: float
    delta: float
    k: int
    exponents: Tuple[int, ...]

    @property
    def taus(self) -> List[float]:
        return [(1.0 + self.eps) ** i for i in self.exponents]

    def __len__(self):
        return len(self.exponents)

    def __iter__(self):
        return iter(self.taus)


def threshold_set(delta: float, k: int, eps: float) -> ThresholdSet:
    '''
    Arguments:
        delta   Reference value (the (d+1)-th largest singleton value)
        k       Matroid rank, at least 1
        eps     Ladder step in (0, 1)

    Return:
        ThresholdSet of every power (1+eps)^i, i any integer, with
        eps*delta/((1+eps)k) < (1+eps)^i <= delta, in descending order
    '''
    if delta <= 0:
        return ThresholdSet(eps, delta, k, ())
    base = 1.0 + eps
    lower = eps * delta / (base * k)
    exponents = []
    i = threshold_floor(delta, eps)
    while base ** i > lower:
        exponents.append(i)
        i -= 1
    return ThresholdSet(eps, delta, k, tuple(exponents))


@dataclass(frozen=True)
class Insertion:
    element: int
    tau: float
    marginal: float


@dataclass
class CentralizedSummary:
    '''
    Output of phase1_centralized.

    a           Insertions into the solution, in order
    b           Withheld elements plus bucket leftovers
    withheld    The d largest singletons (V_d)
    '''
    a: Tuple[Insertion, ...]
    b: FrozenSet[int]
    withheld: FrozenSet[int]
    thresholds: ThresholdSet
    d: int
    eps: float
    bucket_threshold: int
    n: int
    trace: Trace = field(default_factory=Trace)

    @property
    def a_set(self) -> FrozenSet[int]:
        return frozenset(insertion.element for insertion in self.a)

    @property
    def size(self) -> int:
        return len(self.a) + len(self.b)

    @property
    def peak_memory(self) -> int:
        # The centralized sweep holds the whole ground set.
        return self.n

    def to_dict(self) -> dict:
        return {
            'A': [{'id': x.element, 'tau': x.tau, 'marginal': x.marginal} for x in self.a],
            'B': sorted(self.b),
            'params': {'d': self.d, 'eps': self.eps, 'bucket_threshold': self.bucket_threshold,
                       'delta': self.thresholds.delta, 'k': self.thresholds.k,
                       'thresholds': len(self.thresholds)},
        }


def phase1_centralized(v: Iterable[int], f: ObjectiveOracle, m: MatroidOracle,
                       d: int, eps: float, rng: RngHandle) -> CentralizedSummary:
    '''
    Arguments:
        v     GroundSet (or any collection of ElementIds)
        f     Objective oracle
        m     Matroid oracle
        d     Deletion budget, 0 <= d <= |v|
        eps   Ladder step in (0, 1)
        rng   Source of the bucket draws

    Return:
        CentralizedSummary

    Raise:
        InvalidConfiguration if d > |v|, d < 0 or eps is outside (0, 1)
    '''
    elements = sorted(v)
    if not 0.0 < eps < 1.0:
        raise InvalidConfiguration('eps must lie in (0, 1), got {}'.format(eps))
    if not 0 <= d <= len(elements):
        raise InvalidConfiguration('deletion budget {} exceeds the ground set of {} elements'.format(d, len(elements)))
    trace = Trace()
    bt = bucket_threshold(d, eps)

    # Step 1. Withhold the d most valuable singletons; delta is the next value
    singles = {e: f.marginal(e, ()) for e in elements}
    order = sorted(elements, key=lambda e: (-singles[e], e))
    withheld = order[:d]
    for e in withheld:
        trace.record('withhold', e, marginal=singles[e])
    delta = singles[order[d]] if len(order) > d else 0.0

    k = m.rank()
    thresholds = threshold_set(delta, k, eps) if k >= 1 else ThresholdSet(eps, delta, k, ())
    logger.debug('centralized sweep: n=%d d=%d eps=%s delta=%s thresholds=%d bucket=%d',
                 len(elements), d, eps, delta, len(thresholds), bt)

    remaining = set(order[d:])
    blocked = set()
    a: List[Insertion] = []
    a_set = set()
    leftovers = set()

    def bucket(tau: float) -> Dict[int, float]:
        members = {}
        for e in sorted(remaining):
            if e in blocked:
                continue
            if not m.can_add(a_set, e):
                # A only grows, so an infeasible element stays infeasible.
                blocked.add(e)
                trace.record('infeasible', e, tau=tau, size=len(a))
                continue
            gain = f.marginal(e, a_set)
            if gain >= tau:
                members[e] = gain
        return members

    # Step 2. Sweep the ladder from the top
    for tau in thresholds.taus:
        members = bucket(tau)
        while len(members) >= bt:
            g = uniform_pick(rng, members.keys())
            a.append(Insertion(g, tau, members[g]))
            a_set.add(g)
            remaining.discard(g)
            trace.record('insert', g, tau=tau, marginal=members[g], size=len(a) - 1)
            members = bucket(tau)
        for e in sorted(members):
            trace.record('leftover', e, tau=tau, marginal=members[e])
        remaining.difference_update(members)
        leftovers.update(members)

    b = frozenset(withheld) | frozenset(leftovers)
    logger.debug('centralized summary: |A|=%d |B|=%d', len(a), len(b))
    return CentralizedSummary(
        a=tuple(a), b=b, withheld=frozenset(withheld), thresholds=thresholds,
        d=d, eps=eps, bucket_threshold=bt, n=len(elements), trace=trace)
