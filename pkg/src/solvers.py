# NOTICE
# Robust Summary Toolkit.
# See README.md for usage and CHANGELOG.md for release history.

'''
Phase II and the non-robust solvers it runs on what survives.

    phase2                     best of A minus D and the inner solver on (A + B) minus D
    lazy_greedy                priority-queue greedy with a (1+eps0) stale check
    swapping                   one-pass solver keeping exactly its solution, 2x swap rule
    omniscient_greedy          lazy greedy told D in advance
    omniscient_swapping        swapping told D in advance
    robust_swapping_cascade    d+1 swapping instances, rejects forwarded down the chain
'''
import heapq
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from matroids import MatroidOracle
from message import InvalidConfiguration
from objectives import ObjectiveOracle

logger = logging.getLogger(__name__)

DEFAULT_EPS0 = 0.0001

SOLVER_IDS = ('lazy-greedy', 'swapping', 'omniscient-greedy', 'omniscient-swapping',
              'robust-swapping-cascade')


@dataclass
class Solution:
    '''
    members       Solution elements in the order they were taken
    weights       Fixed weights of the members, when the solver assigns them
    details       Solver-specific facts worth reporting
    '''
    members: Tuple[int, ...]
    value: float
    solver_id: str
    oracle_calls: int
    weights: Optional[Dict[int, float]] = None
    details: dict = field(default_factory=dict)

    @property
    def member_set(self) -> FrozenSet[int]:
        return frozenset(self.members)

    def __len__(self):
        return len(self.members)


@dataclass(frozen=True)
class InnerSolver:
    'The Phase-II solver and its approximation factor beta'
    kind: str = 'lazy-greedy'
    eps0: float = DEFAULT_EPS0

    def __post_init__(self):
        if self.kind not in ('lazy-greedy', 'swapping'):
            raise InvalidConfiguration('unknown inner solver {!r}'.format(self.kind))
        if self.eps0 <= 0:
            raise InvalidConfiguration('eps0 must be positive, got {}'.format(self.eps0))

    @property
    def beta(self) -> float:
        if self.kind == 'lazy-greedy':
            return 2.0 + 3.0 * self.eps0
        return 4.0

    def solve(self, v: Iterable[int], f: ObjectiveOracle, m: MatroidOracle) -> Solution:
        if self.kind == 'lazy-greedy':
            return lazy_greedy(v, f, m, self.eps0)
        return swapping(sorted(v), f, m)


def max_iterations(k: int, eps0: float) -> int:
    'ceil((1/eps0) ln(k/eps0)), the re-queue cap of lazy greedy'
    return max(1, math.ceil(math.log(k / eps0) / eps0))


def lazy_greedy(v: Iterable[int], f: ObjectiveOracle, m: MatroidOracle,
                eps0: float = DEFAULT_EPS0, solver_id: str = 'lazy-greedy') -> Solution:
    '''
    Arguments:
        v      Candidate elements
        f      Objective oracle
        m      Matroid oracle
        eps0   Precision; an element is taken when its stale priority is
               within a factor (1+eps0) of its fresh gain

    Return:
        Solution; ties between priorities go to the smaller ElementId
    '''
    if eps0 <= 0:
        raise InvalidConfiguration('eps0 must be positive, got {}'.format(eps0))
    start = f.calls
    k = m.rank()
    a: List[int] = []
    weights = {}
    if k == 0:
        return Solution((), 0.0, solver_id, 0, weights)
    cap = max_iterations(k, eps0)
    requeued = Counter()

    heap = [(-f.marginal(e, ()), e) for e in sorted(set(v))]
    heapq.heapify(heap)
    while heap and len(a) < k:
        priority, e = heapq.heappop(heap)
        priority = -priority
        if not m.can_add(a, e):
            continue
        gain = f.marginal(e, a)
        if priority <= (1.0 + eps0) * gain:
            a.append(e)
            weights[e] = gain
            continue
        requeued[e] += 1
        if requeued[e] < cap:
            heapq.heappush(heap, (-gain, e))

    value = f.value(a)
    return Solution(tuple(a), value, solver_id, f.calls - start, weights)


def swapping(stream: Iterable[int], f: ObjectiveOracle, m: MatroidOracle,
             solver_id: str = 'swapping') -> Solution:
    '''
    One pass over stream.  Each arrival e gets the fixed weight f(e|A); it
    is added when A+e is independent, otherwise it replaces the lightest
    member k of the circuit of A+e when 2 w(k) < w(e).
    '''
    start = f.calls
    a: Dict[int, float] = {}
    for e in stream:
        _offer(a, e, f, m)
    value = f.value(a)
    return Solution(tuple(a), value, solver_id, f.calls - start, dict(a))


def _offer(a: Dict[int, float], e: int, f: ObjectiveOracle, m: MatroidOracle) -> Optional[int]:
    '''
    Offer e to the swapping solution a (updated in place).

    Return:
        None if e was taken without eviction, the evicted element after a
        swap, or e itself when it was rejected
    '''
    w = f.marginal(e, frozenset(a))
    if m.can_add(a, e):
        a[e] = w
        return None
    candidates = [x for x in m.fundamental_circuit(a, e) if x != e]
    if candidates:
        lightest = min(candidates, key=lambda x: (a[x], x))
        if 2 * a[lightest] < w:
            del a[lightest]
            a[e] = w
            return lightest
    return e


def omniscient_greedy(v: Iterable[int], deleted: Iterable[int], f: ObjectiveOracle, m: MatroidOracle,
                      eps0: float = DEFAULT_EPS0) -> Solution:
    survivors = set(v) - set(deleted)
    return lazy_greedy(survivors, f, m, eps0, solver_id='omniscient-greedy')


def omniscient_swapping(stream: Iterable[int], deleted: Iterable[int], f: ObjectiveOracle,
                        m: MatroidOracle) -> Solution:
    deleted = set(deleted)
    return swapping([e for e in stream if e not in deleted], f, m, solver_id='omniscient-swapping')


def phase2(summary, deleted: Iterable[int], f: ObjectiveOracle, m: MatroidOracle,
           alg: InnerSolver) -> Solution:
    '''
    Arguments:
        summary   CentralizedSummary or StreamingSummary
        deleted   The adversary's deletion set D
        f, m      Objective and matroid oracles
        alg       Inner solver run on what survives

    Return:
        The better of A minus D and alg((A + B) minus D).  Ties go to the
        inner solver.
    '''
    deleted = frozenset(deleted)
    if len(deleted) > summary.d:
        logger.warning('deletion set of %d elements exceeds the budget d=%d used in phase I',
                       len(deleted), summary.d)
    start = f.calls
    a_order = [x.element for x in summary.a] if isinstance(summary.a, tuple) else list(summary.a)
    a_survivors = [e for e in a_order if e not in deleted]
    b_survivors = summary.b - deleted
    inner = alg.solve(sorted(set(a_survivors) | b_survivors), f, m)
    a_value = f.value(a_survivors)
    details = {'inner_value': inner.value, 'a_value': a_value, 'beta': alg.beta}
    if a_value > inner.value:
        details['arm'] = 'A'
        members, value, weights = tuple(a_survivors), a_value, None
    else:
        details['arm'] = alg.kind
        members, value, weights = inner.members, inner.value, inner.weights
    return Solution(members, value, 'phase2/{}'.format(alg.kind), f.calls - start, weights, details)


@dataclass
class CascadeSummary:
    '''
    The d+1 swapping solutions of a cascade run.  They are pairwise
    disjoint, so a deletion set of at most d elements leaves at least one
    of them untouched.
    '''
    solutions: List[Dict[int, float]]
    d: int
    peak_memory: int
    oracle_calls: int

    @property
    def b(self) -> FrozenSet[int]:
        return frozenset(e for solution in self.solutions for e in solution)

    @property
    def size(self) -> int:
        return sum(len(solution) for solution in self.solutions)

    def phase2(self, deleted: Iterable[int], f: ObjectiveOracle) -> Solution:
        '''
        Return the best untouched instance.  If every instance lost an
        element the best surviving remainder is returned instead.
        '''
        deleted = frozenset(deleted)
        start = f.calls
        untouched = [i for i, solution in enumerate(self.solutions) if not deleted.intersection(solution)]
        candidates = untouched or list(range(len(self.solutions)))
        if not untouched:
            logger.warning('every cascade instance lost an element to the deletion set')
        best, best_value, best_members = None, -1.0, ()
        for i in candidates:
            members = tuple(e for e in self.solutions[i] if e not in deleted)
            value = f.value(members)
            if value > best_value:
                best, best_value, best_members = i, value, members
        details = {'instance': best, 'untouched': untouched,
                   'last_untouched': untouched[-1] if untouched else None}
        weights = {e: self.solutions[best][e] for e in best_members} if best is not None else {}
        return Solution(best_members, max(best_value, 0.0), 'robust-swapping-cascade',
                        f.calls - start, weights, details)


def robust_swapping_cascade(stream: Iterable[int], d: int, f: ObjectiveOracle,
                            m: MatroidOracle) -> CascadeSummary:
    '''
    Run d+1 swapping instances in a chain.  An arrival is offered to
    instance 0; whatever an instance rejects or evicts is offered to the
    next one, and the last instance's rejects are dropped.
    '''
    if d < 0:
        raise InvalidConfiguration('deletion budget must be non-negative, got {}'.format(d))
    start = f.calls
    solutions: List[Dict[int, float]] = [{} for _ in range(d + 1)]
    peak = 0
    for e in stream:
        offered = e
        for solution in solutions:
            offered = _offer(solution, offered, f, m)
            if offered is None:
                break
        peak = max(peak, sum(len(solution) for solution in solutions))
    return CascadeSummary(solutions, d, peak, f.calls - start)
