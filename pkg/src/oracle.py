# NOTICE
# Robust Summary Toolkit.
# See README.md for usage and CHANGELOG.md for release history.

'''
Ground truth for small instances: the exact optimum, exhaustive checks of
the matroid axioms and of monotone submodularity, and a transversal finder
that returns either a system of distinct representatives or a subfamily
violating the marriage condition.
'''
import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
from networkx.algorithms import bipartite

from core import RngHandle
from matroids import MatroidOracle
from message import PreconditionError, RefusalError
from objectives import ObjectiveOracle

logger = logging.getLogger(__name__)

GUARDRAIL = 20
EXHAUSTIVE_LIMIT = 8
RELATIVE_TOLERANCE = 1e-9
ABSOLUTE_TOLERANCE = 1e-12


def tolerance(scale: float) -> float:
    return max(ABSOLUTE_TOLERANCE, RELATIVE_TOLERANCE * abs(scale))


@dataclass(frozen=True)
class BruteForceResult:
    opt_set: FrozenSet[int]
    opt_value: float
    enumerated_count: int


@dataclass
class CheckResult:
    '''
    passed           Verdict
    counterexample   First violation found, None on a pass
    margin           Worst slack seen (for numeric checks)
    '''
    passed: bool
    counterexample: Optional[tuple] = None
    margin: Optional[float] = None
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.passed


def brute_force_opt(v: Iterable[int], f: ObjectiveOracle, m: MatroidOracle,
                    guardrail: int = GUARDRAIL) -> BruteForceResult:
    '''
    Exact maximum of f over the independent subsets of v.

    Subsets are grown in increasing element order; a dependent set is not
    extended, since all its supersets are dependent too.

    Raise:
        RefusalError if |v| exceeds the guardrail
    '''
    elements = sorted(set(v))
    if len(elements) > guardrail:
        raise RefusalError('exhaustive search refused for {} elements (limit {})'.format(len(elements), guardrail))
    best_set, best_value = frozenset(), 0.0
    count = 1

    def extend(current: List[int], start: int):
        nonlocal best_set, best_value, count
        for index in range(start, len(elements)):
            candidate = current + [elements[index]]
            if not m.is_independent(candidate):
                continue
            count += 1
            value = f.value(candidate)
            if value > best_value + tolerance(best_value):
                best_set, best_value = frozenset(candidate), value
            extend(candidate, index + 1)

    extend([], 0)
    return BruteForceResult(best_set, best_value, count)


def enumerate_opt(v: Iterable[int], f: ObjectiveOracle, m: MatroidOracle) -> BruteForceResult:
    'Prune-free enumeration of every subset, for cross-checking brute_force_opt'
    elements = sorted(set(v))
    if len(elements) > EXHAUSTIVE_LIMIT + 4:
        raise RefusalError('prune-free enumeration refused for {} elements'.format(len(elements)))
    best_set, best_value, count = frozenset(), 0.0, 0
    for mask in range(1 << len(elements)):
        subset = [e for bit, e in enumerate(elements) if mask >> bit & 1]
        if not m.is_independent(subset):
            continue
        count += 1
        value = f.value(subset)
        if value > best_value + tolerance(best_value):
            best_set, best_value = frozenset(subset), value
    return BruteForceResult(best_set, best_value, count)


def plain_greedy(v: Iterable[int], f: ObjectiveOracle, m: MatroidOracle) -> Tuple[int, ...]:
    'Textbook greedy: the feasible element of largest gain, ties to the smaller id'
    remaining = set(v)
    chosen: List[int] = []
    k = m.rank()
    while len(chosen) < k:
        feasible = [e for e in sorted(remaining) if m.can_add(chosen, e)]
        if not feasible:
            break
        gains = {e: f.value(chosen + [e]) - f.value(chosen) for e in feasible}
        best = min(feasible, key=lambda e: (-gains[e], e))
        chosen.append(best)
        remaining.discard(best)
    return tuple(chosen)


def check_matroid_axioms(m: MatroidOracle, n: Optional[int] = None) -> CheckResult:
    '''
    Exhaustively verify the augmentation axiom over all pairs of
    independent sets, then downward closure, over the first n elements.

    Return:
        CheckResult whose counterexample is (axiom, A, B) or (axiom, B, x)
    '''
    n = m.n if n is None else n
    if n > 10:
        raise PreconditionError('exhaustive axiom check is limited to 10 elements, got {}'.format(n))
    subsets = [frozenset(e for e in range(n) if mask >> e & 1) for mask in range(1 << n)]
    independent = [s for s in subsets if m.is_independent(s)]

    if frozenset() not in independent:
        return CheckResult(False, ('nonempty', frozenset(), None))

    for a in independent:
        for b in independent:
            if len(a) < len(b) and not any(m.is_independent(a | {e}) for e in b - a):
                return CheckResult(False, ('augmentation', a, b))

    for b in independent:
        for x in b:
            if not m.is_independent(b - {x}):
                return CheckResult(False, ('downward-closure', b, x))

    sizes = {len(s) for s in independent if all(not m.is_independent(s | {e}) for e in range(n) if e not in s)}
    return CheckResult(True, details={'independent_sets': len(independent), 'basis_sizes': sorted(sizes)})


def check_submodular_monotone(f: ObjectiveOracle, v: Iterable[int], samples: int = 1000,
                              rng: Optional[RngHandle] = None) -> CheckResult:
    '''
    Check f(e|Y) >= 0 and f(e|X) >= f(e|Y) for X subset of Y, e outside Y.

    All chains are visited when |v| <= 8; otherwise `samples` random chains
    are drawn.  Values are recomputed from scratch.

    Return:
        CheckResult with margin = worst f(e|X) - f(e|Y) and
        details['monotone_margin'] = worst f(e|Y)
    '''
    elements = sorted(set(v))
    worst_sub, worst_mono = float('inf'), float('inf')
    counterexample = None
    scale = 0.0

    if len(elements) <= EXHAUSTIVE_LIMIT:
        table = {}
        for mask in range(1 << len(elements)):
            subset = frozenset(e for bit, e in enumerate(elements) if mask >> bit & 1)
            table[subset] = f.value(subset)
        scale = max((abs(x) for x in table.values()), default=0.0)
        chains = []
        for y in table:
            for size in range(len(y) + 1):
                for x in itertools.combinations(sorted(y), size):
                    chains.append((frozenset(x), y))
        lookup = lambda s: table[s]
    else:
        rng = rng if rng is not None else RngHandle(0)
        chains = []
        for _ in range(samples):
            y = frozenset(e for e in elements if rng.integers(2))
            x = frozenset(e for e in y if rng.integers(2))
            chains.append((x, y))
        lookup = f.value

    for x, y in chains:
        for e in elements:
            if e in y:
                continue
            gain_y = lookup(y | {e}) - lookup(y)
            gain_x = lookup(x | {e}) - lookup(x)
            if lookup is f.value:
                scale = max(scale, abs(lookup(y | {e})))
            tol = tolerance(scale)
            if gain_y < worst_mono:
                worst_mono = gain_y
                if gain_y < -tol and counterexample is None:
                    counterexample = ('monotone', y, e)
            if gain_x - gain_y < worst_sub:
                worst_sub = gain_x - gain_y
                if gain_x - gain_y < -tol and counterexample is None:
                    counterexample = ('submodular', x, y, e)

    worst_sub = 0.0 if worst_sub == float('inf') else worst_sub
    worst_mono = 0.0 if worst_mono == float('inf') else worst_mono
    return CheckResult(counterexample is None, counterexample, worst_sub,
                       {'monotone_margin': worst_mono, 'chains': len(chains)})


@dataclass
class TransversalResult:
    '''
    mapping     Set index -> chosen element, when a transversal exists
    violation   Indices of a subfamily W with |W| > |union of W| otherwise
    '''
    mapping: Optional[Dict[int, Hashable]] = None
    violation: Optional[List[int]] = None
    union: Optional[FrozenSet[Hashable]] = None

    def __bool__(self):
        return self.mapping is not None


def find_transversal(family: Sequence[Iterable[Hashable]]) -> TransversalResult:
    '''
    Arguments:
        family   List of sets

    Return:
        TransversalResult with an injective choice function found by
        Hopcroft-Karp matching, or with the left vertices outside the
        minimum vertex cover as a Hall-violating subfamily
    '''
    family = [frozenset(members) for members in family]
    graph = nx.Graph()
    left = [('set', i) for i in range(len(family))]
    graph.add_nodes_from(left, bipartite=0)
    for i, members in enumerate(family):
        for element in members:
            graph.add_node(('element', element), bipartite=1)
            graph.add_edge(('set', i), ('element', element))

    matching = bipartite.hopcroft_karp_matching(graph, top_nodes=left)
    if all(node in matching for node in left):
        return TransversalResult(mapping={i: matching[('set', i)][1] for i in range(len(family))})

    cover = bipartite.to_vertex_cover(graph, matching, top_nodes=left)
    violation = sorted(i for (_, i) in left if ('set', i) not in cover)
    union = frozenset().union(*(family[i] for i in violation))
    return TransversalResult(violation=violation, union=union)


def hall_condition(family: Sequence[Iterable[Hashable]]) -> bool:
    'True iff every subfamily W has |union of W| >= |W|, by enumeration'
    family = [frozenset(members) for members in family]
    for size in range(1, len(family) + 1):
        for subfamily in itertools.combinations(family, size):
            if len(frozenset().union(*subfamily)) < size:
                return False
    return True
