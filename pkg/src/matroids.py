# NOTICE
# Robust Summary Toolkit.
# See README.md for usage and CHANGELOG.md for release history.

'''
Matroid independence oracles.

Every oracle answers is_independent() over subsets of the ground set
0..n-1 and derives fundamental circuits and rank from it.  Oracles are
immutable after construction and may be shared between trials.

Families:
    UniformMatroid      |S| <= k
    PartitionMatroid    at most cap[p] elements from each part p
    LaminarMatroid      capacities on a laminar (nested or disjoint) family
    TruncatedMatroid    any oracle intersected with |S| <= k
'''
import logging
from collections import Counter
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from message import ConfigError, DomainError, InvalidConfiguration, PreconditionError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Circuit:
    'A minimal dependent set'
    members: FrozenSet[int]

    def __contains__(self, element):
        return element in self.members

    def __iter__(self):
        return iter(sorted(self.members))

    def __len__(self):
        return len(self.members)


class MatroidOracle:
    '''
    Base class.  Subclasses implement _independent(s) for a frozenset s
    that has already been checked against the ground set.
    '''
    kind = None

    def __init__(self, n: int):
        if n < 0:
            raise InvalidConfiguration('matroid ground set size must be non-negative, got {}'.format(n))
        self.n = n
        self._rank = None

    def _independent(self, s: FrozenSet[int]) -> bool:
        raise NotImplementedError

    def _check(self, elements: Iterable[int]):
        for element in elements:
            if not 0 <= element < self.n:
                raise DomainError('element {} is outside the ground set of size {}'.format(element, self.n))

    def is_independent(self, s: Iterable[int]) -> bool:
        '''
        Arguments:
            s   Collection of ElementIds

        Return:
            True iff s is independent

        Raise:
            DomainError if s holds an element outside the ground set
        '''
        s = frozenset(s)
        self._check(s)
        return self._independent(s)

    def can_add(self, a: Iterable[int], e: int) -> bool:
        'True iff a + e is independent'
        return self.is_independent(frozenset(a) | {e})

    def fundamental_circuit(self, a: Iterable[int], e: int) -> Circuit:
        '''
        Arguments:
            a   Independent set
            e   Element with a + e dependent

        Return:
            The unique circuit of a + e, computed as
            {e} plus every x in a with a + e - x independent

        Raise:
            PreconditionError if a is dependent or a + e is independent
        '''
        a = frozenset(a)
        self._check(a | {e})
        if not self._independent(a):
            raise PreconditionError('fundamental_circuit needs an independent base set')
        extended = a | {e}
        if self._independent(extended):
            raise PreconditionError('element {} does not close a circuit'.format(e))
        members = {e}
        for x in a:
            if self._independent(extended - {x}):
                members.add(x)
        return Circuit(frozenset(members))

    def rank(self) -> int:
        '''
        Size of a maximal independent set.  The default builds one greedily,
        which is exact for every matroid.
        '''
        if self._rank is None:
            self._rank = len(self.greedy_basis())
        return self._rank

    def greedy_basis(self, order: Optional[Iterable[int]] = None) -> List[int]:
        basis = []
        for element in (range(self.n) if order is None else order):
            if self._independent(frozenset(basis) | {element}):
                basis.append(element)
        return basis

    def truncate(self, k: int) -> 'TruncatedMatroid':
        return TruncatedMatroid(self, k)

    def describe(self) -> dict:
        return {'kind': self.kind, 'n': self.n, 'rank': self.rank()}


class UniformMatroid(MatroidOracle):
    kind = 'uniform'

    def __init__(self, n: int, k: int):
        super().__init__(n)
        if k < 0:
            raise InvalidConfiguration('uniform matroid capacity must be non-negative, got {}'.format(k))
        self.k = k

    def _independent(self, s):
        return len(s) <= self.k

    def rank(self):
        return min(self.k, self.n)

    def __repr__(self):
        return 'UniformMatroid(n={}, k={})'.format(self.n, self.k)


class PartitionMatroid(MatroidOracle):
    '''
    Arguments:
        assignment   Sequence of part indices, entry i is the part of element i
        capacities   Sequence of per-part capacities, indexed by part
    '''
    kind = 'partition'

    def __init__(self, assignment: Sequence[int], capacities: Sequence[int]):
        super().__init__(len(assignment))
        self.assignment = tuple(int(p) for p in assignment)
        self.capacities = tuple(int(c) for c in capacities)
        errmsgs = []
        for element, part in enumerate(self.assignment):
            if not 0 <= part < len(self.capacities):
                errmsgs.append(ConfigError(
                    message='part {} has no capacity'.format(part), element=element))
        for part, cap in enumerate(self.capacities):
            if cap < 0:
                errmsgs.append(ConfigError(message='part {} has negative capacity {}'.format(part, cap)))
        if errmsgs:
            raise InvalidConfiguration(errmsgs)

    @classmethod
    def from_parts(cls, parts: Sequence[Iterable[int]], capacities: Sequence[int],
                   n: Optional[int] = None) -> 'PartitionMatroid':
        '''
        Build from explicit part member lists.  Every element 0..n-1 must
        belong to exactly one part.
        '''
        parts = [list(part) for part in parts]
        if n is None:
            n = sum(len(part) for part in parts)
        assignment = [None] * n
        for index, part in enumerate(parts):
            for element in part:
                if not 0 <= element < n or assignment[element] is not None:
                    raise InvalidConfiguration(ConfigError(
                        message='element placed in more than one part or outside the ground set',
                        element=element))
                assignment[element] = index
        missing = [element for element, part in enumerate(assignment) if part is None]
        if missing:
            raise InvalidConfiguration('elements {} belong to no part'.format(missing))
        return cls(assignment, capacities)

    def _independent(self, s):
        counts = Counter(self.assignment[e] for e in s)
        return all(count <= self.capacities[part] for part, count in counts.items())

    def rank(self):
        sizes = Counter(self.assignment)
        return sum(min(cap, sizes.get(part, 0)) for part, cap in enumerate(self.capacities))

    def __repr__(self):
        return 'PartitionMatroid(n={}, parts={})'.format(self.n, len(self.capacities))


class LaminarMatroid(MatroidOracle):
    '''
    Arguments:
        n        Ground set size
        family   Sequence of (members, capacity) pairs; any two member
                 sets must be disjoint or nested

    The family is stored as a forest of capacity nodes.  Each element
    points at the smallest set holding it; an independence test walks
    from that node to its root, counting.
    '''
    kind = 'laminar'

    def __init__(self, n: int, family: Sequence[Tuple[Iterable[int], int]]):
        super().__init__(n)
        self.family = [(frozenset(members), int(cap)) for members, cap in family]

        # Step 1. Validate members, capacities and laminarity
        errmsgs = []
        for index, (members, cap) in enumerate(self.family):
            if cap < 0:
                errmsgs.append(ConfigError(message='set {} has negative capacity {}'.format(index, cap)))
            for element in members:
                if not 0 <= element < n:
                    errmsgs.append(ConfigError(
                        message='set {} holds an element outside the ground set'.format(index),
                        element=element))
        for i, (first, _) in enumerate(self.family):
            for j in range(i + 1, len(self.family)):
                second = self.family[j][0]
                if first & second and not (first <= second or second <= first):
                    errmsgs.append(ConfigError(
                        message='sets {} and {} overlap without nesting; the family is not laminar'.format(i, j)))
        if errmsgs:
            raise InvalidConfiguration(errmsgs)

        # Step 2. Parent of each node is the smallest set strictly above it.
        # Equal sets nest by position.
        order = sorted(range(len(self.family)), key=lambda i: (-len(self.family[i][0]), i))
        self.parent: Dict[int, Optional[int]] = {}
        for position, node in enumerate(order):
            members = self.family[node][0]
            parent = None
            for above in order[:position]:
                if members <= self.family[above][0]:
                    if parent is None or len(self.family[above][0]) <= len(self.family[parent][0]):
                        parent = above
            self.parent[node] = parent

        # Step 3. Leaf node of each element
        self.leaf: Dict[int, int] = {}
        for node in order:
            for element in self.family[node][0]:
                self.leaf[element] = node

    def chain(self, element: int) -> List[int]:
        'Capacity nodes holding element, leaf first'
        nodes = []
        node = self.leaf.get(element)
        while node is not None:
            nodes.append(node)
            node = self.parent[node]
        return nodes

    def _independent(self, s):
        counts = Counter()
        for element in s:
            for node in self.chain(element):
                counts[node] += 1
                if counts[node] > self.family[node][1]:
                    return False
        return True

    def __repr__(self):
        return 'LaminarMatroid(n={}, sets={})'.format(self.n, len(self.family))


class TruncatedMatroid(MatroidOracle):
    'Independent sets of `inner` with at most k elements'
    kind = 'truncation'

    def __init__(self, inner: MatroidOracle, k: int):
        super().__init__(inner.n)
        if k < 0:
            raise InvalidConfiguration('truncation size must be non-negative, got {}'.format(k))
        self.inner = inner
        self.k = k

    def _independent(self, s):
        return len(s) <= self.k and self.inner._independent(s)

    def rank(self):
        return min(self.k, self.inner.rank())

    def describe(self):
        return {'kind': self.kind, 'n': self.n, 'rank': self.rank(), 'k': self.k,
                'inner': self.inner.describe()}

    def __repr__(self):
        return 'TruncatedMatroid({!r}, k={})'.format(self.inner, self.k)


def is_independent(m: MatroidOracle, s: Iterable[int]) -> bool:
    return m.is_independent(s)


def fundamental_circuit(m: MatroidOracle, a: Iterable[int], e: int) -> Circuit:
    return m.fundamental_circuit(a, e)


def rank(m: MatroidOracle) -> int:
    return m.rank()


def truncate(m: MatroidOracle, k: int) -> TruncatedMatroid:
    return m.truncate(k)
