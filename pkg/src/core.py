# NOTICE
# Robust Summary Toolkit.
# See README.md for usage and CHANGELOG.md for release history.

'''
Shared identifiers, the randomness contract and execution traces.

Elements are dense integers 0..n-1.  External labels (vertex names,
point ids in a CSV file) are mapped to ids when a dataset is loaded.

Every random draw made by an algorithm goes through an RngHandle.
A handle is a numpy Generator over the counter-based Philox bit
generator, seeded from (seed, stream_id) through a SeedSequence, so
a given pair reproduces the same draws on every platform.
'''
import logging
from dataclasses import dataclass, field
from typing import Iterable, Iterator, List, Optional, Sequence

import numpy as np

from message import DomainError, PreconditionError

logger = logging.getLogger(__name__)

PRNG_ALGORITHM = 'numpy-philox4x64-seedsequence'


class GroundSet:
    '''
    The universe V of a run.

    Arguments:
        n        Number of elements
        labels   Optional sequence of n external labels
    '''
    def __init__(self, n: int, labels: Optional[Sequence[str]] = None):
        if n < 0:
            raise DomainError('ground set size must be non-negative, got {}'.format(n))
        if labels is not None and len(labels) != n:
            raise DomainError('{} labels given for a ground set of {} elements'.format(len(labels), n))
        self.n = n
        self.labels = list(labels) if labels is not None else None
        self._index = None

    def __len__(self) -> int:
        return self.n

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.n))

    def __contains__(self, element) -> bool:
        return isinstance(element, (int, np.integer)) and 0 <= element < self.n

    def check(self, elements: Iterable[int]):
        '''
        Raise DomainError if any of elements is not an id of this ground set.
        '''
        for element in elements:
            if element not in self:
                raise DomainError('element {} is outside the ground set of size {}'.format(element, self.n))

    def label(self, element: int) -> str:
        if self.labels is None:
            return str(element)
        return self.labels[element]

    def id_of(self, label: str) -> int:
        if self.labels is None:
            return int(label)
        if self._index is None:
            self._index = {lab: i for i, lab in enumerate(self.labels)}
        try:
            return self._index[label]
        except KeyError:
            raise DomainError('unknown label {!r}'.format(label))

    def __repr__(self):
        return 'GroundSet(n={})'.format(self.n)


class RngHandle:
    '''
    Reproducible random stream identified by (seed, stream_id).

    Arguments:
        seed        Non-negative integer (64 bits are used)
        stream_id   Non-negative integer selecting an independent stream,
                    usually the trial index
    '''
    def __init__(self, seed: int, stream_id: int = 0):
        if seed < 0 or stream_id < 0:
            raise PreconditionError('seed and stream id must be non-negative')
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self.stream_id = int(stream_id)
        sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
        self.generator = np.random.Generator(np.random.Philox(sequence))

    def integers(self, high: int) -> int:
        'Uniform integer in [0, high)'
        return int(self.generator.integers(0, high))

    def permutation(self, items: Sequence[int]) -> List[int]:
        return [int(x) for x in self.generator.permutation(np.asarray(items, dtype=np.int64))]

    def sample(self, items: Sequence[int], size: int) -> List[int]:
        'Uniform size-subset of items without replacement'
        chosen = self.generator.choice(np.asarray(items, dtype=np.int64), size=size, replace=False)
        return [int(x) for x in chosen]

    def child(self, stream_id: int) -> 'RngHandle':
        'Independent handle with the same seed and another stream id'
        return RngHandle(self.seed, stream_id)

    def describe(self) -> dict:
        return {'prng-algorithm': PRNG_ALGORITHM, 'seed': self.seed, 'stream-id': self.stream_id}

    def __repr__(self):
        return 'RngHandle(seed={}, stream_id={})'.format(self.seed, self.stream_id)


@dataclass(frozen=True)
class TraceEvent:
    '''
    One step of a run.

    kind is one of
        withhold     element placed in V_d
        insert       element added to the solution A
        infeasible   element first found to violate the matroid (size = |A| then)
        leftover     element left in a bucket and moved to B
        bucket       element placed in the bucket of tau
        discard      element dropped below tau_min
        swap         element replaced `other` in A; `other` moves to K
        reject       drained element failed the swap rule
        prune        bucket of tau dropped below tau_min
    '''
    kind: str
    element: Optional[int]
    tau: Optional[float] = None
    marginal: Optional[float] = None
    weight: Optional[float] = None
    other: Optional[int] = None
    size: Optional[int] = None

    def to_dict(self) -> dict:
        return {key: value for key, value in self.__dict__.items() if value is not None}


@dataclass
class Trace:
    'Append-only list of TraceEvents, in execution order'
    events: List[TraceEvent] = field(default_factory=list)

    def record(self, kind: str, element: Optional[int], **values) -> TraceEvent:
        event = TraceEvent(kind, element, **values)
        self.events.append(event)
        return event

    def of_kind(self, *kinds: str) -> List[TraceEvent]:
        return [event for event in self.events if event.kind in kinds]

    def __iter__(self):
        return iter(self.events)

    def __len__(self):
        return len(self.events)


def uniform_pick(rng: RngHandle, pool) -> int:
    '''
    Arguments:
        rng    RngHandle to draw from
        pool   Non-empty collection of ElementIds (not modified)

    Return:
        One element of pool, each with probability 1/|pool|

    Raise:
        PreconditionError if pool is empty
    '''
    if not pool:
        raise PreconditionError('uniform_pick called with an empty pool')
    # Sorting makes the pick independent of set iteration order.
    ordered = sorted(pool)
    return ordered[rng.integers(len(ordered))]
