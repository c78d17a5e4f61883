# NOTICE
# Robust Summary Toolkit.
# See README.md for usage and CHANGELOG.md for release history.

'''
Deletion-set generators.

A plan depends only on the instance and its own seed.  The harness draws
every plan before Phase I runs, so no plan can see algorithm randomness.
'''
import logging
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, Optional

from core import RngHandle
from matroids import MatroidOracle
from message import InvalidConfiguration
from objectives import ObjectiveOracle
from solvers import DEFAULT_EPS0, lazy_greedy

logger = logging.getLogger(__name__)

ADVERSARY_IDS = ('greedy', 'random', 'top-value', 'none')


@dataclass(frozen=True)
class DeletionPlan:
    deleted: FrozenSet[int]
    generator_id: str
    generator_seed: Optional[int] = None
    rounds: int = 0

    def to_dict(self) -> dict:
        return {'generator-id': self.generator_id, 'seed': self.generator_seed,
                'deleted': sorted(self.deleted), 'rounds': self.rounds}

    @classmethod
    def from_dict(cls, data: dict) -> 'DeletionPlan':
        return cls(frozenset(data['deleted']), data['generator-id'], data.get('seed'), data.get('rounds', 0))

    def __len__(self):
        return len(self.deleted)


def greedy_adversary(v: Iterable[int], f: ObjectiveOracle, m: MatroidOracle, d: int,
                     eps0: float = DEFAULT_EPS0) -> DeletionPlan:
    '''
    Delete high-value independent sets found by lazy greedy.  When one
    greedy solution holds fewer than d elements, greedy runs again on the
    elements no earlier round selected, until d elements are collected or
    nothing is left.
    '''
    if d < 0:
        raise InvalidConfiguration('deletion budget must be non-negative, got {}'.format(d))
    remaining = set(v)
    deleted: List[int] = []
    rounds = 0
    while len(deleted) < d and remaining:
        solution = lazy_greedy(remaining, f, m, eps0)
        if not solution.members:
            break
        rounds += 1
        deleted.extend(solution.members[:d - len(deleted)])
        remaining.difference_update(solution.members)
    if rounds > 1:
        logger.debug('greedy adversary needed %d rounds for d=%d', rounds, d)
    return DeletionPlan(frozenset(deleted), 'greedy', None, rounds)


def random_adversary(v: Iterable[int], d: int, seed: int) -> DeletionPlan:
    'Uniform random d-subset of v'
    elements = sorted(v)
    if not 0 <= d <= len(elements):
        raise InvalidConfiguration('cannot delete {} of {} elements'.format(d, len(elements)))
    chosen = RngHandle(seed).sample(elements, d) if d else []
    return DeletionPlan(frozenset(chosen), 'random', seed, 1)


def top_value_adversary(v: Iterable[int], f: ObjectiveOracle, d: int) -> DeletionPlan:
    'The d largest singletons, ties to the smaller ElementId'
    elements = sorted(v)
    values = {e: f.marginal(e, ()) for e in elements}
    chosen = sorted(elements, key=lambda e: (-values[e], e))[:max(d, 0)]
    return DeletionPlan(frozenset(chosen), 'top-value', None, 1)
