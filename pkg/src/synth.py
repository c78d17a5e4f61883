# NOTICE
# Robust Summary Toolkit.
# See README.md for usage and CHANGELOG.md for release history.

'''
Synthetic instances.

    geometric            uniform points in the unit square, part label
                         from an equally spaced grid x grid partition
    coverage             random graph with edge probability p
    modular-lowerbound   k + d unit weights among zeros, uniform(k)

Also random small matroids and objectives for the verification suites.
'''
import logging
from typing import Dict, List, Optional

import numpy as np

from core import RngHandle
from datasets import InstanceData
from matroids import LaminarMatroid, MatroidOracle, PartitionMatroid, TruncatedMatroid, UniformMatroid
from message import InvalidConfiguration
from objectives import ObjectiveOracle, dominating_objective, modular_objective

logger = logging.getLogger(__name__)

SYNTH_KINDS = ('geometric', 'coverage', 'modular-lowerbound')


def synth_instance(kind: str, params: Optional[Dict] = None, seed: int = 0) -> InstanceData:
    '''
    Arguments:
        kind     One of SYNTH_KINDS
        params   geometric: n, grid; coverage: n, p, k;
                 modular-lowerbound: n, k, d
        seed     Generator seed; equal seeds give equal instances

    Return:
        InstanceData
    '''
    params = dict(params or {})
    rng = RngHandle(seed)
    if kind == 'geometric':
        n, grid = int(params.get('n', 100)), int(params.get('grid', 5))
        if n < 0 or grid < 1:
            raise InvalidConfiguration('geometric instance needs n >= 0 and grid >= 1')
        points = rng.generator.random((n, 2))
        cells = np.minimum((points * grid).astype(int), grid - 1)
        parts = [[int(cx + grid * cy)] for cx, cy in cells]
        return InstanceData(n=n, source='synthetic:geometric', points=points, parts=parts,
                            params={'n': n, 'grid': grid, 'seed': seed},
                            default_objective={'kind': 'kmedoid'},
                            default_matroid={'kind': 'laminar', 'capacity': int(params.get('capacity', 2))})
    if kind == 'coverage':
        n, p = int(params.get('n', 30)), float(params.get('p', 0.2))
        if n < 0 or not 0.0 <= p <= 1.0:
            raise InvalidConfiguration('coverage instance needs n >= 0 and p in [0, 1]')
        draws = rng.generator.random((n, n))
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if draws[u, v] < p]
        return InstanceData(n=n, source='synthetic:coverage', edges=edges,
                            params={'n': n, 'p': p, 'seed': seed},
                            default_objective={'kind': 'dominating'},
                            default_matroid={'kind': 'uniform', 'capacity': int(params.get('k', 5))})
    if kind == 'modular-lowerbound':
        k, d = int(params.get('k', 3)), int(params.get('d', 2))
        n = int(params.get('n', 4 * (k + d)))
        if k < 0 or d < 0 or k + d > n:
            raise InvalidConfiguration('modular-lowerbound needs k + d <= n')
        weights = np.zeros(n)
        weights[rng.sample(list(range(n)), k + d)] = 1.0
        return InstanceData(n=n, source='synthetic:modular-lowerbound', weights=weights,
                            params={'n': n, 'k': k, 'd': d, 'seed': seed},
                            default_objective={'kind': 'modular'},
                            default_matroid={'kind': 'uniform', 'capacity': k})
    raise InvalidConfiguration('unknown synthetic instance kind {!r}'.format(kind))


def random_laminar(rng: RngHandle, n: int, depth: int = 3) -> LaminarMatroid:
    'Random laminar family built by recursive splits, random capacities'
    family = []

    def split(members: List[int], level: int):
        if len(members) < 2 or level >= depth:
            return
        members = rng.permutation(members)
        cuts = sorted(rng.sample(list(range(1, len(members))), min(len(members) - 1, 1 + rng.integers(2))))
        groups = [members[i:j] for i, j in zip([0] + cuts, cuts + [len(members)])]
        for group in groups:
            family.append((sorted(group), 1 + rng.integers(len(group))))
            split(group, level + 1)

    everything = list(range(n))
    if n and rng.integers(2):
        family.append((everything, 1 + rng.integers(n)))
    split(everything, 0)
    return LaminarMatroid(n, family)


def random_matroid(rng: RngHandle, n: int, kind: Optional[str] = None) -> MatroidOracle:
    'Random uniform, partition, laminar or truncated partition matroid on n elements'
    kinds = ('uniform', 'partition', 'laminar', 'truncation')
    kind = kind or kinds[rng.integers(len(kinds))]
    if kind == 'uniform':
        return UniformMatroid(n, 1 + rng.integers(max(1, n // 2)))
    if kind in ('partition', 'truncation'):
        count = 1 + rng.integers(max(1, n // 2))
        assignment = [rng.integers(count) for _ in range(n)]
        capacities = [1 + rng.integers(2) for _ in range(count)]
        matroid = PartitionMatroid(assignment, capacities)
        if kind == 'truncation':
            return TruncatedMatroid(matroid, 1 + rng.integers(max(1, matroid.rank())))
        return matroid
    if kind == 'laminar':
        return random_laminar(rng, n)
    raise InvalidConfiguration('unknown matroid kind {!r}'.format(kind))


def random_objective(rng: RngHandle, n: int, kind: Optional[str] = None) -> ObjectiveOracle:
    'Random coverage (dominating) or modular objective on n elements'
    kind = kind or ('dominating', 'modular')[rng.integers(2)]
    if kind == 'modular':
        return modular_objective(rng.generator.integers(0, 10, size=n).astype(float))
    if kind == 'dominating':
        p = 0.15 + 0.3 * float(rng.generator.random())
        draws = rng.generator.random((n, n))
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if draws[u, v] < p]
        return dominating_objective(edges, n=n)
    raise InvalidConfiguration('unknown objective kind {!r}'.format(kind))
