# NOTICE
# Robust Summary Toolkit.
# See README.md for usage and CHANGELOG.md for release history.

'''
Monotone submodular value oracles.

Each oracle evaluates f(S) from scratch through value() and marginal
gains f(e|S) through marginal(), which keeps an incremental state for the
last set it was asked about.  When the next query is about a superset of
that set the state is extended element by element; any other set
rebuilds it from the empty state.  Both entry points increment `calls`.

Kinds:
    modular      f(S) = sum of non-negative weights
    dominating   f(S) = number of vertices adjacent to some s in S
    movie        (1-a) * sum <u, v_s>+  +  a * sum_m max_s <v_m, v_s>
    kmedoid      L({e0}) - L(S + e0), L the mean distance to the nearest medoid
    logdet       log det(I + a K_SS), K the gaussian kernel of the points
'''
import copy
import logging
import math
from typing import FrozenSet, Iterable, List, Optional, Sequence

import networkx as nx
import numpy as np
from scipy.linalg import cholesky, solve_triangular
from scipy.spatial.distance import cdist, pdist

from message import DomainError, InstanceWarning, InvalidConfiguration

logger = logging.getLogger(__name__)

EARTH_RADIUS_KM = 6371.0088


class ObjectiveOracle:
    '''
    Base class.  Subclasses implement

        _value(s)            f(s) from scratch for a frozenset s
        _empty_state()       incremental state of the empty set
        _extend(state, x)    state of S + x (may update state in place)
        _gain(state, e)      f(e|S) for the set S that state describes
    '''
    kind = None

    def __init__(self, n: int):
        self.n = n
        self.calls = 0
        self._cache_set: Optional[FrozenSet[int]] = None
        self._cache_state = None

    def _check(self, elements: Iterable[int]):
        for element in elements:
            if not 0 <= element < self.n:
                raise DomainError('element {} is outside the ground set of size {}'.format(element, self.n))

    def value(self, s: Iterable[int]) -> float:
        '''
        Arguments:
            s   Collection of ElementIds

        Return:
            f(s), recomputed from scratch

        Raise:
            DomainError for an element outside the ground set
        '''
        s = frozenset(s)
        self._check(s)
        self.calls += 1
        if not s:
            return 0.0
        return float(self._value(s))

    def marginal(self, e: int, s: Iterable[int]) -> float:
        '''
        Arguments:
            e   ElementId
            s   Collection of ElementIds

        Return:
            f(e|s) = f(s + e) - f(s)

        Raise:
            DomainError for an element outside the ground set
        '''
        s = frozenset(s)
        self._check(s)
        self._check((e,))
        self.calls += 1
        if e in s:
            return 0.0
        return float(self._gain(self._state_for(s), e))

    def marginals(self, elements: Iterable[int], s: Iterable[int]) -> dict:
        'marginal() for each element against the same set'
        s = frozenset(s)
        return {e: self.marginal(e, s) for e in elements}

    def _state_for(self, s: FrozenSet[int]):
        cached = self._cache_set
        if cached is not None and cached == s:
            return self._cache_state
        if cached is not None and cached < s:
            state = self._cache_state
            additions = sorted(s - cached)
        else:
            state = self._empty_state()
            additions = sorted(s)
        for x in additions:
            state = self._extend(state, x)
        self._cache_set = s
        self._cache_state = state
        return state

    def fresh(self) -> 'ObjectiveOracle':
        '''
        Copy sharing the read-only instance data, with a zero call
        counter and an empty cache.  Each trial works on its own copy.
        '''
        other = copy.copy(self)
        other.calls = 0
        other._cache_set = None
        other._cache_state = None
        return other

    def check_instance(self) -> List[InstanceWarning]:
        'Messages about instance data that can break monotonicity'
        return []

    def describe(self) -> dict:
        return {'kind': self.kind, 'n': self.n}


class ModularObjective(ObjectiveOracle):
    kind = 'modular'

    def __init__(self, weights: Sequence[float]):
        weights = np.asarray(weights, dtype=float)
        super().__init__(len(weights))
        if weights.ndim != 1 or not np.all(np.isfinite(weights)) or np.any(weights < 0):
            raise InvalidConfiguration('modular weights must be finite and non-negative')
        self.weights = weights

    def _value(self, s):
        return float(sum(self.weights[e] for e in sorted(s)))

    def _empty_state(self):
        return None

    def _extend(self, state, x):
        return None

    def _gain(self, state, e):
        return self.weights[e]


class DominatingObjective(ObjectiveOracle):
    '''
    f(S) = |{v : (s, v) is an edge for some s in S}|.  A vertex does not
    cover itself.
    '''
    kind = 'dominating'

    def __init__(self, graph: nx.Graph):
        n = graph.number_of_nodes()
        if set(graph.nodes) != set(range(n)):
            raise InvalidConfiguration('graph vertices must be labelled 0..n-1')
        super().__init__(n)
        self.graph = graph
        self.neighbours = [np.fromiter(sorted(graph.neighbors(v)), dtype=np.int64) for v in range(n)]

    def _value(self, s):
        covered = set()
        for e in s:
            covered.update(self.graph.neighbors(e))
        return len(covered)

    def _empty_state(self):
        return np.zeros(self.n, dtype=bool)

    def _extend(self, state, x):
        state[self.neighbours[x]] = True
        return state

    def _gain(self, state, e):
        return int(np.count_nonzero(~state[self.neighbours[e]]))

    def describe(self):
        return {'kind': self.kind, 'n': self.n, 'edges': self.graph.number_of_edges()}


class MovieObjective(ObjectiveOracle):
    '''
    Personalised movie recommendation objective.

    Arguments:
        user     Feature vector of the user
        movies   Matrix with one feature vector per movie
        alpha    Weight of the facility-location term, in [0, 1]
    '''
    kind = 'movie'

    def __init__(self, user, movies, alpha: float):
        user = np.asarray(user, dtype=float)
        movies = np.asarray(movies, dtype=float)
        if movies.ndim != 2 or user.ndim != 1 or movies.shape[1] != user.shape[0]:
            raise InvalidConfiguration('user vector and movie vectors must share one dimension')
        if not 0.0 <= alpha <= 1.0:
            raise InvalidConfiguration('alpha must lie in [0, 1], got {}'.format(alpha))
        super().__init__(movies.shape[0])
        self.alpha = float(alpha)
        self.linear = np.maximum(movies @ user, 0.0)
        # similarity[m, s] = <v_m, v_s>
        self.similarity = movies @ movies.T

    def _value(self, s):
        members = sorted(s)
        linear = float(np.sum(self.linear[members]))
        facility = float(np.sum(np.max(self.similarity[:, members], axis=1)))
        return (1.0 - self.alpha) * linear + self.alpha * facility

    def _empty_state(self):
        return None

    def _extend(self, state, x):
        column = self.similarity[:, x]
        if state is None:
            return column.copy()
        return np.maximum(state, column)

    def _gain(self, state, e):
        column = self.similarity[:, e]
        if state is None:
            facility = float(np.sum(column))
        else:
            facility = float(np.sum(np.maximum(column - state, 0.0)))
        return (1.0 - self.alpha) * self.linear[e] + self.alpha * facility

    def check_instance(self):
        '''
        The facility term uses raw inner products.  Negative ones can make
        f decrease, so they are reported rather than clamped.
        '''
        if self.alpha == 0.0:
            return []
        messages = []
        negative = np.argwhere(self.similarity < 0)
        if len(negative):
            messages.append(InstanceWarning(
                message='{} movie pairs have a negative inner product; monotonicity is not guaranteed'.format(len(negative)),
                message_source='movie'))
            for column in sorted(set(int(s) for _, s in negative))[:10]:
                messages.append(InstanceWarning(
                    message='negative similarity in the column of this movie', message_source='movie',
                    element=column))
        return messages


class _MetricPoints:
    'Points with distance rows computed on demand'

    def __init__(self, points, metric: str):
        points = np.asarray(points, dtype=float)
        if points.ndim != 2:
            raise InvalidConfiguration('points must be a two-dimensional array')
        if not np.all(np.isfinite(points)):
            raise InvalidConfiguration('points hold non-finite coordinates')
        if metric not in ('euclidean', 'haversine'):
            raise InvalidConfiguration('unknown metric {!r}'.format(metric))
        self.points = points
        self.metric = metric
        self._rows = {}

    def row(self, e: int) -> np.ndarray:
        row = self._rows.get(e)
        if row is None:
            if self.metric == 'euclidean':
                row = cdist(self.points[e:e + 1], self.points)[0]
            else:
                row = haversine_row(self.points[e], self.points)
            self._rows[e] = row
        return row

    def pairwise(self) -> np.ndarray:
        'Condensed distance vector over all pairs'
        if self.metric == 'euclidean':
            return pdist(self.points)
        return pdist(self.points, lambda p, q: haversine_row(p, q[None, :])[0])


def haversine_row(origin, points) -> np.ndarray:
    '''
    Great-circle distances in kilometres from origin to every row of points.
    Coordinates are (lat, lon) in degrees.
    '''
    lat1, lon1 = np.radians(origin[0]), np.radians(origin[1])
    lat2, lon2 = np.radians(points[:, 0]), np.radians(points[:, 1])
    a = np.sin((lat2 - lat1) / 2) ** 2 + np.cos(lat1) * np.cos(lat2) * np.sin((lon2 - lon1) / 2) ** 2
    return 2 * EARTH_RADIUS_KM * np.arcsin(np.sqrt(np.clip(a, 0.0, 1.0)))


class KMedoidObjective(ObjectiveOracle):
    '''
    Exemplar-based clustering turned monotone by an auxiliary point e0.

    The incremental state is the distance from every point to its nearest
    selected medoid (starting from e0).
    '''
    kind = 'kmedoid'

    def __init__(self, points, e0: int = 0, metric: str = 'euclidean'):
        self.metric_points = _MetricPoints(points, metric)
        super().__init__(self.metric_points.points.shape[0])
        if not 0 <= e0 < self.n:
            raise DomainError('auxiliary point {} is not one of the {} points'.format(e0, self.n))
        self.e0 = e0
        self.base_loss = float(np.mean(self.metric_points.row(e0)))

    def loss(self, s: Iterable[int]) -> float:
        'L(s + e0)'
        nearest = self.metric_points.row(self.e0).copy()
        for e in sorted(s):
            np.minimum(nearest, self.metric_points.row(e), out=nearest)
        return float(np.mean(nearest))

    def _value(self, s):
        return self.base_loss - self.loss(s)

    def _empty_state(self):
        return self.metric_points.row(self.e0).copy()

    def _extend(self, state, x):
        np.minimum(state, self.metric_points.row(x), out=state)
        return state

    def _gain(self, state, e):
        return float(np.sum(np.maximum(state - self.metric_points.row(e), 0.0))) / self.n

    def describe(self):
        return {'kind': self.kind, 'n': self.n, 'e0': self.e0, 'metric': self.metric_points.metric}


class LogDetObjective(ObjectiveOracle):
    '''
    f(S) = log det(I + alpha * K_SS) with K_ij = exp(-d(i,j)^2 / h^2).

    The incremental state is the selected list and the lower Cholesky
    factor of I + alpha * K_SS, grown by one row per added element.
    '''
    kind = 'logdet'

    def __init__(self, points, h: Optional[float] = None, alpha: float = 10.0, metric: str = 'euclidean'):
        self.metric_points = _MetricPoints(points, metric)
        super().__init__(self.metric_points.points.shape[0])
        if alpha <= 0:
            raise InvalidConfiguration('alpha must be positive, got {}'.format(alpha))
        if h is None:
            distances = self.metric_points.pairwise()
            h = float(np.std(distances)) if len(distances) else 1.0
            logger.debug('log-det bandwidth set to the pairwise distance std %s', h)
        if not h > 0 or not math.isfinite(h):
            raise InvalidConfiguration('bandwidth h must be positive and finite, got {}'.format(h))
        self.h = float(h)
        self.alpha = float(alpha)
        self._kernel_rows = {}

    def kernel_row(self, e: int) -> np.ndarray:
        row = self._kernel_rows.get(e)
        if row is None:
            row = np.exp(-(self.metric_points.row(e) ** 2) / self.h ** 2)
            self._kernel_rows[e] = row
        return row

    def _value(self, s):
        members = sorted(s)
        kernel = np.array([self.kernel_row(e)[members] for e in members])
        factor = cholesky(np.eye(len(members)) + self.alpha * kernel, lower=True)
        return 2.0 * float(np.sum(np.log(np.diag(factor))))

    def _empty_state(self):
        return ([], np.zeros((0, 0)))

    def _column(self, members, e):
        return self.alpha * self.kernel_row(e)[members]

    def _schur(self, state, e):
        members, factor = state
        if not members:
            return np.zeros(0), 1.0 + self.alpha
        y = solve_triangular(factor, self._column(members, e), lower=True)
        return y, 1.0 + self.alpha - float(y @ y)

    def _extend(self, state, x):
        members, factor = state
        y, schur = self._schur(state, x)
        size = len(members)
        grown = np.zeros((size + 1, size + 1))
        grown[:size, :size] = factor
        grown[size, :size] = y
        grown[size, size] = math.sqrt(max(schur, 1e-300))
        return (members + [x], grown)

    def _gain(self, state, e):
        _, schur = self._schur(state, e)
        return math.log(max(schur, 1e-300))

    def describe(self):
        return {'kind': self.kind, 'n': self.n, 'h': self.h, 'alpha': self.alpha,
                'metric': self.metric_points.metric}


def modular_objective(weights: Sequence[float]) -> ModularObjective:
    return ModularObjective(weights)


def dominating_objective(edges: Iterable[Sequence[int]], n: Optional[int] = None) -> DominatingObjective:
    '''
    Arguments:
        edges   Iterable of (u, v) vertex pairs
        n       Number of vertices (default: one past the largest id)
    '''
    edges = [(int(u), int(v)) for u, v in edges]
    if n is None:
        n = 1 + max((max(u, v) for u, v in edges), default=-1)
    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    graph.add_edges_from(edges)
    if graph.number_of_nodes() != n:
        raise InvalidConfiguration('edge list names vertices outside 0..{}'.format(n - 1))
    return DominatingObjective(graph)


def movie_objective(user, movies, alpha: float) -> MovieObjective:
    return MovieObjective(user, movies, alpha)


def kmedoid_objective(points, e0: int = 0, metric: str = 'euclidean') -> KMedoidObjective:
    return KMedoidObjective(points, e0=e0, metric=metric)


def logdet_objective(points, h: Optional[float] = None, alpha: float = 10.0,
                     metric: str = 'euclidean') -> LogDetObjective:
    return LogDetObjective(points, h=h, alpha=alpha, metric=metric)


def value(f: ObjectiveOracle, s: Iterable[int]) -> float:
    return f.value(s)


def marginal(f: ObjectiveOracle, e: int, s: Iterable[int]) -> float:
    return f.marginal(e, s)
