# NOTICE
# Robust Summary Toolkit.
# See README.md for usage and CHANGELOG.md for release history.

'''
Dataset ingestion and instance assembly.

File formats:
    edge list      two whitespace-separated integer vertex ids per line
    points CSV     id,x,y[,part]   (part may list several parts as p1;p2)
    part file      one part index per line, line i belongs to element i
    features CSV   id,v1,...,vD
    user vector    one CSV row of D numbers
    weights file   one non-negative number per line

Blank lines and lines starting with '#' are skipped everywhere; a CSV
whose first row is not numeric is taken to have a header.  Any other
malformed line raises MalformedFile naming the file and line.

An InstanceData holds the raw data of one instance.  build_objective()
and build_matroid() turn it into oracles according to the objective and
matroid sections of an experiment configuration.
'''
import csv
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from core import GroundSet, RngHandle
from matroids import LaminarMatroid, MatroidOracle, PartitionMatroid, TruncatedMatroid, UniformMatroid
from message import ConfigError, DataError, InvalidConfiguration, MalformedFile
from objectives import (ObjectiveOracle, dominating_objective, kmedoid_objective, logdet_objective,
                        modular_objective, movie_objective)

logger = logging.getLogger(__name__)

OBJECTIVE_KINDS = ('modular', 'dominating', 'movie', 'kmedoid', 'logdet')
MATROID_KINDS = ('uniform', 'partition', 'laminar', 'truncation')


@dataclass
class InstanceData:
    '''
    Raw data of one instance.

    parts            Candidate parts of each element (several when an
                     element belongs to more than one group)
    default_objective, default_matroid
                     Sections used when the configuration leaves them out
    '''
    n: int
    source: str
    labels: Optional[List[str]] = None
    edges: Optional[List[Tuple[int, int]]] = None
    points: Optional[np.ndarray] = None
    weights: Optional[np.ndarray] = None
    user: Optional[np.ndarray] = None
    movies: Optional[np.ndarray] = None
    parts: Optional[List[List[int]]] = None
    order: Optional[List[int]] = None
    params: dict = field(default_factory=dict)
    default_objective: dict = field(default_factory=dict)
    default_matroid: dict = field(default_factory=dict)

    @property
    def ground_set(self) -> GroundSet:
        return GroundSet(self.n, self.labels)

    @property
    def file_order(self) -> List[int]:
        return list(self.order) if self.order is not None else list(range(self.n))

    @property
    def multi_part(self) -> bool:
        return self.parts is not None and any(len(p) > 1 for p in self.parts)


def _data_lines(path: str):
    'Yield (line_number, stripped line) for every data line of path'
    with open(path, newline='') as infile:
        for line_number, line in enumerate(infile, start=1):
            line = line.strip()
            if line and not line.startswith('#'):
                yield line_number, line


def _malformed(path, line_number, message):
    return MalformedFile(DataError(message=message, path=path, line_number=line_number))


def _is_header(fields: Sequence[str]) -> bool:
    try:
        [float(x) for x in fields[1:]]
        return False
    except ValueError:
        return True


def read_edge_list(path: str) -> List[Tuple[int, int]]:
    edges = []
    for line_number, line in _data_lines(path):
        fields = line.split()
        if len(fields) != 2:
            raise _malformed(path, line_number, 'expected two vertex ids, found {} fields'.format(len(fields)))
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError:
            raise _malformed(path, line_number, 'vertex ids must be integers')
        if u < 0 or v < 0:
            raise _malformed(path, line_number, 'vertex ids must be non-negative')
        edges.append((u, v))
    return edges


def read_points(path: str) -> Tuple[List[str], np.ndarray, Optional[List[List[int]]]]:
    '''
    Return:
        (labels, coordinates as an n x 2 array, candidate parts or None)
    '''
    labels, coords, parts = [], [], []
    has_parts = None
    with open(path, newline='') as infile:
        for line_number, row in enumerate(csv.reader(infile), start=1):
            if not row or row[0].strip().startswith('#'):
                continue
            row = [x.strip() for x in row]
            if line_number == 1 and _is_header(row[:3]):
                continue
            if len(row) not in (3, 4):
                raise _malformed(path, line_number, 'expected id,x,y[,part], found {} fields'.format(len(row)))
            if has_parts is None:
                has_parts = len(row) == 4
            elif has_parts != (len(row) == 4):
                raise _malformed(path, line_number, 'part column present on some rows only')
            try:
                coords.append((float(row[1]), float(row[2])))
                if has_parts:
                    parts.append([int(p) for p in row[3].split(';') if p])
            except ValueError:
                raise _malformed(path, line_number, 'coordinates must be numbers and parts integers')
            if has_parts and not parts[-1]:
                raise _malformed(path, line_number, 'empty part field')
            labels.append(row[0])
    return labels, np.array(coords, dtype=float).reshape(-1, 2), (parts if has_parts else None)


def read_part_file(path: str) -> List[List[int]]:
    parts = []
    for line_number, line in _data_lines(path):
        try:
            parts.append([int(p) for p in line.replace(',', ';').split(';') if p.strip()])
        except ValueError:
            raise _malformed(path, line_number, 'part index must be an integer')
        if not parts[-1] or min(parts[-1]) < 0:
            raise _malformed(path, line_number, 'part index must be a non-negative integer')
    return parts


def read_features(path: str) -> Tuple[List[str], np.ndarray]:
    labels, rows = [], []
    width = None
    with open(path, newline='') as infile:
        for line_number, row in enumerate(csv.reader(infile), start=1):
            if not row or row[0].strip().startswith('#'):
                continue
            if line_number == 1 and _is_header(row):
                continue
            if width is None:
                width = len(row)
            if len(row) != width or width < 2:
                raise _malformed(path, line_number, 'expected {} fields, found {}'.format(width, len(row)))
            try:
                rows.append([float(x) for x in row[1:]])
            except ValueError:
                raise _malformed(path, line_number, 'feature values must be numbers')
            labels.append(row[0].strip())
    return labels, np.array(rows, dtype=float)


def read_user_vector(path: str) -> np.ndarray:
    for line_number, line in _data_lines(path):
        try:
            return np.array([float(x) for x in line.split(',')], dtype=float)
        except ValueError:
            raise _malformed(path, line_number, 'user vector values must be numbers')
    raise _malformed(path, None, 'no user vector found')


def read_weights(path: str) -> np.ndarray:
    weights = []
    for line_number, line in _data_lines(path):
        try:
            weight = float(line)
        except ValueError:
            raise _malformed(path, line_number, 'weight must be a number')
        if weight < 0:
            raise _malformed(path, line_number, 'weight must be non-negative')
        weights.append(weight)
    return np.array(weights, dtype=float)


def load_dataset(spec: Dict) -> InstanceData:
    '''
    Arguments:
        spec   Instance section of a configuration: file paths under the
               keys edges, points, parts, features, user, weights

    Return:
        InstanceData

    Raise:
        MalformedFile on a bad line, InvalidConfiguration when the files
        do not describe one instance
    '''
    if spec.get('edges'):
        edges = read_edge_list(spec['edges'])
        n = int(spec.get('n', 1 + max((max(e) for e in edges), default=-1)))
        data = InstanceData(n=n, source=spec['edges'], edges=edges,
                            default_objective={'kind': 'dominating'},
                            default_matroid={'kind': 'uniform', 'capacity': 8})
    elif spec.get('points'):
        labels, points, parts = read_points(spec['points'])
        data = InstanceData(n=len(labels), source=spec['points'], labels=labels, points=points, parts=parts,
                            default_objective={'kind': 'kmedoid'},
                            default_matroid={'kind': 'laminar', 'capacity': 2})
    elif spec.get('features'):
        labels, movies = read_features(spec['features'])
        if spec.get('user'):
            user = read_user_vector(spec['user'])
        else:
            rng = RngHandle(int(spec.get('seed', 0)))
            user = rng.generator.random(movies.shape[1])
            logger.info('no user vector given; drew one uniformly from [0, 1] with seed %s', rng.seed)
        data = InstanceData(n=len(labels), source=spec['features'], labels=labels, movies=movies, user=user,
                            default_objective={'kind': 'movie', 'alpha': 0.95},
                            default_matroid={'kind': 'uniform', 'capacity': 10})
    elif spec.get('weights'):
        weights = read_weights(spec['weights'])
        data = InstanceData(n=len(weights), source=spec['weights'], weights=weights,
                            default_objective={'kind': 'modular'},
                            default_matroid={'kind': 'uniform', 'capacity': 5})
    else:
        raise InvalidConfiguration('instance names no edges, points, features or weights file')

    if spec.get('parts'):
        parts = read_part_file(spec['parts'])
        if len(parts) != data.n:
            raise InvalidConfiguration(ConfigError(
                message='part file lists {} elements for an instance of {}'.format(len(parts), data.n),
                path=spec['parts']))
        data.parts = parts
    logger.info('loaded %s: %d elements', data.source, data.n)
    return data


def resolve_parts(parts: Sequence[Sequence[int]], rng: RngHandle) -> List[int]:
    '''
    One part per element; an element with several candidate parts gets
    one of them uniformly at random.
    '''
    assignment = []
    drawn = 0
    for candidates in parts:
        if len(candidates) == 1:
            assignment.append(candidates[0])
        else:
            ordered = sorted(set(candidates))
            assignment.append(ordered[rng.integers(len(ordered))])
            drawn += 1
    if drawn:
        logger.warning('%d elements belong to several parts; assigned one at random (seed %s, stream %s)',
                       drawn, rng.seed, rng.stream_id)
    return assignment


def build_objective(data: InstanceData, spec: Optional[Dict] = None) -> ObjectiveOracle:
    '''
    Arguments:
        data   InstanceData
        spec   Objective section; kind plus per-kind parameters
               (movie: alpha; kmedoid: e0, metric; logdet: h, alpha, metric)
    '''
    spec = dict(data.default_objective, **(spec or {}))
    kind = spec.get('kind')
    if kind == 'modular':
        if data.weights is None:
            raise InvalidConfiguration('modular objective needs weights')
        f = modular_objective(data.weights)
    elif kind == 'dominating':
        if data.edges is None:
            raise InvalidConfiguration('dominating objective needs an edge list')
        f = dominating_objective(data.edges, n=data.n)
    elif kind == 'movie':
        if data.movies is None:
            raise InvalidConfiguration('movie objective needs feature vectors')
        f = movie_objective(data.user, data.movies, float(spec.get('alpha', 0.95)))
        for warning in f.check_instance()[:1]:
            logger.warning(warning.format())
    elif kind == 'kmedoid':
        if data.points is None:
            raise InvalidConfiguration('kmedoid objective needs points')
        f = kmedoid_objective(data.points, e0=int(spec.get('e0', 0)), metric=spec.get('metric', 'euclidean'))
    elif kind == 'logdet':
        if data.points is None:
            raise InvalidConfiguration('logdet objective needs points')
        h = spec.get('h')
        if h is None and spec.get('h2') is not None:
            h = float(spec['h2']) ** 0.5
        f = logdet_objective(data.points, h=None if h is None else float(h),
                             alpha=float(spec.get('alpha', 10.0)), metric=spec.get('metric', 'euclidean'))
    else:
        raise InvalidConfiguration('unknown objective kind {!r}'.format(kind))
    return f


def build_matroid(data: InstanceData, spec: Optional[Dict] = None,
                  rng: Optional[RngHandle] = None) -> MatroidOracle:
    '''
    Arguments:
        data   InstanceData
        spec   Matroid section:
                   uniform      capacity
                   partition    capacity (per part) or capacities (list)
                   laminar      capacity per part and optional total, or an
                                explicit family [[members, capacity], ...]
                   truncation   k and an inner matroid section
        rng    Resolves elements with several candidate parts
    '''
    spec = dict(data.default_matroid, **(spec or {}))
    kind = spec.get('kind')
    if kind == 'uniform':
        return UniformMatroid(data.n, int(spec.get('capacity', spec.get('k', 1))))
    if kind == 'truncation':
        inner = build_matroid(data, dict(spec.get('inner', {'kind': 'partition', 'capacity': 1})), rng)
        return TruncatedMatroid(inner, int(spec['k']))
    if kind == 'laminar' and spec.get('family'):
        return LaminarMatroid(data.n, [(members, cap) for members, cap in spec['family']])
    if kind not in ('partition', 'laminar'):
        raise InvalidConfiguration('unknown matroid kind {!r}'.format(kind))
    if data.parts is None:
        raise InvalidConfiguration('{} matroid needs part labels'.format(kind))
    assignment = resolve_parts(data.parts, rng if rng is not None else RngHandle(0))
    count = 1 + max(assignment, default=-1)
    if 'capacities' in spec:
        capacities = [int(c) for c in spec['capacities']]
        if len(capacities) < count:
            raise InvalidConfiguration('{} capacities given for {} parts'.format(len(capacities), count))
    else:
        capacities = [int(spec.get('capacity', 1))] * count
    if kind == 'partition':
        return PartitionMatroid(assignment, capacities)
    family = []
    for part in range(count):
        members = [e for e, p in enumerate(assignment) if p == part]
        if members:
            family.append((members, capacities[part]))
    if spec.get('total') is not None:
        family.append((list(range(data.n)), int(spec['total'])))
    return LaminarMatroid(data.n, family)


def write_dataset(data: InstanceData, path: str) -> str:
    '''
    Write the raw data of an instance in the format load_dataset reads:
    an edge list, a points CSV (with the part column when parts are
    known) or a weights file.

    Return:
        The load_dataset key the file belongs under (edges, points or weights)
    '''
    if data.edges is not None:
        with open(path, 'w') as outfile:
            outfile.write('# {} n={}\n'.format(data.source, data.n))
            for u, v in data.edges:
                outfile.write('{} {}\n'.format(u, v))
        return 'edges'
    if data.points is not None:
        with open(path, 'w', newline='') as outfile:
            writer = csv.writer(outfile, lineterminator='\n')
            writer.writerow(['id', 'x', 'y'] + (['part'] if data.parts is not None else []))
            for e, (x, y) in enumerate(data.points):
                row = [data.ground_set.label(e), repr(float(x)), repr(float(y))]
                if data.parts is not None:
                    row.append(';'.join(str(p) for p in data.parts[e]))
                writer.writerow(row)
        return 'points'
    if data.weights is not None:
        with open(path, 'w') as outfile:
            outfile.write('# {}\n'.format(data.source))
            for weight in data.weights:
                outfile.write('{!r}\n'.format(float(weight)))
        return 'weights'
    raise InvalidConfiguration('instance {} has no edge list, points or weights to write'.format(data.source))
