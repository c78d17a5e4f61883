# NOTICE
# Robust Summary Toolkit.
# See README.md for usage and CHANGELOG.md for release history.

'''
Experiment configuration.

A configuration is a YAML mapping:

    instance:       {source: synthetic, kind: geometric, params: {n: 200, grid: 5}, seed: 0}
                    or {source: dataset, points: rome.csv, parts: rome.parts}
                    or {source: bundle, path: geo.bundle}
    objective:      {kind: kmedoid, e0: 0}
    matroid:        {kind: laminar, capacity: 2}
    algorithm:      centralized          (or a list of algorithm ids)
    inner_solver:   lazy-greedy
    d_sweep:        [5, 10, 20]
    eps:            0.99
    eps0:           0.0001
    trials:         3
    seed:           0
    stream_order:   file | random | descending
    adversary:      {kind: greedy, seed: 0}
    assignment:     {policy: redraw, seed: 0}

Every key is optional.  Validation collects ConfigError messages that
carry the line of the offending key.
'''
import logging
import os
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional

import yaml

from adversary import ADVERSARY_IDS
from datasets import MATROID_KINDS, OBJECTIVE_KINDS
from message import ConfigError, InvalidConfiguration, MalformedFile
from synth import SYNTH_KINDS

logger = logging.getLogger(__name__)

ALGORITHMS = ('centralized', 'streaming', 'robust-swapping-cascade', 'omniscient-greedy', 'omniscient-swapping')
INNER_SOLVERS = ('lazy-greedy', 'swapping')
STREAM_ORDERS = ('file', 'random', 'descending')
ASSIGNMENT_POLICIES = ('redraw', 'fixed')
EPS_SWEEP = (0.3, 0.5, 0.7, 0.99)
DATASET_KEYS = ('edges', 'points', 'parts', 'features', 'user', 'weights')


@dataclass
class ExperimentConfig:
    instance: Dict = field(default_factory=lambda: {'source': 'synthetic', 'kind': 'coverage',
                                                    'params': {'n': 50, 'p': 0.1}, 'seed': 0})
    objective: Dict = field(default_factory=dict)
    matroid: Dict = field(default_factory=dict)
    algorithm: List[str] = field(default_factory=lambda: ['centralized'])
    inner_solver: str = 'lazy-greedy'
    d_sweep: List[int] = field(default_factory=lambda: [0])
    eps: float = 0.99
    eps0: float = 0.0001
    trials: int = 3
    seed: int = 0
    stream_order: str = 'file'
    adversary: Dict = field(default_factory=lambda: {'kind': 'greedy', 'seed': 0})
    assignment: Dict = field(default_factory=lambda: {'policy': 'redraw', 'seed': 0})
    path: Optional[str] = None
    lines: Dict[str, int] = field(default_factory=dict, repr=False)

    def to_dict(self) -> dict:
        data = asdict(self)
        data.pop('lines')
        return data

    @property
    def theoretical_regime(self) -> bool:
        return self.eps < 1.0 / 3.0


def _key_lines(text: str) -> Dict[str, int]:
    'Line number of every top-level key'
    node = yaml.compose(text)
    if not isinstance(node, yaml.MappingNode):
        return {}
    return {key.value: key.start_mark.line + 1 for key, _ in node.value}


def config_from_dict(data: Dict, path: Optional[str] = None, lines: Optional[Dict[str, int]] = None) -> ExperimentConfig:
    '''
    Arguments:
        data    Parsed mapping
        path    File the mapping came from, for messages
        lines   Top-level key -> line number

    Return:
        ExperimentConfig (not yet validated)

    Raise:
        InvalidConfiguration for unknown keys or values of the wrong type
    '''
    lines = lines or {}
    cfg = ExperimentConfig(path=path, lines=lines)
    errmsgs = []
    known = set(ExperimentConfig.__dataclass_fields__) - {'path', 'lines'}
    for key, value in (data or {}).items():
        if key not in known:
            errmsgs.append(ConfigError(message='unknown key {!r}'.format(key), path=path, line_number=lines.get(key)))
            continue
        try:
            if key == 'algorithm':
                value = [value] if isinstance(value, str) else [str(x) for x in value]
            elif key == 'd_sweep':
                value = [int(value)] if isinstance(value, int) else [int(x) for x in value]
            elif key in ('eps', 'eps0'):
                value = float(value)
            elif key in ('trials', 'seed'):
                value = int(value)
            elif key in ('instance', 'objective', 'matroid', 'adversary', 'assignment'):
                if not isinstance(value, dict):
                    raise TypeError('expected a mapping')
                default = getattr(cfg, key)
                value = dict(default, **value) if key in ('adversary', 'assignment') else dict(value)
        except (TypeError, ValueError) as exc:
            errmsgs.append(ConfigError(message='bad value for {!r}'.format(key), path=path,
                                       line_number=lines.get(key), exc=exc))
            continue
        setattr(cfg, key, value)
    if errmsgs:
        raise InvalidConfiguration(errmsgs)
    return cfg


def load_config(path: str) -> ExperimentConfig:
    '''
    Read and validate a YAML configuration file.

    Raise:
        MalformedFile if the file is not YAML, InvalidConfiguration if a
        value is invalid
    '''
    with open(path) as infile:
        text = infile.read()
    try:
        data = yaml.safe_load(text)
        lines = _key_lines(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, 'problem_mark', None)
        raise MalformedFile(ConfigError(message='not a YAML file', path=path,
                                        line_number=mark.line + 1 if mark else None, exc=exc))
    if data is not None and not isinstance(data, dict):
        raise MalformedFile(ConfigError(message='top level must be a mapping', path=path, line_number=1))
    cfg = config_from_dict(data or {}, path, lines)
    errmsgs = validate_config(cfg)
    if errmsgs:
        raise InvalidConfiguration(errmsgs)
    return cfg


def validate_config(cfg: ExperimentConfig) -> List[ConfigError]:
    'Return the list of problems with cfg; empty when it is usable'
    errmsgs = []

    def problem(key, message):
        errmsgs.append(ConfigError(message=message, path=cfg.path, line_number=cfg.lines.get(key)))

    if not 0.0 < cfg.eps < 1.0:
        problem('eps', 'eps must lie in (0, 1), got {}'.format(cfg.eps))
    if cfg.eps0 <= 0:
        problem('eps0', 'eps0 must be positive, got {}'.format(cfg.eps0))
    if cfg.trials < 1:
        problem('trials', 'trials must be at least 1, got {}'.format(cfg.trials))
    if cfg.seed < 0:
        problem('seed', 'seed must be non-negative')
    if not cfg.d_sweep or any(d < 0 for d in cfg.d_sweep):
        problem('d_sweep', 'd_sweep must list non-negative integers')
    for algorithm in cfg.algorithm:
        if algorithm not in ALGORITHMS:
            problem('algorithm', 'unknown algorithm {!r}; choose from {}'.format(algorithm, ', '.join(ALGORITHMS)))
    if cfg.inner_solver not in INNER_SOLVERS:
        problem('inner_solver', 'unknown inner solver {!r}'.format(cfg.inner_solver))
    if cfg.stream_order not in STREAM_ORDERS:
        problem('stream_order', 'unknown stream order {!r}'.format(cfg.stream_order))
    if cfg.adversary.get('kind') not in ADVERSARY_IDS:
        problem('adversary', 'unknown adversary {!r}'.format(cfg.adversary.get('kind')))
    if cfg.assignment.get('policy') not in ASSIGNMENT_POLICIES:
        problem('assignment', 'assignment policy must be redraw or fixed')
    if cfg.objective and cfg.objective.get('kind') not in OBJECTIVE_KINDS:
        problem('objective', 'unknown objective kind {!r}'.format(cfg.objective.get('kind')))
    if cfg.matroid and cfg.matroid.get('kind') not in MATROID_KINDS:
        problem('matroid', 'unknown matroid kind {!r}'.format(cfg.matroid.get('kind')))

    source = cfg.instance.get('source', 'synthetic')
    if source == 'synthetic':
        if cfg.instance.get('kind') not in SYNTH_KINDS:
            problem('instance', 'unknown synthetic kind {!r}'.format(cfg.instance.get('kind')))
    elif source == 'dataset':
        base = os.path.dirname(cfg.path) if cfg.path else ''
        named = [key for key in DATASET_KEYS if cfg.instance.get(key)]
        if not named:
            problem('instance', 'dataset instance names no file')
        for key in named:
            filepath = cfg.instance[key]
            if not os.path.isfile(filepath):
                filepath = os.path.join(base, filepath)
            if not os.path.isfile(filepath):
                problem('instance', '{} file {} does not exist'.format(key, filepath))
            else:
                cfg.instance[key] = os.path.abspath(filepath)
    elif source == 'bundle':
        filepath = cfg.instance.get('path') or ''
        if filepath and not os.path.isfile(filepath) and cfg.path:
            filepath = os.path.join(os.path.dirname(cfg.path), filepath)
        if not os.path.isfile(filepath):
            problem('instance', 'bundle {!r} does not exist'.format(cfg.instance.get('path')))
        else:
            cfg.instance['path'] = os.path.abspath(filepath)
    else:
        problem('instance', 'instance source must be synthetic, dataset or bundle')
    return errmsgs


def apply_overrides(cfg: ExperimentConfig, algorithm=None, d=None, eps=None, trials=None, seed=None) -> ExperimentConfig:
    '''
    Command-line flags take precedence over the file.  d may be a list
    of integers or a comma-separated string.
    '''
    if algorithm:
        cfg.algorithm = [a for a in algorithm.split(',') if a] if isinstance(algorithm, str) else list(algorithm)
    if d:
        values = []
        for item in ([d] if isinstance(d, (str, int)) else d):
            values.extend(int(x) for x in str(item).split(',') if x.strip())
        cfg.d_sweep = values
    if eps is not None:
        cfg.eps = float(eps)
    if trials is not None:
        cfg.trials = int(trials)
    if seed is not None:
        cfg.seed = int(seed)
    errmsgs = validate_config(cfg)
    if errmsgs:
        raise InvalidConfiguration(errmsgs)
    return cfg
