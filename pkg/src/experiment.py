# NOTICE
# Robust Summary Toolkit.
# See README.md for usage and CHANGELOG.md for release history.

'''
Experiment orchestration.

For each deletion budget d of the sweep the adversary's plan is drawn
first, from the instance and the adversary seed alone.  Then every trial
runs Phase I with its own RngHandle (base seed, stream id = trial index)
and its own copy of the objective oracle, and Phase II on the plan.

Reports are written as JSON (configuration, rows, aggregates) and as a
flat CSV for plotting.  The CSV holds no timings, so two runs with the
same seed write identical files.
'''
import csv
import json
import logging
import os
import time
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from adversary import DeletionPlan, greedy_adversary, random_adversary, top_value_adversary
from centralized import phase1_centralized
from config import ExperimentConfig, config_from_dict
from core import PRNG_ALGORITHM, RngHandle
from datasets import InstanceData, build_matroid, build_objective, load_dataset
from matroids import MatroidOracle
from message import InvalidConfiguration
from objectives import ObjectiveOracle
from serializer import read_bundle
from solvers import (InnerSolver, omniscient_greedy, omniscient_swapping, phase2,
                     robust_swapping_cascade)
from streaming import phase1_streaming
from synth import synth_instance

logger = logging.getLogger(__name__)

CSV_COLUMNS = ('algorithm', 'd', 'trial', 'value', 'summary_size', 'peak_memory', 'oracle_calls')

# Stream ids below this are trial indices.
ORDER_STREAM = 1 << 30
ASSIGNMENT_STREAM = ORDER_STREAM + 1


@dataclass
class ReportRow:
    algorithm: str
    d: int
    trial: int
    value: float
    summary_size: int
    a_size: int
    b_size: int
    peak_memory: int
    oracle_calls: int
    eps: float
    seed: int
    stream_id: int
    prng_algorithm: str
    theoretical_regime: bool
    deleted: int
    phase1_seconds: float = 0.0
    phase2_seconds: float = 0.0
    details: dict = field(default_factory=dict)

    def key(self) -> Tuple[str, int, int]:
        return (self.algorithm, self.d, self.trial)


@dataclass
class ExperimentReport:
    config: dict
    rows: List[ReportRow]
    plans: Dict[str, dict]
    bounds: dict

    def aggregates(self) -> List[dict]:
        'Mean and standard deviation of value and summary size per (algorithm, d)'
        cells: Dict[Tuple[str, int], List[ReportRow]] = {}
        for row in self.rows:
            cells.setdefault((row.algorithm, row.d), []).append(row)
        result = []
        for (algorithm, d), rows in sorted(cells.items()):
            values = np.array([row.value for row in rows])
            sizes = np.array([row.summary_size for row in rows])
            result.append({
                'algorithm': algorithm, 'd': d, 'trials': len(rows),
                'value_mean': float(np.mean(values)),
                'value_std': float(np.std(values, ddof=1)) if len(rows) > 1 else 0.0,
                'summary_size_mean': float(np.mean(sizes)),
                'summary_size_std': float(np.std(sizes, ddof=1)) if len(rows) > 1 else 0.0,
            })
        return result

    def to_dict(self) -> dict:
        return {'config': self.config, 'rows': [asdict(row) for row in self.rows],
                'plans': self.plans, 'bounds': self.bounds, 'aggregates': self.aggregates()}


def load_instance(cfg: ExperimentConfig) -> InstanceData:
    source = cfg.instance.get('source', 'synthetic')
    if source == 'synthetic':
        return synth_instance(cfg.instance['kind'], cfg.instance.get('params'), int(cfg.instance.get('seed', 0)))
    if source == 'bundle':
        _metadata, data = read_bundle(cfg.instance['path'])
        return data
    return load_dataset(cfg.instance)


def stream_order(cfg: ExperimentConfig, data: InstanceData, f: ObjectiveOracle) -> List[int]:
    '''
    file: the order of the data; random: one permutation fixed by the base
    seed and reused by every trial; descending: largest singleton first
    '''
    if cfg.stream_order == 'random':
        return RngHandle(cfg.seed, ORDER_STREAM).permutation(data.file_order)
    if cfg.stream_order == 'descending':
        reference = f.fresh()
        return sorted(data.file_order, key=lambda e: (-reference.marginal(e, ()), e))
    return data.file_order


def deletion_plan(cfg: ExperimentConfig, data: InstanceData, f: ObjectiveOracle,
                  m: MatroidOracle, d: int) -> DeletionPlan:
    kind = cfg.adversary.get('kind', 'greedy')
    elements = list(range(data.n))
    if kind == 'greedy':
        return greedy_adversary(elements, f.fresh(), m, d, cfg.eps0)
    if kind == 'random':
        return random_adversary(elements, min(d, data.n), int(cfg.adversary.get('seed', 0)))
    if kind == 'top-value':
        return top_value_adversary(elements, f.fresh(), d)
    return DeletionPlan(frozenset(), 'none')


def theoretical_bounds(cfg: ExperimentConfig) -> dict:
    'Approximation ratios guaranteed for eps < 1/3 with the configured inner solver'
    beta = InnerSolver(cfg.inner_solver, cfg.eps0).beta
    tail = (2 * beta + 15) * cfg.eps
    return {'beta': beta, 'centralized': 2 + beta + tail, 'streaming': 4 + beta + tail,
            'theoretical_regime': cfg.theoretical_regime, 'max_iter_log': 'natural'}


def run_trial(cfg: ExperimentConfig, data: InstanceData, f0: ObjectiveOracle, m: MatroidOracle,
              order: List[int], algorithm: str, d: int, trial: int, plan: DeletionPlan,
              summaries: Optional[dict] = None) -> ReportRow:
    '''
    Run Phase I and Phase II of one algorithm for one (d, trial) cell.
    The objective oracle is a fresh copy, so its counter measures this
    trial alone.
    '''
    rng = RngHandle(cfg.seed, trial)
    f = f0.fresh()
    inner = InnerSolver(cfg.inner_solver, cfg.eps0)
    deleted = plan.deleted
    started = time.perf_counter()
    details = {}

    if algorithm in ('centralized', 'streaming'):
        if algorithm == 'centralized':
            summary = phase1_centralized(range(data.n), f, m, d, cfg.eps, rng)
        else:
            summary = phase1_streaming(order, f, m, d, cfg.eps, rng)
        middle = time.perf_counter()
        solution = phase2(summary, deleted, f, m, inner)
        size, a_size, b_size, peak = summary.size, len(summary.a), len(summary.b), summary.peak_memory
        details['arm'] = solution.details['arm']
        if summaries is not None:
            summaries[(algorithm, cfg.eps, d, trial)] = summary.to_dict()
    elif algorithm == 'robust-swapping-cascade':
        cascade = robust_swapping_cascade(order, d, f, m)
        middle = time.perf_counter()
        solution = cascade.phase2(deleted, f)
        size, a_size, b_size, peak = cascade.size, 0, cascade.size, cascade.peak_memory
        details['instance'] = solution.details['instance']
        details['last_untouched'] = solution.details['last_untouched']
    elif algorithm == 'omniscient-greedy':
        middle = started
        solution = omniscient_greedy(range(data.n), deleted, f, m, cfg.eps0)
        size = a_size = peak = len(solution)
        b_size = 0
    elif algorithm == 'omniscient-swapping':
        middle = started
        solution = omniscient_swapping(order, deleted, f, m)
        size = a_size = peak = len(solution)
        b_size = 0
    else:
        raise InvalidConfiguration('unknown algorithm {!r}'.format(algorithm))
    finished = time.perf_counter()

    return ReportRow(
        algorithm=algorithm, d=d, trial=trial, value=float(solution.value), summary_size=size,
        a_size=a_size, b_size=b_size, peak_memory=peak, oracle_calls=f.calls, eps=cfg.eps,
        seed=rng.seed, stream_id=rng.stream_id, prng_algorithm=PRNG_ALGORITHM,
        theoretical_regime=cfg.theoretical_regime, deleted=len(deleted),
        phase1_seconds=middle - started, phase2_seconds=finished - middle, details=details)


def _trial_matroids(cfg: ExperimentConfig, data: InstanceData) -> List[MatroidOracle]:
    '''
    One matroid per trial.  Elements with several candidate parts are
    resolved per trial seed under the redraw policy, once otherwise.
    '''
    if not data.multi_part or cfg.assignment.get('policy') == 'fixed':
        seed = int(cfg.assignment.get('seed', 0))
        m = build_matroid(data, cfg.matroid, RngHandle(seed, ASSIGNMENT_STREAM))
        return [m] * cfg.trials
    return [build_matroid(data, cfg.matroid, RngHandle(cfg.seed, ASSIGNMENT_STREAM + 1 + trial))
            for trial in range(cfg.trials)]


def run_experiment(cfg: ExperimentConfig, data: Optional[InstanceData] = None,
                   only: Optional[Tuple[str, int, int]] = None,
                   summaries: Optional[dict] = None) -> ExperimentReport:
    '''
    Arguments:
        cfg         Validated ExperimentConfig
        data        Instance to use instead of the one cfg names
        only        (algorithm, d, trial) to run a single cell
        summaries   If given, receives the Phase-I summary of every
                    centralized and streaming cell

    Return:
        ExperimentReport
    '''
    data = data if data is not None else load_instance(cfg)
    f0 = build_objective(data, cfg.objective)
    matroids = _trial_matroids(cfg, data)
    order = stream_order(cfg, data, f0)
    rows, plans = [], {}

    for d in cfg.d_sweep:
        if d > data.n:
            raise InvalidConfiguration('deletion budget {} exceeds the {} elements of the instance'.format(d, data.n))
        # Plans are fixed before any Phase-I randomness is drawn.
        plan_cache = {}
        trial_plans = []
        for trial, m in enumerate(matroids):
            if only is not None and (only[1] != d or only[2] != trial):
                trial_plans.append(None)
                continue
            if id(m) not in plan_cache:
                plan_cache[id(m)] = deletion_plan(cfg, data, f0, m, d)
            trial_plans.append(plan_cache[id(m)])
            plans['d={},trial={}'.format(d, trial)] = plan_cache[id(m)].to_dict()

        for algorithm in cfg.algorithm:
            for trial in range(cfg.trials):
                if only is not None and only != (algorithm, d, trial):
                    continue
                row = run_trial(cfg, data, f0, matroids[trial], order, algorithm, d, trial,
                                trial_plans[trial], summaries)
                logger.info('%s d=%d trial=%d value=%.6g size=%d calls=%d', algorithm, d, trial,
                            row.value, row.summary_size, row.oracle_calls)
                rows.append(row)

    return ExperimentReport(cfg.to_dict(), rows, plans, theoretical_bounds(cfg))


def write_json(report: ExperimentReport, path: str):
    with open(path, 'w') as outfile:
        json.dump(report.to_dict(), outfile, indent=2, sort_keys=True)
        outfile.write('\n')


def write_csv(report: ExperimentReport, path: str):
    with open(path, 'w', newline='') as outfile:
        writer = csv.writer(outfile, lineterminator='\n')
        writer.writerow(CSV_COLUMNS)
        for row in report.rows:
            writer.writerow([row.algorithm, row.d, row.trial, repr(row.value), row.summary_size,
                             row.peak_memory, row.oracle_calls])


def write_summaries(summaries: dict, dirpath: str):
    'One JSON file per Phase-I summary, named algorithm_eEPS_dD_tTRIAL.json'
    os.makedirs(dirpath, exist_ok=True)
    for (algorithm, eps, d, trial), summary in sorted(summaries.items()):
        filename = '{}_e{}_d{}_t{}.json'.format(algorithm, repr(eps), d, trial)
        with open(os.path.join(dirpath, filename), 'w') as outfile:
            json.dump(summary, outfile, indent=2, sort_keys=True)


def replay(report_dict: dict, index: int) -> Tuple[ReportRow, ReportRow]:
    '''
    Re-run one row of a report from the configuration and seeds it records.

    Return:
        (recorded row, replayed row)
    '''
    rows = report_dict['rows']
    if not 0 <= index < len(rows):
        raise InvalidConfiguration('report has {} rows; no row {}'.format(len(rows), index))
    recorded = ReportRow(**rows[index])
    data = dict(report_dict['config'])
    data.pop('path', None)
    cfg = config_from_dict(data)
    cfg.seed = recorded.seed
    cfg.eps = recorded.eps
    replayed = run_experiment(cfg, only=recorded.key()).rows[0]
    return recorded, replayed


def rows_match(recorded: ReportRow, replayed: ReportRow) -> bool:
    return (recorded.value == replayed.value and recorded.summary_size == replayed.summary_size
            and recorded.oracle_calls == replayed.oracle_calls)
