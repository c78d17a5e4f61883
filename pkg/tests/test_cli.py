import json

import pytest

import describe
import robust_summary
from message import InvalidConfiguration


def run_main(module, argv):
    with pytest.raises(SystemExit) as excinfo:
        module.main(argv)
    return excinfo.value.code


def test_parse_params():
    assert robust_summary.parse_params(['n=200', 'p=0.2', 'name=abc']) == {'n': 200, 'p': 0.2, 'name': 'abc'}
    with pytest.raises(InvalidConfiguration):
        robust_summary.parse_params(['n'])


def test_gen_then_run_then_replay(tmp_path, capsys):
    bundle = str(tmp_path / 'cov.bundle')
    assert run_main(robust_summary, ['gen', 'coverage', '--param', 'n=20', '--bundle', bundle]) == 0

    config = tmp_path / 'run.yaml'
    config.write_text('instance: {source: bundle, path: cov.bundle}\nalgorithm: [centralized, streaming]\n')
    report = str(tmp_path / 'report.json')
    code = run_main(robust_summary, ['run', '--config', str(config), '--d', '1', '--d', '2', '--trials', '1',
                                     '--out', report])
    assert code == 0
    assert len(json.loads(open(report).read())['rows']) == 4

    capsys.readouterr()
    assert run_main(robust_summary, ['replay', report, '--row', '3']) == 0
    assert capsys.readouterr().out.splitlines()[-1] == 'match'


def test_run_prints_a_table(capsys):
    assert run_main(robust_summary, ['run', '--algorithm', 'omniscient-greedy', '--trials', '1']) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0].split()[0] == 'algorithm'
    assert 'omniscient-greedy' in out


def test_eps_sweep_merges_rows(tmp_path):
    report = str(tmp_path / 'sweep.json')
    assert run_main(robust_summary, ['run', '--algorithm', 'streaming', '--trials', '1', '--eps-sweep',
                                     '--out', report]) == 0
    data = json.loads(open(report).read())
    assert sorted(row['eps'] for row in data['rows']) == [0.3, 0.5, 0.7, 0.99]
    assert set(data['bounds']) == {'0.3', '0.5', '0.7', '0.99'}


def test_dump_summaries(tmp_path):
    dump = tmp_path / 'dump'
    assert run_main(robust_summary, ['run', '--algorithm', 'centralized', '--trials', '1', '--d', '1',
                                     '--dump-summaries', str(dump), '--out', str(tmp_path / 'r.csv'),
                                     '--format', 'csv']) == 0
    assert sorted(p.name for p in dump.iterdir()) == ['centralized_e0.99_d1_t0.json', 'plans.json']


def test_bad_input_exits_with_two(tmp_path, capsys):
    config = tmp_path / 'bad.yaml'
    config.write_text('eps: 7\n')
    assert run_main(robust_summary, ['run', '--config', str(config)]) == 2
    out = capsys.readouterr().out
    assert 'Line 1' in out and 'must lie in (0, 1)' in out
    assert run_main(robust_summary, ['run', '--config', str(tmp_path / 'absent.yaml')]) == 2
    assert run_main(robust_summary, ['gen', 'geometric']) == 2
    assert run_main(robust_summary, ['replay', str(tmp_path / 'absent.json')]) == 2


def test_gen_writes_dataset_files(tmp_path, capsys):
    out = str(tmp_path / 'geo.csv')
    assert run_main(robust_summary, ['gen', 'geometric', '--param', 'n=15', '--out', out]) == 0
    assert 'wrote points file' in capsys.readouterr().out
    assert len(open(out).read().splitlines()) == 16


def test_verify_command(capsys):
    assert run_main(robust_summary, ['verify', '--suite', 'axioms', '--scale', '0.01']) == 0
    assert capsys.readouterr().out.startswith('PASS axioms/matroids')


def test_describe(tmp_path, capsys):
    bundle = str(tmp_path / 'lb.bundle')
    assert run_main(robust_summary, ['gen', 'modular-lowerbound', '--bundle', bundle, '--comment', 'lower bound']) == 0
    capsys.readouterr()
    assert run_main(describe, [bundle]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == 'lower bound'
    assert 'Generator: modular-lowerbound' in lines
    assert run_main(describe, [str(tmp_path / 'missing.bundle')]) == 2
    assert run_main(describe, [str(tmp_path)]) == 2


def test_describe_truncated_bundle(tmp_path, capsys):
    bundle = tmp_path / 'cut.bundle'
    bundle.write_bytes(b'instance' + b'garbage')
    assert run_main(describe, [str(bundle)]) == 2
    assert 'truncated or corrupt' in capsys.readouterr().out

    config = tmp_path / 'run.yaml'
    config.write_text('instance: {source: bundle, path: cut.bundle}\n')
    assert run_main(robust_summary, ['run', '--config', str(config), '--trials', '1']) == 2


def test_eps_sweep_dumps_every_summary(tmp_path):
    dump = tmp_path / 'dump'
    assert run_main(robust_summary, ['run', '--algorithm', 'centralized', '--trials', '1', '--d', '1', '--eps-sweep',
                                     '--dump-summaries', str(dump), '--out', str(tmp_path / 'r.json')]) == 0
    assert sorted(p.name for p in dump.iterdir()) == [
        'centralized_e0.3_d1_t0.json', 'centralized_e0.5_d1_t0.json', 'centralized_e0.7_d1_t0.json',
        'centralized_e0.99_d1_t0.json', 'plans.json']
    summary = json.loads((dump / 'centralized_e0.3_d1_t0.json').read_text())
    assert summary['params']['eps'] == 0.3
