import os

import pytest

from config import ExperimentConfig, apply_overrides, config_from_dict, load_config, validate_config
from message import InvalidConfiguration, MalformedFile
from serializer import write_bundle
from synth import synth_instance


def write(path, text):
    path.write_text(text)
    return str(path)


def test_defaults_are_valid():
    cfg = ExperimentConfig()
    assert validate_config(cfg) == []
    assert not cfg.theoretical_regime


def test_full_file(tmp_path):
    path = write(tmp_path / 'run.yaml', '\n'.join([
        'instance: {source: synthetic, kind: geometric, params: {n: 30, grid: 3}}',
        'objective: {kind: logdet}',
        'algorithm: [centralized, streaming]',
        'd_sweep: 4',
        'eps: 0.25',
        'adversary: {kind: random}',
    ]))
    cfg = load_config(path)
    assert cfg.algorithm == ['centralized', 'streaming']
    assert cfg.d_sweep == [4]
    assert cfg.theoretical_regime
    assert cfg.adversary == {'kind': 'random', 'seed': 0}
    assert cfg.path == path


def test_unknown_key_names_its_line(tmp_path):
    path = write(tmp_path / 'run.yaml', 'eps: 0.5\ntrials: 2\ncolour: blue\n')
    with pytest.raises(InvalidConfiguration) as excinfo:
        load_config(path)
    errmsg = excinfo.value.error_messages[0]
    assert errmsg.line_number == 3
    assert 'colour' in errmsg.message


def test_bad_value_names_its_line(tmp_path):
    path = write(tmp_path / 'run.yaml', 'trials: 2\neps: 1.5\n')
    with pytest.raises(InvalidConfiguration) as excinfo:
        load_config(path)
    assert [errmsg.line_number for errmsg in excinfo.value.error_messages] == [2]


def test_wrong_type(tmp_path):
    with pytest.raises(InvalidConfiguration):
        load_config(write(tmp_path / 'run.yaml', 'matroid: uniform\n'))


def test_not_yaml(tmp_path):
    with pytest.raises(MalformedFile):
        load_config(write(tmp_path / 'run.yaml', 'eps: [0.5\n'))
    with pytest.raises(MalformedFile):
        load_config(write(tmp_path / 'list.yaml', '- 1\n- 2\n'))


def test_every_problem_is_reported():
    cfg = config_from_dict({'eps': 0, 'trials': 0, 'algorithm': 'sieve', 'stream_order': 'sideways'})
    assert len(validate_config(cfg)) == 4


def test_overrides():
    cfg = apply_overrides(ExperimentConfig(), algorithm='centralized,streaming', d=['1,2', '5'], eps=0.3,
                          trials=1, seed=9)
    assert cfg.algorithm == ['centralized', 'streaming']
    assert cfg.d_sweep == [1, 2, 5]
    assert (cfg.eps, cfg.trials, cfg.seed) == (0.3, 1, 9)
    with pytest.raises(InvalidConfiguration):
        apply_overrides(ExperimentConfig(), eps=2.0)


def test_dataset_paths_resolve_next_to_the_file(tmp_path):
    write(tmp_path / 'w.txt', '1\n2\n')
    cfg = load_config(write(tmp_path / 'run.yaml', 'instance: {source: dataset, weights: w.txt}\n'))
    assert cfg.instance['weights'] == str(tmp_path / 'w.txt')


def test_relative_config_paths_become_absolute(tmp_path, monkeypatch):
    (tmp_path / 'conf').mkdir()
    write(tmp_path / 'conf' / 'w.txt', '1\n2\n')
    data = synth_instance('coverage', {'n': 10}, seed=0)
    write_bundle(data, str(tmp_path / 'conf' / 'cov.bundle'), 'coverage', data.params)
    write(tmp_path / 'conf' / 'dataset.yaml', 'instance: {source: dataset, weights: w.txt}\n')
    write(tmp_path / 'conf' / 'bundle.yaml', 'instance: {source: bundle, path: cov.bundle}\n')
    monkeypatch.chdir(tmp_path)
    assert load_config(os.path.join('conf', 'dataset.yaml')).instance['weights'] == str(tmp_path / 'conf' / 'w.txt')
    assert load_config(os.path.join('conf', 'bundle.yaml')).instance['path'] == str(tmp_path / 'conf' / 'cov.bundle')


def test_missing_dataset(tmp_path):
    with pytest.raises(InvalidConfiguration):
        load_config(write(tmp_path / 'run.yaml', 'instance: {source: dataset, weights: nowhere.txt}\n'))


def test_bundle_source(tmp_path):
    data = synth_instance('coverage', {'n': 10}, seed=0)
    write_bundle(data, str(tmp_path / 'cov.bundle'), 'coverage', data.params)
    cfg = load_config(write(tmp_path / 'run.yaml', 'instance: {source: bundle, path: cov.bundle}\n'))
    assert cfg.instance['path'] == str(tmp_path / 'cov.bundle')


def test_unknown_source():
    cfg = config_from_dict({'instance': {'source': 'web'}})
    assert 'synthetic, dataset or bundle' in validate_config(cfg)[0].message
