import logging

import numpy as np
import pytest

from core import RngHandle
from datasets import (InstanceData, build_matroid, build_objective, load_dataset, read_edge_list, read_points,
                      read_weights, resolve_parts, write_dataset)
from matroids import LaminarMatroid, PartitionMatroid, UniformMatroid
from message import InvalidConfiguration, MalformedFile
from synth import synth_instance


def write(path, text):
    path.write_text(text)
    return str(path)


def test_edge_list_skips_comments_and_blanks(tmp_path):
    path = write(tmp_path / 'g.edges', '# a comment\n0 1\n\n1 2\n')
    assert read_edge_list(path) == [(0, 1), (1, 2)]


def test_edge_list_reports_the_bad_line(tmp_path):
    path = write(tmp_path / 'g.edges', '0 1\n1 2\n2 x\n')
    with pytest.raises(MalformedFile) as excinfo:
        read_edge_list(path)
    errmsg = excinfo.value.error_messages[0]
    assert errmsg.line_number == 3
    assert errmsg.path == path


def test_points_with_header_and_parts(tmp_path):
    path = write(tmp_path / 'p.csv', 'id,x,y,part\nrome,41.9,12.5,0;2\nmilan,45.5,9.2,1\n')
    labels, points, parts = read_points(path)
    assert labels == ['rome', 'milan']
    assert points.shape == (2, 2)
    assert parts == [[0, 2], [1]]


def test_points_without_header(tmp_path):
    labels, points, parts = read_points(write(tmp_path / 'p.csv', '0,0.5,0.5\n1,1.0,2.0\n'))
    assert labels == ['0', '1']
    assert parts is None
    assert points[1].tolist() == [1.0, 2.0]


def test_points_with_ragged_part_column(tmp_path):
    path = write(tmp_path / 'p.csv', '0,0.5,0.5,1\n1,1.0,2.0\n')
    with pytest.raises(MalformedFile) as excinfo:
        read_points(path)
    assert excinfo.value.error_messages[0].line_number == 2


def test_negative_weight(tmp_path):
    with pytest.raises(MalformedFile):
        read_weights(write(tmp_path / 'w.txt', '1.0\n-2\n'))


def test_load_edges_with_isolated_vertices(tmp_path):
    path = write(tmp_path / 'g.edges', '0 1\n')
    data = load_dataset({'edges': path, 'n': 4})
    assert data.n == 4
    assert data.default_objective == {'kind': 'dominating'}


def test_load_without_files():
    with pytest.raises(InvalidConfiguration):
        load_dataset({})


def test_part_file_must_match(tmp_path):
    points = write(tmp_path / 'p.csv', '0,0,0\n1,1,1\n')
    parts = write(tmp_path / 'p.parts', '0\n')
    with pytest.raises(InvalidConfiguration):
        load_dataset({'points': points, 'parts': parts})


def test_resolve_parts_warns_once(caplog):
    with caplog.at_level(logging.WARNING, logger='datasets'):
        assignment = resolve_parts([[0], [1, 2], [2]], RngHandle(0))
    assert assignment[0] == 0 and assignment[2] == 2
    assert assignment[1] in (1, 2)
    assert '1 elements belong to several parts' in caplog.text


def test_resolve_parts_covers_every_candidate():
    seen = {resolve_parts([[3, 5]], RngHandle(seed))[0] for seed in range(50)}
    assert seen == {3, 5}


def test_build_from_points():
    data = InstanceData(n=4, source='test', points=np.array([[0, 0], [1, 0], [0, 1], [1, 1]], dtype=float),
                        parts=[[0], [0], [1], [1]])
    f = build_objective(data, {'kind': 'kmedoid'})
    assert f.value(range(4)) >= f.value([0])
    m = build_matroid(data, {'kind': 'laminar', 'capacity': 1, 'total': 1})
    assert isinstance(m, LaminarMatroid)
    assert m.rank() == 1
    assert isinstance(build_matroid(data, {'kind': 'partition', 'capacity': 2}), PartitionMatroid)
    assert isinstance(build_matroid(data, {'kind': 'uniform', 'capacity': 2}), UniformMatroid)


def test_build_truncation_and_explicit_family():
    data = InstanceData(n=4, source='test', weights=np.ones(4), parts=[[0], [0], [1], [1]])
    assert build_matroid(data, {'kind': 'truncation', 'k': 1, 'inner': {'kind': 'partition'}}).rank() == 1
    family = build_matroid(data, {'kind': 'laminar', 'family': [[[0, 1], 1], [[0, 1, 2, 3], 2]]})
    assert family.rank() == 2


def test_build_errors():
    data = InstanceData(n=3, source='test', weights=np.ones(3))
    with pytest.raises(InvalidConfiguration):
        build_objective(data, {'kind': 'dominating'})
    with pytest.raises(InvalidConfiguration):
        build_objective(data, {'kind': 'submodular'})
    with pytest.raises(InvalidConfiguration):
        build_matroid(data, {'kind': 'partition'})


def test_written_points_load_back(tmp_path):
    data = synth_instance('geometric', {'n': 12, 'grid': 2}, seed=4)
    path = str(tmp_path / 'geo.csv')
    assert write_dataset(data, path) == 'points'
    loaded = load_dataset({'points': path})
    assert np.array_equal(loaded.points, data.points)
    assert loaded.parts == data.parts


def test_written_edges_load_back(tmp_path):
    data = synth_instance('coverage', {'n': 15, 'p': 0.3}, seed=1)
    path = str(tmp_path / 'cov.edges')
    assert write_dataset(data, path) == 'edges'
    assert load_dataset({'edges': path, 'n': 15}).edges == data.edges


def test_written_weights_load_back(tmp_path):
    data = synth_instance('modular-lowerbound', {'k': 2, 'd': 1, 'n': 8}, seed=1)
    path = str(tmp_path / 'lb.weights')
    assert write_dataset(data, path) == 'weights'
    assert np.array_equal(load_dataset({'weights': path}).weights, data.weights)


def test_nothing_to_write(tmp_path):
    data = InstanceData(n=1, source='test', movies=np.ones((1, 2)), user=np.ones(2))
    with pytest.raises(InvalidConfiguration):
        write_dataset(data, str(tmp_path / 'x'))


def test_default_user_vector_is_uniform_on_the_unit_cube(tmp_path):
    header = ','.join(['title'] + ['f{}'.format(j) for j in range(30)])
    rows = ['m{},'.format(i) + ','.join(str((i + j) % 5 - 2) for j in range(30)) for i in range(40)]
    features = write(tmp_path / 'movies.csv', '\n'.join([header] + rows) + '\n')
    data = load_dataset({'features': features, 'seed': 11})
    assert data.user.shape == (30,)
    assert np.all((data.user >= 0) & (data.user < 1))
    again = load_dataset({'features': features, 'seed': 11})
    assert np.array_equal(again.user, data.user)
