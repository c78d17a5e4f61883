import pickle

import numpy as np
import pytest

from serializer import INSTANCE, DeserializeError, get_metadata, read_bundle, write_bundle
from synth import synth_instance


@pytest.fixture
def bundle(tmp_path):
    data = synth_instance('geometric', {'n': 20, 'grid': 2}, seed=3)
    path = str(tmp_path / 'geo.bundle')
    write_bundle(data, path, 'geometric', data.params, 'twenty points')
    return path, data


def test_read_back(bundle):
    path, data = bundle
    metadata, loaded = read_bundle(path)
    assert np.array_equal(loaded.points, data.points)
    assert loaded.parts == data.parts
    assert metadata['comment'] == 'twenty points'
    assert metadata['params'] == {'n': 20, 'grid': 2, 'seed': 3}


def test_metadata_without_payload(bundle):
    path, _ = bundle
    assert get_metadata(path)['kind'] == 'geometric'


def test_not_a_bundle(tmp_path):
    path = tmp_path / 'other.bin'
    path.write_bytes(b'\x89PNG\r\n\x1a\n' + b'\0' * 16)
    with pytest.raises(DeserializeError):
        read_bundle(str(path))


def test_other_version(bundle):
    path, _ = bundle
    metadata, data = read_bundle(path)
    payload = pickle.dumps(data)
    with open(path, 'wb') as outfile:
        outfile.write(INSTANCE.encode('ascii'))
        outfile.write(pickle.dumps(dict(metadata, version='0.9.0')))
        outfile.write(payload)
    with pytest.raises(DeserializeError) as excinfo:
        read_bundle(path)
    assert 'regenerate' in str(excinfo.value)


def test_damaged_payload(bundle):
    path, _ = bundle
    with open(path, 'ab') as outfile:
        outfile.write(b'\0')
    with pytest.raises(DeserializeError) as excinfo:
        read_bundle(path)
    assert 'md5' in str(excinfo.value)


@pytest.mark.parametrize('body', [b'', b'garbage', pickle.dumps({'kind': 'geometric'})[:-4]])
def test_truncated_metadata(tmp_path, body):
    path = tmp_path / 'short.bundle'
    path.write_bytes(INSTANCE.encode('ascii') + body)
    with pytest.raises(DeserializeError) as excinfo:
        get_metadata(str(path))
    assert 'truncated or corrupt' in str(excinfo.value)
    with pytest.raises(DeserializeError):
        read_bundle(str(path))


def test_metadata_must_be_a_dictionary(tmp_path):
    path = tmp_path / 'list.bundle'
    path.write_bytes(INSTANCE.encode('ascii') + pickle.dumps([1, 2, 3]))
    with pytest.raises(DeserializeError):
        get_metadata(str(path))
