# NOTICE
# Robust Summary Toolkit.
# See README.md for usage and CHANGELOG.md for release history.

'''
Instance bundles.

A bundle is a binary file with three sections:
        The 8-byte identifier ("magic number"): "instance"
        The python-pickled metadata dictionary
        The python-pickled InstanceData payload

The python-pickled dictionary includes:
        comment:     A user-supplied description
        version:     The toolkit version that wrote the bundle
        timestamp:   The creation date and time
        kind:        The generator kind (geometric, coverage, ...)
        params:      The generator parameters, seed included
        md5:         The md5 of the pickled payload

Keeping the metadata in front of the payload lets `describe` examine a
bundle without unpickling the instance.
'''
import datetime
import hashlib
import logging
import pickle

from message import DataError, MalformedFile

logger = logging.getLogger(__name__)

INSTANCE = 'instance'
VERSION = '1.0.0'


class DeserializeError(MalformedFile):
    'Raised on reading a file not written by this toolkit'
    pass


def get_hash(payload):
    '''
    Arguments:
       payload   Pickled instance bytes

    Return:
        The hexlified md5 of the payload
    '''
    return hashlib.md5(payload).hexdigest()


def write_bundle(data, output_filepath, kind, params, comment=''):
    '''
    Arguments:
        data             InstanceData to store
        output_filepath  Full path to the output bundle
        kind             Generator kind
        params           Generator parameters
        comment          Free text shown by describe
    '''
    payload = pickle.dumps(data)
    metadata = {
        'comment': comment or 'instance bundle ({})'.format(kind),
        'version': VERSION,
        'timestamp': datetime.datetime.now().isoformat(timespec='seconds'),
        'kind': kind,
        'params': dict(params),
        'md5': get_hash(payload),
    }
    with open(output_filepath, 'wb') as outfile:
        outfile.write(INSTANCE.encode('ascii'))
        outfile.write(pickle.dumps(metadata))
        outfile.write(payload)
    logger.info('wrote %s bundle %s', kind, output_filepath)


def read_bundle(serialized_filepath):
    '''
    Arguments:
        serialized_filepath    Full path to the bundle

    Return:
        2-tuple of (metadata, InstanceData)

    Raise:
        DeserializeError if the file is not a bundle, was written by another
        toolkit version, is truncated, or its payload does not match the
        recorded md5.
    '''
    with open(serialized_filepath, 'rb') as infile:
        _read_identifier(infile)
        metadata = _unpickle(lambda: pickle.load(infile), serialized_filepath)
        payload = infile.read()

    if not isinstance(metadata, dict):
        raise DeserializeError(DataError(message='bundle metadata is not a dictionary', path=serialized_filepath))
    if metadata.get('version') != VERSION:
        raise DeserializeError(DataError(
            message='bundle written by toolkit version {}, this is {}; regenerate it with `robust-summary gen`'.format(
                metadata.get('version'), VERSION), path=serialized_filepath))
    if get_hash(payload) != metadata.get('md5'):
        raise DeserializeError(DataError(message='bundle payload does not match its md5', path=serialized_filepath))
    return metadata, _unpickle(lambda: pickle.loads(payload), serialized_filepath)


def get_metadata(serialized_filepath):
    '''
    Return:
        The metadata of the bundle

    Raise:
        DeserializeError if the file was not written by this toolkit.
    '''
    with open(serialized_filepath, 'rb') as infile:
        _read_identifier(infile)
        metadata = _unpickle(lambda: pickle.load(infile), serialized_filepath)
    if not isinstance(metadata, dict):
        raise DeserializeError(DataError(message='bundle metadata is not a dictionary', path=serialized_filepath))
    return metadata


def _unpickle(load, path):
    try:
        return load()
    except (pickle.UnpicklingError, EOFError, AttributeError, ImportError, IndexError, ValueError, TypeError) as e:
        raise DeserializeError(DataError(message='bundle is truncated or corrupt ({})'.format(e), path=path))


def _read_identifier(infile):
    '''
    Arguments:
        infile   File object of the bundle, opened 'rb'

    Raise:
       DeserializeError  if the file does not start with the 8-byte "magic"
    '''
    try:
        identifier = infile.read(8).decode('ascii')
    except UnicodeDecodeError:
        identifier = None

    if identifier != INSTANCE:
        raise DeserializeError(DataError(message='not an instance bundle written by this toolkit', path=infile.name))
    return identifier
