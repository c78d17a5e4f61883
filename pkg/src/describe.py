# NOTICE
# Robust Summary Toolkit.
# See README.md for usage and CHANGELOG.md for release history.

'''
Toolkit Describe main program

Invocation:
    describe  bundle_filepath
'''
import argparse
import os
import sys

import serializer


def parse_args(args):
    '''
    Arguments:
        args   argument list, usually sys.argv[1:]

    Return:
        Namespace with these attributes:
            filepath     Full path to an instance bundle
    '''
    parser = argparse.ArgumentParser(
        prog='describe',
        description='Describe an instance bundle written by robust-summary gen --bundle.')

    # REQUIRED INPUT PATH
    parser.add_argument(
        type=str,
        action='store',
        dest='filepath',
        help='Full path to the instance bundle.')

    return parser.parse_args(args)


def describe_lines(metadata):
    'Printable lines for the metadata of one bundle'
    metadata = dict(metadata)
    lines = [metadata.pop('comment', '').strip(), '']
    lines.append('Toolkit version: {}'.format(metadata.pop('version', None)))
    lines.append('Build time: {}'.format(metadata.pop('timestamp', None)))
    lines.append('Generator: {}'.format(metadata.pop('kind', None)))
    params = metadata.pop('params', {}) or {}
    for key in sorted(params):
        lines.append('    {} = {}'.format(key, params[key]))
    lines.append('Payload md5: {}'.format(metadata.pop('md5', None)))
    return lines


def main(argv=None):
    '''
    Describe main program
    '''
    args = parse_args(sys.argv[1:] if argv is None else argv)
    filepath = args.filepath

    if not os.path.exists(filepath):
        print('{}: no such file'.format(filepath))
        sys.exit(2)

    if not os.path.isfile(filepath):
        print('{} is not a file'.format(filepath))
        sys.exit(2)

    try:
        metadata = serializer.get_metadata(filepath)
    except serializer.DeserializeError as exc:
        print(exc)
        sys.exit(2)

    for line in describe_lines(metadata):
        print(line)
    sys.exit(0)


if __name__ == '__main__':
    main()
