# NOTICE
# Robust Summary Toolkit.
# See README.md for usage and CHANGELOG.md for release history.

from setuptools import setup

setup(
    name='RobustSummaryToolkit',
    version='1.0.0',
    py_modules = [
        'message',
        'core',
        'matroids',
        'objectives',
        'centralized',
        'streaming',
        'solvers',
        'adversary',
        'oracle',
        'invariants',
        'datasets',
        'synth',
        'config',
        'experiment',
        'verify',
        'serializer',
        'robust_summary',
        'describe'
    ],
    install_requires=[
        'networkx',
        'numpy',
        'PyYAML',
        'scipy'
    ],
    entry_points='''
        [console_scripts]
        robust-summary=robust_summary:main
        describe=describe:main
    '''
)
