# Root build manifest: mirrors src/setup.py (flat py_modules under src/)
# so that `pip install -e .` works from the project root.

from setuptools import setup

setup(
    name='RobustSummaryToolkit',
    version='1.0.0',
    package_dir={'': 'src'},
    py_modules=[
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
