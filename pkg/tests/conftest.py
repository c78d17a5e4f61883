# NOTICE
# Robust Summary Toolkit.
# See README.md for usage and CHANGELOG.md for release history.

'''
Put src/ on sys.path so the flat modules import the way the installed
console scripts see them.
'''
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'src'))


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: full-scale verification sweeps')
