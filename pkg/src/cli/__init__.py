"""
Batch front end: run configuration, experiments, CSV output and the self-test.
"""

from .run_config import RunConfig, config_keys, load_run_config
from .output import format_value, parallel_map, render_csv, worker_count, write_csv, write_json
from .experiments import EXPERIMENTS, Table, reduce_payload
from .selftest import SelfTester
from .app import main, run

__all__ = [
    'RunConfig',
    'config_keys',
    'load_run_config',
    'format_value',
    'parallel_map',
    'render_csv',
    'worker_count',
    'write_csv',
    'write_json',
    'EXPERIMENTS',
    'Table',
    'reduce_payload',
    'SelfTester',
    'main',
    'run',
]
