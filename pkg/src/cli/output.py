"""Deterministic CSV/JSON artifacts and the worker pool for sweeps."""

import json
import logging
import math
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Iterable, List, Sequence, TypeVar

from src.utils.constants import CSV_HEADER, FLOAT_FORMAT, THREADS_ENV_VAR
from src.utils.errors import ConfigError

try:
    import psutil
    PSUTIL_AVAILABLE = True
except ImportError:
    PSUTIL_AVAILABLE = False

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def format_value(value: Any) -> str:
    """Fixed text form of one cell; floats use 17 significant digits."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, FLOAT_FORMAT)
    return str(value)


def render_csv(columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    lines = [CSV_HEADER, ",".join(columns)]
    for row in rows:
        if len(row) != len(columns):
            raise ValueError(f"row has {len(row)} cells, expected {len(columns)}")
        lines.append(",".join(format_value(v) for v in row))
    return "\n".join(lines) + "\n"


def _atomic_write(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    handle, temporary = tempfile.mkstemp(prefix=".abq-", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(handle, "w", newline="") as f:
            f.write(text)
        os.replace(temporary, path)
    except BaseException:
        if os.path.exists(temporary):
            os.remove(temporary)
        raise
    logger.debug("wrote %s (%d bytes)", path, len(text))


def write_csv(path: str, columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> int:
    """
    Write a versioned CSV through a temporary file and an atomic rename.

    Returns:
        Number of data rows written
    """
    rows = list(rows)
    _atomic_write(path, render_csv(columns, rows))
    return len(rows)


def _plain(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return format_value(value)
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def write_json(path: str, payload: dict):
    _atomic_write(path, json.dumps(_plain(payload), indent=2, sort_keys=True) + "\n")


def worker_count() -> int:
    """
    Size of the sweep worker pool.

    ABQ_THREADS when set, else the physical core count from psutil, else os.cpu_count().
    """
    value = os.environ.get(THREADS_ENV_VAR)
    if value:
        try:
            count = int(value)
        except ValueError:
            raise ConfigError(f"not an integer: {value}", key=THREADS_ENV_VAR) from None
        if count < 1:
            raise ConfigError(f"must be >= 1, got {count}", key=THREADS_ENV_VAR)
        return count
    cores = psutil.cpu_count(logical=False) if PSUTIL_AVAILABLE else None
    return cores or os.cpu_count() or 1


def parallel_map(function: Callable[[T], R], items: Sequence[T]) -> List[R]:
    """Map over sweep points with the worker pool; results keep the input order."""
    items = list(items)
    workers = min(worker_count(), max(len(items), 1))
    if workers == 1:
        return [function(item) for item in items]
    logger.debug("sweeping %d points on %d threads", len(items), workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(function, items))
