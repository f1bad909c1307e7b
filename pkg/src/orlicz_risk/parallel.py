"""Optional thread-parallel mapping over atoms.

Per-atom solves are pure and independent; results are collected in atom order
either way, so outputs are identical with the switch on or off.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence, TypeVar

_T = TypeVar("_T")
_R = TypeVar("_R")

_enabled = False


def set_atoms_parallel(enabled: bool) -> None:
    global _enabled
    _enabled = bool(enabled)


def atoms_parallel_enabled() -> bool:
    return _enabled


def atoms_map(fn: Callable[[_T], _R], items: Sequence[_T]) -> list[_R]:
    if not _enabled or len(items) < 2:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(len(items), 8)) as pool:
        return list(pool.map(fn, items))
