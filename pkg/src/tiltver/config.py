"""Process-wide resource limits."""

from __future__ import annotations

from contextlib import contextmanager

from .errors import DimensionCapError

DEFAULT_DIM_CAP = 4000
_state = {"dim_cap": DEFAULT_DIM_CAP}


def dim_cap() -> int:
    return _state["dim_cap"]


def set_dim_cap(cap: int) -> None:
    if cap < 1:
        raise ValueError("dimension cap must be positive")
    _state["dim_cap"] = int(cap)


@contextmanager
def dimension_cap(cap: int):
    old = _state["dim_cap"]
    set_dim_cap(cap)
    try:
        yield
    finally:
        _state["dim_cap"] = old


def check_dim(what: str, dim: int) -> None:
    if dim > _state["dim_cap"]:
        raise DimensionCapError(what, dim, _state["dim_cap"])
