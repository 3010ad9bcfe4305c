"""Bounded loops as goal conjunctions.

``builde(n, f)`` is the relational counterpart of ``build-list``: it conjoins
``f(0) ... f(n-1)`` in index order and ends in ``succeed``. Each step is
delayed, so long loops never grow the Python stack.
"""

from __future__ import annotations

from typing import Callable, Sequence

from .kanren import Goal, Immature, bind, succeed

__all__ = ["builde", "builde_nest"]


def builde(n: int, f: Callable[[int], Goal]) -> Goal:
    if n < 0:
        raise ValueError("loop count must be non-negative")

    def step(m: int) -> Goal:
        if m >= n:
            return succeed
        return lambda s: Immature(lambda: bind(f(m)(s), step(m + 1)))
    return step(0)


def builde_nest(dims: Sequence[int], f: Callable[..., Goal]) -> Goal:
    """Nest ``builde`` over ``dims``; ``f`` gets one index per dimension.

    Index tuples arrive in lexicographic order (first dimension slowest).
    An empty ``dims`` applies ``f()`` once.
    """
    dims = tuple(dims)
    if any(d < 0 for d in dims):
        raise ValueError("loop dimensions must be non-negative")

    def loop(depth: int, indices: tuple[int, ...]) -> Goal:
        if depth == len(dims):
            return f(*indices)
        return builde(dims[depth], lambda i: loop(depth + 1, indices + (i,)))
    return loop(0, ())
