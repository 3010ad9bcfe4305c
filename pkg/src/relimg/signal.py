"""One-dimensional moving averages, four ways.

All four return exactly the same list of ints/Fractions:

* :func:`moving_average_naive` sums every window directly.
* :func:`moving_average_stream` builds the summed table as a self-referential
  lazy stream and subtracts it from itself shifted by the window.
* :func:`moving_average_memo` computes summed-table entries top-down on demand.
* :func:`moving_average_relational` states the computation as a relational
  program in which a ``conda`` picks, per output, between a summed-table
  shortcut and a direct window sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple, Sequence

from ._validation import check_signal, check_window
from .kanren import (
    Goal, ProjectionError, Symbol, conda, conj, eq, fresh, project, run,
    succeed, unified_varo,
)
from .loops import builde

__all__ = [
    "moving_average_naive", "moving_average_stream", "moving_average_memo",
    "moving_average_relational", "summed_table", "SummedTableMemo",
    "StrategyStats", "RelationalResult", "strategy_selecto",
    "LazyStream", "SHORTCUT", "DIRECT",
]

SHORTCUT = Symbol("shortcut")
DIRECT = Symbol("direct")


def _mean(total, w: int):
    value = Fraction(total, w)
    return int(value) if value.denominator == 1 else value


def _validated(v, w):
    values = check_signal(v)
    return values, check_window(w, len(values))


def moving_average_naive(v: Sequence, w: int) -> list:
    values, w = _validated(v, w)
    out = []
    for i in range(len(values) - w + 1):
        total = 0
        for j in range(w):
            total += values[i + j]
        out.append(_mean(total, w))
    return out


def summed_table(v: Sequence) -> list:
    """Prefix sums with a leading 0: ``t[m] = v[0] + ... + v[m-1]``."""
    t = [0]
    for x in check_signal(v):
        t.append(t[-1] + x)
    return t


class LazyStream:
    """A cons cell whose tail is computed once, on first access."""

    __slots__ = ("head", "_tail", "_forced")

    def __init__(self, head, tail: Callable[[], "LazyStream | None"]):
        self.head = head
        self._tail = tail
        self._forced = False

    @property
    def tail(self) -> "LazyStream | None":
        if not self._forced:
            self._tail = self._tail()
            self._forced = True
        return self._tail

    @classmethod
    def from_list(cls, items: Sequence) -> "LazyStream | None":
        stream = None
        for item in reversed(items):
            stream = cls(item, (lambda s: lambda: s)(stream))
        return stream

    def drop(self, n: int) -> "LazyStream | None":
        s = self
        for _ in range(n):
            if s is None:
                return None
            s = s.tail
        return s

    def take(self, n: int) -> list:
        out = []
        s = self
        while s is not None and len(out) < n:
            out.append(s.head)
            s = s.tail
        return out


def _stream_map2(fn, a: LazyStream | None, b: LazyStream | None) -> LazyStream | None:
    if a is None or b is None:
        return None
    return LazyStream(fn(a.head, b.head), lambda: _stream_map2(fn, a.tail, b.tail))


def moving_average_stream(v: Sequence, w: int) -> list:
    values, w = _validated(v, w)
    source = LazyStream.from_list(values)

    def sum_helper(summed, rest):
        if rest is None:
            return None
        return LazyStream(summed.head + rest.head,
                          lambda: sum_helper(summed.tail, rest.tail))

    table = LazyStream(0, lambda: sum_helper(table, source))
    averages = _stream_map2(lambda x, y: _mean(x - y, w), table.drop(w), table)
    return averages.take(len(values) - w + 1)


class SummedTableMemo:
    """Summed-table entries computed on demand, each at most once.

    ``computed`` counts entries produced by the recurrence (index >= 1);
    ``indices`` is every index ever requested, base case included.
    """

    def __init__(self, v: Sequence):
        self.values = check_signal(v)
        self._memo: dict[int, object] = {}
        self.computed = 0
        self.indices: set[int] = set()

    def __call__(self, m: int):
        if m < 0 or m > len(self.values):
            raise IndexError(f"summed-table index {m} out of range")
        self.indices.add(m)
        memo = self._memo
        if m in memo:
            return memo[m]
        # walk down to the nearest known entry, then fill upward
        k = m
        while k > 0 and k not in memo:
            k -= 1
            self.indices.add(k)
        if k == 0 and 0 not in memo:
            memo[0] = 0
        for j in range(k + 1, m + 1):
            memo[j] = memo[j - 1] + self.values[j - 1]
            self.computed += 1
        return memo[m]


def moving_average_memo(v: Sequence, w: int, table: SummedTableMemo | None = None) -> list:
    values, w = _validated(v, w)
    if table is None:
        table = SummedTableMemo(values)
    return [_mean(table(m + w) - table(m), w) for m in range(len(values) - w + 1)]


@dataclass(frozen=True)
class StrategyStats:
    shortcut_hits: int
    direct_computations: int


class RelationalResult(NamedTuple):
    signal: list
    table: list
    averages: list
    stats: StrategyStats
    sums: list


def strategy_selecto(strategies: Sequence[tuple[Goal, Goal]]) -> Goal:
    """Commit to the first strategy whose guard holds.

    Order ``strategies`` from the cheapest shortcut to the general fallback;
    the last guard is normally ``succeed``.
    """
    return conda(strategies)


def _window_goal(v, t, r, branch, u, i, w, select):
    """One output of the adaptive program: ``r[i]`` becomes the window sum."""
    def direct_step(j):
        if j == w - 1:
            return eq(r[i], u[w - 1])
        return fresh(1, lambda x: conj(
            eq(x, u[j]),
            project([x], lambda xv: eq(u[j + 1], xv + v[i + j + 1])),
        ))

    return fresh(2, lambda t1, t2: conj(
        eq(t1, t[i]),
        eq(t2, t[i + w]),
        select([
            (conj(unified_varo(t1), unified_varo(t2)),
             conj(project([t1, t2], lambda a, b: eq(r[i], b - a)),
                  eq(branch[i], SHORTCUT))),
            (succeed,
             conj(eq(u[0], v[i]), builde(w, direct_step), eq(branch[i], DIRECT))),
        ]),
    ))


def relational_program(v: list, w: int, build_table: bool = True,
                       select: Callable = conda) -> Callable:
    """The adaptive moving-average relation as a ``run`` query.

    The answer is ``(v t r branch)`` where ``r`` holds window sums and
    ``branch[i]`` records which ``conda`` clause produced ``r[i]``.
    """
    n = len(v)
    outputs = n - w + 1

    def table_step(t):
        return lambda i: fresh(1, lambda t1: conj(
            eq(t1, t[i]),
            project([t1], lambda tv: eq(t[i + 1], tv + v[i])),
        ))

    def query(q):
        def body(*vars_):
            t = vars_[: n + 1]
            r = vars_[n + 1: n + 1 + outputs]
            branch = vars_[n + 1 + outputs:]
            goals = [eq(t[0], 0)]
            if build_table:
                goals.append(builde(n, table_step(t)))
            goals.append(builde(outputs, lambda i: fresh(
                w + 1, lambda *u: _window_goal(v, t, r, branch, u, i, w, select))))
            goals.append(eq(q, [list(v), list(t), list(r), list(branch)]))
            return conj(*goals)
        return fresh(n + 1 + 2 * outputs, body)
    return query


def moving_average_relational(v: Sequence, w: int, build_table: bool = True,
                              select: Callable = conda) -> RelationalResult:
    """Run the adaptive program and divide the window sums by ``w``.

    With ``build_table=False`` the summed-table loop is skipped, leaving
    ``t[1:]`` fresh, and every output falls through to the direct clause.
    """
    values, w = _validated(v, w)
    try:
        answers = run(None, relational_program(values, w, build_table, select))
    except ProjectionError as exc:
        raise AssertionError(f"adaptive moving average projected an unbound value: {exc}") from exc
    if len(answers) != 1:
        raise AssertionError(f"expected exactly one answer, got {len(answers)}")
    sig, table, sums, branch = answers[0]
    stats = StrategyStats(
        shortcut_hits=sum(1 for b in branch if b is SHORTCUT),
        direct_computations=sum(1 for b in branch if b is DIRECT),
    )
    return RelationalResult(
        signal=sig,
        table=table,
        averages=[_mean(s, w) for s in sums],
        stats=stats,
        sums=sums,
    )
