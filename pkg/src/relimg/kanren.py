"""A small relational engine in the miniKanren family.

Terms are logic variables, atoms (int, Fraction, bool, Symbol), ``NIL`` and
``Pair`` cells. Substitutions are triangular and persistent: a binding may
point at another bound variable, and extending a substitution never mutates
it. Goals map a substitution to an answer stream built from four node kinds
(``Empty``, ``Immature``, ``Singleton``, ``Cons``); ``Immature`` nodes are the
unit of deferred work and are what makes disjunction fair.

There is no occurs-check. Variables are only ever bound while unbound, so the
engine itself never creates a cycle; unifying a variable with a term that
contains it is undefined behaviour.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

__all__ = [
    "Var", "Symbol", "Pair", "NIL", "Substitution", "EMPTY_SUBSTITUTION",
    "Empty", "Immature", "Singleton", "Cons", "EMPTY",
    "ProjectionError", "StepLimitExceeded",
    "walk", "deep_walk", "unify", "reify", "from_python", "to_python", "lst",
    "eq", "succeed", "fail", "conj", "disj", "fresh", "conda", "project",
    "unified_varo", "mplus", "bind", "take", "run", "run_all",
]


class ProjectionError(TypeError):
    """Host arithmetic was attempted on an unbound logic variable."""

    def __init__(self, var: "Var", op: str):
        super().__init__(f"cannot apply {op!r} to unbound logic variable {var!r}")
        self.var = var


class StepLimitExceeded(RuntimeError):
    pass


def _refuse(op):
    def method(self, *args):
        raise ProjectionError(self, op)
    method.__name__ = op
    return method


class Var:
    """A logic variable. Equal iff ids are equal."""

    __slots__ = ("id",)

    def __init__(self, id: int):
        self.id = id

    def __eq__(self, other):
        return self is other or (type(other) is Var and other.id == self.id)

    def __hash__(self):
        return self.id

    def __repr__(self):
        return f"<var {self.id}>"

    # A projected value that is still a Var means the caller forgot a guard.
    __add__ = __radd__ = _refuse("+")
    __sub__ = __rsub__ = _refuse("-")
    __mul__ = __rmul__ = _refuse("*")
    __truediv__ = __rtruediv__ = _refuse("/")
    __floordiv__ = __rfloordiv__ = _refuse("//")
    __mod__ = __rmod__ = _refuse("%")
    __neg__ = _refuse("neg")
    __lt__ = _refuse("<")
    __le__ = _refuse("<=")
    __gt__ = _refuse(">")
    __ge__ = _refuse(">=")
    __int__ = _refuse("int")
    __index__ = _refuse("index")


class Symbol:
    """Interned symbolic atom: ``Symbol("a") is Symbol("a")``."""

    __slots__ = ("name",)
    _table: dict[str, "Symbol"] = {}

    def __new__(cls, name: str):
        sym = cls._table.get(name)
        if sym is None:
            sym = super().__new__(cls)
            sym.name = name
            cls._table[name] = sym
        return sym

    def __repr__(self):
        return self.name

    def __reduce__(self):
        return (Symbol, (self.name,))


class _Nil:
    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "()"

    def __reduce__(self):
        return (_Nil, ())


NIL = _Nil()


class Pair:
    __slots__ = ("head", "tail")

    def __init__(self, head, tail):
        self.head = head
        self.tail = tail

    def __eq__(self, other):
        a, b = self, other
        while type(a) is Pair and type(b) is Pair:
            if a is b:
                return True
            if not _term_equal(a.head, b.head):
                return False
            a, b = a.tail, b.tail
        return _term_equal(a, b)

    def __hash__(self):
        items = []
        t = self
        while type(t) is Pair:
            items.append(t.head)
            t = t.tail
        return hash((Pair, tuple(items), t))

    def __iter__(self):
        t = self
        while type(t) is Pair:
            yield t.head
            t = t.tail

    def __repr__(self):
        parts = []
        t = self
        while type(t) is Pair:
            parts.append(_show(t.head))
            t = t.tail
        if t is not NIL:
            parts.append(". " + _show(t))
        return "(" + " ".join(parts) + ")"


def _show(t) -> str:
    if t is True:
        return "#t"
    if t is False:
        return "#f"
    return repr(t) if not isinstance(t, Fraction) else str(t)


def _atom_equal(a, b) -> bool:
    return a == b and (type(a) is bool) == (type(b) is bool)


def _term_equal(a, b) -> bool:
    if type(a) is Pair or type(b) is Pair:
        return type(a) is type(b) and a == b
    if type(a) is Var or type(b) is Var:
        return a == b
    return _atom_equal(a, b)


def lst(*items) -> Pair | _Nil:
    """Build a proper list term from ``items`` (not converted)."""
    t = NIL
    for item in reversed(items):
        t = Pair(item, t)
    return t


def from_python(value):
    """Convert Python lists/tuples to list terms and ``str`` to ``Symbol``."""
    kind = type(value)
    if kind is Var or kind is int:
        return value
    if isinstance(value, (list, tuple)):
        t = NIL
        for item in reversed(value):
            t = Pair(from_python(item), t)
        return t
    if isinstance(value, str):
        return Symbol(value)
    if isinstance(value, float):
        raise TypeError("floating point values are not terms; use Fraction")
    return value


def to_python(term):
    """Inverse of :func:`from_python` for proper lists; improper lists stay Pairs."""
    if term is NIL:
        return []
    if type(term) is Pair:
        items = []
        t = term
        while type(t) is Pair:
            items.append(to_python(t.head))
            t = t.tail
        if t is NIL:
            return items
        return _improper(items, to_python(t))
    return term


def _improper(items, last):
    t = last
    for item in reversed(items):
        t = Pair(item, t)
    return t


class Substitution:
    """Persistent triangular binding map plus the fresh-variable counter."""

    __slots__ = ("bindings", "counter")

    def __init__(self, bindings: dict | None = None, counter: int = 0):
        self.bindings = {} if bindings is None else bindings
        self.counter = counter

    def extend(self, var: Var, term) -> "Substitution":
        if var in self.bindings:
            raise ValueError(f"{var!r} is already bound")
        bindings = self.bindings.copy()
        bindings[var] = term
        return Substitution(bindings, self.counter)

    def allocate(self, k: int) -> tuple[tuple[Var, ...], "Substitution"]:
        start = self.counter
        return (
            tuple(Var(i) for i in range(start, start + k)),
            Substitution(self.bindings, start + k),
        )

    def __len__(self):
        return len(self.bindings)

    def __contains__(self, var):
        return var in self.bindings

    def __repr__(self):
        inner = ", ".join(f"{k!r}: {v!r}" for k, v in self.bindings.items())
        return f"Substitution({{{inner}}}, counter={self.counter})"


EMPTY_SUBSTITUTION = Substitution()


def walk(t, s: Substitution):
    bindings = s.bindings
    while type(t) is Var:
        bound = bindings.get(t, t)
        if bound is t:
            return t
        t = bound
    return t


def deep_walk(t, s: Substitution):
    t = walk(t, s)
    if type(t) is not Pair:
        return t
    heads = []
    while type(t) is Pair:
        heads.append(deep_walk(t.head, s))
        t = walk(t.tail, s)
    tail = deep_walk(t, s)
    for h in reversed(heads):
        tail = Pair(h, tail)
    return tail


def unify(t1, t2, s: Substitution) -> Substitution | None:
    """Extend ``s`` so that ``t1`` and ``t2`` become equal; ``None`` on failure."""
    while True:
        u = walk(t1, s)
        v = walk(t2, s)
        if u is v:
            return s
        if type(u) is Var:
            if type(v) is Var and u.id == v.id:
                return s
            return s.extend(u, v)
        if type(v) is Var:
            return s.extend(v, u)
        if type(u) is Pair:
            if type(v) is not Pair:
                return None
            s = unify(u.head, v.head, s)
            if s is None:
                return None
            t1, t2 = u.tail, v.tail
            continue
        if type(v) is Pair:
            return None
        return s if _atom_equal(u, v) else None


def reify(t, s: Substitution):
    """Deep-walk ``t`` and name its remaining variables ``_.0``, ``_.1``, ..."""
    t = deep_walk(t, s)
    names: dict[Var, Symbol] = {}

    def collect(term):
        while True:
            if type(term) is Var:
                if term not in names:
                    names[term] = Symbol(f"_.{len(names)}")
                return
            if type(term) is not Pair:
                return
            collect(term.head)
            term = term.tail

    def rename(term):
        if type(term) is Var:
            return names[term]
        if type(term) is Pair:
            heads = []
            while type(term) is Pair:
                heads.append(rename(term.head))
                term = term.tail
            return _improper(heads, rename(term))
        return term

    collect(t)
    return rename(t) if names else t


# -- answer streams ---------------------------------------------------------

class Empty:
    __slots__ = ()

    def __repr__(self):
        return "Empty"


EMPTY = Empty()


class Immature:
    __slots__ = ("thunk",)

    def __init__(self, thunk: Callable[[], object]):
        self.thunk = thunk


class Singleton:
    __slots__ = ("subst",)

    def __init__(self, subst: Substitution):
        self.subst = subst


class Cons:
    __slots__ = ("head", "rest")

    def __init__(self, head: Substitution, rest: Callable[[], object]):
        self.head = head
        self.rest = rest


Goal = Callable[[Substitution], object]


def mplus(stream, later: Callable[[], object]):
    """Merge ``stream`` with the thunked stream ``later``, alternating on delay."""
    kind = type(stream)
    if kind is Empty:
        return later()
    if kind is Immature:
        thunk = stream.thunk
        return Immature(lambda: mplus(later(), thunk))
    if kind is Singleton:
        return Cons(stream.subst, later)
    rest = stream.rest
    return Cons(stream.head, lambda: mplus(rest(), later))


def bind(stream, goal: Goal):
    kind = type(stream)
    if kind is Empty:
        return EMPTY
    if kind is Immature:
        thunk = stream.thunk
        return Immature(lambda: bind(thunk(), goal))
    if kind is Singleton:
        return goal(stream.subst)
    rest = stream.rest
    return mplus(goal(stream.head), lambda: bind(rest(), goal))


def take(stream, n: int | None = None, max_steps: int | None = None) -> Iterator[Substitution]:
    """Yield up to ``n`` substitutions, forcing ``Immature`` nodes as needed.

    ``max_steps`` bounds the number of forced nodes; exceeding it raises
    :class:`StepLimitExceeded`.
    """
    produced = 0
    steps = 0
    while n is None or produced < n:
        kind = type(stream)
        if kind is Empty:
            return
        if kind is Immature:
            steps += 1
            if max_steps is not None and steps > max_steps:
                raise StepLimitExceeded(f"no answer within {max_steps} forced steps")
            stream = stream.thunk()
        elif kind is Singleton:
            yield stream.subst
            return
        else:
            produced += 1
            yield stream.head
            stream = stream.rest()


def _first(stream):
    """Force ``stream`` to its first mature node (or Empty)."""
    while type(stream) is Immature:
        stream = stream.thunk()
    return stream


# -- goals ------------------------------------------------------------------

def succeed(s: Substitution):
    return Singleton(s)


def fail(s: Substitution):
    return EMPTY


def eq(t1, t2) -> Goal:
    u, v = from_python(t1), from_python(t2)

    def goal(s):
        s = unify(u, v, s)
        return EMPTY if s is None else Singleton(s)
    return goal


def _conj2(g1: Goal, g2: Goal) -> Goal:
    return lambda s: Immature(lambda: bind(g1(s), g2))


def _disj2(g1: Goal, g2: Goal) -> Goal:
    return lambda s: Immature(lambda: mplus(g1(s), lambda: g2(s)))


def conj(*goals: Goal) -> Goal:
    if not goals:
        return succeed
    g = goals[-1]
    for prev in reversed(goals[:-1]):
        g = _conj2(prev, g)
    return g


def disj(*goals: Goal) -> Goal:
    if not goals:
        return fail
    g = goals[-1]
    for prev in reversed(goals[:-1]):
        g = _disj2(prev, g)
    return g


def fresh(k: int, body: Callable[..., Goal]) -> Goal:
    """Allocate ``k`` new variables from the substitution and apply ``body``."""
    if k < 0:
        raise ValueError("fresh needs a non-negative count")

    def goal(s):
        vars_, s2 = s.allocate(k)
        return Immature(lambda: body(*vars_)(s2))
    return goal


def conda(clauses: Sequence[tuple[Goal, Goal]]) -> Goal:
    """Committed choice: the first clause whose head has an answer wins.

    The head stream is forced until its first answer, so a diverging head
    makes the whole ``conda`` diverge.
    """
    clauses = list(clauses)
    if not clauses:
        raise ValueError("conda needs at least one clause")

    def goal(s):
        def choose():
            for head, body in clauses:
                stream = _first(head(s))
                if type(stream) is not Empty:
                    return bind(stream, body)
            return EMPTY
        return Immature(choose)
    return goal


def project(vars_: Iterable, body: Callable[..., Goal]) -> Goal:
    """Pass the fully walked values of ``vars_`` to host code in ``body``."""
    vars_ = tuple(vars_)

    def goal(s):
        return body(*(deep_walk(v, s) for v in vars_))(s)
    return goal


def unified_varo(v) -> Goal:
    """Succeed iff ``v`` currently resolves to something other than a variable."""
    def goal(s):
        return EMPTY if type(walk(v, s)) is Var else Singleton(s)
    return goal


def run(n: int | None, query: Callable[[Var], Goal], max_steps: int | None = None) -> list:
    """Run ``query`` for at most ``n`` answers (``None`` for all) and reify them."""
    if n is not None and n < 1:
        raise ValueError("run needs n >= 1 or None")
    (q,), s = EMPTY_SUBSTITUTION.allocate(1)
    stream = query(q)(s)
    return [to_python(reify(q, a)) for a in take(stream, n, max_steps)]


def run_all(query: Callable[[Var], Goal], max_steps: int | None = None) -> list:
    return run(None, query, max_steps)
