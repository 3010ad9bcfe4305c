import random
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from relimg.kanren import (
    EMPTY, EMPTY_SUBSTITUTION, NIL, Cons, Empty, Immature, Pair,
    ProjectionError, Singleton, StepLimitExceeded, Substitution, Symbol, Var,
    conda, conj, deep_walk, disj, eq, fail, fresh, from_python, lst, project,
    reify, run, run_all, succeed, take, unified_varo, unify, walk,
)

import oracles

x, y, z = Var(100), Var(101), Var(102)


def subst(**pairs):
    names = {"x": x, "y": y, "z": z}
    s = EMPTY_SUBSTITUTION
    for k, v in pairs.items():
        s = s.extend(names[k], v)
    return s


def nevero():
    return lambda s: Immature(lambda: nevero()(s))


# -- walk / unify -----------------------------------------------------------

def test_walk_unbound():
    assert walk(x, EMPTY_SUBSTITUTION) is x


def test_walk_triangular_chain():
    assert walk(x, subst(x=y, y=5)) == 5


def test_walk_non_variable():
    assert walk(5, subst(x=1)) == 5


def test_unify_binds_variable():
    s = unify(x, 5, EMPTY_SUBSTITUTION)
    assert s.bindings == {x: 5}


def test_unify_componentwise():
    s = unify(Pair(1, x), Pair(1, 2), EMPTY_SUBSTITUTION)
    assert s.bindings == {x: 2}


def test_unify_atom_mismatch():
    assert unify(3, 4, EMPTY_SUBSTITUTION) is None


@pytest.mark.parametrize("a, b, ok", [
    (True, 1, False),
    (False, 0, False),
    (Fraction(4, 2), 2, True),
    (Symbol("a"), Symbol("a"), True),
    (Symbol("a"), Symbol("b"), False),
    (NIL, NIL, True),
    (NIL, Pair(1, NIL), False),
    (Pair(1, NIL), 1, False),
])
def test_unify_atoms(a, b, ok):
    assert (unify(a, b, EMPTY_SUBSTITUTION) is not None) is ok


def test_unify_long_lists_do_not_recurse():
    n = 5000
    a = from_python(list(range(n)))
    vs = [Var(i) for i in range(n)]
    s = unify(a, from_python(vs), EMPTY_SUBSTITUTION)
    assert walk(vs[-1], s) == n - 1
    assert deep_walk(from_python(vs), s) == a


def test_extend_refuses_rebinding():
    with pytest.raises(ValueError):
        subst(x=1).extend(x, 2)


def test_symbols_are_interned():
    assert Symbol("abc") is Symbol("abc")


def test_from_python_rejects_floats():
    with pytest.raises(TypeError):
        eq(x, 1.5)


# -- goals ------------------------------------------------------------------

def test_eq():
    assert run_all(lambda q: eq(q, 5)) == [5]
    assert run_all(lambda q: conj(eq(q, 1), eq(q, 2))) == []
    assert run_all(lambda q: eq(q, q)) == [Symbol("_.0")]


def test_succeed_fail():
    assert run_all(lambda q: succeed) == [Symbol("_.0")]
    assert run_all(lambda q: fail) == []
    assert run_all(lambda q: conj(succeed, eq(q, 7))) == [7]


def test_disj_and_conj():
    assert run_all(lambda q: disj(eq(q, 1), eq(q, 2))) == [1, 2]
    assert run_all(lambda q: fresh(1, lambda a: conj(eq(a, 1), eq(q, a)))) == [1]


def test_disj_is_fair_against_divergence():
    assert run(1, lambda q: disj(nevero(), eq(q, 3)), max_steps=10_000) == [3]
    assert run(1, lambda q: disj(eq(q, 3), nevero()), max_steps=10_000) == [3]


def test_step_limit_is_enforced():
    with pytest.raises(StepLimitExceeded):
        run(1, lambda q: nevero(), max_steps=50)


def test_fresh():
    assert run_all(lambda q: fresh(1, lambda a: conj(eq(a, 9), eq(q, a)))) == [9]
    assert run_all(lambda q: fresh(0, lambda: eq(q, 1))) == [1]
    assert run_all(lambda q: fresh(1, lambda a: fresh(1, lambda b: eq(q, [a, b])))) == [
        [Symbol("_.0"), Symbol("_.1")]
    ]


def test_fresh_ids_increase_and_are_distinct():
    seen = []

    def body(*vs):
        seen.extend(vs)
        return fresh(2, lambda *ws: (seen.extend(ws), succeed)[1])
    run_all(lambda q: fresh(3, body))
    ids = [v.id for v in seen]
    assert ids == sorted(ids) and len(set(ids)) == 5 and min(ids) > 0


def test_conda_first_head_fails():
    assert run_all(lambda q: conda([(fail, eq(q, 1)), (succeed, eq(q, 2))])) == [2]


def test_conda_commits():
    assert run_all(lambda q: conda([(succeed, eq(q, 1)), (succeed, eq(q, 2))])) == [1]


@pytest.mark.parametrize("value, expected", [(5, "bound"), (6, "free")])
def test_conda_guard_depends_on_substitution(value, expected):
    def query(q):
        return fresh(1, lambda a: conj(
            eq(a, value),
            conda([(eq(a, 5), eq(q, "bound")), (succeed, eq(q, "free"))]),
        ))
    assert run_all(query) == [Symbol(expected)]


def test_conda_keeps_all_head_answers():
    def query(q):
        return conda([(disj(eq(q, 1), eq(q, 2)), succeed), (succeed, eq(q, 3))])
    assert run_all(query) == [1, 2]


def test_conda_requires_clauses():
    with pytest.raises(ValueError):
        conda([])


def test_project_arithmetic():
    def query(q):
        return fresh(1, lambda a: conj(eq(a, 3), project([a], lambda v: eq(q, v + 1))))
    assert run_all(query) == [4]


def test_project_unbound_raises_naming_variable():
    def query(q):
        return fresh(1, lambda a: project([a], lambda v: eq(q, v + 1)))
    with pytest.raises(ProjectionError, match="var"):
        run_all(query)


def test_project_listing_difference():
    def query(q):
        return fresh(2, lambda t1, t2: conj(
            eq(t1, 3), eq(t2, 10),
            project([t1, t2], lambda a, b: eq(q, b - a)),
        ))
    assert run_all(query) == [7]


def test_project_deep_walks_lists():
    def query(q):
        return fresh(2, lambda a, b: conj(
            eq(a, [1, b]), eq(b, 2),
            project([a], lambda v: eq(q, sum(v))),
        ))
    assert run_all(query) == [3]


def test_unified_varo():
    assert run_all(lambda q: fresh(1, lambda a: conj(eq(a, 5), unified_varo(a)))) != []
    assert run_all(lambda q: fresh(1, lambda a: unified_varo(a))) == []
    assert run_all(lambda q: fresh(2, lambda a, b: conj(eq(a, b), unified_varo(a)))) == []


def test_unified_varo_does_not_extend():
    s = subst(x=5)
    (out,) = list(take(unified_varo(x)(s)))
    assert out is s


def test_run():
    assert run_all(lambda q: eq(q, [1, 2])) == [[1, 2]]
    assert run(2, lambda q: disj(eq(q, 1), disj(eq(q, 2), eq(q, 3)))) == [1, 2]
    with pytest.raises(ValueError):
        run(0, lambda q: succeed)


def test_reify_improper_and_shared_vars():
    s = subst(x=Pair(y, Pair(z, y)))
    assert repr(reify(x, s)) == "(_.0 _.1 . _.0)"


def test_rationals_stay_exact():
    assert run_all(lambda q: eq(q, Fraction(3, 2))) == [Fraction(3, 2)]


def test_stream_constructors():
    s = EMPTY_SUBSTITUTION
    assert list(take(EMPTY)) == []
    assert list(take(Singleton(s))) == [s]
    assert list(take(Immature(lambda: Singleton(s)))) == [s]
    assert list(take(Cons(s, lambda: Singleton(s)))) == [s, s]
    assert isinstance(fail(s), Empty)


# -- properties -------------------------------------------------------------

POOL = [Var(i) for i in range(5)]

atoms = st.one_of(
    st.integers(-3, 3),
    st.fractions(min_value=-2, max_value=2, max_denominator=3),
    st.sampled_from([Symbol("a"), Symbol("b")]),
    st.booleans(),
    st.just(NIL),
)
terms = st.recursive(
    st.one_of(atoms, st.sampled_from(POOL)),
    lambda children: st.builds(Pair, children, children),
    max_leaves=8,
)


def is_cyclic(s):
    def reaches(t, target, seen):
        while type(t) is Var:
            if t == target:
                return True
            if t not in s.bindings or t in seen:
                return False
            seen.add(t)
            t = s.bindings[t]
        if type(t) is Pair:
            return reaches(t.head, target, seen) or reaches(t.tail, target, seen)
        return False
    return any(reaches(t, v, set()) for v, t in s.bindings.items())


def variables(t):
    if type(t) is Var:
        yield t
    elif type(t) is Pair:
        yield from variables(t.head)
        yield from variables(t.tail)


def same_up_to_renaming(a, b, fwd=None, back=None):
    """Structural equality allowing a consistent bijection between variables."""
    fwd = {} if fwd is None else fwd
    back = {} if back is None else back
    if type(a) is Var and type(b) is Var:
        if fwd.setdefault(a, b) != b or back.setdefault(b, a) != a:
            return False
        return True
    if type(a) is Pair and type(b) is Pair:
        return (same_up_to_renaming(a.head, b.head, fwd, back)
                and same_up_to_renaming(a.tail, b.tail, fwd, back))
    if type(a) in (Var, Pair) or type(b) in (Var, Pair):
        return False
    return a == b and (type(a) is bool) == (type(b) is bool)


def seed_substitution(pairs):
    s = EMPTY_SUBSTITUTION
    for a, b in pairs:
        try:
            if reference_unify(a, b, s.bindings) is None:
                continue
        except Cyclic:
            continue
        s = unify(a, b, s)
    return s


class Cyclic(Exception):
    pass


def reference_unify(a, b, bindings):
    """Plain dict unifier with an occurs-check; raises Cyclic instead of binding."""
    def rwalk(t):
        while type(t) is Var and t in bindings:
            t = bindings[t]
        return t

    def occurs(v, t):
        t = rwalk(t)
        if type(t) is Var:
            return t == v
        return type(t) is Pair and (occurs(v, t.head) or occurs(v, t.tail))

    stack = [(a, b)]
    bindings = dict(bindings)
    while stack:
        u, w = stack.pop()
        u, w = rwalk(u), rwalk(w)
        if type(u) is Var and type(w) is Var and u == w:
            continue
        if type(u) is not Var and type(w) is Var:
            u, w = w, u
        if type(u) is Var:
            if occurs(u, w):
                raise Cyclic
            bindings[u] = w
        elif type(u) is Pair and type(w) is Pair:
            stack.append((u.tail, w.tail))
            stack.append((u.head, w.head))
        elif type(u) is Pair or type(w) is Pair:
            return None
        elif not (u == w and (type(u) is bool) == (type(w) is bool)):
            return None
    return bindings


def check_unify_properties(a, b, start_pairs):
    """Soundness, symmetry of success and persistence for one case.

    Returns False when the case is unusable (it would bind a variable
    cyclically, which the engine leaves undefined).
    """
    s = seed_substitution(start_pairs)
    try:
        expected_ok = reference_unify(a, b, s.bindings) is not None
    except Cyclic:
        return False
    before = {v: deep_walk(v, s) for v in POOL}
    s_ab = unify(a, b, s)
    assert (s_ab is not None) == expected_ok
    s_ba = unify(b, a, s)
    assert (s_ab is None) == (s_ba is None)
    assert {v: deep_walk(v, s) for v in POOL} == before
    if s_ab is None:
        return True
    assert not is_cyclic(s_ab) and not is_cyclic(s_ba)
    assert deep_walk(a, s_ab) == deep_walk(b, s_ab)
    assert deep_walk(a, s_ba) == deep_walk(b, s_ba)
    vs = sorted(set(variables(a)) | set(variables(b)), key=lambda v: v.id)
    assert same_up_to_renaming(lst(*(deep_walk(v, s_ab) for v in vs)),
                               lst(*(deep_walk(v, s_ba) for v in vs)))
    return True


@settings(max_examples=300, deadline=None)
@given(terms, terms, st.lists(st.tuples(terms, terms), max_size=3))
def test_unification_properties(a, b, start_pairs):
    check_unify_properties(a, b, start_pairs)


def collect_answers(tree):
    return run_all(lambda q: oracles.compile_tree(tree, {"q": q}))


def canonical(answers):
    return Counter(repr(from_python(a)) for a in answers)


def test_run_all_matches_brute_force_enumeration():
    rng = random.Random(7)
    checked = 0
    while checked < 40:
        tree = oracles.random_goal_tree(rng, rng.randint(1, 5))
        expected = oracles.brute_force_answers(tree)
        if expected is None:
            continue
        assert canonical(collect_answers(tree)) == canonical(expected), tree
        checked += 1


goal_atoms = st.sampled_from(["succeed", "fail", "q1", "q2", "q12"])


def make_goal(name, q):
    return {
        "succeed": succeed,
        "fail": fail,
        "q1": eq(q, 1),
        "q2": eq(q, 2),
        "q12": disj(eq(q, 1), eq(q, 2)),
    }[name]


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(goal_atoms, goal_atoms), min_size=1, max_size=4),
       st.sampled_from([None, 1, 2]))
def test_conda_equals_first_applicable_clause(clauses, preset):
    def prefix(q):
        return succeed if preset is None else eq(q, preset)

    got = run_all(lambda q: conj(prefix(q), conda(
        [(make_goal(h, q), make_goal(b, q)) for h, b in clauses])))

    expected = []
    for h, b in clauses:
        if run_all(lambda q: conj(prefix(q), make_goal(h, q))):
            expected = run_all(lambda q: conj(prefix(q), make_goal(h, q), make_goal(b, q)))
            break
    assert got == expected


@settings(max_examples=200, deadline=None)
@given(terms, st.lists(st.tuples(terms, terms), max_size=3))
def test_unified_varo_matches_walk(t, start_pairs):
    s = seed_substitution(start_pairs)
    succeeded = bool(list(take(unified_varo(t)(s))))
    assert succeeded == (type(walk(t, s)) is not Var)
