from hypothesis import given

from pclp.terms import (
    TRUE,
    Compound,
    Constraint,
    Equation,
    Variable,
    conjoin,
    constant,
    rename_apart,
    solve,
    subterm_at,
    term_variables,
)

from .strategies import constraints
from .strategies import terms as term_strategy

X, Y, Z = Variable("X"), Variable("Y"), Variable("Z")
a, b = constant("a"), constant("b")


def f(*args):
    return Compound("f", tuple(args))


def system(*pairs):
    return Constraint(tuple(Equation(lhs, rhs) for lhs, rhs in pairs))


def test_empty_constraint_is_satisfiable():
    solved = solve(TRUE)
    assert solved is not None
    assert len(solved) == 0
    assert str(solved) == "{}"


def test_binding_chain_is_resolved():
    solved = solve(system((X, Y), (Y, a)))
    assert solved.apply(X) == a
    assert solved.apply(Y) == a


def test_clash_and_occurs_check_fail():
    assert solve(system((X, a), (X, b))) is None
    assert solve(system((X, f(X)))) is None
    assert solve(system((f(X), Compound("g", (Y,))))) is None


def test_structural_decomposition():
    solved = solve(system((f(X, b), f(a, Y))))
    assert solved.apply(f(X, Y)) == f(a, b)


def test_solved_form_is_idempotent():
    solved = solve(system((X, f(Y)), (Y, Z), (Z, a)))
    for variable, value in solved:
        assert solved.apply(value) == value
        assert solved.apply(variable) == value


def test_conjoin_extends_a_solved_form():
    solved = solve(system((X, f(Y))))
    assert conjoin(solved, system((Y, a))).apply(X) == f(a)
    assert conjoin(solved, system((X, a))) is None
    assert conjoin(solved, TRUE) is solved


def test_restrict_and_canonical_rename_free_variables():
    solved = solve(system((X, f(Y)), (Z, a)))
    kept = solved.restrict([X])
    assert [var for var, _ in kept] == [X]
    canonical = kept.canonical([X])
    assert str(canonical) == "{X=f(_G0)}"


def test_rename_apart_avoids_given_names():
    equation = Equation(X, f(Y))
    renamed = rename_apart(equation, [X, Y])
    assert not set(renamed.variables()) & {X, Y}


def test_subterm_at_follows_paths():
    term = f(a, f(b))
    assert subterm_at(term, ()) == term
    assert subterm_at(term, (2, 1)) == b
    assert subterm_at(term, (3,)) is None


terms = term_strategy()


@given(terms, terms)
def test_solution_unifies_both_sides(lhs, rhs):
    solved = solve(system((lhs, rhs)))
    if solved is not None:
        assert solved.apply(lhs) == solved.apply(rhs)


@given(terms, terms)
def test_solving_is_symmetric_in_satisfiability(lhs, rhs):
    assert (solve(system((lhs, rhs))) is None) == (solve(system((rhs, lhs))) is None)


def skeleton(term):
    if isinstance(term, Variable):
        return "_"
    return (term.functor, tuple(skeleton(arg) for arg in term.args))


def variable_positions(term, path=()):
    if isinstance(term, Variable):
        yield path, term
        return
    for index, arg in enumerate(term.args, start=1):
        yield from variable_positions(arg, path + (index,))


@given(constraints(), constraints())
def test_failure_persists_under_conjunction(first, second):
    if solve(first) is None:
        assert solve(first.conjoin(second)) is None
        assert solve(second.conjoin(first)) is None


@given(terms, terms)
def test_rename_apart_preserves_shape(lhs, rhs):
    avoid = [X, Y, Z]
    renamed = rename_apart(Equation(lhs, rhs), avoid)
    assert not set(renamed.variables()) & set(avoid)
    pairing = {}
    for before, after in ((lhs, renamed.lhs), (rhs, renamed.rhs)):
        assert skeleton(after) == skeleton(before)
        old = dict(variable_positions(before))
        new = dict(variable_positions(after))
        assert old.keys() == new.keys()
        for path, variable in old.items():
            assert pairing.setdefault(variable, new[path]) == new[path]
    assert len(set(pairing.values())) == len(pairing)


@given(constraints())
def test_renamed_solved_form_stays_solved(constraint):
    solved = solve(constraint)
    if solved is None:
        return
    renamed = rename_apart(solved, [X, Y, Z])
    assert len(renamed) == len(solved)
    bound = {variable for variable, _ in renamed}
    for variable, value in renamed:
        assert not set(term_variables(value)) & bound
        assert renamed.apply(value) == value
        assert renamed.apply(variable) == value
    resolved = solve(renamed.as_constraint())
    assert resolved is not None
    for variable, value in renamed:
        assert resolved.apply(variable) == resolved.apply(value)
