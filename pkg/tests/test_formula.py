import pytest
from hypothesis import given, strategies as st

from ltlgen import (
    And,
    Atom,
    AtomicProposition,
    FALSE,
    Labeling,
    Next,
    Not,
    TRUE,
    Until,
    Verdict,
    atom_set,
    count_atoms,
    parse,
    render,
    simplify,
)
from helpers import P, Q, has_redex


def test_double_negation_false_conjunct_collapses_to_true():
    # !(!true & psi) -> true
    psi = Until(Atom(P), Atom(Q))
    assert simplify(Not(And(FALSE, psi))) == TRUE


def test_duplicate_conjunct_is_dropped():
    assert simplify(And(Atom(P), Atom(P))) == Atom(P)


def test_true_conjuncts_are_dropped_on_both_sides():
    assert simplify(And(TRUE, Atom(P))) == Atom(P)
    assert simplify(And(Atom(P), TRUE)) == Atom(P)


def test_false_conjunct_dominates():
    assert simplify(And(Atom(P), FALSE)) == FALSE
    assert simplify(And(FALSE, Atom(P))) == FALSE


def test_simplify_reaches_inside_next_and_until():
    assert simplify(Next(Not(Not(Atom(P))))) == Next(Atom(P))
    assert simplify(Until(And(TRUE, Atom(P)), Atom(Q))) == Until(Atom(P), Atom(Q))


def test_restricted_unrolling_collapses_to_next():
    # The one-step residue of the worked example's first in-app position:
    # !(!(!true & X(q U p)) & !(true & X(p U (q & X(q U p))))) -> X(p U (q & X(q U p)))
    phi = parse("!(!(!true & X ([q=1] U [p=1])) & !(true & X ([p=1] U ([q=1] & X ([q=1] U [p=1])))))")
    expected = parse("X ([p=1] U ([q=1] & X ([q=1] U [p=1])))")
    assert simplify(phi) == expected


def test_count_atoms_uses_multiplicity():
    phi = parse("X ([p=1] U ([q=1] & X ([q=1] U [p=1])))")
    assert count_atoms(phi) == 4
    assert count_atoms(TRUE) == 0
    assert count_atoms(parse("[q=1] U [p=1]")) == 2


def test_atom_set_is_distinct():
    phi = parse("X ([p=1] U ([q=1] & X ([q=1] U [p=1])))")
    assert atom_set(phi) == frozenset((P, Q))


def test_structural_equality_after_simplify():
    left = simplify(parse("!![p=1] & true"))
    assert left == Atom(P)
    assert hash(left) == hash(Atom(P))


@pytest.mark.parametrize(
    "key,op,value",
    [("", "=", "v"), ("k", "?", "v"), ("k", "=", "")],
)
def test_atomic_proposition_validation(key, op, value):
    with pytest.raises(ValueError):
        AtomicProposition(key, op, value)


def test_matchers():
    exact = AtomicProposition("activity", "=", "Main")
    sub = AtomicProposition("activity", "~", "Main")
    assert exact.matches("Main") and not exact.matches("MainActivity")
    assert sub.matches("MainActivity") and not sub.matches("mainactivity")


def test_scope_follows_key_prefix():
    assert AtomicProposition("actionType", "=", "back").is_action
    assert AtomicProposition("actionDetail", "~", "About").is_action
    assert not AtomicProposition("activity", "~", "Main").is_action
    assert not AtomicProposition("checked", "=", "true").is_action


def test_labeling_split_and_union():
    state = AtomicProposition("activity", "~", "Main")
    action = AtomicProposition("actionType", "=", "back")
    combined = Labeling.of(state) | Labeling.of(action)
    assert combined.state_atoms == frozenset((state,))
    assert combined.action_atoms == frozenset((action,))
    assert state in combined and action in combined
    assert len(combined) == 2


def test_verdict_normalization():
    assert Verdict(TRUE).is_true
    assert Verdict(FALSE).is_false
    undetermined = Verdict(Atom(P))
    assert undetermined.is_undetermined
    assert not undetermined.is_true and not undetermined.is_false


def test_render_canonical_forms():
    assert render(TRUE) == "true"
    assert render(Not(And(Atom(P), Atom(Q)))) == "!([p=1] & [q=1])"
    assert render(Next(Until(Atom(P), Atom(Q)))) == "X ([p=1] U [q=1])"
    assert render(And(Atom(P), And(Atom(P), Atom(Q)))) == "[p=1] & ([p=1] & [q=1])"
    assert render(Until(Until(Atom(P), Atom(Q)), Atom(P))) == "([p=1] U [q=1]) U [p=1]"


leaves = st.sampled_from([TRUE, Atom(P), Atom(Q)])
formulas = st.recursive(
    leaves,
    lambda children: st.one_of(
        st.builds(Not, children),
        st.builds(Next, children),
        st.builds(And, children, children),
        st.builds(Until, children, children),
    ),
    max_leaves=16,
)


@given(formulas)
def test_simplify_idempotent_and_normal(phi):
    once = simplify(phi)
    assert simplify(once) == once
    assert not has_redex(once)
