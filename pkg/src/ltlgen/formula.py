"""Immutable temporal-logic syntax trees over bracketed GUI predicates.

The only primitive connectives are truth, predicates, negation, conjunction,
next, and until.  Disjunction, implication, finally, globally, and the
``false`` literal are parser sugar and never appear in a tree.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, order=True)
class AtomicProposition:
    """One bracketed predicate such as ``[activity~Main]`` or ``[actionType=back]``.

    ``=`` demands exact equality of the observed value; ``~`` demands
    case-sensitive substring containment.  Predicates whose key starts with
    ``action`` describe the action being executed; all others describe the
    resulting state.
    """

    key: str
    op: str
    value: str

    def __post_init__(self) -> None:
        if not self.key:
            raise ValueError("predicate key must not be empty")
        if self.op not in ("=", "~"):
            raise ValueError(f"predicate operator must be '=' or '~', got {self.op!r}")
        if not self.value:
            raise ValueError("predicate value must not be empty")

    @property
    def is_action(self) -> bool:
        return self.key.startswith("action")

    def matches(self, observed: str) -> bool:
        if self.op == "=":
            return observed == self.value
        return self.value in observed

    def __str__(self) -> str:
        return f"[{self.key}{self.op}{self.value}]"


class Formula:
    """Base class for formula nodes; instances are immutable and compare structurally."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Truth(Formula):
    pass


@dataclass(frozen=True, slots=True)
class Atom(Formula):
    ap: AtomicProposition


@dataclass(frozen=True, slots=True)
class Not(Formula):
    operand: Formula


@dataclass(frozen=True, slots=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Next(Formula):
    operand: Formula


@dataclass(frozen=True, slots=True)
class Until(Formula):
    left: Formula
    right: Formula


TRUE = Truth()
FALSE = Not(TRUE)


def count_atoms(phi: Formula) -> int:
    """Number of predicate occurrences, with multiplicity; truth counts zero."""
    if isinstance(phi, Atom):
        return 1
    if isinstance(phi, (Not, Next)):
        return count_atoms(phi.operand)
    if isinstance(phi, (And, Until)):
        return count_atoms(phi.left) + count_atoms(phi.right)
    return 0


def atom_set(phi: Formula) -> frozenset[AtomicProposition]:
    """The distinct predicates appearing anywhere in the formula."""
    if isinstance(phi, Atom):
        return frozenset((phi.ap,))
    if isinstance(phi, (Not, Next)):
        return atom_set(phi.operand)
    if isinstance(phi, (And, Until)):
        return atom_set(phi.left) | atom_set(phi.right)
    return frozenset()


def simplify(phi: Formula) -> Formula:
    """Bottom-up normal form: no double negation, no true/false conjunct,
    no duplicated conjunct anywhere in the tree.  Idempotent."""
    if isinstance(phi, Not):
        operand = simplify(phi.operand)
        if isinstance(operand, Not):
            return operand.operand
        return Not(operand)
    if isinstance(phi, And):
        left = simplify(phi.left)
        right = simplify(phi.right)
        if left == FALSE or right == FALSE:
            return FALSE
        if left == TRUE:
            return right
        if right == TRUE:
            return left
        if left == right:
            return left
        return And(left, right)
    if isinstance(phi, Next):
        return Next(simplify(phi.operand))
    if isinstance(phi, Until):
        return Until(simplify(phi.left), simplify(phi.right))
    return phi


@dataclass(frozen=True)
class Labeling:
    """The set of predicates observed true at one trace position."""

    atoms: frozenset[AtomicProposition] = frozenset()

    @classmethod
    def of(cls, *atoms: AtomicProposition) -> Labeling:
        return cls(frozenset(atoms))

    @property
    def state_atoms(self) -> frozenset[AtomicProposition]:
        return frozenset(a for a in self.atoms if not a.is_action)

    @property
    def action_atoms(self) -> frozenset[AtomicProposition]:
        return frozenset(a for a in self.atoms if a.is_action)

    def __contains__(self, ap: object) -> bool:
        return ap in self.atoms

    def __iter__(self):
        return iter(sorted(self.atoms))

    def __len__(self) -> int:
        return len(self.atoms)

    def __or__(self, other: Labeling) -> Labeling:
        return Labeling(self.atoms | other.atoms)

    def __str__(self) -> str:
        return "{" + ", ".join(str(a) for a in sorted(self.atoms)) + "}"


@dataclass(frozen=True)
class Verdict:
    """Three-valued outcome of one projection step.

    Wraps the simplified remaining obligation; ``true`` and ``!true``
    collapse to the determined verdicts, anything else is undetermined.
    """

    formula: Formula

    @property
    def is_true(self) -> bool:
        return self.formula == TRUE

    @property
    def is_false(self) -> bool:
        return self.formula == FALSE

    @property
    def is_undetermined(self) -> bool:
        return not (self.is_true or self.is_false)

    def __str__(self) -> str:
        if self.is_true:
            return "satisfied"
        if self.is_false:
            return "falsified"
        return f"undetermined: {render(self.formula)}"


# Renderer precedence; higher binds tighter.  The parser accepts the same
# grammar, so render/parse round-trip structurally.
_PREC_AND = 20
_PREC_UNTIL = 30
_PREC_UNARY = 40
_PREC_LEAF = 100


def _prec(phi: Formula) -> int:
    if isinstance(phi, And):
        return _PREC_AND
    if isinstance(phi, Until):
        return _PREC_UNTIL
    if isinstance(phi, (Not, Next)):
        return _PREC_UNARY
    return _PREC_LEAF


def _wrap(phi: Formula, min_prec: int) -> str:
    text = render(phi)
    if _prec(phi) < min_prec:
        return f"({text})"
    return text


def render(phi: Formula) -> str:
    """Emit formula text; conjunction associates left, until right."""
    if isinstance(phi, Truth):
        return "true"
    if isinstance(phi, Atom):
        return str(phi.ap)
    if isinstance(phi, Not):
        return "!" + _wrap(phi.operand, _PREC_UNARY)
    if isinstance(phi, Next):
        return "X " + _wrap(phi.operand, _PREC_UNARY)
    if isinstance(phi, And):
        return _wrap(phi.left, _PREC_AND) + " & " + _wrap(phi.right, _PREC_AND + 1)
    if isinstance(phi, Until):
        return _wrap(phi.left, _PREC_UNTIL + 1) + " U " + _wrap(phi.right, _PREC_UNTIL)
    raise TypeError(f"not a formula: {phi!r}")
