"""Shared builders for the test suite: predicates, labelings, formula generators."""

from __future__ import annotations

import random

from ltlgen import (
    And,
    AtomicProposition,
    FALSE,
    Formula,
    Labeling,
    Next,
    Not,
    TRUE,
    Until,
)

P = AtomicProposition("p", "=", "1")
Q = AtomicProposition("q", "=", "1")


def lab(*atoms: AtomicProposition) -> Labeling:
    return Labeling(frozenset(atoms))


def enumerate_formulas(max_ops: int, leaves: list[Formula]) -> list[Formula]:
    """All formula trees with at most ``max_ops`` connectives over the leaves."""
    by_ops: dict[int, list[Formula]] = {0: list(leaves)}
    for n in range(1, max_ops + 1):
        forms: list[Formula] = []
        for child in by_ops[n - 1]:
            forms.append(Not(child))
            forms.append(Next(child))
        for left_ops in range(n):
            for left in by_ops[left_ops]:
                for right in by_ops[n - 1 - left_ops]:
                    forms.append(And(left, right))
                    forms.append(Until(left, right))
        by_ops[n] = forms
    return [phi for n in range(max_ops + 1) for phi in by_ops[n]]


def random_formula(rng: random.Random, max_ops: int, leaves: list[Formula]) -> Formula:
    """One random formula tree with at most ``max_ops`` connectives."""
    if max_ops == 0 or rng.random() < 0.25:
        return rng.choice(leaves)
    pick = rng.randrange(4)
    if pick == 0:
        return Not(random_formula(rng, max_ops - 1, leaves))
    if pick == 1:
        return Next(random_formula(rng, max_ops - 1, leaves))
    split = rng.randrange(max_ops)
    left = random_formula(rng, split, leaves)
    right = random_formula(rng, max_ops - 1 - split, leaves)
    return And(left, right) if pick == 2 else Until(left, right)


def has_redex(phi: Formula) -> bool:
    """True if any subterm matches a shape simplify is required to remove."""
    if isinstance(phi, Not):
        if isinstance(phi.operand, Not):
            return True
        return has_redex(phi.operand)
    if isinstance(phi, And):
        if TRUE in (phi.left, phi.right) or FALSE in (phi.left, phi.right):
            return True
        if phi.left == phi.right:
            return True
        return has_redex(phi.left) or has_redex(phi.right)
    if isinstance(phi, (Next, Until)):
        children = (phi.operand,) if isinstance(phi, Next) else (phi.left, phi.right)
        return any(has_redex(child) for child in children)
    return False


class FixedRoll:
    """random()-compatible stub returning a constant; keeps swap coin flips predictable."""

    def __init__(self, value: float):
        self.value = value

    def random(self) -> float:
        return self.value

    def randrange(self, n: int) -> int:
        return int(self.value * n)
