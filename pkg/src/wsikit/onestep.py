"""Depth-one formulas over propositional variables.

A one-step conjunctive formula is a finite set of modal atoms, each a
unary operator applied to a variable, together with a set of nullary
atoms (propositions).  Positive propositional formulas over variables
(no negation, no modalities) appear as modal arguments in consequence
queries; they are positive Boolean functions and are canonicalized as
antichains of their minimal satisfying assignments.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .formulas import And, Atom, Bot, Formula, Or, Top, Var
from .signatures import Mod

Lit = tuple[Mod, str]


@dataclass(frozen=True)
class OneStepFormula:
    """Conjunction of modal atoms plus nullary atoms."""

    modal: frozenset[Lit]
    props: frozenset[str] = frozenset()

    @staticmethod
    def of(*lits: Lit, props=()) -> "OneStepFormula":
        return OneStepFormula(frozenset(lits), frozenset(props))

    def variables(self) -> frozenset[str]:
        return frozenset(v for _, v in self.modal)

    def conj(self, other: "OneStepFormula") -> "OneStepFormula":
        return OneStepFormula(self.modal | other.modal,
                              self.props | other.props)

    def sorted_modal(self) -> list[Lit]:
        return sorted(self.modal, key=lambda lv: (str(lv[0]), lv[1]))

    def __str__(self) -> str:
        parts = sorted(self.props)
        parts += [f"{m}{v}" for m, v in self.sorted_modal()]
        return " & ".join(parts) if parts else "true"


def eval_posprop(rho: Formula, assignment: frozenset[str]) -> bool:
    """Evaluate a positive propositional formula under the set of true
    variables.  Atom and Var nodes both read as variables here."""
    if isinstance(rho, Top):
        return True
    if isinstance(rho, Bot):
        return False
    if isinstance(rho, (Atom, Var)):
        return rho.name in assignment
    if isinstance(rho, And):
        return eval_posprop(rho.l, assignment) and eval_posprop(rho.r, assignment)
    if isinstance(rho, Or):
        return eval_posprop(rho.l, assignment) or eval_posprop(rho.r, assignment)
    raise TypeError(f"not a positive propositional formula: {rho!r}")


def posprop_vars(rho: Formula) -> set[str]:
    if isinstance(rho, (Atom, Var)):
        return {rho.name}
    if isinstance(rho, (And, Or)):
        return posprop_vars(rho.l) | posprop_vars(rho.r)
    if isinstance(rho, (Top, Bot)):
        return set()
    raise TypeError(f"not a positive propositional formula: {rho!r}")


Antichain = frozenset[frozenset[str]]


def antichain_reduce(sets) -> Antichain:
    """Keep only the inclusion-minimal sets."""
    sets = sorted({frozenset(s) for s in sets}, key=len)
    out: list[frozenset[str]] = []
    for s in sets:
        if not any(t <= s for t in out):
            out.append(s)
    return frozenset(out)


def posprop_antichain(rho: Formula) -> Antichain:
    """Minimal satisfying assignments of a positive formula.  The falsum
    is the empty antichain; truth is the antichain containing the empty
    assignment."""
    vs = sorted(posprop_vars(rho))
    mins: list[frozenset[str]] = []
    for k in range(len(vs) + 1):
        for comb in combinations(vs, k):
            a = frozenset(comb)
            if any(m <= a for m in mins):
                continue
            if eval_posprop(rho, a):
                mins.append(a)
    return frozenset(mins)


def antichain_to_posprop(chain: Antichain) -> Formula:
    """Disjunction of conjunctions form of an antichain."""
    disj = None
    for s in sorted(chain, key=lambda s: (len(s), tuple(sorted(s)))):
        c: Formula = Top()
        first = True
        for v in sorted(s):
            c = Atom(v) if first else And(c, Atom(v))
            first = False
        disj = c if disj is None else Or(disj, c)
    return Bot() if disj is None else disj


def antichain_sat(chain: Antichain, assignment: frozenset[str]) -> bool:
    return any(m <= assignment for m in chain)


def antichain_key(chain: Antichain) -> tuple[tuple[str, ...], ...]:
    """Canonical hashable form, for memo keys."""
    return tuple(sorted(tuple(sorted(s)) for s in chain))
