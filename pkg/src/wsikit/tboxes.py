"""Terminologies: definition sets with greatest-fixpoint semantics.

A terminology is a list of definitions a == phi, each left-hand side a
proposition defined at most once, each right-hand side in the
conjunctive fragment.  Subsumption relative to a terminology reduces to
subsumption of simultaneous greatest-fixpoint sentences in which the
defined propositions become fixpoint variables.
"""

from __future__ import annotations

from dataclasses import dataclass

from .formulas import (And, Atom, Formula, Modal, Mu, Nu, Or, Var, atoms,
                       parse_formula, print_formula, validate_conjunctive)
from .signatures import Signature


class TBoxError(ValueError):
    pass


@dataclass(frozen=True)
class TBox:
    """Definitions in declaration order; derived = defined propositions."""

    definitions: tuple[tuple[str, Formula], ...]
    declared_derived: frozenset[str] = frozenset()

    def __post_init__(self):
        seen = set()
        for name, body in self.definitions:
            if name in seen:
                raise TBoxError(f"duplicate definition for {name}")
            seen.add(name)
            bad = validate_conjunctive(body)
            if bad:
                raise TBoxError(
                    f"definition of {name} outside the conjunctive fragment: "
                    + "; ".join(r for _, r in bad))
        missing = self.declared_derived - seen
        if missing:
            raise TBoxError(
                f"undefined derived proposition(s): {sorted(missing)}")

    @property
    def derived(self) -> list[str]:
        return [name for name, _ in self.definitions]

    def primitives(self) -> set[str]:
        derived = set(self.derived)
        out: set[str] = set()
        for _, body in self.definitions:
            out |= atoms(body) - derived
        return out

    def __str__(self) -> str:
        return "\n".join(f"{n} == {print_formula(b)}"
                         for n, b in self.definitions)


def parse_tbox(text: str, sig: Signature) -> TBox:
    """One definition per line, "#" starts a comment."""
    defs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "==" not in line:
            raise TBoxError(f"line {lineno}: expected 'ident == formula'")
        lhs, rhs = line.split("==", 1)
        name = lhs.strip()
        if not name.isidentifier():
            raise TBoxError(f"line {lineno}: bad proposition name {name!r}")
        defs.append((name, parse_formula(rhs.strip(), sig)))
    return TBox(tuple(defs))


def _as_variables(f: Formula, derived: frozenset[str]) -> Formula:
    """Turn occurrences of defined propositions into fixpoint variables."""
    if isinstance(f, Atom) and f.name in derived:
        return Var(f.name)
    if isinstance(f, And):
        return And(_as_variables(f.l, derived), _as_variables(f.r, derived))
    if isinstance(f, Or):
        return Or(_as_variables(f.l, derived), _as_variables(f.r, derived))
    if isinstance(f, Modal):
        return Modal(f.mod, _as_variables(f.arg, derived))
    if isinstance(f, (Nu, Mu)):
        inner = derived - {f.head, *f.aux}
        cls = type(f)
        return cls(f.head, f.aux, _as_variables(f.head_body, inner),
                   tuple(_as_variables(b, inner) for b in f.aux_bodies))
    return f


def _fresh_root(taken: set[str]) -> str:
    if "z" not in taken:
        return "z"
    i = 0
    while f"z{i}" in taken:
        i += 1
    return f"z{i}"


def tbox_to_nu(t: TBox, lhs: Formula, rhs: Formula) -> tuple[Formula, Formula]:
    """Encode a subsumption query over a terminology as a pair of
    simultaneous greatest-fixpoint sentences sharing the definition
    bodies, with a fresh root variable in head position."""
    derived = frozenset(t.derived)
    bodies = tuple(_as_variables(b, derived) for _, b in t.definitions)
    taken = derived | atoms(lhs) | atoms(rhs)
    for b in bodies:
        taken = taken | atoms(b)
    z = _fresh_root(set(taken))
    aux = tuple(t.derived)
    lhs_enc = Nu(z, aux, _as_variables(lhs, derived), bodies)
    rhs_enc = Nu(z, aux, _as_variables(rhs, derived), bodies)
    return lhs_enc, rhs_enc
