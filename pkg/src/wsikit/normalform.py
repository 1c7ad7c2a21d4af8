"""Flat equation systems and the shallow normal form.

A conjunctive sentence with greatest fixpoints is compiled into a
simultaneous system x0 = b0, ..., xn = bn whose bodies are depth-one
conjunctions over the system variables: nested modalities get auxiliary
abbreviation variables, nested fixpoint blocks are merged into the one
simultaneous block, and atomic propositions are kept as nullary atoms
inside bodies.  The root variable is always x0.
"""

from __future__ import annotations

from dataclasses import dataclass

from .formulas import (And, Atom, Formula, FragmentError, Modal, Nu, Top,
                       Var, conj, require_conjunctive_nu)
from .onestep import OneStepFormula
from .signatures import Signature


@dataclass(frozen=True)
class EquationSystem:
    """Ordered variables with one depth-one body each; x0 is the root."""

    variables: tuple[str, ...]
    bodies: tuple[OneStepFormula, ...]

    def __post_init__(self):
        assert len(self.variables) == len(self.bodies)
        declared = set(self.variables)
        for b in self.bodies:
            undeclared = b.variables() - declared
            if undeclared:
                raise FragmentError(
                    f"body mentions unknown variables {sorted(undeclared)}")

    @property
    def root(self) -> str:
        return self.variables[0]

    def body(self, var: str) -> OneStepFormula:
        return self.bodies[self.variables.index(var)]

    def __str__(self) -> str:
        return "; ".join(f"{v} = {b}"
                         for v, b in zip(self.variables, self.bodies))


class _Compiler:
    def __init__(self):
        self.names: list[str] = []
        self.props: list[set[str]] = []
        self.modal: list[set] = []
        self.aliases: list[set[int]] = []
        # one abbreviation per distinct argument subformula per scope
        self.abbrev: dict[tuple, str] = {}

    def fresh(self) -> int:
        i = len(self.names)
        self.names.append(f"x{i}")
        self.props.append(set())
        self.modal.append(set())
        self.aliases.append(set())
        return i

    def compile_root(self, f: Formula) -> int:
        if isinstance(f, Nu):
            return self.compile_block(f, {})
        root = self.fresh()
        self.compile_into(root, f, {})
        return root

    def compile_block(self, f: Nu, env: dict[str, int]) -> int:
        names = (f.head,) + f.aux
        slots = [self.fresh() for _ in names]
        inner = dict(env)
        inner.update(zip(names, slots))
        for slot, body in zip(slots, (f.head_body,) + f.aux_bodies):
            self.compile_into(slot, body, inner)
        return slots[0]

    def compile_into(self, slot: int, f: Formula, env: dict[str, int]) -> None:
        if isinstance(f, Top):
            return
        if isinstance(f, And):
            self.compile_into(slot, f.l, env)
            self.compile_into(slot, f.r, env)
            return
        if isinstance(f, Atom):
            self.props[slot].add(f.name)
            return
        if isinstance(f, Var):
            self.aliases[slot].add(env[f.name])
            return
        if isinstance(f, Modal):
            self.modal[slot].add((f.mod, self.compile_arg(f.arg, env)))
            return
        if isinstance(f, Nu):
            self.aliases[slot].add(self.compile_block(f, env))
            return
        raise FragmentError(f"not in the conjunctive fragment: {f!r}")

    def compile_arg(self, arg: Formula, env: dict[str, int]) -> str:
        if isinstance(arg, Var):
            return self.names[env[arg.name]]
        if isinstance(arg, Nu):
            return self.names[self.compile_block(arg, env)]
        key = (arg, tuple(sorted(env.items())))
        hit = self.abbrev.get(key)
        if hit is not None:
            return hit
        aux = self.fresh()
        self.compile_into(aux, arg, env)
        self.abbrev[key] = self.names[aux]
        return self.names[aux]

    def resolve_aliases(self) -> None:
        """A bare variable conjunct makes its body part of the host body;
        cycles of bare variables contribute nothing (their greatest
        solution is unconstrained)."""
        for i in range(len(self.names)):
            seen = {i}
            stack = list(self.aliases[i])
            while stack:
                j = stack.pop()
                if j in seen:
                    continue
                seen.add(j)
                self.props[i] |= self.props[j]
                self.modal[i] |= self.modal[j]
                stack.extend(self.aliases[j])

    def system(self) -> EquationSystem:
        self.resolve_aliases()
        bodies = tuple(
            OneStepFormula(
                frozenset((m, v) for m, v in self.modal[i]),
                frozenset(self.props[i]))
            for i in range(len(self.names)))
        return EquationSystem(tuple(self.names), bodies)


def shallow_normal_form(f: Formula, sig: Signature) -> EquationSystem:
    """Compile a conjunctive sentence into a flat equation system.

    The system has at most one variable per fixpoint-bound variable plus
    one per abbreviated subformula, so its size is linear in the input.
    """
    require_conjunctive_nu(f, sig)
    c = _Compiler()
    c.compile_root(f)
    return c.system()


def reconstitute(system: EquationSystem) -> Formula:
    """The simultaneous greatest-fixpoint sentence the system denotes."""
    bodies = []
    for b in system.bodies:
        parts: list[Formula] = [Atom(p) for p in sorted(b.props)]
        parts += [Modal(m, Var(v)) for m, v in b.sorted_modal()]
        bodies.append(conj(parts))
    return Nu(system.variables[0], system.variables[1:],
              bodies[0], tuple(bodies[1:]))
