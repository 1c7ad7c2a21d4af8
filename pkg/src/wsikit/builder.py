"""Whole-formula model construction by greatest-fixpoint saturation.

A conjunctive sentence is flattened to an equation system over
variables x0..xn; model states are subsets A of those variables.  Each
state carries the conjunction of the bodies of its variables and that
conjunction's one-step model, whose states (again subsets) are the
state's successors.  Saturation from the root {x0} closes the state set
and terminates because there are only finitely many subsets.  Acyclic
systems (plain conjunctive formulas) take the same path; their models
coincide with the recursive step-by-step pasting construction, which
the test suite keeps as an independent reference.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from math import comb
from typing import Optional

from .formulas import Formula
from .normalform import EquationSystem, shallow_normal_form
from .onestep import OneStepFormula
from .onestep_wsi import (OneStepWsiModel, build_onestep_wsi_generic,
                          build_onestep_wsi_special, classify,
                          known_state_bound)
from .signatures import Signature

State = frozenset[str]


@dataclass(frozen=True)
class WsiState:
    vars: State
    atoms: frozenset[str]
    formula: OneStepFormula
    onestep: OneStepWsiModel
    successors: tuple[int, ...]  # aligned with onestep.states


@dataclass(frozen=True)
class AbstractWsiModel:
    sig: Signature
    system: EquationSystem
    states: tuple[WsiState, ...]
    root: int = 0

    def state_index(self) -> dict[State, int]:
        return {s.vars: i for i, s in enumerate(self.states)}

    @property
    def canonical(self) -> bool:
        return len({s.vars for s in self.states}) == len(self.states)


def _state_key(s: State):
    return (len(s), tuple(sorted(s)))


def _body_of(system: EquationSystem, a: State) -> OneStepFormula:
    out = OneStepFormula(frozenset())
    for v in system.variables:
        if v in a:
            out = out.conj(system.body(v))
    return out


def build_wsi(f: Formula, sig: Signature, *,
              maximal: Optional[bool] = None,
              special: bool = False) -> AbstractWsiModel:
    """Construct the model for a conjunctive sentence over a signature
    whose rule set preserves convexity.  special selects the per-logic
    closed-form one-step constructions instead of the rule-driven one."""
    system = shallow_normal_form(f, sig)
    return build_from_system(system, sig, maximal=maximal, special=special)


def build_from_system(system: EquationSystem, sig: Signature, *,
                      maximal: Optional[bool] = None,
                      special: bool = False) -> AbstractWsiModel:
    build1 = build_onestep_wsi_special if special else \
        (lambda phi, s: build_onestep_wsi_generic(phi, s, maximal=maximal))
    root: State = frozenset({system.root})
    order: list[State] = [root]
    seen: set[State] = {root}
    queue = [root]
    data: dict[State, tuple[OneStepFormula, OneStepWsiModel]] = {}
    while queue:
        a = queue.pop(0)
        phi = _body_of(system, a)
        one = build1(phi, sig)
        data[a] = (phi, one)
        for b in one.states:
            if b not in seen:
                seen.add(b)
                order.append(b)
                queue.append(b)
    index = {a: i for i, a in enumerate(order)}
    states = []
    for a in order:
        phi, one = data[a]
        states.append(WsiState(
            vars=a, atoms=phi.props, formula=phi, onestep=one,
            successors=tuple(index[b] for b in one.states)))
    return AbstractWsiModel(sig, system, tuple(states))


def collapse_dag(m: AbstractWsiModel) -> AbstractWsiModel:
    """Merge states realizing the same variable subset.  On models built
    by saturation this is the identity; it collapses unfolded trees."""
    rep: dict[State, int] = {}
    for i, s in enumerate(m.states):
        rep.setdefault(s.vars, i)
    # renumber reachable representatives breadth-first from the root
    root_rep = rep[m.states[m.root].vars]
    order: list[int] = [root_rep]
    seen = {m.states[root_rep].vars}
    qi = 0
    while qi < len(order):
        cur = m.states[order[qi]]
        qi += 1
        for succ in cur.successors:
            key = m.states[succ].vars
            if key not in seen:
                seen.add(key)
                order.append(rep[key])
    new_index = {m.states[i].vars: j for j, i in enumerate(order)}
    states = []
    for i in order:
        s = m.states[i]
        states.append(replace(
            s, successors=tuple(new_index[m.states[j].vars]
                                for j in s.successors)))
    return AbstractWsiModel(m.sig, m.system, tuple(states), 0)


def unfold_tree(m: AbstractWsiModel) -> AbstractWsiModel:
    """Duplicate shared states into a tree.  Only defined for acyclic
    models (plain conjunctive inputs); cyclic models have no finite
    unfolding."""
    states: list[WsiState] = []

    def rec(i: int, stack: frozenset[int]) -> int:
        if i in stack:
            raise ValueError("model is cyclic; no finite tree unfolding")
        s = m.states[i]
        slot = len(states)
        states.append(s)  # placeholder, successors patched below
        succ = tuple(rec(j, stack | {i}) for j in s.successors)
        states[slot] = replace(s, successors=succ)
        return slot

    rec(m.root, frozenset())
    return AbstractWsiModel(m.sig, m.system, tuple(states), 0)


@dataclass(frozen=True)
class SizeReport:
    states: int
    bound_k: int
    polynomial_certificate: bool
    certified_k: Optional[int]
    state_budget: Optional[int]
    lasso: bool


def size_report(m: AbstractWsiModel) -> SizeReport:
    """State count, the largest realized subset, and, where the
    signature guarantees a bound k on one-step states, the resulting
    polynomial state budget sum_{j<=k} C(n+1, j).  Box-only Kripke
    models are additionally flagged when they form a single chain."""
    bound = max((len(s.vars) for s in m.states), default=0)
    nvars = len(m.system.variables)
    ks = [known_state_bound(m.sig, s.formula) for s in m.states]
    certified = None
    budget = None
    cert = False
    if ks and all(k is not None for k in ks):
        certified = max(ks)
        if all(classify(s.onestep).bound <= certified for s in m.states):
            budget = sum(comb(nvars, j) for j in range(certified + 1))
            cert = m.canonical and len(m.states) <= budget
    lasso = False
    if m.sig.id == "k-box":
        lasso = all(len(s.successors) == 1 for s in m.states)
        if lasso:
            # the single successor chain from the root must visit every state
            seen = [m.root]
            while True:
                nxt = m.states[seen[-1]].successors[0]
                if nxt in seen:
                    break
                seen.append(nxt)
            lasso = len(seen) == len(m.states)
    return SizeReport(len(m.states), bound, cert, certified, budget, lasso)


# ---------------------------------------------------------------------------
# JSON export


def export_model(m: AbstractWsiModel) -> dict:
    """Stable-order JSON form of a canonical model."""
    vars_ = list(m.system.variables)
    vidx = {v: i for i, v in enumerate(vars_)}

    def vset(s: State) -> list[int]:
        return sorted(vidx[v] for v in s)

    states = []
    for s in m.states:
        states.append({
            "vars": vset(s.vars),
            "onestep": {
                "formula": str(s.formula),
                "states": [vset(b) for b in s.onestep.states],
            },
        })
    return {
        "signature": m.sig.id,
        "variables": vars_,
        "root": vset(m.states[m.root].vars),
        "states": states,
    }


def export_model_json(m: AbstractWsiModel) -> str:
    return json.dumps(export_model(m), indent=2)
