"""One-step simulation-initial models.

For a conjunctive one-step formula, the constructed model's states are
subsets of the formula's variables: each state makes exactly its own
variables true.  The transition element over the states is deliberately
left abstract here; signatures with a concrete model reading get an
explicit transition in the oracle's concretizer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .onestep import OneStepFormula
from .rules import (ConvexityCounterexample, check_convexity_preservation,
                    construction_matches)
from .signatures import GAME, KRIPKE, MONOTONE, Signature, SignatureError

State = frozenset[str]


class ConvexityError(SignatureError):
    def __init__(self, sig: Signature, ce: ConvexityCounterexample):
        super().__init__(
            f"rule set of {sig.id} does not preserve convexity: {ce}")
        self.counterexample = ce


@dataclass(frozen=True)
class OneStepWsiModel:
    """States are subsets of the generating formula's variables."""

    sig: Signature
    formula: OneStepFormula
    variables: tuple[str, ...]
    states: tuple[State, ...]
    # monotone signatures: minimal neighbourhoods, each a set of states
    min_neighbourhoods: Optional[tuple[frozenset[State], ...]] = None

    def state_set(self) -> frozenset[State]:
        return frozenset(self.states)

    def __str__(self) -> str:
        body = ", ".join("{" + ",".join(sorted(s)) + "}" for s in self.states)
        return f"<{self.formula} over {self.sig.id}: [{body}]>"


@dataclass(frozen=True)
class Classification:
    linear: bool
    bound: int


_convexity_cache: dict[str, Optional[ConvexityCounterexample]] = {}


def ensure_convexity_preserved(sig: Signature, bound: int = 6) -> None:
    if sig.id not in _convexity_cache:
        _convexity_cache[sig.id] = check_convexity_preservation(sig, bound)
    ce = _convexity_cache[sig.id]
    if ce is not None:
        raise ConvexityError(sig, ce)


def _sorted_states(states) -> tuple[State, ...]:
    return tuple(sorted(states, key=lambda s: (len(s), tuple(sorted(s)))))


def _attach_neighbourhoods(sig: Signature, phi: OneStepFormula,
                           states: tuple[State, ...]) -> Optional[
                               tuple[frozenset[State], ...]]:
    if sig.kind != MONOTONE:
        return None
    boxes = {v for m, v in phi.modal if m.kind == "box"}
    dias = {v for m, v in phi.modal if m.kind == "dia"}
    fams: list[frozenset[State]] = []
    for i in sorted(boxes):
        fams.append(frozenset(s for s in states if i in s))
    # diamond-witnessing neighbourhood: the empty state plus one singleton
    # per diamond variable (on box-disjoint variables this is exactly the
    # set of states inside the diamond variables)
    fams.append(frozenset(s for s in states if s <= dias and len(s) <= 1))
    # drop duplicates and non-minimal members; upward closure is implicit
    minimal: list[frozenset[State]] = []
    for f in sorted(set(fams), key=lambda f: (len(f), _sorted_states(f))):
        if not any(g <= f for g in minimal):
            minimal.append(f)
    return tuple(minimal)


def build_onestep_wsi_generic(phi: OneStepFormula, sig: Signature, *,
                              maximal: Optional[bool] = None,
                              injective: bool = True) -> OneStepWsiModel:
    """Rule-driven construction: one state per match (its conclusion
    image), one per match that dualizes a premise slot away (conclusion
    image without that slot); duplicates merge because states are
    subsets."""
    ensure_convexity_preserved(sig)
    matches = construction_matches(list(phi.modal), sig, maximal=maximal,
                                   injective=injective)
    states = {m.state_vars for m in matches}
    ordered = _sorted_states(states)
    return OneStepWsiModel(
        sig, phi, tuple(sorted(phi.variables())), ordered,
        _attach_neighbourhoods(sig, phi, ordered))


def build_onestep_wsi_special(phi: OneStepFormula,
                              sig: Signature) -> OneStepWsiModel:
    """Closed-form constructions for the relational and monotone
    signatures; coalition signatures fall back to the generic path."""
    if sig.kind == GAME:
        return build_onestep_wsi_generic(phi, sig)
    ensure_convexity_preserved(sig)
    if sig.kind not in (KRIPKE, MONOTONE):
        raise SignatureError(f"no construction for logic {sig.id}")
    if sig.relations != 1:
        return build_onestep_wsi_generic(phi, sig)
    boxes = frozenset(v for m, v in phi.modal if m.kind == "box")
    dias = frozenset(v for m, v in phi.modal if m.kind == "dia")
    states: set[State]
    if sig.id == "k-diamond":
        states = {frozenset({j}) for j in dias}
    elif sig.id == "k-box":
        states = {boxes}
    elif sig.id == "kd":
        states = {boxes | {j} for j in dias}
        states.add(boxes)
    elif sig.id == "ms":
        states = set()
        for i in [None, *sorted(boxes)]:
            for j in [None, *sorted(dias)]:
                states.add(frozenset(x for x in (i, j) if x is not None))
    else:
        return build_onestep_wsi_generic(phi, sig)
    ordered = _sorted_states(states)
    return OneStepWsiModel(
        sig, phi, tuple(sorted(phi.variables())), ordered,
        _attach_neighbourhoods(sig, phi, ordered))


def classify(m: OneStepWsiModel) -> Classification:
    """linear: every variable true in at most one state; bound: the
    largest number of variables any state makes true."""
    counts: dict[str, int] = {}
    for s in m.states:
        for v in s:
            counts[v] = counts.get(v, 0) + 1
    linear = all(c <= 1 for c in counts.values())
    bound = max((len(s) for s in m.states), default=0)
    return Classification(linear, bound)


def known_state_bound(sig: Signature, phi: OneStepFormula) -> Optional[int]:
    """Signature-level bound on state sizes, when one is known: 1 for
    diamond-only Kripke, 2 for serial monotone, the agent count for
    coalition signatures avoiding the empty-coalition box and the
    grand-coalition diamond."""
    if sig.id == "k-diamond":
        return 1
    if sig.id == "ms":
        return 2
    if sig.kind == GAME:
        full = frozenset(range(1, sig.agents + 1))
        for mod, _ in phi.modal:
            if mod.kind == "cbox" and not mod.coal:
                return None
            if mod.kind == "cdia" and mod.coal == full:
                return None
        return sig.agents
    return None
