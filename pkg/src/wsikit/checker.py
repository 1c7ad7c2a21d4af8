"""Model checking over abstract models and the subsumption decision.

Extensions of query subformulas are computed bottom-up as sets of state
indices.  Fixpoint blocks iterate their component maps to stabilization
(downward for greatest, upward for least).  A modal step at state A
turns the argument's extension, restricted to A's one-step states, into
a positive formula (disjunction of the conjunctions of each one-step
state's variables, kept as an antichain of minimal sets) and asks the
one-step consequence solver whether A's body entails the operator
applied to it.  That encoding is exact because extensions of positive
formulas are upward closed along subset inclusion of states, which the
checker asserts when debug checks are on.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .builder import AbstractWsiModel, build_wsi
from .formulas import (And, Atom, Bot, Formula, FragmentError, Modal, Mu, Nu,
                       Or, Top, Var, require_conjunctive_nu,
                       require_positive_query, walk)
from .onestep import antichain_key, antichain_reduce
from .rules import one_step_consequence
from .signatures import Signature
from .tboxes import TBox, tbox_to_nu

State = frozenset[str]

# when True, every modal argument extension is checked to be upward
# closed across the model's subset order; a violation would invalidate
# the antichain encoding and is a hard error
DEBUG_CLOSURE_CHECKS = False


class ClosureViolation(AssertionError):
    pass


class _Eval:
    def __init__(self, m: AbstractWsiModel):
        self.m = m
        self.all = frozenset(range(len(m.states)))
        self.memo: dict[tuple, bool] = {}
        self.atom_cache: dict[str, frozenset[int]] = {}

    def atom(self, name: str) -> frozenset[int]:
        if name not in self.atom_cache:
            self.atom_cache[name] = frozenset(
                i for i, s in enumerate(self.m.states) if name in s.atoms)
        return self.atom_cache[name]

    def modal(self, mod, ext: frozenset[int]) -> frozenset[int]:
        if DEBUG_CLOSURE_CHECKS:
            self._check_upward_closed(ext)
        out = set()
        for i, st in enumerate(self.m.states):
            local = [b for b, j in zip(st.onestep.states, st.successors)
                     if j in ext]
            chain = antichain_reduce(local)
            key = (i, mod, antichain_key(chain))
            hit = self.memo.get(key)
            if hit is None:
                hit = one_step_consequence(st.formula, mod, chain, self.m.sig)
                self.memo[key] = hit
            if hit:
                out.add(i)
        return frozenset(out)

    def _check_upward_closed(self, ext: frozenset[int]) -> None:
        sts = self.m.states
        for i in ext:
            for j in range(len(sts)):
                if j not in ext and sts[i].vars <= sts[j].vars:
                    raise ClosureViolation(
                        f"extension not upward closed: contains "
                        f"{sorted(sts[i].vars)} but not {sorted(sts[j].vars)}")

    def eval(self, f: Formula, env: dict[str, frozenset[int]]) -> frozenset[int]:
        if isinstance(f, Top):
            return self.all
        if isinstance(f, Bot):
            return frozenset()
        if isinstance(f, Atom):
            return self.atom(f.name)
        if isinstance(f, Var):
            try:
                return env[f.name]
            except KeyError:
                raise FragmentError(f"unbound fixpoint variable {f.name}")
        if isinstance(f, And):
            return self.eval(f.l, env) & self.eval(f.r, env)
        if isinstance(f, Or):
            return self.eval(f.l, env) | self.eval(f.r, env)
        if isinstance(f, Modal):
            return self.modal(f.mod, self.eval(f.arg, env))
        if isinstance(f, (Nu, Mu)):
            return self.block(f, env)
        raise TypeError(f"not a formula: {f!r}")

    def block(self, f: Union[Nu, Mu], env: dict[str, frozenset[int]]):
        names = (f.head,) + f.aux
        bodies = (f.head_body,) + f.aux_bodies
        start = self.all if isinstance(f, Nu) else frozenset()
        cur = {n: start for n in names}
        rounds = 0
        limit = len(self.m.states) * len(names) + 2
        while True:
            inner = dict(env)
            inner.update(cur)
            nxt = {n: self.eval(b, inner) for n, b in zip(names, bodies)}
            rounds += 1
            if nxt == cur:
                break
            assert rounds <= limit, "fixpoint iteration failed to converge"
            cur = nxt
        return cur[f.head]


def extension(m: AbstractWsiModel, psi: Formula,
              valuation: Optional[dict] = None) -> frozenset[int]:
    """Set of state indices satisfying the query."""
    ev = _Eval(m)
    env = {}
    for k, v in (valuation or {}).items():
        env[k] = frozenset(v)
    return ev.eval(psi, env)


def model_check(m: AbstractWsiModel, state: Union[int, State], psi: Formula,
                valuation: Optional[dict] = None) -> bool:
    require_positive_query(psi, m.sig)
    if not isinstance(state, int):
        state = m.state_index()[frozenset(state)]
    return state in extension(m, psi, valuation)


@dataclass(frozen=True)
class Verdict:
    """Machine-readable subsumption verdict."""

    result: bool
    witness: str
    caveats: tuple[str, ...] = ()
    model: Optional[AbstractWsiModel] = field(default=None, compare=False)

    def to_json(self) -> dict:
        out = {"result": self.result, "witness": self.witness}
        if self.caveats:
            out["caveats"] = list(self.caveats)
        return out


def decide_subsumption(phi: Formula, psi: Formula, sig: Signature, *,
                       maximal: Optional[bool] = None) -> Verdict:
    """Build the left-hand side's model and check the right-hand side at
    its root.  A false verdict names the model itself as the universal
    counter-model candidate."""
    require_conjunctive_nu(phi, sig)
    require_positive_query(psi, sig)
    caveats = ()
    if any(isinstance(g, Mu) for _, g in walk(psi)):
        caveats = ("mu-query",)
    m = build_wsi(phi, sig, maximal=maximal)
    if model_check(m, m.root, psi):
        return Verdict(True, "model-check-trace", caveats, m)
    return Verdict(False, "wsi-counter-model-ref", caveats, m)


def subsumes(phi: Formula, psi: Formula, sig: Signature) -> bool:
    return decide_subsumption(phi, psi, sig).result


def subsumes_tbox(t: TBox, lhs: Formula, rhs: Formula, sig: Signature) -> bool:
    return decide_subsumption_tbox(t, lhs, rhs, sig).result


def decide_subsumption_tbox(t: TBox, lhs: Formula, rhs: Formula,
                            sig: Signature) -> Verdict:
    lhs_enc, rhs_enc = tbox_to_nu(t, lhs, rhs)
    return decide_subsumption(lhs_enc, rhs_enc, sig)
