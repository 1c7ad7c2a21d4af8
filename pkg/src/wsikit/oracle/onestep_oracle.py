"""Brute-force ground truth at the depth-one level.

One-step models are enumerated over canonical carriers: each state is a
distinct subset of the variable set and makes exactly its own variables
true.  Every one-step model maps onto such a carrier without changing
satisfaction (merge states satisfying the same variables), so
exhaustion over canonical carriers of size up to the bound decides
satisfiability for all models within that state bound.
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Iterator, Union

from ..formulas import Formula
from ..onestep import (Antichain, OneStepFormula, antichain_sat, eval_posprop,
                       posprop_vars)
from ..onestep_wsi import OneStepWsiModel
from ..signatures import GAME, KRIPKE, MONOTONE, Mod, Signature
from .enumeration import _antichains
from .models import bits

State = frozenset[str]
Carrier = tuple[State, ...]


def carriers(variables, max_size: int) -> Iterator[Carrier]:
    vs = sorted(variables)
    subsets = []
    for k in range(len(vs) + 1):
        subsets.extend(frozenset(c) for c in combinations(vs, k))
    for k in range(0, max_size + 1):
        yield from combinations(subsets, k)


def transition_options(sig: Signature, k: int,
                       max_actions: int = 2) -> list:
    if sig.kind == KRIPKE:
        lo = 1 if sig.serial else 0
        return list(range(lo, 1 << k))
    if sig.kind == MONOTONE:
        chains = _antichains(k)
        if sig.serial:
            chains = [c for c in chains if c and all(m != 0 for m in c)]
        return chains
    if sig.kind == GAME:
        if k == 0:
            return []
        opts = []
        for counts in product(range(1, max_actions + 1), repeat=sig.agents):
            size = 1
            for c in counts:
                size *= c
            for outcome in product(range(k), repeat=size):
                opts.append((counts, outcome))
        return opts
    raise ValueError(f"no one-step enumeration for {sig.kind}")


def os_local_sat(sig: Signature, k: int, t, mod: Mod, ext: int) -> bool:
    """Transition t over a k-state carrier satisfies mod applied to the
    extension mask."""
    if sig.kind == KRIPKE:
        if mod.kind == "dia":
            return t & ext != 0
        if mod.kind == "box":
            return t & ~ext == 0
    elif sig.kind == MONOTONE:
        if mod.kind == "box":
            return any(s & ~ext == 0 for s in t)
        if mod.kind == "dia":
            return all(s & ext != 0 for s in t)
    elif sig.kind == GAME:
        counts, outcome = t
        return _game_local(sig.agents, counts, outcome, mod, ext)
    raise ValueError(f"operator {mod} undefined for {sig.kind} one-step "
                     "models")


def _game_local(agents: int, counts, outcome, mod: Mod, ext: int) -> bool:
    coal = sorted(mod.coal)
    others = [q for q in range(1, agents + 1) if q not in mod.coal]

    def joint_index(joint) -> int:
        idx = 0
        for a, c in zip(joint, counts):
            idx = idx * c + a
        return idx

    def outcomes(cc):
        for oc in product(*(range(counts[q - 1]) for q in others)):
            joint = [0] * agents
            for q, a in zip(coal, cc):
                joint[q - 1] = a
            for q, a in zip(others, oc):
                joint[q - 1] = a
            yield outcome[joint_index(tuple(joint))]

    coal_choices = list(product(*(range(counts[q - 1]) for q in coal)))
    if mod.kind == "cbox":
        return any(all(ext >> y & 1 for y in outcomes(cc))
                   for cc in coal_choices)
    return all(any(ext >> y & 1 for y in outcomes(cc))
               for cc in coal_choices)


def var_ext(carrier: Carrier, v: str) -> int:
    return sum(1 << i for i, s in enumerate(carrier) if v in s)


def onestep_sat(sig: Signature, carrier: Carrier, t,
                psi: OneStepFormula) -> bool:
    k = len(carrier)
    return all(os_local_sat(sig, k, t, mod, var_ext(carrier, v))
               for mod, v in psi.modal)


def brute_consequence(psi: OneStepFormula, heart: Mod,
                      rho: Union[Formula, Antichain], sig: Signature,
                      max_states: int = 3, max_actions: int = 2,
                      extra_vars=()) -> bool:
    """Entailment by exhaustion: no one-step model within the carrier
    bound satisfies psi together with the dualized query literal.

    For game signatures the action bound matters: refutations may need
    more actions than literals suggest, so callers cross-checking the
    rule solver should raise max_actions beyond the default.
    """
    if isinstance(rho, frozenset):
        rho_vars = {v for s in rho for v in s}
        holds = lambda s: antichain_sat(rho, s)
    else:
        rho_vars = posprop_vars(rho)
        holds = lambda s: eval_posprop(rho, s)
    variables = set(psi.variables()) | set(rho_vars) | set(extra_vars)
    dual = heart.dual()
    for carrier in carriers(variables, max_states):
        k = len(carrier)
        neg_rho = sum(1 << i for i, s in enumerate(carrier) if not holds(s))
        for t in transition_options(sig, k, max_actions=max_actions):
            if onestep_sat(sig, carrier, t, psi) and \
                    os_local_sat(sig, k, t, dual, neg_rho):
                return False
    return True


# ---------------------------------------------------------------------------
# concretized transitions for constructed one-step models


def concretize_onestep(one: OneStepWsiModel):
    """(carrier, transition) realizing the constructed model: relational
    classes take every state as a successor; serial monotone takes the
    recorded minimal neighbourhoods."""
    carrier: Carrier = tuple(one.states)
    k = len(carrier)
    if one.sig.kind == KRIPKE:
        return carrier, (1 << k) - 1
    if one.sig.kind == MONOTONE:
        index = {s: i for i, s in enumerate(carrier)}
        fams = tuple(sorted(sum(1 << index[b] for b in nb)
                            for nb in one.min_neighbourhoods or ()))
        return carrier, fams
    raise ValueError(f"no one-step concretization for {one.sig.id}")


def onestep_initiality_violations(one: OneStepWsiModel, max_states: int = 3,
                                  max_other_vars=()) -> list:
    """Check the defining property of the construction against all
    enumerated one-step models within the bound: whenever such a model
    satisfies the generating formula, every modal observation of the
    constructed transition transports along the valuation-inclusion
    relation."""
    sig = one.sig
    carrier, t = concretize_onestep(one)
    k = len(carrier)
    mods = [Mod(kind) for ks in sig.allowed for kind in sorted(ks)]
    variables = set(one.formula.variables()) | set(max_other_vars)
    out = []
    for other in carriers(variables, max_states):
        j = len(other)
        for s in transition_options(sig, j):
            if not onestep_sat(sig, other, s, one.formula):
                continue
            for amask in range(1 << k):
                simg = 0
                for y, ys in enumerate(other):
                    if any(carrier[x] <= ys for x in bits(amask)):
                        simg |= 1 << y
                for mod in mods:
                    if os_local_sat(sig, k, t, mod, amask) and \
                            not os_local_sat(sig, j, s, mod, simg):
                        out.append((other, s, mod, amask))
    return out


def onestep_materialization_violations(
        one: OneStepWsiModel, rhos, sig: Signature,
        consequence) -> list:
    """Compare the concretized transition's satisfaction of every
    queried literal with the rule-based entailment answer."""
    carrier, t = concretize_onestep(one)
    k = len(carrier)
    mods = [Mod(kind) for ks in sig.allowed for kind in sorted(ks)]
    out = []
    for rho in rhos:
        ext = sum(1 << i for i, s in enumerate(carrier)
                  if eval_posprop(rho, s))
        for mod in mods:
            sem = os_local_sat(sig, k, t, mod, ext)
            ent = consequence(one.formula, mod, rho, sig)
            if sem != ent:
                out.append((mod, rho, sem, ent))
    return out
