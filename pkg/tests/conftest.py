"""Shared helpers: positive-formula pools, seeded formula generators,
and a reference model construction that recursively pastes child models
under a one-step model (used as an independent comparison point for the
saturation builder on acyclic inputs)."""

from __future__ import annotations

import random
from itertools import combinations

import pytest

import wsikit.checker
from wsikit import (And, Atom, Modal, Nu, Top, conj, signature)
from wsikit.formulas import Formula, conjuncts
from wsikit.onestep import OneStepFormula, antichain_to_posprop
from wsikit.onestep_wsi import build_onestep_wsi_generic
from wsikit.oracle.models import KripkeModel, MonotoneModel
from wsikit.signatures import KRIPKE, MONOTONE, Mod, Signature


@pytest.fixture(autouse=True, scope="session")
def _closure_checks():
    wsikit.checker.DEBUG_CLOSURE_CHECKS = True
    yield
    wsikit.checker.DEBUG_CLOSURE_CHECKS = False


def all_antichains(variables) -> list[frozenset[frozenset[str]]]:
    """All antichains of subsets of the variables = all positive Boolean
    functions over them."""
    vs = sorted(variables)
    subsets = [frozenset(c) for k in range(len(vs) + 1)
               for c in combinations(vs, k)]
    out = []

    def rec(start, chosen):
        out.append(frozenset(chosen))
        for i in range(start, len(subsets)):
            s = subsets[i]
            if all(not (s <= t or t <= s) for t in chosen):
                rec(i + 1, chosen + [s])

    rec(0, [])
    return out


def posprop_pool(variables):
    return [antichain_to_posprop(a) for a in all_antichains(variables)]


def sig_mods(sig: Signature) -> list[Mod]:
    return [Mod(k) for ks in sig.allowed for k in sorted(ks)]


def all_onestep_formulas(sig: Signature, variables, max_atoms: int):
    mods = sig_mods(sig)
    lits = [(m, v) for m in mods for v in sorted(variables)]
    return [OneStepFormula(frozenset(c))
            for k in range(max_atoms + 1) for c in combinations(lits, k)]


# ---------------------------------------------------------------------------
# seeded random formulas


def random_conjunctive(rng: random.Random, sig: Signature, props,
                       depth: int, max_parts: int = 3) -> Formula:
    parts = []
    for _ in range(rng.randint(1, max_parts)):
        roll = rng.random()
        if depth == 0 or roll < 0.35:
            parts.append(Atom(rng.choice(props)))
        else:
            mod = rng.choice(sig_mods(sig))
            parts.append(Modal(mod, random_conjunctive(
                rng, sig, props, depth - 1, max_parts=2)))
    return conj(parts)


def random_nu_sentence(rng: random.Random, sig: Signature, props,
                       n_vars: int) -> Nu:
    """Shallow simultaneous fixpoint sentence: bodies are conjunctions
    of propositions and operators applied to bound variables."""
    names = [f"v{i}" for i in range(n_vars)]
    mods = sig_mods(sig)
    bodies = []
    for i in range(n_vars):
        parts = []
        for _ in range(rng.randint(1, 3)):
            if rng.random() < 0.4:
                parts.append(Atom(rng.choice(props)))
            else:
                from wsikit.formulas import Var
                parts.append(Modal(rng.choice(mods),
                                   Var(rng.choice(names))))
        bodies.append(conj(parts))
    return Nu(names[0], tuple(names[1:]), bodies[0], tuple(bodies[1:]))


def random_query(rng: random.Random, sig: Signature, props,
                 depth: int, allow_or: bool = True) -> Formula:
    from wsikit.formulas import Or
    roll = rng.random()
    if depth == 0 or roll < 0.3:
        return Atom(rng.choice(props)) if rng.random() < 0.8 else Top()
    if allow_or and roll < 0.5:
        return Or(random_query(rng, sig, props, depth - 1),
                  random_query(rng, sig, props, depth - 1))
    if roll < 0.7:
        return And(random_query(rng, sig, props, depth - 1),
                   random_query(rng, sig, props, depth - 1))
    return Modal(rng.choice(sig_mods(sig)),
                 random_query(rng, sig, props, depth - 1))


# ---------------------------------------------------------------------------
# reference construction: recursive pasting of child models


def _decompose(f: Formula):
    """Split a conjunctive formula into atoms and modal conjuncts with
    one variable per distinct argument subformula."""
    atoms, modal, args = set(), [], {}
    for part in conjuncts(f):
        if isinstance(part, Atom):
            atoms.add(part.name)
        elif isinstance(part, Modal):
            key = part.arg
            name = args.setdefault(key, f"c{len(args)}")
            modal.append((part.mod, name))
        elif isinstance(part, Top):
            continue
        else:
            raise ValueError(f"not conjunctive: {part!r}")
    by_name = {name: arg for arg, name in args.items()}
    return frozenset(atoms), OneStepFormula(frozenset(modal)), by_name


def reference_collage(f: Formula, sig: Signature):
    """Build an explicit pointed model for an acyclic conjunctive
    formula by recursion: construct the one-step model of the top level,
    then paste recursively built child models onto its states.

    Over signatures whose one-step model of the empty formula is
    nonempty (boxes present or seriality), a truth-constant child would
    recurse forever; finite models for box-style logics end in loops,
    so those children become a fresh self-looping state.

    Returns (model, root_index)."""
    states: list[dict] = []

    def loop_state(atoms) -> int:
        me = len(states)
        states.append({"atoms": atoms, "succ": [], "nbhd": None})
        loop = me
        if atoms:
            loop = len(states)
            states.append({"atoms": frozenset(), "succ": [], "nbhd": None})
        states[me]["succ"] = [loop]
        states[loop]["succ"] = [loop]
        if sig.kind == MONOTONE:
            states[me]["nbhd"] = [frozenset({loop})]
            states[loop]["nbhd"] = [frozenset({loop})]
        return me

    def build(g: Formula) -> int:
        atoms, onestep, by_name = _decompose(g)
        if not onestep.modal and sig.id != "k-diamond":
            return loop_state(atoms)
        one = build_onestep_wsi_generic(onestep, sig)
        me = len(states)
        states.append({"atoms": atoms, "succ": [], "nbhd": None})
        child_of = {}
        for st in one.states:
            sub = conj([by_name[v] for v in sorted(st)])
            child_of[st] = build(sub)
        states[me]["succ"] = [child_of[st] for st in one.states]
        if sig.kind == MONOTONE:
            states[me]["nbhd"] = [
                frozenset(child_of[st] for st in fam)
                for fam in one.min_neighbourhoods or ()]
        return me

    root = build(f)
    props = tuple(sorted({p for s in states for p in s["atoms"]}))
    val = tuple(sum(1 << i for i, s in enumerate(states)
                    if p in s["atoms"]) for p in props)
    n = len(states)
    if sig.kind == KRIPKE:
        succ = tuple(sum(1 << j for j in s["succ"]) for s in states)
        return KripkeModel(n, succ, props, val), root
    if sig.kind == MONOTONE:
        nbhd = tuple(tuple(sorted(sum(1 << j for j in fam)
                                  for fam in s["nbhd"])) for s in states)
        return MonotoneModel(n, nbhd, props, val), root
    raise ValueError(f"no reference construction for {sig.id}")


KRIPKE_SIGS = [signature(s) for s in ("k-diamond", "k-box", "kd")]
WSI_SIGS = [signature(s) for s in ("k-diamond", "k-box", "kd", "ms")]
