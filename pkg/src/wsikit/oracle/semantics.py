"""Explicit satisfaction, including fixpoints, per model class.

Extensions are bitmasks over model states.  Fixpoint blocks iterate the
component maps to stabilization; greatest fixpoints start at the full
state set, least fixpoints at the empty one.
"""

from __future__ import annotations

from typing import Optional

from ..formulas import (And, Atom, Bot, Formula, FragmentError, Modal, Mu,
                        Nu, Or, Top, Var)
from ..signatures import Mod
from .models import (ExplicitCoalgebra, GameFrame, KripkeModel,
                     MonotoneModel, Multigraph, popcount)


def local_sat(m: ExplicitCoalgebra, i: int, mod: Mod, ext: int) -> bool:
    """Does state i's local transition structure satisfy the operator
    applied to the given extension?"""
    kind = mod.kind
    if isinstance(m, KripkeModel):
        s = m.succ[i]
        if kind == "dia":
            return s & ext != 0
        if kind == "box":
            return s & ~ext == 0
        if kind == "gdia":
            return popcount(s & ext) > mod.grade
        if kind == "gbox":
            return popcount(s & ~ext) <= mod.grade
    elif isinstance(m, Multigraph):
        if kind == "gdia":
            return m.weight(i, ext) > mod.grade
        if kind == "gbox":
            full = (1 << m.n) - 1
            return m.weight(i, full & ~ext) <= mod.grade
        if kind == "dia":
            return m.weight(i, ext) > 0
        if kind == "box":
            full = (1 << m.n) - 1
            return m.weight(i, full & ~ext) == 0
    elif isinstance(m, MonotoneModel):
        if kind == "box":
            return any(s & ~ext == 0 for s in m.nbhd[i])
        if kind == "dia":
            return all(s & ext != 0 for s in m.nbhd[i])
    elif isinstance(m, GameFrame):
        if kind in ("cbox", "cdia"):
            return _game_sat(m, i, mod, ext)
    raise FragmentError(f"operator {mod} undefined on {m.kind} models")


def _game_sat(m: GameFrame, i: int, mod: Mod, ext: int) -> bool:
    coal = sorted(mod.coal)
    others = [q for q in range(1, m.agents + 1) if q not in mod.coal]
    acts = m.actions[i]

    def outcomes(coal_choice):
        for other_choice in _choices(acts, others):
            joint = [0] * m.agents
            for q, a in zip(coal, coal_choice):
                joint[q - 1] = a
            for q, a in zip(others, other_choice):
                joint[q - 1] = a
            yield m.outcome[i][m.joint_index(i, tuple(joint))]

    if mod.kind == "cbox":
        return any(all(ext >> t & 1 for t in outcomes(cc))
                   for cc in _choices(acts, coal))
    return all(any(ext >> t & 1 for t in outcomes(cc))
               for cc in _choices(acts, coal))


def _choices(acts, agents):
    if not agents:
        yield ()
        return
    q, rest = agents[0], agents[1:]
    for a in range(acts[q - 1]):
        for tail in _choices(acts, rest):
            yield (a,) + tail


def ext_of(m: ExplicitCoalgebra, f: Formula,
           env: Optional[dict[str, int]] = None,
           extra_atoms: Optional[dict[str, int]] = None) -> int:
    """Extension bitmask of a formula; env maps fixpoint variables to
    masks, extra_atoms overrides proposition extensions (used by the
    terminology oracle)."""
    env = env or {}
    full = (1 << m.n) - 1
    prop_index = {p: k for k, p in enumerate(m.props)}

    def ev(f: Formula, env: dict[str, int]) -> int:
        if isinstance(f, Top):
            return full
        if isinstance(f, Bot):
            return 0
        if isinstance(f, Atom):
            if extra_atoms and f.name in extra_atoms:
                return extra_atoms[f.name]
            k = prop_index.get(f.name)
            return m.val[k] if k is not None else 0
        if isinstance(f, Var):
            try:
                return env[f.name]
            except KeyError:
                raise FragmentError(f"unbound fixpoint variable {f.name}")
        if isinstance(f, And):
            return ev(f.l, env) & ev(f.r, env)
        if isinstance(f, Or):
            return ev(f.l, env) | ev(f.r, env)
        if isinstance(f, Modal):
            arg = ev(f.arg, env)
            out = 0
            for i in range(m.n):
                if local_sat(m, i, f.mod, arg):
                    out |= 1 << i
            return out
        if isinstance(f, (Nu, Mu)):
            names = (f.head,) + f.aux
            bodies = (f.head_body,) + f.aux_bodies
            cur = {x: (full if isinstance(f, Nu) else 0) for x in names}
            while True:
                inner = dict(env)
                inner.update(cur)
                nxt = {x: ev(b, inner) for x, b in zip(names, bodies)}
                if nxt == cur:
                    return cur[f.head]
                cur = nxt
        raise TypeError(f"not a formula: {f!r}")

    return ev(f, env)


def sat_explicit(m: ExplicitCoalgebra, state: int, f: Formula,
                 valuation: Optional[dict[str, int]] = None) -> bool:
    return ext_of(m, f, valuation) >> state & 1 == 1


def gfp_extension(m: ExplicitCoalgebra, definitions) -> dict[str, int]:
    """Greatest-fixpoint extensions of defined propositions: iterate the
    map sending a table of candidate extensions to the extensions of the
    definition bodies, starting from the full state set."""
    full = (1 << m.n) - 1
    table = {name: full for name, _ in definitions}
    while True:
        nxt = {name: ext_of(m, body, extra_atoms=table)
               for name, body in definitions}
        if nxt == table:
            return table
        table = nxt
