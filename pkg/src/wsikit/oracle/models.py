"""Explicit finite models per model class.

States are 0..n-1; state sets are bitmasks.  Valuations list the
extension bitmask of each proposition.  Multigraph multiplicities live
in the naturals extended with an absorbing infinity.  Monotone
neighbourhood families are stored as antichains of minimal sets, upward
closure being implicit.  Game frames carry per-state action counts per
agent and a total outcome function on joint actions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product
from math import inf
from typing import Union

INF = inf


def bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class KripkeModel:
    n: int
    succ: tuple[int, ...]
    props: tuple[str, ...]
    val: tuple[int, ...]

    kind = "kripke"

    def is_serial(self) -> bool:
        return all(s != 0 for s in self.succ)

    def state_props(self, i: int) -> frozenset[str]:
        return frozenset(p for p, m in zip(self.props, self.val) if m >> i & 1)


@dataclass(frozen=True)
class Multigraph:
    n: int
    mult: tuple[tuple[float, ...], ...]
    props: tuple[str, ...]
    val: tuple[int, ...]

    kind = "multigraph"

    def weight(self, i: int, mask: int) -> float:
        row = self.mult[i]
        return sum(row[j] for j in bits(mask))

    def state_props(self, i: int) -> frozenset[str]:
        return frozenset(p for p, m in zip(self.props, self.val) if m >> i & 1)


@dataclass(frozen=True)
class MonotoneModel:
    n: int
    nbhd: tuple[tuple[int, ...], ...]  # antichain of minimal sets per state
    props: tuple[str, ...]
    val: tuple[int, ...]

    kind = "monotone"

    def is_serial(self) -> bool:
        return all(fam and all(m != 0 for m in fam) for fam in self.nbhd)

    def state_props(self, i: int) -> frozenset[str]:
        return frozenset(p for p, m in zip(self.props, self.val) if m >> i & 1)


@dataclass(frozen=True)
class GameFrame:
    n: int
    agents: int
    actions: tuple[tuple[int, ...], ...]   # per state, per agent
    outcome: tuple[tuple[int, ...], ...]   # per state, lex order over joints
    props: tuple[str, ...]
    val: tuple[int, ...]

    kind = "game"

    def joint_actions(self, i: int):
        return product(*(range(k) for k in self.actions[i]))

    def joint_index(self, i: int, joint) -> int:
        idx = 0
        for a, k in zip(joint, self.actions[i]):
            idx = idx * k + a
        return idx

    def state_props(self, i: int) -> frozenset[str]:
        return frozenset(p for p, m in zip(self.props, self.val) if m >> i & 1)


ExplicitCoalgebra = Union[KripkeModel, Multigraph, MonotoneModel, GameFrame]


# ---------------------------------------------------------------------------
# JSON round-trip and text diagrams


def model_to_json(m: ExplicitCoalgebra) -> dict:
    base = {
        "kind": m.kind,
        "states": m.n,
        "props": {p: sorted(bits(mask))
                  for p, mask in zip(m.props, m.val)},
    }
    if isinstance(m, KripkeModel):
        base["succ"] = [sorted(bits(s)) for s in m.succ]
    elif isinstance(m, Multigraph):
        base["mult"] = [["inf" if x == INF else int(x) for x in row]
                        for row in m.mult]
    elif isinstance(m, MonotoneModel):
        base["neighbourhoods"] = [[sorted(bits(s)) for s in fam]
                                  for fam in m.nbhd]
    elif isinstance(m, GameFrame):
        base["agents"] = m.agents
        base["actions"] = [list(a) for a in m.actions]
        base["outcome"] = [list(o) for o in m.outcome]
    return base


def model_from_json(data: dict) -> ExplicitCoalgebra:
    n = data["states"]
    props = tuple(sorted(data.get("props", {})))
    val = tuple(sum(1 << i for i in data["props"][p]) for p in props)
    kind = data["kind"]
    if kind == "kripke":
        succ = tuple(sum(1 << i for i in ss) for ss in data["succ"])
        return KripkeModel(n, succ, props, val)
    if kind == "multigraph":
        mult = tuple(tuple(INF if x == "inf" else float(x) for x in row)
                     for row in data["mult"])
        return Multigraph(n, mult, props, val)
    if kind == "monotone":
        nbhd = tuple(tuple(sum(1 << i for i in s) for s in fam)
                     for fam in data["neighbourhoods"])
        return MonotoneModel(n, nbhd, props, val)
    if kind == "game":
        return GameFrame(n, data["agents"],
                         tuple(tuple(a) for a in data["actions"]),
                         tuple(tuple(o) for o in data["outcome"]),
                         props, val)
    raise ValueError(f"unknown model kind {kind!r}")


def load_model(path: str) -> ExplicitCoalgebra:
    with open(path, encoding="utf-8") as fh:
        return model_from_json(json.load(fh))


def text_diagram(m: ExplicitCoalgebra, root: int = -1) -> str:
    """Annotated text rendering for counter-model output."""
    lines = []
    for i in range(m.n):
        mark = " <- here" if i == root else ""
        ps = ",".join(sorted(m.state_props(i))) or "-"
        if isinstance(m, KripkeModel):
            body = "succ=[" + ",".join(map(str, bits(m.succ[i]))) + "]"
        elif isinstance(m, Multigraph):
            ws = [f"{j}:{'inf' if w == INF else int(w)}"
                  for j, w in enumerate(m.mult[i]) if w]
            body = "mult={" + ",".join(ws) + "}"
        elif isinstance(m, MonotoneModel):
            fams = ["{" + ",".join(map(str, bits(s))) + "}"
                    for s in m.nbhd[i]]
            body = "nbhds=[" + ",".join(fams) + "]"
        else:
            rows = []
            for joint in m.joint_actions(i):
                tgt = m.outcome[i][m.joint_index(i, joint)]
                rows.append("".join(map(str, joint)) + "->" + str(tgt))
            body = "acts=" + "x".join(map(str, m.actions[i])) + \
                " outcome={" + ",".join(rows) + "}"
        lines.append(f"  state {i}: props={{{ps}}} {body}{mark}")
    return "\n".join(lines)
