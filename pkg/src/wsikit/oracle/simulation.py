"""Simulation relations between explicit models.

The defining condition at a related pair: every modal observation of
the left state's local view transports to the right state's local view
over the relational image.  Atomic propositions, as nullary operators,
make related pairs preserve them.  The greatest such relation is
computed by refinement from the full (atom-respecting) relation;
relational and monotone model classes get equivalent specialized
refinement steps, checked against the generic one in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..formulas import FragmentError
from ..signatures import Signature
from .models import (ExplicitCoalgebra, GameFrame, KripkeModel,
                     MonotoneModel, Multigraph, bits)
from .semantics import local_sat


@dataclass(frozen=True)
class SimulationRelation:
    pairs: frozenset[tuple[int, int]]

    def image(self, xs) -> set[int]:
        xs = set(xs)
        return {y for x, y in self.pairs if x in xs}

    def inverse(self) -> "SimulationRelation":
        return SimulationRelation(frozenset((y, x) for x, y in self.pairs))

    def compose(self, other: "SimulationRelation") -> "SimulationRelation":
        by_mid: dict[int, set[int]] = {}
        for y, z in other.pairs:
            by_mid.setdefault(y, set()).add(z)
        out = set()
        for x, y in self.pairs:
            for z in by_mid.get(y, ()):
                out.add((x, z))
        return SimulationRelation(frozenset(out))


def _atom_ok(c: ExplicitCoalgebra, d: ExplicitCoalgebra) -> list[int]:
    """Per left state, the mask of right states with at least its
    propositions."""
    out = []
    for x in range(c.n):
        px = c.state_props(x)
        mask = 0
        for y in range(d.n):
            if px <= d.state_props(y):
                mask |= 1 << y
        out.append(mask)
    return out


def _pairs(smap: list[int]) -> frozenset[tuple[int, int]]:
    return frozenset((x, y) for x, m in enumerate(smap) for y in bits(m))


def _image_mask(smap: list[int], amask: int) -> int:
    out = 0
    for x in bits(amask):
        out |= smap[x]
    return out


def violates(c: ExplicitCoalgebra, d: ExplicitCoalgebra, sig: Signature,
             smap: list[int], x: int, y: int):
    """First violated (operator, left state set) at the pair, or None.
    Multigraph uses the equivalent weight formulation covering the whole
    graded operator family at once."""
    if isinstance(c, Multigraph):
        for amask in range(1 << c.n):
            wl = c.weight(x, amask)
            if wl > 0 and d.weight(y, _image_mask(smap, amask)) < wl:
                return ("weight", amask)
        return None
    for mod in sig.modalities():
        for amask in range(1 << c.n):
            if local_sat(c, x, mod, amask) and \
                    not local_sat(d, y, mod, _image_mask(smap, amask)):
                return (mod, amask)
    return None


def is_simulation(rel: SimulationRelation, c: ExplicitCoalgebra,
                  d: ExplicitCoalgebra, sig: Signature) -> bool:
    smap = [0] * c.n
    for x, y in rel.pairs:
        smap[x] |= 1 << y
    for x, y in rel.pairs:
        if c.state_props(x) - d.state_props(y):
            return False
        if violates(c, d, sig, smap, x, y) is not None:
            return False
    return True


def greatest_simulation(c: ExplicitCoalgebra, d: ExplicitCoalgebra,
                        sig: Signature) -> SimulationRelation:
    if isinstance(c, GameFrame) or isinstance(d, GameFrame):
        raise FragmentError("simulation computation over game frames "
                            "is not supported")
    if isinstance(c, KripkeModel) and isinstance(d, KripkeModel) and \
            sig.kind == "kripke":
        kinds = {k for ks in sig.allowed for k in ks}
        if kinds <= {"dia", "box"}:
            return _greatest_kripke(c, d, "dia" in kinds, "box" in kinds)
    if isinstance(c, MonotoneModel) and isinstance(d, MonotoneModel):
        kinds = {k for ks in sig.allowed for k in ks}
        return _greatest_monotone(c, d, "dia" in kinds, "box" in kinds)
    return _greatest_generic(c, d, sig)


def _greatest_generic(c, d, sig) -> SimulationRelation:
    smap = _atom_ok(c, d)
    changed = True
    while changed:
        changed = False
        for x in range(c.n):
            for y in list(bits(smap[x])):
                if violates(c, d, sig, smap, x, y) is not None:
                    smap[x] &= ~(1 << y)
                    changed = True
    return SimulationRelation(_pairs(smap))


def _greatest_kripke(c: KripkeModel, d: KripkeModel, use_dia: bool,
                     use_box: bool) -> SimulationRelation:
    """Refinement with the standard conditions: diamonds give the usual
    forward simulation step, boxes the backward one; with both the
    relation refines like a bisimulation."""
    smap = _atom_ok(c, d)
    changed = True
    while changed:
        changed = False
        for x in range(c.n):
            cur = smap[x]
            if not cur:
                continue
            keep = 0
            for y in bits(cur):
                ok = True
                if use_dia:
                    for xp in bits(c.succ[x]):
                        if d.succ[y] & smap[xp] == 0:
                            ok = False
                            break
                if ok and use_box:
                    union = 0
                    for xp in bits(c.succ[x]):
                        union |= smap[xp]
                    if d.succ[y] & ~union:
                        ok = False
                if ok:
                    keep |= 1 << y
            if keep != cur:
                smap[x] = keep
                changed = True
    return SimulationRelation(_pairs(smap))


def _greatest_monotone(c: MonotoneModel, d: MonotoneModel, use_dia: bool,
                       use_box: bool) -> SimulationRelation:
    """Boxes: each minimal left neighbourhood's image contains a right
    neighbourhood.  Diamonds: equivalently, the inverse relation
    satisfies the box step from right to left."""
    smap = _atom_ok(c, d)
    changed = True
    while changed:
        changed = False
        for x in range(c.n):
            cur = smap[x]
            if not cur:
                continue
            keep = 0
            for y in bits(cur):
                ok = True
                if use_box:
                    for mset in c.nbhd[x]:
                        img = _image_mask(smap, mset)
                        if not any(mp & ~img == 0 for mp in d.nbhd[y]):
                            ok = False
                            break
                if ok and use_dia:
                    for mp in d.nbhd[y]:
                        pre = 0
                        for xp in range(c.n):
                            if smap[xp] & mp:
                                pre |= 1 << xp
                        if not any(m & ~pre == 0 for m in c.nbhd[x]):
                            ok = False
                            break
                if ok:
                    keep |= 1 << y
            if keep != cur:
                smap[x] = keep
                changed = True
    return SimulationRelation(_pairs(smap))


def simulates(c: ExplicitCoalgebra, x: int, d: ExplicitCoalgebra, y: int,
              sig: Signature) -> bool:
    """Does (d, y) simulate (c, x)?"""
    return (x, y) in greatest_simulation(c, d, sig).pairs
