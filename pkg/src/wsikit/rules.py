"""Tableau rule machinery.

Each signature ships a small set of rule families.  Relational and
monotone signatures use the K-shaped rules (n boxes and one diamond in
the premise, all argument variables in the conclusion) and, where the
models are serial, the D-shaped rules (n boxes, no diamond).  Coalition
signatures use the C-shaped rules (disjoint coalition boxes, one
coalition diamond whose coalition contains all of them, any number of
grand-coalition diamonds) and their diamond-free variant.

The same matching machinery drives three consumers: the public match
enumeration, the convexity-preservation check, and the conjunctive
one-step consequence solver (entailment of a single modal literal from
a conjunctive one-step formula).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Optional, Union

from .formulas import Formula
from .onestep import (Antichain, Lit, OneStepFormula, antichain_sat,
                      eval_posprop)
from .signatures import GAME, Mod, Signature, SignatureError

log = logging.getLogger("wsikit.rules")

# variable standing for the negated query argument in consequence checks
PAYLOAD = "~rho"


@dataclass(frozen=True)
class RuleInstance:
    """A concrete definite rule: premise literals over slot variables,
    conclusion a subset of the slot variables."""

    schema_id: str
    premise: tuple[Lit, ...]
    conclusion: tuple[str, ...]

    def __str__(self) -> str:
        prem = ", ".join(f"{m}{v}" for m, v in self.premise)
        return f"{self.schema_id}: {prem} / {', '.join(self.conclusion)}"


@dataclass(frozen=True)
class Match:
    """A rule instance applied to a literal set via a renaming.

    matched are the query literals consumed; dropped, when set, is the
    modality of one premise slot that was dualized away instead of being
    matched (its variable is omitted from the produced state).
    """

    rule: RuleInstance
    sigma: tuple[tuple[str, str], ...]
    matched: frozenset[Lit]
    dropped: Optional[Mod]
    mode: tuple[str, str]
    state_vars: frozenset[str]

    def describe(self) -> str:
        subst = ", ".join(f"{s}->{v}" for s, v in self.sigma)
        extra = f" dualizing {self.dropped}" if self.dropped else ""
        return f"{self.rule.schema_id} via {{{subst}}}{extra}"


@dataclass(frozen=True)
class KripkeStyleFamily:
    """K/D-shaped rule family: nbox boxes (None = any number) and one
    diamond when dia is set."""

    fid: str
    box: Mod
    dia: Optional[Mod]
    nbox: Optional[int]

    def schema_id(self, n: int) -> str:
        if self.nbox is None:
            return f"{'K' if self.dia else 'D'}_{n}"
        return self.fid

    def arity_ok(self, n: int) -> bool:
        return self.nbox is None or n == self.nbox


@dataclass(frozen=True)
class CoalitionFamily:
    """C-shaped rule family over a fixed agent set.  with_dia selects the
    variant with the coalition-diamond slot and grand-coalition slots."""

    fid: str
    agents: int
    with_dia: bool

    def schema_id(self, n: int, m: int) -> str:
        return f"C_{n}_{m}" if self.with_dia else f"C'_{n}"


RuleFamily = Union[KripkeStyleFamily, CoalitionFamily]


def rule_set(sig: Signature) -> list[RuleFamily]:
    """The rule families of a signature."""
    if not sig.has_rules:
        raise SignatureError(f"no rule set for logic {sig.id}")
    if sig.kind == GAME:
        return [CoalitionFamily("C", sig.agents, True),
                CoalitionFamily("C'", sig.agents, False)]
    fams: list[RuleFamily] = []
    for rel in range(sig.relations):
        box, dia = Mod.box(rel), Mod.dia(rel)
        if sig.id in ("m", "ms"):
            fams.append(KripkeStyleFamily("K_1", box, dia, 1))
            if sig.serial:
                fams.append(KripkeStyleFamily("K_0", box, dia, 0))
                fams.append(KripkeStyleFamily("D_1", box, None, 1))
        else:
            fams.append(KripkeStyleFamily("K", box, dia, None))
            if sig.serial:
                fams.append(KripkeStyleFamily("D", box, None, None))
    return fams


def _distinct_vars(lits) -> bool:
    vs = [v for _, v in lits]
    return len(set(vs)) == len(vs)


def _box_subsets(boxes: list[Lit], nbox: Optional[int], cap: int):
    if nbox is None:
        top = min(len(boxes), cap)
        for k in range(top + 1):
            yield from combinations(boxes, k)
    elif nbox <= min(len(boxes), cap):
        yield from combinations(boxes, nbox)


def _kripke_matches(fam: KripkeStyleFamily, lits: list[Lit], *,
                    injective: bool, cap: int,
                    drops: tuple[str, ...] = ()) -> Iterator[Match]:
    boxes = sorted((l for l in lits if l[0] == fam.box),
                   key=lambda l: l[1])
    dias = sorted((l for l in lits if fam.dia is not None
                   and l[0] == fam.dia), key=lambda l: l[1])

    def build(bs, d, dropped, kind):
        chosen = list(bs) + ([d] if d is not None else [])
        if injective and not _distinct_vars(chosen):
            return None
        nbox_total = len(bs) + (1 if dropped == "box" else 0)
        if not fam.arity_ok(nbox_total):
            return None
        slots = [(fam.box, f"a{i + 1}") for i in range(nbox_total)]
        if fam.dia is not None:
            slots.append((fam.dia, "b"))
        sigma = []
        i = 0
        for lit in bs:
            sigma.append((f"a{i + 1}", lit[1]))
            i += 1
        if dropped == "box":
            i += 1  # the dualized box slot stays unassigned
        if d is not None:
            sigma.append(("b", d[1]))
        rule = RuleInstance(fam.schema_id(nbox_total), tuple(slots),
                            tuple(s for _, s in slots))
        return Match(rule, tuple(sigma), frozenset(chosen),
                     fam.box if dropped == "box" else
                     fam.dia if dropped == "dia" else None,
                     (fam.fid, kind),
                     frozenset(v for _, v in chosen))

    for bs in _box_subsets(boxes, fam.nbox, cap - (1 if fam.dia else 0)):
        if fam.dia is None:
            m = build(bs, None, None, "plain")
            if m:
                yield m
        else:
            for d in dias:
                m = build(bs, d, None, "plain")
                if m:
                    yield m
    if "dia" in drops and fam.dia is not None:
        for bs in _box_subsets(boxes, fam.nbox, cap):
            m = build(bs, None, "dia", "drop-dia")
            if m:
                yield m
    if "box" in drops and (fam.nbox is None or fam.nbox >= 1):
        sub = (KripkeStyleFamily(fam.fid, fam.box, fam.dia,
                                 None if fam.nbox is None else fam.nbox - 1))
        for bs in _box_subsets(boxes, sub.nbox, cap):
            if fam.dia is None:
                m = build(bs, None, "box", "drop-box")
                if m:
                    yield m
            else:
                for d in dias:
                    m = build(bs, d, "box", "drop-box")
                    if m:
                        yield m


def _disjoint(coals) -> bool:
    seen: set[int] = set()
    for c in coals:
        if seen & c:
            return False
        seen |= c
    return True


def _coalition_matches(fam: CoalitionFamily, lits: list[Lit], *,
                       injective: bool, cap: int,
                       drops: tuple[str, ...] = ()) -> Iterator[Match]:
    full = frozenset(range(1, fam.agents + 1))
    cboxes = sorted((l for l in lits if l[0].kind == "cbox"),
                    key=lambda l: (l[0].coal_key, l[1]))
    cdias = sorted((l for l in lits if l[0].kind == "cdia"),
                   key=lambda l: (l[0].coal_key, l[1]))
    ndias = [l for l in cdias if l[0].coal == full]

    def box_choices(limit):
        for k in range(min(len(cboxes), limit) + 1):
            for bs in combinations(cboxes, k):
                if _disjoint([l[0].coal for l in bs]):
                    yield bs

    def build(bs, d, ns, dropped, kind, extra_box_coal=None):
        chosen = list(bs) + ([d] if d is not None else []) + list(ns)
        if injective and not _distinct_vars(chosen):
            return None
        dcoal = d[0].coal if d is not None else full
        if any(not l[0].coal <= dcoal for l in bs):
            return None
        if extra_box_coal is not None and any(
                l[0].coal & extra_box_coal for l in bs):
            return None
        nbox = len(bs) + (1 if dropped == "cbox" else 0)
        ndia = len(ns) + (1 if dropped == "cdiaN" else 0)
        if not fam.with_dia and (d is not None or ndia or dropped in
                                 ("cdiaD", "cdiaN")):
            return None
        if not fam.with_dia and nbox < 1:
            return None
        slots: list[Lit] = [(l[0], f"a{i + 1}") for i, l in enumerate(bs)]
        sigma = [(f"a{i + 1}", l[1]) for i, l in enumerate(bs)]
        if dropped == "cbox":
            slots.append((Mod.cbox(extra_box_coal or frozenset()),
                          f"a{nbox}"))
        if fam.with_dia:
            slots.append((Mod.cdia(dcoal), "b"))
            if d is not None:
                sigma.append(("b", d[1]))
            for i, l in enumerate(ns):
                slots.append((Mod.cdia(full), f"c{i + 1}"))
                sigma.append((f"c{i + 1}", l[1]))
            if dropped == "cdiaN":
                slots.append((Mod.cdia(full), f"c{ndia}"))
        rid = fam.schema_id(nbox, ndia) if fam.with_dia else \
            fam.schema_id(nbox, 0)
        dropped_mod = None
        if dropped == "cbox":
            dropped_mod = Mod.cbox(extra_box_coal or frozenset())
        elif dropped == "cdiaD":
            dropped_mod = Mod.cdia(dcoal)
        elif dropped == "cdiaN":
            dropped_mod = Mod.cdia(full)
        rule = RuleInstance(rid, tuple(slots), tuple(s for _, s in slots))
        return Match(rule, tuple(sigma), frozenset(chosen), dropped_mod,
                     (fam.fid, kind),
                     frozenset(v for _, v in chosen))

    limit = cap
    if fam.with_dia:
        for bs in box_choices(limit):
            for d in cdias:
                rest = [l for l in ndias if l != d]
                for mk in range(min(len(rest), limit) + 1):
                    for ns in combinations(rest, mk):
                        m = build(bs, d, ns, None, "plain")
                        if m:
                            yield m
        if "cdiaD" in drops:
            for bs in box_choices(limit):
                for mk in range(min(len(ndias), limit) + 1):
                    for ns in combinations(ndias, mk):
                        m = build(bs, None, ns, "cdiaD", "drop-diaD")
                        if m:
                            yield m
        if "cdiaN" in drops:
            for bs in box_choices(limit):
                for d in cdias:
                    rest = [l for l in ndias if l != d]
                    for mk in range(min(len(rest), limit) + 1):
                        for ns in combinations(rest, mk):
                            m = build(bs, d, ns, "cdiaN", "drop-diaN")
                            if m:
                                yield m
        if "cbox" in drops:
            for bs in box_choices(limit):
                for d in cdias:
                    rest = [l for l in ndias if l != d]
                    for mk in range(min(len(rest), limit) + 1):
                        for ns in combinations(rest, mk):
                            m = build(bs, d, ns, "cbox", "drop-box",
                                      extra_box_coal=frozenset())
                            if m:
                                yield m
    else:
        for bs in box_choices(limit):
            if len(bs) >= 1:
                m = build(bs, None, (), None, "plain")
                if m:
                    yield m
        if "cbox" in drops:
            for bs in box_choices(limit):
                m = build(bs, None, (), "cbox", "drop-box",
                          extra_box_coal=frozenset())
                if m:
                    yield m


def _family_matches(fam: RuleFamily, lits: list[Lit], *, injective: bool,
                    cap: int, drops: tuple[str, ...] = ()) -> Iterator[Match]:
    if isinstance(fam, KripkeStyleFamily):
        yield from _kripke_matches(fam, lits, injective=injective, cap=cap,
                                   drops=drops)
    else:
        yield from _coalition_matches(fam, lits, injective=injective,
                                      cap=cap, drops=drops)


def _sort_key(m: Match):
    return (m.rule.schema_id, m.mode[1], m.sigma,
            tuple(sorted(str(x) for x in m.matched)))


def match_rules(lits, sig: Signature, max_size: Optional[int] = None,
                injective: bool = True) -> list[Match]:
    """All rule instances and renamings whose premise image lies inside
    the literal set.  max_size caps the instantiated premise size; the
    default (the literal count) is exhaustive, since a premise image
    can never contain more literals than the set provides."""
    lits = sorted(set(lits), key=lambda l: (str(l[0]), l[1]))
    cap = len(lits) if max_size is None else max_size
    out: list[Match] = []
    for fam in rule_set(sig):
        out.extend(_family_matches(fam, lits, injective=injective, cap=cap))
    out.sort(key=_sort_key)
    return out


def construction_matches(lits, sig: Signature, *, injective: bool = True,
                         maximal: Optional[bool] = None) -> list[Match]:
    """Matches feeding the one-step model construction: plain matches
    plus matches that dualize away one premise slot whose operator has
    its dual in the signature.  With maximal (the default for
    relational and monotone signatures), only inclusion-maximal matched
    sets per (family, dualized slot) mode are kept."""
    lits = sorted(set(lits), key=lambda l: (str(l[0]), l[1]))
    cap = len(lits) + 1
    if maximal is None:
        maximal = sig.kind != GAME
    out: list[Match] = []
    for fam in rule_set(sig):
        if isinstance(fam, KripkeStyleFamily):
            drops = []
            if fam.dia is not None and sig.allows(fam.dia.dual()):
                drops.append("dia")
            if sig.allows(fam.box.dual()):
                drops.append("box")
            ms = list(_family_matches(fam, lits, injective=injective,
                                      cap=cap, drops=tuple(drops)))
        else:
            ms = list(_family_matches(fam, lits, injective=injective,
                                      cap=cap,
                                      drops=("cdiaD", "cdiaN", "cbox")))
        if maximal:
            ms = _keep_maximal(ms)
        out.extend(ms)
    out.sort(key=_sort_key)
    return out


def _keep_maximal(matches: list[Match]) -> list[Match]:
    by_mode: dict[tuple, list[Match]] = {}
    for m in matches:
        by_mode.setdefault(m.mode, []).append(m)
    out = []
    for ms in by_mode.values():
        for m in ms:
            if not any(m.matched < other.matched for other in ms):
                out.append(m)
    return out


# ---------------------------------------------------------------------------
# conjunctive one-step consequence


def one_step_consequence(psi: OneStepFormula, heart: Mod,
                         rho: Union[Formula, Antichain],
                         sig: Signature, injective: bool = True) -> bool:
    """Does the conjunctive one-step formula entail the literal built
    from heart and the positive argument rho?

    Following the tableau reading, the query holds exactly if the
    literal set consisting of psi plus the dualized literal carrying the
    negated argument admits a rule match whose conclusion is
    propositionally unsatisfiable.  Conclusions are variables plus at
    most the negated argument, so unsatisfiability amounts to the
    assignment making exactly the conclusion variables true satisfying
    rho (rho is positive, so larger assignments only help).
    """
    if not sig.has_rules:
        raise SignatureError(f"no rule-based solver for logic {sig.id}")
    if not sig.allows(heart):
        raise SignatureError(f"operator {heart} not in logic {sig.id}")
    sat = (lambda m: antichain_sat(rho, m)) if isinstance(rho, frozenset) \
        else (lambda m: eval_posprop(rho, m))
    lits = list(psi.modal) + [(heart.dual(), PAYLOAD)]
    for match in match_rules(lits, sig, injective=injective):
        if PAYLOAD not in match.state_vars:
            continue
        positive = frozenset(v for v in match.state_vars if v != PAYLOAD)
        if sat(positive):
            if log.isEnabledFor(logging.DEBUG):
                log.debug("consequence witness: %s", match.describe())
            return True
    return False


# ---------------------------------------------------------------------------
# convexity preservation


@dataclass(frozen=True)
class ConvexityCounterexample:
    rule: RuleInstance
    kept_vars: tuple[str, ...]
    missing: RuleInstance

    def __str__(self) -> str:
        gone = [v for v in self.rule.conclusion if v not in self.kept_vars]
        prem = ", ".join(f"{m}{v}" for m, v in self.missing.premise)
        concl = ", ".join(self.missing.conclusion)
        return (f"deleting {', '.join(gone)} from {self.rule.schema_id} "
                f"yields {self.missing.schema_id} ({prem} / {concl}), "
                "which is not in the rule set")


def _instances_upto(sig: Signature, bound: int) -> Iterator[RuleInstance]:
    """All rule instances with premise size <= bound, over canonical slot
    variables v1, v2, ..."""
    def kname(i):
        return f"v{i + 1}"

    for fam in rule_set(sig):
        if isinstance(fam, KripkeStyleFamily):
            has_dia = fam.dia is not None
            ns = [fam.nbox] if fam.nbox is not None else \
                range(0, bound + 1 - (1 if has_dia else 0))
            for n in ns:
                if n + (1 if has_dia else 0) > bound:
                    continue
                prem = [(fam.box, kname(i)) for i in range(n)]
                if has_dia:
                    prem.append((fam.dia, kname(n)))
                yield RuleInstance(fam.schema_id(n), tuple(prem),
                                   tuple(v for _, v in prem))
        else:
            yield from _coalition_instances(fam, bound, kname)


def _disjoint_families(coals, size: int):
    """Ordered tuples of pairwise disjoint coalitions (repeats of the
    empty coalition allowed), nondecreasing in the canonical order."""
    def rec(start, used, left):
        yield ()
        if left == 0:
            return
        for i in range(start, len(coals)):
            c = coals[i]
            if used & c:
                continue
            nxt = i if not c else i + 1  # only the empty coalition repeats
            for rest in rec(nxt, used | c, left - 1):
                yield (c,) + rest
    yield from rec(0, frozenset(), size)


def _coalition_instances(fam: CoalitionFamily, bound: int, kname):
    from .signatures import all_coalitions
    coals = all_coalitions(fam.agents)
    full = frozenset(range(1, fam.agents + 1))
    for boxes in _disjoint_families(coals, bound):
        n = len(boxes)
        if not fam.with_dia:
            if 1 <= n <= bound:
                prem = [(Mod.cbox(c), kname(i)) for i, c in enumerate(boxes)]
                yield RuleInstance(fam.schema_id(n, 0), tuple(prem),
                                   tuple(v for _, v in prem))
            continue
        union = frozenset().union(*boxes) if boxes else frozenset()
        for d in coals:
            if not union <= d:
                continue
            for m in range(0, bound - n):
                if n + 1 + m > bound:
                    continue
                prem = [(Mod.cbox(c), kname(i)) for i, c in enumerate(boxes)]
                prem.append((Mod.cdia(d), kname(n)))
                prem += [(Mod.cdia(full), kname(n + 1 + i)) for i in range(m)]
                yield RuleInstance(fam.schema_id(n, m), tuple(prem),
                                   tuple(v for _, v in prem))


def is_rule(premise, conclusion, sig: Signature) -> bool:
    """Membership of a definite rule shape in the signature's rule set."""
    premise = list(premise)
    if set(conclusion) != {v for _, v in premise}:
        return False
    if sig.kind == GAME:
        full = frozenset(range(1, sig.agents + 1))
        cboxes = [l for l in premise if l[0].kind == "cbox"]
        cdias = [l for l in premise if l[0].kind == "cdia"]
        if len(cboxes) + len(cdias) != len(premise):
            return False
        if not _disjoint([l[0].coal for l in cboxes]):
            return False
        if not cdias:
            return len(cboxes) >= 1
        for i, d in enumerate(cdias):
            others = cdias[:i] + cdias[i + 1:]
            if all(l[0].coal == full for l in others) and \
                    all(l[0].coal <= d[0].coal for l in cboxes):
                return True
        return False
    for fam in rule_set(sig):
        if not isinstance(fam, KripkeStyleFamily):
            continue
        boxes = [l for l in premise if l[0] == fam.box]
        dias = [l for l in premise if fam.dia is not None and l[0] == fam.dia]
        if len(boxes) + len(dias) != len(premise):
            continue
        want_dias = 1 if fam.dia is not None else 0
        if len(dias) != want_dias:
            continue
        if fam.nbox is not None and len(boxes) != fam.nbox:
            continue
        return True
    return False


def check_convexity_preservation(
        sig: Signature, bound: int = 6
) -> Optional[ConvexityCounterexample]:
    """Check the rule-set closure condition that guarantees one-step
    model constructions exist: every way of peeling dualized literals
    off a rule must again be a rule.  For signatures closed under duals
    this is equivalent to stability under deleting occurrences of
    variables.  Returns None when the condition holds for all instances
    up to the premise-size bound, else the first counterexample."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    for inst in _instances_upto(sig, bound):
        vs = list(inst.conclusion)
        if sig.dual_closed:
            candidates = _nonempty_proper_subsets(vs)
        else:
            candidates = _splitting_deletions(inst, sig)
        for kept in candidates:
            kept_set = set(kept)
            prem = tuple(l for l in inst.premise if l[1] in kept_set)
            concl = tuple(v for v in inst.conclusion if v in kept_set)
            if not is_rule(prem, concl, sig):
                missing = RuleInstance(_shape_name(prem), prem, concl)
                return ConvexityCounterexample(inst, tuple(kept), missing)
    return None


def _shape_name(premise) -> str:
    """Conventional name of a rule shape, for counterexample messages."""
    boxes = sum(1 for m, _ in premise if m.kind in ("box", "cbox"))
    dias = sum(1 for m, _ in premise if m.kind in ("dia", "cdia"))
    if any(m.kind in ("cbox", "cdia") for m, _ in premise):
        return f"C_{boxes}_{max(dias - 1, 0)}" if dias else f"C'_{boxes}"
    return f"K_{boxes}" if dias else f"D_{boxes}"


def _nonempty_proper_subsets(vs: list[str]):
    for k in range(1, len(vs)):
        yield from combinations(vs, k)


def _splitting_deletions(inst: RuleInstance, sig: Signature):
    """For signatures not closed under duals, the peeling condition only
    constrains dualized premise literals: each one must be re-addable to
    the positive part on its own.  Kept-variable sets are the positive
    variables plus one dualized variable at a time."""
    pos = [v for m, v in inst.premise if sig.allows(m)]
    dual = [v for m, v in inst.premise if not sig.allows(m)]
    for v in dual:
        yield tuple(pos) + (v,)
