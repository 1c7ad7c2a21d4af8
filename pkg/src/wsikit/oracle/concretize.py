"""Concrete transition structure for abstract models, and the two-sided
check that a built model really is simulation-initial.

Relational signatures: a state's successors are all states of its
one-step model (their images in the global state set); diamond-only
inputs thus get exactly the singleton states and serial inputs stay
serial because their one-step models are never empty.  Serial monotone
signatures: minimal neighbourhoods per state follow the one-step
construction's recorded families.  Coalition and graded signatures have
no concretizer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..builder import AbstractWsiModel, export_model
from ..formulas import Formula, atoms
from ..signatures import KRIPKE, MONOTONE, SignatureError
from .enumeration import enumerate_models
from .models import (ExplicitCoalgebra, KripkeModel, MonotoneModel, bits)
from .semantics import ext_of, sat_explicit
from .simulation import greatest_simulation


def concretize(m: AbstractWsiModel) -> ExplicitCoalgebra:
    """Explicit model on the abstract state set; the root is preserved
    (same index)."""
    if not m.canonical:
        raise ValueError("concretization needs a canonical model")
    sig = m.sig
    props = tuple(sorted({p for s in m.states for p in s.atoms}))
    val = tuple(sum(1 << i for i, s in enumerate(m.states) if p in s.atoms)
                for p in props)
    n = len(m.states)
    if sig.kind == KRIPKE:
        succ = tuple(sum(1 << j for j in s.successors) for s in m.states)
        if sig.serial:
            assert all(succ), "serial construction produced a deadlock"
        return KripkeModel(n, succ, props, val)
    if sig.kind == MONOTONE and sig.serial:
        index = m.state_index()
        fams = []
        for s in m.states:
            fam = []
            for nb in s.onestep.min_neighbourhoods or ():
                fam.append(sum(1 << index[b] for b in nb))
            fams.append(tuple(sorted(fam)))
        model = MonotoneModel(n, tuple(fams), props, val)
        assert model.is_serial(), \
            "serial construction produced an empty neighbourhood family"
        return model
    raise SignatureError(f"no concretization for logic {sig.id}")


def export_concrete(m: AbstractWsiModel) -> dict:
    """Model export extended with explicit successor structure."""
    out = export_model(m)
    cm = concretize(m)
    if isinstance(cm, KripkeModel):
        out["succ"] = [sorted(bits(s)) for s in cm.succ]
    else:
        out["succ"] = [[sorted(bits(nb)) for nb in fam] for fam in cm.nbhd]
    return out


@dataclass
class WsiReport:
    """Outcome of the initiality check at a bound."""

    root_satisfies: bool
    models_checked: int = 0
    violations: list = field(default_factory=list)
    violation_cap: int = 20

    @property
    def ok(self) -> bool:
        return self.root_satisfies and not self.violations

    def add_violation(self, model, state, satisfies, simulated):
        if len(self.violations) < self.violation_cap:
            self.violations.append({
                "model": model, "state": state,
                "satisfies": satisfies, "simulated": simulated,
            })

    def summary(self) -> str:
        if self.ok:
            return (f"clean: root satisfies the formula; satisfaction and "
                    f"simulation agree on all {self.models_checked} "
                    "enumerated pointed models")
        lines = []
        if not self.root_satisfies:
            lines.append("root does not satisfy the formula")
        for v in self.violations:
            lines.append(
                f"state {v['state']}: satisfies={v['satisfies']} but "
                f"simulated={v['simulated']}")
        return "violations found:\n" + "\n".join(lines)


def verify_wsi(m: AbstractWsiModel, phi: Formula, max_states: int,
               props: Optional[tuple[str, ...]] = None,
               max_degree: Optional[int] = None,
               concrete: Optional[ExplicitCoalgebra] = None) -> WsiReport:
    """Two-sided check against exhaustive enumeration: a pointed model
    satisfies the formula exactly if it simulates the concretized root."""
    sig = m.sig
    cm = concrete if concrete is not None else concretize(m)
    if props is None:
        props = tuple(sorted(atoms(phi)))
    report = WsiReport(root_satisfies=sat_explicit(cm, m.root, phi))
    for d in enumerate_models(sig, max_states, props, max_degree):
        sat_mask = ext_of(d, phi)
        sim = greatest_simulation(cm, d, sig)
        sim_mask = 0
        for x, y in sim.pairs:
            if x == m.root:
                sim_mask |= 1 << y
        report.models_checked += d.n
        if sat_mask != sim_mask:
            for y in range(d.n):
                sat = bool(sat_mask >> y & 1)
                simd = bool(sim_mask >> y & 1)
                if sat != simd:
                    report.add_violation(d, y, sat, simd)
    return report
