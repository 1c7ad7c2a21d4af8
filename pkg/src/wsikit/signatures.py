"""Modalities and logic signatures.

A signature fixes the model class (Kripke, monotone neighbourhood,
multigraph, game frame), the available modal operators, and seriality.
Atomic propositions are treated as nullary operators throughout and are
available in every signature.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional


class SignatureError(ValueError):
    pass


# model classes
KRIPKE = "kripke"
MONOTONE = "monotone"
MULTIGRAPH = "multigraph"
GAME = "game"


@dataclass(frozen=True, order=True)
class Mod:
    """A unary modal operator.

    kind is one of "dia" / "box" (relational and monotone), "gdia" /
    "gbox" (graded, with a numeric grade), "cbox" / "cdia" (coalition
    operators, with a coalition of agent numbers).  rel distinguishes
    relations in fused multirelational signatures.
    """

    kind: str
    grade: Optional[int] = None
    coal: Optional[frozenset[int]] = field(default=None, compare=False)
    coal_key: tuple[int, ...] = ()
    rel: int = 0

    @staticmethod
    def dia(rel: int = 0) -> "Mod":
        return Mod("dia", rel=rel)

    @staticmethod
    def box(rel: int = 0) -> "Mod":
        return Mod("box", rel=rel)

    @staticmethod
    def gdia(k: int) -> "Mod":
        return Mod("gdia", grade=k)

    @staticmethod
    def gbox(k: int) -> "Mod":
        return Mod("gbox", grade=k)

    @staticmethod
    def cbox(coal) -> "Mod":
        c = frozenset(coal)
        return Mod("cbox", coal=c, coal_key=tuple(sorted(c)))

    @staticmethod
    def cdia(coal) -> "Mod":
        c = frozenset(coal)
        return Mod("cdia", coal=c, coal_key=tuple(sorted(c)))

    def dual(self) -> "Mod":
        flip = {"dia": "box", "box": "dia", "gdia": "gbox", "gbox": "gdia",
                "cbox": "cdia", "cdia": "cbox"}
        return Mod(flip[self.kind], grade=self.grade, coal=self.coal,
                   coal_key=self.coal_key, rel=self.rel)

    def __str__(self) -> str:
        sub = f"#{self.rel}" if self.rel else ""
        if self.kind == "dia":
            return "<>" + sub
        if self.kind == "box":
            return "[]" + sub
        if self.kind == "gdia":
            return f"<>_{self.grade}"
        if self.kind == "gbox":
            return f"[]_{self.grade}"
        inner = "{" + ",".join(str(a) for a in self.coal_key) + "}"
        return f"[{inner}]" if self.kind == "cbox" else f"<{inner}>"


@dataclass(frozen=True)
class Signature:
    """A concrete logic: model class plus available modal operators."""

    id: str
    kind: str
    serial: bool = False
    agents: Optional[int] = None
    # allowed unary operator kinds, one entry per relation
    allowed: tuple[frozenset[str], ...] = (frozenset(),)
    # dual of every allowed operator is again allowed
    dual_closed: bool = False
    # a rule-based solver is shipped for this signature
    has_rules: bool = True

    @property
    def relations(self) -> int:
        return len(self.allowed)

    def allows(self, mod: Mod) -> bool:
        if mod.kind in ("cbox", "cdia"):
            if self.agents is None or mod.coal is None:
                return False
            return all(1 <= a <= self.agents for a in mod.coal)
        if not 0 <= mod.rel < self.relations:
            return False
        return mod.kind in self.allowed[mod.rel]

    def modalities(self, grades: range = range(0, 4)) -> list[Mod]:
        """All unary operators of the signature, for oracle-side sweeps.

        Graded signatures have infinitely many operators; grades limits
        the enumeration.
        """
        out: list[Mod] = []
        for rel, kinds in enumerate(self.allowed):
            for kind in sorted(kinds):
                if kind in ("dia", "box"):
                    out.append(Mod(kind, rel=rel))
                elif kind in ("gdia", "gbox"):
                    out.extend(Mod(kind, grade=k) for k in grades)
        if self.agents is not None:
            coals = all_coalitions(self.agents)
            out.extend(Mod.cbox(c) for c in coals)
            out.extend(Mod.cdia(c) for c in coals)
        return out

    def __str__(self) -> str:
        return self.id


def all_coalitions(n: int) -> list[frozenset[int]]:
    agents = list(range(1, n + 1))
    out = []
    for mask in range(1 << n):
        out.append(frozenset(a for i, a in enumerate(agents) if mask >> i & 1))
    out.sort(key=lambda c: (len(c), tuple(sorted(c))))
    return out


def _kinds(*ks: str) -> tuple[frozenset[str], ...]:
    return (frozenset(ks),)


_FIXED: dict[str, Signature] = {
    "k-diamond": Signature("k-diamond", KRIPKE, allowed=_kinds("dia")),
    "k-box": Signature("k-box", KRIPKE, allowed=_kinds("box")),
    "k": Signature("k", KRIPKE, allowed=_kinds("dia", "box"),
                   dual_closed=True),
    "kd": Signature("kd", KRIPKE, serial=True,
                    allowed=_kinds("dia", "box"), dual_closed=True),
    "m": Signature("m", MONOTONE, allowed=_kinds("dia", "box"),
                   dual_closed=True),
    "ms": Signature("ms", MONOTONE, serial=True,
                    allowed=_kinds("dia", "box"), dual_closed=True),
    "graded": Signature("graded", MULTIGRAPH, allowed=_kinds("gdia", "gbox"),
                        dual_closed=True, has_rules=False),
}


def signature(spec: str) -> Signature:
    """Look up a signature by its textual id, e.g. "kd" or "cl:2"."""
    spec = spec.strip()
    if spec in _FIXED:
        return _FIXED[spec]
    if spec.startswith("cl:"):
        try:
            n = int(spec[3:])
        except ValueError:
            raise SignatureError(f"bad agent count in {spec!r}")
        if n < 1:
            raise SignatureError("cl:N needs at least one agent")
        return Signature(f"cl:{n}", GAME, agents=n, dual_closed=True)
    raise SignatureError(
        f"unknown logic {spec!r} (expected one of "
        "k-diamond, k-box, k, kd, m, ms, cl:N, graded)")


def fused_kripke(diamond_rels: int, box_rels: int) -> Signature:
    """Multirelational Kripke signature: diamond-only relations followed
    by box-only relations.  Used in fusion tests; not exposed on the CLI."""
    allowed = tuple([frozenset({"dia"})] * diamond_rels
                    + [frozenset({"box"})] * box_rels)
    return Signature(
        id=f"fused:{diamond_rels}d{box_rels}b",
        kind=KRIPKE,
        allowed=allowed,
    )
