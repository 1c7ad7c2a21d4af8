"""Positive modal fixpoint formulas: AST, text syntax, validation.

Grammar (UTF-8 text; modalities bind tightest, then "&", then "|"):

    phi   ::= "true" | "false" | ident | phi "&" phi | phi "|" phi
            | "<>" phi | "[]" phi | "<>_" nat phi | "[]_" nat phi
            | "[" coal "]" phi | "<" coal ">" phi
            | ("nu"|"mu") "(" ident ";" identlist ")" "." "(" phi [";" philist] ")"
    coal  ::= "{" natlist "}"

Identifiers occurring under a fixpoint binder refer to the bound
variable; all other identifiers are atomic propositions.  The signature
is always supplied externally and never inferred from the text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .signatures import GAME, MULTIGRAPH, Mod, Signature


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} (at position {pos})")
        self.pos = pos


class FragmentError(ValueError):
    pass


@dataclass(frozen=True)
class Top:
    def __str__(self):
        return print_formula(self)


@dataclass(frozen=True)
class Bot:
    def __str__(self):
        return print_formula(self)


@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self):
        return print_formula(self)


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return print_formula(self)


@dataclass(frozen=True)
class And:
    l: "Formula"
    r: "Formula"

    def __str__(self):
        return print_formula(self)


@dataclass(frozen=True)
class Or:
    l: "Formula"
    r: "Formula"

    def __str__(self):
        return print_formula(self)


@dataclass(frozen=True)
class Modal:
    mod: Mod
    arg: "Formula"

    def __str__(self):
        return print_formula(self)


@dataclass(frozen=True)
class Nu:
    head: str
    aux: tuple[str, ...]
    head_body: "Formula"
    aux_bodies: tuple["Formula", ...]

    def __post_init__(self):
        names = (self.head,) + self.aux
        if len(set(names)) != len(names):
            raise FragmentError(f"bound variables must be distinct: {names}")
        if len(self.aux) != len(self.aux_bodies):
            raise FragmentError("one body per bound variable required")

    def __str__(self):
        return print_formula(self)


@dataclass(frozen=True)
class Mu:
    head: str
    aux: tuple[str, ...]
    head_body: "Formula"
    aux_bodies: tuple["Formula", ...]

    def __post_init__(self):
        names = (self.head,) + self.aux
        if len(set(names)) != len(names):
            raise FragmentError(f"bound variables must be distinct: {names}")
        if len(self.aux) != len(self.aux_bodies):
            raise FragmentError("one body per bound variable required")

    def __str__(self):
        return print_formula(self)


Formula = Union[Top, Bot, Atom, Var, And, Or, Modal, Nu, Mu]

TOP = Top()
BOT = Bot()


def conj(parts) -> Formula:
    """Left-associated conjunction of parts; empty conjunction is true."""
    parts = list(parts)
    if not parts:
        return TOP
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def conjuncts(f: Formula) -> Iterator[Formula]:
    """Flatten nested conjunctions."""
    if isinstance(f, And):
        yield from conjuncts(f.l)
        yield from conjuncts(f.r)
    elif not isinstance(f, Top):
        yield f


def children(f: Formula) -> list[tuple[str, Formula]]:
    if isinstance(f, (And, Or)):
        return [(".l", f.l), (".r", f.r)]
    if isinstance(f, Modal):
        return [(".arg", f.arg)]
    if isinstance(f, (Nu, Mu)):
        out = [(".body", f.head_body)]
        out += [(f".aux[{i}]", b) for i, b in enumerate(f.aux_bodies)]
        return out
    return []


def walk(f: Formula, path: str = "") -> Iterator[tuple[str, Formula]]:
    yield path, f
    for step, child in children(f):
        yield from walk(child, path + step)


def atoms(f: Formula) -> set[str]:
    return {g.name for _, g in walk(f) if isinstance(g, Atom)}


def modal_depth(f: Formula) -> int:
    if isinstance(f, Modal):
        return 1 + modal_depth(f.arg)
    ds = [modal_depth(c) for _, c in children(f)]
    return max(ds, default=0)


def has_fixpoints(f: Formula) -> bool:
    return any(isinstance(g, (Nu, Mu)) for _, g in walk(f))


def free_fixpoint_vars(f: Formula, bound: frozenset[str] = frozenset()) -> set[str]:
    if isinstance(f, Var):
        return set() if f.name in bound else {f.name}
    if isinstance(f, (Nu, Mu)):
        inner = bound | {f.head, *f.aux}
        out = free_fixpoint_vars(f.head_body, inner)
        for b in f.aux_bodies:
            out |= free_fixpoint_vars(b, inner)
        return out
    out: set[str] = set()
    for _, c in children(f):
        out |= free_fixpoint_vars(c, bound)
    return out


def is_sentence(f: Formula) -> bool:
    return not free_fixpoint_vars(f)


def validate_conjunctive(f: Formula) -> list[tuple[str, str]]:
    """Conjunctive fragment check: no falsum, no disjunction, no least
    fixpoints.  Returns the list of violations as (node path, reason);
    an empty list means the formula is conjunctive."""
    out = []
    for path, g in walk(f):
        if isinstance(g, Bot):
            out.append((path or ".", "falsum"))
        elif isinstance(g, Or):
            out.append((path or ".", "disjunction"))
        elif isinstance(g, Mu):
            out.append((path or ".", "least fixpoint"))
    return out


def validate_for_signature(f: Formula, sig: Signature) -> None:
    for path, g in walk(f):
        if isinstance(g, Modal) and not sig.allows(g.mod):
            raise FragmentError(
                f"operator {g.mod} not available in logic {sig.id}"
                f" (at {path or '.'})")


def require_conjunctive_nu(f: Formula, sig: Signature) -> None:
    """Entry check for the model-construction pipeline: a conjunctive
    sentence (greatest fixpoints only) over the signature."""
    bad = validate_conjunctive(f)
    if bad:
        raise FragmentError(
            "not in the conjunctive fragment: "
            + "; ".join(f"{r} at {p}" for p, r in bad))
    if not is_sentence(f):
        raise FragmentError(
            f"free fixpoint variables: {sorted(free_fixpoint_vars(f))}")
    validate_for_signature(f, sig)


def require_positive_query(f: Formula, sig: Signature) -> None:
    """Query formulas may use disjunction, falsum and least fixpoints,
    but must be closed and well-formed for the signature."""
    if not is_sentence(f):
        raise FragmentError(
            f"free fixpoint variables: {sorted(free_fixpoint_vars(f))}")
    validate_for_signature(f, sig)


# ---------------------------------------------------------------------------
# tokenizer / parser


_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<gdia><>_\d+)
  | (?P<gbox>\[\]_\d+)
  | (?P<dia><>)
  | (?P<box>\[\])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<nat>\d+)
  | (?P<sym>[]&|(){}.;,<>[])
""", re.VERBOSE)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            val = m.group()
            if kind == "ident" and val in ("true", "false", "nu", "mu"):
                kind = val
            toks.append((kind, val, pos))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, sig: Signature):
        self.toks = _tokenize(text)
        self.i = 0
        self.sig = sig
        self.scope: list[str] = []

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind: str, what: str = ""):
        k, v, p = self.next()
        if k != kind and v != kind:
            raise ParseError(f"expected {what or kind}, got {v or 'end of input'}", p)
        return v, p

    def parse(self) -> Formula:
        f = self.parse_or()
        k, v, p = self.peek()
        if k != "eof":
            raise ParseError(f"trailing input {v!r}", p)
        return f

    def parse_or(self) -> Formula:
        f = self.parse_and()
        while self.peek()[1] == "|":
            self.next()
            f = Or(f, self.parse_and())
        return f

    def parse_and(self) -> Formula:
        f = self.parse_unary()
        while self.peek()[1] == "&":
            self.next()
            f = And(f, self.parse_unary())
        return f

    def _check_mod(self, mod: Mod, pos: int) -> Mod:
        if mod.kind in ("cbox", "cdia"):
            if self.sig.agents is None:
                raise ParseError(
                    f"coalition operator {mod} not available in logic "
                    f"{self.sig.id}", pos)
            bad = [a for a in mod.coal if not 1 <= a <= self.sig.agents]
            if bad:
                raise ParseError(
                    f"agent {bad[0]} out of range for {self.sig.id}", pos)
        elif not self.sig.allows(mod):
            raise ParseError(
                f"operator {mod} not available in logic {self.sig.id}", pos)
        return mod

    def parse_unary(self) -> Formula:
        k, v, p = self.peek()
        if k == "dia":
            self.next()
            return Modal(self._check_mod(Mod.dia(), p), self.parse_unary())
        if k == "box":
            self.next()
            return Modal(self._check_mod(Mod.box(), p), self.parse_unary())
        if k == "gdia":
            self.next()
            return Modal(self._check_mod(Mod.gdia(int(v[3:])), p),
                         self.parse_unary())
        if k == "gbox":
            self.next()
            return Modal(self._check_mod(Mod.gbox(int(v[3:])), p),
                         self.parse_unary())
        if v == "[":
            self.next()
            coal = self.parse_coalition()
            self.expect("]")
            return Modal(self._check_mod(Mod.cbox(coal), p), self.parse_unary())
        if v == "<":
            self.next()
            coal = self.parse_coalition()
            self.expect(">")
            return Modal(self._check_mod(Mod.cdia(coal), p), self.parse_unary())
        return self.parse_primary()

    def parse_coalition(self) -> frozenset[int]:
        self.expect("{")
        agents = []
        if self.peek()[1] != "}":
            while True:
                v, p = self.expect("nat", "agent number")
                agents.append(int(v))
                if self.peek()[1] == ",":
                    self.next()
                else:
                    break
        self.expect("}")
        return frozenset(agents)

    def parse_primary(self) -> Formula:
        k, v, p = self.next()
        if k == "true":
            return TOP
        if k == "false":
            return BOT
        if k == "ident":
            if v in self.scope:
                return Var(v)
            return Atom(v)
        if k in ("nu", "mu"):
            return self.parse_fixpoint(k)
        if v == "(":
            f = self.parse_or()
            self.expect(")")
            return f
        raise ParseError(f"unexpected {v or 'end of input'!r}", p)

    def parse_fixpoint(self, kind: str) -> Formula:
        self.expect("(")
        head, hp = self.expect("ident", "fixpoint variable")
        self.expect(";")
        aux = []
        if self.peek()[1] != ")":
            while True:
                v, _ = self.expect("ident", "fixpoint variable")
                aux.append(v)
                if self.peek()[1] == ",":
                    self.next()
                else:
                    break
        self.expect(")")
        names = [head] + aux
        if len(set(names)) != len(names):
            raise ParseError(f"bound variables must be distinct: {names}", hp)
        self.expect(".")
        self.expect("(")
        self.scope.extend(names)
        head_body = self.parse_or()
        bodies = []
        if self.peek()[1] == ";":
            self.next()
            if self.peek()[1] != ")":
                while True:
                    bodies.append(self.parse_or())
                    if self.peek()[1] == ",":
                        self.next()
                    else:
                        break
        del self.scope[-len(names):]
        self.expect(")")
        if len(bodies) != len(aux):
            raise ParseError(
                f"{len(aux)} auxiliary variable(s) but {len(bodies)} "
                "auxiliary bodies", hp)
        cls = Nu if kind == "nu" else Mu
        return cls(head, tuple(aux), head_body, tuple(bodies))


def parse_formula(text: str, sig: Signature) -> Formula:
    """Parse a formula in the given logic; raises ParseError with a
    position on bad syntax or on operators the signature lacks."""
    return _Parser(text, sig).parse()


# ---------------------------------------------------------------------------
# printing

_LVL_OR, _LVL_AND, _LVL_UNARY = 1, 2, 3


def _print(f: Formula, level: int) -> str:
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bot):
        return "false"
    if isinstance(f, (Atom, Var)):
        return f.name
    if isinstance(f, Modal):
        m = str(f.mod)
        sep = " " if m[-1].isdigit() else ""
        return m + sep + _print(f.arg, _LVL_UNARY)
    if isinstance(f, And):
        s = _print(f.l, _LVL_AND) + " & " + _print(f.r, _LVL_AND + 1)
        return f"({s})" if level > _LVL_AND else s
    if isinstance(f, Or):
        s = _print(f.l, _LVL_OR) + " | " + _print(f.r, _LVL_OR + 1)
        return f"({s})" if level > _LVL_OR else s
    if isinstance(f, (Nu, Mu)):
        kw = "nu" if isinstance(f, Nu) else "mu"
        hdr = f"{kw}({f.head};{','.join(f.aux)})"
        if f.aux_bodies:
            inner = _print(f.head_body, _LVL_OR) + ";" + ",".join(
                _print(b, _LVL_OR) for b in f.aux_bodies)
        else:
            inner = _print(f.head_body, _LVL_OR)
        return f"{hdr}.({inner})"
    raise TypeError(f"not a formula: {f!r}")


def print_formula(f: Formula) -> str:
    """Canonical text form; parse_formula(print_formula(f), sig) == f."""
    return _print(f, _LVL_OR)


def default_signature_hint(f: Formula) -> Optional[str]:
    """Best-effort hint for error messages only; signatures are always
    chosen by the caller."""
    kinds = {g.mod.kind for _, g in walk(f) if isinstance(g, Modal)}
    if kinds & {"cbox", "cdia"}:
        return GAME
    if kinds & {"gdia", "gbox"}:
        return MULTIGRAPH
    return None
