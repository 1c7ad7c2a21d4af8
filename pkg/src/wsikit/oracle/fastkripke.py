"""Vectorized sweeps over all Kripke models of a given size.

Every model with n states over p propositions is encoded in one 32-bit
index: n chunks of n bits for successor sets, then p chunks of n bits
for proposition extensions.  Formula evaluation runs batched over numpy
arrays of model indices, with per-model state-set extensions as packed
bitmask arrays.  Used where exhaustive confirmation over the four-state
envelope would be too slow state by state; agreement with the scalar
path is covered by tests.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from ..formulas import And, Atom, Bot, Formula, Modal, Mu, Nu, Or, Top, Var
from ..signatures import Signature
from .models import KripkeModel

_POP = np.array([bin(i).count("1") for i in range(1 << 16)],
                dtype=np.uint8)
_U = np.uint32


class _Batch:
    """One chunk of model indices, decoded lazily."""

    def __init__(self, n: int, props: tuple[str, ...], idx: np.ndarray,
                 serial: bool):
        self.n = n
        self.props = props
        self.full = (1 << n) - 1
        mask = _U(self.full)
        self.succ = [(idx >> _U(n * i)) & mask for i in range(n)]
        base = n * n
        self.val = {p: (idx >> _U(base + n * k)) & mask
                    for k, p in enumerate(props)}
        if serial:
            keep = np.ones(len(idx), dtype=bool)
            for s in self.succ:
                keep &= s != 0
            self.succ = [s[keep] for s in self.succ]
            self.val = {p: v[keep] for p, v in self.val.items()}
            self.idx = idx[keep]
        else:
            self.idx = idx

    def size(self) -> int:
        return len(self.idx)

    def model_at(self, pos: int) -> KripkeModel:
        succ = tuple(int(s[pos]) for s in self.succ)
        val = tuple(int(self.val[p][pos]) for p in self.props)
        return KripkeModel(self.n, succ, self.props, val)


def batches(n: int, props: tuple[str, ...], serial: bool,
            chunk_bits: int = 22):
    total_bits = n * n + n * len(props)
    if total_bits > 30:
        raise ValueError("sweep too large; reduce states or propositions")
    total = 1 << total_bits
    step = 1 << min(chunk_bits, total_bits)
    for lo in range(0, total, step):
        idx = np.arange(lo, min(lo + step, total), dtype=np.uint32)
        yield _Batch(n, props, idx, serial)


def eval_batch(b: _Batch, f: Formula,
               table: Optional[dict[str, np.ndarray]] = None,
               env: Optional[dict[str, np.ndarray]] = None) -> np.ndarray:
    """Extension bitmask array of the formula over the batch."""
    table = table or {}
    env = env or {}
    m = b.size()
    fullmask = _U(b.full)
    full = np.full(m, b.full, dtype=np.uint32)
    zero = np.zeros(m, dtype=np.uint32)

    def ev(f: Formula, env) -> np.ndarray:
        if isinstance(f, Top):
            return full
        if isinstance(f, Bot):
            return zero
        if isinstance(f, Atom):
            if f.name in table:
                return table[f.name]
            return b.val.get(f.name, zero)
        if isinstance(f, Var):
            return env[f.name]
        if isinstance(f, And):
            return ev(f.l, env) & ev(f.r, env)
        if isinstance(f, Or):
            return ev(f.l, env) | ev(f.r, env)
        if isinstance(f, Modal):
            e = ev(f.arg, env)
            out = np.zeros(m, dtype=np.uint32)
            kind, grade = f.mod.kind, f.mod.grade
            for i in range(b.n):
                s = b.succ[i]
                if kind == "dia":
                    hit = (s & e) != 0
                elif kind == "box":
                    hit = (s & ~e & fullmask) == 0
                elif kind == "gdia":
                    hit = _POP[s & e] > grade
                elif kind == "gbox":
                    hit = _POP[s & ~e & fullmask] <= grade
                else:
                    raise ValueError(f"operator {f.mod} not supported in "
                                     "the vectorized sweep")
                out |= hit.astype(np.uint32) << _U(i)
            return out
        if isinstance(f, (Nu, Mu)):
            names = (f.head,) + f.aux
            bodies = (f.head_body,) + f.aux_bodies
            start = full if isinstance(f, Nu) else zero
            cur = {x: start.copy() for x in names}
            while True:
                inner = dict(env)
                inner.update(cur)
                nxt = {x: ev(body, inner) for x, body in zip(names, bodies)}
                if all(np.array_equal(nxt[x], cur[x]) for x in names):
                    return cur[f.head]
                cur = nxt
        raise TypeError(f"not a formula: {f!r}")

    return ev(f, env)


def gfp_tables(b: _Batch, definitions) -> dict[str, np.ndarray]:
    """Batched greatest-fixpoint extensions of defined propositions."""
    full = np.full(b.size(), b.full, dtype=np.uint32)
    table = {name: full.copy() for name, _ in definitions}
    while True:
        nxt = {name: eval_batch(b, body, table)
               for name, body in definitions}
        if all(np.array_equal(nxt[k], table[k]) for k in table):
            return table
        table = nxt


def _first_hit(b: _Batch, gap: np.ndarray
               ) -> Optional[tuple[KripkeModel, int]]:
    hits = np.nonzero(gap)[0]
    if not len(hits):
        return None
    pos = int(hits[0])
    low = int(gap[pos]) & -int(gap[pos])
    return b.model_at(pos), low.bit_length() - 1


def tbox_counter_sweep(definitions, lhs: Formula, rhs: Formula,
                       sig: Signature, max_states: int,
                       props: tuple[str, ...]
                       ) -> Optional[tuple[KripkeModel, int]]:
    """First Kripke model (up to max_states) whose greatest-fixpoint
    extension of the definitions separates lhs from rhs, or None."""
    for n in range(1, max_states + 1):
        for b in batches(n, props, sig.serial):
            if not b.size():
                continue
            table = gfp_tables(b, definitions)
            gap = eval_batch(b, lhs, table) & \
                ~eval_batch(b, rhs, table) & _U(b.full)
            hit = _first_hit(b, gap)
            if hit:
                return hit
    return None


def counter_sweep(phi: Formula, psi: Formula, sig: Signature,
                  max_states: int, props: tuple[str, ...]
                  ) -> Optional[tuple[KripkeModel, int]]:
    """Vectorized variant of the pointed counter-model search for Kripke
    signatures; fixpoints allowed."""
    for n in range(1, max_states + 1):
        for b in batches(n, props, sig.serial):
            if not b.size():
                continue
            gap = eval_batch(b, phi) & ~eval_batch(b, psi) & _U(b.full)
            hit = _first_hit(b, gap)
            if hit:
                return hit
    return None


def agree_sweep(phi: Formula, psi: Formula, sig: Signature,
                max_states: int, props: tuple[str, ...]
                ) -> Optional[tuple[KripkeModel, int]]:
    """First model where the two formulas' extensions differ (either
    direction), or None: a bound-limited semantic equivalence check in a
    single pass."""
    for n in range(1, max_states + 1):
        for b in batches(n, props, sig.serial):
            if not b.size():
                continue
            gap = (eval_batch(b, phi) ^ eval_batch(b, psi)) & _U(b.full)
            hit = _first_hit(b, gap)
            if hit:
                return hit
    return None


def _eval_depth1_root(f: Formula, succ: int, full: int,
                      val: dict[str, np.ndarray],
                      zero: np.ndarray) -> np.ndarray:
    """Boolean array: does the root (state 0, successor set succ)
    satisfy the depth-one formula, per valuation combination."""

    def prop_mask(g: Formula) -> np.ndarray:
        if isinstance(g, Top):
            return np.full(len(zero), full, dtype=np.uint32)
        if isinstance(g, Bot):
            return zero
        if isinstance(g, Atom):
            return val.get(g.name, zero)
        if isinstance(g, And):
            return prop_mask(g.l) & prop_mask(g.r)
        if isinstance(g, Or):
            return prop_mask(g.l) | prop_mask(g.r)
        raise ValueError("argument must be propositional at depth one")

    def at_root(g: Formula) -> np.ndarray:
        if isinstance(g, Top):
            return np.ones(len(zero), dtype=bool)
        if isinstance(g, Bot):
            return np.zeros(len(zero), dtype=bool)
        if isinstance(g, Atom):
            return (val.get(g.name, zero) & 1).astype(bool)
        if isinstance(g, And):
            return at_root(g.l) & at_root(g.r)
        if isinstance(g, Or):
            return at_root(g.l) | at_root(g.r)
        if isinstance(g, Modal):
            e = prop_mask(g.arg)
            kind, grade = g.mod.kind, g.mod.grade
            if kind == "dia":
                return (succ & e) != 0
            if kind == "box":
                return (succ & ~e & _U(full)) == 0
            if kind == "gdia":
                return _POP[succ & e] > grade
            if kind == "gbox":
                return _POP[succ & ~e & _U(full)] <= grade
        raise ValueError("formula exceeds modal depth one")

    return at_root(f)


def depth1_counter_sweep(phi: Formula, psi: Formula, sig: Signature,
                         max_states: int, props: tuple[str, ...]
                         ) -> Optional[KripkeModel]:
    """Pointed counter-model search for modal-depth-one formulas over
    Kripke models: only the root's successor set and the valuations can
    matter, so the sweep runs over those and fixes all other transition
    structure (self-loops keep serial classes serial).  Exhaustive for
    the given state bound by the depth argument."""
    for n in range(1, max_states + 1):
        bits_needed = n * len(props)
        if bits_needed > 26:
            raise ValueError("sweep too large; reduce propositions")
        idx = np.arange(1 << bits_needed, dtype=np.uint32)
        full = (1 << n) - 1
        val = {p: (idx >> _U(n * k)) & _U(full)
               for k, p in enumerate(props)}
        zero = np.zeros(len(idx), dtype=np.uint32)
        lo = 1 if sig.serial else 0
        for succ in range(lo, 1 << n):
            gap = _eval_depth1_root(phi, succ, full, val, zero) & \
                ~_eval_depth1_root(psi, succ, full, val, zero)
            hits = np.nonzero(gap)[0]
            if len(hits):
                pos = int(hits[0])
                succs = (succ,) + tuple(
                    (1 << i) if sig.serial else 0 for i in range(1, n))
                return KripkeModel(
                    n, succs, props,
                    tuple(int(val[p][pos]) for p in props))
    return None
