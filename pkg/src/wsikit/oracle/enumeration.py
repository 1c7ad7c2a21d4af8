"""Bounded exhaustive model enumeration and counter-model search.

Enumeration is deterministic: states carry (transition structure,
proposition subset) options in a fixed order and models are the lexical
product over states.  Counter-model search visits models in enumeration
order and returns the first pointed hit, so results are reproducible.

For fixpoint-free queries the search only varies transition structure
on states reachable from the root within the formulas' modal depth;
deeper structure cannot affect satisfaction at the root, so the
restricted sweep refutes or confirms exactly as the full one does.
"""

from __future__ import annotations

from itertools import product
from typing import Iterator, Optional

from ..formulas import Formula, atoms, has_fixpoints, modal_depth
from ..signatures import (GAME, KRIPKE, MONOTONE, MULTIGRAPH, Signature)
from .models import (ExplicitCoalgebra, GameFrame, KripkeModel,
                     MonotoneModel, Multigraph, bits)
from .semantics import ext_of

ENVELOPE_STATES = {KRIPKE: 4, MULTIGRAPH: 3, MONOTONE: 3, GAME: 2}
ENVELOPE_MULT = 3
ENVELOPE_ACTIONS = 2
ENVELOPE_AGENTS = 2


class BoundsError(ValueError):
    pass


def _check_envelope(sig: Signature, max_states: int,
                    max_degree: Optional[int]) -> int:
    cap = ENVELOPE_STATES[sig.kind]
    if max_states > cap:
        raise BoundsError(
            f"{max_states} states exceeds the {sig.kind} envelope ({cap})")
    if sig.kind == MULTIGRAPH and (max_degree or ENVELOPE_MULT) > ENVELOPE_MULT:
        raise BoundsError("multiplicity bound exceeds the envelope "
                          f"({ENVELOPE_MULT})")
    if sig.kind == GAME:
        if sig.agents > ENVELOPE_AGENTS:
            raise BoundsError(
                f"game enumeration supports at most {ENVELOPE_AGENTS} agents")
        if (max_degree or ENVELOPE_ACTIONS) > ENVELOPE_ACTIONS:
            raise BoundsError("action bound exceeds the envelope "
                              f"({ENVELOPE_ACTIONS})")
    return max_states


def _antichains(n: int) -> list[tuple[int, ...]]:
    subsets = list(range(1 << n))
    out: list[tuple[int, ...]] = []

    def rec(start: int, chosen: tuple[int, ...]):
        out.append(chosen)
        for s in subsets[start:]:
            if all(not (s & ~t == 0 or t & ~s == 0) for t in chosen):
                rec(s + 1, chosen + (s,))

    rec(0, ())
    return sorted(out)


def _local_options(sig: Signature, n: int,
                   max_degree: Optional[int]) -> list:
    """Transition-structure options for one state."""
    if sig.kind == KRIPKE:
        lo = 1 if sig.serial else 0
        opts = [s for s in range(lo, 1 << n)
                if max_degree is None or bin(s).count("1") <= max_degree]
        return opts
    if sig.kind == MULTIGRAPH:
        cap = ENVELOPE_MULT if max_degree is None else max_degree
        return [row for row in product(range(cap + 1), repeat=n)]
    if sig.kind == MONOTONE:
        chains = _antichains(n)
        if sig.serial:
            chains = [c for c in chains if c and all(m != 0 for m in c)]
        return chains
    if sig.kind == GAME:
        acts_cap = ENVELOPE_ACTIONS if max_degree is None else max_degree
        opts = []
        for counts in product(range(1, acts_cap + 1), repeat=sig.agents):
            size = 1
            for k in counts:
                size *= k
            for outcome in product(range(n), repeat=size):
                opts.append((counts, outcome))
        return opts
    raise BoundsError(f"no enumeration for {sig.kind}")


def _default_local(sig: Signature, n: int, self_index: int):
    """Structure for states the depth-restricted sweep never reaches;
    serial classes need a serial default."""
    if sig.kind == KRIPKE:
        return (1 << self_index) if sig.serial else 0
    if sig.kind == MULTIGRAPH:
        return tuple(0 for _ in range(n))
    if sig.kind == MONOTONE:
        return ((1 << self_index),) if sig.serial else ()
    if sig.kind == GAME:
        return ((1,) * sig.agents, (self_index,))
    raise BoundsError(f"no enumeration for {sig.kind}")


def _targets(sig: Signature, local) -> int:
    """Mask of states reachable in one step from a local structure."""
    if sig.kind == KRIPKE:
        return local
    if sig.kind == MULTIGRAPH:
        return sum(1 << j for j, w in enumerate(local) if w)
    if sig.kind == MONOTONE:
        out = 0
        for s in local:
            out |= s
        return out
    if sig.kind == GAME:
        out = 0
        for t in local[1]:
            out |= 1 << t
        return out
    raise BoundsError(f"no enumeration for {sig.kind}")


def _assemble(sig: Signature, n: int, locals_: tuple, props: tuple[str, ...],
              prop_choice: tuple[int, ...]) -> ExplicitCoalgebra:
    val = tuple(sum(1 << i for i in range(n) if prop_choice[i] >> k & 1)
                for k in range(len(props)))
    if sig.kind == KRIPKE:
        return KripkeModel(n, locals_, props, val)
    if sig.kind == MULTIGRAPH:
        return Multigraph(n, tuple(tuple(float(w) for w in row)
                                   for row in locals_), props, val)
    if sig.kind == MONOTONE:
        return MonotoneModel(n, locals_, props, val)
    if sig.kind == GAME:
        return GameFrame(n, sig.agents,
                         tuple(l[0] for l in locals_),
                         tuple(l[1] for l in locals_), props, val)
    raise BoundsError(f"no enumeration for {sig.kind}")


def enumerate_models(sig: Signature, max_states: int,
                     props: tuple[str, ...] = (),
                     max_degree: Optional[int] = None
                     ) -> Iterator[ExplicitCoalgebra]:
    """All models with 1..max_states states over the given propositions,
    duplicate-free for the fixed state labelling, in a deterministic
    order.  Refuses bounds beyond the documented envelope."""
    _check_envelope(sig, max_states, max_degree)
    props = tuple(props)
    nprops = len(props)
    for n in range(1, max_states + 1):
        opts = _local_options(sig, n, max_degree)
        for locals_ in product(opts, repeat=n):
            for prop_choice in product(range(1 << nprops), repeat=n):
                yield _assemble(sig, n, locals_, props, prop_choice)


def _layered_structures(sig: Signature, n: int, depth: int,
                        opts: list, max_degree: Optional[int]
                        ) -> Iterator[tuple]:
    """Transition assignments that vary only on states within the given
    depth from state 0; everything else keeps the default structure."""
    locals_ = [_default_local(sig, n, i) for i in range(n)]

    def rec(frontier: list[int], assigned: frozenset[int], left: int):
        if not frontier or left == 0:
            yield tuple(locals_)
            return
        slots = list(frontier)

        def fill(idx: int):
            if idx == len(slots):
                reached = 0
                for s in slots:
                    reached |= _targets(sig, locals_[s])
                done = assigned | set(slots)
                nxt = [j for j in bits(reached) if j not in done]
                yield from rec(nxt, frozenset(done), left - 1)
                return
            for opt in opts:
                locals_[slots[idx]] = opt
                yield from fill(idx + 1)
            locals_[slots[idx]] = _default_local(sig, n, slots[idx])

        yield from fill(0)

    yield from rec([0], frozenset(), depth)


def find_counter_model(phi: Formula, psi: Formula, sig: Signature,
                       max_states: int, props: Optional[tuple] = None,
                       max_degree: Optional[int] = None
                       ) -> Optional[tuple[ExplicitCoalgebra, int]]:
    """First pointed model satisfying phi but not psi, or None within
    bounds.  None is a bound-limited confirmation, not a proof."""
    _check_envelope(sig, max_states, max_degree)
    if props is None:
        props = tuple(sorted(atoms(phi) | atoms(psi)))
    props = tuple(props)
    nprops = len(props)
    fixpoint_free = not (has_fixpoints(phi) or has_fixpoints(psi))
    if fixpoint_free:
        depth = max(modal_depth(phi), modal_depth(psi))
        for n in range(1, max_states + 1):
            opts = _local_options(sig, n, max_degree)
            for locals_ in _layered_structures(sig, n, depth, opts,
                                               max_degree):
                for prop_choice in product(range(1 << nprops), repeat=n):
                    m = _assemble(sig, n, locals_, props, prop_choice)
                    if ext_of(m, phi) & ~ext_of(m, psi) & 1:
                        return m, 0
        return None
    for m in enumerate_models(sig, max_states, props, max_degree):
        gap = ext_of(m, phi) & ~ext_of(m, psi)
        if gap:
            return m, next(iter(bits(gap)))
    return None
