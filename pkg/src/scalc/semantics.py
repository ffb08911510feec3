"""Relational denotations of statements over a finite state space.

A statement denotes a relation S between initial and final states.  The
representation keeps, for every initial state index, a bitmask over final
state indices.  Key conventions:

* An assignment whose right-hand side is UNDEFINED (64-bit overflow) or
  falls outside the target variable's domain contributes *no* pair for that
  initial state.  Absence of successors is how abortion shows up.
* A declaration is havoc: every value of the variable's domain is a
  successor, everything else unchanged.
* A loop relates x to y when some finite guarded chain of body steps leads
  from x to y with the guard false at y; a state that falsifies the guard
  immediately relates to itself (zero iterations).  States from which no
  such chain exists (divergence) get no successors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .errors import SpaceMismatchError
from .predicates import ArithExpr, PredExpr, PredSet, UNDEFINED, eval_arith, pred_to_set
from .state_space import StateSpace, index_to_state, state_to_index
from .syntax import (
    Assign,
    Decl,
    IfThen,
    IfThenElse,
    Nop,
    Seq,
    Stmt,
    While,
)


@dataclass(frozen=True)
class Relation:
    """A binary relation on state indices: succ[i] is a bitmask of finals."""

    space: StateSpace
    succ: tuple[int, ...]

    def __post_init__(self):
        if len(self.succ) != self.space.size:
            raise ValueError("successor table length differs from space size")
        full = (1 << self.space.size) - 1
        for m in self.succ:
            if m & ~full:
                raise ValueError("successor mask has bits outside the space")

    def has_pair(self, i: int, j: int) -> bool:
        return bool(self.succ[i] >> j & 1)

    def successors_mask(self, i: int) -> int:
        return self.succ[i]

    def pairs(self) -> Iterator[tuple[int, int]]:
        """All (initial, final) pairs, ordered by initial then final index."""
        for i, m in enumerate(self.succ):
            while m:
                low = m & -m
                yield i, low.bit_length() - 1
                m ^= low

    def pair_count(self) -> int:
        return sum(m.bit_count() for m in self.succ)

    def domain_set(self) -> PredSet:
        """Indices that have at least one successor."""
        mask = 0
        for i, m in enumerate(self.succ):
            if m:
                mask |= 1 << i
        return PredSet(self.space.size, mask)


def _require_same_space(a: Relation, b: Relation):
    if a.space != b.space:
        raise SpaceMismatchError("relations are over different state spaces")


def empty_relation(space: StateSpace) -> Relation:
    return Relation(space, (0,) * space.size)


def identity_relation(space: StateSpace) -> Relation:
    return Relation(space, tuple(1 << i for i in range(space.size)))


def full_relation(space: StateSpace) -> Relation:
    full = (1 << space.size) - 1
    return Relation(space, (full,) * space.size)


def denote_nop(space: StateSpace) -> Relation:
    return identity_relation(space)


def denote_assign(var: str, expr: ArithExpr, space: StateSpace) -> Relation:
    dom = space.universe.domain(var)
    succ = []
    for i in range(space.size):
        state = index_to_state(space, i)
        value = eval_arith(expr, state)
        if value is UNDEFINED or value not in dom:
            succ.append(0)
        else:
            succ.append(1 << state_to_index(space, state.updated(var, value)))
    return Relation(space, tuple(succ))


def denote_decl(var: str, space: StateSpace) -> Relation:
    pos = space.universe.position(var)
    stride = space.strides[pos]
    dsize = space.universe.vars[pos][1].size
    succ = []
    for i in range(space.size):
        here = (i // stride) % dsize
        base = i - here * stride
        mask = 0
        for p in range(dsize):
            mask |= 1 << (base + p * stride)
        succ.append(mask)
    return Relation(space, tuple(succ))


def denote_seq(r1: Relation, r2: Relation) -> Relation:
    """Relational composition: first r1, then r2."""
    _require_same_space(r1, r2)
    succ = []
    for m in r1.succ:
        out = 0
        while m:
            low = m & -m
            out |= r2.succ[low.bit_length() - 1]
            m ^= low
        succ.append(out)
    return Relation(r1.space, tuple(succ))


def denote_ite(b: PredExpr, r1: Relation, r2: Relation) -> Relation:
    _require_same_space(r1, r2)
    guard = pred_to_set(b, r1.space)
    succ = tuple(
        r1.succ[i] if i in guard else r2.succ[i] for i in range(r1.space.size)
    )
    return Relation(r1.space, succ)


def denote_if(b: PredExpr, r: Relation) -> Relation:
    guard = pred_to_set(b, r.space)
    succ = tuple(
        r.succ[i] if i in guard else 1 << i for i in range(r.space.size)
    )
    return Relation(r.space, succ)


def denote_while(b: PredExpr, body: Relation) -> Relation:
    """Least fixpoint of the guarded chain construction.

    succ[i] starts as {i} where the guard is false and grows by one body
    step per pass; a pass that changes nothing means every finite exit
    chain has been accounted for.
    """
    space = body.space
    guard = pred_to_set(b, space)
    succ = [1 << i if i not in guard else 0 for i in range(space.size)]
    changed = True
    while changed:
        changed = False
        for i in guard.indices():
            m = body.succ[i]
            out = 0
            while m:
                low = m & -m
                out |= succ[low.bit_length() - 1]
                m ^= low
            if out | succ[i] != succ[i]:
                succ[i] |= out
                changed = True
    return Relation(space, tuple(succ))


def denote(stmt: Stmt, space: StateSpace) -> Relation:
    """Denotation of a whole statement."""
    if isinstance(stmt, Nop):
        return denote_nop(space)
    if isinstance(stmt, Decl):
        return denote_decl(stmt.var, space)
    if isinstance(stmt, Assign):
        return denote_assign(stmt.var, stmt.expr, space)
    if isinstance(stmt, Seq):
        return denote_seq(denote(stmt.first, space), denote(stmt.second, space))
    if isinstance(stmt, IfThenElse):
        return denote_ite(
            stmt.cond,
            denote(stmt.then_branch, space),
            denote(stmt.else_branch, space),
        )
    if isinstance(stmt, IfThen):
        return denote_if(stmt.cond, denote(stmt.body, space))
    if isinstance(stmt, While):
        return denote_while(stmt.cond, denote(stmt.body, space))
    raise TypeError(f"not a statement: {stmt!r}")


def relation_from_pairs(space: StateSpace, pairs) -> Relation:
    """Build a relation from explicit (initial, final) index pairs."""
    succ = [0] * space.size
    for i, j in pairs:
        if not 0 <= i < space.size or not 0 <= j < space.size:
            raise ValueError(f"pair ({i}, {j}) outside the space")
        succ[i] |= 1 << j
    return Relation(space, tuple(succ))


__all__ = [
    "Relation",
    "empty_relation",
    "identity_relation",
    "full_relation",
    "denote_nop",
    "denote_assign",
    "denote_decl",
    "denote_seq",
    "denote_ite",
    "denote_if",
    "denote_while",
    "denote",
    "relation_from_pairs",
]
