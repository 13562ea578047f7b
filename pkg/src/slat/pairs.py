"""Pair semilattice with complementary generator pairs.

An element is either the top element or a pair of disjoint finite sets of
generator names ("positive" and "negative" occurrences).  The two
generators of a name join to top; all other joins are componentwise
unions.  Generator names are plain strings, totally ordered
lexicographically; that order fixes all serialization.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class PairElem:
    pos: frozenset = frozenset()
    neg: frozenset = frozenset()
    top: bool = False

    def __post_init__(self):
        if self.top and (self.pos or self.neg):
            raise ValueError("top carries no generator sets")
        if self.pos & self.neg:
            raise ValueError("pos and neg must be disjoint")

    def __repr__(self):
        return serialize(self)


ZERO = PairElem()
TOP = PairElem(top=True)


def gen(i: int, name: str) -> PairElem:
    """The polarity-i generator of the given name, i in {0, 1}."""
    if i == 0:
        return PairElem(pos=frozenset((name,)))
    if i == 1:
        return PairElem(neg=frozenset((name,)))
    raise ValueError(f"polarity must be 0 or 1, got {i!r}")


def join(p: PairElem, q: PairElem) -> PairElem:
    if p.top or q.top:
        return TOP
    pos = p.pos | q.pos
    neg = p.neg | q.neg
    if pos & neg:
        return TOP
    return PairElem(pos, neg)


def leq(p: PairElem, q: PairElem) -> bool:
    if q.top:
        return True
    if p.top:
        return False
    return p.pos <= q.pos and p.neg <= q.neg


def mentions(p: PairElem) -> frozenset:
    """Generator names occurring in p; empty for zero and top."""
    return frozenset() if p.top else p.pos | p.neg


def map_generators(f, p: PairElem) -> PairElem:
    """Push p through a renaming of generator names.

    Rebuilt from generator images rather than mapped setwise, so a name
    landing on both sides collapses the element to top.
    """
    if p.top:
        return TOP
    out = ZERO
    for name in sorted(p.pos):
        out = join(out, gen(0, f(name)))
    for name in sorted(p.neg):
        out = join(out, gen(1, f(name)))
    return out


def retract(alpha: str, i: int, p: PairElem) -> PairElem:
    """The retraction killing gen(i, alpha).

    gen(1 - i, alpha) is forced to top by the complementary-pair relation;
    elements not mentioning alpha are fixed.
    """
    if i not in (0, 1):
        raise ValueError(f"polarity must be 0 or 1, got {i!r}")
    if p.top:
        return TOP
    killed, raised = (p.pos, p.neg) if i == 0 else (p.neg, p.pos)
    if alpha in raised:
        return TOP
    if alpha not in killed:
        return p
    if i == 0:
        return PairElem(p.pos - {alpha}, p.neg)
    return PairElem(p.pos, p.neg - {alpha})


def serialize(p: PairElem) -> str:
    if p.top:
        return "top"
    return "pair([%s],[%s])" % (",".join(sorted(p.pos)), ",".join(sorted(p.neg)))
