"""Free distributive extension of a (join, 0)-semilattice.

Elements are layered over a base semilattice supplied through the
``Base`` contract (``zero``, ``join``, ``leq``, ``serialize``).  A value
of the extension is either a raw base value (rank 0) or a ``Node``: a
projection together with a nonempty set of triples ``<u, v, w>`` drawn
one rank down, stored in canonical form:

  * every triple satisfies ``w <= u v v``;
  * no stored triple has ``u == v`` (in particular none is diagonal --
    the diagonal is carried by the projection);
  * no two stored triples are swaps ``<u,v,w>`` / ``<v,u,w>`` of each
    other;
  * no entry of a stored triple lies below the projection;
  * triples are sorted by their serialization, so structural equality of
    canonical forms is equality in the extension and equal elements
    serialize identically.

``bowtie(a, b, c)`` adjoins, for ``c <= a v b``, an element below ``a``
which joins with its mirror ``bowtie(b, a, c)`` back to ``c``; iterating
the extension therefore forces distributivity.

Joins are computed by rewriting the union of the two triple sets (a
lower-rank operand enters as its own diagonal):

  1. ``step1``  -- merge a swapped pair into the diagonal of its shared
                   third entry, repeated to a fixpoint;
  2. ``phi``    -- fuse all diagonals into the diagonal of their join;
  3. ``step2``  -- absorb a triple whose middle entry sits below the
                   projection, raising the projection by its third
                   entry, repeated to a fixpoint;
  4. ``psi``    -- drop triples whose first or last entry sits below the
                   projection and package the survivors.

Rule choices inside the two fixpoint stages are resolved
lexicographically by serialization; ``join_with_order`` replays the same
pipeline with a caller-supplied random order (the canonical result must
not depend on the choice, and the suites check that it does not).

Recursion throughout is bounded by rank (each recursive call drops at
least one rank), so nesting depth well beyond rank 4 fits in the default
interpreter stack.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Any, NamedTuple


class DomainError(ValueError):
    """A value fell outside an operation's domain (e.g. not in C(S))."""


class ReducedFormError(ValueError):
    """A purported element violates the canonical reduced form."""

    def __init__(self, condition: str, message: str):
        super().__init__(f"{condition}: {message}")
        self.condition = condition


class Base:
    """Contract for the rank-0 semilattice underneath the extension."""

    zero: Any = None

    def join(self, a, b):
        raise NotImplementedError

    def leq(self, a, b) -> bool:
        raise NotImplementedError

    def serialize(self, a) -> str:
        raise NotImplementedError


class Triple(NamedTuple):
    u: Any
    v: Any
    w: Any


@dataclass(frozen=True)
class Node:
    proj: Any
    triples: tuple

    def __repr__(self):
        triples = ", ".join(f"({t.u!r},{t.v!r},{t.w!r})" for t in self.triples)
        return f"red({self.proj!r}; [{triples}])"


def is_diagonal(t: Triple) -> bool:
    return t.u == t.v == t.w


@lru_cache(maxsize=None)
def rank(x) -> int:
    if not isinstance(x, Node):
        return 0
    parts = [x.proj]
    for t in x.triples:
        parts.extend(t)
    return 1 + max(rank(p) for p in parts)


def proj(x):
    """Canonical projection one rank down; the identity on base values."""
    return x.proj if isinstance(x, Node) else x


@lru_cache(maxsize=None)
def serialize(base: Base, x) -> str:
    if not isinstance(x, Node):
        return base.serialize(x)
    triples = ", ".join(
        "(%s,%s,%s)" % tuple(serialize(base, c) for c in t) for t in x.triples
    )
    return f"red({serialize(base, x.proj)}; [{triples}])"


def triple_key(base: Base, t: Triple):
    return tuple(serialize(base, c) for c in t)


def make_node(base: Base, projection, triples):
    """Package a projection and surviving triples as a canonical element."""
    ts = sorted(set(triples), key=lambda t: triple_key(base, t))
    if not ts:
        return projection
    return Node(projection, tuple(ts))


def _view(x, r):
    # x seen at rank r >= 1: a lower-rank x is its own diagonal.
    if isinstance(x, Node) and rank(x) == r:
        return x.proj, x.triples
    return x, ()


def triples_of(x) -> tuple:
    """The full triple set of x at its own rank, diagonal included."""
    if isinstance(x, Node):
        p = x.proj
        return (Triple(p, p, p),) + x.triples
    return (Triple(x, x, x),)


@lru_cache(maxsize=None)
def leq(base: Base, x, y) -> bool:
    if x == y:
        return True
    if not isinstance(x, Node) and not isinstance(y, Node):
        return base.leq(x, y)
    r = max(rank(x), rank(y))
    px, tx = _view(x, r)
    py, ty = _view(y, r)
    yset = set(ty)
    yset.add(Triple(py, py, py))
    for t in (Triple(px, px, px),) + tuple(tx):
        if t in yset:
            continue
        if not (leq(base, t.u, py) or leq(base, t.w, py)):
            return False
    return True


@lru_cache(maxsize=None)
def join(base: Base, x, y):
    if not isinstance(x, Node) and not isinstance(y, Node):
        return base.join(x, y)
    out = _rewrite_join(base, x, y, None)
    return validate(base, out)


def join_with_order(base: Base, x, y, rng):
    """The join pipeline with rule choices drawn from rng (uncached)."""
    if not isinstance(x, Node) and not isinstance(y, Node):
        return base.join(x, y)
    return validate(base, _rewrite_join(base, x, y, rng))


def join_all(base: Base, items, start=None):
    acc = base.zero if start is None else start
    for it in items:
        acc = join(base, acc, it)
    return acc


def _rewrite_join(base, x, y, rng):
    r = max(rank(x), rank(y))
    ws = frozenset(_lift(x, r) + _lift(y, r))
    while (nxt := step1(base, ws, rng)) is not None:
        ws = nxt
    ws = phi(base, ws)
    while (nxt := step2(base, ws, rng)) is not None:
        ws = nxt
    return psi(base, ws)


def _lift(x, r):
    p, ts = _view(x, r)
    return (Triple(p, p, p),) + tuple(ts)


def step1(base: Base, ws: frozenset, rng=None):
    """Merge one swapped pair of non-diagonal triples; None at fixpoint."""
    pairs = set()
    for t in ws:
        if is_diagonal(t):
            continue
        s = Triple(t.v, t.u, t.w)
        if s in ws:
            pairs.add(frozenset((t, s)))
    if not pairs:
        return None
    ordered = sorted(
        pairs, key=lambda p: min(triple_key(base, t) for t in p)
    )
    pick = rng.choice(ordered) if rng is not None else ordered[0]
    c = next(iter(pick)).w
    return ws - pick | {Triple(c, c, c)}


def phi(base: Base, ws: frozenset) -> frozenset:
    """Fuse all diagonal triples into the diagonal of their join."""
    diags = {t for t in ws if is_diagonal(t)}
    if not diags:
        raise ValueError("phi requires at least one diagonal triple")
    vals = sorted({t.u for t in diags}, key=lambda v: serialize(base, v))
    total = reduce(lambda a, b: join(base, a, b), vals)
    return ws - diags | {Triple(total, total, total)}


def _the_diagonal(ws):
    diags = [t for t in ws if is_diagonal(t)]
    if len(diags) != 1:
        raise ValueError(f"expected exactly one diagonal, found {len(diags)}")
    return diags[0]


def step2(base: Base, ws: frozenset, rng=None):
    """Absorb one triple whose middle entry is below the projection.

    The absorbed triple's third entry is joined onto the projection;
    None when no triple applies.
    """
    d = _the_diagonal(ws)
    p = d.u
    cands = [t for t in ws if not is_diagonal(t) and leq(base, t.v, p)]
    if not cands:
        return None
    cands.sort(key=lambda t: triple_key(base, t))
    t = rng.choice(cands) if rng is not None else cands[0]
    raised = join(base, t.w, p)
    return ws - {t, d} | {Triple(raised, raised, raised)}


def psi(base: Base, ws: frozenset):
    """Drop dominated triples and package the set as a canonical element."""
    d = _the_diagonal(ws)
    p = d.u
    keep = [
        t
        for t in ws
        if not is_diagonal(t)
        and not leq(base, t.u, p)
        and not leq(base, t.w, p)
    ]
    return make_node(base, p, keep)


def bowtie(base: Base, a, b, c):
    """The splitting element for c <= a v b; below a, mirror-joins to c.

    Raises DomainError when c <= a v b fails.
    """
    if not leq(base, c, join(base, a, b)):
        raise DomainError("not in C(S)")
    zero = base.zero
    if a == b or b == zero or c == zero:
        return c
    if a == zero:
        return zero
    return validate(base, make_node(base, zero, [Triple(a, b, c)]))


def distributivity_witness(base: Base, a, b, c):
    """For c <= a v b: elements (x, y) with x <= a, y <= b, x v y = c."""
    if not leq(base, c, join(base, a, b)):
        raise DomainError("not in C(S)")
    return bowtie(base, a, b, c), bowtie(base, b, a, c)


def map_elem(src: Base, dst: Base, f, x):
    """Extend a base homomorphism f over the whole extension.

    Decomposes x into its projection and per-triple splitting elements,
    maps each through f, and re-joins.
    """
    if not isinstance(x, Node):
        return f(x)
    out = map_elem(src, dst, f, x.proj)
    for t in x.triples:
        img = bowtie(
            dst,
            map_elem(src, dst, f, t.u),
            map_elem(src, dst, f, t.v),
            map_elem(src, dst, f, t.w),
        )
        out = join(dst, out, img)
    return out


@lru_cache(maxsize=None)
def validate(base: Base, x):
    """Check every canonical-form invariant recursively.

    Returns x unchanged, or raises ReducedFormError naming the violated
    condition.
    """
    if not isinstance(x, Node):
        return x
    if not x.triples:
        raise ReducedFormError("empty-triples", "node with no triples")
    validate(base, x.proj)
    tset = set(x.triples)
    keys = []
    for t in x.triples:
        for comp in t:
            validate(base, comp)
        if t.u == t.v:
            raise ReducedFormError(
                "condition-2", f"triple {t} has equal first entries"
            )
        if Triple(t.v, t.u, t.w) in tset:
            raise ReducedFormError(
                "condition-2", f"swapped pair {t} present"
            )
        if not leq(base, t.w, join(base, t.u, t.v)):
            raise ReducedFormError("c-condition", f"triple {t} not in C(S)")
        if (
            leq(base, t.u, x.proj)
            or leq(base, t.v, x.proj)
            or leq(base, t.w, x.proj)
        ):
            raise ReducedFormError(
                "condition-3", f"triple {t} dominated by the projection"
            )
        keys.append(triple_key(base, t))
    if keys != sorted(keys):
        raise ReducedFormError("ordering", "triples not canonically sorted")
    if len(set(keys)) != len(keys):
        raise ReducedFormError("ordering", "duplicate triples")
    return x


def clear_caches():
    """Drop all memoized results (per-process caches, test hygiene)."""
    for fn in (rank, serialize, leq, join, validate):
        fn.cache_clear()
