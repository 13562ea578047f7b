import random

import pytest

from slat import conlat, freedist, freepairs
from slat.freedist import (
    DomainError,
    Node,
    ReducedFormError,
    Triple,
    bowtie,
    distributivity_witness,
    join,
    join_with_order,
    leq,
    map_elem,
    phi,
    proj,
    psi,
    rank,
    serialize,
    step1,
    step2,
    validate,
)
from slat.freepairs import BASE, ONE, ZERO, gen

A0 = gen(0, "x")
A1 = gen(1, "x")
B0 = gen(0, "y")
B1 = gen(1, "y")


def diamond_base():
    # 0 < a,b < 1 as a join table
    table = conlat.semilattice(4, [0, 1, 2, 3, 1, 1, 3, 3, 2, 3, 2, 3, 3, 3, 3, 3], 0)
    return conlat.TableBase(table)


# -- bowtie ------------------------------------------------------------------


def test_bowtie_cases():
    c = freepairs.join(A0, B0)
    assert bowtie(BASE, A0, A0, A0) == A0  # u = v
    assert bowtie(BASE, A0, ZERO, ZERO) == ZERO
    assert bowtie(BASE, A0, ZERO, A0) == A0  # v = 0
    assert bowtie(BASE, A0, B0, ZERO) == ZERO  # w = 0
    assert bowtie(BASE, ZERO, B0, B0) == ZERO  # u = 0
    nd = bowtie(BASE, A0, A1, ONE)
    assert nd == Node(ZERO, (Triple(A0, A1, ONE),))
    assert proj(nd) == ZERO


def test_bowtie_precondition():
    with pytest.raises(DomainError):
        bowtie(BASE, A0, A0, ONE)


def test_bowtie_case_order():
    # u = v wins over u = 0 when both are zero
    assert bowtie(BASE, ZERO, ZERO, ZERO) == ZERO


# -- order -------------------------------------------------------------------


def test_leq_examples():
    nd = bowtie(BASE, A0, A1, ONE)
    assert leq(BASE, nd, A0)
    assert not leq(BASE, nd, A1)
    assert leq(BASE, nd, nd)
    # base absoluteness: for base x, x <= y iff x <= proj(y)
    assert leq(BASE, ZERO, nd)
    assert not leq(BASE, A0, nd)


def test_leq_base_absoluteness_random():
    rng = random.Random("freedist:eq33")
    names = ("x", "y")
    for _ in range(200):
        x = freepairs.random_pair(rng, names)
        y = freepairs.random_elem(rng, names, 2)
        assert leq(BASE, x, y) == leq(BASE, x, proj(y))


def test_proj_isotone_random():
    rng = random.Random("freedist:isotone")
    names = ("x", "y")
    for _ in range(200):
        x = freepairs.random_elem(rng, names, 2)
        y = freepairs.random_elem(rng, names, 2)
        if leq(BASE, x, y):
            assert leq(BASE, proj(x), proj(y))


def test_proj_not_join_homomorphism_regression():
    # stored instance: proj(x v y) differs from proj(x) v proj(y)
    x = bowtie(BASE, A0, A1, ONE)
    y = bowtie(BASE, A1, A0, ONE)
    assert proj(x) == ZERO and proj(y) == ZERO
    assert join(BASE, x, y) == ONE
    assert proj(join(BASE, x, y)) == ONE != join(BASE, proj(x), proj(y))


# -- rewriting stages --------------------------------------------------------


def t(u, v, w):
    return Triple(u, v, w)


def test_step1_merges_swapped_pair():
    ws = frozenset({t(A0, A1, ONE), t(A1, A0, ONE)})
    assert step1(BASE, ws) == frozenset({t(ONE, ONE, ONE)})


def test_step1_fixpoint_signal():
    ws = frozenset({t(A0, A1, ONE), t(ZERO, ZERO, ZERO)})
    assert step1(BASE, ws) is None


def test_step1_two_disjoint_pairs():
    ws = frozenset(
        {t(A0, A1, ONE), t(A1, A0, ONE), t(A0, B0, B0), t(B0, A0, B0)}
    )
    once = step1(BASE, ws)
    twice = step1(BASE, once)
    assert step1(BASE, twice) is None
    assert twice == frozenset({t(ONE, ONE, ONE), t(B0, B0, B0)})


def test_phi_merges_diagonals():
    ws = frozenset({t(A0, A0, A0), t(B0, B0, B0)})
    ab = freepairs.join(A0, B0)
    assert phi(BASE, ws) == frozenset({t(ab, ab, ab)})
    single = frozenset({t(A0, A0, A0)})
    assert phi(BASE, single) == single
    withzero = frozenset({t(ZERO, ZERO, ZERO), t(B0, B0, B0)})
    assert phi(BASE, withzero) == frozenset({t(B0, B0, B0)})


def test_step2_absorbs_dominated_middle():
    # projection b, triple <a, b, c>: diagonal raised to c v b
    b = B0
    ws = frozenset({t(b, b, b), t(A0, b, freepairs.join(A0, B1))})
    out = step2(BASE, ws)
    raised = freepairs.join(freepairs.join(A0, B1), b)
    assert out == frozenset({t(raised, raised, raised)})
    assert step2(BASE, out) is None


def test_step2_cascade():
    # raising the projection enables a second absorption
    p = ZERO
    c1 = B0
    ws = frozenset({t(p, p, p), t(A0, ZERO, ZERO)})  # degenerate; absorbed straight off
    out = step2(BASE, ws)
    assert out == frozenset({t(ZERO, ZERO, ZERO)})
    ws = frozenset({t(ZERO, ZERO, ZERO), t(A0, ZERO, c1), t(A1, c1, ONE)})
    once = step2(BASE, ws)
    twice = step2(BASE, once)
    assert twice == frozenset({t(ONE, ONE, ONE)})
    assert step2(BASE, twice) is None


def test_psi_examples():
    assert psi(BASE, frozenset({t(B0, B0, B0)})) == B0
    # a <= projection: dropped
    ws = frozenset({t(B0, B0, B0), t(B0, A0, freepairs.join(A0, B0))})
    assert psi(BASE, ws) == B0
    # nothing dominated: kept
    keep = t(A0, A1, ONE)
    ws = frozenset({t(ZERO, ZERO, ZERO), keep})
    assert psi(BASE, ws) == Node(ZERO, (keep,))


# -- join --------------------------------------------------------------------


def test_join_mirror_relation():
    x = bowtie(BASE, A0, A1, ONE)
    y = bowtie(BASE, A1, A0, ONE)
    assert join(BASE, x, y) == ONE


def test_join_idempotent_zero_neutral():
    x = bowtie(BASE, A0, A1, ONE)
    assert join(BASE, x, x) == x
    assert join(BASE, x, ZERO) == x
    assert join(BASE, ZERO, ZERO) == ZERO


def test_join_mixed_rank():
    x = bowtie(BASE, A0, A1, ONE)
    deep = bowtie(BASE, x, B0, x)
    assert rank(deep) == 2
    assert join(BASE, deep, ZERO) == deep
    assert leq(BASE, x, join(BASE, deep, x))
    assert join(BASE, deep, ONE) == ONE


def test_join_lub_random_pairs_base():
    rng = random.Random("freedist:lub")
    names = ("x", "y", "z")
    for _ in range(150):
        x = freepairs.random_elem(rng, names, 2)
        y = freepairs.random_elem(rng, names, 2)
        w = join(BASE, x, y)
        assert leq(BASE, x, w) and leq(BASE, y, w)
        z = join(BASE, w, freepairs.random_elem(rng, names, 2))
        assert leq(BASE, w, z)
        assert leq(BASE, x, y) == (join(BASE, x, y) == y)


def test_join_lub_random_table_base():
    base = diamond_base()
    rng = random.Random("freedist:table")
    elems = [0, 1, 2, 3]
    pool = list(elems)
    for a in elems:
        for b in elems:
            for c in elems:
                if base.leq(c, base.join(a, b)):
                    pool.append(bowtie(base, a, b, c))
    for _ in range(300):
        x, y = rng.choice(pool), rng.choice(pool)
        w = join(base, x, y)
        assert leq(base, x, w) and leq(base, y, w)
        z = join(base, w, rng.choice(pool))
        assert leq(base, w, z)
    # embedding: base elements behave as in the table
    for a in elems:
        for b in elems:
            assert join(base, a, b) == base.join(a, b)
            assert leq(base, a, b) == base.leq(a, b)


def test_antisymmetry_random():
    rng = random.Random("freedist:antisym")
    names = ("x", "y")
    seen = [freepairs.random_elem(rng, names, 2) for _ in range(120)]
    for x in seen:
        for y in seen:
            if leq(BASE, x, y) and leq(BASE, y, x):
                assert x == y


def test_transitivity_random():
    rng = random.Random("freedist:trans")
    names = ("x", "y")
    seen = [freepairs.random_elem(rng, names, 2) for _ in range(60)]
    related = [
        (x, y) for x in seen for y in seen if leq(BASE, x, y)
    ]
    for x, y in related:
        for y2, z in related:
            if y == y2:
                assert leq(BASE, x, z)


def test_confluence_small():
    rng = random.Random("freedist:confluence")
    names = ("x", "y")
    for i in range(40):
        x = freepairs.random_elem(rng, names, 2)
        y = freepairs.random_elem(rng, names, 2)
        want = join(BASE, x, y)
        for k in range(5):
            order = random.Random(f"confl:{i}:{k}")
            assert join_with_order(BASE, x, y, order) == want


def test_join_matches_brute_lub_oracle():
    # independent oracle: over one generator the width <= 4 universe is
    # closed under joins of width <= 2 operands, so the least upper
    # bound can be found by scanning it
    operands = freepairs.all_rank1({"x"}, 2)
    closed = freepairs.all_rank1({"x"}, 4)
    rng = random.Random("freedist:luboracle")
    for _ in range(150):
        x, y = rng.choice(operands), rng.choice(operands)
        w = join(BASE, x, y)
        uppers = [
            u for u in closed if leq(BASE, x, u) and leq(BASE, y, u)
        ]
        assert w in uppers
        assert all(leq(BASE, w, u) for u in uppers)


def test_decomposition_rejoins():
    rng = random.Random("freedist:decomp")
    names = ("x", "y")
    for _ in range(120):
        x = freepairs.random_elem(rng, names, 2)
        parts = [
            bowtie(BASE, tr.u, tr.v, tr.w) for tr in freedist.triples_of(x)
        ]
        out = ZERO
        for p in parts:
            out = join(BASE, out, p)
        assert out == x


# -- functor -----------------------------------------------------------------


def test_map_elem_identity():
    x = bowtie(BASE, A0, A1, ONE)
    assert map_elem(BASE, BASE, lambda p: p, x) == x
    nd = bowtie(BASE, A0, B1, bowtie(BASE, A0, B1, B1))
    assert map_elem(BASE, BASE, lambda p: p, nd) == nd


def test_map_elem_across_bases():
    # collapse the pair base onto the diamond table: a0->1, a1->2
    base = diamond_base()

    def f(p):
        if p.top:
            return 3
        out = 0
        for name in sorted(p.pos):
            out = base.join(out, 1)
        for name in sorted(p.neg):
            out = base.join(out, 2)
        return out

    x = bowtie(BASE, A0, A1, ONE)
    fx = map_elem(BASE, base, f, x)
    assert fx == bowtie(base, 1, 2, 3)
    # join preservation on samples
    rng = random.Random("freedist:mapjoin")
    for _ in range(100):
        a = freepairs.random_elem(rng, ("x",), 1)
        b = freepairs.random_elem(rng, ("x",), 1)
        lhs = map_elem(BASE, base, f, join(BASE, a, b))
        rhs = join(base, map_elem(BASE, base, f, a), map_elem(BASE, base, f, b))
        assert lhs == rhs


def test_map_elem_composition_across_three_bases():
    diamond = diamond_base()
    two = conlat.TableBase(conlat.semilattice(2, [0, 1, 1, 1], 0))

    def f(p):
        # pairs -> diamond: both generators of x land on separate atoms
        if p.top:
            return 3
        out = 0
        if p.pos:
            out = diamond.join(out, 1)
        if p.neg:
            out = diamond.join(out, 2)
        return out

    def g(a):
        # diamond -> two-chain: collapse the atoms onto the top
        return 0 if a == 0 else 1

    rng = random.Random("freedist:threebase")
    for _ in range(80):
        x = freepairs.random_elem(rng, ("x",), 2)
        composed = map_elem(BASE, two, lambda p: g(f(p)), x)
        staged = map_elem(diamond, two, g, map_elem(BASE, diamond, f, x))
        assert composed == staged


# -- distributivity witness --------------------------------------------------


def test_distributivity_witness_postconditions():
    rng = random.Random("freedist:witness")
    names = ("x", "y")
    for _ in range(150):
        a, b, c = freepairs.random_triple(rng, names, 1)
        x, y = distributivity_witness(BASE, a, b, c)
        assert leq(BASE, x, a)
        assert leq(BASE, y, b)
        assert join(BASE, x, y) == c
    with pytest.raises(DomainError):
        distributivity_witness(BASE, A0, A0, ONE)
    assert distributivity_witness(BASE, A0, A0, A0) == (A0, A0)


# -- rank and depth ----------------------------------------------------------


def test_rank_examples():
    assert rank(A0) == 0
    assert rank(bowtie(BASE, A0, A1, ONE)) == 1
    lvl1 = bowtie(BASE, A0, A1, ONE)
    lvl2 = bowtie(BASE, lvl1, B0, lvl1)
    assert rank(lvl2) == 2


def test_deep_nesting():
    x = bowtie(BASE, A0, A1, ONE)
    for k in range(6):
        x = bowtie(BASE, x, gen(0, f"g{k}"), x)
    assert rank(x) == 7
    assert join(BASE, x, ZERO) == x
    assert leq(BASE, x, x)
    assert validate(BASE, x) == x


# -- validate ----------------------------------------------------------------


def test_validate_rejects_swapped_pair():
    tri = (Triple(A0, A1, ONE), Triple(A1, A0, ONE))
    bad = Node(ZERO, tuple(sorted(tri, key=lambda q: freedist.triple_key(BASE, q))))
    with pytest.raises(ReducedFormError) as err:
        validate(BASE, bad)
    assert err.value.condition == "condition-2"


def test_validate_rejects_dominated():
    bad = Node(A0, (Triple(A0, A1, ONE),))
    with pytest.raises(ReducedFormError) as err:
        validate(BASE, bad)
    assert err.value.condition == "condition-3"


def test_validate_rejects_non_c_triple():
    bad = Node(ZERO, (Triple(A0, B0, A1),))
    with pytest.raises(ReducedFormError) as err:
        validate(BASE, bad)
    assert err.value.condition == "c-condition"


def test_validate_rejects_empty_node():
    with pytest.raises(ReducedFormError) as err:
        validate(BASE, Node(ZERO, ()))
    assert err.value.condition == "empty-triples"


def test_validate_rejects_unsorted():
    t1 = Triple(A0, A1, ONE)
    t2 = Triple(B0, B1, ONE)
    ordered = sorted((t1, t2), key=lambda q: freedist.triple_key(BASE, q))
    bad = Node(ZERO, tuple(reversed(ordered)))
    with pytest.raises(ReducedFormError) as err:
        validate(BASE, bad)
    assert err.value.condition == "ordering"


def test_validate_accepts_join_output():
    rng = random.Random("freedist:valclosure")
    for _ in range(60):
        x = freepairs.random_elem(rng, ("x", "y"), 2)
        y = freepairs.random_elem(rng, ("x", "y"), 2)
        out = join(BASE, x, y)
        assert validate(BASE, out) == out


# -- serialization -----------------------------------------------------------


def test_serialize_deterministic_sorted():
    x = join(BASE, bowtie(BASE, A0, A1, ONE), bowtie(BASE, B0, B1, ONE))
    text = serialize(BASE, x)
    assert text.startswith("red(pair([],[]); [(")
    assert serialize(BASE, x) == text
