"""Seeded property suites over the whole library.

Every randomized case draws its generator from (seed, suite-name,
case-index), so any failure reproduces in isolation and fixed-seed runs
are byte-identical.  Suites return deterministic result lines; the CLI
prints wall time to stderr only.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from pathlib import Path

from . import conlat, corpus, descent, expr, freedist, freepairs, freeset
from .freepairs import BASE


@dataclass
class SuiteConfig:
    seed: int = 0
    cases: int = 500
    max_rank: int = 2
    omega_size: int = 4
    corpus_dir: str | None = None

    def names(self) -> tuple:
        return tuple(f"x{i}" for i in range(self.omega_size))

    def rng(self, suite: str, index: int) -> random.Random:
        return random.Random(f"{self.seed}:{suite}:{index}")

    def lattices(self) -> tuple:
        if self.corpus_dir is None:
            return corpus.bundled_corpus()
        entries = []
        for path in sorted(Path(self.corpus_dir).glob("*.alg")):
            entries.append((path.stem, conlat.parse_algebra(path.read_text())))
        if not entries:
            raise conlat.FormatError(f"no .alg files in {self.corpus_dir}")
        return tuple(entries)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    lines: list = field(default_factory=list)


# ---------------------------------------------------------------------------
# Independent oracles


def brute_theta(L: conlat.FinAlgebra, x: int, y: int) -> conlat.Congruence:
    """Least compatible partition containing (x, y), by full enumeration."""
    candidates = [
        p
        for p in conlat.all_partitions(L.size)
        if conlat.is_compatible(L, p) and p.relates(x, y)
    ]
    out = candidates[0]
    for p in candidates[1:]:
        out = conlat.part_meet(out, p)
    assert out in candidates
    return out


def wd_at_oracle(mu: conlat.SemHom, x: int) -> bool:
    """Direct quantifier translation of weak distributivity at x."""
    S, T, f = mu.dom, mu.cod, mu.image
    for y0 in range(T.size):
        for y1 in range(T.size):
            if not T.leq(f[x], T.join_of(y0, y1)):
                continue
            witnessed = False
            for x0 in range(S.size):
                for x1 in range(S.size):
                    if (
                        S.leq(x, S.join_of(x0, x1))
                        and T.leq(f[x0], y0)
                        and T.leq(f[x1], y1)
                    ):
                        witnessed = True
                        break
                if witnessed:
                    break
            if not witnessed:
                return False
    return True


def free_oracle(U, phi: freeset.PhiMap) -> bool:
    U = frozenset(U)
    for x in sorted(U):
        others = U - {x}
        if x in phi.image(others):
            return False
    return True


# ---------------------------------------------------------------------------
# Suites


def run_relations(cfg: SuiteConfig) -> SuiteResult:
    names = cfg.names()
    failures = 0
    for idx in range(cfg.cases):
        rng = cfg.rng("relations", idx)
        a, b, c = freepairs.random_triple(rng, names, cfg.max_rank)
        x = freepairs.bowtie(a, b, c)
        y = freepairs.bowtie(b, a, c)
        if freepairs.join(x, y) != c or not freepairs.leq(x, a):
            failures += 1
    result = SuiteResult("relations", failures == 0)
    result.lines.append(
        f"suite relations cases={cfg.cases} failures={failures}"
    )
    return result


def run_lub(cfg: SuiteConfig) -> SuiteResult:
    names = cfg.names()
    failures = 0
    for idx in range(cfg.cases):
        rng = cfg.rng("lub", idx)
        x = freepairs.random_elem(rng, names, cfg.max_rank)
        y = freepairs.random_elem(rng, names, cfg.max_rank)
        w = freepairs.join(x, y)
        noise = freepairs.random_elem(rng, names, cfg.max_rank)
        z = freepairs.join(w, noise)
        ok = (
            freepairs.leq(x, w)
            and freepairs.leq(y, w)
            and freepairs.leq(w, z)
            and freepairs.join(x, y) == freepairs.join(y, x)
            and freepairs.join(x, x) == x
            and freepairs.join(x, freepairs.ZERO) == x
            and freepairs.join(freepairs.join(x, y), noise)
            == freepairs.join(x, freepairs.join(y, noise))
        )
        if not ok:
            failures += 1
    result = SuiteResult("lub", failures == 0)
    result.lines.append(f"suite lub cases={cfg.cases} failures={failures}")
    return result


def run_confluence(cfg: SuiteConfig) -> SuiteResult:
    names = cfg.names()
    instances = max(100, cfg.cases // 5)
    orders = 10
    failures = 0
    for idx in range(instances):
        rng = cfg.rng("confluence", idx)
        x = freepairs.random_elem(rng, names, cfg.max_rank)
        y = freepairs.random_elem(rng, names, cfg.max_rank)
        want = freepairs.serialize(freepairs.join(x, y))
        for k in range(orders):
            order_rng = cfg.rng("confluence-order", idx * orders + k)
            got = freepairs.serialize(
                freedist.join_with_order(BASE, x, y, order_rng)
            )
            if got != want:
                failures += 1
    result = SuiteResult("confluence", failures == 0)
    result.lines.append(
        f"suite confluence instances={instances} orders={orders} "
        f"failures={failures}"
    )
    return result


def run_functoriality(cfg: SuiteConfig) -> SuiteResult:
    names = cfg.names()
    failures = 0
    for idx in range(cfg.cases):
        rng = cfg.rng("functoriality", idx)
        fmap = {n: rng.choice(names) for n in names}
        gmap = {n: rng.choice(names) for n in names}
        x = freepairs.random_elem(rng, names, cfg.max_rank)
        ok = freepairs.map_names(lambda n: n, x) == x
        ok = ok and freepairs.map_names(
            lambda n: gmap[fmap[n]], x
        ) == freepairs.map_names(lambda n: gmap[n], freepairs.map_names(lambda n: fmap[n], x))
        a, b, c = freepairs.random_triple(rng, names, cfg.max_rank - 1 if cfg.max_rank else 0)
        fa = freepairs.map_names(lambda n: fmap[n], a)
        fb = freepairs.map_names(lambda n: fmap[n], b)
        fc = freepairs.map_names(lambda n: fmap[n], c)
        ok = ok and freepairs.map_names(
            lambda n: fmap[n], freepairs.bowtie(a, b, c)
        ) == freepairs.bowtie(fa, fb, fc)
        if not ok:
            failures += 1
    result = SuiteResult("functoriality", failures == 0)
    result.lines.append(
        f"suite functoriality cases={cfg.cases} failures={failures}"
    )
    return result


def run_lemma44(cfg: SuiteConfig) -> SuiteResult:
    names = cfg.names()
    if len(names) < 2:
        raise ValueError("lemma44 suite needs omega-size >= 2")
    xi, alpha = names[0], names[1]
    sweep = freepairs.cancellation_sweep(xi, alpha, max_triples=2)
    counterexamples = len(sweep.counterexamples)
    substantive = sweep.substantive
    random_sub = 0
    for idx in range(cfg.cases):
        rng = cfg.rng("lemma44", idx)
        i = rng.randrange(2)
        live = tuple(n for n in names if n != alpha)
        y = freepairs.random_elem(rng, live, cfg.max_rank)
        if rng.random() < 0.5:
            x = freepairs.random_below(rng, y, cfg.max_rank, live)
        else:
            bound = freepairs.join(y, freepairs.gen(i, alpha))
            x = freepairs.random_below(rng, bound, cfg.max_rank, names)
            if alpha in freepairs.support(x):
                x = freepairs.retract(alpha, i, x)
        verdict = freepairs.check_cancellation(alpha, i, x, y)
        if verdict.outcome is freepairs.Outcome.COUNTEREXAMPLE:
            counterexamples += 1
        elif verdict.outcome is freepairs.Outcome.HOLDS:
            random_sub += 1
    result = SuiteResult("lemma44", counterexamples == 0 and substantive >= 50)
    result.lines.append(
        f"suite lemma44 exhaustive_checked={sweep.checked} "
        f"exhaustive_substantive={substantive} random_cases={cfg.cases} "
        f"random_substantive={random_sub} counterexamples={counterexamples}"
    )
    return result


def run_evaporation(cfg: SuiteConfig) -> SuiteResult:
    names = cfg.names()
    if len(names) < 3:
        raise ValueError("evaporation suite needs omega-size >= 3")
    alpha, beta, delta = names[0], names[1], names[2]
    sweep = freepairs.evaporation_sweep(alpha, beta, delta)
    ok = sweep.ok and sweep.notes["nonzero_pairs"] >= 1
    result = SuiteResult("evaporation", ok)
    result.lines.append(
        f"suite evaporation checked={sweep.checked} "
        f"substantive={sweep.substantive} "
        f"nonzero_pairs={sweep.notes['nonzero_pairs']} "
        f"counterexamples={len(sweep.counterexamples)}"
    )
    return result


def erosion_domain(L: conlat.FinAlgebra, max_len: int = 4):
    """All (x0, x1, Z) with Z a distinct-element chain sequence of length
    2..max_len whose leading join lies below its last entry."""
    carrier = range(L.size)
    for length in range(2, max_len + 1):
        for zs in itertools.permutations(carrier, length):
            if not L.leq(L.join_all(zs[:-1]), zs[-1]):
                continue
            for x0 in carrier:
                for x1 in carrier:
                    yield x0, x1, zs


def run_erosion(cfg: SuiteConfig) -> SuiteResult:
    lattices = cfg.lattices()
    checked = 0
    failures = 0
    for name, L in lattices:
        for x0, x1, zs in erosion_domain(L):
            res = conlat.erosion(L, x0, x1, zs)
            checked += 1
            if not res.ok:
                failures += 1
    res = conlat.erosion(corpus.chain(3), 0, 0, (0, 1, 2))
    fixture_ok = (
        res.ok
        and res.u0 == conlat.congruence_from_blocks(3, [(0, 1), (2,)])
        and res.u1 == conlat.congruence_from_blocks(3, [(0,), (1, 2)])
    )
    result = SuiteResult("erosion", failures == 0 and fixture_ok)
    result.lines.append(
        f"suite erosion lattices={len(lattices)} checked={checked} "
        f"failures={failures} fixture={'ok' if fixture_ok else 'fail'}"
    )
    return result


def run_funayama(cfg: SuiteConfig) -> SuiteResult:
    failures = []
    for name, L in cfg.lattices():
        if not conlat.is_distributive(conlat.conc(L).table):
            failures.append(name)
    result = SuiteResult("funayama", not failures)
    result.lines.append(
        f"suite funayama lattices={len(cfg.lattices())} "
        f"failures={','.join(failures) if failures else '0'}"
    )
    return result


def _small_semilattices() -> list:
    tables = []
    for name in ("chain1", "chain2", "chain3", "chain4", "2x2"):
        L = dict(corpus.bundled_corpus())[name]
        zero = conlat.algebra_zero(L)
        tables.append((name, conlat.semilattice(L.size, L.join, zero)))
    return tables


def run_oracles(cfg: SuiteConfig) -> SuiteResult:
    theta_checked = theta_bad = 0
    for name, L in cfg.lattices():
        if L.size > 6:
            continue
        for x in range(L.size):
            for y in range(L.size):
                theta_checked += 1
                if conlat.theta(L, x, y) != brute_theta(L, x, y):
                    theta_bad += 1
    wd_checked = wd_bad = 0
    tables = _small_semilattices()
    for _, dom in tables:
        for _, cod in tables:
            for mu in conlat.all_sem_homs(dom, cod):
                for x in range(dom.size):
                    wd_checked += 1
                    if conlat.weakly_distributive_at(mu, x) != wd_at_oracle(mu, x):
                        wd_bad += 1
    result = SuiteResult("oracles", theta_bad == 0 and wd_bad == 0)
    result.lines.append(
        f"suite oracles theta_checked={theta_checked} theta_bad={theta_bad} "
        f"wd_checked={wd_checked} wd_bad={wd_bad}"
    )
    return result


def kuratowski_fixtures() -> tuple:
    ground = ("0", "1", "2")
    no_free = freeset.PhiMap(
        ground,
        1,
        {frozenset((x,)): frozenset(ground) - {x} for x in ground},
    )
    singleton = freeset.PhiMap(
        ground, 1, {frozenset((x,)): frozenset((x,)) for x in ground}
    )
    return no_free, singleton


def run_kuratowski(cfg: SuiteConfig) -> SuiteResult:
    failures = 0
    checked = 0
    for size in range(1, 7):
        ground = tuple(str(i) for i in range(size))
        for n in range(0, min(2, size - 1) + 1):
            for trial in range(max(5, cfg.cases // 50)):
                rng = cfg.rng(f"kuratowski-{size}-{n}", trial)
                images = {}
                for combo in itertools.combinations(ground, n):
                    images[frozenset(combo)] = frozenset(
                        g for g in ground if rng.random() < 0.4
                    )
                phi = freeset.PhiMap(ground, n, images)
                first = None
                for combo in itertools.combinations(ground, n + 1):
                    checked += 1
                    mine = freeset.is_free(combo, phi)
                    if mine != free_oracle(combo, phi):
                        failures += 1
                    if mine and first is None:
                        first = combo
                if freeset.find_free(phi) != first:
                    failures += 1
    no_free, singleton = kuratowski_fixtures()
    if freeset.find_free(no_free) is not None:
        failures += 1
    if freeset.find_free(singleton) != ("0", "1"):
        failures += 1
    result = SuiteResult("kuratowski", failures == 0)
    result.lines.append(
        f"suite kuratowski checked={checked} failures={failures}"
    )
    return result


def run_mutations(cfg: SuiteConfig) -> SuiteResult:
    base = descent.fixture()
    base_rep = descent.validate_instance(base)
    clean = (
        base_rep.ok
        and descent.check_er(base, 0, 0, {"u"}, set())
        and descent.check_p(base, 0, 0).ok
    )
    missed = []
    per_detector = {"validate": 0, "er": 0, "p": 0}
    for mut in descent.MUTATIONS:
        if descent.mutation_detected(mut):
            per_detector[mut.detector] += 1
        else:
            missed.append(mut.name)
    result = SuiteResult("mutations", clean and not missed)
    result.lines.append(
        f"suite mutations total={len(descent.MUTATIONS)} "
        f"validate={per_detector['validate']} er={per_detector['er']} "
        f"p={per_detector['p']} missed={','.join(missed) if missed else '0'} "
        f"fixture={'ok' if clean else 'fail'}"
    )
    return result


def run_roundtrip(cfg: SuiteConfig) -> SuiteResult:
    names = cfg.names()
    failures = 0
    for idx in range(cfg.cases):
        rng = cfg.rng("roundtrip", idx)
        x = freepairs.random_elem(rng, names, cfg.max_rank)
        text = expr.serialize(x)
        back = expr.deserialize(text)
        if back != x or expr.serialize(back) != text:
            failures += 1
    result = SuiteResult("roundtrip", failures == 0)
    result.lines.append(
        f"suite roundtrip cases={cfg.cases} failures={failures}"
    )
    return result


SUITES = {
    "relations": run_relations,
    "lub": run_lub,
    "confluence": run_confluence,
    "functoriality": run_functoriality,
    "lemma44": run_lemma44,
    "evaporation": run_evaporation,
    "erosion": run_erosion,
    "funayama": run_funayama,
    "oracles": run_oracles,
    "kuratowski": run_kuratowski,
    "mutations": run_mutations,
    "roundtrip": run_roundtrip,
}


def run_suites(cfg: SuiteConfig, only: str | None = None) -> tuple:
    """Run the selected suites; returns (all_passed, result list)."""
    if only is not None and only not in SUITES:
        raise ValueError(
            f"unknown suite {only!r}; choose from {', '.join(SUITES)}"
        )
    names = [only] if only else list(SUITES)
    results = [SUITES[name](cfg) for name in names]
    return all(r.passed for r in results), results
