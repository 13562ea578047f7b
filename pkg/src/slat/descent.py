"""Descent-style instances: a finite algebra with a labeling into the
generated semilattice plus parity-indexed chains.

An instance bundles an algebra L with top, elements t_r, chains
z[r][i][xi] from t_r up to the top (one per generator name xi), and a
map mu from principal congruences of L into the generated semilattice,
extended to arbitrary congruences by joining the listed values below
them.  The validator itemizes every premise; the equality checks
E_r(X, Y) and the quantified statements P(k, l) evaluate the chain data
directly and report failures as data, not errors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import conlat, expr, freepairs
from .conlat import Congruence, FinAlgebra, FormatError, epsilon


@dataclass
class DescentInstance:
    algebra: FinAlgebra
    omega: tuple
    t: tuple
    z: dict
    mu: dict
    mu_lines: tuple
    u_set: tuple
    _mu_hat_memo: dict = field(default_factory=dict, repr=False)

    @property
    def m(self) -> int:
        return len(self.t)

    @property
    def n(self) -> int:
        return max(i for (_, i, _) in self.z)

    def z_at(self, r: int, i: int, xi: str) -> int:
        try:
            return self.z[(r, i, xi)]
        except KeyError:
            raise ValueError(f"missing z entry (r={r}, i={i}, xi={xi})") from None

    def mu_hat(self, c: Congruence):
        """mu extended by joins: the join of listed values below c."""
        if c not in self._mu_hat_memo:
            self._mu_hat_memo[c] = freepairs.join_all(
                self.mu[p] for p in sorted(self.mu, key=lambda q: q.block_of)
                if conlat.refines(p, c)
            )
        return self._mu_hat_memo[c]

    def mu_theta(self, x: int, y: int):
        return self.mu_hat(conlat.theta(self.algebra, x, y))


@dataclass
class Report:
    items: list = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = ""):
        self.items.append((name, ok, detail))

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.items)

    def failed(self) -> list:
        return [name for name, ok, _ in self.items if not ok]

    def lines(self) -> list:
        out = []
        for name, ok, detail in self.items:
            mark = "ok" if ok else "fail"
            out.append(f"{mark} {name}" + (f": {detail}" if detail else ""))
        return out


def validate_instance(D: DescentInstance) -> Report:
    """Itemized check of the instance invariants and premises."""
    rep = Report()
    L = D.algebra
    rep.add("algebra-has-top", L.top is not None)
    if L.top is None:
        return rep
    top = L.top

    complete = all(
        (r, i, xi) in D.z
        for r in range(D.m)
        for i in range(D.n + 1)
        for xi in D.omega
    )
    rep.add("z-array-complete", complete)
    if not complete:
        return rep

    rep.add(
        "z-starts-at-t",
        all(
            D.z_at(r, 0, xi) == D.t[r] for r in range(D.m) for xi in D.omega
        ),
    )
    rep.add(
        "z-ends-at-top",
        all(
            D.z_at(r, D.n, xi) == top for r in range(D.m) for xi in D.omega
        ),
    )
    rep.add(
        "t-below-z",
        all(
            L.leq(D.t[r], D.z_at(r, i, xi))
            for r in range(D.m)
            for i in range(D.n + 1)
            for xi in D.omega
        ),
    )

    bad_mu = []
    for x, y, value in D.mu_lines:
        if D.mu_theta(x, y) != value:
            bad_mu.append(f"({x},{y})")
    rep.add(
        "mu-consistent-on-principals",
        not bad_mu,
        "; ".join(bad_mu),
    )

    result = conlat.conc(L)
    hom_ok = True
    witness = ""
    for c1 in result.congruences:
        for c2 in result.congruences:
            lhs = D.mu_hat(conlat.part_join(c1, c2))
            rhs = freepairs.join(D.mu_hat(c1), D.mu_hat(c2))
            if lhs != rhs:
                hom_ok = False
                witness = f"{c1.serialize()} v {c2.serialize()}"
                break
        if not hom_ok:
            break
    rep.add("mu-join-homomorphism", hom_ok, witness)
    rep.add(
        "mu-zero",
        D.mu_hat(conlat.identity_congruence(L.size)) == freepairs.ZERO,
    )

    decomposition = freepairs.join_all(
        D.mu_theta(D.t[r], top) for r in range(D.m)
    )
    rep.add(
        "decomposition-of-one",
        decomposition == freepairs.ONE,
        freepairs.serialize(decomposition),
    )

    bad = []
    for r in range(D.m):
        for xi in D.omega:
            for i in range(D.n):
                img = D.mu_theta(D.z_at(r, i, xi), D.z_at(r, i + 1, xi))
                if not freepairs.leq(img, freepairs.gen(epsilon(i), xi)):
                    bad.append(f"(r={r},i={i},xi={xi})")
    rep.add("chain-bounds", not bad, "; ".join(bad))

    separated = all(
        D.mu_hat(c) != freepairs.ZERO
        for c in result.congruences
        if c != conlat.identity_congruence(L.size)
    )
    rep.add("mu-separates-zero", separated)
    return rep


def check_er(D: DescentInstance, r: int, k: int, X, Y) -> bool:
    """The equality E_r(X, Y): chain entries at depth k over X joined
    with entries one deeper over Y reach the top."""
    X, Y = frozenset(X), frozenset(Y)
    if X & Y:
        raise ValueError("X and Y must be disjoint")
    if not 0 <= r < D.m:
        raise ValueError(f"r must be below {D.m}")
    if k < 0 or D.n - k - 1 < 0:
        raise ValueError("k out of range for the chain length")
    L = D.algebra
    zero = conlat.algebra_zero(L)
    items = [D.z_at(r, D.n - k, xi) for xi in sorted(X)]
    items += [D.z_at(r, D.n - k - 1, eta) for eta in sorted(Y)]
    return L.join_all(items, empty=zero) == L.top


@dataclass
class PReport:
    k: int
    l: int
    instances: int = 0
    failures: list = field(default_factory=list)

    @property
    def vacuous(self) -> bool:
        return self.instances == 0

    @property
    def ok(self) -> bool:
        return not self.failures


def check_p(D: DescentInstance, k: int, l: int) -> PReport:
    """Evaluate the quantified statement P(k, l) over the designated U.

    Failures are reported with their witnessing (r, X, Y); on arbitrary
    instances they are informative, not errors.
    """
    if not 0 <= k <= D.n - 1:
        raise ValueError("k must be between 0 and n-1")
    if not 0 <= l <= 2**k:
        raise ValueError("l must be between 0 and 2^k")
    rep = PReport(k, l)
    U = sorted(D.u_set)
    size_x = 2**k - l
    size_y = 2 * l
    for X in itertools.combinations(U, size_x):
        rest = [u for u in U if u not in X]
        for Y in itertools.combinations(rest, size_y):
            for r in range(D.m):
                rep.instances += 1
                if not check_er(D, r, k, X, Y):
                    rep.failures.append((r, tuple(X), tuple(Y)))
    return rep


def s_of(D: DescentInstance, X) -> frozenset:
    """Join-closure of the chain entries over the names in X."""
    gens = {
        D.z_at(r, i, xi)
        for r in range(D.m)
        for i in range(D.n + 1)
        for xi in X
    }
    found = set(gens)
    frontier = set(gens)
    while frontier:
        fresh = set()
        for a in frontier:
            for b in found:
                j = D.algebra.join_of(a, b)
                if j not in found and j not in fresh:
                    fresh.add(j)
        found |= fresh
        frontier = fresh
    return frozenset(found)


def phi_from_instance(D: DescentInstance, X) -> frozenset:
    """Union of supports of mu over all principal congruences of the
    join-subsemilattice generated by the chain entries over X."""
    S = sorted(s_of(D, X))
    out = set()
    for x in S:
        for y in S:
            out |= freepairs.support(D.mu_theta(x, y))
    return frozenset(out)


# ---------------------------------------------------------------------------
# File format


def parse_instance(text: str) -> DescentInstance:
    """Algebra directives plus ``t``, ``z``, ``mu`` and optional ``U`` lines."""
    algebra_lines = []
    t_entries = {}
    z = {}
    mu_lines = []
    u_names = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kind = tok[0]
        try:
            if kind in ("alg", "op", "join", "top"):
                algebra_lines.append(line)
            elif kind == "t":
                t_entries[int(tok[1])] = int(tok[2])
            elif kind == "z":
                z[(int(tok[1]), int(tok[2]), tok[3])] = int(tok[4])
            elif kind == "mu":
                x, y = int(tok[1]), int(tok[2])
                value = expr.parse_eval(" ".join(tok[3:]))
                mu_lines.append((x, y, value))
            elif kind == "U":
                u_names = tuple(sorted(tok[1:]))
            else:
                raise FormatError(f"line {lineno}: unknown directive {kind!r}")
        except (ValueError, IndexError) as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(f"line {lineno}: {exc}") from exc
    L = conlat.parse_algebra("\n".join(algebra_lines))
    if sorted(t_entries) != list(range(len(t_entries))) or not t_entries:
        raise FormatError("t lines must cover 0..m-1")
    t = tuple(t_entries[r] for r in range(len(t_entries)))
    if not z:
        raise FormatError("no z lines")
    omega = tuple(sorted({xi for (_, _, xi) in z}))
    mu = {}
    for x, y, value in mu_lines:
        # first listing wins; conflicting duplicates are a validator finding
        mu.setdefault(conlat.theta(L, x, y), value)
    if u_names is None:
        u_names = omega
    if not set(u_names) <= set(omega):
        raise FormatError("U mentions names outside the z lines")
    return DescentInstance(L, omega, t, z, mu, tuple(mu_lines), u_names)


def format_instance(D: DescentInstance) -> str:
    lines = [conlat.format_algebra(D.algebra).rstrip("\n")]
    for r, value in enumerate(D.t):
        lines.append(f"t {r} {value}")
    for (r, i, xi) in sorted(D.z):
        lines.append(f"z {r} {i} {xi} {D.z[(r, i, xi)]}")
    for x, y, value in D.mu_lines:
        lines.append(f"mu {x} {y} {_value_as_expr(value)}")
    lines.append("U " + " ".join(D.u_set))
    return "\n".join(lines) + "\n"


def _value_as_expr(value) -> str:
    return expr.to_expr(value)


# ---------------------------------------------------------------------------
# Bundled fixture and its mutation suite


FIXTURE = """\
alg 4
op meet 2 0 0 0 0 0 1 0 1 0 0 2 2 0 1 2 3
op vee 2 0 1 2 3 1 1 3 3 2 3 2 3 3 3 3 3
join vee
top 3
t 0 0
z 0 0 u 0
z 0 1 u 1
z 0 2 u 3
mu 0 0 0
mu 0 1 a0(u)
mu 0 2 a1(u)
mu 0 3 1
mu 1 3 a1(u)
mu 2 3 a0(u)
U u
"""


def fixture() -> DescentInstance:
    """The bundled 4-element square-lattice instance over one name."""
    return parse_instance(FIXTURE)


@dataclass(frozen=True)
class Mutation:
    name: str
    old: str
    new: str
    detector: str  # validate | er | p

    def apply(self, text: str) -> str:
        if text.count(self.old) != 1:
            raise ValueError(f"mutation {self.name}: ambiguous target")
        return text.replace(self.old, self.new)


MUTATIONS = (
    Mutation("z-start-off-t", "z 0 0 u 0", "z 0 0 u 1", "validate"),
    Mutation("t-moved", "t 0 0", "t 0 1", "validate"),
    Mutation("t-not-below-z", "t 0 0", "t 0 2", "validate"),
    Mutation("mu-pair-conflict", "mu 1 3 a1(u)", "mu 1 3 a0(u)", "validate"),
    Mutation("mu-not-hom", "mu 0 3 1", "mu 0 3 a0(u)", "validate"),
    Mutation("mu-chain-bound", "mu 0 1 a0(u)", "mu 0 1 1", "validate"),
    Mutation("mu-swapped-sides", "mu 0 1 a0(u)", "mu 0 1 a1(u)", "validate"),
    Mutation("mu-kills-zero-separation", "mu 0 1 a0(u)", "mu 0 1 0", "validate"),
    Mutation("mu-nonzero-identity", "mu 0 0 0", "mu 0 0 a0(u)", "validate"),
    Mutation("top-line-dropped", "top 3\n", "", "validate"),
    Mutation("z-top-to-atom", "z 0 2 u 3", "z 0 2 u 1", "er"),
    Mutation("z-top-to-other-atom", "z 0 2 u 3", "z 0 2 u 2", "er"),
    Mutation("z-top-to-zero", "z 0 2 u 3", "z 0 2 u 0", "er"),
    Mutation("z-top-p-atom", "z 0 2 u 3", "z 0 2 u 1", "p"),
    Mutation("z-top-p-zero", "z 0 2 u 3", "z 0 2 u 0", "p"),
)


def mutation_detected(mut: Mutation) -> bool:
    """Whether the targeted checker flags the mutated fixture."""
    D = parse_instance(mut.apply(FIXTURE))
    if mut.detector == "validate":
        return not validate_instance(D).ok
    if mut.detector == "er":
        return not check_er(D, 0, 0, {"u"}, set())
    if mut.detector == "p":
        return not check_p(D, 0, 0).ok
    raise ValueError(f"unknown detector {mut.detector!r}")
