"""The kappa-Poincare group: generators L[m,n] (Lorentz matrix entries) and v[m].

Ordering: all L's first (mutually commuting), then v[0], then v[1..3]
(mutually commuting).  Index gymnastics such as ``L_{0b}`` and the
transposed entries in the antipode are expanded here, so the rewrite
kernel only sees the sixteen literal L generators.
"""
from __future__ import annotations

import random
from .scalars import Fraction
from typing import Dict, List, Optional, Sequence

from .hopfcore import (
    GeneratorSpec,
    HopfPresentation,
    Terms,
    TTerms,
    ZeroTest,
    check_hopf_axioms,
    check_rule_compatibility,
)
from .report import SuiteReport
from .scalars import IMAG, KAPPA, ONE, ZERO, Scalar

MINKOWSKI = (1, -1, -1, -1)
EUCLIDEAN = (1, 1, 1, 1)


def L(m: int, n: int) -> str:
    return f"L[{m},{n}]"


def v(m: int) -> str:
    return f"v[{m}]"


def _delta(a, b) -> int:
    return 1 if a == b else 0


def group_bracket(alpha, beta, rho, metric=MINKOWSKI) -> Dict[tuple, Scalar]:
    """[L^alpha_beta, v^rho] as a dict over name tuples (L words only)."""
    g = metric
    c = -IMAG / KAPPA
    out: Dict[tuple, Scalar] = {}

    def add(key, val):
        out[key] = out.get(key, ZERO) + val

    # (L^a_0 - delta^a_0) L^rho_b
    add((L(alpha, 0), L(rho, beta)), c)
    if alpha == 0:
        add((L(rho, beta),), -c)
    # (L_{0b} - g_{0b}) g^{a rho};  L_{0b} = g_00 L^0_b
    if alpha == rho:
        ginv = Fraction(1, g[alpha])
        add((L(0, beta),), c * g[0] * ginv)
        if beta == 0:
            add((), -c * g[0] * ginv)
    return {k: x for k, x in out.items() if x}


def build_kgroup(metric: Sequence[int] = MINKOWSKI) -> HopfPresentation:
    g = tuple(metric)
    gens = [GeneratorSpec(L(a, b), 0, 4 * a + b) for a in range(4) for b in range(4)]
    gens.append(GeneratorSpec(v(0), 1, 0))
    gens += [GeneratorSpec(v(j), 2, j) for j in (1, 2, 3)]
    P = HopfPresentation("kappa-Poincare group", gens)
    P.metric = g

    names = [x.name for x in gens]
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            P.set_commutator(a, b, {})
    for a in range(4):
        for b in range(4):
            for r in range(4):
                P.set_commutator(L(a, b), v(r), group_bracket(a, b, r, g))
    for j in (1, 2, 3):
        # [v^0, v^j] = (i/k) v^j
        P.set_commutator(v(0), v(j), {(v(j),): IMAG / KAPPA})

    for mu in range(4):
        for nu in range(4):
            # S(L^mu_nu) = L_nu^mu = g_nn L^n_m g^mm
            sgn = Fraction(g[nu], g[mu])
            P.set_hopf(
                L(mu, nu),
                {(L(mu, a), L(a, nu)): ONE for a in range(4)},
                {(L(nu, mu),): sgn},
                ONE if mu == nu else ZERO,
            )
        delta = {(L(mu, n), v(n)): ONE for n in range(4)}
        delta[(v(mu), "")] = ONE
        anti = {(L(n, mu), v(n)): -Fraction(g[n], g[mu]) for n in range(4)}
        P.set_hopf(v(mu), delta, anti, ZERO)
    return P.finalize()


# ---------------------------------------------------------------------------
# zero test modulo the Lorentz relations  L^T g L = g


def _mat_mul(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def _mat_inv(a):
    n = len(a)
    m = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def lorentz_point(rng: random.Random, flip=(1, 1, 1, 1), metric=MINKOWSKI) -> List[List[Fraction]]:
    """Exact rational element of O(metric): Cayley transform times a diagonal flip.

    With X = g A for antisymmetric A, X^T g + g X = 0, so (1 - X)^-1 (1 + X)
    preserves g.
    """
    n = 4
    A = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            val = Fraction(rng.randint(-60, 60), rng.randint(1, 40))
            A[i][j] = val
            A[j][i] = -val
    X = [[metric[i] * A[i][j] for j in range(n)] for i in range(n)]
    eye = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    minus = [[eye[i][j] - X[i][j] for j in range(n)] for i in range(n)]
    plus = [[eye[i][j] + X[i][j] for j in range(n)] for i in range(n)]
    Lam = _mat_mul(_mat_inv(minus), plus)
    return [[Lam[i][j] * flip[j] for j in range(n)] for i in range(n)]


class LorentzIdeal(ZeroTest):
    """Residual vanishes on O(1,3): evaluate L-entries at exact rational Lorentz points.

    In normal form every word is (L-word)(v-word), so a residual is zero
    modulo the orthogonality relations iff each v-word's coefficient, a
    commutative polynomial in the L's, vanishes on the group.  Points are
    Cayley transforms (dense in the identity component) composed with
    parity and time reversal to reach the other components.  Literal zero
    is accepted without evaluation.
    """

    label = "exact, or zero at seeded rational Lorentz points"

    def __init__(self, P: HopfPresentation, seed: int = 0, npoints: int = 4):
        self.modulo_hits = 0
        rng = random.Random(10007 * seed + 17)
        flips = [(1, 1, 1, 1), (1, -1, 1, 1), (-1, 1, 1, 1), (-1, -1, -1, -1)]
        self.points = [lorentz_point(rng, flips[i % 4]) for i in range(npoints)]
        self.lgen = {}
        for a in range(4):
            for b in range(4):
                self.lgen[P.gid(L(a, b))] = (a, b)

    def _split(self, word, point):
        val = Fraction(1)
        rest = []
        for gid in word:
            ab = self.lgen.get(gid)
            if ab is None:
                rest.append(gid)
            else:
                val *= point[ab[0]][ab[1]]
        return val, tuple(rest)

    def element_is_zero(self, P, terms: Terms) -> bool:
        if not terms:
            return True
        for pt in self.points:
            acc: Dict[tuple, Scalar] = {}
            for w, c in terms.items():
                val, rest = self._split(w, pt)
                acc[rest] = acc.get(rest, ZERO) + c * val
            if any(x for x in acc.values()):
                return False
        self.modulo_hits += 1
        return True

    def tensor_is_zero(self, P, terms: TTerms) -> bool:
        if not terms:
            return True
        for pt in self.points:
            acc: Dict[tuple, Scalar] = {}
            for key, c in terms.items():
                val = Fraction(1)
                rests = []
                for w in key:
                    x, r = self._split(w, pt)
                    val *= x
                    rests.append(r)
                rk = tuple(rests)
                acc[rk] = acc.get(rk, ZERO) + c * val
            if any(x for x in acc.values()):
                return False
        self.modulo_hits += 1
        return True


def kgroup_verify(max_degree: int = 3, samples: int = 50, seed: int = 0,
                  metric: Sequence[int] = MINKOWSKI,
                  presentation: Optional[HopfPresentation] = None) -> SuiteReport:
    P = presentation or build_kgroup(metric)
    zt = LorentzIdeal(P, seed)
    rep = check_hopf_axioms(P, max_degree, samples, seed, zero_test=zt, suite="group-hopf")
    # the three bracket families, checked as identities of the structure maps
    fam = SuiteReport("group-hopf")
    compat = check_rule_compatibility(P, zt, "group-hopf")
    per_family = {"[L,L]": [], "[L,v]": [], "[v,v]": []}
    for chk in compat.checks:
        label = chk.name.split("[", 1)[1]
        kinds = ["L" if part.startswith("L") else "v" for part in label.rstrip("]").split("*")]
        fam_key = "[" + ",".join(sorted(kinds)) + "]"
        per_family.setdefault(fam_key, []).append(chk.passed)
    for key, flags in per_family.items():
        fam.add(f"bracket-family{key} structure maps agree ({len(flags)} rules)", all(flags),
                f"{flags.count(False)} rules failed")
    rep.extend(fam)
    # the orthogonality ideal must be stable under [v, .] for the quotient to exist
    rep.extend(lorentz_ideal_stability(P, zt))
    rep.note(f"{zt.modulo_hits} residuals vanish only modulo the Lorentz relations")
    return rep


def lorentz_ideal_stability(P: HopfPresentation, zt: LorentzIdeal) -> SuiteReport:
    """[v^r, (L^T g L - g)_{ab}] vanishes on the group for all r, a, b."""
    rep = SuiteReport("group-hopf")
    g = P.metric
    bad = 0
    for a in range(4):
        for b in range(4):
            rel: Dict[tuple, Scalar] = {}
            for r in range(4):
                key = (L(r, a), L(r, b))
                rel[key] = rel.get(key, ZERO) + Scalar.const(g[r])
            if a == b:
                rel[()] = Scalar.const(-g[a])
            relt = P.terms_of(rel)
            for r in range(4):
                vv = {(P.gid(v(r)),): ONE}
                comm = P.mul_terms(vv, relt)
                for w, c in P.mul_terms(relt, vv).items():
                    comm[w] = comm.get(w, ZERO) - c
                comm = {w: c for w, c in comm.items() if c}
                if not zt.element_is_zero(P, comm):
                    bad += 1
    rep.add("orthogonality ideal stable under [v, .]", bad == 0, f"{bad} failures")
    return rep
