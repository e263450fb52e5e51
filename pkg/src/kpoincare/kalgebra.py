"""The kappa-Poincare algebra in the bicrossproduct basis, with A = exp(-P0/k) exact.

Generator order: rotations M[1,2] M[1,3] M[2,3], boosts M[1,0] M[2,0]
M[3,0], momenta P[0..3], then A and its inverse A^-1.  Replacing
exp(-2 P0/k) by A*A and adding [M[i,0], A] = -(i/k) P[i] A closes the
rewrite system exactly, so no identity below is truncated.

Conventions fixed by the checks in this module:

* ``P^r P_r = -(P1^2 + P2^2 + P3^2)`` (spatial metric); the Euclidean
  reading breaks Jacobi identities and is kept as ``prpr="euclidean"``.
* ``S(M[i,0]) = -(M[i,0] - (1/k) M[i,j] P[j]) A^-1`` with A^-1 on the
  right.  Putting it on the left (``antipode="left"``) leaves the residual
  (i/k) P[i] A^-1 in both antipode laws.
"""
from __future__ import annotations

import itertools
import math
from typing import Dict, List, Optional, Sequence, Tuple

from .hopfcore import (
    GeneratorSpec,
    HopfPresentation,
    Terms,
    _add,
    check_hopf_axioms,
    commutator,
    coproduct,
    tensor_mul,
    TensorElement,
)
from .kgroup import MINKOWSKI
from .report import SuiteReport
from .scalars import IMAG, KAPPA, ONE, ZERO, Scalar, coeff, coeff_series, Fraction

ROTATIONS = [(1, 2), (1, 3), (2, 3)]
SPATIAL = (1, 2, 3)


def M(i: int, j: int) -> str:
    return f"M[{i},{j}]"


def P_(mu: int) -> str:
    return f"P[{mu}]"


A = "A"
AINV = "A^-1"

GENERATORS_10 = [M(i, j) for i, j in ROTATIONS] + [M(i, 0) for i in SPATIAL] + [P_(m) for m in range(4)]
GENERATORS_11 = GENERATORS_10 + [A]


def m_term(i: int, j: int) -> Tuple[Optional[str], int]:
    """M_{ij} as (generator name, sign) using antisymmetry; (None, 0) for i == j."""
    if i == j:
        return None, 0
    if j == 0:
        return M(i, 0), 1
    if i == 0:
        return M(j, 0), -1
    if i < j:
        return M(i, j), 1
    return M(j, i), -1


class _Lin:
    """Small accumulator of name-tuple words -> scalars."""

    def __init__(self):
        self.d: Dict[tuple, Scalar] = {}

    def add(self, word, c):
        c = coeff(c)
        if not c:
            return self
        if isinstance(word, str):
            word = (word,)
        self.d[word] = self.d.get(word, ZERO) + c
        return self

    def addm(self, i, j, c):
        name, sgn = m_term(i, j)
        if name is not None:
            self.add(name, coeff(c) * sgn)
        return self

    def out(self):
        return {k: v for k, v in self.d.items() if v}


def algebra_brackets(metric: Sequence[int] = MINKOWSKI, prpr: str = "spatial") -> Dict[Tuple[str, str], dict]:
    """[a, b] for a before b in GENERATORS_11 order, as name-word dicts."""
    g = metric
    i_ = IMAG
    k = KAPPA

    def gs(a, b):  # spatial metric entry g_ab
        return g[a] if a == b else 0

    out: Dict[Tuple[str, str], dict] = {}

    def put(a, b, lin):
        out[(a, b)] = lin.out() if isinstance(lin, _Lin) else lin

    rot = [(i, j) for i, j in ROTATIONS]
    # rotation-rotation
    for (i, j), (r, s) in itertools.combinations(rot, 2):
        lin = _Lin()
        lin.addm(j, r, i_ * gs(i, s)).addm(i, r, -i_ * gs(j, s))
        lin.addm(i, s, i_ * gs(j, r)).addm(j, s, -i_ * gs(i, r))
        put(M(i, j), M(r, s), lin)
    # rotation-boost: [M_rs, M_i0] = -[M_i0, M_rs] = i(g_is M_r0 - g_ir M_s0)
    for (r, s) in rot:
        for i in SPATIAL:
            lin = _Lin().addm(r, 0, i_ * gs(i, s)).addm(s, 0, -i_ * gs(i, r))
            put(M(r, s), M(i, 0), lin)
    # boost-boost
    for i, j in itertools.combinations(SPATIAL, 2):
        put(M(i, 0), M(j, 0), _Lin().addm(i, j, -i_))
    # rotation-momentum
    for (i, j) in rot:
        put(M(i, j), P_(0), {})
        for kk in SPATIAL:
            lin = _Lin().add(P_(i), i_ * gs(j, kk)).add(P_(j), -i_ * gs(i, kk))
            put(M(i, j), P_(kk), lin)
        put(M(i, j), A, {})
    # boost-momentum
    sgn = -1 if prpr == "spatial" else 1
    for i in SPATIAL:
        put(M(i, 0), P_(0), _Lin().add(P_(i), i_))
        for kk in SPATIAL:
            lin = _Lin()
            if i == kk:
                gik = g[i]
                lin.add((), -i_ * k / 2 * gik)
                lin.add((A, A), i_ * k / 2 * gik)
                for r in SPATIAL:
                    lin.add((P_(r), P_(r)), i_ / (2 * k) * gik * sgn)
            lin.add(tuple(sorted((P_(i), P_(kk)))), -i_ / k)
            put(M(i, 0), P_(kk), lin)
        put(M(i, 0), A, _Lin().add((P_(i), A), -i_ / k))
    for a, b in itertools.combinations([P_(m) for m in range(4)] + [A], 2):
        put(a, b, {})
    return out


def build_kalgebra(metric: Sequence[int] = MINKOWSKI, prpr: str = "spatial",
                   antipode: str = "right", coproduct_sign: int = 1) -> HopfPresentation:
    gens = [GeneratorSpec(M(i, j), 0, n) for n, (i, j) in enumerate(ROTATIONS)]
    gens += [GeneratorSpec(M(i, 0), 1, i) for i in SPATIAL]
    gens += [GeneratorSpec(P_(m), 2, m) for m in range(4)]
    gens += [GeneratorSpec(A, 3, 0, inverse=AINV), GeneratorSpec(AINV, 3, 1, inverse=A)]
    P = HopfPresentation("kappa-Poincare algebra", gens)
    P.metric = tuple(metric)
    P.conventions = {"prpr": prpr, "antipode": antipode, "coproduct_sign": coproduct_sign}
    br = algebra_brackets(metric, prpr)
    for (a, b), val in br.items():
        P.set_commutator(a, b, val)
    # A^-1 rules follow from those of A: [X, A^-1] = -A^-1 [X, A] A^-1
    for x in GENERATORS_10:
        val = br.get((x, A), {})
        inv: Dict[tuple, Scalar] = {}
        for w, c in val.items():
            # every [X, A] here is (poly in P) * A, so A^-1 (...) A A^-1 = (...) A^-1 up to sign
            inv[tuple(AINV if s == A else s for s in w)] = -c
        P.set_commutator(x, AINV, inv)
    k = KAPPA
    P.set_hopf(P_(0), {("", P_(0)): ONE, (P_(0), ""): ONE}, {(P_(0),): -1}, ZERO)
    for j in SPATIAL:
        P.set_hopf(P_(j), {(P_(j), A): ONE, ("", P_(j)): ONE}, {(AINV, P_(j)): -1}, ZERO)
    for (i, j) in ROTATIONS:
        P.set_hopf(M(i, j), {(M(i, j), ""): ONE, ("", M(i, j)): ONE}, {(M(i, j),): -1}, ZERO)
    for i in SPATIAL:
        delta = {("", M(i, 0)): ONE, (M(i, 0), A): ONE}
        tail = _Lin()  # sum_j M_ij P_j
        for j in SPATIAL:
            name, sgn = m_term(i, j)
            if name is None:
                continue
            delta[(name, P_(j))] = Scalar.const(sgn * coproduct_sign) / k
            tail.add((name, P_(j)), Fraction(sgn * coproduct_sign))
        anti = _Lin()
        if antipode == "left":
            # -A^-1 (M_i0 - (1/k) sum_j M_ij P_j), literally
            anti.add((AINV, M(i, 0)), -1)
            for w, c in tail.out().items():
                anti.add((AINV,) + w, c / k)
        else:
            anti.add((M(i, 0), AINV), -1)
            for w, c in tail.out().items():
                anti.add(w + (AINV,), c / k)
        P.set_hopf(M(i, 0), delta, anti.out(), ZERO)
    P.set_hopf(A, {(A, A): ONE}, {(AINV,): ONE}, ONE)
    P.set_hopf(AINV, {(AINV, AINV): ONE}, {(A,): ONE}, ONE)
    return P.finalize()


# ---------------------------------------------------------------------------
# suites


def bracket(P: HopfPresentation, a: str, b: str):
    return commutator(P.gen(a), P.gen(b))


def jacobi_suite(P: Optional[HopfPresentation] = None, **conventions) -> SuiteReport:
    """All 165 triples of the 11 generators {M, P, A}: the Jacobi sum vanishes."""
    P = P or build_kalgebra(**conventions)
    rep = SuiteReport("algebra-jacobi")
    for a, b, c in itertools.combinations(GENERATORS_11, 3):
        ea, eb, ec = P.gen(a), P.gen(b), P.gen(c)
        total = (commutator(commutator(ea, eb), ec) + commutator(commutator(eb, ec), ea)
                 + commutator(commutator(ec, ea), eb))
        rep.expect_zero(f"jacobi({a},{b},{c})", total)
    return rep


def kalgebra_hopf_verify(max_degree: int = 3, samples: int = 50, seed: int = 0,
                         P: Optional[HopfPresentation] = None) -> SuiteReport:
    """Hopf axioms (every generator plus sampled monomials) and Delta[a,b] = [Delta a, Delta b]."""
    P = P or build_kalgebra()
    rep = check_hopf_axioms(P, max_degree, samples, seed, suite="algebra-hopf")
    gens = [g.name for g in P.generators if g.name != AINV]
    for a, b in itertools.combinations(gens, 2):
        da, db = coproduct(P.gen(a)), coproduct(P.gen(b))
        lhs = coproduct(bracket(P, a, b))
        rhs = da * db - db * da
        rep.expect_zero(f"delta-bracket({a},{b})", lhs - rhs)
    return rep


def classical_bracket(a: str, b: str, metric: Sequence[int] = MINKOWSKI) -> Dict[tuple, Scalar]:
    """Undeformed Poincare brackets from the covariant formulas."""
    g = metric

    def parse(name):
        kind = name[0]
        idx = tuple(int(x) for x in name[2:-1].split(","))
        return kind, idx

    def gm(x, y):
        return g[x] if x == y else 0

    ka, ia = parse(a)
    kb, ib = parse(b)
    lin = _Lin()
    i_ = IMAG
    if ka == "P" and kb == "P":
        return {}
    if ka == "M" and kb == "P":
        (mu, nu), (rho,) = ia, ib
        # [M_mn, P_r] = i(g_nr P_m - g_mr P_n)
        lin.add(P_(mu), i_ * gm(nu, rho)).add(P_(nu), -i_ * gm(mu, rho))
        return lin.out()
    if ka == "P" and kb == "M":
        return {w: -c for w, c in classical_bracket(b, a, metric).items()}
    (mu, nu), (rho, sig) = ia, ib
    lin.addm(nu, rho, i_ * gm(mu, sig)).addm(mu, rho, -i_ * gm(nu, sig))
    lin.addm(mu, sig, i_ * gm(nu, rho)).addm(nu, sig, -i_ * gm(mu, rho))
    return lin.out()


def substitute_A(P: HopfPresentation, terms: Terms, order: int) -> Dict[tuple, Scalar]:
    """Replace A by sum_{n<=order} (-P0/k)^n/n! (A^-1 by the series of exp(P0/k)).

    Returns a commutative-in-P dict keyed by (rotation/boost prefix, P0
    power, sorted spatial P's); valid because every bracket's A-dependence
    sits in the commuting momentum sector.
    """
    a_id, ainv_id, p0 = P.gid(A), P.gid(AINV), P.gid(P_(0))
    series = {n: Scalar.const(Fraction(1, math.factorial(n))) * (-1 / KAPPA) ** n for n in range(order + 1)}
    out: Dict[tuple, Scalar] = {}
    for w, c in terms.items():
        na = sum(1 for x in w if x == a_id) - sum(1 for x in w if x == ainv_id)
        rest = tuple(x for x in w if x not in (a_id, ainv_id))
        # (sum_n s_n X^n)^na truncated, with X = P0
        pw = {0: ONE}
        factor = series if na >= 0 else {n: s * (-1) ** n for n, s in series.items()}
        for _ in range(abs(na)):
            nxt: Dict[int, Scalar] = {}
            for e1, c1 in pw.items():
                for e2, c2 in factor.items():
                    if e1 + e2 <= order:
                        nxt[e1 + e2] = nxt.get(e1 + e2, ZERO) + c1 * c2
            pw = nxt
        for e, ce in pw.items():
            key = tuple(sorted(rest + (p0,) * e))
            _add(out, key, c * ce)
    return out


def classical_limit_suite(order: int = 4, P: Optional[HopfPresentation] = None) -> SuiteReport:
    """kappa^0 part of every deformed bracket equals the Poincare bracket; no kappa^+n terms."""
    if order < 2:
        raise ValueError("truncation order must be at least 2")
    P = P or build_kalgebra()
    rep = SuiteReport("classical-limit")
    for a, b in itertools.combinations(GENERATORS_10, 2):
        br = bracket(P, a, b)
        sub = substitute_A(P, br.terms, order)
        want = {tuple(sorted(P.word(*w))): c for w, c in classical_bracket(a, b).items()}
        keys = set(sub) | set(want)
        ok = True
        bad = []
        for key in sorted(keys):
            ser = coeff_series(sub.get(key, ZERO), order)
            positive = {n: c for n, c in ser.items() if n < 0}
            if positive:
                ok = False
                bad.append(f"{P.render_word(key)}: k^{-min(positive)} term")
            if ser.get(0, ZERO) != want.get(key, ZERO):
                ok = False
                bad.append(f"{P.render_word(key)}: k^0 {ser.get(0, ZERO)} != {want.get(key, ZERO)}")
        rep.add(f"limit[{a},{b}]", ok, "; ".join(bad))
    return rep
