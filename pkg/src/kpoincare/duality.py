"""Hopf pairing between the kappa-Poincare algebra and group.

Generator values:

* <P_mu, v^nu> = i delta_mu^nu
* <M_{mu nu}, L^a_b> = i (d/dL^{mu nu} - d/dL^{nu mu}) L^a_b at L = 1, with
  L^{mu nu} = L^mu_r g^{r nu} (raise the second index)
* <A^{+-1}, f> = sum_n (-+1/k)^n / n! <P0^n, f>, cut off at the v-degree of f

Products follow <XY, f> = <X (x) Y, Delta f> and <X, fg> = <Delta X, f (x) g>.
Words are paired as they stand; nothing is normal ordered first, so the
relation-kernel checks actually test something.
"""
from __future__ import annotations

import math
import random
from typing import Dict, Optional, Tuple

from .hopfcore import AlgebraElement, HopfPresentation, Terms, Word, sample_words
from .kalgebra import A, AINV, build_kalgebra
from .kgroup import L, MINKOWSKI, build_kgroup, v
from .report import SuiteReport
from .scalars import IMAG, KAPPA, ONE, ZERO, Fraction, Scalar

ROUTES = ("x-first", "f-first")


class PairingError(RuntimeError):
    pass


def _parse(name: str):
    kind = name[0]
    inside = name[name.index("[") + 1:-1]
    return kind, tuple(int(x) for x in inside.split(","))


class Pairing:
    """<X, f> for X in the algebra presentation and f in the group presentation.

    ``raising`` picks which index of L^mu_nu is raised when reading off the
    Lorentz pairing; "first" is the wrong convention, kept as a control.
    """

    def __init__(self, algebra: Optional[HopfPresentation] = None,
                 group: Optional[HopfPresentation] = None, raising: str = "second"):
        self.alg = algebra or build_kalgebra()
        self.grp = group or build_kgroup()
        if raising not in ("second", "first"):
            raise ValueError("raising must be 'second' or 'first'")
        self.raising = raising
        g = MINKOWSKI
        self.metric = g
        self._a_ids = {self.alg.gid(A): -1, self.alg.gid(AINV): 1}
        self._p0 = self.alg.gid("P[0]")
        self._vids = {self.grp.gid(v(m)) for m in range(4)}
        self._lids = {self.grp.gid(L(a, b)): (a, b) for a in range(4) for b in range(4)}
        self._table: Dict[Tuple[int, int], Scalar] = {}
        for xg in self.alg.generators:
            if xg.name in (A, AINV):
                continue
            kind, idx = _parse(xg.name)
            for fg in self.grp.generators:
                fk, fidx = _parse(fg.name)
                val = ZERO
                if kind == "P" and fk == "v" and idx[0] == fidx[0]:
                    val = IMAG
                elif kind == "M" and fk == "L":
                    val = self._lorentz(idx[0], idx[1], fidx[0], fidx[1])
                self._table[(self.alg.gid(xg.name), self.grp.gid(fg.name))] = val
        self._cache: Dict[tuple, Scalar] = {}

    def _lorentz(self, mu, nu, a, b) -> Scalar:
        g = self.metric
        # d L^a_b / d L^{mu nu}: with L^{mu nu} = L^mu_nu g^{nu nu} this is delta delta g_nu_nu
        f = (lambda p, q: g[q]) if self.raising == "second" else (lambda p, q: g[p])
        val = 0
        if a == mu and b == nu:
            val += f(mu, nu)
        if a == nu and b == mu:
            val -= f(nu, mu)
        return IMAG * val

    # -- word level ----------------------------------------------------------
    def vdeg(self, f: Word) -> int:
        return sum(1 for x in f if x in self._vids)

    def _series(self, sign: int, f: Word, route: str) -> Scalar:
        n_max = self.vdeg(f)
        total = ZERO
        for n in range(n_max + 1):
            val = self.pair_words((self._p0,) * n, f, route)
            if val:
                total = total + val * (Scalar.const(sign) / KAPPA) ** n * Fraction(1, math.factorial(n))
        if self.pair_words((self._p0,) * (n_max + 1), f, route):
            raise PairingError("<P0^n, f> nonzero beyond the v-degree of f")
        return total

    def pair_words(self, x: Word, f: Word, route: str = "x-first") -> Scalar:
        key = (x, f, route)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        val = self._pair_words(x, f, route)
        self._cache[key] = val
        return val

    def _pair_words(self, x: Word, f: Word, route: str) -> Scalar:
        if not x:
            return self.grp.counit_word(f)
        if not f:
            return self.alg.counit_word(x)
        if len(x) == 1 and x[0] in self._a_ids and (route == "x-first" or len(f) == 1):
            return self._series(self._a_ids[x[0]], f, route)
        if len(x) == 1 and len(f) == 1:
            return self._table[(x[0], f[0])]
        split_x = len(x) > 1 and (route == "x-first" or len(f) == 1)
        total = ZERO
        if split_x:
            head, rest = x[:1], x[1:]
            for (f1, f2), c in self.grp.delta_word(f).items():
                a = self.pair_words(head, f1, route)
                if a:
                    b = self.pair_words(rest, f2, route)
                    if b:
                        total = total + c * a * b
        else:
            head, rest = f[:1], f[1:]
            for (x1, x2), c in self.alg.delta_word(x).items():
                a = self.pair_words(x1, head, route)
                if a:
                    b = self.pair_words(x2, rest, route)
                    if b:
                        total = total + c * a * b
        return total

    # -- element level ---------------------------------------------------------
    def pair_terms(self, xt: Terms, ft: Terms, route: str = "x-first") -> Scalar:
        total = ZERO
        for x, c in xt.items():
            for f, d in ft.items():
                val = self.pair_words(x, f, route)
                if val:
                    total = total + c * d * val
        return total

    def pair(self, X, f, route: str = "x-first") -> Scalar:
        xt = X.terms if isinstance(X, AlgebraElement) else self.alg.terms_of(X)
        ft = f.terms if isinstance(f, AlgebraElement) else self.grp.terms_of(f)
        return self.pair_terms(xt, ft, route)

    def pair_by_derivative(self, gen: str, f) -> Scalar:
        """Read <P_mu, f(v)> or <M_{mu nu}, f(L)> off the normal form of f as a derivative.

        Only meaningful for f in the matching pure sector (v-words for P,
        L-words for M); mixed words pair through the coproduct instead.
        """
        ft = self.grp.nf_terms(f.terms if isinstance(f, AlgebraElement) else self.grp.terms_of(f))
        kind, idx = _parse(gen)
        total = ZERO
        for w, c in ft.items():
            vs = [x for x in w if x in self._vids]
            ls = [self._lids[x] for x in w if x in self._lids]
            if kind == "P":
                if len(vs) != 1 or vs[0] != self.grp.gid(v(idx[0])):
                    continue
                if all(a == b for a, b in ls):
                    total = total + c * IMAG
            else:
                if vs:
                    continue
                # product rule: differentiate one L factor, the rest at the identity
                for i, (a, b) in enumerate(ls):
                    others = ls[:i] + ls[i + 1:]
                    if all(p == q for p, q in others):
                        total = total + c * self._lorentz(idx[0], idx[1], a, b)
        return total


# ---------------------------------------------------------------------------
# suite


def _rule_difference(P: HopfPresentation, lhs: Word, rhs: Terms) -> Terms:
    out = {lhs: ONE}
    for w, c in rhs.items():
        out[w] = out.get(w, ZERO) - c
    return {w: c for w, c in out.items() if c}


def duality_consistency_suite(max_degree: int = 2, samples: int = 20, seed: int = 0,
                              pairing: Optional[Pairing] = None) -> SuiteReport:
    pr = pairing or Pairing()
    alg, grp = pr.alg, pr.grp
    rep = SuiteReport("duality")
    rep.note(f"seed={seed} samples={samples} max_degree={max_degree}")
    rng = random.Random(seed)
    xs = sample_words(alg, samples, max_degree, seed)
    fs = sample_words(grp, samples, max_degree, seed + 1)

    # the worked example, three ways
    x, f = alg.word("P[1]"), grp.word(v(1), v(0))
    want = ONE / KAPPA
    for route in ROUTES:
        rep.add(f"<P[1], v[1]*v[0]> {route} = 1/k", pr.pair_words(x, f, route) == want,
                pr.pair_words(x, f, route))
    deriv = pr.pair_by_derivative("P[1]", {(v(1), v(0)): ONE})
    rep.add("<P[1], v[1]*v[0]> from the normal form = 1/k", deriv == want, deriv)

    # (a) both expansion orders agree
    bad = []
    for _ in range(samples):
        xw, fw = rng.choice(xs), rng.choice(fs)
        a, b = pr.pair_words(xw, fw, "x-first"), pr.pair_words(xw, fw, "f-first")
        if a != b:
            bad.append(f"<{alg.render_word(xw)}, {grp.render_word(fw)}>: {a} vs {b}")
    for xw in xs[:len(alg.generators)]:
        for fw in fs[:len(grp.generators)]:
            a, b = pr.pair_words(xw, fw, "x-first"), pr.pair_words(xw, fw, "f-first")
            if a != b:
                bad.append(f"<{alg.render_word(xw)}, {grp.render_word(fw)}>: {a} vs {b}")
    rep.add("x-first and f-first expansions agree", not bad, "; ".join(bad[:5]))

    # generator pairings against the derivative reading of normal-ordered f
    bad = []
    pure_v = [fw for fw in fs if pr.vdeg(fw) == len(fw)]
    pure_l = [fw for fw in fs if pr.vdeg(fw) == 0]
    for xg in alg.generators:
        if xg.name in (A, AINV):
            continue
        for fw in (pure_v if xg.name.startswith("P") else pure_l):
            a = pr.pair_words((alg.gid(xg.name),), fw)
            b = pr.pair_by_derivative(xg.name, {fw: ONE})
            if a != b:
                bad.append(f"<{xg.name}, {grp.render_word(fw)}>: {a} vs {b}")
    rep.add("generator pairings match derivatives at the identity", not bad, "; ".join(bad[:5]))

    # (b) relations lie in the kernel, on either side
    bad = []
    for lhs, rhs in sorted(grp.rules.items()):
        diff = _rule_difference(grp, lhs, rhs)
        for xw in rng.sample(xs, min(4, len(xs))):
            val = pr.pair_terms({xw: ONE}, diff)
            if val:
                bad.append(f"<{alg.render_word(xw)}, rule {grp.render_word(lhs)}> = {val}")
    rep.add(f"group relations pair to zero ({len(grp.rules)} rules)", not bad, "; ".join(bad[:5]))
    bad = []
    for lhs, rhs in sorted(alg.rules.items()):
        diff = _rule_difference(alg, lhs, rhs)
        for fw in rng.sample(fs, min(4, len(fs))) + [grp.word(L(1, 0)), grp.word(L(1, 2)), grp.word(v(0), v(1))]:
            val = pr.pair_terms(diff, {fw: ONE})
            if val:
                bad.append(f"<rule {alg.render_word(lhs)}, {grp.render_word(fw)}> = {val}")
    rep.add(f"algebra relations pair to zero ({len(alg.rules)} rules)", not bad, "; ".join(bad[:5]))

    # (c) unit and counit
    bad = [alg.render_word(xw) for xw in xs if pr.pair_words(xw, ()) != alg.counit_word(xw)]
    bad += [grp.render_word(fw) for fw in fs if pr.pair_words((), fw) != grp.counit_word(fw)]
    rep.add("<X, 1> = counit(X) and <1, f> = counit(f)", not bad, ", ".join(bad[:5]))

    # antipodes are adjoint
    bad = []
    for _ in range(samples):
        xw, fw = rng.choice(xs), rng.choice(fs)
        a = pr.pair_terms(alg.antipode_word(xw), {fw: ONE})
        b = pr.pair_terms({xw: ONE}, grp.antipode_word(fw))
        if a != b:
            bad.append(f"<S {alg.render_word(xw)}, {grp.render_word(fw)}>: {a} vs {b}")
    rep.add("<S(X), f> = <X, S(f)>", not bad, "; ".join(bad[:5]))

    # A is a character
    bad = []
    a_w = alg.word(A)
    for _ in range(samples):
        f1, f2 = rng.choice(fs), rng.choice(fs)
        lhs = pr.pair_words(a_w, f1 + f2)
        rhs = pr.pair_words(a_w, f1) * pr.pair_words(a_w, f2)
        if lhs != rhs:
            bad.append(f"{grp.render_word(f1)} | {grp.render_word(f2)}")
    rep.add("<A, fg> = <A, f><A, g>", not bad, "; ".join(bad[:5]))

    # termination bound, asserted
    p0 = alg.gid("P[0]")
    bad = [grp.render_word(fw) for fw in fs if pr.pair_words((p0,) * (pr.vdeg(fw) + 1), fw)]
    rep.add("<P0^n, f> = 0 for n above the v-degree of f", not bad, ", ".join(bad[:5]))
    return rep
