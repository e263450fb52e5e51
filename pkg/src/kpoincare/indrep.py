"""Infinitesimal induced representation on the mass shell q0^2 = q1^2 + q2^2 + q3^2 + m^2.

Functions live in the exact scalar field (q0 reduced by the shell
relation); the symbol ``l`` stands for p0 = k ln(c - q0 s/m) and is
differentiated by the rule d_i l = -k s q_i / (q0 u), u = m c - q0 s.

Coordinates are the lower q_i, and d_i means d/dq_i, so d/dq^i = -d_i.
With that reading the generators are

    M~_ij = -i (q_i d_j - q_j d_i) + eps_ijk s_k
    M~_i0 =  i q0 d_i + eps_ijk q_j s_k / (q0 + m)
    P~_0  =  l,      P~_j = -k s q_j / u

and every kappa-Poincare bracket closes exactly once exp(-2 P0/k) is
realized as multiplication by (m/u)^2.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from .kalgebra import A, GENERATORS_10, GENERATORS_11, algebra_brackets
from .kgroup import MINKOWSKI
from .report import SuiteReport
from .scalars import (
    COSH,
    IMAG,
    KAPPA,
    MASS,
    ONE,
    SINH,
    ZERO,
    Fraction,
    Scalar,
    ScalarError,
    coeff,
    coeff_series,
)

QFunction = Scalar

Q0 = Scalar.var("q0")
Q = (None, Scalar.var("q1"), Scalar.var("q2"), Scalar.var("q3"))
ELL = Scalar.var("l")
U = MASS * COSH - Q0 * SINH


class UnsupportedOperation(ScalarError):
    pass


def qderive(f: QFunction, i: int) -> QFunction:
    """d f / d q_i along the shell, with q0 and l as functions of the q's."""
    out = f.diff(f"q{i}")
    d0 = f.diff("q0", constrained=True)
    if d0:
        out = out + d0 * Q[i] / Q0
    dl = f.diff("l")
    if dl:
        out = out + dl * dell(i)
    return out


def dell(i: int) -> QFunction:
    return -KAPPA * SINH * Q[i] / (Q0 * U)


def ell_degree(f: QFunction) -> int:
    """Degree of f in the log symbol."""
    n = 0
    while "l" in f.variables():
        f = f.diff("l")
        n += 1
    return n


# ---------------------------------------------------------------------------
# spin matrices


def levi_civita(i: int, j: int, k: int) -> int:
    if len({i, j, k}) < 3:
        return 0
    perm = [i, j, k]
    inv = sum(1 for a in range(3) for b in range(a + 1, 3) if perm[a] > perm[b])
    return -1 if inv % 2 else 1


Matrix = Tuple[Tuple[Scalar, ...], ...]


def _mat(rows) -> Matrix:
    return tuple(tuple(coeff(x) for x in r) for r in rows)


def mat_zero(n: int) -> Matrix:
    return tuple(tuple(ZERO for _ in range(n)) for _ in range(n))


def mat_eye(n: int, value=ONE) -> Matrix:
    return tuple(tuple(coeff(value) if a == b else ZERO for b in range(n)) for a in range(n))


def mat_add(a: Matrix, b: Matrix, scale=1) -> Matrix:
    return tuple(tuple(x + y * scale for x, y in zip(r, t)) for r, t in zip(a, b))


def mat_scale(a: Matrix, c) -> Matrix:
    c = coeff(c)
    return tuple(tuple(x * c for x in r) for r in a)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(tuple(sum((a[i][k] * b[k][j] for k in range(n)), ZERO) for j in range(n)) for i in range(n))


def mat_is_zero(a: Matrix) -> bool:
    return all(not x for r in a for x in r)


SPINS = {"0": Fraction(0), "1/2": Fraction(1, 2), "1": Fraction(1)}


def spin_key(spin) -> str:
    s = str(spin).strip()
    if s in ("0.5", "1/2", "½"):
        return "1/2"
    if s in ("0", "1"):
        return s
    raise ValueError(f"unsupported spin {spin!r}; choose 0, 1/2 or 1")


@dataclass(frozen=True)
class SpinMatrices:
    spin: str
    s: Tuple[Matrix, Matrix, Matrix]

    @property
    def dim(self) -> int:
        return len(self.s[0])


def spin_matrices(spin) -> SpinMatrices:
    key = spin_key(spin)
    i = IMAG
    if key == "0":
        z = mat_zero(1)
        return SpinMatrices(key, (z, z, z))
    if key == "1/2":
        h = Fraction(1, 2)
        s1 = _mat([[0, h], [h, 0]])
        s2 = _mat([[0, -i * h], [i * h, 0]])
        s3 = _mat([[h, 0], [0, -h]])
        return SpinMatrices(key, (s1, s2, s3))
    # adjoint: (s_k)_{ab} = -i eps_kab
    mats = tuple(_mat([[-i * levi_civita(k, a, b) for b in (1, 2, 3)] for a in (1, 2, 3)]) for k in (1, 2, 3))
    return SpinMatrices(key, mats)


def su2_check(sm: SpinMatrices) -> SuiteReport:
    rep = SuiteReport("rep-closure")
    for a, b in ((1, 2), (2, 3), (3, 1)):
        c = 6 - a - b
        lhs = mat_add(mat_mul(sm.s[a - 1], sm.s[b - 1]), mat_mul(sm.s[b - 1], sm.s[a - 1]), -1)
        rhs = mat_scale(sm.s[c - 1], IMAG * levi_civita(a, b, c))
        rep.add(f"spin {sm.spin}: [s{a}, s{b}] = i eps s{c}", mat_is_zero(mat_add(lhs, rhs, -1)))
    return rep


# ---------------------------------------------------------------------------
# operators


@dataclass(frozen=True)
class DiffOperator:
    """sum_i F_i d_i + G, with scalar F_i and a matrix G (l allowed linearly in G)."""

    vec: Tuple[Scalar, Scalar, Scalar]
    mat: Matrix

    @property
    def dim(self) -> int:
        return len(self.mat)

    @classmethod
    def multiplication(cls, f, dim: int) -> "DiffOperator":
        return cls((ZERO, ZERO, ZERO), mat_eye(dim, f))

    def __add__(self, other: "DiffOperator") -> "DiffOperator":
        return DiffOperator(tuple(a + b for a, b in zip(self.vec, other.vec)), mat_add(self.mat, other.mat))

    def __sub__(self, other: "DiffOperator") -> "DiffOperator":
        return DiffOperator(tuple(a - b for a, b in zip(self.vec, other.vec)), mat_add(self.mat, other.mat, -1))

    def scale(self, c) -> "DiffOperator":
        c = coeff(c)
        return DiffOperator(tuple(a * c for a in self.vec), mat_scale(self.mat, c))

    def is_zero(self) -> bool:
        return all(not a for a in self.vec) and mat_is_zero(self.mat)

    def is_multiplication(self) -> bool:
        return all(not a for a in self.vec)

    def derive(self, f: QFunction) -> QFunction:
        """The vector-field part applied to a scalar function."""
        out = ZERO
        for i, F in enumerate(self.vec, start=1):
            if F:
                out = out + F * qderive(f, i)
        return out

    def apply(self, fs: Sequence[QFunction]) -> List[QFunction]:
        """Act on a spinor-valued function."""
        fs = [coeff(x) for x in fs]
        out = [self.derive(f) for f in fs]
        for a in range(self.dim):
            for b in range(self.dim):
                if self.mat[a][b] and fs[b]:
                    out[a] = out[a] + self.mat[a][b] * fs[b]
        return out

    def __str__(self):
        parts = []
        for i, F in enumerate(self.vec, start=1):
            if F:
                parts.append(f"({F})*d{i}")
        if not mat_is_zero(self.mat):
            if self.dim == 1:
                parts.append(f"({self.mat[0][0]})")
            else:
                parts.append("[" + "; ".join(", ".join(str(x) for x in r) for r in self.mat) + "]")
        return " + ".join(parts) or "0"


def _has_ell(m: Matrix) -> bool:
    return any("l" in x.variables() for r in m for x in r if x)


def diffop_commutator(d1: DiffOperator, d2: DiffOperator) -> DiffOperator:
    """[X + f, Y + g] = [X, Y] + X(g) - Y(f) + [f, g]."""
    if d1.dim != d2.dim:
        raise ValueError("operators act on different spin spaces")
    if _has_ell(d1.mat) and _has_ell(d2.mat):
        raise UnsupportedOperation("product of two l-bearing multiplication parts")
    vec = tuple(d1.derive(d2.vec[i]) - d2.derive(d1.vec[i]) for i in range(3))
    n = d1.dim
    xg = tuple(tuple(d1.derive(d2.mat[a][b]) for b in range(n)) for a in range(n))
    yf = tuple(tuple(d2.derive(d1.mat[a][b]) for b in range(n)) for a in range(n))
    fg = mat_add(mat_mul(d1.mat, d2.mat), mat_mul(d2.mat, d1.mat), -1)
    mat = mat_add(mat_add(xg, yf, -1), fg)
    return DiffOperator(vec, mat)


def _parse_name(name: str) -> Tuple[str, Tuple[int, ...]]:
    name = name.strip().replace("~", "")
    if name == A:
        return "A", ()
    try:
        kind = name[0]
        idx = tuple(int(x) for x in name[name.index("[") + 1:-1].split(","))
    except (ValueError, IndexError):
        raise ValueError(f"unknown generator {name!r}") from None
    if kind not in "MP":
        raise ValueError(f"unknown generator {name!r}")
    return kind, idx


def build_tilde_generator(name: str, spin="0", rotation_sign: int = -1,
                          boost_spin_sign: int = 1) -> DiffOperator:
    """The operator X~ for X in {M[i,j], M[i,0], P[mu], A}.

    ``rotation_sign=+1`` reads d/dq^j as d/dq_j (the sign slip kept as a
    negative control); the default treats d/dq^j = -d/dq_j.
    """
    sm = spin_matrices(spin)
    n = sm.dim
    kind, idx = _parse_name(name)
    zero3 = (ZERO, ZERO, ZERO)
    if kind == "A":
        return DiffOperator.multiplication(MASS / U, n)
    if kind == "P":
        (mu,) = idx
        if mu == 0:
            return DiffOperator.multiplication(ELL, n)
        if mu in (1, 2, 3):
            return DiffOperator.multiplication(-KAPPA * SINH * Q[mu] / U, n)
        raise ValueError(f"unknown generator {name!r}")
    i, j = idx
    if j == 0 and i in (1, 2, 3):
        vec = [ZERO, ZERO, ZERO]
        vec[i - 1] = IMAG * Q0
        mat = mat_zero(n)
        for jj in (1, 2, 3):
            for kk in (1, 2, 3):
                e = levi_civita(i, jj, kk)
                if e:
                    mat = mat_add(mat, mat_scale(sm.s[kk - 1], e * boost_spin_sign * Q[jj] / (Q0 + MASS)))
        return DiffOperator(tuple(vec), mat)
    if {i, j} <= {1, 2, 3} and i != j:
        vec = [ZERO, ZERO, ZERO]
        c = IMAG * rotation_sign
        vec[j - 1] = vec[j - 1] + c * Q[i]
        vec[i - 1] = vec[i - 1] - c * Q[j]
        mat = mat_zero(n)
        for kk in (1, 2, 3):
            e = levi_civita(i, j, kk)
            if e:
                mat = mat_add(mat, mat_scale(sm.s[kk - 1], e))
        return DiffOperator(tuple(vec), mat)
    raise ValueError(f"unknown generator {name!r}")


def realize_word(word: Tuple[str, ...], spin, a_squared: QFunction, **signs) -> DiffOperator:
    """A bracket right-hand-side word as an operator: one generator, or a product of multiplications."""
    n = spin_matrices(spin).dim
    if not word:
        return DiffOperator.multiplication(ONE, n)
    if all(x == A for x in word):
        if len(word) == 2:
            return DiffOperator.multiplication(a_squared, n)
        return DiffOperator.multiplication((MASS / U) ** len(word), n)
    ops = [build_tilde_generator(x, spin, **signs) for x in word]
    if len(ops) == 1:
        return ops[0]
    if not all(o.is_multiplication() for o in ops):
        raise UnsupportedOperation("product of differential operators in a bracket image")
    val = mat_eye(n)
    for o in ops:
        if _has_ell(val) and _has_ell(o.mat):
            raise UnsupportedOperation("product of two l-bearing multiplication parts")
        val = mat_mul(val, o.mat)
    return DiffOperator((ZERO, ZERO, ZERO), val)


A_SQUARED = {"m/u": (MASS / U) ** 2, "u/m": (U / MASS) ** 2}


def closure_suite(spin="0", metric: Sequence[int] = MINKOWSKI, a_squared: str = "m/u",
                  include_a: bool = True, **signs) -> SuiteReport:
    """Every kappa-Poincare bracket as an identity of operators at the given spin."""
    key = spin_key(spin)
    rep = SuiteReport("rep-closure")
    rep.extend(su2_check(spin_matrices(key)))
    brackets = algebra_brackets(metric)
    a2 = A_SQUARED[a_squared]
    names = GENERATORS_11 if include_a else GENERATORS_10
    ops = {x: build_tilde_generator(x, key, **signs) for x in names}
    for a, b in itertools.combinations(names, 2):
        lhs = diffop_commutator(ops[a], ops[b])
        rhs = DiffOperator((ZERO, ZERO, ZERO), mat_zero(spin_matrices(key).dim))
        for word, c in brackets[(a, b)].items():
            rhs = rhs + realize_word(word, key, a2, **signs).scale(c)
        res = lhs - rhs
        rep.add(f"spin {key}: [{a}~, {b}~]", res.is_zero(), res)
    return rep


# ---------------------------------------------------------------------------
# deformed momentum and the tilde map


def deform_momentum() -> Tuple[QFunction, Tuple[QFunction, QFunction, QFunction]]:
    """E = exp(p0/k) = u/m and p_j = -k s q_j / u."""
    E = U / MASS
    return E, tuple(-KAPPA * SINH * Q[j] / U for j in (1, 2, 3))


def dispersion_residual() -> QFunction:
    """k^2 (E - 2 + 1/E) - E |p|^2 - 2 k^2 (c - 1); zero on the shell."""
    E, p = deform_momentum()
    lhs = KAPPA ** 2 * (E - 2 + E.inv()) - E * sum((x * x for x in p), ZERO)
    return lhs - 2 * KAPPA ** 2 * (COSH - 1)


def tilde_q() -> Tuple[QFunction, QFunction, QFunction, QFunction]:
    q0t = MASS * (Q0 * COSH - MASS * SINH) / U
    return (q0t,) + tuple(MASS * Q[k] / U for k in (1, 2, 3))


def momentum_shell_suite() -> SuiteReport:
    """Dispersion, rest-point values and tilde-map shell preservation."""
    rep = SuiteReport("momentum-shell")
    E, p = deform_momentum()
    rep.add("u = m c - q0 s is a nonzero element", bool(U), U)
    rep.expect_zero("k^2(E - 2 + 1/E) - E|p|^2 = 2k^2(c - 1)", dispersion_residual())
    rest = {"q0": MASS, "q1": ZERO, "q2": ZERO, "q3": ZERO}
    rep.add("rest point: E = c - s", E.subs(rest) == COSH - SINH, E.subs(rest))
    rep.add("rest point: p_j = 0", all(not x.subs(rest) for x in p))
    qt = tilde_q()
    shell = qt[0] ** 2 - sum((x * x for x in qt[1:]), ZERO) - MASS ** 2
    rep.expect_zero("tilde q stays on the shell", shell)
    want = (MASS, ZERO, ZERO, ZERO)
    rep.add("tilde q fixes the rest point", all(x.subs(rest) == w for x, w in zip(qt, want)))
    return rep


def shell_limit_suite(order: int = 4) -> SuiteReport:
    """p_j -> -q_j, k^2 (E - 2 + 1/E) -> q0^2 and tilde q -> q at order k^0."""
    rep = SuiteReport("classical-limit")
    E, p = deform_momentum()
    qt = tilde_q()
    qs = (Q0,) + Q[1:]
    for j in (1, 2, 3):
        ser = coeff_series(p[j - 1], order)
        rep.add(f"p_{j} -> -q_{j} as k -> oo", ser.get(0, ZERO) == -Q[j] and not any(n < 0 and c for n, c in ser.items()),
                ser)
    ser = coeff_series(KAPPA ** 2 * (E - 2 + E.inv()), order)
    rep.add("k^2(E - 2 + 1/E) -> q0^2 as k -> oo", ser.get(0, ZERO) == Q0 ** 2
            and not any(n < 0 and c for n, c in ser.items()), ser)
    for mu in range(4):
        ser = coeff_series(qt[mu], order)
        rep.add(f"tilde q_{mu} -> q_{mu} as k -> oo", ser.get(0, ZERO) == qs[mu]
                and not any(n < 0 and c for n, c in ser.items()), ser)
    return rep
