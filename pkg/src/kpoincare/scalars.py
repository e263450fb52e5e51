"""Exact scalars: fractions of polynomials over Q modulo quadratic relations.

Every scalar in the package lives in one field.  Polynomials are sparse
dicts ``{monomial: Fraction}`` where a monomial is a sorted tuple of
``(variable_index, exponent)`` pairs.  Three variables are *quadratic*:

    I   with I**2 = -1                      (the imaginary unit)
    c   with c**2 = 1 + s**2                (cosh m/k, s = sinh m/k)
    q0  with q0**2 = q1**2 + q2**2 + q3**2 + m**2   (the mass shell)

A numerator is kept at degree <= 1 in each quadratic variable, a
denominator is free of them, and numerator and denominator are coprime
with a monic denominator.  That makes the representation canonical, so
equality is structural.  ``k`` denotes the deformation parameter kappa.
"""
from __future__ import annotations

from fractions import Fraction as _PyFraction
from functools import lru_cache
from math import factorial, lcm
from typing import Dict, Iterable, Tuple, Union

try:  # gmpy2 rationals are an order of magnitude faster than fractions.Fraction
    from gmpy2 import mpq as Fraction
except ImportError:  # pragma: no cover
    Fraction = _PyFraction

Monomial = Tuple[Tuple[int, int], ...]
Poly = Dict[Monomial, Fraction]

ONE_MONO: Monomial = ()


class ScalarError(ArithmeticError):
    pass


class UnsupportedInput(ScalarError):
    """Raised when a series expansion at k = oo does not exist."""


# ---------------------------------------------------------------------------
# variable registry

_names: list = []
_index: dict = {}
_relations: Dict[int, Poly] = {}


def var_index(name: str) -> int:
    try:
        return _index[name]
    except KeyError:
        _index[name] = len(_names)
        _names.append(name)
        return _index[name]


def var_name(idx: int) -> str:
    return _names[idx]


for _n in ("I", "k", "m", "s", "c", "q1", "q2", "q3", "q0", "l"):
    var_index(_n)

I_, K_, M_, S_, C_, Q1_, Q2_, Q3_, Q0_, L_ = range(10)

_relations[I_] = {ONE_MONO: Fraction(-1)}
_relations[C_] = {ONE_MONO: Fraction(1), ((S_, 2),): Fraction(1)}
_relations[Q0_] = {
    ((Q1_, 2),): Fraction(1),
    ((Q2_, 2),): Fraction(1),
    ((Q3_, 2),): Fraction(1),
    ((M_, 2),): Fraction(1),
}
QUADRATIC = frozenset(_relations)


# ---------------------------------------------------------------------------
# sparse polynomial kernel (plain functions on dicts)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        va, ea = a[i]
        vb, eb = b[j]
        if va == vb:
            out.append((va, ea + eb))
            i += 1
            j += 1
        elif va < vb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def _mono_has_quad_square(m: Monomial) -> bool:
    for v, e in m:
        if e >= 2 and v in QUADRATIC:
            return True
    return False


@lru_cache(maxsize=None)
def _reduce_mono(m: Monomial) -> Tuple[Tuple[Monomial, Fraction], ...]:
    """Rewrite a monomial so every quadratic variable has degree <= 1."""
    acc: Poly = {ONE_MONO: Fraction(1)}
    rest = []
    for v, e in m:
        if v in QUADRATIC and e >= 2:
            if e % 2:
                rest.append((v, 1))
            for _ in range(e // 2):
                acc = _mul_raw(acc, _relations[v])
        else:
            rest.append((v, e))
    base = tuple(rest)
    out: Poly = {}
    for mono, coef in acc.items():
        mm = _mono_mul(mono, base)
        if _mono_has_quad_square(mm):
            for m2, c2 in _reduce_mono(mm):
                _addto(out, m2, coef * c2)
        else:
            _addto(out, mm, coef)
    return tuple(out.items())


def _addto(p: Poly, mono: Monomial, coef) -> None:
    val = p.get(mono)
    if val is None:
        if coef:
            p[mono] = coef
    else:
        val += coef
        if val:
            p[mono] = val
        else:
            del p[mono]


def _mul_raw(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            _addto(out, _mono_mul(ma, mb), ca * cb)
    return out


def poly_mul(a: Poly, b: Poly) -> Poly:
    """Product of reduced polynomials, reduced again."""
    out: Poly = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            mm = _mono_mul(ma, mb)
            cc = ca * cb
            if _mono_has_quad_square(mm):
                for m2, c2 in _reduce_mono(mm):
                    _addto(out, m2, cc * c2)
            else:
                _addto(out, mm, cc)
    return out


def poly_add(a: Poly, b: Poly, scale=1) -> Poly:
    out = dict(a)
    for m, c in b.items():
        _addto(out, m, c * scale)
    return out


def poly_scale(a: Poly, s) -> Poly:
    if not s:
        return {}
    return {m: c * s for m, c in a.items()}


def poly_reduce(a: Poly) -> Poly:
    out: Poly = {}
    for m, c in a.items():
        if _mono_has_quad_square(m):
            for m2, c2 in _reduce_mono(m):
                _addto(out, m2, c * c2)
        else:
            _addto(out, m, c)
    return out


def _mono_key(m: Monomial):
    # graded, then lexicographic on (var, exp) pairs
    return (sum(e for _, e in m), tuple((-v, e) for v, e in m))


def _leading(p: Poly) -> Monomial:
    return max(p, key=_mono_key)


def _mono_div(a: Monomial, b: Monomial) -> Monomial:
    d = dict(a)
    for v, e in b:
        left = d[v] - e
        if left:
            d[v] = left
        else:
            del d[v]
    return tuple(sorted(d.items()))


def _mono_gcd(monos: Iterable[Monomial]) -> Monomial:
    it = iter(monos)
    g = dict(next(it))
    for m in it:
        if not g:
            break
        md = dict(m)
        for v in list(g):
            e = md.get(v, 0)
            if e < g[v]:
                if e:
                    g[v] = e
                else:
                    del g[v]
    return tuple(sorted(g.items()))


def _vars_of(p: Poly) -> set:
    return {v for m in p for v, _ in m}


# sympy is only needed for gcds of non-monomial denominators
@lru_cache(maxsize=None)
def _sympy_ring(nvars: int):
    from sympy import QQ
    from sympy.polys.rings import ring

    return ring(",".join(f"x{i}" for i in range(nvars)), QQ)[0]


def _to_sympy(p: Poly, order: list, R):
    pos = {v: i for i, v in enumerate(order)}
    n = len(order)
    d = {}
    for m, c in p.items():
        e = [0] * n
        for v, x in m:
            e[pos[v]] = x
        d[tuple(e)] = R.domain(int(c.numerator), int(c.denominator))
    return R.from_dict(d)


def _from_sympy(sp, order: list) -> Poly:
    out: Poly = {}
    for e, c in sp.items():
        mono = tuple((order[i], x) for i, x in enumerate(e) if x)
        out[mono] = Fraction(int(c.numerator), int(c.denominator))
    return out


def _poly_cofactors(a: Poly, b: Poly):
    order = sorted(_vars_of(a) | _vars_of(b))
    R = _sympy_ring(len(order))
    _, ca, cb = _to_sympy(a, order, R).cofactors(_to_sympy(b, order, R))
    return _from_sympy(ca, order), _from_sympy(cb, order)


def _split(p: Poly, t: int):
    """p = a + b*t with a, b free of t (t has degree <= 1 in p)."""
    a: Poly = {}
    b: Poly = {}
    for m, c in p.items():
        rest = tuple(x for x in m if x[0] != t)
        if len(rest) != len(m):
            b[rest] = c
        else:
            a[m] = c
    return a, b


# ---------------------------------------------------------------------------
# the field element


Number = Union[int, _PyFraction]


class Scalar:
    """Canonical fraction ``num/den``; immutable and hashable."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Poly, den: Poly, _canonical: bool = False):
        if not _canonical:
            num, den = _canonicalize(num, den)
        self.num = num
        self.den = den
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def const(cls, value: Number) -> "Scalar":
        value = Fraction(value)
        if not value:
            return ZERO
        return cls({ONE_MONO: value}, {ONE_MONO: Fraction(1)}, True)

    @classmethod
    def var(cls, name: str) -> "Scalar":
        return cls({((var_index(name), 1),): Fraction(1)}, {ONE_MONO: Fraction(1)}, True)

    @classmethod
    def fraction(cls, num: "Scalar", den: "Scalar") -> "Scalar":
        return num / den

    # predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_polynomial(self) -> bool:
        return self.den == {ONE_MONO: Fraction(1)}

    def constant_value(self):
        """The rational/Gaussian value if this scalar is a constant, else None."""
        if not self.is_polynomial():
            return None
        if all(m == ONE_MONO or m == ((I_, 1),) for m in self.num):
            return self
        return None

    def variables(self) -> set:
        return {var_name(v) for v in _vars_of(self.num) | _vars_of(self.den)}

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            num = poly_add(self.num, other.num)
            if self.den == _ONE_POLY:
                return Scalar(num, _ONE_POLY, True)
            return _from_reduced(num, self.den)
        return Scalar(
            poly_add(poly_mul(self.num, other.den), poly_mul(other.num, self.den)),
            poly_mul(self.den, other.den),
        )

    __radd__ = __add__

    def __neg__(self):
        return Scalar({m: -c for m, c in self.num.items()}, self.den, True)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if type(other) in _RATIONAL_TYPES:
            if other == 1:
                return self
            if not other or not self.num:
                return ZERO
            return Scalar(poly_scale(self.num, other), self.den, True)
        if other is ONE:
            return self
        if self is ONE:
            return other
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not self.num or not other.num:
            return ZERO
        if len(other.num) == 1 and other.den == _ONE_POLY:
            (mo, co), = other.num.items()
            if mo == ONE_MONO:
                return Scalar(poly_scale(self.num, co), self.den, True)
        if len(self.num) == 1 and self.den == _ONE_POLY:
            (mo, co), = self.num.items()
            if mo == ONE_MONO:
                return Scalar(poly_scale(other.num, co), other.den, True)
        num = poly_mul(self.num, other.num)
        if self.den == _ONE_POLY and other.den == _ONE_POLY:
            return Scalar(num, _ONE_POLY, True)
        den = poly_mul(self.den, other.den)
        if len(den) == 1:
            return _from_reduced(num, den)
        return Scalar(num, den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not other.num:
            raise ZeroDivisionError("division by a scalar that reduces to 0")
        return Scalar(poly_mul(self.num, other.den), poly_mul(self.den, other.num))

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def inv(self) -> "Scalar":
        return ONE / self

    def __pow__(self, n: int):
        if n < 0:
            return (ONE / self) ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # comparison ---------------------------------------------------------
    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return False
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((frozenset(self.num.items()), frozenset(self.den.items())))
        return self._hash

    # calculus and substitution -----------------------------------------
    def diff(self, name: str, constrained: bool = False) -> "Scalar":
        """Partial derivative treating every other variable as independent.

        Differentiating by a variable with a quadratic relation is only
        meaningful inside a chain rule that is tangent to the relation;
        pass ``constrained=True`` to get the representative's partial.
        """
        v = var_index(name)
        if v in QUADRATIC and not constrained:
            raise ScalarError(f"cannot differentiate by constrained variable {name}")
        dn = _pdiff(self.num, v)
        dd = _pdiff(self.den, v)
        if not dd:
            return Scalar(dn, self.den)
        top = poly_add(poly_mul(dn, self.den), poly_mul(self.num, dd), -1)
        return Scalar(top, poly_mul(self.den, self.den))

    def subs(self, mapping: Dict[str, "Scalar"]) -> "Scalar":
        idx = {var_index(k): _coerce(v) for k, v in mapping.items()}
        return _eval_poly(self.num, idx) / _eval_poly(self.den, idx)

    def conjugate(self) -> "Scalar":
        """Complex conjugate, treating every variable other than I as real."""
        return self.subs({"I": -IMAG})

    def __repr__(self):
        return f"Scalar({render(self)!r})"

    def __str__(self):
        return render(self)


_ONE_POLY: Poly = {ONE_MONO: Fraction(1)}


def _pdiff(p: Poly, v: int) -> Poly:
    out: Poly = {}
    for m, c in p.items():
        for j, (w, e) in enumerate(m):
            if w == v:
                nm = m[:j] + (((w, e - 1),) if e > 1 else ()) + m[j + 1:]
                _addto(out, nm, c * e)
                break
    return out


def _eval_poly(p: Poly, idx: Dict[int, Scalar]) -> Scalar:
    out = ZERO
    cache: dict = {}
    for m, c in p.items():
        term = Scalar.const(c)
        rest = []
        for v, e in m:
            if v in idx:
                key = (v, e)
                if key not in cache:
                    cache[key] = idx[v] ** e
                term = term * cache[key]
            else:
                rest.append((v, e))
        if rest:
            term = term * Scalar({tuple(rest): Fraction(1)}, _ONE_POLY)
        out = out + term
    return out


_RATIONAL_TYPES = (int, Fraction, _PyFraction)


def _coerce(x) -> Scalar:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, _PyFraction)) or type(x) is Fraction:
        return Scalar.const(x)
    return NotImplemented


def _from_reduced(num: Poly, den: Poly) -> Scalar:
    """Canonical form when num is reduced and den is a monic quadratic-free monomial."""
    if not num:
        return ZERO
    if len(den) == 1:
        (dm, dc), = den.items()
        if dc == 1 and not any(v in QUADRATIC for v, _ in dm):
            g = _mono_gcd(list(num) + [dm])
            if g:
                num = {_mono_div(m, g): c for m, c in num.items()}
                den = {_mono_div(dm, g): dc}
            return Scalar(num, den, True)
    return Scalar(num, den)


def _canonicalize(num: Poly, den: Poly):
    num = poly_reduce(num)
    den = poly_reduce(den)
    if not den:
        raise ZeroDivisionError("denominator reduces to 0")
    if not num:
        return {}, _ONE_POLY
    # clear quadratic variables from the denominator by conjugation
    while True:
        quads = _vars_of(den) & QUADRATIC
        if not quads:
            break
        t = min(quads)
        a, b = _split(den, t)
        conj: Poly = {}
        for m, c in a.items():
            _addto(conj, m, c)
        for m, c in b.items():
            _addto(conj, _mono_mul(m, ((t, 1),)), -c)
        num = poly_mul(num, conj)
        den = poly_mul(den, conj)
        if not den:
            raise ZeroDivisionError("denominator reduces to 0")
        if not num:
            return {}, _ONE_POLY
    # cancel the common monomial factor
    g = _mono_gcd(list(num) + list(den))
    if g:
        num = {_mono_div(m, g): c for m, c in num.items()}
        den = {_mono_div(m, g): c for m, c in den.items()}
    if len(den) > 1:
        cn, cd = _poly_cofactors(num, den)
        num, den = cn, cd
    lc = den[_leading(den)]
    if lc != 1:
        inv = 1 / lc
        num = {m: c * inv for m, c in num.items()}
        den = {m: c * inv for m, c in den.items()}
    return num, den


ZERO = Scalar({}, {ONE_MONO: Fraction(1)}, True)
ONE = Scalar({ONE_MONO: Fraction(1)}, {ONE_MONO: Fraction(1)}, True)
IMAG = Scalar.var("I")
KAPPA = Scalar.var("k")
MASS = Scalar.var("m")
SINH = Scalar.var("s")
COSH = Scalar.var("c")

Coefficient = Scalar


def coeff(x) -> Scalar:
    """Coerce an int, Fraction, complex with rational parts, or Scalar."""
    if isinstance(x, complex):
        return Scalar.const(Fraction(x.real)) + Scalar.const(Fraction(x.imag)) * IMAG
    out = _coerce(x)
    if out is NotImplemented:
        raise TypeError(f"cannot coerce {x!r} to a scalar")
    return out


def gaussian(re: Number, im: Number = 0) -> Scalar:
    return Scalar.const(re) + Scalar.const(im) * IMAG


def coeff_normalize(num: Scalar, den: Scalar) -> Scalar:
    """Canonical form of ``num/den``; raises ZeroDivisionError on a zero denominator."""
    return coeff(num) / coeff(den)


# ---------------------------------------------------------------------------
# rendering


def _fmt_mono(m: Monomial) -> str:
    parts = []
    for v, e in m:
        name = "i" if v == I_ else var_name(v)
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def render_poly(p: Poly) -> str:
    if not p:
        return "0"
    items = sorted(p.items(), key=lambda mc: _mono_key(mc[0]), reverse=True)
    out = []
    for j, (m, c) in enumerate(items):
        neg = c < 0
        a = -c if neg else c
        ms = _fmt_mono(m)
        if not ms:
            body = str(a)
        elif a == 1:
            body = ms
        else:
            body = f"{a}*{ms}"
        if j == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def _is_atomic(text: str) -> bool:
    return not any(ch in text[1:] for ch in "+-") and "/" not in text


def render(x: Scalar) -> str:
    """Deterministic human-readable rendering of a canonical scalar."""
    if not x.num:
        return "0"
    # move rational denominators of the numerator into the denominator
    L = 1
    for c in x.num.values():
        L = lcm(L, c.denominator)
    num = {m: c * L for m, c in x.num.items()}
    den = {m: c * L for m, c in x.den.items()}
    ns = render_poly(num)
    if den == {ONE_MONO: Fraction(1)}:
        return ns
    ds = render_poly(den)
    if not _is_atomic(ns) or ns.startswith("-") and len(num) > 1:
        ns = f"({ns})"
    if not _is_atomic(ds) or ("*" in ds):
        ds = f"({ds})"
    return f"{ns}/{ds}"


# ---------------------------------------------------------------------------
# Laurent expansion at k = oo in t = 1/k, with c = cosh(m t), s = sinh(m t)


class Laurent:
    """Truncated series sum_{n} coeffs[n] * t**n, exact below ``prec``."""

    __slots__ = ("coeffs", "prec")

    def __init__(self, coeffs: Dict[int, Scalar], prec: int):
        self.coeffs = {n: c for n, c in coeffs.items() if n < prec and c}
        self.prec = prec

    def valuation(self):
        return min(self.coeffs) if self.coeffs else None

    def __add__(self, other: "Laurent") -> "Laurent":
        prec = min(self.prec, other.prec)
        out = dict(self.coeffs)
        for n, c in other.coeffs.items():
            out[n] = out.get(n, ZERO) + c
        return Laurent(out, prec)

    def __mul__(self, other: "Laurent") -> "Laurent":
        va = self.valuation()
        vb = other.valuation()
        if va is None or vb is None:
            # a series known to vanish below prec has valuation >= prec
            va = self.prec if va is None else va
            vb = other.prec if vb is None else vb
            return Laurent({}, min(self.prec + vb, other.prec + va))
        prec = min(self.prec + vb, other.prec + va)
        out: Dict[int, Scalar] = {}
        for n, c in self.coeffs.items():
            for k, d in other.coeffs.items():
                if n + k < prec:
                    out[n + k] = out.get(n + k, ZERO) + c * d
        return Laurent(out, prec)

    def scale(self, c: Scalar) -> "Laurent":
        return Laurent({n: c * x for n, x in self.coeffs.items()}, self.prec)

    def inverse(self) -> "Laurent":
        v = self.valuation()
        if v is None:
            raise UnsupportedInput("series vanishes to the working precision")
        rel = self.prec - v
        a0 = self.coeffs[v]
        inv0 = ONE / a0
        b = {0: inv0}
        for n in range(1, rel):
            acc = ZERO
            for j in range(1, n + 1):
                aj = self.coeffs.get(v + j)
                if aj is not None and (n - j) in b:
                    acc = acc + aj * b[n - j]
            b[n] = -acc * inv0
        return Laurent({n - v: c for n, c in b.items()}, rel - v)


def _hyperbolic(which: str, prec: int) -> Laurent:
    out = {}
    start = 1 if which == "s" else 0
    for n in range(start, prec, 2):
        out[n] = MASS ** n / factorial(n)
    return Laurent(out, prec)


def _poly_series(p: Poly, prec: int) -> Laurent:
    """Series of a polynomial in k, s, c (others ride along in coefficients)."""
    total = Laurent({}, prec)
    kdeg = max((dict(m).get(K_, 0) for m in p), default=0)
    work = prec + kdeg
    sser = _hyperbolic("s", work)
    cser = _hyperbolic("c", work)
    for m, c in p.items():
        term = Laurent({0: Scalar.const(c)}, work)
        rest = []
        for v, e in m:
            if v == K_:
                term = Laurent({n - e: x for n, x in term.coeffs.items()}, term.prec - e)
            elif v == S_:
                for _ in range(e):
                    term = term * sser
            elif v == C_:
                for _ in range(e):
                    term = term * cser
            else:
                rest.append((v, e))
        if rest:
            term = term.scale(Scalar({tuple(rest): Fraction(1)}, _ONE_POLY))
        total = total + Laurent(term.coeffs, min(term.prec, prec))
    return Laurent(total.coeffs, prec)


def _series_at(x: Scalar, prec: int) -> Laurent:
    num = _poly_series(x.num, prec)
    den = _poly_series(x.den, prec)
    return num * den.inverse()


def coeff_series(x: Scalar, order: int) -> Dict[int, Scalar]:
    """Laurent coefficients of ``x`` in powers of 1/k, from the leading power to ``order``.

    Returns ``{n: coefficient of k**-n}``; coefficients are free of k, s, c.
    """
    x = coeff(x)
    if x.is_zero():
        return {}
    extra = 4
    for _ in range(8):
        try:
            den_v = _poly_series(x.den, order + extra).valuation()
            num_v = _poly_series(x.num, order + extra).valuation()
        except UnsupportedInput:
            den_v = None
        if den_v is not None and num_v is not None:
            break
        extra *= 2
    else:
        raise UnsupportedInput(f"no Laurent expansion at k=oo for {render(x)}")
    # enough precision on both pieces to fix every coefficient up to t**order
    prec = order + 1 + 2 * max(den_v, 0) + max(-num_v, 0) + abs(den_v) + 2
    ser = _series_at(x, prec)
    if ser.prec <= order:
        raise UnsupportedInput("insufficient precision")  # pragma: no cover
    return {n: c for n, c in sorted(ser.coeffs.items()) if n <= order}


def series_to_scalar(series: Dict[int, Scalar]) -> Scalar:
    return sum((c * KAPPA ** (-n) for n, c in series.items()), ZERO)
