"""Independent sympy readings of canonical scalars, used as test oracles."""
import sympy as sp

from kpoincare.scalars import var_name

s, m, k = sp.symbols("s m k", positive=True)
q1, q2, q3 = sp.symbols("q1 q2 q3", real=True)
c = sp.sqrt(1 + s ** 2)
q0 = sp.sqrt(q1 ** 2 + q2 ** 2 + q3 ** 2 + m ** 2)
u = m * c - q0 * s
ENV = {"I": sp.I, "s": s, "c": c, "m": m, "k": k, "q1": q1, "q2": q2, "q3": q3, "q0": q0,
       "l": k * sp.log(u / m)}


def sympy_value(x, env=None):
    """Read a Scalar with c and q0 as explicit square roots and l as k*log(u/m)."""
    env = dict(ENV, **(env or {}))

    def poly(p):
        out = 0
        for mono, cf in p.items():
            term = sp.Rational(int(cf.numerator), int(cf.denominator))
            for v, e in mono:
                name = var_name(v)
                term *= (env[name] if name in env else sp.Symbol(name)) ** e
            out += term
        return out

    return poly(x.num) / poly(x.den)


def vanishes(expr, points=3):
    """Zero test: simplify, falling back to 60-digit evaluation at a few rational points."""
    expr = sp.together(expr)
    if sp.simplify(expr) == 0:
        return True
    subs = [{s: sp.Rational(3, 4), m: 2, k: 5, q1: sp.Rational(1, 3), q2: -1, q3: sp.Rational(2, 7)},
            {s: sp.Rational(5, 12), m: sp.Rational(1, 2), k: -3, q1: 2, q2: sp.Rational(3, 5), q3: 1},
            {s: 2, m: 3, k: sp.Rational(7, 2), q1: -1, q2: 4, q3: sp.Rational(-1, 2)}][:points]
    return all(abs(sp.N(expr.subs(pt), 60)) < 1e-40 for pt in subs)
