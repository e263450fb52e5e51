import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from kpoincare.hopfcore import GeneratorSpec, HopfPresentation
from kpoincare.indrep import Q0, build_tilde_generator
from kpoincare.kalgebra import AINV, A
from kpoincare.kminkowski import (
    ModeError,
    NormalSymbol,
    Wave,
    antirep_suite,
    composition_suite,
    deformed_derivative,
    eigenvalue,
    extract_compare_suite,
    hat_apply,
    kg_operator_lhs,
    kg_operator_rhs,
    kg_rejected_reading,
    kg_suite,
    leibniz_probe,
    leibniz_suite,
    momentum_extract,
    shell_mass_squared,
    star_multiply,
)
from kpoincare.scalars import COSH, IMAG, KAPPA, MASS, ONE, coeff_series
from oracles import sympy_value

X = NormalSymbol.x
mono = NormalSymbol.monomial


def mink_rewriter():
    """x^j x^0 -> x^0 x^j - (i/k) x^j as a plain rewriting system, independent of the shift rule."""
    P = HopfPresentation("mink", [GeneratorSpec("x0", 0, 0)] + [GeneratorSpec(f"x{j}", 1, j) for j in (1, 2, 3)])
    for j in (1, 2, 3):
        P.set_commutator("x0", f"x{j}", {(f"x{j}",): IMAG / KAPPA})
        for l in range(j + 1, 4):
            P.set_commutator(f"x{j}", f"x{l}", {})
    for n in ("x0", "x1", "x2", "x3"):
        P.set_hopf(n, {(n, ""): 1, ("", n): 1}, {(n,): -1}, 0)
    return P.finalize()


MR = mink_rewriter()


def to_word(exps):
    return tuple(g for mu, e in enumerate(exps) for g in [MR.gid(f"x{mu}")] * e)


def from_terms(terms):
    out = NormalSymbol()
    for w, c in terms.items():
        e = [0, 0, 0, 0]
        for g in w:
            e[int(MR.generators[g].name[1])] += 1
        out = out + mono(e, c)
    return out


def test_star_examples():
    assert star_multiply(X(1), X(0)) == mono((1, 1, 0, 0)) - X(1).scale(IMAG / KAPPA)
    lhs = star_multiply(mono((0, 1, 1, 0)), mono((2, 0, 0, 0)))
    t = -2 * IMAG / KAPPA
    want = mono((2, 1, 1, 0)) + mono((1, 1, 1, 0), 2 * t) + mono((0, 1, 1, 0), t * t)
    assert lhs == want


exps = st.tuples(*[st.integers(0, 2)] * 4).filter(lambda e: sum(e) <= 4)


@settings(max_examples=40, deadline=None)
@given(exps, exps)
def test_star_matches_rewriting(a, b):
    want = from_terms(MR.nf_terms({to_word(a) + to_word(b): ONE}))
    assert star_multiply(mono(a), mono(b)) == want


@settings(max_examples=30, deadline=None)
@given(exps, exps, exps)
def test_star_associative(a, b, c):
    fa, fb, fc = mono(a), mono(b) + X(0), mono(c)
    assert star_multiply(star_multiply(fa, fb), fc) == star_multiply(fa, star_multiply(fb, fc))


def test_plane_wave_composition():
    wa, wb = Wave.symbolic("a"), Wave.symbolic("b")
    prod = star_multiply(NormalSymbol.wave(wa), NormalSymbol.wave(wb))
    ((e, w), c), = prod.terms.items()
    assert e == (0, 0, 0, 0) and c == ONE
    assert w.p0 == wa.p0 + wb.p0
    assert w.E == wa.E * wb.E
    for j in range(3):
        assert w.p[j] == wa.p[j] / wb.E + wb.p[j]


def test_mode_mixing_rejected():
    with pytest.raises(ModeError):
        star_multiply(NormalSymbol.wave(Wave.symbolic()), NormalSymbol.wave(Wave.shell()))


def test_hat_examples():
    assert hat_apply("P[1]", mono((1, 1, 0, 0))) == X(0).scale(IMAG)
    assert hat_apply("M[1,0]", X(1)) == X(0).scale(IMAG)
    assert hat_apply(A, X(0)) == X(0) - NormalSymbol.const(IMAG / KAPPA)
    assert hat_apply(AINV, hat_apply(A, mono((3, 0, 1, 0)))) == mono((3, 0, 1, 0))
    W = NormalSymbol.wave(Wave.symbolic())
    for mu in range(4):
        assert eigenvalue(W, hat_apply(f"P[{mu}]", W)) == Wave.symbolic().momentum(mu)
    with pytest.raises(ValueError):
        hat_apply("Q[1]", W)


def test_antirepresentation():
    rep = antirep_suite(max_degree=3)
    assert len(rep.checks) == 55
    assert rep.passed, [c.name for c in rep.failures]
    assert len(antirep_suite(max_degree=2, include_a=False).checks) == 45


def test_antirep_control():
    rep = antirep_suite(max_degree=2, lower_sign=1)
    assert not rep.passed
    assert any("M[1,0]" in c.name for c in rep.failures)


def test_leibniz():
    got = leibniz_probe("P[1]", X(1), X(0))
    assert got == {"delta": True, "opposite": False}
    assert leibniz_probe("P[0]", X(1), X(0)) == {"delta": True, "opposite": True}
    assert leibniz_probe("M[1,2]", X(1), mono((1, 0, 1, 0))) == {"delta": True, "opposite": True}
    rep = leibniz_suite(max_degree=2, samples=6, seed=1)
    assert rep.passed and len(rep.checks) == 11


def test_deformed_derivative_examples():
    assert deformed_derivative("d0", mono((2, 0, 0, 0))) == X(0).scale(2)
    assert deformed_derivative("di", mono((1, 1, 0, 0)), 1) == X(0) + NormalSymbol.const(IMAG / KAPPA)
    W = NormalSymbol.wave(Wave.symbolic())
    w = Wave.symbolic()
    assert eigenvalue(W, deformed_derivative("di", W, 2)) == -IMAG * w.p[1] * w.E
    with pytest.raises(ValueError):
        deformed_derivative("di", W, 0)


def test_kg_eigenvalues_against_hyperbolic_forms():
    # the displayed operators on exp(-i p x): d/dx0 -> -i p0, Laplacian -> -|p|^2
    p0, k, X2, m = sp.symbols("p0 k X m", positive=True)
    E = sp.exp(p0 / k)
    d0 = k * sp.sin(-sp.I * p0 / k) + sp.I / (2 * k) * (-X2) * sp.exp(sp.I / k * (-sp.I * p0))
    di2 = -X2 * E ** 2  # sum_i (-i p_i E)^2
    box = k ** 2 / 4 * (1 - sp.cos(-sp.I * p0 / k)) - sp.Rational(1, 8) * (-X2) * E
    lhs = d0 ** 2 - di2 + m ** 2 * (1 + m ** 2 / (4 * k ** 2))
    rhs = -16 / k ** 2 * (box + m ** 2 / 8) * (box - k ** 2 / 2 - m ** 2 / 8)
    assert sp.simplify((lhs - rhs).rewrite(sp.exp)) == 0
    # and the engine's eigenvalues agree with these closed forms
    W = NormalSymbol.wave(Wave.symbolic())
    ev = eigenvalue(W, deformed_derivative("box", W))
    got = sympy_value(ev, {"E": E, "k": k, "m": m})
    ps = sp.symbols("p1 p2 p3")
    assert sp.simplify((got - box.subs(X2, sum(x ** 2 for x in ps))).rewrite(sp.exp)) == 0


def test_kg_suite_and_finding():
    rep = kg_suite(4)
    assert rep.passed and len(rep.checks) == 11
    assert coeff_series(shell_mass_squared(), 4)[0] == MASS ** 2
    assert shell_mass_squared() == 2 * KAPPA ** 2 * (COSH - 1)
    f = mono((2, 1, 0, 1))
    assert kg_operator_lhs(f) == kg_operator_rhs(f)


def test_rejected_reading():
    rep = kg_rejected_reading(4)
    assert rep.passed
    assert any("rejected reading" in n for n in rep.notes)


def test_composition_suite():
    rep = composition_suite(seed=3, samples=8, max_degree=4)
    assert rep.passed, [c.name for c in rep.failures]


def test_extract_table():
    assert extract_compare_suite().passed
    assert (momentum_extract("M[1,2]") + build_tilde_generator("M[1,2]")).is_zero()
    m10 = momentum_extract("M[1,0]")
    assert m10.vec[0] == -IMAG * Q0 and m10.is_multiplication() is False
