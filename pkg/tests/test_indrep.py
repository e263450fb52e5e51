import pytest
import sympy as sp

from kpoincare.indrep import (
    ELL,
    Q,
    Q0,
    U,
    DiffOperator,
    UnsupportedOperation,
    build_tilde_generator,
    closure_suite,
    deform_momentum,
    diffop_commutator,
    dispersion_residual,
    ell_degree,
    levi_civita,
    mat_is_zero,
    momentum_shell_suite,
    qderive,
    shell_limit_suite,
    spin_matrices,
    su2_check,
    tilde_q,
)
from kpoincare.kgroup import EUCLIDEAN
from kpoincare.scalars import COSH, IMAG, KAPPA, MASS, ONE, SINH, ZERO, coeff_series
from oracles import ENV, sympy_value, vanishes

q1, q2, q3 = Q[1], Q[2], Q[3]


def test_qderive_examples():
    assert qderive(Q0, 1) == q1 / Q0
    assert qderive(q1, 1) == ONE
    assert qderive(q2, 1) == ZERO
    assert qderive(ONE / (Q0 + MASS), 1) == -q1 / (Q0 * (Q0 + MASS) ** 2)
    # the shell relation differentiates to zero
    assert qderive(Q0 * Q0 - q1 * q1 - q2 * q2 - q3 * q3, 2) == ZERO


@pytest.mark.parametrize("f", [
    ONE / (Q0 + MASS),
    q1 * q2 / U,
    ELL * q3,
    (Q0 * COSH - MASS * SINH) / U,
])
@pytest.mark.parametrize("i", [1, 3])
def test_qderive_against_sympy(f, i):
    qi = sp.Symbol(f"q{i}", real=True)
    want = sp.diff(sympy_value(f), qi)
    assert vanishes(sympy_value(qderive(f, i)) - want)


def test_spin_matrices():
    for spin, dim in (("0", 1), ("1/2", 2), ("1", 3)):
        sm = spin_matrices(spin)
        assert sm.dim == dim
        assert su2_check(sm).passed
    assert all(mat_is_zero(x) for x in spin_matrices(0).s)
    assert levi_civita(1, 2, 3) == 1 and levi_civita(2, 1, 3) == -1 and levi_civita(1, 1, 2) == 0
    with pytest.raises(ValueError):
        spin_matrices("3/2")


def test_generator_examples():
    m12 = build_tilde_generator("M[1,2]", "0")
    # d/dq^j = -d/dq_j, so i(q_1 d^2 - q_2 d^1) = -i(q_1 d_2 - q_2 d_1)
    assert m12.vec == (IMAG * q2, -IMAG * q1, ZERO)
    p2 = build_tilde_generator("P[2]", "1/2")
    assert p2.is_multiplication()
    assert p2.mat[0][0] == -KAPPA * SINH * q2 / (MASS * COSH - Q0 * SINH)
    m10 = build_tilde_generator("M[1,0]", "1/2")
    s = spin_matrices("1/2").s
    for a in range(2):
        for b in range(2):
            want = (q2 * s[2][a][b] - q3 * s[1][a][b]) / (Q0 + MASS)
            assert m10.mat[a][b] == want
    with pytest.raises(ValueError):
        build_tilde_generator("K[1]")


def test_commutator_examples():
    p0, p1 = build_tilde_generator("P[0]"), build_tilde_generator("P[1]")
    assert diffop_commutator(p0, p1).is_zero()
    m10 = build_tilde_generator("M[1,0]")
    d = diffop_commutator(m10, p0)
    assert d.is_multiplication() and d.mat[0][0] == IMAG * p1.mat[0][0]
    m12, m23, m13 = (build_tilde_generator(n, "1") for n in ("M[1,2]", "M[2,3]", "M[1,3]"))
    assert (diffop_commutator(m12, m23) - m13.scale(-IMAG)).is_zero()


def test_log_symbol_squared_is_rejected():
    p0 = build_tilde_generator("P[0]")
    with pytest.raises(UnsupportedOperation):
        diffop_commutator(p0, p0)
    assert ell_degree(ELL * q1 + ONE) == 1


@pytest.mark.parametrize("spin", ["0", "1/2", "1"])
def test_closure(spin):
    rep = closure_suite(spin)
    assert rep.passed, [(c.name, str(c.residual)) for c in rep.failures][:3]


@pytest.mark.parametrize("kwargs", [
    {"metric": EUCLIDEAN},
    {"rotation_sign": 1},
    {"a_squared": "u/m"},
])
def test_closure_controls_fail(kwargs):
    assert not closure_suite("0", **kwargs).passed


def test_wigner_sign_matters_only_with_spin():
    assert closure_suite("0", boost_spin_sign=-1).passed
    assert not closure_suite("1/2", boost_spin_sign=-1).passed


def test_rotations_are_tangent():
    shell = Q0 * Q0 - q1 * q1 - q2 * q2 - q3 * q3
    for name in ("M[1,2]", "M[1,3]", "M[2,3]"):
        assert build_tilde_generator(name).derive(shell) == ZERO


def test_dispersion():
    assert dispersion_residual() == ZERO
    E, p = deform_momentum()
    # oracle: E = exp(l/k) with l = k log(u/m), everything with explicit roots
    e = sp.exp(ENV["l"] / ENV["k"])
    k = ENV["k"]
    ps = [sympy_value(x) for x in p]
    lhs = k ** 2 * (e - 2 + 1 / e) - e * sum(x ** 2 for x in ps)
    rhs = 2 * k ** 2 * (ENV["c"] - 1)
    assert vanishes(lhs - rhs)
    assert vanishes(sympy_value(E) - e)


def test_shell_suites():
    rep = momentum_shell_suite()
    assert rep.passed and len(rep.checks) == 6
    lim = shell_limit_suite(4)
    assert lim.passed and len(lim.checks) == 8


def test_tilde_q():
    qt = tilde_q()
    rest = {"q0": MASS, "q1": ZERO, "q2": ZERO, "q3": ZERO}
    assert [x.subs(rest) for x in qt] == [MASS, ZERO, ZERO, ZERO]
    shell = sympy_value(qt[0]) ** 2 - sum(sympy_value(x) ** 2 for x in qt[1:]) - ENV["m"] ** 2
    assert vanishes(shell)
    assert coeff_series(qt[1], 3).get(0) == q1


def test_apply_on_spinor():
    m12 = build_tilde_generator("M[1,2]", "1/2")
    out = m12.apply([q1, ZERO])
    assert out[0] == IMAG * q2 + q1 / 2
    assert out[1] == ZERO
    assert str(DiffOperator.multiplication(ONE, 1)) == "(1)"
