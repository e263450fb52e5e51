"""Acceptance gate: one test per criterion, each recording a PASS/FAIL line.

Run with pytest (lines are echoed in the terminal summary) or directly:
``python tests/test_acceptance.py``.
"""
import os
import subprocess
import sys
import time

from kpoincare import duality, indrep, kalgebra, kgroup, kminkowski
from kpoincare.scalars import KAPPA, MASS, ONE, ZERO, coeff_series

LINES = []


def record(n, ok, detail):
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    LINES.append(line)
    print(line)
    assert ok, line


def failed(*reps):
    names = [c.name for r in reps for c in r.failures][:3]
    return f"failing: {names}" if names else ""


def test_criterion_01_group_hopf():
    t = time.perf_counter()
    rep = kgroup.kgroup_verify(max_degree=3, samples=50, seed=0)
    dt = time.perf_counter() - t
    ok = rep.passed and dt < 5.0
    record(1, ok, f"group Hopf axioms + rule compatibility, {len(rep.checks)} checks, {dt:.2f} s {failed(rep)}")


def test_criterion_02_jacobi():
    rep = kalgebra.jacobi_suite()
    ctl = kalgebra.jacobi_suite(prpr="euclidean")
    ok = rep.passed and len(rep.checks) == 165 and not ctl.passed
    record(2, ok, f"165 Jacobi triples vanish; Euclidean reading breaks {len(ctl.failures)} {failed(rep)}")


def test_criterion_03_algebra_hopf():
    rep = kalgebra.kalgebra_hopf_verify(max_degree=3, samples=50, seed=0)
    pairs = sum(c.name.startswith("delta-bracket") for c in rep.checks)
    ok = rep.passed and pairs == 55
    record(3, ok, f"algebra Hopf axioms and Delta[a,b] on {pairs} pairs, {len(rep.checks)} checks {failed(rep)}")


def test_criterion_04_duality():
    pr = duality.Pairing()
    rep = duality.duality_consistency_suite(max_degree=3, samples=50, seed=0, pairing=pr)
    x, f = pr.alg.word("P[1]"), pr.grp.word("v[1]", "v[0]")
    worked = all(pr.pair_words(x, f, r) == ONE / KAPPA for r in duality.ROUTES)
    ok = rep.passed and worked
    record(4, ok, f"two routes agree on 50+ pairs, kernels annihilated, <P1, v1 v0> = 1/k {failed(rep)}")


def test_criterion_05_closure():
    reps = {s: indrep.closure_suite(s) for s in ("0", "1/2", "1")}
    ok = all(r.passed for r in reps.values())
    detail = ", ".join(f"spin {s}: {len(r.checks)}" for s, r in reps.items())
    record(5, ok, f"operator closure ({detail} checks)")


def test_criterion_06_shell():
    rep = indrep.momentum_shell_suite()
    ok = rep.passed and indrep.dispersion_residual() == ZERO
    record(6, ok, f"tilde q on the shell and deformed dispersion exact {failed(rep)}")


def test_criterion_07_limits():
    alg = kalgebra.classical_limit_suite(4)
    shell = indrep.shell_limit_suite(4)
    ser = coeff_series(kminkowski.shell_mass_squared(), 4)
    m2 = ser.get(0) == MASS ** 2 and not any(c for n, c in ser.items() if n < 0)
    ok = alg.passed and shell.passed and m2
    record(7, ok, f"order-4 limits: {len(alg.checks)} brackets, p -> -q, tilde q -> q, M^2 -> m^2 "
                  f"{failed(alg, shell)}")


def test_criterion_08_minkowski():
    star = kminkowski.composition_suite(seed=0, samples=50, max_degree=4)
    anti = kminkowski.antirep_suite(max_degree=3, include_a=False)
    ok = star.passed and anti.passed and len(anti.checks) == 45
    record(8, ok, f"star associativity, plane-wave composition, antirep on {len(anti.checks)} pairs "
                  f"{failed(star, anti)}")


def test_criterion_09_klein_gordon():
    rep = kminkowski.kg_suite(4)
    record(9, rep.passed, f"factorization off shell and (d + M^2/8) Phi = 0 on shell {failed(rep)}")


def test_criterion_10_extract():
    rep = kminkowski.extract_compare_suite()
    record(10, rep.passed and len(rep.checks) == 10, f"momentum-space table reproduced ({len(rep.checks)} rows) {failed(rep)}")


def _json_run(hash_seed):
    env = dict(os.environ, PYTHONHASHSEED=str(hash_seed))
    cmd = [sys.executable, "-m", "kpoincare", "verify", "all", "--seed", "7", "--samples", "20", "--format", "json"]
    return subprocess.Popen(cmd, stdout=subprocess.PIPE, stderr=subprocess.DEVNULL, env=env)


def test_criterion_11_determinism():
    # separate processes with different hash seeds, so set/dict order cannot leak into output
    procs = [_json_run(1), _json_run(2)]
    a, b = (p.communicate()[0] for p in procs)
    ok = bool(a) and a == b
    record(11, ok, f"byte-identical JSON across two processes ({len(a)} bytes)")


if __name__ == "__main__":
    bad = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion"):
            try:
                fn()
            except AssertionError:
                bad += 1
    sys.exit(1 if bad else 0)
