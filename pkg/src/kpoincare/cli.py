"""Command-line driver: ``kpoincare verify <suite|all>`` and ``kpoincare eval <expr>``."""
from __future__ import annotations

import argparse
import json
import re
import sys
import time
from typing import List, Optional

from . import duality, indrep, kalgebra, kgroup, kminkowski
from .hopfcore import AlgebraElement, TensorElement, antipode, confluence_probe, coproduct, counit
from .report import SuiteReport
from .scalars import COSH, IMAG, KAPPA, MASS, SINH, Scalar

SUITES = [
    "group-hopf",
    "algebra-jacobi",
    "algebra-hopf",
    "duality",
    "rep-closure",
    "momentum-shell",
    "classical-limit",
    "mink-star",
    "antirep",
    "leibniz",
    "kg",
    "extract-compare",
]

SPIN_CHOICES = ["0", "1/2", "1"]
STAR_DEGREE = 4


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# suites


def run_suite(name: str, cfg: argparse.Namespace) -> SuiteReport:
    corrupt = cfg.corrupt == "demo"
    seed, samples, deg, order = cfg.seed, cfg.samples, cfg.max_degree, cfg.order
    if name == "group-hopf":
        metric = kgroup.EUCLIDEAN if corrupt else kgroup.MINKOWSKI
        rep = kgroup.kgroup_verify(deg, samples, seed, metric=metric)
        rep.extend(confluence_probe(kgroup.build_kgroup(metric), 1000, 4, seed))
        return rep
    if name == "algebra-jacobi":
        return kalgebra.jacobi_suite(prpr="euclidean" if corrupt else "spatial")
    if name == "algebra-hopf":
        P = kalgebra.build_kalgebra(antipode="left" if corrupt else "right")
        rep = kalgebra.kalgebra_hopf_verify(deg, samples, seed, P)
        rep.extend(confluence_probe(P, 1000, 4, seed))
        return rep
    if name == "duality":
        pr = duality.Pairing(raising="first" if corrupt else "second")
        return duality.duality_consistency_suite(deg, samples, seed, pr)
    if name == "rep-closure":
        spins = [cfg.spin] if cfg.spin else SPIN_CHOICES
        rep = SuiteReport("rep-closure")
        for s in spins:
            rep.extend(indrep.closure_suite(s, metric=(-1, 1, 1, 1) if corrupt else kgroup.MINKOWSKI))
        return rep
    if name == "momentum-shell":
        return indrep.momentum_shell_suite()
    if name == "classical-limit":
        rep = kalgebra.classical_limit_suite(order)
        rep.extend(indrep.shell_limit_suite(order))
        ser = kminkowski.coeff_series(kminkowski.shell_mass_squared(), order)
        ok = ser.get(0) == MASS ** 2 and not any(c for n, c in ser.items() if n < 0)
        rep.add("M^2 = 2k^2(c - 1) -> m^2 as k -> oo", ok, ser)
        return rep
    if name == "mink-star":
        return kminkowski.composition_suite(seed, samples, STAR_DEGREE)
    if name == "antirep":
        return kminkowski.antirep_suite(deg, lower_sign=1 if corrupt else -1)
    if name == "leibniz":
        return kminkowski.leibniz_suite(min(deg, 2), samples, seed)
    if name == "kg":
        return kminkowski.kg_suite(order)
    if name == "extract-compare":
        return kminkowski.extract_compare_suite()
    raise UsageError(f"unknown suite {name!r}")


def build_report(cfg: argparse.Namespace, names: List[str]) -> dict:
    checks = []
    notes = []
    start = time.perf_counter()
    for name in names:
        rep = run_suite(name, cfg)
        for chk in rep.checks:
            d = chk.as_dict()
            d["suite"] = name
            checks.append(d)
        notes.extend(f"{name}: {n}" for n in rep.notes)
    elapsed = (time.perf_counter() - start) * 1000.0
    config = {
        "suites": names,
        "spin": cfg.spin,
        "max_degree": cfg.max_degree,
        "samples": cfg.samples,
        "seed": cfg.seed,
        "order": cfg.order,
        "format": cfg.format,
    }
    if cfg.corrupt:
        config["corrupt"] = cfg.corrupt
    return {
        "config": config,
        "checks": checks,
        "notes": notes,
        "elapsed_ms": round(elapsed, 1) if cfg.timing else None,
        "_elapsed": elapsed,
    }


def render_text(report: dict) -> str:
    lines = []
    cfg = report["config"]
    lines.append("config: " + " ".join(f"{k}={v}" for k, v in cfg.items() if k != "suites"))
    for chk in report["checks"]:
        lines.append(f"{chk['status'].upper()} {chk['suite']}: {chk['name']}")
        if "residual" in chk:
            lines.append(f"    residual: {chk['residual']}")
    for note in report["notes"]:
        lines.append(f"note {note}")
    failed = sum(1 for c in report["checks"] if c["status"] == "fail")
    lines.append(f"{len(report['checks'])} checks, {failed} failed")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# expression language


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<gen>[LMPvx]\[\s*\d+(?:\s*,\s*\d+)?\s*\]|A\^-1|A\b)"
                    r"|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^(),]))")


class ParseError(UsageError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


class EvalTypeError(UsageError):
    pass


def tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}", pos + len(text[pos:]) - len(text[pos:].lstrip()))
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind).replace(" ", ""), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class Evaluator:
    """Recursive-descent evaluator for the little expression language."""

    FUNCS = ("comm", "pair", "delta", "S", "eps", "hat", "dd0", "ddi", "box")

    def __init__(self):
        self.grp = kgroup.build_kgroup()
        self.alg = kalgebra.build_kalgebra()
        self._pairing: Optional[duality.Pairing] = None

    @property
    def pairing(self) -> duality.Pairing:
        if self._pairing is None:
            self._pairing = duality.Pairing(self.alg, self.grp)
        return self._pairing

    def evaluate(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        val = self.expr()
        kind, tok, pos = self.toks[self.i]
        if kind != "end":
            raise ParseError(f"unexpected {tok!r}", pos)
        return val

    # grammar
    def peek(self):
        return self.toks[self.i]

    def take(self, want: Optional[str] = None):
        tok = self.toks[self.i]
        if want is not None and tok[1] != want:
            raise ParseError(f"expected {want!r}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def expr(self):
        val = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            val = self.combine(val, rhs, op)
        return val

    def term(self):
        val = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            rhs = self.unary()
            val = self.combine(val, rhs, op)
        return val

    def unary(self):
        if self.peek()[1] == "-":
            self.take()
            return self.combine(Scalar.const(-1), self.unary(), "*")
        if self.peek()[1] == "+":
            self.take()
        return self.power()

    def power(self):
        val = self.atom()
        if self.peek()[1] == "^":
            self.take()
            neg = False
            if self.peek()[1] == "-":
                self.take()
                neg = True
            kind, tok, pos = self.take()
            if kind != "num":
                raise ParseError("expected an integer exponent", pos)
            n = -int(tok) if neg else int(tok)
            if isinstance(val, Scalar):
                return val ** n
            if n < 0:
                raise EvalTypeError("negative powers are only defined for scalars and A")
            out = None
            for _ in range(n):
                out = val if out is None else self.combine(out, val, "*")
            return out if out is not None else Scalar.const(1)
        return val

    def atom(self):
        kind, tok, pos = self.take()
        if kind == "num":
            return Scalar.const(int(tok))
        if kind == "gen":
            return self.generator(tok)
        if kind == "name":
            if tok in self.FUNCS:
                return self.call(tok, pos)
            consts = {"i": IMAG, "k": KAPPA, "m": MASS, "s": SINH, "c": COSH}
            if tok in consts:
                return consts[tok]
            raise ParseError(f"unknown name {tok!r}", pos)
        if tok == "(":
            val = self.expr()
            self.take(")")
            return val
        raise ParseError(f"unexpected {tok or 'end of input'!r}", pos)

    def call(self, fn: str, pos: int):
        self.take("(")
        args = [self.expr()]
        while self.peek()[1] == ",":
            self.take()
            args.append(self.expr())
        self.take(")")
        arity = {"comm": 2, "pair": 2, "hat": 2, "ddi": 2}.get(fn, 1)
        if len(args) != arity:
            raise ParseError(f"{fn} takes {arity} argument(s), got {len(args)}", pos)
        return getattr(self, "fn_" + fn)(*args)

    def generator(self, tok: str):
        if tok in ("A", "A^-1"):
            return self.alg.gen(kalgebra.A if tok == "A" else kalgebra.AINV)
        kind = tok[0]
        idx = [int(x) for x in tok[2:-1].split(",")]
        if kind == "L" and len(idx) == 2 and all(0 <= x <= 3 for x in idx):
            return self.grp.gen(kgroup.L(*idx))
        if kind == "v" and len(idx) == 1 and 0 <= idx[0] <= 3:
            return self.grp.gen(kgroup.v(idx[0]))
        if kind == "P" and len(idx) == 1 and 0 <= idx[0] <= 3:
            return self.alg.gen(kalgebra.P_(idx[0]))
        if kind == "x" and len(idx) == 1 and 0 <= idx[0] <= 3:
            return kminkowski.NormalSymbol.x(idx[0])
        if kind == "M" and len(idx) == 2 and all(0 <= x <= 3 for x in idx):
            name, sgn = kalgebra.m_term(*idx)
            if name is None:
                return Scalar.const(0)
            return self.alg.gen(name) * sgn
        raise EvalTypeError(f"no generator {tok}")

    # arithmetic across types
    def combine(self, a, b, op):
        Sym = kminkowski.NormalSymbol
        if op == "/":
            if not isinstance(b, Scalar):
                raise EvalTypeError("can only divide by a scalar")
            if not b:
                raise EvalTypeError("division by zero")
            op, b = "*", b.inv()
        if isinstance(a, Scalar) and isinstance(b, Scalar):
            return {"+": a + b, "-": a - b, "*": a * b}[op]
        if op == "*" and isinstance(a, Scalar):
            a, b = b, a
        if op == "*" and isinstance(b, Scalar):
            if isinstance(a, Sym):
                return a.scale(b)
            if isinstance(a, TensorElement):
                return TensorElement(a.pres, {k: v * b for k, v in a.terms.items()}, a.rank)
            return a * b
        # lift scalars into the other operand's space for + and -
        if isinstance(a, Scalar):
            a = self._lift(a, b)
        if isinstance(b, Scalar):
            b = self._lift(b, a)
        if isinstance(a, Sym) and isinstance(b, Sym):
            if op == "*":
                return kminkowski.star_multiply(a, b)
            return a + b if op == "+" else a - b
        if isinstance(a, AlgebraElement) and isinstance(b, AlgebraElement):
            if a.pres is not b.pres:
                raise EvalTypeError(f"cannot combine elements of {a.pres.name} and {b.pres.name}")
            return {"+": lambda: a + b, "-": lambda: a - b, "*": lambda: a * b}[op]()
        if isinstance(a, TensorElement) and isinstance(b, TensorElement) and op in "+-":
            return a + b if op == "+" else a - b
        raise EvalTypeError(f"cannot apply {op!r} to {self._kind(a)} and {self._kind(b)}")

    def _lift(self, s: Scalar, other):
        if isinstance(other, kminkowski.NormalSymbol):
            return kminkowski.NormalSymbol.const(s)
        if isinstance(other, AlgebraElement):
            return other.pres.one() * s
        raise EvalTypeError(f"cannot add a scalar to {self._kind(other)}")

    def _kind(self, x) -> str:
        if isinstance(x, Scalar):
            return "a scalar"
        if isinstance(x, kminkowski.NormalSymbol):
            return "a kappa-Minkowski element"
        if isinstance(x, TensorElement):
            return "a tensor"
        if isinstance(x, AlgebraElement):
            return "an element of the " + x.pres.name
        return type(x).__name__

    def _need(self, x, pres, what):
        if isinstance(x, Scalar):
            return pres.one() * x
        if not isinstance(x, AlgebraElement) or x.pres is not pres:
            raise EvalTypeError(f"{what} must be an element of the {pres.name}, got {self._kind(x)}")
        return x

    def _hopf(self, x, what):
        if isinstance(x, AlgebraElement):
            return x
        raise EvalTypeError(f"{what} needs a group or algebra element, got {self._kind(x)}")

    def _symbol(self, x, what):
        if isinstance(x, Scalar):
            return kminkowski.NormalSymbol.const(x)
        if not isinstance(x, kminkowski.NormalSymbol):
            raise EvalTypeError(f"{what} needs a kappa-Minkowski element, got {self._kind(x)}")
        return x

    # forms
    def fn_comm(self, a, b):
        return self.combine(self.combine(a, b, "*"), self.combine(b, a, "*"), "-")

    def fn_pair(self, X, f):
        X = self._need(X, self.alg, "the first argument of pair")
        f = self._need(f, self.grp, "the second argument of pair")
        return self.pairing.pair(X, f)

    def fn_delta(self, a):
        return coproduct(self._hopf(a, "delta"))

    def fn_S(self, a):
        return antipode(self._hopf(a, "S"))

    def fn_eps(self, a):
        if isinstance(a, Scalar):
            return a
        return counit(self._hopf(a, "eps"))

    def fn_hat(self, X, f):
        X = self._need(X, self.alg, "the first argument of hat")
        f = self._symbol(f, "hat")
        return kminkowski.hat_terms(self.alg, X.terms, f)

    def fn_dd0(self, f):
        return kminkowski.deformed_derivative("d0", self._symbol(f, "dd0"))

    def fn_ddi(self, i, f):
        idx = next((j for j in (1, 2, 3) if isinstance(i, Scalar) and i == Scalar.const(j)), None)
        if idx is None:
            raise EvalTypeError("ddi needs a spatial index 1, 2 or 3")
        return kminkowski.deformed_derivative("di", self._symbol(f, "ddi"), idx)

    def fn_box(self, f):
        return kminkowski.deformed_derivative("box", self._symbol(f, "box"))


def evaluate(text: str) -> str:
    return str(Evaluator().evaluate(text))


# ---------------------------------------------------------------------------
# entry point


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kpoincare", description="kappa-Poincare Hopf algebra verifier")
    p.add_argument("--list", action="store_true", help="list suite names and exit")
    sub = p.add_subparsers(dest="command")
    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("suite", nargs="?", help="suite name or 'all'")
    v.add_argument("--list", action="store_true", help="list suite names and exit")
    v.add_argument("--spin", choices=SPIN_CHOICES, default=None,
                   help="spin for rep-closure (default: all three)")
    v.add_argument("--max-degree", type=int, default=3)
    v.add_argument("--samples", type=int, default=50)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--order", type=int, default=4, help="truncation order for limit suites")
    v.add_argument("--format", choices=["text", "json"], default="text")
    v.add_argument("--timing", action="store_true", help="record elapsed_ms in the report")
    v.add_argument("--corrupt", choices=["demo"], default=None, help=argparse.SUPPRESS)
    e = sub.add_parser("eval", help="evaluate an expression")
    e.add_argument("expr")
    return p


def main(argv: Optional[List[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.list:
        print("\n".join(SUITES), file=out)
        return 0
    if args.command == "eval":
        try:
            print(evaluate(args.expr), file=out)
        except UsageError as exc:
            print(f"error: {exc}", file=err)
            return 2
        return 0
    if args.command != "verify" or not args.suite:
        parser.print_usage(err)
        return 2
    if args.suite == "all":
        names = list(SUITES)
    elif args.suite in SUITES:
        names = [args.suite]
    else:
        print(f"error: unknown suite {args.suite!r}; choose from {', '.join(SUITES)} or all", file=err)
        return 2
    if args.max_degree < 1 or args.samples < 0 or args.order < 2:
        print("error: need --max-degree >= 1, --samples >= 0, --order >= 2", file=err)
        return 2
    report = build_report(args, names)
    elapsed = report.pop("_elapsed")
    if args.format == "json":
        print(json.dumps(report, indent=2, sort_keys=False), file=out)
    else:
        print(render_text(report), file=out)
        if args.timing:
            print(f"elapsed {elapsed:.0f} ms", file=err)
    return 0 if all(c["status"] == "pass" for c in report["checks"]) else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
