"""Presented Hopf algebras: normal ordering, tensor arithmetic, Hopf maps.

A presentation fixes a total order on generators (ordering class first,
then index).  Every out-of-order adjacent pair ``h g`` carries a rewrite
rule, and each invertible generator cancels against its inverse.  Words
are tuples of generator ids; an element is a dict ``{word: Scalar}``.
Normal ordering is done by bubbling each new generator leftwards through
an already ordered word, memoized on ``(word, generator)``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from .report import SuiteReport
from .scalars import ONE, ZERO, Scalar, coeff

Word = Tuple[int, ...]
Terms = Dict[Word, Scalar]
TTerms = Dict[Tuple[Word, ...], Scalar]


class PresentationError(ValueError):
    pass


class NonTermination(RuntimeError):
    """Raised when normal ordering exceeds its rewrite budget."""


@dataclass(frozen=True)
class GeneratorSpec:
    name: str
    cls: int
    index: int
    inverse: Optional[str] = None


def _add(out: dict, key, value: Scalar) -> None:
    cur = out.get(key)
    if cur is None:
        if value:
            out[key] = value
    else:
        cur = cur + value
        if cur:
            out[key] = cur
        else:
            del out[key]


def inversions(word: Word) -> int:
    return sum(1 for i in range(len(word)) for j in range(i + 1, len(word)) if word[i] > word[j])


def measure(word: Word):
    """Termination measure: class inversions, then degree, then the word itself."""
    return (inversions(word), len(word), word)


class HopfPresentation:
    """Generators, rewrite rules and generator values of the Hopf maps."""

    max_depth = 400

    def __init__(self, name: str, generators: Iterable[GeneratorSpec]):
        self.name = name
        self.generators: List[GeneratorSpec] = sorted(generators, key=lambda g: (g.cls, g.index))
        self.ids = {g.name: i for i, g in enumerate(self.generators)}
        if len(self.ids) != len(self.generators):
            raise PresentationError("generator names must be unique")
        self.rules: Dict[Tuple[int, int], Terms] = {}
        self.delta_gen: Dict[int, TTerms] = {}
        self.antipode_gen: Dict[int, Terms] = {}
        self.counit_gen: Dict[int, Scalar] = {}
        self._mul_cache: Dict[Tuple[Word, int], Terms] = {}
        self._delta_cache: Dict[Word, TTerms] = {}
        self._antipode_cache: Dict[Word, Terms] = {}
        self._depth = 0
        self._trail: List[Tuple[int, int]] = []
        for g in self.generators:
            if g.inverse is not None:
                a, b = self.ids[g.name], self.ids[g.inverse]
                self.rules[(a, b)] = {(): ONE}
                self.rules[(b, a)] = {(): ONE}

    # -- construction ------------------------------------------------------
    def gid(self, name: str) -> int:
        try:
            return self.ids[name]
        except KeyError:
            raise PresentationError(f"unknown generator {name!r} in {self.name}") from None

    def word(self, *names: str) -> Word:
        return tuple(self.gid(n) for n in names)

    def terms_of(self, spec) -> Terms:
        """Accept an AlgebraElement, a dict keyed by name tuples/words, or a scalar."""
        if isinstance(spec, AlgebraElement):
            return dict(spec.terms)
        if isinstance(spec, dict):
            out: Terms = {}
            for w, c in spec.items():
                if isinstance(w, str):
                    w = (w,)
                key = tuple(self.gid(x) if isinstance(x, str) else x for x in w)
                _add(out, key, coeff(c))
            return out
        return {(): coeff(spec)} if coeff(spec) else {}

    def set_commutator(self, a: str, b: str, value) -> None:
        """Impose [a, b] = value as a rewrite rule on the out-of-order order of a, b."""
        ia, ib = self.gid(a), self.gid(b)
        val = self.terms_of(value)
        if ia == ib:
            if val:
                raise PresentationError(f"[{a},{a}] must vanish")
            return
        if ia < ib:
            # b a = a b - [a, b]
            rule = {(ia, ib): ONE}
            for w, c in val.items():
                _add(rule, w, -c)
            self.rules[(ib, ia)] = rule
        else:
            rule = {(ib, ia): ONE}
            for w, c in val.items():
                _add(rule, w, c)
            self.rules[(ia, ib)] = rule

    def set_rule(self, lhs: Word, rhs: Terms) -> None:
        self.rules[tuple(lhs)] = dict(rhs)

    def set_hopf(self, name: str, delta, antipode, counit) -> None:
        i = self.gid(name)
        dt: TTerms = {}
        for (w1, w2), c in delta.items():
            key = (self._as_word(w1), self._as_word(w2))
            _add(dt, key, coeff(c))
        self.delta_gen[i] = dt
        self.antipode_gen[i] = self.terms_of(antipode)
        self.counit_gen[i] = coeff(counit)

    def _as_word(self, w) -> Word:
        if isinstance(w, str):
            return (self.gid(w),) if w else ()
        return tuple(self.gid(x) if isinstance(x, str) else x for x in w)

    def finalize(self) -> "HopfPresentation":
        n = len(self.generators)
        for i in range(n):
            for j in range(i):
                if (i, j) not in self.rules:
                    raise PresentationError(
                        f"no rule for out-of-order pair {self.generators[i].name} {self.generators[j].name}"
                    )
            for part, table in (("delta", self.delta_gen), ("antipode", self.antipode_gen),
                                ("counit", self.counit_gen)):
                if i not in table:
                    raise PresentationError(f"{part} undefined on {self.generators[i].name}")
        for lhs, rhs in self.rules.items():
            top = measure(lhs)
            for w in rhs:
                if not measure(w) < top:
                    raise PresentationError(
                        f"rule {self.render_word(lhs)} -> ... emits {self.render_word(w)} "
                        "which is not smaller under the termination measure"
                    )
        self.clear_caches()
        # structure-map images may be given in any order; store them normal ordered
        for i in list(self.antipode_gen):
            self.antipode_gen[i] = self.nf_terms(self.antipode_gen[i])
        for i in list(self.delta_gen):
            out: TTerms = {}
            for (x, y), c in self.delta_gen[i].items():
                for xx, cx in self.nf_terms({x: ONE}).items():
                    for yy, cy in self.nf_terms({y: ONE}).items():
                        _add(out, (xx, yy), c * cx * cy)
            self.delta_gen[i] = out
        self.clear_caches()
        return self

    def clear_caches(self) -> None:
        self._mul_cache.clear()
        self._delta_cache.clear()
        self._antipode_cache.clear()

    # -- normal ordering ---------------------------------------------------
    def is_normal(self, word: Word) -> bool:
        return all((word[i], word[i + 1]) not in self.rules for i in range(len(word) - 1))

    def mul_word_gen(self, word: Word, g: int) -> Terms:
        key = (word, g)
        hit = self._mul_cache.get(key)
        if hit is not None:
            return hit
        if not word or (word[-1], g) not in self.rules:
            out = {word + (g,): ONE}
        else:
            rule_key = (word[-1], g)
            self._depth += 1
            self._trail.append(rule_key)
            if self._depth > self.max_depth:
                chain = " ; ".join(self.render_word(r) for r in self._trail[-8:])
                # enclosing frames unwind their own entries in their finally blocks
                self._depth -= 1
                self._trail.pop()
                raise NonTermination(f"rewrite budget exceeded in {self.name}; last rules: {chain}")
            try:
                prefix = word[:-1]
                out: Terms = {}
                for w, c in self.rules[rule_key].items():
                    for ww, cc in self.mul_words(prefix, w).items():
                        _add(out, ww, c * cc)
            finally:
                self._depth -= 1
                self._trail.pop()
        self._mul_cache[key] = out
        return out

    def mul_words(self, u: Word, w: Word) -> Terms:
        """Normal form of u*w for a normal word u and any word w."""
        cur: Terms = {u: ONE}
        for g in w:
            nxt: Terms = {}
            for word, c in cur.items():
                for ww, cc in self.mul_word_gen(word, g).items():
                    _add(nxt, ww, c * cc)
            cur = nxt
        return cur

    def nf_terms(self, terms: Terms) -> Terms:
        out: Terms = {}
        for w, c in terms.items():
            for ww, cc in self.mul_words((), w).items():
                _add(out, ww, c * cc)
        return out

    def mul_terms(self, a: Terms, b: Terms) -> Terms:
        out: Terms = {}
        for u, c in a.items():
            for w, d in b.items():
                cd = c * d
                for ww, cc in self.mul_words(u, w).items():
                    _add(out, ww, cd * cc)
        return out

    # -- Hopf maps on words ------------------------------------------------
    def delta_word(self, word: Word) -> TTerms:
        hit = self._delta_cache.get(word)
        if hit is not None:
            return hit
        if not word:
            out = {((), ()): ONE}
        else:
            out = tensor_mul(self, self.delta_word(word[:-1]), self.delta_gen[word[-1]])
        self._delta_cache[word] = out
        return out

    def antipode_word(self, word: Word) -> Terms:
        hit = self._antipode_cache.get(word)
        if hit is not None:
            return hit
        if not word:
            out = {(): ONE}
        else:
            # S(u g) = S(g) S(u)
            out = self.mul_terms(self.antipode_gen[word[-1]], self.antipode_word(word[:-1]))
        self._antipode_cache[word] = out
        return out

    def counit_word(self, word: Word) -> Scalar:
        out = ONE
        for g in word:
            out = out * self.counit_gen[g]
            if not out:
                return ZERO
        return out

    # -- rendering -----------------------------------------------------------
    def render_word(self, word: Word) -> str:
        return "*".join(self.generators[g].name for g in word) if word else "1"

    def element(self, spec) -> "AlgebraElement":
        return AlgebraElement(self, self.nf_terms(self.terms_of(spec)))

    def gen(self, name: str) -> "AlgebraElement":
        return AlgebraElement(self, {(self.gid(name),): ONE})

    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, {(): ONE})

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})


def tensor_mul(P: HopfPresentation, a: TTerms, b: TTerms) -> TTerms:
    """Componentwise product in the tensor power; every slot normal-formed."""
    out: TTerms = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            slots = [P.mul_words(x, y) for x, y in zip(ka, kb)]
            base = ca * cb
            _expand_slots(out, slots, base)
    return out


def _expand_slots(out: TTerms, slots: List[Terms], base: Scalar) -> None:
    partial = [((), base)]
    for slot in slots:
        partial = [(key + (w,), c * d) for key, c in partial for w, d in slot.items()]
    for key, c in partial:
        _add(out, key, c)


def _sort_key(word: Word):
    return (len(word), word)


def _coef_str(c: Scalar) -> str:
    from .scalars import render

    s = render(c)
    if any(ch in s[1:] for ch in "+-/") or ("/" in s):
        return f"({s})"
    return s


def render_terms(terms: dict, word_str: Callable, key=None) -> str:
    if not terms:
        return "0"
    parts = []
    for w in sorted(terms, key=key or (lambda w: w)):
        c = terms[w]
        ws = word_str(w)
        if ws == "1":
            from .scalars import render

            cs = render(c)
            body = cs if _is_simple(cs) else f"({cs})"
        elif c == ONE:
            body = ws
        elif c == -ONE:
            body = "-" + ws
        else:
            body = f"{_coef_str(c)}*{ws}"
        parts.append(body)
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def _is_simple(s: str) -> bool:
    return not any(ch in s[1:] for ch in "+-")


class AlgebraElement:
    """A normal-form element of a presented algebra."""

    __slots__ = ("pres", "terms")

    def __init__(self, pres: HopfPresentation, terms: Terms):
        self.pres = pres
        self.terms = terms

    def _check(self, other: "AlgebraElement") -> None:
        if other.pres is not self.pres:
            raise PresentationError(
                f"cannot combine elements of {self.pres.name} and {other.pres.name}"
            )

    def _lift(self, other):
        if isinstance(other, AlgebraElement):
            self._check(other)
            return other
        c = coeff(other)
        return AlgebraElement(self.pres, {(): c} if c else {})

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            _add(out, w, c)
        return AlgebraElement(self.pres, out)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.pres, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        c = coeff(other)
        return AlgebraElement(self.pres, {w: x * c for w, x in self.terms.items()} if c else {})

    def __rmul__(self, other):
        c = coeff(other)
        return AlgebraElement(self.pres, {w: c * x for w, x in self.terms.items()} if c else {})

    def __pow__(self, n: int):
        out = self.pres.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, AlgebraElement):
            return self.pres is other.pres and self.terms == other.terms
        return (self - other).is_zero()

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, *names) -> Scalar:
        return self.terms.get(self.pres.word(*names), ZERO)

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def __str__(self):
        return render_terms(self.terms, self.pres.render_word, key=_sort_key)

    def __repr__(self):
        return f"<{self.pres.name}: {self}>"


class TensorElement:
    """Element of a tensor power of a presented algebra, slots in normal form."""

    __slots__ = ("pres", "terms", "rank")

    def __init__(self, pres: HopfPresentation, terms: TTerms, rank: int):
        self.pres = pres
        self.terms = terms
        self.rank = rank

    def __sub__(self, other: "TensorElement"):
        out = dict(self.terms)
        for k, c in other.terms.items():
            _add(out, k, -c)
        return TensorElement(self.pres, out, self.rank)

    def __add__(self, other: "TensorElement"):
        out = dict(self.terms)
        for k, c in other.terms.items():
            _add(out, k, c)
        return TensorElement(self.pres, out, self.rank)

    def __mul__(self, other: "TensorElement"):
        return TensorElement(self.pres, tensor_mul(self.pres, self.terms, other.terms), self.rank)

    def __eq__(self, other):
        return isinstance(other, TensorElement) and self.terms == other.terms

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def __str__(self):
        def ws(key):
            return " (x) ".join(self.pres.render_word(w) for w in key)

        return render_terms(self.terms, ws, key=lambda k: tuple(_sort_key(w) for w in k))

    def __repr__(self):
        return f"<{self.pres.name}^(x){self.rank}: {self}>"


def tensor(pres: HopfPresentation, *slots: AlgebraElement) -> TensorElement:
    """Pure tensor a (x) b (x) ... of normal-form elements."""
    out: TTerms = {}
    _expand_slots(out, [s.terms for s in slots], ONE)
    return TensorElement(pres, out, len(slots))


# ---------------------------------------------------------------------------
# the public operations


def normal_form(raw, P: HopfPresentation) -> AlgebraElement:
    """Normal form of a raw expression: dict of words (ids or names) to scalars."""
    return AlgebraElement(P, P.nf_terms(P.terms_of(raw)))


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    a._check(b)
    return AlgebraElement(a.pres, a.pres.mul_terms(a.terms, b.terms))


def commutator(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a * b - b * a


def coproduct(a: AlgebraElement) -> TensorElement:
    P = a.pres
    out: TTerms = {}
    for w, c in a.terms.items():
        for k, d in P.delta_word(w).items():
            _add(out, k, c * d)
    return TensorElement(P, out, 2)


def coproduct_raw(P: HopfPresentation, terms: Terms) -> TensorElement:
    """Coproduct of an unordered expression, extended multiplicatively word by word."""
    out: TTerms = {}
    for w, c in terms.items():
        for k, d in P.delta_word(w).items():
            _add(out, k, c * d)
    return TensorElement(P, out, 2)


def antipode(a: AlgebraElement) -> AlgebraElement:
    P = a.pres
    out: Terms = {}
    for w, c in a.terms.items():
        for ww, d in P.antipode_word(w).items():
            _add(out, ww, c * d)
    return AlgebraElement(P, out)


def counit(a: AlgebraElement) -> Scalar:
    P = a.pres
    out = ZERO
    for w, c in a.terms.items():
        out = out + c * P.counit_word(w)
    return out


def delta_on_slot(t: TensorElement, slot: int) -> TensorElement:
    """Apply the coproduct to one slot, raising the rank by one."""
    P = t.pres
    out: TTerms = {}
    for key, c in t.terms.items():
        for (x, y), d in P.delta_word(key[slot]).items():
            _add(out, key[:slot] + (x, y) + key[slot + 1:], c * d)
    return TensorElement(P, out, t.rank + 1)


def counit_on_slot(t: TensorElement, slot: int) -> TensorElement:
    P = t.pres
    out: TTerms = {}
    for key, c in t.terms.items():
        e = P.counit_word(key[slot])
        if e:
            _add(out, key[:slot] + key[slot + 1:], c * e)
    return TensorElement(P, out, t.rank - 1)


def multiply_slots(t: TensorElement, left_antipode: bool) -> AlgebraElement:
    """m(S (x) id) or m(id (x) S) on a rank-2 tensor."""
    P = t.pres
    out: Terms = {}
    for (x, y), c in t.terms.items():
        if left_antipode:
            part = P.mul_terms(P.antipode_word(x), {y: ONE})
        else:
            part = P.mul_terms({x: ONE}, P.antipode_word(y))
        for w, d in part.items():
            _add(out, w, c * d)
    return AlgebraElement(P, out)


# ---------------------------------------------------------------------------
# verification


class ZeroTest:
    """Decides whether a residual vanishes; the base class demands literal zero."""

    label = "exact"

    def element_is_zero(self, P: HopfPresentation, terms: Terms) -> bool:
        return not terms

    def tensor_is_zero(self, P: HopfPresentation, terms: TTerms) -> bool:
        return not terms


EXACT = ZeroTest()


def random_normal_word(P: HopfPresentation, rng: random.Random, max_degree: int) -> Word:
    n = len(P.generators)
    deg = rng.randint(1, max_degree)
    word = sorted(rng.randrange(n) for _ in range(deg))
    # drop adjacent inverse pairs until the word is normal
    changed = True
    while changed:
        changed = False
        for i in range(len(word) - 1):
            if (word[i], word[i + 1]) in P.rules:
                del word[i:i + 2]
                changed = True
                break
    return tuple(word)


def sample_words(P: HopfPresentation, samples: int, max_degree: int, seed: int) -> List[Word]:
    rng = random.Random(seed)
    words = [(i,) for i in range(len(P.generators))]
    for _ in range(samples):
        words.append(random_normal_word(P, rng, max_degree))
    return words


def check_hopf_axioms(P: HopfPresentation, max_degree: int = 3, samples: int = 50,
                      seed: int = 0, zero_test: ZeroTest = EXACT,
                      suite: str = "hopf") -> SuiteReport:
    """Coassociativity, counit and antipode laws plus rule compatibility.

    Checked on every generator and ``samples`` random normal monomials of
    degree at most ``max_degree``.
    """
    rep = SuiteReport(suite)
    rep.note(f"seed={seed} samples={samples} max_degree={max_degree} zero-test={zero_test.label}")

    def t_ok(name, terms, rank):
        res = TensorElement(P, terms, rank)
        rep.add(name, zero_test.tensor_is_zero(P, terms), res)

    def e_ok(name, terms):
        rep.add(name, zero_test.element_is_zero(P, terms), AlgebraElement(P, terms))

    for w in sample_words(P, samples, max_degree, seed):
        label = P.render_word(w)
        d = TensorElement(P, P.delta_word(w), 2)
        left = delta_on_slot(d, 0)
        right = delta_on_slot(d, 1)
        t_ok(f"coassociativity[{label}]", (left - right).terms, 3)
        for slot, side in ((0, "left"), (1, "right")):
            red = counit_on_slot(d, slot)
            diff: Terms = {}
            for (x,), c in red.terms.items():
                _add(diff, x, c)
            _add(diff, w, -ONE)
            e_ok(f"counit-{side}[{label}]", diff)
        eps = P.counit_word(w)
        for flag, side in ((True, "left"), (False, "right")):
            got = multiply_slots(d, flag).terms
            diff = dict(got)
            _add(diff, (), -eps)
            e_ok(f"antipode-{side}[{label}]", diff)
    rep.extend(check_rule_compatibility(P, zero_test, suite))
    return rep


def check_rule_compatibility(P: HopfPresentation, zero_test: ZeroTest = EXACT,
                             suite: str = "hopf") -> SuiteReport:
    """Delta, S and epsilon agree on both sides of every rewrite rule."""
    rep = SuiteReport(suite)
    for lhs, rhs in sorted(P.rules.items()):
        label = P.render_word(lhs)
        # Delta(g h) computed generator by generator, never through the rule itself
        dl = tensor_mul(P, P.delta_gen[lhs[0]], P.delta_gen[lhs[1]])
        dr = coproduct_raw(P, rhs).terms
        diff = dict(dl)
        for k, c in dr.items():
            _add(diff, k, -c)
        rep.add(f"delta-rule[{label}]", zero_test.tensor_is_zero(P, diff), TensorElement(P, diff, 2))
        sl = P.mul_terms(P.antipode_gen[lhs[1]], P.antipode_gen[lhs[0]])
        sr: Terms = {}
        for w, c in rhs.items():
            for ww, d in P.antipode_word(w).items():
                _add(sr, ww, c * d)
        diff = dict(sl)
        for k, c in sr.items():
            _add(diff, k, -c)
        rep.add(f"antipode-rule[{label}]", zero_test.element_is_zero(P, diff), AlgebraElement(P, diff))
        el = P.counit_gen[lhs[0]] * P.counit_gen[lhs[1]]
        er = ZERO
        for w, c in rhs.items():
            er = er + c * P.counit_word(w)
        rep.add(f"counit-rule[{label}]", (el - er).is_zero(), el - er)
    return rep


def random_rewrite(P: HopfPresentation, terms: Terms, rng: random.Random,
                   budget: int = 100000) -> Terms:
    """Normal form by applying rules at random positions, in random order."""
    cur = {w: c for w, c in terms.items() if c}
    steps = 0
    while True:
        pending = [w for w in cur if not P.is_normal(w)]
        if not pending:
            return cur
        pending.sort()
        w = rng.choice(pending)
        spots = [i for i in range(len(w) - 1) if (w[i], w[i + 1]) in P.rules]
        i = rng.choice(spots)
        c = cur.pop(w)
        for r, d in P.rules[(w[i], w[i + 1])].items():
            _add(cur, w[:i] + r + w[i + 2:], c * d)
        steps += 1
        if steps > budget:
            raise NonTermination(f"random rewriting exceeded {budget} steps in {P.name}")


def confluence_probe(P: HopfPresentation, probes: int = 1000, max_degree: int = 4,
                     seed: int = 0) -> SuiteReport:
    """Random-order rewriting must reproduce the memoized normal form."""
    rep = SuiteReport("confluence")
    rng = random.Random(seed)
    n = len(P.generators)
    bad = 0
    for t in range(probes):
        word = tuple(rng.randrange(n) for _ in range(rng.randint(2, max_degree)))
        want = P.mul_words((), word)
        got = random_rewrite(P, {word: ONE}, rng)
        if got != want:
            bad += 1
            rep.add(f"probe[{P.render_word(word)}]", False,
                    AlgebraElement(P, got) - AlgebraElement(P, want))
    rep.add(f"{probes} random-order rewrites agree", bad == 0, f"{bad} disagreements")
    return rep
