"""Sparse multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterable, Mapping, Sequence, Tuple

Exponent = Tuple[int, ...]

MAX_ARITY = 16


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"coefficient {c!r} is not an exact rational")


class SparsePolynomial:
    """A polynomial in ``arity`` variables stored as ``{exponent: coefficient}``.

    Instances are immutable; zero coefficients are never stored.
    """

    __slots__ = ("arity", "_terms", "_hash", "_plan")

    def __init__(self, arity: int, terms: Mapping[Exponent, object] | None = None):
        if not 0 <= arity <= MAX_ARITY:
            raise ValueError(f"arity {arity} outside [0, {MAX_ARITY}]")
        self.arity = arity
        clean: Dict[Exponent, Fraction] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != arity:
                raise ValueError(f"exponent {exp} does not have arity {arity}")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            c = _as_fraction(c)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
                if not clean[exp]:
                    del clean[exp]
        self._terms = clean
        self._hash = None
        self._plan = None

    @classmethod
    def _raw(cls, arity: int, terms: Dict[Exponent, Fraction]) -> "SparsePolynomial":
        # trusted constructor: terms already clean
        obj = cls.__new__(cls)
        obj.arity = arity
        obj._terms = terms
        obj._hash = None
        obj._plan = None
        return obj

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, arity: int) -> "SparsePolynomial":
        return cls._raw(arity, {})

    @classmethod
    def constant(cls, arity: int, c) -> "SparsePolynomial":
        c = _as_fraction(c)
        return cls._raw(arity, {(0,) * arity: c} if c else {})

    @classmethod
    def variable(cls, arity: int, i: int) -> "SparsePolynomial":
        if not 0 <= i < arity:
            raise IndexError(f"variable index {i} out of range for arity {arity}")
        exp = [0] * arity
        exp[i] = 1
        return cls._raw(arity, {tuple(exp): Fraction(1)})

    @classmethod
    def monomial(cls, exp: Sequence[int], c=1) -> "SparsePolynomial":
        return cls(len(exp), {tuple(exp): c})

    @classmethod
    def univariate(cls, coeffs: Sequence, arity: int = 1, var: int = 0) -> "SparsePolynomial":
        """Build ``sum(coeffs[k] * x_var**k)``."""
        terms = {}
        for k, c in enumerate(coeffs):
            exp = [0] * arity
            exp[var] = k
            terms[tuple(exp)] = c
        return cls(arity, terms)

    # -- basic protocol ---------------------------------------------------

    @property
    def terms(self) -> Dict[Exponent, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exp), Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        if isinstance(other, SparsePolynomial):
            return self.arity == other.arity and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == SparsePolynomial.constant(self.arity, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.arity, frozenset(self._terms.items())))
        return self._hash

    def _check(self, other: "SparsePolynomial") -> None:
        if self.arity != other.arity:
            raise ValueError(f"arity mismatch: {self.arity} vs {other.arity}")

    def _coerce(self, other) -> "SparsePolynomial":
        if isinstance(other, SparsePolynomial):
            self._check(other)
            return other
        return SparsePolynomial.constant(self.arity, other)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other) -> "SparsePolynomial":
        other = self._coerce(other)
        out = dict(self._terms)
        for exp, c in other._terms.items():
            v = out.get(exp, 0) + c
            if v:
                out[exp] = v
            else:
                out.pop(exp, None)
        return SparsePolynomial._raw(self.arity, out)

    __radd__ = __add__

    def __neg__(self) -> "SparsePolynomial":
        return SparsePolynomial._raw(self.arity, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "SparsePolynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "SparsePolynomial":
        return (-self) + other

    def __mul__(self, other) -> "SparsePolynomial":
        if not isinstance(other, SparsePolynomial):
            c = _as_fraction(other)
            if not c:
                return SparsePolynomial.zero(self.arity)
            return SparsePolynomial._raw(self.arity, {e: v * c for e, v in self._terms.items()})
        self._check(other)
        out: Dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return SparsePolynomial._raw(self.arity, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other) -> "SparsePolynomial":
        if isinstance(other, SparsePolynomial):
            q, r = self.divmod(other)
            if r:
                raise ArithmeticError("polynomial division is not exact")
            return q
        c = _as_fraction(other)
        return self * (1 / c)

    def __pow__(self, k: int) -> "SparsePolynomial":
        if k < 0:
            raise ValueError("negative power")
        result = SparsePolynomial.constant(self.arity, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- structure --------------------------------------------------------

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self._terms), default=-1)

    def weighted_degree(self, weights: Sequence[int]) -> int:
        return max((sum(w * a for w, a in zip(weights, e)) for e in self._terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def permute(self, perm: Sequence[int]) -> "SparsePolynomial":
        """Rename variable ``i`` to ``perm[i]``."""
        out = {}
        for e, c in self._terms.items():
            ne = [0] * self.arity
            for i, a in enumerate(e):
                ne[perm[i]] = a
            out[tuple(ne)] = c
        return SparsePolynomial._raw(self.arity, out)

    def swap(self, i: int, j: int) -> "SparsePolynomial":
        perm = list(range(self.arity))
        perm[i], perm[j] = j, i
        return self.permute(perm)

    def is_symmetric(self) -> bool:
        return all(self.swap(i, i + 1) == self for i in range(self.arity - 1))

    def embed(self, arity: int, positions: Sequence[int]) -> "SparsePolynomial":
        """View as a polynomial in ``arity`` variables, variable i going to ``positions[i]``."""
        out = {}
        for e, c in self._terms.items():
            ne = [0] * arity
            for i, a in enumerate(e):
                ne[positions[i]] = a
            out[tuple(ne)] = c
        return SparsePolynomial._raw(arity, out)

    # -- calculus and evaluation ------------------------------------------

    def diff(self, i: int, times: int = 1) -> "SparsePolynomial":
        out = {}
        for e, c in self._terms.items():
            a = e[i]
            if a < times:
                continue
            f = 1
            for k in range(times):
                f *= a - k
            ne = list(e)
            ne[i] = a - times
            out[tuple(ne)] = c * f
        return SparsePolynomial._raw(self.arity, out)

    def diff_multi(self, orders: Sequence[int]) -> "SparsePolynomial":
        p = self
        for i, k in enumerate(orders):
            if k:
                p = p.diff(i, k)
        return p

    def __call__(self, *point):
        return self.evaluate(point)

    def evaluate(self, point: Sequence):
        """Evaluate at ``point``; exact when the point entries are exact."""
        if len(point) != self.arity:
            raise ValueError(f"point has {len(point)} entries, expected {self.arity}")
        if point and all(isinstance(x, (int, Fraction)) for x in point):
            return self._evaluate_rational(point)
        total = 0
        for e, c in self._terms.items():
            t = c
            for x, a in zip(point, e):
                if a:
                    t = t * x ** a
            total = total + t
        return total

    def _evaluation_plan(self):
        if self._plan is None:
            D = max((sum(e) for e in self._terms), default=0)
            self._plan = (D, [(D - sum(e), [(i, a) for i, a in enumerate(e) if a],
                               c.numerator, c.denominator) for e, c in self._terms.items()])
        return self._plan

    def _evaluate_rational(self, point: Sequence) -> Fraction:
        # one common denominator q: x_i = p_i / q, so a term of degree k picks up q^(D-k)
        pts = [x if isinstance(x, Fraction) else Fraction(x) for x in point]
        den = 1
        for x in pts:
            d = x.denominator
            den = den * d // math.gcd(den, d)
        nums = [x.numerator * (den // x.denominator) for x in pts]
        D, plan = self._evaluation_plan()
        qpow = [den ** k for k in range(D + 1)]
        powers = [[x ** k for k in range(D + 1)] for x in nums]
        acc: Dict[int, int] = {}
        for shift, factors, cn, cd in plan:
            t = qpow[shift] * cn
            for i, a in factors:
                t *= powers[i][a]
            acc[cd] = acc.get(cd, 0) + t
        total = Fraction(0)
        for cd, v in acc.items():
            total += Fraction(v, cd)
        return total / qpow[D]

    def compose(self, polys: Sequence["SparsePolynomial"]) -> "SparsePolynomial":
        """Substitute ``polys[i]`` for variable ``i``."""
        if len(polys) != self.arity:
            raise ValueError("need one polynomial per variable")
        if not polys:
            raise ValueError("cannot compose a nullary polynomial")
        arity = polys[0].arity
        powers: Dict[Tuple[int, int], SparsePolynomial] = {}

        def power(i: int, a: int) -> SparsePolynomial:
            key = (i, a)
            if key not in powers:
                powers[key] = polys[i] ** a
            return powers[key]

        result = SparsePolynomial.zero(arity)
        for e, c in self._terms.items():
            t = SparsePolynomial.constant(arity, c)
            for i, a in enumerate(e):
                if a:
                    t = t * power(i, a)
            result = result + t
        return result

    # -- division ---------------------------------------------------------

    def leading_lex(self) -> Tuple[Exponent, Fraction]:
        exp = max(self._terms)
        return exp, self._terms[exp]

    def divmod(self, divisor: "SparsePolynomial") -> Tuple["SparsePolynomial", "SparsePolynomial"]:
        """Multivariate division under lex order; returns ``(quotient, remainder)``."""
        self._check(divisor)
        if not divisor:
            raise ZeroDivisionError("division by the zero polynomial")
        lead, lc = divisor.leading_lex()
        rest = [(e, c) for e, c in divisor._terms.items() if e != lead]
        work = dict(self._terms)
        quot: Dict[Exponent, Fraction] = {}
        rem: Dict[Exponent, Fraction] = {}
        while work:
            exp = max(work)
            c = work.pop(exp)
            shift = tuple(a - b for a, b in zip(exp, lead))
            if min(shift) < 0:
                rem[exp] = c
                continue
            q = c / lc
            quot[shift] = quot.get(shift, 0) + q
            for e, d in rest:
                ne = tuple(a + b for a, b in zip(e, shift))
                v = work.get(ne, 0) - q * d
                if v:
                    work[ne] = v
                else:
                    work.pop(ne, None)
        return (SparsePolynomial._raw(self.arity, {e: c for e, c in quot.items() if c}),
                SparsePolynomial._raw(self.arity, rem))

    # -- formatting -------------------------------------------------------

    def format(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = [f"T{i}" for i in range(self.arity)]
        if not self._terms:
            return "0"
        parts = []
        for e in sorted(self._terms, key=lambda e: (-sum(e), [-a for a in e])):
            c = self._terms[e]
            mono = "*".join(
                (names[i] if a == 1 else f"{names[i]}^{a}") for i, a in enumerate(e) if a
            )
            mag = abs(c)
            sign = "-" if c < 0 else "+"
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            parts.append((sign, body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"SparsePolynomial({self.arity}, {self.format()!r})"


def variables(arity: int) -> Tuple[SparsePolynomial, ...]:
    return tuple(SparsePolynomial.variable(arity, i) for i in range(arity))


def parse_polynomial(text: str, names: Sequence[str]) -> SparsePolynomial:
    """Parse an expression like ``"x^2 + 3/2*x*y - 1"`` over the given variable names.

    Supports ``+ - * ^ **``, parentheses and rational literals.
    """
    import re

    tokens = re.findall(r"\d+|[A-Za-z_]\w*|\*\*|[-+*/^()]", text.replace(" ", ""))
    if "".join(tokens) != text.replace(" ", ""):
        raise ValueError(f"cannot tokenize polynomial {text!r}")
    arity = len(names)
    index = {n: i for i, n in enumerate(names)}
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        return tok

    def expr():
        p = term()
        while peek() in ("+", "-"):
            op = take()
            q = term()
            p = p + q if op == "+" else p - q
        return p

    def term():
        p = unary()
        while peek() in ("*", "/"):
            op = take()
            q = unary()
            if op == "*":
                p = p * q
            else:
                if not q.is_constant() or not q:
                    raise ValueError("division only by nonzero constants")
                p = p * (1 / q.coefficient((0,) * arity))
        return p

    def unary():
        if peek() == "-":
            take()
            return -unary()
        if peek() == "+":
            take()
            return unary()
        return power()

    def power():
        p = atom()
        if peek() in ("^", "**"):
            take()
            tok = take()
            if not tok.isdigit():
                raise ValueError("exponents must be nonnegative integers")
            p = p ** int(tok)
        return p

    def atom():
        tok = take() if peek() is not None else None
        if tok is None:
            raise ValueError(f"unexpected end of polynomial {text!r}")
        if tok == "(":
            p = expr()
            if take() != ")":
                raise ValueError("unbalanced parentheses")
            return p
        if tok.isdigit():
            return SparsePolynomial.constant(arity, int(tok))
        if tok in index:
            return SparsePolynomial.variable(arity, index[tok])
        raise ValueError(f"unknown symbol {tok!r}")

    result = expr()
    if pos != len(tokens):
        raise ValueError(f"trailing input in polynomial {text!r}")
    return result
