"""Buchberger's algorithm over Q with block monomial orders.

Polynomials are :class:`SparsePolynomial`. A :class:`MonomialOrder` maps an
exponent tuple to a flat integer key; larger keys are larger monomials.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .polynomial import Exponent, SparsePolynomial


class BudgetExceeded(RuntimeError):
    """Raised when a computation runs past its configured step or time cap."""


@dataclass(frozen=True)
class Block:
    size: int
    kind: str = "grevlex"  # grevlex | lex
    weights: Optional[Tuple[int, ...]] = None

    def key(self, exp: Sequence[int]) -> Tuple[int, ...]:
        if self.kind == "lex":
            return tuple(exp)
        w = self.weights or (1,) * self.size
        deg = sum(a * b for a, b in zip(w, exp))
        return (deg,) + tuple(-e for e in reversed(exp))


@dataclass(frozen=True)
class MonomialOrder:
    """Product of blocks; earlier blocks dominate (elimination order)."""

    blocks: Tuple[Block, ...]

    @classmethod
    def grevlex(cls, nvars: int) -> "MonomialOrder":
        return cls((Block(nvars),))

    @classmethod
    def lex(cls, nvars: int) -> "MonomialOrder":
        return cls((Block(nvars, "lex"),))

    @classmethod
    def elimination(cls, n_elim: int, n_keep: int,
                    keep_weights: Optional[Sequence[int]] = None) -> "MonomialOrder":
        keep = Block(n_keep, "grevlex", tuple(keep_weights) if keep_weights else None)
        return cls((Block(n_elim), keep))

    @property
    def nvars(self) -> int:
        return sum(b.size for b in self.blocks)

    def key(self, exp: Sequence[int]) -> Tuple[int, ...]:
        out: Tuple[int, ...] = ()
        i = 0
        for b in self.blocks:
            out += b.key(exp[i:i + b.size])
            i += b.size
        return out

    def sugar_weights(self) -> Tuple[int, ...]:
        w: Tuple[int, ...] = ()
        for b in self.blocks:
            w += b.weights or (1,) * b.size
        return w

    def describe(self) -> str:
        parts = []
        for b in self.blocks:
            desc = f"{b.kind}[{b.size}]"
            if b.weights:
                desc += "w" + ",".join(map(str, b.weights))
            parts.append(desc)
        return " > ".join(parts)


@dataclass
class GroebnerBasis:
    generators: List[SparsePolynomial]
    order: MonomialOrder
    stats: Dict[str, int] = field(default_factory=dict)

    def leading_monomials(self) -> List[Exponent]:
        return [leading(g, self.order)[0] for g in self.generators]

    def reduce(self, f: SparsePolynomial) -> SparsePolynomial:
        return normal_form(f, self.generators, self.order)

    def contains(self, f: SparsePolynomial) -> bool:
        return not self.reduce(f)


def leading(f: SparsePolynomial, order: MonomialOrder) -> Tuple[Exponent, Fraction]:
    exp = max((e for e, _ in f.items()), key=order.key)
    return exp, f.coefficient(exp)


def _divides(a: Exponent, b: Exponent) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x - y for x, y in zip(a, b))


class _Elem:
    __slots__ = ("terms", "lm", "lc", "sugar", "alive")

    def __init__(self, terms: Dict[Exponent, Fraction], order: MonomialOrder, sugar: int):
        self.lm = max(terms, key=order.key)
        lc = terms[self.lm]
        self.terms = {e: c / lc for e, c in terms.items()}
        self.lc = Fraction(1)
        self.sugar = sugar
        self.alive = True


def _reduce_terms(terms: Dict[Exponent, Fraction], basis: List[_Elem], order: MonomialOrder,
                  full: bool = True, check: Optional[Callable[[], None]] = None) -> Dict[Exponent, Fraction]:
    """Normal form of ``terms`` modulo monic ``basis`` elements (full reduction).

    ``check`` is called every 16 reduction steps so long reductions
    still honour a time budget.
    """
    work = dict(terms)
    steps = 0
    heap = [tuple(-k for k in order.key(e)) + (e,) for e in work]
    heapq.heapify(heap)
    out: Dict[Exponent, Fraction] = {}
    seen = set()
    while heap:
        item = heapq.heappop(heap)
        e = item[-1]
        if e in seen:
            continue
        seen.add(e)
        c = work.pop(e, None)
        if not c:
            continue
        g = next((g for g in basis if g.alive and _divides(g.lm, e)), None)
        if g is None:
            out[e] = c
            if not full:
                out.update({k: v for k, v in work.items() if v})
                break
            continue
        steps += 1
        if check is not None and steps % 16 == 0:
            check()
        shift = _sub(e, g.lm)
        for ge, gc in g.terms.items():
            if ge == g.lm:
                continue
            ne = tuple(a + b for a, b in zip(ge, shift))
            v = work.get(ne, 0) - c * gc
            if v:
                if ne not in work and ne not in seen:
                    heapq.heappush(heap, tuple(-k for k in order.key(ne)) + (ne,))
                elif ne in seen:
                    # a lower monomial can never reappear after being passed
                    raise AssertionError("monomial order violated during reduction")
                work[ne] = v
            else:
                work.pop(ne, None)
    return out


def normal_form(f: SparsePolynomial, basis: Sequence[SparsePolynomial],
                order: MonomialOrder) -> SparsePolynomial:
    elems = [_Elem(g.terms, order, g.total_degree()) for g in basis if g]
    return SparsePolynomial(f.arity, _reduce_terms(f.terms, elems, order))


def s_polynomial(f: SparsePolynomial, g: SparsePolynomial, order: MonomialOrder) -> SparsePolynomial:
    (ef, cf), (eg, cg) = leading(f, order), leading(g, order)
    lcm = _lcm(ef, eg)
    mf = SparsePolynomial.monomial(_sub(lcm, ef), 1 / cf)
    mg = SparsePolynomial.monomial(_sub(lcm, eg), 1 / cg)
    return mf * f - mg * g


def _wdeg(e: Exponent, w: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(e, w))


def buchberger(generators: Sequence[SparsePolynomial], order: MonomialOrder,
               max_steps: int = 200_000, max_seconds: Optional[float] = None) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``generators``.

    Pairs are selected by the sugar strategy; the product and chain criteria
    (Gebauer-Moeller) prune pairs. Exceeding ``max_steps`` processed pairs or
    ``max_seconds`` raises :class:`BudgetExceeded`.
    """
    gens = [g for g in generators if g]
    if not generators:
        raise ValueError("need at least one generator")
    if not gens:
        return GroebnerBasis([], order, {"pairs": 0, "reductions": 0})
    arity = gens[0].arity
    if any(g.arity != arity for g in gens) or arity != order.nvars:
        raise ValueError("generator arity does not match the monomial order")
    w = order.sugar_weights()
    start = time.monotonic()

    basis: List[_Elem] = []
    pairs: List[tuple] = []  # heap of (sugar, lcm key, counter, i, j)
    counter = 0
    stats = {"pairs": 0, "reductions": 0, "zero_reductions": 0}

    def check_budget():
        if stats["pairs"] > max_steps:
            raise BudgetExceeded(f"Buchberger exceeded {max_steps} pair reductions")
        if max_seconds is not None and time.monotonic() - start > max_seconds:
            raise BudgetExceeded(f"Buchberger exceeded {max_seconds:.1f}s")

    def add(elem: _Elem):
        nonlocal counter, pairs
        k = len(basis)
        basis.append(elem)
        new = []
        for i, g in enumerate(basis[:-1]):
            if not g.alive:
                continue
            lcm = _lcm(g.lm, elem.lm)
            sugar = max(g.sugar + _wdeg(_sub(lcm, g.lm), w), elem.sugar + _wdeg(_sub(lcm, elem.lm), w))
            new.append((i, lcm, sugar))
        # chain criterion on old pairs: drop (i, j) if lm(elem) | lcm(i,j) strictly
        kept = []
        for item in pairs:
            _, _, _, i, j, lcm = item
            if (_divides(elem.lm, lcm) and _lcm(basis[i].lm, elem.lm) != lcm
                    and _lcm(basis[j].lm, elem.lm) != lcm):
                continue
            kept.append(item)
        pairs = kept
        heapq.heapify(pairs)
        # among new pairs, keep one per lcm class minimal under divisibility
        new.sort(key=lambda t: (t[2], order.key(t[1])))
        chosen = []
        for i, lcm, sugar in new:
            if any(_divides(l2, lcm) for _, l2, _ in chosen):
                continue
            chosen.append((i, lcm, sugar))
        for i, lcm, sugar in chosen:
            # product criterion: coprime leading monomials reduce to zero
            if all(a == 0 or b == 0 for a, b in zip(basis[i].lm, elem.lm)):
                continue
            counter += 1
            heapq.heappush(pairs, (sugar, order.key(lcm), counter, i, k, lcm))
        # retire elements whose leading monomial is divisible by the new one
        for g in basis[:-1]:
            if g.alive and _divides(elem.lm, g.lm):
                g.alive = False

    for g in sorted(gens, key=lambda p: order.key(leading(p, order)[0])):
        terms = _reduce_terms(g.terms, basis, order, check=check_budget)
        if terms:
            add(_Elem(terms, order, max(_wdeg(e, w) for e in terms)))

    while pairs:
        check_budget()
        sugar, _, _, i, j, lcm = heapq.heappop(pairs)
        f, g = basis[i], basis[j]
        stats["pairs"] += 1
        sf, sg = _sub(lcm, f.lm), _sub(lcm, g.lm)
        terms: Dict[Exponent, Fraction] = {}
        for e, c in f.terms.items():
            ne = tuple(a + b for a, b in zip(e, sf))
            terms[ne] = terms.get(ne, 0) + c
        for e, c in g.terms.items():
            ne = tuple(a + b for a, b in zip(e, sg))
            v = terms.get(ne, 0) - c
            if v:
                terms[ne] = v
            else:
                terms.pop(ne, None)
        terms = _reduce_terms(terms, basis, order, check=check_budget)
        stats["reductions"] += 1
        if not terms:
            stats["zero_reductions"] += 1
            continue
        add(_Elem(terms, order, sugar))

    # minimal basis, then interreduce
    alive = [g for g in basis if g.alive]
    minimal = []
    for g in alive:
        if not any(h is not g and _divides(h.lm, g.lm) and (h.lm != g.lm or id(h) < id(g))
                   for h in alive):
            minimal.append(g)
    reduced = []
    for g in minimal:
        others = [h for h in minimal if h is not g]
        tail = {e: c for e, c in g.terms.items() if e != g.lm}
        tail = _reduce_terms(tail, others, order, check=check_budget)
        tail[g.lm] = Fraction(1)
        reduced.append(SparsePolynomial(arity, tail))
    reduced.sort(key=lambda p: order.key(leading(p, order)[0]), reverse=True)
    stats["size"] = len(reduced)
    return GroebnerBasis(reduced, order, stats)


def is_groebner(basis: Sequence[SparsePolynomial], order: MonomialOrder) -> bool:
    """Buchberger criterion: every S-polynomial reduces to zero."""
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            if normal_form(s_polynomial(basis[i], basis[j], order), basis, order):
                return False
    return True
