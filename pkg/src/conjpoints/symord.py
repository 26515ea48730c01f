"""Order of symmetric independence of polynomial maps.

``symord(p)`` is the least degree of a nonzero rational symmetric polynomial
``s`` with ``s(p_0, ..., p_{tau-1}) == 0`` identically, or infinity when no
such ``s`` exists. Two independent routes are provided: Groebner elimination of
the ideal ``<Y_k - e_k(p)>`` and a direct linear-system search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, product
from typing import List, Optional, Sequence, Tuple, Union

from .groebner import BudgetExceeded, GroebnerBasis, MonomialOrder, buchberger
from .linalg import det, rank
from .polynomial import SparsePolynomial
from .symmetric import (WEIGHT, elementary_symmetric, enumerate_partitions,
                        monomial_symmetric, schur)

INFINITE = "infinite"
SymordValue = Union[int, str]


@dataclass(frozen=True)
class PolynomialMap:
    """Components ``p_0..p_{tau-1}`` sharing the input variables ``x_0..x_{d-1}``."""

    components: Tuple[SparsePolynomial, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise ValueError("a polynomial map needs at least one component")
        d = comps[0].arity
        if d < 1 or any(c.arity != d for c in comps):
            raise ValueError("components must share a positive arity")
        object.__setattr__(self, "components", comps)

    @property
    def tau(self) -> int:
        return len(self.components)

    @property
    def d(self) -> int:
        return self.components[0].arity

    def restrict(self, idx: Sequence[int]) -> "PolynomialMap":
        return PolynomialMap(tuple(self.components[i] for i in idx))

    def degree(self) -> int:
        return max(c.total_degree() for c in self.components)


@dataclass
class EliminationResult:
    value: SymordValue
    basis: GroebnerBasis
    elimination_basis: List[SparsePolynomial]
    witness: Optional[SparsePolynomial]


def _elimination_setup(p: PolynomialMap):
    d, tau = p.d, p.tau
    nv = d + tau
    xs = [c.embed(nv, list(range(d))) for c in p.components]
    gens = []
    for k in range(1, tau + 1):
        ek = elementary_symmetric(k, tau).compose(xs)
        yk = SparsePolynomial.variable(nv, d + k - 1)
        gens.append(yk - ek)
    order = MonomialOrder.elimination(d, tau, keep_weights=list(range(1, tau + 1)))
    return gens, order


def symord_via_elimination(p: PolynomialMap, max_steps: int = 200_000,
                           max_seconds: Optional[float] = None) -> EliminationResult:
    """Eliminate ``x`` from ``<Y_k - e_k(p)>`` and read off the least weighted degree.

    ``Y_k`` carries weight ``k`` so that the weighted degree of ``g(Y)`` equals
    the degree of ``g(e_1, ..., e_tau)`` in ``T``. The ``Y`` block uses a
    weighted-degree-compatible order, so the minimum over the reduced basis is
    the minimum over the whole elimination ideal.
    """
    gens, order = _elimination_setup(p)
    gb = buchberger(gens, order, max_steps=max_steps, max_seconds=max_seconds)
    d, tau = p.d, p.tau
    elim = [g for g in gb.generators if all(not any(e[:d]) for e, _ in g.items())]
    if not elim:
        return EliminationResult(INFINITE, gb, [], None)
    weights = [0] * d + list(range(1, tau + 1))
    best = min(elim, key=lambda g: (g.weighted_degree(weights), len(g)))
    return EliminationResult(best.weighted_degree(weights), gb, elim, best)


def symmetric_relation(g: SparsePolynomial, d: int, tau: int) -> SparsePolynomial:
    """Turn an elimination element ``g(Y)`` into the symmetric polynomial ``g(e_1..e_tau)``."""
    es = [SparsePolynomial.zero(tau)] * d + [elementary_symmetric(k, tau) for k in range(1, tau + 1)]
    return g.compose(es)


def _coefficient_rank(polys: Sequence[SparsePolynomial]) -> int:
    support = sorted({e for q in polys for e, _ in q.items()})
    if not support:
        return 0
    col = {e: i for i, e in enumerate(support)}
    rows = []
    for q in polys:
        row = [Fraction(0)] * len(support)
        for e, c in q.items():
            row[col[e]] = c
        rows.append(row)
    return rank(rows)


def symord_linear_oracle(p: PolynomialMap, max_k: int) -> SymordValue:
    """Reference value by brute-force linear algebra in the monomial basis.

    For each ``k`` the family ``m_lambda(p)`` with ``|lambda| <= k`` is tested
    for a rational linear dependence. Returns ``INFINITE`` if none is found up
    to ``max_k`` (meaning "greater than max_k" for this oracle).
    """
    cache = {}
    for k in range(0, max_k + 1):
        family = []
        for lam in enumerate_partitions(k, p.tau, WEIGHT):
            if lam not in cache:
                cache[lam] = monomial_symmetric(lam, p.tau).compose(list(p.components))
            family.append(cache[lam])
        if _coefficient_rank(family) < len(family):
            return k
    return INFINITE


def check_nonsymmetric_degree(p: PolynomialMap, k: int) -> bool:
    """True iff ``{s_lambda(p) : |lambda| <= k}`` is linearly independent over Q."""
    family = [schur(lam, p.tau).compose(list(p.components))
              for lam in enumerate_partitions(k, p.tau, WEIGHT)]
    return _coefficient_rank(family) == len(family)


# -- generalized Wronskians ------------------------------------------------


def _check_ops(ops: Sequence[Sequence[int]], d: int) -> None:
    for s, op in enumerate(ops):
        if len(op) != d:
            raise ValueError(f"operator {op} does not have {d} entries")
        if any(j < 0 for j in op) or sum(op) > s:
            raise ValueError(f"operator {s} = {tuple(op)} has total order above {s}")


def generalized_wronskian(g: Sequence[SparsePolynomial], ops: Sequence[Sequence[int]]) -> SparsePolynomial:
    """``det(ops[i](g[j]))`` where ``ops[i]`` is a multi-index of partial derivatives."""
    if len(g) != len(ops):
        raise ValueError("need as many operators as functions")
    if not g:
        raise ValueError("empty family")
    d = g[0].arity
    _check_ops(ops, d)
    matrix = [[gj.diff_multi(op) for gj in g] for op in ops]
    return _poly_det(matrix, d)


def _poly_det(matrix: List[List[SparsePolynomial]], arity: int) -> SparsePolynomial:
    n = len(matrix)
    if n == 1:
        return matrix[0][0]
    total = SparsePolynomial.zero(arity)
    for j in range(n):
        if not matrix[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        term = matrix[0][j] * _poly_det(minor, arity)
        total = total + term if j % 2 == 0 else total - term
    return total


def _multi_indices(d: int, max_order: int):
    for total in range(max_order + 1):
        for combo in combinations_with_replacement(range(d), total):
            op = [0] * d
            for i in combo:
                op[i] += 1
            yield tuple(op)


def wronskian_nondegenerate(g: Sequence[SparsePolynomial], max_lists: int = 200_000):
    """Search admissible operator lists for a nonzero generalized Wronskian.

    Returns ``(True, ops)`` for the first witness found, else ``(False, None)``.
    Operator lists use distinct multi-indices; a repeated operator gives a
    repeated row and hence a zero determinant.
    """
    g = list(g)
    if not g:
        raise ValueError("empty family")
    d = g[0].arity
    N = len(g)
    candidates = [list(_multi_indices(d, s)) for s in range(N)]
    tried = 0

    def search(level: int, used: List[tuple]):
        nonlocal tried
        if level == N:
            tried += 1
            if tried > max_lists:
                raise BudgetExceeded(f"Wronskian search exceeded {max_lists} operator lists")
            if generalized_wronskian(g, used):
                return list(used)
            return None
        for op in candidates[level]:
            if op in used:
                continue
            # rows must be independent so far; cheap pruning by numeric rank is skipped
            used.append(op)
            found = search(level + 1, used)
            used.pop()
            if found is not None:
                return found
        return None

    witness = search(0, [])
    return (witness is not None, witness)


# -- bounds ----------------------------------------------------------------


def symord_lower_bound_pair(p0: SparsePolynomial, p1: SparsePolynomial) -> Fraction:
    """``deg p0 / deg p1`` for a pair with ``deg p0 > deg p1 >= 1``."""
    d0, d1 = p0.total_degree(), p1.total_degree()
    if not d0 > d1 >= 1:
        raise ValueError(f"need deg p0 > deg p1 >= 1, got {d0}, {d1}")
    return Fraction(d0, d1)


def symord_upper_bound(p: PolynomialMap, idx: Sequence[int], **budget) -> Union[int, str]:
    """``(tau!/t!) * (symord(p_I) + 1)`` for ``|I| = t >= 2``; infinite if ``p_I`` is independent."""
    idx = tuple(idx)
    t = len(idx)
    if t < 2 or len(set(idx)) != t or not all(0 <= i < p.tau for i in idx):
        raise ValueError(f"need at least two distinct indices from range({p.tau}), got {idx}")
    sub = symord_via_elimination(p.restrict(idx), **budget).value
    if sub == INFINITE:
        return INFINITE
    return math.factorial(p.tau) // math.factorial(t) * (sub + 1)
