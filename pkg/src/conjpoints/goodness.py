"""Grid check of the sublevel-set bound ``|{x in B : ||g(x)|| < eps}| <= 4d (eps/||g||_B)^(1/k) |B|``."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .polynomial import SparsePolynomial

DEFAULT_RESOLUTION = 512
DEFAULT_SLACK = 0.01


@dataclass
class GoodnessRow:
    eps: float
    measure: float
    bound: float
    violation: bool


@dataclass
class GoodnessReport:
    norm: float
    degree: int
    volume: float
    rows: List[GoodnessRow] = field(default_factory=list)

    @property
    def violations(self) -> int:
        return sum(r.violation for r in self.rows)


def _grid(box: Sequence[Tuple[float, float]], resolution: int) -> List[np.ndarray]:
    axes = [lo + (np.arange(resolution) + 0.5) * (hi - lo) / resolution for lo, hi in box]
    return [g.ravel() for g in np.meshgrid(*axes, indexing="ij")]


def evaluate_on_grid(p: SparsePolynomial, pts: Sequence[np.ndarray]) -> np.ndarray:
    out = np.zeros_like(pts[0])
    for exp, c in p.items():
        term = np.full_like(pts[0], float(c))
        for x, e in zip(pts, exp):
            if e:
                term = term * x ** e
        out = out + term
    return out


def default_epsilons(norm: float, points: int = 8) -> List[float]:
    """``norm * 4^-j`` for ``j = 1..points``."""
    return [norm * 4.0 ** -j for j in range(1, points + 1)]


def goodness_bound_check(g: Sequence[SparsePolynomial], box: Sequence[Tuple[float, float]],
                         epsilons: Optional[Sequence[float]] = None,
                         resolution: int = DEFAULT_RESOLUTION,
                         slack: float = DEFAULT_SLACK) -> GoodnessReport:
    """Midpoint-grid measure of each sublevel set against the bound.

    ``||g||_B`` is the grid maximum of the sup norm of ``g``. A row is a
    violation when the measure exceeds the bound by more than ``slack * |B|``.
    """
    g = list(g)
    if not g:
        raise ValueError("empty map")
    d = g[0].arity
    if len(box) != d or any(hi <= lo for lo, hi in box):
        raise ValueError("box must be nondegenerate with one interval per variable")
    k = max(p.total_degree() for p in g)
    if k < 0:
        raise ValueError("the zero map has no sublevel bound")
    pts = _grid(box, resolution)
    vals = np.max(np.abs(np.vstack([evaluate_on_grid(p, pts) for p in g])), axis=0)
    norm = float(vals.max())
    volume = float(np.prod([hi - lo for lo, hi in box]))
    report = GoodnessReport(norm, k, volume)
    if epsilons is None:
        epsilons = default_epsilons(norm)
    cell = volume / vals.size
    for eps in epsilons:
        measure = float(np.count_nonzero(vals < eps)) * cell
        if k == 0:
            # a nonzero constant: the sublevel set is empty or everything
            bound = 0.0 if eps <= norm else volume
        else:
            bound = 4 * d * (eps / norm) ** (1.0 / k) * volume
        report.rows.append(GoodnessRow(float(eps), measure, bound, measure > bound + slack * volume))
    return report


def random_polynomial_map(rng: np.random.Generator, d: int, degree: int, N: int,
                          coeff_range: int = 5) -> List[SparsePolynomial]:
    """``N`` random integer-coefficient polynomials in ``d`` variables of degree ``<= degree``."""
    exps = [e for e in np.ndindex(*([degree + 1] * d)) if sum(e) <= degree]
    out = []
    for _ in range(N):
        while True:
            cs = rng.integers(-coeff_range, coeff_range + 1, size=len(exps))
            if cs.any():
                break
        out.append(SparsePolynomial(d, {tuple(int(x) for x in e): int(c)
                                        for e, c in zip(exps, cs) if c}))
    return out
