"""Maximum-likelihood fitting and asymptotic goodness-of-fit statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincc

from .suffstat import SuffStatMatrix
from .table_model import Shape


class NoConvergence(RuntimeError):
    def __init__(self, fit: "FittedTable"):
        super().__init__(
            f"proportional fitting did not converge in {fit.iterations} cycles "
            f"(Birch residual {fit.birch_residual:.3g})"
        )
        self.fit = fit


class Inconsistent(ValueError):
    """A cell with positive count received zero fitted probability."""


@dataclass(frozen=True)
class ContingencyTable:
    shape: Shape
    counts: tuple[int, ...]  # row-major

    def __post_init__(self):
        if len(self.counts) != self.shape.size:
            raise ValueError(f"{len(self.counts)} counts for a {self.shape} table")
        if any(c < 0 for c in self.counts):
            raise ValueError("counts must be nonnegative")

    @classmethod
    def from_rows(cls, rows) -> "ContingencyTable":
        rows = [list(map(int, r)) for r in rows]
        if not rows or len({len(r) for r in rows}) != 1:
            raise ValueError("table rows must be nonempty and of equal length")
        return cls(Shape(len(rows), len(rows[0])), tuple(x for r in rows for x in r))

    @property
    def total(self) -> int:
        return sum(self.counts)

    def rows(self) -> list[list[int]]:
        J = self.shape.cols
        return [list(self.counts[r * J:(r + 1) * J]) for r in range(self.shape.rows)]

    def array(self) -> np.ndarray:
        return np.array(self.counts, dtype=float)


@dataclass(frozen=True)
class FittedTable:
    shape: Shape
    probs: np.ndarray  # row-major, sums to 1
    converged: bool
    iterations: int
    birch_residual: float

    def fitted_counts(self, n: int) -> np.ndarray:
        return n * self.probs

    def grid(self) -> np.ndarray:
        return self.probs.reshape(self.shape.rows, self.shape.cols)


def birch_residual(a: SuffStatMatrix, h: ContingencyTable, probs: np.ndarray) -> float:
    """max |A^t (n p - h)|."""
    fitted = h.total * probs
    counts = h.array()
    return max(
        (abs(fitted[list(s)].sum() - counts[list(s)].sum()) for s in a.supports if s),
        default=0.0,
    )


def fit_mle(
    a: SuffStatMatrix,
    h: ContingencyTable,
    tol: float = 1e-10,
    max_iter: int = 100_000,
    *,
    strict: bool = False,
) -> FittedTable:
    """Iterative proportional scaling towards the observed sufficient statistic.

    Works on expected counts.  Each cycle rescales, column by column, the
    cells in the column's support by observed total / fitted total, then
    renormalizes to ``n``.  Columns with observed total zero pin their
    support to zero from the start, which gives the MLE on the closure of the
    model.  Stops once the Birch residual is at most ``tol * n``.

    With ``strict=True`` a non-converged run raises ``NoConvergence``
    (carrying the last iterate); otherwise it is returned flagged.
    """
    n = h.total
    if n < 1:
        raise ValueError("table total must be at least 1")
    counts = h.array()
    supports = [np.array(s, dtype=int) for s in a.supports if s]
    observed = [counts[s].sum() for s in supports]

    m = np.full(h.shape.size, n / h.shape.size)
    for s, t in zip(supports, observed):
        if t == 0:
            m[s] = 0.0
    m *= n / m.sum()

    def residual(m):
        return max(abs(m[s].sum() - t) for s, t in zip(supports, observed))

    res = residual(m)
    it = 0
    while res > tol * n and it < max_iter:
        for s, t in zip(supports, observed):
            cur = m[s].sum()
            if cur > 0:
                m[s] *= t / cur
        m *= n / m.sum()
        it += 1
        res = residual(m)

    probs = m / m.sum()
    fit = FittedTable(h.shape, probs, res <= tol * n, it, float(birch_residual(a, h, probs)))
    if strict and not fit.converged:
        raise NoConvergence(fit)
    return fit


def _check(h: ContingencyTable, fit: FittedTable):
    counts = h.array()
    if np.any((fit.probs <= 0) & (counts > 0)):
        raise Inconsistent("a cell with positive count has zero fitted probability")
    return counts / h.total, fit.probs


def pearson_c2(h: ContingencyTable, fit: FittedTable) -> float:
    """n * sum (p - p_hat)^2 / p_hat over cells with p_hat > 0."""
    p, q = _check(h, fit)
    mask = q > 0
    return float(h.total * np.sum((p[mask] - q[mask]) ** 2 / q[mask]))


def g2(h: ContingencyTable, fit: FittedTable) -> float:
    """2n * sum p log(p / p_hat) over cells with positive count."""
    p, q = _check(h, fit)
    mask = p > 0
    return float(2 * h.total * np.sum(p[mask] * np.log(p[mask] / q[mask])))


def chisq_sf(x: float, df: int) -> float:
    """Upper tail P(X > x) of a chi-square variable with ``df`` degrees of freedom."""
    if df < 1:
        raise ValueError("degrees of freedom must be positive")
    if x < 0:
        raise ValueError("x must be nonnegative")
    if x == 0:
        return 1.0
    return float(gammaincc(df / 2.0, x / 2.0))


def log_fiber_weight(h: ContingencyTable | np.ndarray | tuple) -> float:
    """-sum log(h_ij!); the hypergeometric fiber weight up to a constant."""
    counts = h.counts if isinstance(h, ContingencyTable) else h
    return -sum(math.lgamma(c + 1) for c in counts)
