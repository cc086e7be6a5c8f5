"""Multivariate grid search over a box, plus the Lipschitz optimality-gap check.

With n points per dimension the step is delta_i = (b_i - a_i) / (n - 1) and
grid point j sits at a_i + j * delta_i (in exponent space for log-scaled
dimensions). For an M-Lipschitz loss in one dimension the grid minimum
overshoots the true minimum by at most M * delta / 2.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from src.config import settings
from src.exceptions import BudgetExceededError, ConfigError, EvaluationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GridDim:
    lower: float
    upper: float
    log: bool = False

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ConfigError(f"grid interval needs lower < upper, got [{self.lower}, {self.upper}]")
        if self.log and self.lower <= 0:
            raise ConfigError(f"log-scaled grid interval must be positive, got [{self.lower}, {self.upper}]")


@dataclass(frozen=True)
class GridSpec:
    dims: Sequence[GridDim]
    n: int

    def __post_init__(self):
        if not self.dims:
            raise ConfigError("grid needs at least one dimension")
        if self.n < 2:
            raise ConfigError(f"grid needs n >= 2 points per dimension, got {self.n}")

    def steps(self) -> list[float]:
        """delta_i, measured in log10 units for log-scaled dimensions."""
        out = []
        for d in self.dims:
            lo, hi = (math.log10(d.lower), math.log10(d.upper)) if d.log else (d.lower, d.upper)
            out.append((hi - lo) / (self.n - 1))
        return out

    def axis(self, i: int) -> np.ndarray:
        d = self.dims[i]
        delta = self.steps()[i]
        j = np.arange(self.n, dtype=np.float64)
        if d.log:
            return 10.0 ** (math.log10(d.lower) + j * delta)
        return d.lower + j * delta

    @property
    def size(self) -> int:
        return self.n ** len(self.dims)


@dataclass
class GridResult:
    theta: tuple[float, ...]
    loss: float
    evaluations: list[tuple[tuple[float, ...], float]] = field(default_factory=list)

    @property
    def losses(self) -> list[float]:
        return [loss for _, loss in self.evaluations]


def grid_search(
    spec: GridSpec,
    evaluate: Callable[[tuple[float, ...]], float],
    budget_cap: int | None = None,
) -> GridResult:
    """Evaluate every grid point; the first point reaching the minimum wins."""
    cap = settings.GRID_BUDGET_CAP if budget_cap is None else budget_cap
    if spec.size > cap:
        raise BudgetExceededError(f"grid has {spec.size} points, cap is {cap}")

    axes = [spec.axis(i) for i in range(len(spec.dims))]
    evaluations = []
    best_theta, best_loss = None, math.inf
    for point in itertools.product(*axes):
        theta = tuple(float(v) for v in point)
        try:
            loss = float(evaluate(theta))
        except Exception as exc:
            raise EvaluationError(f"evaluation failed at {theta}: {exc}") from exc
        evaluations.append((theta, loss))
        if best_theta is None or loss < best_loss:
            best_theta, best_loss = theta, loss
    logger.debug("grid search: %d points, best %s -> %.6g", len(evaluations), best_theta, best_loss)
    return GridResult(theta=best_theta, loss=best_loss, evaluations=evaluations)


@dataclass(frozen=True)
class BoundCheck:
    passed: bool
    margin: float
    lower_bound: float


def lipschitz_bound_check(
    evaluations: GridResult | Sequence[float],
    lipschitz: float,
    delta: float,
    reference: float,
    tol: float = 1e-12,
) -> BoundCheck:
    """Check min(evaluations) - M*delta/2 <= reference.

    `reference` is the known true minimum; `tol` absorbs floating-point
    rounding in the grid coordinates.
    """
    if lipschitz <= 0 or delta <= 0:
        raise ConfigError("Lipschitz constant and step must be positive")
    losses = evaluations.losses if isinstance(evaluations, GridResult) else list(evaluations)
    if not losses:
        raise ConfigError("no evaluations to check")
    lower_bound = min(losses) - lipschitz * delta / 2.0
    margin = reference - lower_bound
    return BoundCheck(passed=margin >= -tol, margin=margin, lower_bound=lower_bound)
