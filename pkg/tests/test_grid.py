import math

import pytest

from src.exceptions import BudgetExceededError, ConfigError, EvaluationError
from src.search.grid import GridDim, GridSpec, grid_search, lipschitz_bound_check
from src.search.tune import rate_grid

# (loss, Lipschitz constant on [0, 1], true minimum on [0, 1])
FUNCTIONS = {
    "abs": (lambda t: abs(t[0] - 0.3), 1.0, 0.0),
    "square": (lambda t: (t[0] - 0.3) ** 2, 1.4, 0.0),
    "sine": (lambda t: math.sin(5 * t[0]), 5.0, -1.0),
}

NESTED = [2, 3, 5, 9, 17, 33, 65]


@pytest.mark.parametrize("name", sorted(FUNCTIONS))
def test_grid_minimum_is_within_lipschitz_bound(name):
    f, lipschitz, true_min = FUNCTIONS[name]
    for n in range(2, 65):
        spec = GridSpec([GridDim(0.0, 1.0)], n)
        result = grid_search(spec, f)
        check = lipschitz_bound_check(result, lipschitz, spec.steps()[0], true_min)
        assert check.passed, (name, n, check)
        assert result.loss >= true_min


@pytest.mark.parametrize("name", sorted(FUNCTIONS))
def test_nested_grids_never_get_worse(name):
    f = FUNCTIONS[name][0]
    minima = [grid_search(GridSpec([GridDim(0.0, 1.0)], n), f).loss for n in NESTED]
    assert all(a >= b for a, b in zip(minima, minima[1:]))


def test_bound_check_detects_violation():
    check = lipschitz_bound_check([0.5, 0.9], lipschitz=0.1, delta=0.5, reference=0.0)
    assert not check.passed
    assert check.lower_bound == pytest.approx(0.475)
    assert check.margin == pytest.approx(-0.475)


def test_grid_points_and_steps():
    spec = GridSpec([GridDim(0.0, 1.0), GridDim(1e-5, 1e-1, log=True)], 5)
    assert spec.size == 25
    assert spec.steps() == pytest.approx([0.25, 1.0])
    assert list(spec.axis(0)) == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert list(spec.axis(1)) == pytest.approx([1e-5, 1e-4, 1e-3, 1e-2, 1e-1])


def test_two_dimensional_search():
    spec = GridSpec([GridDim(0.0, 1.0), GridDim(0.0, 1.0)], 11)
    result = grid_search(spec, lambda t: (t[0] - 0.3) ** 2 + (t[1] - 0.7) ** 2)
    assert result.theta == pytest.approx((0.3, 0.7))
    assert len(result.evaluations) == 121


def test_first_point_wins_ties():
    result = grid_search(GridSpec([GridDim(-1.0, 1.0), GridDim(2.0, 3.0)], 4), lambda t: 0.0)
    assert result.theta == (-1.0, 2.0)


def test_budget_cap():
    spec = GridSpec([GridDim(0.0, 1.0)] * 3, 50)
    with pytest.raises(BudgetExceededError):
        grid_search(spec, lambda t: 0.0)
    with pytest.raises(BudgetExceededError):
        grid_search(GridSpec([GridDim(0.0, 1.0)], 10), lambda t: 0.0, budget_cap=9)


def test_failing_evaluation():
    def boom(theta):
        raise RuntimeError("nope")

    with pytest.raises(EvaluationError):
        grid_search(GridSpec([GridDim(0.0, 1.0)], 3), boom)


@pytest.mark.parametrize(
    "make",
    [
        lambda: GridDim(1.0, 1.0),
        lambda: GridDim(0.0, 1.0, log=True),
        lambda: GridSpec([GridDim(0.0, 1.0)], 1),
        lambda: GridSpec([], 3),
    ],
)
def test_invalid_grids(make):
    with pytest.raises(ConfigError):
        make()


def test_six_point_grid_keeps_the_earlier_of_two_equal_neighbours():
    # 0.2 and 0.4 are both 0.1 from the optimum; 0.2 comes first
    result = grid_search(GridSpec([GridDim(0.0, 1.0)], 6), lambda t: (t[0] - 0.3) ** 2)
    assert result.theta == pytest.approx((0.2,))
    assert result.loss == pytest.approx(0.01)
    assert len(result.evaluations) == 6


def test_abs_bound_is_tight_on_six_points():
    spec = GridSpec([GridDim(0.0, 1.0)], 6)
    result = grid_search(spec, lambda t: abs(t[0] - 0.3))
    assert result.loss == pytest.approx(0.1)
    check = lipschitz_bound_check(result, 1.0, spec.steps()[0], 0.0)
    assert check.passed
    assert check.margin == pytest.approx(0.0, abs=1e-12)


def test_rate_grid_is_log_scaled():
    spec = rate_grid((1e-6, 1e-2), (1e-10, 1e-6), 5)
    assert all(d.log for d in spec.dims)
    assert list(spec.axis(0)) == pytest.approx([1e-6, 1e-5, 1e-4, 1e-3, 1e-2])
    assert list(spec.axis(1)) == pytest.approx([1e-10, 1e-9, 1e-8, 1e-7, 1e-6])
    with pytest.raises(ConfigError):
        rate_grid((0.0, 1e-2), (1e-10, 1e-6), 5)
