import numpy as np
import pandas as pd
import pytest

from src.exceptions import ConfigError
from src.neuralnet.arch import ArchDescriptor
from src.search.pareto import CSV_COLUMNS, dominates, pareto_front
from src.storage.models import STATUS_FAILED, TrialResult

ARCH = ArchDescriptor(16, 3)


def _t(complexity, loss, index=0, status="ok"):
    return TrialResult(arch=ARCH, loss=loss, std_error=0.0, complexity=complexity, seed=index, status=status)


@pytest.fixture
def hand_set():
    return [_t(100, -30.0, 0), _t(200, -32.0, 1), _t(300, -31.0, 2), _t(400, -33.0, 3)]


def test_hand_set(hand_set):
    front = pareto_front(hand_set)
    assert [t.seed for t in front] == [0, 1, 3]


def test_front_is_sorted_with_strictly_decreasing_loss(hand_set):
    front = pareto_front(list(reversed(hand_set)))
    complexities = [t.complexity for t in front]
    losses = [t.loss for t in front]
    assert complexities == sorted(complexities)
    assert all(a > b for a, b in zip(losses, losses[1:]))


def test_dominates():
    assert dominates(_t(1, 1.0), _t(2, 1.0))
    assert dominates(_t(1, 0.5), _t(1, 1.0))
    assert not dominates(_t(1, 1.0), _t(1, 1.0))
    assert not dominates(_t(1, 2.0), _t(2, 1.0))


def test_exact_duplicates_keep_the_earliest():
    front = pareto_front([_t(10, 1.0, 0), _t(10, 1.0, 1), _t(5, 2.0, 2)])
    assert [t.seed for t in front] == [2, 0]


def test_failed_trials_are_ignored():
    front = pareto_front([_t(10, None, 0, STATUS_FAILED), _t(20, 1.0, 1)])
    assert [t.seed for t in front] == [1]
    with pytest.raises(ConfigError):
        pareto_front([_t(10, None, 0, STATUS_FAILED)])


def _oracle(complexity: np.ndarray, loss: np.ndarray) -> set[int]:
    c_i, c_j = complexity[:, None], complexity[None, :]
    l_i, l_j = loss[:, None], loss[None, :]
    # [i, j]: j dominates i
    dominated = (l_j <= l_i) & (c_j <= c_i) & ((l_j < l_i) | (c_j < c_i))
    same = (l_j == l_i) & (c_j == c_i)
    earlier = np.tril(np.ones_like(same), k=-1)
    drop = dominated.any(axis=1) | (same & earlier).any(axis=1)
    return set(np.flatnonzero(~drop).tolist())


def test_matches_quadratic_oracle_on_random_ledgers():
    rng = np.random.default_rng(42)
    for trial in range(100):
        complexity = rng.integers(1_000, 50_000, size=1000)
        if trial % 2:
            # coarse losses produce plenty of ties
            loss = rng.integers(-40, -20, size=1000).astype(np.float64)
        else:
            loss = rng.normal(-30.0, 3.0, size=1000)
        trials = [_t(int(c), float(v), i) for i, (c, v) in enumerate(zip(complexity, loss))]
        front = pareto_front(trials)
        assert {t.seed for t in front} == _oracle(complexity, loss)


def test_csv_and_gnuplot_export(tmp_path, hand_set):
    front = pareto_front(hand_set)
    front.to_csv(tmp_path / "front.csv")
    frame = pd.read_csv(tmp_path / "front.csv")
    assert list(frame.columns) == CSV_COLUMNS
    assert len(frame) == 3
    assert frame["complexity"].tolist() == [100, 200, 400]
    assert frame["loss"].tolist() == [-30.0, -32.0, -33.0]

    front.to_gnuplot(tmp_path / "front.dat")
    rows = (tmp_path / "front.dat").read_text().split("\n")
    assert rows[:3] == ["100 -30", "200 -32", "400 -33"]


def test_re_adding_dominated_points_leaves_the_front_unchanged():
    rng = np.random.default_rng(7)
    for _ in range(20):
        pairs = zip(rng.integers(1, 500, 300), rng.integers(-40, -20, 300))
        trials = [_t(int(c), float(v), i) for i, (c, v) in enumerate(pairs)]
        front = pareto_front(trials)
        kept = {id(t) for t in front}
        dominated = [t for t in trials if id(t) not in kept]
        again = pareto_front(front.entries + dominated)
        assert [t.seed for t in again] == [t.seed for t in front]
