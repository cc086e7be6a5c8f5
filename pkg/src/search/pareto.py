import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import pandas as pd

from src.exceptions import ConfigError
from src.storage.models import TrialResult

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["complexity", "loss", "std_error", "arch"]


def dominates(a: TrialResult, b: TrialResult) -> bool:
    """a is no worse on both loss and complexity and strictly better on one."""
    return (
        a.loss <= b.loss
        and a.complexity <= b.complexity
        and (a.loss < b.loss or a.complexity < b.complexity)
    )


@dataclass
class ParetoFront:
    """Non-dominated trials, ascending complexity, strictly decreasing loss."""

    entries: list[TrialResult] = field(default_factory=list)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                {
                    "complexity": t.complexity,
                    "loss": t.loss,
                    "std_error": t.std_error,
                    "arch": t.arch.key,
                }
                for t in self.entries
            ],
            columns=CSV_COLUMNS,
        )

    def to_csv(self, path):
        self.to_frame().to_csv(Path(path), index=False, float_format="%.17g")

    def to_gnuplot(self, path):
        """Two whitespace-separated columns: complexity loss."""
        frame = self.to_frame()[["complexity", "loss"]]
        frame.to_csv(Path(path), sep=" ", header=False, index=False, float_format="%.17g")


def pareto_front(trials: Sequence[TrialResult]) -> ParetoFront:
    """Non-dominated subset under (loss, complexity), both minimized.

    Trials tying on both coordinates keep the earliest one.
    """
    usable = [t for t in trials if t.ok]
    if len(usable) != len(trials):
        logger.debug("pareto front ignores %d failed trials", len(trials) - len(usable))
    if not usable:
        raise ConfigError("no completed trials to build a Pareto front from")

    # stable sort: equal (complexity, loss) keep input order
    ordered = sorted(enumerate(usable), key=lambda it: (it[1].complexity, it[1].loss, it[0]))
    front: list[TrialResult] = []
    for _, trial in ordered:
        if not front or trial.loss < front[-1].loss:
            front.append(trial)
    return ParetoFront(entries=front)
