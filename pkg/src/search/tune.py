"""Learning-rate and L2 refinement of chosen architectures by grid search.

Each architecture gets its own (lr, l2) grid. Every grid point is a trial
appended to the ledger with `lr` and `l2` set, so an interrupted refinement
resumes by reusing the points the ledger already completed.
"""
import logging
import math
import time
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

from src.neuralnet.arch import ArchDescriptor
from src.search.exhaustive import run_trial
from src.search.grid import GridDim, GridSpec, grid_search
from src.storage.models import TrialResult, trial_key
from src.storage.repositories.trial_repo import TrialRepository

logger = logging.getLogger(__name__)

TuningEvaluator = Callable[[ArchDescriptor, float, float], tuple[float, float]]


def rate_grid(lr: tuple[float, float], l2: tuple[float, float], n: int, log: bool = True) -> GridSpec:
    """(lr, l2) grid; both axes log-scaled unless asked otherwise."""
    return GridSpec(dims=[GridDim(lr[0], lr[1], log=log), GridDim(l2[0], l2[1], log=log)], n=n)


@dataclass
class Refinement:
    arch: ArchDescriptor
    best: Optional[TrialResult]
    trials: list[TrialResult]

    def to_dict(self) -> dict:
        return {
            "arch": self.arch.key,
            "best": self.best.to_dict() if self.best else None,
            "evaluated": len(self.trials),
        }


def refine(
    archs: Sequence[ArchDescriptor],
    spec: GridSpec,
    evaluate: TuningEvaluator,
    repo: Optional[TrialRepository] = None,
    seed: int = 0,
    clock: Callable[[], float] = time.perf_counter,
) -> list[Refinement]:
    """Grid-search (lr, l2) for every arch; failed points count as +inf loss."""
    completed = repo.get_completed() if repo else {}
    refinements = []
    for arch in archs:
        trials: list[TrialResult] = []

        def objective(theta: tuple[float, ...]) -> float:
            lr, l2 = theta
            key = trial_key(arch, lr, l2)
            if key in completed:
                trial = completed[key]
            else:
                trial = replace(
                    run_trial(arch, lambda a: evaluate(a, lr, l2), seed, clock),
                    lr=lr,
                    l2=l2,
                )
                if repo is not None:
                    repo.append(trial)
            trials.append(trial)
            return trial.loss if trial.ok else math.inf

        result = grid_search(spec, objective)
        best = trials[result.losses.index(result.loss)]
        if not best.ok:
            best = None
            logger.warning("every (lr, l2) point failed for %s", arch.key)
        else:
            logger.info("refined %s: lr=%g l2=%g loss=%.6g", arch.key, best.lr, best.l2, best.loss)
        refinements.append(Refinement(arch=arch, best=best, trials=trials))
    return refinements
