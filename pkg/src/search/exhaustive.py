"""Exhaustive search with a running incumbent.

Points are evaluated in enumeration order; the first point seeds the
incumbent and a later point replaces it only on a strictly lower loss. Every
outcome is appended to the ledger as soon as it (and everything before it in
enumeration order) is known, so an interrupted run resumes by skipping keys
the ledger already completed and ends with the same ledger bytes. With
workers, an interrupt cancels queued trials and still records every trial
that had finished, out of order if need be.
"""
import logging
import math
import time
from concurrent.futures import Future, ThreadPoolExecutor
from typing import Callable, Optional, Sequence

from src.exceptions import ConfigError
from src.neuralnet.arch import ArchDescriptor, count_params
from src.storage.models import STATUS_FAILED, STATUS_OK, TrialResult
from src.storage.repositories.trial_repo import TrialRepository

logger = logging.getLogger(__name__)

Evaluator = Callable[[ArchDescriptor], tuple[float, float]]


def run_trial(arch: ArchDescriptor, evaluate: Evaluator, seed: int, clock) -> TrialResult:
    """Evaluate one point; exceptions and non-finite losses give a failed trial."""
    start = clock()
    complexity = count_params(arch)
    try:
        loss, std_error = evaluate(arch)
        loss = float(loss)
        if not math.isfinite(loss):
            raise ValueError(f"non-finite loss {loss}")
    except Exception as exc:
        logger.warning("trial %s failed: %s", arch.key, exc)
        return TrialResult(
            arch=arch,
            loss=None,
            std_error=None,
            complexity=complexity,
            wall_time=clock() - start,
            seed=seed,
            status=STATUS_FAILED,
            error=str(exc),
        )
    return TrialResult(
        arch=arch,
        loss=loss,
        std_error=float(std_error),
        complexity=complexity,
        wall_time=clock() - start,
        seed=seed,
        status=STATUS_OK,
    )


def _finished(futures: dict[str, Future], skip: set[str]) -> list[TrialResult]:
    return [
        fut.result()
        for key, fut in futures.items()
        if key not in skip and fut.done() and not fut.cancelled() and fut.exception() is None
    ]


def exhaustive_search(
    space: Sequence[ArchDescriptor],
    evaluate: Evaluator,
    budget: Optional[int] = None,
    repo: Optional[TrialRepository] = None,
    jobs: int = 1,
    seed: int = 0,
    clock: Callable[[], float] = time.perf_counter,
) -> tuple[Optional[TrialResult], list[TrialResult]]:
    """Evaluate the first min(budget, |space|) points; return (best, all)."""
    if not space:
        raise ConfigError("search space is empty")
    if budget is not None and not 1 <= budget <= len(space):
        raise ConfigError(f"budget must be in [1, {len(space)}], got {budget}")
    points = list(space[: budget or len(space)])
    completed = repo.get_completed() if repo else {}
    if completed:
        resumed = sum(1 for p in points if p.key in completed)
        logger.info("resuming: %d of %d trials already in %s", resumed, len(points), repo.path)

    best: Optional[TrialResult] = None
    results: list[TrialResult] = []

    def record(trial: TrialResult, fresh: bool):
        nonlocal best
        if fresh and repo is not None:
            repo.append(trial)
        results.append(trial)
        if trial.ok and (best is None or trial.loss < best.loss):
            best = trial
            logger.info("new incumbent %s loss=%.6g complexity=%d", trial.key, trial.loss, trial.complexity)

    if jobs <= 1:
        for arch in points:
            if arch.key in completed:
                record(completed[arch.key], fresh=False)
            else:
                record(run_trial(arch, evaluate, seed, clock), fresh=True)
        return best, results

    pool = ThreadPoolExecutor(max_workers=jobs)
    futures = {
        arch.key: pool.submit(run_trial, arch, evaluate, seed, clock)
        for arch in points
        if arch.key not in completed
    }
    written: set[str] = set()
    try:
        # results are consumed in enumeration order: one writer, fixed ledger order
        for arch in points:
            if arch.key in completed:
                record(completed[arch.key], fresh=False)
            else:
                record(futures[arch.key].result(), fresh=True)
                written.add(arch.key)
    except BaseException:
        pool.shutdown(wait=False, cancel_futures=True)
        salvaged = _finished(futures, written)
        if salvaged and repo is not None:
            repo.append_many(salvaged)
            logger.warning("search interrupted; recorded %d finished trials out of order", len(salvaged))
        raise
    pool.shutdown()
    return best, results


def best_from_ledger(repo: TrialRepository, keys: Optional[Sequence[str]] = None) -> Optional[TrialResult]:
    """Re-scan the ledger for the lowest completed loss.

    With `keys`, only those trials are considered and ties go to the earliest
    key in that order, whatever order the ledger holds them in.
    """
    if keys is None:
        return repo.get_best()
    completed = repo.get_completed()
    best = None
    for key in keys:
        trial = completed.get(key)
        if trial is not None and (best is None or trial.loss < best.loss):
            best = trial
    return best
