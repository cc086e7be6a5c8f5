import json
import logging
from pathlib import Path
from typing import Iterable, List, Optional

from src.exceptions import ConfigError
from src.storage.connection import open_ledger
from src.storage.models import TrialResult

logger = logging.getLogger(__name__)


class TrialRepository:
    """Append-only JSON-lines ledger of search trials, keyed by arch key."""

    def __init__(self, path):
        self.path = Path(path)
        self.warnings: list[str] = []

    def exists(self) -> bool:
        return self.path.exists()

    def _warn(self, message: str):
        self.warnings.append(message)
        logger.warning(message)

    def get_all(self) -> List[TrialResult]:
        """Every parseable record in file order.

        A torn final line (interrupted write) and malformed lines are skipped
        with a warning.
        """
        self.warnings = []
        if not self.path.exists():
            return []
        trials = []
        with open(self.path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    trials.append(TrialResult.from_dict(json.loads(line)))
                except (json.JSONDecodeError, KeyError, ValueError, TypeError, ConfigError) as exc:
                    self._warn(f"{self.path}:{lineno}: skipping malformed ledger line ({exc})")
        return trials

    def get_latest_by_key(self) -> dict[str, TrialResult]:
        """Last record per arch key; insertion order is first appearance."""
        latest: dict[str, TrialResult] = {}
        for trial in self.get_all():
            if trial.key in latest and latest[trial.key].ok:
                self._warn(f"duplicate completed trial for {trial.key}; keeping the latest")
            latest[trial.key] = trial
        return latest

    def get_completed(self) -> dict[str, TrialResult]:
        return {k: t for k, t in self.get_latest_by_key().items() if t.ok}

    def get_best(self) -> Optional[TrialResult]:
        """Lowest-loss completed trial; ties go to the earliest record."""
        best = None
        for trial in self.get_all():
            if trial.ok and (best is None or trial.loss < best.loss):
                best = trial
        return best

    def append(self, trial: TrialResult):
        with open_ledger(self.path) as fh:
            fh.write(trial.to_json() + "\n")

    def append_many(self, trials: Iterable[TrialResult]):
        with open_ledger(self.path) as fh:
            for trial in trials:
                fh.write(trial.to_json() + "\n")

    def get_count(self) -> int:
        return len(self.get_all())
