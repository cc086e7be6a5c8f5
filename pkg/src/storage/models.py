import json
import math
from dataclasses import dataclass, field
from typing import Any, Optional

from src.neuralnet.arch import ArchDescriptor

STATUS_OK = "ok"
STATUS_FAILED = "failed"


def _finite_or_none(value) -> Optional[float]:
    if value is None:
        return None
    value = float(value)
    return value if math.isfinite(value) else None


def trial_key(arch: ArchDescriptor, lr: Optional[float] = None, l2: Optional[float] = None) -> str:
    if lr is None and l2 is None:
        return arch.key
    return f"{arch.key}@lr={lr!r},l2={l2!r}"


# ============================================
# SEARCH LEDGER
# ============================================


@dataclass(frozen=True)
class TrialResult:
    """One evaluated architecture: loss = -CPSNR, complexity = parameter count.

    `lr` and `l2` are set only on refinement trials appended by `tune`; the
    exhaustive search leaves them empty. Refinement trials are keyed by arch
    and (lr, l2) so they never shadow the search record of the same arch.
    """

    arch: ArchDescriptor
    loss: Optional[float]
    std_error: Optional[float]
    complexity: int
    wall_time: float = 0.0
    seed: int = 0
    status: str = STATUS_OK
    lr: Optional[float] = None
    l2: Optional[float] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.status == STATUS_OK and self.loss is not None

    @property
    def key(self) -> str:
        return trial_key(self.arch, self.lr, self.l2)

    @property
    def refined(self) -> bool:
        return self.lr is not None or self.l2 is not None

    def to_dict(self) -> dict[str, Any]:
        row = {
            "arch": self.arch.key,
            "loss": _finite_or_none(self.loss),
            "std_error": _finite_or_none(self.std_error),
            "complexity": int(self.complexity),
            "wall_time": float(self.wall_time),
            "seed": int(self.seed),
            "status": self.status,
        }
        if self.lr is not None:
            row["lr"] = self.lr
        if self.l2 is not None:
            row["l2"] = self.l2
        if self.error:
            row["error"] = self.error
        return row

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, row: dict[str, Any]) -> "TrialResult":
        return cls(
            arch=ArchDescriptor.from_key(row["arch"]),
            loss=row.get("loss"),
            std_error=row.get("std_error"),
            complexity=int(row["complexity"]),
            wall_time=float(row.get("wall_time", 0.0)),
            seed=int(row.get("seed", 0)),
            status=row.get("status", STATUS_OK),
            lr=_finite_or_none(row.get("lr")),
            l2=_finite_or_none(row.get("l2")),
            error=row.get("error"),
        )

    def __repr__(self):
        return f"<TrialResult(arch={self.arch.key}, loss={self.loss}, complexity={self.complexity})>"


# ============================================
# TRAINING HISTORY
# ============================================


@dataclass(frozen=True)
class HistoryRecord:
    epoch: int
    train_loss: float
    valid_cpsnr: Optional[float]
    lr: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "epoch": self.epoch,
            "train_loss": self.train_loss,
            "valid_cpsnr": self.valid_cpsnr,
            "lr": self.lr,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, row: dict[str, Any]) -> "HistoryRecord":
        return cls(
            epoch=int(row["epoch"]),
            train_loss=float(row["train_loss"]),
            valid_cpsnr=row.get("valid_cpsnr"),
            lr=float(row["lr"]),
        )


@dataclass
class History:
    records: list[HistoryRecord] = field(default_factory=list)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def append(self, record: HistoryRecord):
        self.records.append(record)

    @property
    def last_valid_cpsnr(self) -> Optional[float]:
        for record in reversed(self.records):
            if record.valid_cpsnr is not None:
                return record.valid_cpsnr
        return None
