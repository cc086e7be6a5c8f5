from dataclasses import dataclass
from enum import Enum

from src.exceptions import ConfigError

KERNEL = 3
MAX_BLOCKS = 20


class ConvKind(str, Enum):
    STANDARD = "standard"
    SEPARABLE = "depthwise_separable"

    @classmethod
    def parse(cls, value) -> "ConvKind":
        if isinstance(value, ConvKind):
            return value
        text = str(value).lower()
        if text in ("sep", "separable", "dw", "depthwise"):
            return cls.SEPARABLE
        try:
            return cls(text)
        except ValueError:
            raise ConfigError(f"unknown conv kind {value!r}") from None


class Schedule(str, Enum):
    FIXED = "fixed"
    COSINE = "cosine"

    @classmethod
    def parse(cls, value) -> "Schedule":
        if isinstance(value, Schedule):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ConfigError(f"unknown lr schedule {value!r}") from None


@dataclass(frozen=True, order=True)
class ArchDescriptor:
    """One point of the architecture space.

    Every trunk layer has `filters` channels; kernels are always 3x3. A
    skip_length at or above the number of blocks means no residual
    connections at all.
    """

    filters: int
    blocks: int
    conv_kind: ConvKind = ConvKind.STANDARD
    skip_length: int = 1
    schedule: Schedule = Schedule.FIXED

    def __post_init__(self):
        object.__setattr__(self, "conv_kind", ConvKind.parse(self.conv_kind))
        object.__setattr__(self, "schedule", Schedule.parse(self.schedule))
        if self.filters < 1:
            raise ConfigError(f"filters must be >= 1, got {self.filters}")
        if not 1 <= self.blocks <= MAX_BLOCKS:
            raise ConfigError(f"blocks must be in [1, {MAX_BLOCKS}], got {self.blocks}")
        if self.skip_length < 1:
            raise ConfigError(f"skip_length must be >= 1, got {self.skip_length}")

    @property
    def kernel(self) -> int:
        return KERNEL

    @property
    def key(self) -> str:
        """Canonical string used to key ledger entries."""
        return (
            f"f{self.filters}-b{self.blocks}-{self.conv_kind.value}"
            f"-s{self.skip_length}-{self.schedule.value}"
        )

    @classmethod
    def from_key(cls, key: str) -> "ArchDescriptor":
        try:
            f, b, kind, s, sched = key.split("-")
            return cls(
                filters=int(f.removeprefix("f")),
                blocks=int(b.removeprefix("b")),
                conv_kind=ConvKind.parse(kind),
                skip_length=int(s.removeprefix("s")),
                schedule=Schedule.parse(sched),
            )
        except (ValueError, TypeError):
            raise ConfigError(f"malformed architecture key {key!r}") from None

    def to_dict(self) -> dict:
        return {
            "filters": self.filters,
            "blocks": self.blocks,
            "conv_kind": self.conv_kind.value,
            "skip_length": self.skip_length,
            "schedule": self.schedule.value,
        }

    def __str__(self):
        return self.key


# Reference architectures with known parameter counts
PRESETS = {
    "dmcnn-vd": ArchDescriptor(64, 20, ConvKind.STANDARD, 20, Schedule.FIXED),
    "vd-15": ArchDescriptor(64, 15, ConvKind.STANDARD, 15, Schedule.FIXED),
    "vd-10": ArchDescriptor(64, 10, ConvKind.STANDARD, 10, Schedule.FIXED),
}


def conv_params(kind: ConvKind, c_in: int, c_out: int) -> int:
    if kind is ConvKind.STANDARD:
        return KERNEL * KERNEL * c_in * c_out + c_out
    return KERNEL * KERNEL * c_in + c_in + c_in * c_out + c_out


def count_params(arch: ArchDescriptor) -> int:
    """Closed-form parameter count, BN running statistics included."""
    f = arch.filters
    total = conv_params(ConvKind.STANDARD, 3, f)
    total += (arch.blocks - 1) * conv_params(arch.conv_kind, f, f)
    total += arch.blocks * 4 * f
    total += conv_params(ConvKind.STANDARD, f, 3)
    return total
