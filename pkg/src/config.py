import tomllib
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict

from src.exceptions import ConfigError


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="DEMOSAIC_NAS_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Application
    APP_NAME: str = "demosaic-nas"
    DEBUG: bool = False
    LOG_LEVEL: str = "INFO"

    # Reproducibility
    SEED: int = 0

    # Imaging
    PATCH_SIZE: int = 32
    TILE_OVERLAP: int = 4

    # Search
    GRID_BUDGET_CAP: int = 100_000
    DEFAULT_LEDGER: str = "trials.jsonl"

    @property
    def LEDGER_PATH(self) -> Path:
        return Path(self.DEFAULT_LEDGER)

    @property
    def EFFECTIVE_LOG_LEVEL(self) -> str:
        """DEBUG wins over LOG_LEVEL."""
        return "DEBUG" if self.DEBUG else self.LOG_LEVEL.upper()


settings = Settings()


# ============================================
# EXPERIMENT CONFIG (TOML)
# ============================================


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class SpaceSection(_Section):
    filters: list[int] = [16, 32, 64, 128, 256]
    blocks: list[int] = [3, 5, 7]
    conv_kinds: list[str] = ["standard", "depthwise_separable"]
    skip_lengths: list[int] = [1, 2]
    schedules: list[str] = ["fixed", "cosine"]


class TrainSection(_Section):
    lr: float = Field(default=1e-4, gt=0)
    l2: float = Field(default=1e-8, ge=0)
    epochs: int = Field(default=1, ge=0)
    batch_size: int = Field(default=16, ge=1)
    optimizer: str = "sgd"
    momentum: float = Field(default=0.0, ge=0, lt=1)
    lr_min: float = Field(default=0.0, ge=0)
    cycles: int = Field(default=1, ge=1)
    max_steps: Optional[int] = Field(default=None, ge=1)
    validate_every: int = Field(default=1, ge=1)


class DataSection(_Section):
    train_patches: Optional[str] = None
    valid_patches: Optional[str] = None
    source_dir: Optional[str] = None
    synthetic: bool = False
    n_train: int = Field(default=64, ge=1)
    n_valid: int = Field(default=16, ge=1)
    image_size: int = Field(default=64, ge=32)
    pattern: str = "RGGB"


class SearchSection(_Section):
    budget: Optional[int] = Field(default=None, ge=1)
    jobs: int = Field(default=1, ge=1)
    ledger: Optional[str] = None
    seed: Optional[int] = None
    stub: bool = False


class TuneSection(_Section):
    """(lr, l2) refinement grid for the architectures on the Pareto front."""

    lr: tuple[float, float] = (1e-5, 1e-3)
    l2: tuple[float, float] = (1e-10, 1e-6)
    n: int = Field(default=3, ge=2)
    log: bool = True


class ExperimentConfig(_Section):
    space: SpaceSection = SpaceSection()
    train: TrainSection = TrainSection()
    data: DataSection = DataSection()
    search: SearchSection = SearchSection()
    tune: TuneSection = TuneSection()

    @property
    def seed(self) -> int:
        return settings.SEED if self.search.seed is None else self.search.seed


def load_experiment(path) -> ExperimentConfig:
    path = Path(path)
    try:
        raw = tomllib.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: malformed TOML ({exc})") from exc
    try:
        return ExperimentConfig.model_validate(raw)
    except ValidationError as exc:
        raise ConfigError(f"{path}: invalid config\n{exc}") from exc
