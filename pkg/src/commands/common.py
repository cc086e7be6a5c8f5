import json
import sys

from pydantic import BaseModel, ValidationError

from src.config import settings
from src.exceptions import ConfigError
from src.imaging.bayer import BayerPattern


def emit(report: dict | str):
    """Machine-readable report on stdout."""
    text = report if isinstance(report, str) else json.dumps(report, separators=(",", ":"))
    sys.stdout.write(text + "\n")
    sys.stdout.flush()


def add_pattern_arg(p, default: str | None = BayerPattern.RGGB.value, help: str = "CFA layout (default RGGB)"):
    p.add_argument(
        "--pattern",
        default=default,
        choices=[bp.value for bp in BayerPattern],
        help=help,
    )


def add_seed_arg(p):
    p.add_argument("--seed", type=int, default=None, help="RNG seed (default DEMOSAIC_NAS_SEED or 0)")


def resolve_seed(args) -> int:
    return settings.SEED if args.seed is None else args.seed


def validated(model: type[BaseModel], **values) -> BaseModel:
    """Build a pydantic model from flag values; bad values become ConfigError."""
    try:
        return model(**values)
    except ValidationError as exc:
        problems = "; ".join(
            f"--{'-'.join(str(p) for p in err['loc']).replace('_', '-')}: {err['msg']}" for err in exc.errors()
        )
        raise ConfigError(f"invalid arguments: {problems}") from exc
