class DemosaicError(Exception):
    """Base class for every error the toolkit raises on purpose."""

    exit_code: int = 1


class ImageFormatError(DemosaicError):
    """Malformed header, truncated payload or unsupported maxval."""


class SourceTooSmallError(DemosaicError):
    def __init__(self, source: str, height: int, width: int, size: int):
        super().__init__(
            f"source image {source} is {height}x{width}, smaller than patch size {size}x{size}"
        )
        self.source = source


class DimensionMismatchError(DemosaicError):
    pass


class EmptyDatasetError(DemosaicError):
    pass


class DegenerateImageError(DemosaicError):
    """An image pair has zero error, so its PSNR is infinite."""

    exit_code = 2


class ShapeError(DemosaicError):
    pass


class DivergenceError(DemosaicError):
    exit_code = 2

    def __init__(self, epoch: int, loss: float):
        super().__init__(f"training diverged at epoch {epoch} (loss={loss})")
        self.epoch = epoch
        self.loss = loss


class CheckpointError(DemosaicError):
    pass


class ConfigError(DemosaicError):
    pass


class BudgetExceededError(DemosaicError):
    pass


class EvaluationError(DemosaicError):
    exit_code = 2
