import logging
import math
from typing import Callable, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.exceptions import DivergenceError, EmptyDatasetError
from src.imaging.bayer import DEFAULT_PATTERN, BayerPattern
from src.imaging.image import Image
from src.imaging.patches import PatchSet
from src.metrics.scores import ScoreReport, cpsnr_report
from src.neuralnet.network import Network, backward
from src.neuralnet.optim import lr_at, make_optimizer
from src.storage.models import History, HistoryRecord
from src.utils.rng import make_rng

logger = logging.getLogger(__name__)


class TrainConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    lr: float = Field(default=1e-4, gt=0)
    l2: float = Field(default=1e-8, ge=0)
    epochs: int = Field(default=1, ge=0)
    batch_size: int = Field(default=16, ge=1)
    seed: int = 0
    optimizer: Literal["sgd", "adam"] = "sgd"
    momentum: float = Field(default=0.0, ge=0, lt=1)
    lr_min: float = Field(default=0.0, ge=0)
    cycles: int = Field(default=1, ge=1)
    max_steps: Optional[int] = Field(default=None, ge=1)
    validate_every: int = Field(default=1, ge=1)


def mosaic_batch(targets: np.ndarray, pattern: BayerPattern = DEFAULT_PATTERN) -> np.ndarray:
    """Zero-filled CFA samples of an N x 3 x H x W batch."""
    h, w = targets.shape[2:]
    mask = pattern.masks(h, w).transpose(2, 0, 1)[None]
    return np.where(mask, targets, 0.0)


def predict(net: Network, inputs: np.ndarray, batch_size: int = 64) -> np.ndarray:
    chunks = [net.forward(inputs[i : i + batch_size], "eval") for i in range(0, len(inputs), batch_size)]
    return np.concatenate(chunks, axis=0)


def evaluate_patches(
    net: Network,
    patches: PatchSet,
    pattern: BayerPattern = DEFAULT_PATTERN,
    batch_size: int = 64,
) -> ScoreReport:
    """Eval-mode CPSNR of the network on a patch set (outputs clipped to [0, 1])."""
    if len(patches) == 0:
        raise EmptyDatasetError("validation patch set is empty")
    targets = patches.stack()
    outputs = np.clip(predict(net, mosaic_batch(targets, pattern), batch_size), 0.0, 1.0)
    refs = [Image(t.transpose(1, 2, 0)) for t in targets]
    ests = [Image(o.transpose(1, 2, 0)) for o in outputs]
    return cpsnr_report(refs, ests)


def train(
    net: Network,
    train_patches: PatchSet,
    valid_patches: PatchSet,
    cfg: TrainConfig,
    pattern: BayerPattern = DEFAULT_PATTERN,
    on_epoch: Callable[[HistoryRecord], None] | None = None,
) -> tuple[Network, History]:
    """Mini-batch training on (mosaic(patch), patch) pairs.

    Shuffling, batching and the schedule depend only on cfg, so equal
    (net, data, cfg) give identical histories.
    """
    history = History()
    if len(train_patches) == 0 or len(valid_patches) == 0:
        raise EmptyDatasetError("training and validation patch sets must be non-empty")
    net.pattern = BayerPattern.parse(pattern)
    if cfg.epochs == 0:
        return net, history

    targets = train_patches.stack()
    inputs = mosaic_batch(targets, pattern)
    n = len(targets)
    steps_per_epoch = math.ceil(n / cfg.batch_size)
    total_steps = cfg.epochs * steps_per_epoch
    if cfg.max_steps is not None:
        total_steps = min(total_steps, cfg.max_steps)

    rng = make_rng(cfg.seed)
    optimizer = make_optimizer(cfg.optimizer, cfg.momentum)
    params = net.trainable()
    step = 0
    lr = cfg.lr
    logger.info(
        "training %s: %d patches, %d steps, optimizer=%s, lr=%g",
        net.arch.key, n, total_steps, cfg.optimizer, cfg.lr,
    )

    for epoch in range(1, cfg.epochs + 1):
        order = rng.permutation(n)
        losses = []
        for start in range(0, n, cfg.batch_size):
            if step >= total_steps:
                break
            idx = order[start : start + cfg.batch_size]
            grads, loss = backward(net, inputs[idx], targets[idx], cfg.l2)
            if not math.isfinite(loss):
                raise DivergenceError(epoch, loss)
            lr = lr_at(net.arch.schedule, step, total_steps, cfg.lr, cfg.lr_min, cfg.cycles)
            optimizer.step(params, grads, lr)
            losses.append(loss)
            step += 1

        last = step >= total_steps or epoch == cfg.epochs
        valid_cpsnr = None
        if last or epoch % cfg.validate_every == 0:
            valid_cpsnr = evaluate_patches(net, valid_patches, pattern, cfg.batch_size).cpsnr
        record = HistoryRecord(
            epoch=epoch,
            train_loss=float(np.mean(losses)) if losses else float("nan"),
            valid_cpsnr=valid_cpsnr,
            lr=lr,
        )
        history.append(record)
        if on_epoch:
            on_epoch(record)
        logger.debug("epoch %d: train_loss=%.6g valid_cpsnr=%s", epoch, record.train_loss, valid_cpsnr)
        if step >= total_steps:
            break

    return net, history
