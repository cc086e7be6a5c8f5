import math

import numpy as np

from src.exceptions import ConfigError
from src.neuralnet.arch import Schedule


def lr_at(
    schedule: Schedule,
    step: int,
    total_steps: int,
    lr_base: float,
    lr_min: float = 0.0,
    cycles: int = 1,
) -> float:
    """Learning rate at `step` of `total_steps`.

    Cosine annealing runs `cycles` half-cosines from lr_base down to lr_min;
    the last step of the run always lands on lr_min.
    """
    if lr_base <= 0:
        raise ConfigError(f"base learning rate must be positive, got {lr_base}")
    schedule = Schedule.parse(schedule)
    if schedule is Schedule.FIXED or total_steps <= 0:
        return lr_base
    if step > total_steps:
        raise ConfigError(f"step {step} beyond total_steps {total_steps}")
    if step == total_steps:
        frac = 1.0
    else:
        cycle_len = total_steps / max(cycles, 1)
        frac = (step % cycle_len) / cycle_len
    return lr_min + 0.5 * (lr_base - lr_min) * (1.0 + math.cos(math.pi * frac))


def sgd_step(
    params: dict[str, np.ndarray],
    grads: dict[str, np.ndarray],
    lr: float,
    momentum: float = 0.0,
    velocity: dict[str, np.ndarray] | None = None,
):
    """p <- p - lr * g, in place. With momentum, g is replaced by the velocity
    v <- momentum * v + g kept in `velocity`."""
    for name, p in params.items():
        g = grads[name]
        if momentum and velocity is not None:
            v = velocity.setdefault(name, np.zeros_like(p))
            v *= momentum
            v += g
            g = v
        p -= lr * g


class SGD:
    def __init__(self, momentum: float = 0.0):
        self.momentum = momentum
        self.velocity: dict[str, np.ndarray] = {}

    def step(self, params, grads, lr: float):
        sgd_step(params, grads, lr, self.momentum, self.velocity)


class Adam:
    def __init__(self, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.beta1, self.beta2, self.eps = beta1, beta2, eps
        self.m: dict[str, np.ndarray] = {}
        self.v: dict[str, np.ndarray] = {}
        self.t = 0

    def step(self, params, grads, lr: float):
        self.t += 1
        c1 = 1.0 - self.beta1**self.t
        c2 = 1.0 - self.beta2**self.t
        for name, p in params.items():
            g = grads[name]
            m = self.m.setdefault(name, np.zeros_like(p))
            v = self.v.setdefault(name, np.zeros_like(p))
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g * g
            p -= lr * (m / c1) / (np.sqrt(v / c2) + self.eps)


def make_optimizer(name: str, momentum: float = 0.0):
    if name == "sgd":
        return SGD(momentum)
    if name == "adam":
        return Adam()
    raise ConfigError(f"unknown optimizer {name!r}")
