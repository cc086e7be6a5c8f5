"""NCHW float64 layers with explicit forward/backward passes.

Every layer keeps its trainable arrays in `params`, the matching gradients in
`grads` after `backward`, and non-trainable state in `buffers`. Optimizers
update `params` arrays in place, so the network's store sees the change.
"""
import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from src.exceptions import ShapeError

SELU_LAMBDA = 1.0507009873554805
SELU_ALPHA = 1.6732632423543772

BN_MOMENTUM = 0.9
BN_EPS = 1e-5


def _pad1(x: np.ndarray) -> np.ndarray:
    return np.pad(x, ((0, 0), (0, 0), (1, 1), (1, 1)))


def _windows(x: np.ndarray) -> np.ndarray:
    """N x C x H x W x 3 x 3 view of the zero-padded input."""
    return sliding_window_view(_pad1(x), (3, 3), axis=(2, 3))


def he_normal(rng: np.random.Generator, shape, fan_in: int) -> np.ndarray:
    return rng.standard_normal(shape) * np.sqrt(2.0 / fan_in)


class Layer:
    def __init__(self):
        self.params: dict[str, np.ndarray] = {}
        self.grads: dict[str, np.ndarray] = {}
        self.buffers: dict[str, np.ndarray] = {}

    def zero_grads(self):
        self.grads = {k: np.zeros_like(v) for k, v in self.params.items()}


class Conv2d(Layer):
    """Standard 3x3 convolution, stride 1, zero same-padding."""

    def __init__(self, c_in: int, c_out: int, rng: np.random.Generator):
        super().__init__()
        self.c_in, self.c_out = c_in, c_out
        self.params["weight"] = he_normal(rng, (c_out, c_in, 3, 3), c_in * 9)
        self.params["bias"] = np.zeros(c_out)
        self._win = None

    def forward(self, x: np.ndarray) -> np.ndarray:
        if x.ndim != 4 or x.shape[1] != self.c_in:
            raise ShapeError(f"conv expects N x {self.c_in} x H x W, got {x.shape}")
        self._win = _windows(x)
        out = np.einsum("nchwij,ocij->nohw", self._win, self.params["weight"], optimize=True)
        return out + self.params["bias"][None, :, None, None]

    def backward(self, dout: np.ndarray) -> np.ndarray:
        w = self.params["weight"]
        self.grads["weight"] = np.einsum("nchwij,nohw->ocij", self._win, dout, optimize=True)
        self.grads["bias"] = dout.sum(axis=(0, 2, 3))
        flipped = w[:, :, ::-1, ::-1]
        return np.einsum("nohwij,ocij->nchw", _windows(dout), flipped, optimize=True)


class DepthwiseConv2d(Layer):
    def __init__(self, channels: int, rng: np.random.Generator):
        super().__init__()
        self.channels = channels
        self.params["weight"] = he_normal(rng, (channels, 3, 3), 9)
        self.params["bias"] = np.zeros(channels)
        self._win = None

    def forward(self, x: np.ndarray) -> np.ndarray:
        if x.ndim != 4 or x.shape[1] != self.channels:
            raise ShapeError(f"depthwise conv expects N x {self.channels} x H x W, got {x.shape}")
        self._win = _windows(x)
        out = np.einsum("nchwij,cij->nchw", self._win, self.params["weight"], optimize=True)
        return out + self.params["bias"][None, :, None, None]

    def backward(self, dout: np.ndarray) -> np.ndarray:
        self.grads["weight"] = np.einsum("nchwij,nchw->cij", self._win, dout, optimize=True)
        self.grads["bias"] = dout.sum(axis=(0, 2, 3))
        flipped = self.params["weight"][:, ::-1, ::-1]
        return np.einsum("nchwij,cij->nchw", _windows(dout), flipped, optimize=True)


class PointwiseConv2d(Layer):
    """1x1 channel-mixing convolution."""

    def __init__(self, c_in: int, c_out: int, rng: np.random.Generator):
        super().__init__()
        self.params["weight"] = he_normal(rng, (c_out, c_in), c_in)
        self.params["bias"] = np.zeros(c_out)
        self._x = None

    def forward(self, x: np.ndarray) -> np.ndarray:
        self._x = x
        out = np.einsum("nchw,oc->nohw", x, self.params["weight"], optimize=True)
        return out + self.params["bias"][None, :, None, None]

    def backward(self, dout: np.ndarray) -> np.ndarray:
        self.grads["weight"] = np.einsum("nohw,nchw->oc", dout, self._x, optimize=True)
        self.grads["bias"] = dout.sum(axis=(0, 2, 3))
        return np.einsum("nohw,oc->nchw", dout, self.params["weight"], optimize=True)


class SeparableConv2d(Layer):
    """Depthwise 3x3 followed by pointwise 1x1."""

    def __init__(self, c_in: int, c_out: int, rng: np.random.Generator):
        super().__init__()
        self.depthwise = DepthwiseConv2d(c_in, rng)
        self.pointwise = PointwiseConv2d(c_in, c_out, rng)

    def sublayers(self):
        return {"dw": self.depthwise, "pw": self.pointwise}

    def forward(self, x):
        return self.pointwise.forward(self.depthwise.forward(x))

    def backward(self, dout):
        return self.depthwise.backward(self.pointwise.backward(dout))


class BatchNorm2d(Layer):
    def __init__(self, channels: int):
        super().__init__()
        self.params["gamma"] = np.ones(channels)
        self.params["beta"] = np.zeros(channels)
        self.buffers["running_mean"] = np.zeros(channels)
        self.buffers["running_var"] = np.ones(channels)
        self._cache = None

    def forward(self, x: np.ndarray, train: bool, update_stats: bool = True) -> np.ndarray:
        gamma = self.params["gamma"][None, :, None, None]
        beta = self.params["beta"][None, :, None, None]
        if train:
            mean = x.mean(axis=(0, 2, 3))
            var = x.var(axis=(0, 2, 3))
            if update_stats:
                rm, rv = self.buffers["running_mean"], self.buffers["running_var"]
                rm *= BN_MOMENTUM
                rm += (1.0 - BN_MOMENTUM) * mean
                rv *= BN_MOMENTUM
                rv += (1.0 - BN_MOMENTUM) * var
        else:
            mean = self.buffers["running_mean"]
            var = self.buffers["running_var"]
        inv_std = 1.0 / np.sqrt(var + BN_EPS)
        xhat = (x - mean[None, :, None, None]) * inv_std[None, :, None, None]
        self._cache = (xhat, inv_std, train)
        return gamma * xhat + beta

    def backward(self, dout: np.ndarray) -> np.ndarray:
        xhat, inv_std, train = self._cache
        self.grads["gamma"] = (dout * xhat).sum(axis=(0, 2, 3))
        self.grads["beta"] = dout.sum(axis=(0, 2, 3))
        dxhat = dout * self.params["gamma"][None, :, None, None]
        inv = inv_std[None, :, None, None]
        if not train:
            return dxhat * inv
        m = dout.shape[0] * dout.shape[2] * dout.shape[3]
        sum_d = dxhat.sum(axis=(0, 2, 3), keepdims=True)
        sum_dx = (dxhat * xhat).sum(axis=(0, 2, 3), keepdims=True)
        return inv * (dxhat - sum_d / m - xhat * sum_dx / m)


def selu(x: np.ndarray) -> np.ndarray:
    return SELU_LAMBDA * np.where(x > 0, x, SELU_ALPHA * np.expm1(np.minimum(x, 0.0)))


class SELU(Layer):
    def __init__(self):
        super().__init__()
        self.last_input = None

    def forward(self, x: np.ndarray) -> np.ndarray:
        self.last_input = x
        return selu(x)

    def backward(self, dout: np.ndarray) -> np.ndarray:
        x = self.last_input
        slope = np.where(x > 0, SELU_LAMBDA, SELU_LAMBDA * SELU_ALPHA * np.exp(np.minimum(x, 0.0)))
        return dout * slope
