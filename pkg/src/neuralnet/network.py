import logging
from typing import Literal

import numpy as np

from src.exceptions import ConfigError, ShapeError
from src.imaging.bayer import DEFAULT_PATTERN
from src.neuralnet.arch import ArchDescriptor, ConvKind
from src.neuralnet.layers import SELU, BatchNorm2d, Conv2d, Layer, SeparableConv2d
from src.utils.rng import make_rng

logger = logging.getLogger(__name__)

Mode = Literal["train", "eval"]

# weights that receive L2 decay; biases and BN parameters do not
DECAYED = ("conv.weight", "dw.weight", "pw.weight", "head.weight")


class Block:
    """conv -> BN -> SELU."""

    def __init__(self, conv: Layer, channels: int):
        self.conv = conv
        self.bn = BatchNorm2d(channels)
        self.act = SELU()

    def layers(self) -> dict[str, Layer]:
        if isinstance(self.conv, SeparableConv2d):
            named = dict(self.conv.sublayers())
        else:
            named = {"conv": self.conv}
        named["bn"] = self.bn
        return named

    def forward(self, x, train: bool, update_stats: bool):
        return self.act.forward(self.bn.forward(self.conv.forward(x), train, update_stats))

    def backward(self, dout):
        return self.conv.backward(self.bn.backward(self.act.backward(dout)))


class Network:
    """Constant-width demosaicing CNN.

    Block 1 maps the zero-filled 3-channel mosaic to `filters` channels with a
    standard conv; blocks 2..B are trunk blocks of the chosen conv kind. Trunk
    blocks are grouped `skip_length` at a time and each complete group adds
    its input to its output; a trailing partial group has no skip. A standard
    3x3 conv without activation maps back to 3 channels.
    """

    def __init__(self, arch: ArchDescriptor, rng_seed: int = 0):
        self.arch = arch
        self.rng_seed = int(rng_seed)
        # CFA layout the weights were trained on
        self.pattern = DEFAULT_PATTERN
        rng = make_rng(self.rng_seed)
        f = arch.filters
        self.blocks: list[Block] = [Block(Conv2d(3, f, rng), f)]
        for _ in range(arch.blocks - 1):
            conv = Conv2d(f, f, rng) if arch.conv_kind is ConvKind.STANDARD else SeparableConv2d(f, f, rng)
            self.blocks.append(Block(conv, f))
        self.head = Conv2d(f, 3, rng)

    # ------------------------------------------------------------------
    # parameter store
    # ------------------------------------------------------------------

    def named_layers(self) -> list[tuple[str, Layer]]:
        named = []
        for i, block in enumerate(self.blocks, start=1):
            for name, layer in block.layers().items():
                named.append((f"block{i}.{name}", layer))
        named.append(("head", self.head))
        return named

    def trainable(self) -> dict[str, np.ndarray]:
        return {f"{prefix}.{k}": v for prefix, layer in self.named_layers() for k, v in layer.params.items()}

    def gradients(self) -> dict[str, np.ndarray]:
        return {f"{prefix}.{k}": v for prefix, layer in self.named_layers() for k, v in layer.grads.items()}

    def state(self) -> dict[str, np.ndarray]:
        """Every stored array in deterministic order: trainables and BN statistics."""
        out = {}
        for prefix, layer in self.named_layers():
            for k, v in layer.params.items():
                out[f"{prefix}.{k}"] = v
            for k, v in layer.buffers.items():
                out[f"{prefix}.{k}"] = v
        return out

    def n_stored(self) -> int:
        return sum(v.size for v in self.state().values())

    def decayed_weights(self) -> dict[str, np.ndarray]:
        return {k: v for k, v in self.trainable().items() if k.endswith(DECAYED)}

    def load_state(self, values: dict[str, np.ndarray]):
        state = self.state()
        for name, arr in state.items():
            src = values[name]
            if src.shape != arr.shape:
                raise ShapeError(f"{name}: stored shape {src.shape} != expected {arr.shape}")
            arr[...] = src

    def selu_inputs(self) -> list[np.ndarray]:
        return [b.act.last_input for b in self.blocks]

    # ------------------------------------------------------------------
    # passes
    # ------------------------------------------------------------------

    def _ends_group(self, trunk_index: int) -> bool:
        return (trunk_index + 1) % self.arch.skip_length == 0

    def forward(self, batch: np.ndarray, mode: Mode = "eval", update_stats: bool = True) -> np.ndarray:
        if batch.ndim != 4 or batch.shape[1] != 3:
            raise ShapeError(f"expected an N x 3 x H x W batch, got {batch.shape}")
        if mode not in ("train", "eval"):
            raise ConfigError(f"unknown forward mode {mode!r}")
        train = mode == "train"
        h = self.blocks[0].forward(np.asarray(batch, dtype=np.float64), train, update_stats)
        group_start = h
        for u, block in enumerate(self.blocks[1:]):
            if u % self.arch.skip_length == 0:
                group_start = h
            h = block.forward(h, train, update_stats)
            if self._ends_group(u):
                h = h + group_start
        return self.head.forward(h)

    def backward_from(self, dout: np.ndarray) -> np.ndarray:
        """Back-propagate dL/d(output) through the cached forward pass."""
        dh = self.head.backward(dout)
        pending = None
        trunk = self.blocks[1:]
        for u in range(len(trunk) - 1, -1, -1):
            if self._ends_group(u):
                pending = dh
            dh = trunk[u].backward(dh)
            if u % self.arch.skip_length == 0 and pending is not None:
                dh = dh + pending
                pending = None
        return self.blocks[0].backward(dh)

    def __repr__(self):
        return f"<Network({self.arch.key}, seed={self.rng_seed})>"


def build(arch: ArchDescriptor, seed: int = 0) -> Network:
    net = Network(arch, seed)
    logger.debug("built %s with %d stored parameters", arch.key, net.n_stored())
    return net


def forward(net: Network, batch: np.ndarray, mode: Mode = "eval") -> np.ndarray:
    return net.forward(batch, mode)


def backward(
    net: Network,
    batch: np.ndarray,
    target: np.ndarray,
    l2: float = 0.0,
    update_stats: bool = True,
) -> tuple[dict[str, np.ndarray], float]:
    """Train-mode forward + backward of mean squared error plus l2*sum(w^2).

    Returns the gradient store (keyed like `Network.trainable`) and the loss.
    """
    if batch.shape != target.shape:
        raise ShapeError(f"batch {batch.shape} and target {target.shape} differ")
    out = net.forward(batch, "train", update_stats)
    diff = out - target
    mse = float(np.mean(diff * diff))
    weights = net.decayed_weights()
    decay = float(sum(np.sum(w * w) for w in weights.values()))
    loss = mse + l2 * decay

    net.backward_from(2.0 * diff / diff.size)
    grads = {k: g.copy() for k, g in net.gradients().items()}
    if l2:
        for name, w in weights.items():
            grads[name] += 2.0 * l2 * w
    return grads, loss
