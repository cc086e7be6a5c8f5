"""Network checkpoints.

Layout (little-endian): magic b"DMNN", u16 version, u32 filters, u32 blocks,
u8 conv kind, u32 skip length, u8 schedule, u8 Bayer pattern, u64 seed,
u64 value count, then the float64 values of `Network.state()` in order.
"""
import logging
import struct
from pathlib import Path

import numpy as np

from src.exceptions import CheckpointError
from src.imaging.bayer import BayerPattern
from src.neuralnet.arch import ArchDescriptor, ConvKind, Schedule
from src.neuralnet.network import Network, build

logger = logging.getLogger(__name__)

MAGIC = b"DMNN"
VERSION = 2
HEADER = struct.Struct("<4sHIIBIBBQQ")

_KINDS = [ConvKind.STANDARD, ConvKind.SEPARABLE]
_SCHEDULES = [Schedule.FIXED, Schedule.COSINE]
_PATTERNS = list(BayerPattern)


class CheckpointRepository:
    def __init__(self, path):
        self.path = Path(path)

    def save(self, net: Network):
        arch = net.arch
        values = [v.ravel() for v in net.state().values()]
        payload = np.concatenate(values).astype("<f8").tobytes()
        header = HEADER.pack(
            MAGIC,
            VERSION,
            arch.filters,
            arch.blocks,
            _KINDS.index(arch.conv_kind),
            arch.skip_length,
            _SCHEDULES.index(arch.schedule),
            _PATTERNS.index(net.pattern),
            net.rng_seed & 0xFFFFFFFFFFFFFFFF,
            sum(v.size for v in values),
        )
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.path.write_bytes(header + payload)
        logger.info("saved checkpoint %s (%s, %s)", self.path, arch.key, net.pattern.value)

    def load(self, expected: ArchDescriptor | None = None) -> Network:
        try:
            buf = self.path.read_bytes()
        except OSError as exc:
            raise CheckpointError(f"cannot read checkpoint {self.path}: {exc.strerror or exc}") from exc
        if len(buf) < HEADER.size:
            raise CheckpointError(f"{self.path}: truncated header")
        magic, version, filters, blocks, kind, skip, sched, pattern, seed, count = HEADER.unpack_from(buf)
        if magic != MAGIC:
            raise CheckpointError(f"{self.path}: bad magic {magic!r}")
        if version != VERSION:
            raise CheckpointError(f"{self.path}: unsupported checkpoint version {version}")
        try:
            arch = ArchDescriptor(filters, blocks, _KINDS[kind], skip, _SCHEDULES[sched])
            trained_on = _PATTERNS[pattern]
        except (IndexError, ValueError) as exc:
            raise CheckpointError(f"{self.path}: bad header fields ({exc})") from exc
        if expected is not None and expected != arch:
            raise CheckpointError(f"{self.path}: checkpoint holds {arch.key}, expected {expected.key}")

        net = build(arch, seed)
        net.pattern = trained_on
        state = net.state()
        expected_count = sum(v.size for v in state.values())
        payload = buf[HEADER.size :]
        if count != expected_count or len(payload) != 8 * count:
            raise CheckpointError(
                f"{self.path}: payload holds {len(payload) // 8} values, architecture needs {expected_count}"
            )
        flat = np.frombuffer(payload, dtype="<f8")
        offset = 0
        values = {}
        for name, arr in state.items():
            values[name] = flat[offset : offset + arr.size].reshape(arr.shape)
            offset += arr.size
        net.load_state(values)
        return net
