import itertools
from typing import Sequence

from src.neuralnet.arch import ArchDescriptor, ConvKind, Schedule

FILTERS = (16, 32, 64, 128, 256)
BLOCKS = (3, 5, 7)
CONV_KINDS = (ConvKind.STANDARD, ConvKind.SEPARABLE)
SKIP_LENGTHS = (1, 2)
SCHEDULES = (Schedule.FIXED, Schedule.COSINE)


def enumerate_space(
    filters: Sequence[int] = FILTERS,
    blocks: Sequence[int] = BLOCKS,
    conv_kinds: Sequence[ConvKind | str] = CONV_KINDS,
    skip_lengths: Sequence[int] = SKIP_LENGTHS,
    schedules: Sequence[Schedule | str] = SCHEDULES,
) -> list[ArchDescriptor]:
    """Cross product in the order filters x blocks x conv_kind x skip_length x
    schedule, the last dimension varying fastest."""
    return [
        ArchDescriptor(f, b, ConvKind.parse(k), s, Schedule.parse(sch))
        for f, b, k, s, sch in itertools.product(filters, blocks, conv_kinds, skip_lengths, schedules)
    ]
