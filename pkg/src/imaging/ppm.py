"""Binary P6 PPM (maxval 255) reader and writer.

Bytes map to intensities as b/255 on load; intensities map back with
round-half-up and clamping on save. A loaded image keeps its header bytes
(comments and whitespace included), so load -> save reproduces any
well-formed P6 file byte for byte.
"""
import logging
import re
from pathlib import Path

import numpy as np

from src.exceptions import ImageFormatError
from src.imaging.image import Image

logger = logging.getLogger(__name__)

_TOKEN = re.compile(rb"\s*(?:#[^\n]*\n\s*)*(\S+)")
_WHITESPACE = b" \t\n\r\x0b\x0c"


def _read_header(buf: bytes, path) -> tuple[int, int, int, int]:
    """Return (width, height, maxval, payload offset)."""
    if not buf.startswith(b"P6"):
        raise ImageFormatError(f"{path}: not a binary P6 PPM (magic {buf[:2]!r})")
    if len(buf) < 3 or buf[2] not in _WHITESPACE:
        raise ImageFormatError(f"{path}: malformed header (no whitespace after magic)")
    pos = 2
    values = []
    for _ in range(3):
        m = _TOKEN.match(buf, pos)
        if not m:
            raise ImageFormatError(f"{path}: malformed header")
        token = m.group(1)
        if not token.isdigit():
            raise ImageFormatError(f"{path}: malformed header token {token!r}")
        values.append(int(token))
        pos = m.end()
    # exactly one whitespace byte separates maxval from the raster
    if pos >= len(buf) or buf[pos] not in _WHITESPACE:
        raise ImageFormatError(f"{path}: malformed header (no separator before payload)")
    width, height, maxval = values
    if width < 1 or height < 1:
        raise ImageFormatError(f"{path}: bad dimensions {width}x{height}")
    if maxval != 255:
        raise ImageFormatError(f"{path}: unsupported maxval {maxval} (only 255)")
    return width, height, maxval, pos + 1


def decode_ppm(buf: bytes, path="<bytes>") -> Image:
    width, height, maxval, offset = _read_header(buf, path)
    expected = width * height * 3
    payload = buf[offset : offset + expected]
    if len(payload) < expected:
        raise ImageFormatError(f"{path}: truncated payload ({len(payload)} of {expected} bytes)")
    raster = np.frombuffer(payload, dtype=np.uint8).reshape(height, width, 3)
    return Image(raster.astype(np.float64) / 255.0, ppm_header=bytes(buf[:offset]))


def encode_ppm(img: Image) -> bytes:
    raster = np.clip(np.floor(img.data * 255.0 + 0.5), 0, 255).astype(np.uint8)
    header = img.ppm_header or f"P6\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + raster.tobytes()


def load_ppm(path) -> Image:
    path = Path(path)
    try:
        buf = path.read_bytes()
    except OSError as exc:
        raise ImageFormatError(f"cannot read {path}: {exc.strerror or exc}") from exc
    img = decode_ppm(buf, path)
    logger.debug("loaded %s (%dx%d)", path, img.height, img.width)
    return img


def save_ppm(img: Image, path):
    path = Path(path)
    try:
        path.write_bytes(encode_ppm(img))
    except OSError as exc:
        raise ImageFormatError(f"cannot write {path}: {exc.strerror or exc}") from exc
