import numpy as np
import pytest

from src.exceptions import ImageFormatError
from src.imaging.image import Image
from src.imaging.ppm import decode_ppm, encode_ppm, load_ppm, save_ppm


def _canonical(width: int, height: int, seed: int = 0) -> bytes:
    raster = np.random.default_rng(seed).integers(0, 256, size=(height, width, 3), dtype=np.uint8)
    return f"P6\n{width} {height}\n255\n".encode() + raster.tobytes()


def test_load_save_is_byte_exact(tmp_path):
    src = tmp_path / "in.ppm"
    out = tmp_path / "out.ppm"
    src.write_bytes(_canonical(7, 5))
    save_ppm(load_ppm(src), out)
    assert out.read_bytes() == src.read_bytes()


def test_decode_maps_bytes_to_unit_interval():
    img = decode_ppm(b"P6\n2 1\n255\n" + bytes([0, 128, 255, 255, 0, 51]))
    assert img.shape == (1, 2)
    assert img.data[0, 0, 0] == 0.0
    assert img.data[0, 0, 1] == 128 / 255
    assert img.data[0, 1, 0] == 1.0
    assert img.data[0, 1, 2] == pytest.approx(0.2)


def test_header_comments_and_whitespace():
    buf = b"P6 # comment\n 2\t1 # another\n255\n" + bytes(6)
    img = decode_ppm(buf)
    assert img.shape == (1, 2)


def test_encode_rounds_half_up_and_clamps():
    img = Image(np.array([[[0.5, 1.2, -0.1]]]))
    raster = encode_ppm(img)[-3:]
    assert list(raster) == [128, 255, 0]


def test_truncated_payload():
    with pytest.raises(ImageFormatError, match="truncated"):
        decode_ppm(b"P6\n2 2\n255\n" + bytes(5))


def test_unsupported_maxval():
    with pytest.raises(ImageFormatError, match="maxval"):
        decode_ppm(b"P6\n1 1\n65535\n" + bytes(6))


def test_wrong_magic():
    with pytest.raises(ImageFormatError):
        decode_ppm(b"P3\n1 1\n255\n0 0 0\n")


def test_missing_file_names_path(tmp_path):
    missing = tmp_path / "nope.ppm"
    with pytest.raises(ImageFormatError, match="nope.ppm"):
        load_ppm(missing)


@pytest.mark.parametrize(
    "header",
    [
        b"P6 2 1 255\n",
        b"P6\n# written by a scanner\n2 1\n255\n",
        b"P6\r\n2\t1\r\n255\t",
    ],
)
def test_load_save_keeps_non_canonical_headers(header, tmp_path):
    src = tmp_path / "in.ppm"
    out = tmp_path / "out.ppm"
    src.write_bytes(header + bytes([255, 0, 0, 0, 0, 255]))
    save_ppm(load_ppm(src), out)
    assert out.read_bytes() == src.read_bytes()


def test_derived_images_get_a_canonical_header():
    img = decode_ppm(b"P6 2 2 255\n" + bytes(12))
    cropped = img.crop(0, 0, 1, 1)
    assert encode_ppm(cropped) == b"P6\n1 1\n255\n" + bytes(3)


def test_magic_must_be_followed_by_whitespace():
    with pytest.raises(ImageFormatError, match="whitespace after magic"):
        decode_ppm(b"P61 1 255\n" + bytes(3))
