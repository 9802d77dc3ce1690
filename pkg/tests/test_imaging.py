import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mpeg7desc.errors import DecodeError
from mpeg7desc.imaging import (
    RawImage, decode_image, load_image, luma, rgb_to_ycbcr, rgb_to_ycbcr_array,
    round_half_away,
)

from conftest import encode

byte = st.integers(0, 255)


def test_load_png_identity(tmp_path):
    p = tmp_path / "a.png"
    p.write_bytes(encode(np.full((2, 2, 3), (10, 20, 30), dtype=np.uint8)))
    img = load_image(p)
    assert (img.width, img.height) == (2, 2)
    assert img.pixels.reshape(-1, 3).tolist() == [[10, 20, 30]] * 4


def test_grayscale_is_replicated(tmp_path):
    p = tmp_path / "g.png"
    p.write_bytes(encode(np.full((1, 1), 77, dtype=np.uint8)))
    img = load_image(p)
    assert img.pixels.tolist() == [[[77, 77, 77]]]


def test_alpha_is_dropped():
    rgba = np.zeros((3, 2, 4), dtype=np.uint8)
    rgba[...] = (1, 2, 3, 0)
    img = decode_image(encode(rgba))
    assert img.pixels.shape == (3, 2, 3)
    assert img.pixels.reshape(-1, 3).tolist() == [[1, 2, 3]] * 6


def test_jpeg_decodes(tmp_path):
    px = np.full((16, 24, 3), 100, dtype=np.uint8)
    img = decode_image(encode(px, "JPEG", quality=95))
    assert (img.width, img.height) == (24, 16)
    assert np.abs(img.pixels.astype(int) - 100).max() <= 2


def test_zero_byte_file(tmp_path):
    p = tmp_path / "empty.jpg"
    p.write_bytes(b"")
    with pytest.raises(DecodeError):
        load_image(p)


def test_truncated_jpeg():
    rng = np.random.default_rng(1)
    blob = encode(rng.integers(0, 256, (64, 64, 3), dtype=np.uint8), "JPEG")
    with pytest.raises(DecodeError):
        decode_image(blob[: len(blob) // 2])


@settings(max_examples=300)
@given(st.binary(max_size=256))
def test_garbage_never_yields_malformed_image(blob):
    try:
        img = decode_image(blob)
    except DecodeError:
        return
    # Rare valid tiny formats are fine as long as invariants hold.
    assert img.pixels.shape == (img.height, img.width, 3)
    assert img.pixels.dtype == np.uint8


def test_rawimage_rejects_bad_shape():
    with pytest.raises(ValueError):
        RawImage(2, 2, np.zeros((2, 3, 3), dtype=np.uint8))


@pytest.mark.parametrize(
    "rgb, expected",
    [((0, 0, 0), (0, 128, 128)), ((255, 255, 255), (255, 128, 128)), ((255, 0, 0), (76, 85, 255))],
)
def test_rgb_to_ycbcr_examples(rgb, expected):
    assert rgb_to_ycbcr(*rgb) == expected


def test_red_by_hand():
    # y = 76.245, cb = 128 - 43.02768 = 84.97232, cr = 255.5 -> clamp
    assert rgb_to_ycbcr(255, 0, 0) == (76, 85, 255)


@given(byte)
def test_gray_maps_to_neutral(v):
    assert rgb_to_ycbcr(v, v, v) == (v, 128, 128)


@given(byte, byte)
def test_luma_monotone_in_red(g, b):
    ys = [rgb_to_ycbcr(r, g, b)[0] for r in range(256)]
    assert all(a <= c for a, c in zip(ys, ys[1:]))


def test_vectorised_luma_matches_scalar():
    rng = np.random.default_rng(3)
    px = rng.integers(0, 256, (40, 50, 3), dtype=np.uint8)
    y = luma(px)
    full = rgb_to_ycbcr_array(px)
    assert np.array_equal(y, full[..., 0])
    for (i, j) in [(0, 0), (5, 7), (39, 49)]:
        assert tuple(full[i, j]) == rgb_to_ycbcr(*px[i, j].tolist())


def test_round_half_away():
    assert round_half_away(np.array([0.5, 1.5, 2.5, -0.5, -2.5, 2.4])).tolist() == [1, 2, 3, -1, -3, 2]


def test_lut_luma_exhaustive():
    # every 24-bit colour, 16 red levels at a time
    g, b = np.meshgrid(np.arange(256), np.arange(256), indexing="ij")
    for r0 in range(0, 256, 16):
        r = np.arange(r0, r0 + 16)[:, None, None]
        px = np.stack(np.broadcast_arrays(r, g[None], b[None]), axis=-1).astype(np.uint8)
        assert np.array_equal(luma(px), rgb_to_ycbcr_array(px)[..., 0])
