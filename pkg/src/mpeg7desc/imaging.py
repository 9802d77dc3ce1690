"""Image decoding and BT.601 full-range colour conversion."""

from __future__ import annotations

import io
import os
from dataclasses import dataclass

import numpy as np
from PIL import Image

from .errors import DecodeError

# Full-range ITU-R BT.601 rows (Y, Cb, Cr) applied to (R, G, B).
_Y = (0.299, 0.587, 0.114)
_CB = (-0.168736, -0.331264, 0.5)
_CR = (0.5, -0.418688, -0.081312)


@dataclass(frozen=True, eq=False)
class RawImage:
    """Decoded 8-bit RGB raster; ``pixels`` has shape (height, width, 3)."""

    width: int
    height: int
    pixels: np.ndarray

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"bad dimensions {self.width}x{self.height}")
        if self.pixels.dtype != np.uint8:
            raise ValueError(f"pixels must be uint8, got {self.pixels.dtype}")
        if self.pixels.shape != (self.height, self.width, 3):
            raise ValueError(
                f"pixels shape {self.pixels.shape} != ({self.height}, {self.width}, 3)"
            )

    @classmethod
    def from_array(cls, pixels) -> "RawImage":
        arr = np.asarray(pixels)
        if arr.ndim == 2:
            arr = np.repeat(arr[:, :, None], 3, axis=2)
        if arr.ndim != 3 or arr.shape[2] not in (3, 4):
            raise ValueError(f"expected (H, W), (H, W, 3) or (H, W, 4), got {arr.shape}")
        if arr.dtype != np.uint8:
            if arr.size and (arr.min() < 0 or arr.max() > 255):
                raise ValueError("channel values outside [0, 255]")
            arr = arr.astype(np.uint8)
        arr = np.ascontiguousarray(arr[:, :, :3])
        return cls(width=arr.shape[1], height=arr.shape[0], pixels=arr)

    def __eq__(self, other):
        if not isinstance(other, RawImage):
            return NotImplemented
        return (self.width, self.height) == (other.width, other.height) and bool(
            np.array_equal(self.pixels, other.pixels)
        )


def round_half_away(x):
    """Round to nearest integer, halves away from zero (numpy-aware)."""
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


def decode_image(data: bytes) -> RawImage:
    """Decode an in-memory JPEG/PNG/... into a RawImage.

    Grayscale is replicated to three channels and alpha is dropped.
    Any decoder failure surfaces as DecodeError.
    """
    if not data:
        raise DecodeError("empty file")
    try:
        with Image.open(io.BytesIO(data)) as im:
            im.load()
            if im.mode != "RGB":
                im = im.convert("RGB")
            arr = np.asarray(im, dtype=np.uint8)
    except DecodeError:
        raise
    except Exception as exc:  # PIL raises a zoo of types for bad input
        raise DecodeError(f"{type(exc).__name__}: {exc}") from exc
    if arr.ndim != 3 or arr.shape[2] != 3 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise DecodeError(f"decoder produced unexpected array shape {arr.shape}")
    return RawImage(width=arr.shape[1], height=arr.shape[0], pixels=np.ascontiguousarray(arr))


def load_image(path: str | os.PathLike) -> RawImage:
    """Read and decode an image file. OSError from reading propagates."""
    with open(path, "rb") as fh:
        data = fh.read()
    return decode_image(data)


def _to_byte(x):
    return np.clip(round_half_away(x), 0, 255).astype(np.uint8)


def rgb_to_ycbcr_array(rgb: np.ndarray) -> np.ndarray:
    """Vectorised conversion of (..., 3) RGB values to uint8 (..., 3) YCbCr."""
    rgb = np.asarray(rgb, dtype=np.float64)
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    y = _Y[0] * r + _Y[1] * g + _Y[2] * b
    cb = 128.0 + _CB[0] * r + _CB[1] * g + _CB[2] * b
    cr = 128.0 + _CR[0] * r + _CR[1] * g + _CR[2] * b
    return _to_byte(np.stack([y, cb, cr], axis=-1))


def rgb_to_ycbcr(r: int, g: int, b: int) -> tuple[int, int, int]:
    y, cb, cr = rgb_to_ycbcr_array(np.array([r, g, b]))
    return int(y), int(cb), int(cr)


_LEVELS = np.arange(256, dtype=np.float64)
# Per-channel products as lookup tables; summing them in the same order as
# rgb_to_ycbcr_array gives bit-identical luma without a float copy of the image.
_Y_LUT = tuple(c * _LEVELS for c in _Y)


def luma(pixels: np.ndarray) -> np.ndarray:
    """Rounded Y plane (uint8, shape (H, W)) of an (H, W, 3) RGB array.

    Bit-identical to the Y component of ``rgb_to_ycbcr_array``.
    """
    y = _Y_LUT[0][pixels[..., 0]] + _Y_LUT[1][pixels[..., 1]]
    y += _Y_LUT[2][pixels[..., 2]]
    # y >= 0 and y + 0.5 < 256, so truncation is round-half-away here
    y += 0.5
    return y.astype(np.uint8)
