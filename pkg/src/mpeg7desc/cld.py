"""Colour Layout Descriptor.

Pipeline: 8x8 block partition -> mean RGB per block -> YCbCr icon ->
orthonormal 8x8 DCT-II per channel -> zigzag -> uniform step-8 quantiser.
All 64 coefficients per channel are kept, giving 192 values laid out as
[Y_0..Y_63, Cb_0..Cb_63, Cr_0..Cr_63] in zigzag order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import ImageTooSmall, LengthMismatch
from .imaging import RawImage, rgb_to_ycbcr_array, round_half_away

CLD_DIM = 192
GRID = 8
QUANT_STEP = 8
AC_OFFSET = 128


class Rect(NamedTuple):
    x0: int
    x1: int
    y0: int
    y1: int


class ColorIcon(NamedTuple):
    y: np.ndarray
    cb: np.ndarray
    cr: np.ndarray


def _edges(n: int) -> np.ndarray:
    return np.array([(k * n) // GRID for k in range(GRID + 1)], dtype=np.int64)


def block_bounds(width: int, height: int) -> list[Rect]:
    """The 64 blocks of the 8x8 partition in row-major order.

    Boundaries are ``floor(k * size / 8)`` so blocks tile exactly and
    differ in size by at most one pixel.
    """
    if width < GRID or height < GRID:
        raise ImageTooSmall(width, height)
    xs, ys = _edges(width), _edges(height)
    return [
        Rect(int(xs[j]), int(xs[j + 1]), int(ys[i]), int(ys[i + 1]))
        for i in range(GRID)
        for j in range(GRID)
    ]


def _mean_round(total, count):
    # Exact integer form of round-half-away-from-zero for non-negative means.
    return (2 * total + count) // (2 * count)


def representative_color(image: RawImage, rect: Rect) -> tuple[int, int, int]:
    patch = image.pixels[rect.y0:rect.y1, rect.x0:rect.x1].reshape(-1, 3)
    n = patch.shape[0]
    if n == 0:
        raise ValueError(f"empty rectangle {rect}")
    sums = patch.sum(axis=0, dtype=np.int64)
    return tuple(int(_mean_round(int(s), n)) for s in sums)


def _block_means(image: RawImage) -> np.ndarray:
    """(8, 8, 3) int64 array of rounded block means, computed in one pass."""
    if image.width < GRID or image.height < GRID:
        raise ImageTooSmall(image.width, image.height)
    xs, ys = _edges(image.width), _edges(image.height)
    px = image.pixels.astype(np.int64)
    sums = np.add.reduceat(np.add.reduceat(px, ys[:-1], axis=0), xs[:-1], axis=1)
    counts = np.outer(np.diff(ys), np.diff(xs))[:, :, None]
    return _mean_round(sums, counts)


def build_icon(image: RawImage) -> ColorIcon:
    ycc = rgb_to_ycbcr_array(_block_means(image))
    return ColorIcon(ycc[..., 0].copy(), ycc[..., 1].copy(), ycc[..., 2].copy())


def _dct_matrix(n: int = GRID) -> np.ndarray:
    k = np.arange(n)[:, None]
    x = np.arange(n)[None, :]
    m = np.cos((2 * x + 1) * k * np.pi / (2 * n)) * math.sqrt(2.0 / n)
    m[0, :] /= math.sqrt(2.0)
    return m


DCT_MATRIX = _dct_matrix()


def dct_8x8(block) -> np.ndarray:
    """Orthonormal 2-D DCT-II, no level shift (F[0, 0] = sum / 8)."""
    f = np.asarray(block, dtype=np.float64)
    if f.shape != (GRID, GRID):
        raise ValueError(f"expected 8x8 block, got {f.shape}")
    return DCT_MATRIX @ f @ DCT_MATRIX.T


def idct_8x8(coeffs) -> np.ndarray:
    F = np.asarray(coeffs, dtype=np.float64)
    if F.shape != (GRID, GRID):
        raise ValueError(f"expected 8x8 block, got {F.shape}")
    return DCT_MATRIX.T @ F @ DCT_MATRIX


def _zigzag_order(n: int = GRID) -> list[tuple[int, int]]:
    # Anti-diagonals r + c = s; odd s runs top-right to bottom-left.
    order = []
    for s in range(2 * n - 1):
        cells = [(r, s - r) for r in range(n) if 0 <= s - r < n]
        order.extend(cells if s % 2 else cells[::-1])
    return order


ZIGZAG = tuple(_zigzag_order())
_ZZ_ROWS = np.array([r for r, _ in ZIGZAG])
_ZZ_COLS = np.array([c for _, c in ZIGZAG])


def zigzag_scan(grid) -> np.ndarray:
    g = np.asarray(grid)
    if g.shape[-2:] != (GRID, GRID):
        raise ValueError(f"expected 8x8 grid, got {g.shape}")
    return g[..., _ZZ_ROWS, _ZZ_COLS]


def quantize_cld(coeff: float, position: int) -> int:
    return int(_quantize(np.array([coeff]), np.array([position]))[0])


def _quantize(coeffs: np.ndarray, positions: np.ndarray) -> np.ndarray:
    q = round_half_away(np.asarray(coeffs, dtype=np.float64) / QUANT_STEP)
    q = np.where(positions == 0, q, q + AC_OFFSET)
    return np.clip(q, 0, 255).astype(np.uint8)


def extract_cld(image: RawImage) -> np.ndarray:
    """192-value uint8 Colour Layout Descriptor."""
    icon = build_icon(image)
    positions = np.arange(64)
    parts = [
        _quantize(zigzag_scan(dct_8x8(channel)), positions)
        for channel in (icon.y, icon.cb, icon.cr)
    ]
    return np.concatenate(parts)


def _default_y():
    w = np.ones(64)
    w[:3] = 2.0
    return w


def _default_c():
    w = np.ones(64)
    w[0] = 2.0
    return w


@dataclass(frozen=True)
class CldWeights:
    """Per-coefficient weights (zigzag-indexed) for ``cld_distance``."""

    wy: np.ndarray = field(default_factory=_default_y)
    wcb: np.ndarray = field(default_factory=_default_c)
    wcr: np.ndarray = field(default_factory=_default_c)

    def __post_init__(self):
        for name in ("wy", "wcb", "wcr"):
            w = np.asarray(getattr(self, name), dtype=np.float64)
            if w.shape != (64,):
                raise ValueError(f"{name} must have 64 entries, got {w.shape}")
            if (w < 0).any() or not (w > 0).any():
                raise ValueError(f"{name} must be non-negative with at least one positive")
            object.__setattr__(self, name, w)

    @classmethod
    def ones(cls) -> "CldWeights":
        return cls(np.ones(64), np.ones(64), np.ones(64))

    @classmethod
    def from_prefixes(cls, wy=(2, 2, 2), wcb=(2,), wcr=(2,)) -> "CldWeights":
        """Leading weights given explicitly, remaining positions weight 1."""
        def pad(prefix):
            w = np.ones(64)
            w[: len(prefix)] = prefix
            return w
        return cls(pad(wy), pad(wcb), pad(wcr))

    def stacked(self) -> np.ndarray:
        return np.stack([self.wy, self.wcb, self.wcr])


def _check_len(a, b, dim):
    if len(a) != dim or len(b) != dim:
        raise LengthMismatch(f"descriptor lengths {len(a)} and {len(b)}, expected {dim}")


def cld_distance(a, b, w: CldWeights | None = None) -> float:
    """Sum over Y, Cb, Cr of the weighted Euclidean distance."""
    _check_len(a, b, CLD_DIM)
    w = w or CldWeights()
    d = np.asarray(a, dtype=np.float64) - np.asarray(b, dtype=np.float64)
    d2 = (d * d).reshape(3, 64)
    return float(sum(math.sqrt(float(np.dot(wc, dc))) for wc, dc in zip(w.stacked(), d2)))


def cld_distances(matrix: np.ndarray, query, w: CldWeights | None = None) -> np.ndarray:
    """``cld_distance`` from ``query`` to every row of an (n, 192) matrix."""
    w = w or CldWeights()
    q = np.asarray(query, dtype=np.float64)
    if q.shape != (CLD_DIM,) or matrix.shape[1:] != (CLD_DIM,):
        raise LengthMismatch(f"expected length {CLD_DIM}")
    d = matrix.astype(np.float64) - q
    d2 = (d * d).reshape(-1, 3, 64)
    per_channel = np.einsum("nck,ck->nc", d2, w.stacked())
    return np.sqrt(per_channel).sum(axis=1)
