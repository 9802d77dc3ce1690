"""Edge Histogram Descriptor.

The luma plane is tiled into small square image-blocks, each split into
2x2 sub-blocks whose mean lumas are run through five edge filters. Blocks
are counted per edge type inside each cell of a 4x4 partition, and the
per-cell frequencies are quantised to 8 bits: 16 cells x 5 types = 80 bins,
bin index ``5 * cell + edge_type``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .errors import ImageTooSmall, LengthMismatch
from .imaging import RawImage, luma, round_half_away

EHD_DIM = 80
N_CELLS = 16
DEFAULT_THRESHOLD = 11.0
DEFAULT_DESIRED_BLOCKS = 1100


class EdgeType(IntEnum):
    VERTICAL = 0
    HORIZONTAL = 1
    DIAGONAL_45 = 2
    DIAGONAL_135 = 3
    NON_DIRECTIONAL = 4


N_EDGE_TYPES = len(EdgeType)

_R2 = math.sqrt(2.0)
# Rows follow EdgeType order; columns are sub-blocks TL, TR, BL, BR.
EDGE_FILTERS = np.array(
    [
        [1.0, -1.0, 1.0, -1.0],
        [1.0, 1.0, -1.0, -1.0],
        [_R2, 0.0, 0.0, -_R2],
        [0.0, _R2, -_R2, 0.0],
        [2.0, -2.0, -2.0, 2.0],
    ]
)


@dataclass(frozen=True)
class BlockGeometry:
    block_size: int
    blocks_per_row: int
    blocks_per_col: int

    @property
    def covered_width(self) -> int:
        return self.blocks_per_row * self.block_size

    @property
    def covered_height(self) -> int:
        return self.blocks_per_col * self.block_size


def block_geometry(width: int, height: int, desired_blocks: int = DEFAULT_DESIRED_BLOCKS) -> BlockGeometry:
    """Even block size giving roughly ``desired_blocks`` image-blocks.

    The size is also capped so that at least four blocks fit along each
    axis; otherwise very elongated images would leave 4x4 cells empty.
    """
    if width < 8 or height < 8:
        raise ImageTooSmall(width, height)
    if desired_blocks < 1:
        raise ValueError("desired_blocks must be >= 1")
    raw = math.sqrt(width * height / desired_blocks)
    size = int(math.floor(raw)) // 2 * 2
    size = min(size, min(width, height) // 4 // 2 * 2)
    size = max(2, size)
    return BlockGeometry(size, width // size, height // size)


def edge_strengths(a0, a1, a2, a3) -> np.ndarray:
    """Five filter responses |sum c_i a_i|, stacked on a new leading axis."""
    return np.abs(
        np.stack(
            [
                a0 - a1 + a2 - a3,
                a0 + a1 - a2 - a3,
                _R2 * a0 - _R2 * a3,
                _R2 * a1 - _R2 * a2,
                2.0 * a0 - 2.0 * a1 - 2.0 * a2 + 2.0 * a3,
            ]
        )
    )


def _classify(strengths: np.ndarray, threshold: float) -> np.ndarray:
    # np.argmax returns the first maximum, i.e. the lowest ordinal on ties.
    best = np.argmax(strengths, axis=0)
    peak = np.take_along_axis(strengths, best[None], axis=0)[0]
    return np.where(peak >= threshold, best, -1)


def edge_classify(a0: float, a1: float, a2: float, a3: float,
                  threshold: float = DEFAULT_THRESHOLD) -> EdgeType | None:
    s = edge_strengths(*(np.float64(a) for a in (a0, a1, a2, a3)))
    e = int(_classify(s, threshold))
    return None if e < 0 else EdgeType(e)


def _sub_block_means(y: np.ndarray, geom: BlockGeometry):
    half = geom.block_size // 2
    area = y[: geom.covered_height, : geom.covered_width]
    tiles = area.reshape(geom.blocks_per_col, 2, half, geom.blocks_per_row, 2, half)
    means = tiles.sum(axis=(2, 5), dtype=np.int64) / (half * half)
    return means[:, 0, :, 0], means[:, 0, :, 1], means[:, 1, :, 0], means[:, 1, :, 1]


def _cell_index(geom: BlockGeometry) -> np.ndarray:
    rows = (4 * np.arange(geom.blocks_per_col) * geom.block_size) // geom.covered_height
    cols = (4 * np.arange(geom.blocks_per_row) * geom.block_size) // geom.covered_width
    return 4 * rows[:, None] + cols[None, :]


def extract_ehd(image: RawImage, threshold: float = DEFAULT_THRESHOLD,
                desired_blocks: int = DEFAULT_DESIRED_BLOCKS) -> np.ndarray:
    """80-value uint8 Edge Histogram Descriptor."""
    geom = block_geometry(image.width, image.height, desired_blocks)
    y = luma(image.pixels)
    kinds = _classify(edge_strengths(*_sub_block_means(y, geom)), threshold)
    cells = _cell_index(geom)

    totals = np.bincount(cells.ravel(), minlength=N_CELLS).astype(np.float64)
    hit = kinds >= 0
    counts = np.bincount(
        (cells[hit] * N_EDGE_TYPES + kinds[hit]).ravel(), minlength=EHD_DIM
    ).astype(np.float64)
    denom = np.repeat(totals, N_EDGE_TYPES)
    freq = np.divide(counts, denom, out=np.zeros(EHD_DIM), where=denom > 0)
    return np.clip(round_half_away(freq * 255.0), 0, 255).astype(np.uint8)


def global_histogram(values) -> np.ndarray:
    """Per-edge-type mean of the 16 local bins."""
    v = np.asarray(values, dtype=np.float64).reshape(-1, N_CELLS, N_EDGE_TYPES)
    return v.sum(axis=1) / N_CELLS


def ehd_distance(a, b) -> float:
    """L1 over local bins plus 5x L1 over the derived global histogram."""
    if len(a) != EHD_DIM or len(b) != EHD_DIM:
        raise LengthMismatch(f"descriptor lengths {len(a)} and {len(b)}, expected {EHD_DIM}")
    return float(ehd_distances(np.asarray(a)[None, :], b)[0])


def ehd_distances(matrix: np.ndarray, query) -> np.ndarray:
    q = np.asarray(query, dtype=np.int64)
    if q.shape != (EHD_DIM,) or matrix.shape[1:] != (EHD_DIM,):
        raise LengthMismatch(f"expected length {EHD_DIM}")
    d = matrix.astype(np.int64) - q
    local = np.abs(d).sum(axis=1)
    # Integer per-type sums keep the global term exact: 5 * |sum| / 16.
    glob = np.abs(d.reshape(-1, N_CELLS, N_EDGE_TYPES).sum(axis=1)).sum(axis=1)
    return local + 5.0 * glob / N_CELLS
