import io
from pathlib import Path

import numpy as np
import pytest
from PIL import Image

from mpeg7desc.imaging import RawImage


def encode(pixels: np.ndarray, fmt: str = "PNG", **kw) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(pixels).save(buf, format=fmt, **kw)
    return buf.getvalue()


def random_pixels(rng, height, width):
    return rng.integers(0, 256, size=(height, width, 3), dtype=np.uint8)


def smooth_pixels(rng, height, width):
    """Random but spatially structured content (JPEG-friendly)."""
    yy, xx = np.mgrid[0:height, 0:width]
    out = np.empty((height, width, 3), dtype=np.float64)
    for c in range(3):
        fx, fy, ph = rng.uniform(0.01, 0.2, 2).tolist() + [rng.uniform(0, 6)]
        out[..., c] = 127.5 + 127.5 * np.sin(fx * xx + fy * yy + ph)
    return out.round().astype(np.uint8)


def raw(pixels) -> RawImage:
    return RawImage.from_array(pixels)


def build_corpus(root: Path, layout: dict, seed: int = 0, size=(48, 64)) -> dict:
    """Create ``root/<synset>/<name>`` images.

    ``layout`` maps synset -> list of file names; a name starting with
    ``bad_`` gets a truncated JPEG, ``tiny_`` a 4x4 PNG. Returns paths.
    """
    rng = np.random.default_rng(seed)
    paths = {}
    for synset, names in layout.items():
        d = root / synset
        d.mkdir(parents=True, exist_ok=True)
        for name in names:
            p = d / name
            if name.startswith("bad_"):
                blob = encode(smooth_pixels(rng, *size), "JPEG", quality=90)
                p.write_bytes(blob[: len(blob) // 2])
            elif name.startswith("tiny_"):
                p.write_bytes(encode(random_pixels(rng, 4, 4)))
            elif name.lower().endswith((".jpg", ".jpeg")):
                p.write_bytes(encode(smooth_pixels(rng, *size), "JPEG", quality=90))
            elif name.lower().endswith(".png"):
                p.write_bytes(encode(smooth_pixels(rng, *size)))
            else:
                p.write_text("not an image\n")
            paths[(synset, name)] = p
    return paths


# 3 synsets / 10 images, one of them a truncated JPEG
MINI_LAYOUT = {
    "n01440764": ["n01440764_1.JPEG", "n01440764_2.JPEG", "n01440764_3.png", "bad_n01440764_4.JPEG"],
    "n01443537": ["n01443537_1.JPEG", "n01443537_2.png", "n01443537_3.JPEG"],
    "n01484850": ["n01484850_1.png", "n01484850_2.JPEG", "n01484850_3.JPEG"],
}


@pytest.fixture
def mini_corpus(tmp_path):
    root = tmp_path / "mini"
    build_corpus(root, MINI_LAYOUT)
    return root


# ---- acceptance summary: one pass/fail line per criterion -------------------

_criteria = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n = marker.args[0]
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        prev = _criteria.get(n, "PASS")
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[rep.outcome]
        _criteria[n] = status if prev == "PASS" else prev
        _criteria.setdefault(("title", n), marker.kwargs.get("title", ""))


def pytest_terminal_summary(terminalreporter):
    keys = sorted(k for k in _criteria if not isinstance(k, tuple))
    if not keys:
        return
    terminalreporter.section("acceptance criteria")
    for n in keys:
        title = _criteria.get(("title", n), "")
        terminalreporter.write_line(f"criterion {n}: {_criteria[n]}  {title}")
