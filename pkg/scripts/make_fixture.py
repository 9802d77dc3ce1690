"""Build a small synthetic synset-organised corpus for trying the CLI.

    python scripts/make_fixture.py fixtures/mini --synsets 3 --images 4 --corrupt 1
"""

import argparse
import io
from pathlib import Path

import numpy as np
from PIL import Image


def smooth(rng, h, w):
    yy, xx = np.mgrid[0:h, 0:w]
    chans = []
    for _ in range(3):
        fx, fy = rng.uniform(0.01, 0.2, 2)
        chans.append(127.5 + 127.5 * np.sin(fx * xx + fy * yy + rng.uniform(0, 6)))
    return np.stack(chans, axis=-1).round().astype(np.uint8)


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("root", type=Path)
    ap.add_argument("--synsets", type=int, default=3)
    ap.add_argument("--images", type=int, default=4, help="images per synset")
    ap.add_argument("--corrupt", type=int, default=1, help="truncated JPEGs in the first synset")
    ap.add_argument("--size", type=int, nargs=2, default=(256, 256), metavar=("H", "W"))
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    for s in range(args.synsets):
        sid = f"n{1440764 + s:08d}"
        d = args.root / sid
        d.mkdir(parents=True, exist_ok=True)
        for i in range(args.images):
            buf = io.BytesIO()
            Image.fromarray(smooth(rng, *args.size)).save(buf, "JPEG", quality=90)
            data = buf.getvalue()
            if s == 0 and i < args.corrupt:
                data = data[: len(data) // 2]
            (d / f"{sid}_{i + 1}.JPEG").write_bytes(data)
    print(f"wrote {args.synsets} synsets x {args.images} images under {args.root}")


if __name__ == "__main__":
    main()
