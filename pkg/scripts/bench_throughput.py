"""Combined CLD+EHD extraction throughput and worker scaling.

Generates (or reuses) a corpus of 256x256 JPEGs and runs the batch
pipeline at several worker counts, printing images/s and speedup.

    python scripts/bench_throughput.py --images 800 --workers 1 2 4 8
"""

import argparse
import os
import subprocess
import sys
import tempfile
import time
from pathlib import Path

from mpeg7desc.corpus import BatchConfig, run_batch
from mpeg7desc.descriptor_io import Kind


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--root", type=Path, help="existing corpus; generated when omitted")
    ap.add_argument("--images", type=int, default=800)
    ap.add_argument("--synsets", type=int, default=8)
    ap.add_argument("--workers", type=int, nargs="+", default=[1, 2, 4, 8])
    args = ap.parse_args()

    with tempfile.TemporaryDirectory() as tmp:
        root = args.root
        if root is None:
            root = Path(tmp) / "corpus"
            per = args.images // args.synsets
            subprocess.run([sys.executable, str(Path(__file__).with_name("make_fixture.py")), str(root),
                            "--synsets", str(args.synsets), "--images", str(per), "--corrupt", "0"],
                           check=True)
        print(f"logical CPUs: {os.cpu_count()}")
        base = None
        for w in args.workers:
            out = Path(tmp) / f"out{w}"
            t0 = time.perf_counter()
            report = run_batch(BatchConfig(root, out, {Kind.CLD, Kind.EHD}, w))
            dt = time.perf_counter() - t0
            base = base or dt
            print(f"workers={w:2d}  {report.images_processed} images  {dt:6.2f}s  "
                  f"{report.images_processed / dt:7.1f} img/s  speedup {base / dt:4.2f}x")


if __name__ == "__main__":
    main()
