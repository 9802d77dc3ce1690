"""Synset-organised corpus walking and parallel batch extraction.

Layout: ``root/<synset_id>/<image_id>.<ext>``. Each synset is one unit of
work and is written by exactly one worker, so outputs do not depend on the
worker count or on scheduling.
"""

from __future__ import annotations

import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .cld import extract_cld
from .descriptor_io import DescriptorRecord, Kind, SynsetFile, write_synset_file
from .ehd import DEFAULT_DESIRED_BLOCKS, DEFAULT_THRESHOLD, extract_ehd
from .errors import DecodeError, ImageTooSmall
from .imaging import decode_image

log = logging.getLogger(__name__)

IMAGE_EXTENSIONS = frozenset(
    {".jpg", ".jpeg", ".jpe", ".png", ".bmp", ".gif", ".tif", ".tiff", ".webp", ".ppm", ".pgm"}
)

SKIP_DECODE = "DecodeError"
SKIP_TOO_SMALL = "ImageTooSmall"
SKIP_IO = "IoError"
SKIP_DUPLICATE = "DuplicateId"

SKIP_LEDGER = "skipped.log"


@dataclass(frozen=True)
class Synset:
    synset_id: str
    images: tuple[Path, ...]


@dataclass
class CorpusLayout:
    root: Path
    synsets: list[Synset]
    ignored: list[Path] = field(default_factory=list)

    @property
    def n_images(self) -> int:
        return sum(len(s.images) for s in self.synsets)


@dataclass(frozen=True)
class ExtractParams:
    ehd_threshold: float = DEFAULT_THRESHOLD
    ehd_desired_blocks: int = DEFAULT_DESIRED_BLOCKS


@dataclass
class BatchConfig:
    root: Path
    out_dir: Path
    kinds: frozenset = frozenset({Kind.CLD, Kind.EHD})
    worker_count: int = field(default_factory=lambda: os.cpu_count() or 1)
    ehd_threshold: float = DEFAULT_THRESHOLD
    ehd_desired_blocks: int = DEFAULT_DESIRED_BLOCKS

    def __post_init__(self):
        self.root = Path(self.root)
        self.out_dir = Path(self.out_dir)
        self.kinds = frozenset(self.kinds)
        if not self.kinds:
            raise ValueError("at least one descriptor kind is required")
        if self.worker_count < 1:
            raise ValueError("worker_count must be >= 1")

    @property
    def params(self) -> ExtractParams:
        return ExtractParams(self.ehd_threshold, self.ehd_desired_blocks)


@dataclass
class SynsetResult:
    synset_id: str
    n_images: int
    n_processed: int
    skipped: list[tuple[Path, str]]
    outputs: list[Path]
    error: str | None = None


@dataclass
class BatchReport:
    synsets_processed: int = 0
    images_scanned: int = 0
    images_processed: int = 0
    images_skipped: list[tuple[Path, str]] = field(default_factory=list)
    wall_time: float = 0.0
    outputs: dict = field(default_factory=dict)
    failed_synsets: list[tuple[str, str]] = field(default_factory=list)
    ignored_files: int = 0

    @property
    def ok(self) -> bool:
        return not self.failed_synsets

    def check_accounting(self) -> None:
        if self.images_processed + len(self.images_skipped) != self.images_scanned:
            raise AssertionError(
                f"accounting broken: {self.images_processed} processed + "
                f"{len(self.images_skipped)} skipped != {self.images_scanned} scanned"
            )

    def as_key_values(self) -> list[tuple[str, str]]:
        return [
            ("synsets", str(self.synsets_processed)),
            ("scanned", str(self.images_scanned)),
            ("processed", str(self.images_processed)),
            ("skipped", str(len(self.images_skipped))),
            ("failed_synsets", str(len(self.failed_synsets))),
            ("ignored_files", str(self.ignored_files)),
            ("seconds", f"{self.wall_time:.3f}"),
        ] + [
            (f"{kind.ext}_files", str(len(paths)))
            for kind, paths in sorted(self.outputs.items(), key=lambda kv: kv[0].value)
        ]


def scan_corpus(root: str | os.PathLike) -> CorpusLayout:
    """Immediate subdirectories are synsets; image files sorted by name."""
    root = Path(root)
    if not root.is_dir():
        raise NotADirectoryError(f"{root} is not a directory")
    synsets, ignored = [], []
    for sub in sorted(root.iterdir(), key=lambda p: p.name):
        if not sub.is_dir():
            ignored.append(sub)
            continue
        images = []
        for f in sorted(sub.iterdir(), key=lambda p: p.name):
            if f.is_file() and f.suffix.lower() in IMAGE_EXTENSIONS:
                images.append(f)
            else:
                ignored.append(f)
        synsets.append(Synset(sub.name, tuple(images)))
    for p in ignored:
        log.debug("ignoring non-image entry %s", p)
    return CorpusLayout(root, synsets, ignored)


def describe(image, kinds, params: ExtractParams = ExtractParams()) -> dict:
    """Compute every requested descriptor from one decoded image."""
    out = {}
    if Kind.CLD in kinds:
        out[Kind.CLD] = extract_cld(image)
    if Kind.EHD in kinds:
        out[Kind.EHD] = extract_ehd(image, params.ehd_threshold, params.ehd_desired_blocks)
    return out


def extract_synset(synset: Synset, kinds, out_dir: str | os.PathLike,
                   params: ExtractParams = ExtractParams()):
    """Describe every image of one synset and write one file per kind.

    Returns ``(files, skipped)`` where ``files`` maps Kind to the written
    SynsetFile and ``skipped`` lists ``(path, reason)``. Bad images are
    skipped; only output failures raise.
    """
    kinds = frozenset(kinds)
    rows = {k: [] for k in kinds}
    skipped = []
    seen = set()
    for path in sorted(synset.images, key=lambda p: (p.stem, p.name)):
        image_id = path.stem
        if image_id in seen:
            skipped.append((path, SKIP_DUPLICATE))
            continue
        try:
            with open(path, "rb") as fh:
                data = fh.read()
        except OSError:
            skipped.append((path, SKIP_IO))
            continue
        try:
            descs = describe(decode_image(data), kinds, params)
        except DecodeError:
            skipped.append((path, SKIP_DECODE))
            continue
        except ImageTooSmall:
            skipped.append((path, SKIP_TOO_SMALL))
            continue
        seen.add(image_id)
        for k, values in descs.items():
            rows[k].append(DescriptorRecord(image_id, tuple(int(v) for v in values)))

    files = {}
    for k in sorted(kinds, key=lambda k: k.value):
        sfile = SynsetFile(synset.synset_id, k, sorted(rows[k], key=lambda r: r.image_id))
        write_synset_file(sfile, out_dir)
        files[k] = sfile
    return files, skipped


def _run_one(args) -> SynsetResult:
    synset, kinds, out_dir, params = args
    try:
        files, skipped = extract_synset(synset, kinds, out_dir, params)
    except Exception as exc:
        log.error("synset %s failed: %s", synset.synset_id, exc)
        return SynsetResult(synset.synset_id, len(synset.images), 0, [], [], error=str(exc))
    n_ok = len(synset.images) - len(skipped)
    log.info("%s: %d images, %d skipped", synset.synset_id, len(synset.images), len(skipped))
    outputs = [Path(out_dir) / f.filename for f in files.values()]
    return SynsetResult(synset.synset_id, len(synset.images), n_ok, skipped, outputs)


def write_skip_ledger(out_dir: Path, skipped, root: Path) -> Path:
    def show(p: Path) -> str:
        try:
            return p.relative_to(root).as_posix()
        except ValueError:
            return str(p)
    path = Path(out_dir) / SKIP_LEDGER
    path.write_text("".join(f"{show(p)}\t{reason}\n" for p, reason in skipped), encoding="utf-8")
    return path


def run_batch(config: BatchConfig) -> BatchReport:
    start = time.perf_counter()
    layout = scan_corpus(config.root)
    config.out_dir.mkdir(parents=True, exist_ok=True)
    jobs = [(s, config.kinds, config.out_dir, config.params) for s in layout.synsets]

    if config.worker_count == 1 or len(jobs) <= 1:
        results = [_run_one(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=config.worker_count) as pool:
            # map preserves input order; aggregation happens after all return
            results = list(pool.map(_run_one, jobs, chunksize=1))

    report = BatchReport(images_scanned=layout.n_images, ignored_files=len(layout.ignored))
    report.outputs = {k: [] for k in config.kinds}
    for res in results:
        if res.error is not None:
            report.failed_synsets.append((res.synset_id, res.error))
            # an unwritten synset counts all its images as skipped
            report.images_skipped.extend(
                (p, SKIP_IO) for s in layout.synsets if s.synset_id == res.synset_id for p in s.images
            )
            continue
        report.synsets_processed += 1
        report.images_processed += res.n_processed
        report.images_skipped.extend(res.skipped)
        for p in res.outputs:
            report.outputs[Kind(p.suffix[1:])].append(p)
    write_skip_ledger(config.out_dir, report.images_skipped, layout.root)
    report.wall_time = time.perf_counter() - start
    report.check_accounting()
    return report
