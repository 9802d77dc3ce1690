"""Per-synset descriptor text files.

One file per synset, ``<synset_id>.cld`` or ``<synset_id>.ehd``; one line
per image::

    image_id;v1;v2;...;vd;

with d = 192 (CLD) or 80 (EHD), every field followed by ``;``, LF line
endings (CRLF accepted on read).
"""

from __future__ import annotations

import os
import re
import tempfile
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ExtensionError, InvalidRecord, ParseError

_VALUE_RE = re.compile(r"0|[1-9][0-9]{0,2}")
_BAD_ID_CHARS = frozenset(";\n\r")


class Kind(Enum):
    CLD = "cld"
    EHD = "ehd"

    @property
    def dim(self) -> int:
        return 192 if self is Kind.CLD else 80

    @property
    def ext(self) -> str:
        return self.value

    @classmethod
    def parse(cls, text: str) -> "Kind":
        try:
            return cls(text.lower().lstrip("."))
        except ValueError:
            raise ExtensionError(f"unknown descriptor kind {text!r}; expected cld or ehd") from None


@dataclass(frozen=True)
class DescriptorRecord:
    image_id: str
    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))


@dataclass
class SynsetFile:
    synset_id: str
    kind: Kind
    records: list[DescriptorRecord] = field(default_factory=list)

    @property
    def filename(self) -> str:
        return f"{self.synset_id}.{self.kind.ext}"

    def validate(self) -> None:
        _check_id(self.synset_id, what="synset id")
        seen = set()
        for rec in self.records:
            _check_record(rec)
            if len(rec.values) != self.kind.dim:
                raise InvalidRecord(
                    f"{rec.image_id}: {len(rec.values)} values in a {self.kind.name} file "
                    f"(expected {self.kind.dim})"
                )
            if rec.image_id in seen:
                raise InvalidRecord(f"duplicate image_id {rec.image_id!r}")
            seen.add(rec.image_id)


def _check_id(token: str, what: str = "image_id") -> None:
    if not token:
        raise InvalidRecord(f"empty {what}")
    if _BAD_ID_CHARS.intersection(token):
        raise InvalidRecord(f"{what} {token!r} contains ';' or a line break")
    if not token.isascii():
        raise InvalidRecord(f"{what} {token!r} is not 7-bit ASCII")


def _check_record(record: DescriptorRecord) -> None:
    _check_id(record.image_id)
    for v in record.values:
        if not 0 <= v <= 255:
            raise InvalidRecord(f"{record.image_id}: value {v} outside [0, 255]")


def format_line(record: DescriptorRecord) -> str:
    _check_record(record)
    return record.image_id + ";" + "".join(f"{v};" for v in record.values) + "\n"


def parse_line(line: str, expected_d: int, line_number: int | None = None) -> DescriptorRecord:
    """Strict inverse of ``format_line``."""
    def fail(reason, detail):
        return ParseError(reason, detail, line_number)

    text = line[:-1] if line.endswith("\n") else line
    if text.endswith("\r"):
        text = text[:-1]
    if "\n" in text or "\r" in text:
        raise fail(ParseError.MALFORMED_FIELD, "embedded line break")
    if not text.endswith(";"):
        raise fail(ParseError.MALFORMED_FIELD, "missing trailing ';'")
    fields = text[:-1].split(";")
    image_id, raw = fields[0], fields[1:]
    if not image_id:
        raise fail(ParseError.MALFORMED_FIELD, "empty image_id")
    if len(raw) != expected_d:
        raise fail(ParseError.WRONG_DIMENSION, f"{len(raw)} values, expected {expected_d}")
    values = []
    for i, tok in enumerate(raw, start=1):
        if not _VALUE_RE.fullmatch(tok) or int(tok) > 255:
            raise fail(ParseError.MALFORMED_FIELD, f"value {i} is {tok!r}, not an integer in [0, 255]")
        values.append(int(tok))
    return DescriptorRecord(image_id, tuple(values))


def kind_for_path(path: str | os.PathLike) -> Kind:
    suffix = Path(path).suffix
    if suffix not in (".cld", ".ehd"):
        raise ExtensionError(f"{path}: extension must be .cld or .ehd")
    return Kind(suffix[1:])


def write_synset_file(sfile: SynsetFile, directory: str | os.PathLike) -> Path:
    """Write atomically (temp file + rename); returns the final path."""
    sfile.validate()
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    target = directory / sfile.filename
    payload = "".join(format_line(r) for r in sfile.records).encode("ascii")
    fd, tmp = tempfile.mkstemp(prefix=f".{sfile.filename}.", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp, target)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise
    return target


def read_synset_file(path: str | os.PathLike) -> SynsetFile:
    path = Path(path)
    kind = kind_for_path(path)
    with open(path, "rb") as fh:
        data = fh.read()
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError as exc:
        raise ParseError(ParseError.MALFORMED_FIELD, f"non-ASCII byte at offset {exc.start}",
                         path=path) from None
    records = []
    seen = set()
    lines = text.split("\n")
    if lines[-1] == "":
        lines.pop()
    for n, line in enumerate(lines, start=1):
        try:
            rec = parse_line(line, kind.dim, line_number=n)
        except ParseError as exc:
            exc.path = path
            raise
        if rec.image_id in seen:
            raise ParseError(ParseError.MALFORMED_FIELD, f"duplicate image_id {rec.image_id!r}",
                             line_number=n, path=path)
        seen.add(rec.image_id)
        records.append(rec)
    return SynsetFile(path.stem, kind, records)


def iter_descriptor_files(directory: str | os.PathLike, kind: Kind | None = None) -> list[Path]:
    """Sorted .cld/.ehd files directly inside ``directory``."""
    exts = {f".{kind.ext}"} if kind else {".cld", ".ehd"}
    return sorted(p for p in Path(directory).iterdir() if p.is_file() and p.suffix in exts)


def records_from_arrays(ids: Iterable[str], rows: Sequence[Sequence[int]]) -> list[DescriptorRecord]:
    return [DescriptorRecord(i, tuple(int(v) for v in row)) for i, row in zip(ids, rows)]
