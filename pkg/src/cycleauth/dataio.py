"""Canonical CSV ingestion and rolling-origin split construction.

CSV schema (header required, comma-delimited, UTF-8, LF endings):

    subject_id,label,seq,ax,ay,az

seq is the 0-based sample index within the recording and must increase;
label is one of the six snake_case activity strings.  Values are written
back with 9 significant digits, so a load/write round trip is exact for
values representable at that precision.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .exceptions import DataError, InsufficientDataError, ParseError
from .features import ACTIVITY_LABELS

__all__ = [
    "Recording",
    "CvSplit",
    "load_csv",
    "write_csv",
    "make_cv_splits",
    "zscore_stats",
    "apply_zscore",
]

CSV_HEADER = "subject_id,label,seq,ax,ay,az"


@dataclass(frozen=True)
class Recording:
    """One subject's samples for one activity at a nominal sampling rate."""

    subject_id: str
    label: str
    ax: np.ndarray
    ay: np.ndarray
    az: np.ndarray
    seq: np.ndarray
    sample_rate_hz: float = 50.0

    def __post_init__(self):
        for name in ("ax", "ay", "az"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        object.__setattr__(self, "seq", np.asarray(self.seq, dtype=int))
        n = len(self.ax)
        if not (len(self.ay) == len(self.az) == len(self.seq) == n):
            raise DataError("axis and seq arrays must have equal lengths")
        if not self.sample_rate_hz > 0:
            raise DataError("sample_rate_hz must be positive")
        if self.label not in ACTIVITY_LABELS:
            raise DataError(f"unknown activity label {self.label!r}")

    def __len__(self):
        return len(self.ax)

    def axis(self, name: str) -> np.ndarray:
        return {"x": self.ax, "y": self.ay, "z": self.az}[name]

    @property
    def t(self) -> np.ndarray:
        """Canonical model time: the sample index."""
        return self.seq.astype(float)

    def seconds(self) -> np.ndarray:
        return self.seq / self.sample_rate_hz


@dataclass(frozen=True)
class CvSplit:
    """Expanding train range plus contiguous test blocks, as sample indices."""

    train_range: tuple
    test_blocks: tuple

    def __post_init__(self):
        object.__setattr__(self, "train_range", tuple(int(v) for v in self.train_range))
        blocks = tuple((int(a), int(b)) for a, b in self.test_blocks)
        object.__setattr__(self, "test_blocks", blocks)
        prev_end = self.train_range[1]
        for start, end in blocks:
            if start != prev_end:
                raise DataError("test blocks must tile contiguously after training")
            if end <= start:
                raise DataError("test blocks must be non-empty")
            prev_end = end


def _parse_float(token: str, column: str, line_no: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"non-numeric {column} value {token!r}", line=line_no) from None
    if not np.isfinite(value):
        raise ParseError(f"non-finite {column} value {token!r}", line=line_no)
    return value


def load_csv(source) -> list[Recording]:
    """Parse recordings grouped by (subject, label), in file order.

    `source` is a path or a text stream.  Malformed rows raise ParseError
    with the 1-based line number.
    """
    if hasattr(source, "read"):
        return _load_stream(source)
    with open(source, encoding="utf-8") as fh:
        return _load_stream(fh)


def _load_stream(fh) -> list[Recording]:
    header = fh.readline()
    if header.strip() != CSV_HEADER:
        raise ParseError(f"expected header {CSV_HEADER!r}, got {header.strip()!r}", line=1)
    groups: dict = {}
    order: list = []
    for line_no, raw in enumerate(fh, start=2):
        line = raw.rstrip("\n").rstrip("\r")
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 6:
            raise ParseError(f"expected 6 fields, got {len(parts)}", line=line_no)
        subject, label, seq_tok, ax_tok, ay_tok, az_tok = parts
        if label not in ACTIVITY_LABELS:
            raise ParseError(f"unknown label {label!r}", line=line_no)
        try:
            seq = int(seq_tok)
        except ValueError:
            raise ParseError(f"non-integer seq {seq_tok!r}", line=line_no) from None
        row = (
            seq,
            _parse_float(ax_tok, "ax", line_no),
            _parse_float(ay_tok, "ay", line_no),
            _parse_float(az_tok, "az", line_no),
        )
        key = (subject, label)
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(row)

    recordings = []
    for subject, label in order:
        rows = groups[(subject, label)]
        seq = np.asarray([r[0] for r in rows], dtype=int)
        if len(seq) > 1 and not np.all(np.diff(seq) > 0):
            raise DataError(
                f"seq must be strictly increasing within ({subject}, {label})"
            )
        recordings.append(
            Recording(
                subject_id=subject,
                label=label,
                ax=np.asarray([r[1] for r in rows]),
                ay=np.asarray([r[2] for r in rows]),
                az=np.asarray([r[3] for r in rows]),
                seq=seq,
            )
        )
    return recordings


def write_csv(recordings, destination) -> None:
    """Write recordings in the canonical schema (9 significant digits)."""
    if hasattr(destination, "write"):
        _write_stream(recordings, destination)
    else:
        with open(destination, "w", encoding="utf-8", newline="\n") as fh:
            _write_stream(recordings, fh)


def _write_stream(recordings, fh) -> None:
    fh.write(CSV_HEADER + "\n")
    for rec in recordings:
        for i in range(len(rec)):
            fh.write(
                f"{rec.subject_id},{rec.label},{rec.seq[i]},"
                f"{rec.ax[i]:.9g},{rec.ay[i]:.9g},{rec.az[i]:.9g}\n"
            )


def recording_to_csv_text(recordings) -> str:
    buf = io.StringIO()
    _write_stream(recordings, buf)
    return buf.getvalue()


def make_cv_splits(
    rec: Recording, train_len: int = 500, block: int = 100, n_blocks: int = 5
) -> CvSplit:
    """Rolling-origin split: train [0, train_len), then n contiguous blocks."""
    needed = train_len + block * n_blocks
    if len(rec) < needed:
        raise InsufficientDataError(
            f"recording has {len(rec)} samples; need {needed} "
            f"for train {train_len} + {n_blocks} x {block}"
        )
    blocks = tuple(
        (train_len + j * block, train_len + (j + 1) * block) for j in range(n_blocks)
    )
    return CvSplit(train_range=(0, train_len), test_blocks=blocks)


def zscore_stats(values: np.ndarray) -> tuple[float, float]:
    """Mean and std (floored away from zero) for training-range scaling."""
    std = float(np.std(values))
    return float(np.mean(values)), std if std > 1e-9 else 1.0


def apply_zscore(values: np.ndarray, stats: tuple[float, float]) -> np.ndarray:
    mean, std = stats
    return (np.asarray(values, dtype=float) - mean) / std
