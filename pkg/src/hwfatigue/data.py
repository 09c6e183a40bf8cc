"""Data model and file I/O for online handwriting recordings.

A recording is the sample stream captured by a digitizing tablet while a
subject performs one handwriting task in one acquisition session.  Recordings
are stored on disk in a plain-text SVC-style format:

    line 1:        N                       (number of samples)
    lines 2..N+1:  x y timestamp pen_status azimuth altitude pressure

All seven channels are integers.  ``pen_status`` is 0 (pen up, hovering) or
1 (pen down, touching the surface).  ``pressure`` is a device level in
``[0, max_level]`` where ``max_level`` is the sensor ceiling (1023 for the
reference tablet).

A dataset directory groups recordings as::

    root/subject<NN>/session<S>/task<T>.svc

with NN zero-padded to two digits (01..99), S in 1..5 and T in 1..9.
Missing files are legal; entries that do not match the layout are ignored.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, TextIO

import numpy as np

SESSIONS = (1, 2, 3, 4, 5)
TASKS = (1, 2, 3, 4, 5, 6, 7, 8, 9)

# Column order of an SVC row and of Recording.samples.
COL_X = 0
COL_Y = 1
COL_TIMESTAMP = 2
COL_PEN_STATUS = 3
COL_AZIMUTH = 4
COL_ALTITUDE = 5
COL_PRESSURE = 6
N_COLUMNS = 7

_SUBJECT_DIR_RE = re.compile(r"subject(0[1-9]|[1-9][0-9])$")
_SESSION_DIR_RE = re.compile(r"session([1-5])$")
_TASK_FILE_RE = re.compile(r"task([1-9])\.svc$")


class SvcParseError(ValueError):
    """Malformed SVC content.  Carries the offending line number and, when
    parsing from disk, the file path."""

    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        self.message = message
        self.line = line
        self.path = path
        super().__init__(message)

    def __str__(self) -> str:
        prefix = ""
        if self.path is not None:
            prefix += f"{self.path}:"
        if self.line is not None:
            prefix += f"{self.line}:"
        return f"{prefix} {self.message}" if prefix else self.message


class DatasetError(ValueError):
    """Invalid dataset content (duplicate keys, unreadable recordings)."""


class PenStatus(enum.IntEnum):
    UP = 0
    DOWN = 1


@dataclass(frozen=True)
class DeviceProfile:
    """Pressure range of the acquisition tablet.

    ``force_at_max`` is the physical force density (Newton/mm^2) at which the
    sensor saturates, i.e. the force corresponding to level ``max_level``.
    """

    max_level: int = 1023
    force_at_max: float = 45.0

    def __post_init__(self) -> None:
        if self.max_level <= 0:
            raise ValueError(f"max_level must be positive, got {self.max_level}")
        if self.force_at_max <= 0:
            raise ValueError(f"force_at_max must be positive, got {self.force_at_max}")


@dataclass(frozen=True)
class Sample:
    """One digitizer event."""

    x: int
    y: int
    timestamp: int
    pen_status: PenStatus
    azimuth: int
    altitude: int
    pressure: int

    def __post_init__(self) -> None:
        if self.pen_status not in (PenStatus.UP, PenStatus.DOWN):
            raise ValueError(f"pen_status must be 0 or 1, got {self.pen_status}")
        if self.pressure < 0:
            raise ValueError(f"pressure must be non-negative, got {self.pressure}")

    def to_row(self) -> tuple[int, ...]:
        return (self.x, self.y, self.timestamp, int(self.pen_status),
                self.azimuth, self.altitude, self.pressure)

    @classmethod
    def from_row(cls, row) -> "Sample":
        x, y, ts, pen, az, alt, p = (int(v) for v in row)
        return cls(x, y, ts, PenStatus(pen), az, alt, p)


@dataclass(frozen=True)
class Recording:
    """Ordered sample stream for one (subject, session, task) triple.

    ``samples`` is an (N, 7) int64 array in SVC column order; the per-channel
    properties below expose read-only column views.  The array is frozen at
    construction so recordings can be shared across threads.
    """

    subject_id: int
    session_id: int
    task_id: int
    samples: np.ndarray
    device: DeviceProfile = field(default_factory=DeviceProfile)

    def __post_init__(self) -> None:
        if self.subject_id < 1:
            raise ValueError(f"subject_id must be positive, got {self.subject_id}")
        if self.session_id not in SESSIONS:
            raise ValueError(f"session_id must be in 1..5, got {self.session_id}")
        if self.task_id not in TASKS:
            raise ValueError(f"task_id must be in 1..9, got {self.task_id}")
        arr = np.array(self.samples, dtype=np.int64, copy=True)
        if arr.ndim != 2 or arr.shape[1] != N_COLUMNS:
            raise ValueError(f"samples must be an (N, {N_COLUMNS}) array, got shape {arr.shape}")
        if arr.shape[0] == 0:
            raise ValueError("recording has no samples")
        pen = arr[:, COL_PEN_STATUS]
        if not np.all((pen == 0) | (pen == 1)):
            raise ValueError("pen_status values must be 0 or 1")
        pressure = arr[:, COL_PRESSURE]
        if pressure.min() < 0 or pressure.max() > self.device.max_level:
            raise ValueError(
                f"pressure values must lie in [0, {self.device.max_level}]")
        ts = arr[:, COL_TIMESTAMP]
        if np.any(np.diff(ts) < 0):
            raise ValueError("timestamps must be non-decreasing")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    @property
    def n_samples(self) -> int:
        return self.samples.shape[0]

    @property
    def x(self) -> np.ndarray:
        return self.samples[:, COL_X]

    @property
    def y(self) -> np.ndarray:
        return self.samples[:, COL_Y]

    @property
    def timestamp(self) -> np.ndarray:
        return self.samples[:, COL_TIMESTAMP]

    @property
    def pen_status(self) -> np.ndarray:
        return self.samples[:, COL_PEN_STATUS]

    @property
    def azimuth(self) -> np.ndarray:
        return self.samples[:, COL_AZIMUTH]

    @property
    def altitude(self) -> np.ndarray:
        return self.samples[:, COL_ALTITUDE]

    @property
    def pressure(self) -> np.ndarray:
        return self.samples[:, COL_PRESSURE]

    @property
    def key(self) -> tuple[int, int, int]:
        return (self.subject_id, self.session_id, self.task_id)

    def sample(self, i: int) -> Sample:
        return Sample.from_row(self.samples[i])

    def to_samples(self) -> list[Sample]:
        return [Sample.from_row(row) for row in self.samples]


class Dataset:
    """Recordings indexed by (subject_id, session_id, task_id).

    At most one recording per key; missing cells are simply absent.
    """

    def __init__(self, recordings: Iterator[Recording] | None = None):
        self._recordings: dict[tuple[int, int, int], Recording] = {}
        if recordings is not None:
            for rec in recordings:
                self.add(rec)

    def add(self, recording: Recording) -> None:
        if recording.key in self._recordings:
            raise DatasetError(f"duplicate recording for key {recording.key}")
        self._recordings[recording.key] = recording

    def get(self, subject_id: int, session_id: int, task_id: int) -> Recording | None:
        return self._recordings.get((subject_id, session_id, task_id))

    def keys(self) -> list[tuple[int, int, int]]:
        return sorted(self._recordings)

    def subjects(self) -> list[int]:
        return sorted({k[0] for k in self._recordings})

    def __len__(self) -> int:
        return len(self._recordings)

    def __iter__(self) -> Iterator[Recording]:
        for key in self.keys():
            yield self._recordings[key]

    def __contains__(self, key: tuple[int, int, int]) -> bool:
        return key in self._recordings


def parse_svc(source: str | TextIO, device: DeviceProfile = DeviceProfile()) -> np.ndarray:
    """Parse SVC text into an (N, 7) int64 sample array.

    ``source`` may be a string or a text file object.  The declared sample
    count must match the number of data lines exactly, every line must carry
    seven integer columns, pen status must be 0/1 and pressure must lie in
    ``[0, device.max_level]``.  Any violation raises :class:`SvcParseError`
    with the 1-based line number; no partial result is ever returned.

    Blank lines are ignored (the canonical writer emits none).
    """
    text = source.read() if hasattr(source, "read") else source
    numbered = [(i, line.strip()) for i, line in enumerate(text.splitlines(), start=1)]
    numbered = [(i, line) for i, line in numbered if line]
    if not numbered:
        raise SvcParseError("missing sample-count header")

    header_line_no, header = numbered[0]
    try:
        declared = int(header)
    except ValueError:
        raise SvcParseError(f"sample-count header is not an integer: {header!r}",
                            line=header_line_no) from None
    if declared < 0:
        raise SvcParseError(f"sample count must be non-negative, got {declared}",
                            line=header_line_no)

    data_lines = numbered[1:]
    if len(data_lines) != declared:
        raise SvcParseError(
            f"sample count mismatch: header declares {declared}, "
            f"found {len(data_lines)} data lines",
            line=header_line_no)

    rows = np.empty((declared, N_COLUMNS), dtype=np.int64)
    for i, (line_no, line) in enumerate(data_lines):
        parts = line.split()
        if len(parts) != N_COLUMNS:
            raise SvcParseError(f"expected {N_COLUMNS} columns, got {len(parts)}",
                                line=line_no)
        try:
            values = [int(p) for p in parts]
        except ValueError:
            bad = next(p for p in parts if not _is_int(p))
            raise SvcParseError(f"non-integer token {bad!r}", line=line_no) from None
        if values[COL_PEN_STATUS] not in (0, 1):
            raise SvcParseError(
                f"pen_status must be 0 or 1, got {values[COL_PEN_STATUS]}",
                line=line_no)
        if not 0 <= values[COL_PRESSURE] <= device.max_level:
            raise SvcParseError(
                f"pressure {values[COL_PRESSURE]} outside [0, {device.max_level}]",
                line=line_no)
        rows[i] = values
    return rows


def _is_int(token: str) -> bool:
    try:
        int(token)
    except ValueError:
        return False
    return True


def serialize_svc(samples) -> str:
    """Render samples in canonical SVC text: count header, one
    space-separated row per sample, LF line endings.

    Accepts an (N, 7) integer array or a sequence of :class:`Sample`.
    Canonical form round-trips bit-exactly through :func:`parse_svc`.
    """
    if len(samples) and isinstance(samples[0], Sample):
        arr = np.array([s.to_row() for s in samples], dtype=np.int64)
    else:
        arr = np.asarray(samples, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[1] != N_COLUMNS:
            raise ValueError(f"samples must be an (N, {N_COLUMNS}) array, got shape {arr.shape}")
    lines = [str(arr.shape[0])]
    lines.extend(" ".join(str(v) for v in row) for row in arr.tolist())
    return "\n".join(lines) + "\n"


def recording_path(root: Path, subject_id: int, session_id: int, task_id: int) -> Path:
    return Path(root) / f"subject{subject_id:02d}" / f"session{session_id}" / f"task{task_id}.svc"


def load_dataset(root: Path | str, device: DeviceProfile = DeviceProfile()) -> Dataset:
    """Load every well-formed recording under ``root``.

    Walks the ``subject<NN>/session<S>/task<T>.svc`` layout; entries that do
    not match it are ignored, missing cells are legal.  A malformed file
    aborts the whole load with a :class:`SvcParseError` or
    :class:`DatasetError` naming its path.
    """
    root = Path(root)
    if not root.is_dir():
        raise DatasetError(f"dataset root is not a directory: {root}")
    dataset = Dataset()
    for subject_dir in sorted(root.iterdir()):
        m = _SUBJECT_DIR_RE.fullmatch(subject_dir.name)
        if m is None or not subject_dir.is_dir():
            continue
        subject_id = int(m.group(1))
        for session_dir in sorted(subject_dir.iterdir()):
            m = _SESSION_DIR_RE.fullmatch(session_dir.name)
            if m is None or not session_dir.is_dir():
                continue
            session_id = int(m.group(1))
            for task_file in sorted(session_dir.iterdir()):
                m = _TASK_FILE_RE.fullmatch(task_file.name)
                if m is None:
                    continue
                task_id = int(m.group(1))
                text = task_file.read_text()
                try:
                    samples = parse_svc(text, device)
                    recording = Recording(subject_id, session_id, task_id, samples, device)
                except SvcParseError as err:
                    err.path = str(task_file)
                    raise
                except ValueError as err:
                    raise DatasetError(f"{task_file}: {err}") from err
                dataset.add(recording)
    return dataset


def write_dataset(dataset: Dataset, root: Path | str) -> list[Path]:
    """Serialize every recording into the directory layout under ``root``.

    Returns the written paths.  Subject ids above 99 do not fit the
    two-digit layout and are rejected.
    """
    root = Path(root)
    written = []
    for recording in dataset:
        if recording.subject_id > 99:
            raise DatasetError(
                f"subject_id {recording.subject_id} does not fit the subject<NN> layout")
        path = recording_path(root, *recording.key)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(serialize_svc(recording.samples), newline="\n")
        written.append(path)
    return written
