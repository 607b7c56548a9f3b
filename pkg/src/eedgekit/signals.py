"""Core signal types, CSV ingestion, windowing, and synthetic EEG generation.

Samples are microvolts held as float64 throughout. All types are frozen
after construction and safe to share across threads.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import (
    EmptyFileError,
    MissingColumnError,
    NonIntegralWindowError,
    NonNumericCellError,
)

N_CLASSES = 27
GLYPHS = "abcdefghijklmnopqrstuvwxyz~"  # index 26 = '~' (do-nothing)


@dataclass(frozen=True)
class ClassLabel:
    """One of the 27 output classes: 'a'..'z' plus '~' for do-nothing."""

    index: int

    def __post_init__(self):
        if not 0 <= self.index < N_CLASSES:
            raise ValueError(f"class index {self.index} outside 0..{N_CLASSES - 1}")

    @property
    def glyph(self) -> str:
        return GLYPHS[self.index]

    @classmethod
    def from_glyph(cls, glyph: str) -> "ClassLabel":
        try:
            return cls(GLYPHS.index(glyph))
        except ValueError:
            raise ValueError(f"unknown glyph {glyph!r}") from None


@dataclass(frozen=True)
class EegRecording:
    """Multichannel recording: samples[channel, sample] in microvolts."""

    samples: np.ndarray
    fs: float
    channel_names: tuple[str, ...]
    subject_id: Optional[str] = None

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "channel_names", tuple(self.channel_names))
        if samples.ndim != 2 or samples.shape[0] < 1:
            raise ValueError("samples must be a [n_channels, n_samples] matrix with >= 1 channel")
        if len(self.channel_names) != samples.shape[0]:
            raise ValueError("channel_names length must match channel count")
        if not self.fs > 0:
            raise ValueError("sampling rate must be positive")
        if np.isnan(samples).any():
            raise ValueError("recording contains NaN samples")
        samples.setflags(write=False)

    @property
    def n_channels(self) -> int:
        return self.samples.shape[0]

    @property
    def n_samples(self) -> int:
        return self.samples.shape[1]

    @property
    def duration_seconds(self) -> float:
        return self.n_samples / self.fs


@dataclass(frozen=True)
class CharacterWindow:
    """One fixed-length segment, optionally labeled with its class."""

    data: np.ndarray
    window_index: int = 0
    label: Optional[int] = None
    subject_id: Optional[str] = None

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float64)
        object.__setattr__(self, "data", data)
        if data.ndim != 2:
            raise ValueError("window data must be [n_channels, n_samples]")
        if self.label is not None and not 0 <= self.label < N_CLASSES:
            raise ValueError(f"label {self.label} outside 0..{N_CLASSES - 1}")
        data.setflags(write=False)

    @property
    def n_channels(self) -> int:
        return self.data.shape[0]

    @property
    def n_samples(self) -> int:
        return self.data.shape[1]


def read_channel_mapping(path) -> dict[str, str]:
    """Parse a channel mapping file of `channel=column` lines.

    Blank lines and lines starting with '#' are ignored. Order of lines
    defines channel order in the ingested recording.
    """
    mapping: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"bad mapping line (expected key=column): {line!r}")
            key, _, col = line.partition("=")
            mapping[key.strip()] = col.strip()
    return mapping


def ingest_csv(
    path,
    mapping: dict[str, str] | Sequence[str],
    fs: float = 256.0,
    delimiter: str = ",",
    subject_id: Optional[str] = None,
) -> EegRecording:
    """Load a CSV export into an EegRecording.

    `mapping` is either {channel_name: column_name} or a plain sequence of
    column names (used as channel names too). Rows come out in mapping order.
    """
    if not isinstance(mapping, dict):
        mapping = {name: name for name in mapping}
    if len(mapping) < 1:
        raise ValueError("mapping must name at least one column")

    with open(path, "r", newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyFileError(f"{path}: file is empty") from None
        header = [h.strip() for h in header]
        col_index: dict[str, int] = {}
        for chan, col in mapping.items():
            if col not in header:
                raise MissingColumnError(col)
            col_index[chan] = header.index(col)

        columns: list[list[float]] = [[] for _ in mapping]
        for row_num, row in enumerate(reader):
            if not row or all(not cell.strip() for cell in row):
                continue
            for ci, (chan, idx) in enumerate(col_index.items()):
                try:
                    cell = row[idx]
                except IndexError:
                    raise NonNumericCellError(row_num, mapping[chan]) from None
                try:
                    columns[ci].append(float(cell))
                except ValueError:
                    raise NonNumericCellError(row_num, mapping[chan]) from None

    if not columns[0]:
        raise EmptyFileError(f"{path}: no data rows")
    samples = np.array(columns, dtype=np.float64)
    return EegRecording(samples, fs, tuple(mapping.keys()), subject_id=subject_id)


def export_csv(rec: EegRecording, path, delimiter: str = ",") -> None:
    """Write a recording as CSV with channel names as the header row.

    Values are formatted at 9 significant digits, so ingest(export(rec))
    reproduces the recording to that precision.
    """
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, delimiter=delimiter)
        writer.writerow(rec.channel_names)
        for k in range(rec.n_samples):
            writer.writerow([f"{v:.9g}" for v in rec.samples[:, k]])


def segment_windows(
    rec: EegRecording,
    window_seconds: float = 1.5,
    labels: Optional[Sequence[Optional[int]]] = None,
) -> list[CharacterWindow]:
    """Cut a recording into consecutive non-overlapping windows.

    Windows are aligned to sample 0; a trailing partial window is discarded.
    `labels`, when given, assigns labels[i] to window i (missing entries
    stay unlabeled).
    """
    if not window_seconds > 0:
        raise ValueError("window_seconds must be positive")
    exact = rec.fs * window_seconds
    window_len = round(exact)
    if abs(exact - window_len) > 1e-9 or window_len < 1:
        raise NonIntegralWindowError(
            f"fs * window_seconds = {exact} is not integral"
        )
    n_windows = rec.n_samples // window_len
    windows = []
    for i in range(n_windows):
        chunk = rec.samples[:, i * window_len : (i + 1) * window_len]
        label = None
        if labels is not None and i < len(labels):
            label = labels[i]
        windows.append(
            CharacterWindow(
                chunk.copy(),
                window_index=i,
                label=label,
                subject_id=rec.subject_id,
            )
        )
    return windows


# --- synthetic EEG -----------------------------------------------------------

@dataclass(frozen=True)
class Sinusoid:
    freq_hz: float
    amplitude: float = 1.0
    phase: float = 0.0


@dataclass(frozen=True)
class Noise:
    """White Gaussian noise with the given standard deviation."""

    sigma: float = 1.0


@dataclass(frozen=True)
class Spike:
    """A single additive impulse at time `at_s` seconds."""

    amplitude: float
    at_s: float


Component = Sinusoid | Noise | Spike


@dataclass(frozen=True)
class ChannelSpec:
    name: str
    components: tuple[Component, ...] = field(default_factory=tuple)


def synth_eeg(
    spec: Sequence[ChannelSpec],
    fs: float = 256.0,
    seconds: float = 1.5,
    seed: int = 0,
    subject_id: Optional[str] = None,
) -> EegRecording:
    """Deterministic synthetic recording: components summed per channel.

    A fixed (spec, fs, seconds, seed) quadruple always yields bit-identical
    output; noise draws are consumed in channel order from one seeded stream.
    """
    if not seconds > 0:
        raise ValueError("seconds must be positive")
    n = round(fs * seconds)
    t = np.arange(n) / fs
    rng = np.random.default_rng(seed)
    rows = []
    for chan in spec:
        x = np.zeros(n)
        for comp in chan.components:
            if isinstance(comp, Sinusoid):
                x += comp.amplitude * np.sin(2 * np.pi * comp.freq_hz * t + comp.phase)
            elif isinstance(comp, Noise):
                x += rng.normal(0.0, comp.sigma, size=n)
            elif isinstance(comp, Spike):
                idx = round(comp.at_s * fs)
                if 0 <= idx < n:
                    x[idx] += comp.amplitude
            else:
                raise TypeError(f"unknown component {comp!r}")
        rows.append(x)
    samples = np.array(rows) if rows else np.zeros((0, n))
    return EegRecording(samples, fs, tuple(c.name for c in spec), subject_id=subject_id)


def parse_component(text: str) -> Component:
    """Parse one component from its compact text form.

    Forms: `sine:freq[,amplitude[,phase]]`, `noise:sigma`, `spike:amplitude,at_s`.
    """
    kind, _, args = text.partition(":")
    parts = [float(p) for p in args.split(",")] if args else []
    kind = kind.strip().lower()
    if kind == "sine":
        return Sinusoid(*parts)
    if kind == "noise":
        return Noise(*parts)
    if kind == "spike":
        return Spike(*parts)
    raise ValueError(f"unknown component kind {kind!r}")


def read_synth_spec(path) -> list[ChannelSpec]:
    """Read a synth spec file: `channel = comp; comp; ...` per line."""
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            name, _, rest = line.partition("=")
            comps = tuple(
                parse_component(c.strip()) for c in rest.split(";") if c.strip()
            )
            out.append(ChannelSpec(name.strip(), comps))
    return out
