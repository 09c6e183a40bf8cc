"""Seeded synthetic datasets shaped like a fatigue acquisition campaign.

Generates 21 subjects x 5 sessions x 9 tasks by default, with a configurable
pressure-saturation effect injected in the fatigue sessions of the tasks
performed without wrist support.  Only the saturation effect is modelled;
mean pressure keeps the same base distribution in every session so the
saturation feature can be studied in isolation.

Reproducibility contract
------------------------
Every recording draws from its own substream of a Philox 4x64 counter-based
generator (10 rounds, as implemented by ``numpy.random.Philox``).  The
128-bit key is the first 16 bytes, little-endian, of

    SHA-256("hwfatigue-synth-v1:<seed>:<subject>:<session>:<task>")

so a recording depends only on the seed and its own identity: regenerating
with more subjects, or regenerating one recording in isolation, is
bit-identical.  Per recording the draw order is fixed: saturation uniforms,
base pressures, x noise, y noise, azimuth noise, altitude noise.

Pressure model: each sample saturates (emits ``max_level``) with probability
p_sat and otherwise draws round(N(600, 150)) clamped to [1, max_level - 1].
p_sat is ``base_saturation[task]``, times ``fatigue_multiplier[task]`` when
the session is a fatigue session and the task is high-variation, capped at 1.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .data import Dataset, DeviceProfile, Recording, SESSIONS, TASKS

_PRESSURE_MEAN = 600.0
_PRESSURE_SD = 150.0
_COORD_CENTER = (10000, 7500)
_COORD_SCALE = 3000.0
_COORD_NOISE_SD = 5.0
_TIMESTAMP_STEP_MS = 10
_AZIMUTH_BASE, _AZIMUTH_SD = 1800, 30.0
_ALTITUDE_BASE, _ALTITUDE_SD = 600, 20.0


def _per_task(value: float | Mapping[int, float]) -> dict[int, float]:
    if isinstance(value, Mapping):
        return {int(t): float(v) for t, v in value.items()}
    return {t: float(value) for t in TASKS}


@dataclass(frozen=True)
class SynthConfig:
    """Shape and effect sizes of a synthetic dataset.

    ``base_saturation`` and ``fatigue_multiplier`` accept either a single
    float applied to all nine tasks or a per-task mapping.
    """

    n_subjects: int = 21
    samples_per_recording: int = 2000
    base_saturation: float | Mapping[int, float] = 0.05
    fatigue_multiplier: float | Mapping[int, float] = 5.0
    fatigue_sessions: frozenset[int] = frozenset({4, 5})
    high_variation_tasks: frozenset[int] = frozenset({1, 2, 3, 5})
    seed: int = 0
    device: DeviceProfile = field(default_factory=DeviceProfile)

    def __post_init__(self) -> None:
        if self.n_subjects < 1:
            raise ValueError(f"n_subjects must be positive, got {self.n_subjects}")
        if self.samples_per_recording < 1:
            raise ValueError(
                f"samples_per_recording must be positive, got {self.samples_per_recording}")
        object.__setattr__(self, "base_saturation", _per_task(self.base_saturation))
        object.__setattr__(self, "fatigue_multiplier", _per_task(self.fatigue_multiplier))
        object.__setattr__(self, "fatigue_sessions", frozenset(int(s) for s in self.fatigue_sessions))
        object.__setattr__(self, "high_variation_tasks",
                           frozenset(int(t) for t in self.high_variation_tasks))
        if not self.fatigue_sessions <= set(SESSIONS):
            raise ValueError(f"fatigue_sessions must be within {SESSIONS}")
        if not self.high_variation_tasks <= set(TASKS):
            raise ValueError(f"high_variation_tasks must be within {TASKS}")
        for task in TASKS:
            base = self.base_saturation.get(task)
            mult = self.fatigue_multiplier.get(task)
            if base is None or mult is None:
                raise ValueError(f"task {task} missing from per-task configuration")
            if not 0.0 <= base < 1.0:
                raise ValueError(f"base_saturation[{task}] must be in [0, 1), got {base}")
            if mult < 1.0:
                raise ValueError(f"fatigue_multiplier[{task}] must be >= 1, got {mult}")
            if base * mult > 1.0:
                raise ValueError(
                    f"base_saturation[{task}] * fatigue_multiplier[{task}] exceeds 1")

    def saturation_probability(self, session_id: int, task_id: int) -> float:
        p = self.base_saturation[task_id]
        if session_id in self.fatigue_sessions and task_id in self.high_variation_tasks:
            p *= self.fatigue_multiplier[task_id]
        return min(1.0, p)

    def to_json_dict(self) -> dict:
        return {
            "n_subjects": self.n_subjects,
            "samples_per_recording": self.samples_per_recording,
            "base_saturation": {str(t): self.base_saturation[t] for t in TASKS},
            "fatigue_multiplier": {str(t): self.fatigue_multiplier[t] for t in TASKS},
            "fatigue_sessions": sorted(self.fatigue_sessions),
            "high_variation_tasks": sorted(self.high_variation_tasks),
            "seed": self.seed,
            "max_level": self.device.max_level,
            "force_at_max": self.device.force_at_max,
        }


def _stream_key(seed: int, subject_id: int, session_id: int, task_id: int) -> int:
    msg = f"hwfatigue-synth-v1:{seed}:{subject_id}:{session_id}:{task_id}".encode("ascii")
    return int.from_bytes(hashlib.sha256(msg).digest()[:16], "little")


def _polyline(vertices: list[tuple[float, float]], t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Walk the vertex path at uniform parameter speed per segment."""
    vx = np.array([v[0] for v in vertices])
    vy = np.array([v[1] for v in vertices])
    pos = t * (len(vertices) - 1)
    idx = np.arange(len(vertices), dtype=np.float64)
    return np.interp(pos, idx, vx), np.interp(pos, idx, vy)


def _task_curve(task_id: int, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Schematic pen trajectory for a task family, in unit scale.

    These are visual stand-ins (polygon copies, spiral, loops, left-to-right
    writing); nothing downstream depends on their precise geometry.
    """
    if task_id == 1:  # pentagon copy
        angles = np.pi / 2 + 2 * np.pi * np.arange(6) / 5
        return _polyline(list(zip(np.cos(angles), np.sin(angles))), t)
    if task_id == 2:  # house copy
        vertices = [(-0.8, -1.0), (0.8, -1.0), (0.8, 0.2), (0.0, 1.0),
                    (-0.8, 0.2), (-0.8, -1.0), (0.8, 0.2)]
        return _polyline(vertices, t)
    if task_id == 3:  # Archimedes spiral
        theta = 6.0 * np.pi * t
        return t * np.cos(theta), t * np.sin(theta)
    if task_id in (4, 8):  # signature
        x = 2.0 * t - 1.0 + 0.05 * np.sin(2 * np.pi * 7 * t)
        y = 0.5 * np.sin(2 * np.pi * 2 * t) + 0.3 * np.sin(2 * np.pi * 5 * t + 1.3)
        return x, y
    if task_id == 5:  # concentric loops, radius stepping outward per turn
        turns = 5
        theta = 2.0 * np.pi * turns * t
        radius = 0.2 + 0.8 * np.floor(turns * np.minimum(t, 1.0 - 1e-12)) / (turns - 1)
        return radius * np.cos(theta), radius * np.sin(theta)
    if task_id == 6:  # words in capital letters
        x = 2.0 * t - 1.0
        y = 0.35 * np.sin(2 * np.pi * 12 * t)
        return x, y
    if task_id == 7:  # cursive sentence
        x = 2.0 * t - 1.0
        y = 0.3 * np.sin(2 * np.pi * 10 * t) + 0.1 * np.sin(2 * np.pi * 3 * t)
        return x, y
    if task_id == 9:  # spring drawing
        x = 2.0 * t - 1.0 + 0.15 * np.cos(2 * np.pi * 8 * t)
        y = 0.5 * np.sin(2 * np.pi * 8 * t)
        return x, y
    raise ValueError(f"task_id must be in 1..9, got {task_id}")


def generate_recording(config: SynthConfig, subject_id: int, session_id: int,
                       task_id: int) -> Recording:
    """Generate one recording, deterministic in (seed, subject, session, task)."""
    if not 1 <= subject_id <= config.n_subjects:
        raise ValueError(f"subject_id must be in 1..{config.n_subjects}, got {subject_id}")
    if session_id not in SESSIONS:
        raise ValueError(f"session_id must be in 1..5, got {session_id}")
    if task_id not in TASKS:
        raise ValueError(f"task_id must be in 1..9, got {task_id}")

    n = config.samples_per_recording
    device = config.device
    rng = np.random.Generator(np.random.Philox(
        key=_stream_key(config.seed, subject_id, session_id, task_id)))

    p_sat = config.saturation_probability(session_id, task_id)
    saturated = rng.random(n) < p_sat
    base = np.rint(rng.normal(_PRESSURE_MEAN, _PRESSURE_SD, n))
    base = np.clip(base, 1, device.max_level - 1).astype(np.int64)
    pressure = np.where(saturated, device.max_level, base)

    t = np.linspace(0.0, 1.0, n)
    cx, cy = _task_curve(task_id, t)
    x = np.rint(_COORD_CENTER[0] + _COORD_SCALE * cx
                + rng.normal(0.0, _COORD_NOISE_SD, n)).astype(np.int64)
    y = np.rint(_COORD_CENTER[1] + _COORD_SCALE * cy
                + rng.normal(0.0, _COORD_NOISE_SD, n)).astype(np.int64)

    azimuth = np.clip(np.rint(_AZIMUTH_BASE + rng.normal(0.0, _AZIMUTH_SD, n)),
                      0, 3599).astype(np.int64)
    altitude = np.clip(np.rint(_ALTITUDE_BASE + rng.normal(0.0, _ALTITUDE_SD, n)),
                       300, 900).astype(np.int64)
    timestamps = np.arange(n, dtype=np.int64) * _TIMESTAMP_STEP_MS
    pen_status = np.ones(n, dtype=np.int64)

    samples = np.column_stack([x, y, timestamps, pen_status, azimuth, altitude, pressure])
    return Recording(subject_id, session_id, task_id, samples, device)


def generate_dataset(config: SynthConfig) -> Dataset:
    """Generate the full n_subjects x 5 sessions x 9 tasks dataset."""
    dataset = Dataset()
    for subject_id in range(1, config.n_subjects + 1):
        for session_id in SESSIONS:
            for task_id in TASKS:
                dataset.add(generate_recording(config, subject_id, session_id, task_id))
    return dataset
