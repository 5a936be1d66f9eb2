"""Spin rotations from motion through static electric fields.

A spin carried along a straight displacement ``dl`` inside a uniform field
``E`` picks up ``exp(i * kappa * sigma . (E x dl))``. Units have
``hbar = c = 1`` and the spin-orbit prefactor is folded into ``kappa``. The
rotation only depends on ``E x dl``: the speed profile along the segment
never enters, and neither does the split between field strength and length.

Two layouts are supported:

* ``FLYING``: the spin travels along ``+x`` in a wire; fields along ``y``
  give z rotations, fields along ``z`` give y rotations.
* ``STATIC``: the field is always along ``x``; moving along ``y`` gives z
  rotations and moving along ``z`` gives y rotations.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ArchitectureViolation, ZeroCoupling
from .gates import I2, SIGMA_X, SIGMA_Y, SIGMA_Z, euler_zyz

_AXIS_TOL = 1e-12
_ANGLE_EPS = 1e-15


class Architecture(str, Enum):
    FLYING = "flying"
    STATIC = "static"


@dataclass(frozen=True, eq=False)
class SpinSegment:
    dl: np.ndarray
    E: np.ndarray

    def __post_init__(self):
        for name in ("dl", "E"):
            v = np.array(getattr(self, name), dtype=float).reshape(3)
            if not np.all(np.isfinite(v)):
                raise ValueError(f"segment {name} must be finite")
            v.setflags(write=False)
            object.__setattr__(self, name, v)
        if not np.linalg.norm(self.dl) > 0:
            raise ValueError("segment displacement must be nonzero")

    def split(self, fractions) -> list["SpinSegment"]:
        """Cut into consecutive pieces with the given positive length fractions."""
        f = np.asarray(fractions, dtype=float)
        if np.any(f <= 0):
            raise ValueError("fractions must be positive")
        f = f / f.sum()
        return [SpinSegment(w * self.dl, self.E) for w in f]


@dataclass(frozen=True)
class SpinProgram:
    segments: tuple = ()
    arch: Architecture = Architecture.FLYING
    kappa: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        object.__setattr__(self, "arch", Architecture(self.arch))
        if not math.isfinite(self.kappa):
            raise ValueError("kappa must be finite")

    def as_dict(self) -> dict:
        return {
            "arch": self.arch.value,
            "kappa": self.kappa,
            "segments": [{"dl": s.dl.tolist(), "E": s.E.tolist()} for s in self.segments],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SpinProgram":
        segs = [SpinSegment(s["dl"], s["E"]) for s in data["segments"]]
        return cls(tuple(segs), Architecture(data["arch"]), float(data["kappa"]))

    def to_json(self) -> str:
        return json.dumps(self.as_dict())

    @classmethod
    def from_json(cls, text: str) -> "SpinProgram":
        return cls.from_dict(json.loads(text))


def segment_rotation(seg: SpinSegment, kappa: float = 1.0) -> np.ndarray:
    """``cos(a) I + i sin(a) sigma.n`` with ``a = kappa |E x dl|``, ``n = unit(E x dl)``."""
    v = np.cross(seg.E, seg.dl)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        return I2.copy()
    n = v / norm
    a = kappa * norm
    return math.cos(a) * I2 + 1j * math.sin(a) * (n[0] * SIGMA_X + n[1] * SIGMA_Y + n[2] * SIGMA_Z)


def _off_axis(v: np.ndarray, keep: tuple[int, ...]) -> float:
    drop = [k for k in range(3) if k not in keep]
    return float(np.abs(v[drop]).max())


def check_architecture(prog: SpinProgram) -> None:
    for i, seg in enumerate(prog.segments):
        scale = _AXIS_TOL * max(np.abs(seg.dl).max(), 1.0)
        escale = _AXIS_TOL * max(np.abs(seg.E).max(), 1.0)
        if prog.arch is Architecture.FLYING:
            ok = _off_axis(seg.dl, (0,)) <= scale and seg.dl[0] > 0 and abs(seg.E[0]) <= escale
            rule = "dl along +x and E in the y-z plane"
        else:
            ok = _off_axis(seg.E, (0,)) <= escale and abs(seg.dl[0]) <= scale
            rule = "E along x and dl in the y-z plane"
        if not ok:
            raise ArchitectureViolation(f"segment {i} breaks the {prog.arch.value} layout ({rule})")


def holonomy(prog: SpinProgram) -> np.ndarray:
    """Path-ordered product, first segment applied first."""
    check_architecture(prog)
    u = I2.copy()
    for seg in prog.segments:
        u = segment_rotation(seg, prog.kappa) @ u
    return u


def _z_segment(angle, arch, kappa, field_strength, length) -> SpinSegment:
    if arch is Architecture.FLYING:
        # E = (0, Ey, 0), dl = (L, 0, 0): E x dl = (0, 0, -Ey L)
        return SpinSegment((length, 0, 0), (0, -angle / (kappa * length), 0))
    # E = (Ex, 0, 0), dl = (0, dy, 0): E x dl = (0, 0, Ex dy)
    return SpinSegment((0, angle / (kappa * field_strength), 0), (field_strength, 0, 0))


def _y_segment(angle, arch, kappa, field_strength, length) -> SpinSegment:
    if arch is Architecture.FLYING:
        # E = (0, 0, Ez), dl = (L, 0, 0): E x dl = (0, Ez L, 0)
        return SpinSegment((length, 0, 0), (0, 0, angle / (kappa * length)))
    # E = (Ex, 0, 0), dl = (0, 0, dz): E x dl = (0, -Ex dz, 0)
    return SpinSegment((0, 0, -angle / (kappa * field_strength)), (field_strength, 0, 0))


def compile_su2(target, arch: Architecture | str, kappa: float, field_strength: float = 1.0,
                length: float = 1.0) -> SpinProgram:
    """Segments whose holonomy equals ``target`` up to a global phase.

    ``target`` is split as ``Rz(alpha) Ry(theta) Rz(beta)`` and realised as
    ``Rz(beta)``, then ``Ry(theta)``, then ``Rz(alpha)``; zero angles are
    dropped. ``length`` is the gate length in the flying layout and
    ``field_strength`` the fixed ``E_x`` in the static layout.
    """
    arch = Architecture(arch)
    if kappa == 0 or not math.isfinite(kappa):
        raise ZeroCoupling("spin-orbit coupling kappa must be nonzero and finite")
    if not (field_strength > 0 and length > 0):
        raise ValueError("field strength and gate length must be positive")
    angles = euler_zyz(target)
    steps = [(_z_segment, angles.beta), (_y_segment, angles.theta), (_z_segment, angles.alpha)]
    segments = [make(a, arch, kappa, field_strength, length) for make, a in steps if abs(a) > _ANGLE_EPS]
    return SpinProgram(tuple(segments), arch, kappa)


@dataclass(frozen=True)
class ACLineSpec:
    mu: float
    lam: float
    n: int = field(default=1)

    def __post_init__(self):
        if int(self.n) != self.n:
            raise ValueError("homotopy class n must be an integer")


def ac_line_phase(spec: ACLineSpec) -> float:
    """Phase of a moment circling a line charge ``n`` times: ``4 pi n mu lambda``."""
    return 4.0 * math.pi * spec.n * spec.mu * spec.lam
