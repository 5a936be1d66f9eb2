"""Named gates, composition, phase-insensitive comparison and ZYZ angles.

Rotation convention: ``R_a(theta) = exp(i * theta * sigma_a)``. There is no
half angle and the sign of the exponent is positive, so ``Rx(pi/2) = i*X``
and ``Rz(theta) = diag(e^{i theta}, e^{-i theta})``.
"""
from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, NotUnitary

UNITARY_ATOL = 1e-12

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}


def check_unitary(matrix, atol: float = UNITARY_ATOL) -> np.ndarray:
    """Return ``matrix`` as a complex array after checking it is unitary."""
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotUnitary(f"unitary must be square, got shape {m.shape}")
    d = m.shape[0]
    if d < 1 or d & (d - 1):
        raise NotUnitary(f"dimension {d} is not a power of two")
    if not np.all(np.isfinite(m)):
        raise NotUnitary("matrix has non-finite entries")
    err = np.abs(m @ m.conj().T - np.eye(d)).max()
    if err > atol:
        raise NotUnitary(f"U U^dagger deviates from identity by {err:.3g}")
    return m


def phase(phi: float) -> np.ndarray:
    return np.diag([1.0, cmath.exp(1j * phi)])


def hadamard() -> np.ndarray:
    return np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0)


def cphase(phi: float) -> np.ndarray:
    return np.diag([1.0, 1.0, 1.0, cmath.exp(1j * phi)])


def rotation(axis: str, theta: float) -> np.ndarray:
    """``cos(theta) I + i sin(theta) sigma_axis``."""
    return math.cos(theta) * I2 + 1j * math.sin(theta) * PAULI[axis.lower()]


def rx(theta: float) -> np.ndarray:
    return rotation("x", theta)


def ry(theta: float) -> np.ndarray:
    return rotation("y", theta)


def rz(theta: float) -> np.ndarray:
    return rotation("z", theta)


GATE_KINDS = ("H", "P", "C", "Rx", "Ry", "Rz")
_BUILDERS = {"P": phase, "C": cphase, "Rx": rx, "Ry": ry, "Rz": rz}


def make_gate(kind: str, angle: float | None = None) -> np.ndarray:
    """Matrix for one of ``H``, ``P``, ``C``, ``Rx``, ``Ry``, ``Rz``.

    ``P`` and ``C`` take the phase, rotations take ``theta``; ``H`` takes none.
    """
    if kind == "H":
        if angle is not None:
            raise ValueError("H takes no angle")
        return hadamard()
    if kind not in _BUILDERS:
        raise ValueError(f"unknown gate kind {kind!r}")
    if angle is None or not math.isfinite(angle):
        raise ValueError(f"{kind} needs a finite angle")
    return _BUILDERS[kind](float(angle))


def compose(gates: Sequence[np.ndarray]) -> np.ndarray:
    """Product of ``gates`` with the first one applied first."""
    if not gates:
        raise ValueError("compose needs at least one gate")
    result = np.asarray(gates[0], dtype=complex)
    for g in gates[1:]:
        g = np.asarray(g, dtype=complex)
        if g.shape != result.shape:
            raise DimensionMismatch(f"cannot compose {result.shape} with {g.shape}")
        result = g @ result
    return result


def global_phase_factor(u, v) -> complex:
    """Unit ``c`` making ``c * v`` closest to ``u`` at v's largest entry."""
    k = np.unravel_index(np.argmax(np.abs(v)), v.shape)
    ratio = u[k] / v[k]
    return ratio / abs(ratio) if abs(ratio) > 0 else 1.0 + 0j


def phase_distance(u, v) -> float:
    """Max-entry distance between ``u`` and the phase-aligned ``v``."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != v.shape:
        raise DimensionMismatch(f"cannot compare {u.shape} with {v.shape}")
    return float(np.abs(u - global_phase_factor(u, v) * v).max())


def equal_up_to_phase(u, v, tol: float) -> bool:
    if tol <= 0:
        raise ValueError("tol must be positive")
    return phase_distance(u, v) <= tol


@dataclass(frozen=True)
class EulerZYZ:
    """``U = e^{i delta} Rz(alpha) Ry(theta) Rz(beta)`` with ``0 <= theta <= pi/2``."""

    alpha: float
    theta: float
    beta: float
    delta: float

    def matrix(self) -> np.ndarray:
        return cmath.exp(1j * self.delta) * (rz(self.alpha) @ ry(self.theta) @ rz(self.beta))

    def as_dict(self) -> dict:
        return {"alpha": self.alpha, "theta": self.theta, "beta": self.beta, "delta": self.delta}


_HALF_PI = 0.5 * math.pi
_EDGE = 1e-12
_AXIS_EPS = 1e-14


def _wrap_half(angle: float, delta: float) -> tuple[float, float]:
    # Rz(a + pi) = -Rz(a), so each pi shift of an Rz angle moves delta by pi
    while angle <= -_HALF_PI + _EDGE:
        angle += math.pi
        delta += math.pi
    while angle > _HALF_PI + _EDGE:
        angle -= math.pi
        delta -= math.pi
    return angle, delta


def _wrap_pi(angle: float) -> float:
    wrapped = math.remainder(angle, 2.0 * math.pi)
    if wrapped <= -math.pi + _EDGE:
        wrapped += 2.0 * math.pi
    return wrapped


def euler_zyz(u) -> EulerZYZ:
    """Decompose a 2x2 unitary into ZYZ angles plus a global phase.

    Canonical branch: ``theta`` in ``[0, pi/2]``, ``alpha`` and ``beta`` in
    ``(-pi/2, pi/2]``, ``delta`` in ``(-pi, pi]``. When ``theta`` is 0 or
    ``pi/2`` only one combination of ``alpha`` and ``beta`` is fixed and
    ``beta`` is set to 0.
    """
    m = check_unitary(u, atol=1e-10)
    if m.shape != (2, 2):
        raise DimensionMismatch(f"euler_zyz needs a 2x2 unitary, got {m.shape}")
    delta = 0.5 * cmath.phase(np.linalg.det(m))
    v = cmath.exp(-1j * delta) * m
    c, s = abs(v[0, 0]), abs(v[0, 1])
    theta = math.atan2(s, c)
    if s <= _AXIS_EPS:
        theta, alpha, beta = 0.0, cmath.phase(v[0, 0]), 0.0
    elif c <= _AXIS_EPS:
        theta, alpha, beta = _HALF_PI, cmath.phase(v[0, 1]), 0.0
    else:
        plus, minus = cmath.phase(v[0, 0]), cmath.phase(v[0, 1])
        alpha, beta = 0.5 * (plus + minus), 0.5 * (plus - minus)
    alpha, delta = _wrap_half(alpha, delta)
    beta, delta = _wrap_half(beta, delta)
    return EulerZYZ(alpha, theta, beta, _wrap_pi(delta))


def unitary_to_json(u) -> str:
    m = np.asarray(u, dtype=complex)
    entries = [[[z.real, z.imag] for z in row] for row in m]
    return json.dumps({"dim": m.shape[0], "entries": entries})


def unitary_from_json(text: str) -> np.ndarray:
    data = json.loads(text)
    m = np.array([[complex(re, im) for re, im in row] for row in data["entries"]])
    if m.shape != (data["dim"], data["dim"]):
        raise DimensionMismatch(f"declared dim {data['dim']} but entries have shape {m.shape}")
    return check_unitary(m, atol=1e-9)
