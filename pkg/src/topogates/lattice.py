"""Dual-rail lattice register driven by braiding moves and hopping pulses.

Each qubit is one particle shared between an ``a`` site (logical 0) and a
``b`` site (logical 1), plus a fixed ancilla of the opposite particle type.
Even qubits carry ``X`` particles, odd qubits ``Y`` particles. Moving a
particle once counterclockwise around an obstacle multiplies the amplitude by
``exp(i * phi0 * sign(mover, obstacle))``; the phase only depends on winding
numbers, so every move is a diagonal operator.

Obstacles are the ancillae (always occupied) plus whichever rail of every
other qubit is occupied in the basis state at hand.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence, Union

import numpy as np

from . import statevec
from .errors import (
    ClearanceViolation,
    IncommensuratePhase,
    LayoutInfeasible,
    SameQubit,
)
from .gates import rx
from .geometry import ClosedPath2D, path_clearance, segment_distances, winding_vector


class ParticleType(str, Enum):
    X = "X"
    Y = "Y"

    @property
    def partner(self) -> "ParticleType":
        return ParticleType.Y if self is ParticleType.X else ParticleType.X


X, Y = ParticleType.X, ParticleType.Y


@dataclass(frozen=True)
class PhaseRule:
    """Base phase and the sign each (mover, obstacle) type pair contributes."""

    base_phase: float
    signs: dict = field(default_factory=lambda: {(X, X): 0, (X, Y): 1, (Y, X): -1, (Y, Y): 0})

    def __post_init__(self):
        if not math.isfinite(self.base_phase):
            raise ValueError("base phase must be finite")
        signs = {(ParticleType(m), ParticleType(o)): int(s) for (m, o), s in self.signs.items()}
        if set(signs) != {(X, X), (X, Y), (Y, X), (Y, Y)}:
            raise ValueError("phase rule needs a sign for all four type pairs")
        if any(s not in (-1, 0, 1) for s in signs.values()):
            raise ValueError("pair signs must be -1, 0 or +1")
        if signs[X, X] not in (0, 1) or signs[Y, Y] not in (0, 1):
            raise ValueError("same-type signs must be 0 or +1")
        xy, yx = signs[X, Y], signs[Y, X]
        if xy and yx and xy != -yx and not self._all_plus(signs):
            raise ValueError("cross signs must be antisymmetric unless every sign is +1")
        object.__setattr__(self, "signs", signs)

    @staticmethod
    def _all_plus(signs) -> bool:
        return all(s == 1 for s in signs.values())

    @classmethod
    def charge_dipole(cls, phi0: float) -> "PhaseRule":
        """Charge around dipole: X-Y gives +1, Y-X gives -1, same types nothing."""
        return cls(phi0)

    @classmethod
    def anyon(cls, phi0: float) -> "PhaseRule":
        """Identical abelian anyons: every pair picks up the same phase."""
        return cls(phi0, {(X, X): 1, (X, Y): 1, (Y, X): 1, (Y, Y): 1})

    @property
    def is_anyon(self) -> bool:
        return self._all_plus(self.signs)

    def sign(self, mover: ParticleType, obstacle: ParticleType) -> int:
        return self.signs[mover, obstacle]

    def as_dict(self) -> dict:
        return {
            "base_phase": self.base_phase,
            "signs": {f"{m.value}{o.value}": s for (m, o), s in self.signs.items()},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PhaseRule":
        return cls(data["base_phase"], {(k[0], k[1]): v for k, v in data["signs"].items()})


@dataclass(frozen=True, eq=False)
class QubitSites:
    a: np.ndarray
    b: np.ndarray
    ancilla: np.ndarray

    def __post_init__(self):
        for name in ("a", "b", "ancilla"):
            p = np.array(getattr(self, name), dtype=float).reshape(2)
            if not np.all(np.isfinite(p)):
                raise ValueError(f"site {name} must be finite")
            p.setflags(write=False)
            object.__setattr__(self, name, p)


@dataclass(frozen=True, eq=False)
class LatticeRegister:
    qubits: tuple
    rule: PhaseRule
    clearance: float = 0.25

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(self.qubits))
        if not self.qubits:
            raise ValueError("register needs at least one qubit")
        if self.clearance <= 0:
            raise ValueError("clearance must be positive")
        pts = self.site_points()
        d = np.linalg.norm(pts[:, None] - pts[None, :], axis=-1)
        np.fill_diagonal(d, np.inf)
        if d.min() <= 2 * self.clearance:
            i, j = np.unravel_index(np.argmin(d), d.shape)
            raise ValueError(f"sites {self.site_label(i)} and {self.site_label(j)} are closer than 2*clearance")

    @classmethod
    def row(cls, n_qubits: int, rule: PhaseRule, spacing: float = 4.0, ancilla_offset: float = -2.0,
            rail_offset: float = 1.0, clearance: float = 0.25) -> "LatticeRegister":
        """Qubits on the x axis: ``a`` above, ``b`` below, ancilla further below."""
        qubits = [
            QubitSites((spacing * i, rail_offset), (spacing * i, -rail_offset), (spacing * i, ancilla_offset))
            for i in range(n_qubits)
        ]
        return cls(tuple(qubits), rule, clearance)

    @property
    def n_qubits(self) -> int:
        return len(self.qubits)

    @property
    def phi0(self) -> float:
        return self.rule.base_phase

    def qubit_type(self, q: int) -> ParticleType:
        return X if q % 2 == 0 else Y

    # Sites are indexed 3*q + {0: a, 1: b, 2: ancilla}.
    def site_points(self) -> np.ndarray:
        return np.array([p for s in self.qubits for p in (s.a, s.b, s.ancilla)])

    def site_index(self, qubit: int, site: str) -> int:
        return 3 * qubit + {"a": 0, "b": 1, "ancilla": 2}[site]

    def site_label(self, index: int) -> str:
        q, k = divmod(int(index), 3)
        return f"q{q}.{('a', 'b', 'ancilla')[k]}"

    def site_type(self, index: int) -> ParticleType:
        q, k = divmod(index, 3)
        t = self.qubit_type(q)
        return t.partner if k == 2 else t

    def as_dict(self) -> dict:
        return {
            "rule": self.rule.as_dict(),
            "clearance": self.clearance,
            "qubits": [{"a": s.a.tolist(), "b": s.b.tolist(), "ancilla": s.ancilla.tolist()} for s in self.qubits],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LatticeRegister":
        qubits = tuple(QubitSites(q["a"], q["b"], q["ancilla"]) for q in data["qubits"])
        return cls(qubits, PhaseRule.from_dict(data["rule"]), data.get("clearance", 0.25))


@dataclass(frozen=True)
class MoveInstruction:
    """Carry whatever sits at ``site`` of ``qubit`` around ``path`` and back."""

    qubit: int
    site: str
    path: ClosedPath2D

    def __post_init__(self):
        if self.site not in ("a", "b"):
            raise ValueError(f"site must be 'a' or 'b', got {self.site!r}")


@dataclass(frozen=True)
class HoppingPulse:
    """Tunnelling between the two rails; ``theta`` is minus the integrated rate."""

    qubit: int
    theta: float

    def __post_init__(self):
        if not math.isfinite(self.theta):
            raise ValueError("hopping angle must be finite")


Instruction = Union[MoveInstruction, HoppingPulse]


def _check_move(reg: LatticeRegister, mv: MoveInstruction) -> int:
    statevec.check_qubit(mv.qubit, reg.n_qubits)
    start = reg.site_index(mv.qubit, mv.site)
    pts = reg.site_points()
    if np.linalg.norm(mv.path.vertices[0] - pts[start]) > 1e-9:
        raise ClearanceViolation(f"move path must start at {reg.site_label(start)}")
    others = np.delete(np.arange(len(pts)), start)
    dist = segment_distances(pts[others], mv.path).min(axis=1)
    bad = np.nonzero(dist <= reg.clearance)[0]
    if bad.size:
        k = others[bad[0]]
        raise ClearanceViolation(
            f"path passes within {dist[bad[0]]:.3g} of {reg.site_label(k)} (clearance {reg.clearance})"
        )
    return start


def move_windings(reg: LatticeRegister, mv: MoveInstruction) -> dict[int, int]:
    """Winding of the move path around every site except the moved one."""
    start = _check_move(reg, mv)
    pts = reg.site_points()
    others = [k for k in range(len(pts)) if k != start]
    return dict(zip(others, winding_vector(mv.path, pts[others])))


def move_phases(reg: LatticeRegister, mv: MoveInstruction) -> np.ndarray:
    """Diagonal of the move operator over the ``2**n`` basis states."""
    wind = move_windings(reg, mv)
    n, q = reg.n_qubits, mv.qubit
    mover = reg.qubit_type(q)
    rule = reg.rule
    phase = np.zeros(1 << n)
    for k in range(n):
        phase += rule.sign(mover, reg.site_type(3 * k + 2)) * wind.get(3 * k + 2, 0)
    for k in range(n):
        if k == q:
            continue
        s = rule.sign(mover, reg.qubit_type(k))
        on_b = statevec.bits(n, k)
        phase += s * np.where(on_b, wind[3 * k + 1], wind[3 * k])
    occupied = statevec.bits(n, q) == (1 if mv.site == "b" else 0)
    return np.where(occupied, np.exp(1j * rule.base_phase * phase), 1.0 + 0j)


def apply_move(state: np.ndarray, reg: LatticeRegister, mv: MoveInstruction) -> np.ndarray:
    if state.shape[0] != 1 << reg.n_qubits:
        raise ValueError(f"state length {state.shape[0]} does not match {reg.n_qubits} qubits")
    return statevec.apply_diagonal(state, move_phases(reg, mv))


def apply_hopping(state: np.ndarray, pulse: HoppingPulse) -> np.ndarray:
    """Hopping between the rails acts as ``Rx(theta)`` on the qubit."""
    return statevec.apply_1q(state, rx(pulse.theta), pulse.qubit)


def apply_instruction(state: np.ndarray, reg: LatticeRegister, instr: Instruction) -> np.ndarray:
    if isinstance(instr, MoveInstruction):
        return apply_move(state, reg, instr)
    statevec.check_qubit(instr.qubit, reg.n_qubits)
    return apply_hopping(state, instr)


def program_unitary(reg: LatticeRegister, program: Iterable[Instruction]) -> np.ndarray:
    # the identity's columns are the basis states; carry them all at once
    u = np.eye(1 << reg.n_qubits, dtype=complex)
    for instr in program:
        u = apply_instruction(u, reg, instr)
    return u


def is_dynamical(program: Sequence[Instruction]) -> bool:
    return any(isinstance(i, HoppingPulse) for i in program)


def _wrap(angle: float) -> float:
    return math.remainder(angle, 2.0 * math.pi)


def find_multiple(target: float, phi0: float, n_max: int, allow_zero: bool = False,
                  tol: float = 1e-9) -> int:
    """Smallest integer ``n`` with ``n * phi0 == target (mod 2 pi)``.

    Positive multiples are tried before negative ones.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    candidates = list(range(1, n_max + 1)) + list(range(-1, -n_max - 1, -1))
    if allow_zero:
        candidates.insert(0, 0)
    for n in candidates:
        if abs(_wrap(n * phi0 - target)) <= tol:
            return n
    raise IncommensuratePhase(
        f"no multiple n*phi0 with |n| <= {n_max} equals {target:.6g} mod 2pi (phi0 = {phi0:.6g})"
    )


def _dedupe(points: list) -> list:
    out = [points[0]]
    for p in points[1:]:
        if np.linalg.norm(np.subtract(p, out[-1])) > 1e-12:
            out.append(p)
    return out


def _corridors(values: np.ndarray, margin: float) -> list[float]:
    v = np.unique(np.round(values, 12))
    mids = 0.5 * (v[:-1] + v[1:])
    return [float(x) for x in np.concatenate([mids, [v[0] - margin, v[-1] + margin]])]


def _lasso(reg: LatticeRegister, start: int, target: int, winding: int) -> ClosedPath2D:
    """Loop from ``start`` that winds ``winding`` times around ``target`` only."""
    pts = reg.site_points()
    s, t = pts[start], pts[target]
    others = [k for k in range(len(pts)) if k != start]
    expected = [winding if k == target else 0 for k in others]
    near = np.delete(np.linalg.norm(pts - t, axis=1), target).min()
    margin = max(1.0, 4 * reg.clearance)
    ys = _corridors(pts[:, 1], margin)
    xs = _corridors(pts[:, 0], margin)
    ccw = np.array([(1, -1), (1, 1), (-1, 1), (-1, -1)], dtype=float)
    for frac in (0.5, 0.4, 0.6, 0.3, 0.7):
        h = frac * near
        if h <= reg.clearance:
            continue
        square = t + h * ccw
        for c in range(4):
            order = [square[(c + k) % 4] for k in range(4)]
            if winding < 0:
                order = [order[0]] + order[:0:-1]
            corner = order[0]
            routes = [[], [(corner[0], s[1])], [(s[0], corner[1])]]
            routes += [[(s[0], y), (corner[0], y)] for y in ys]
            routes += [[(x, s[1]), (x, corner[1])] for x in xs]
            for route in routes:
                loop = (order[1:] + [corner]) * abs(winding)
                verts = _dedupe([s, *route, corner, *loop, *route[::-1]])
                if np.linalg.norm(np.subtract(verts[-1], s)) <= 1e-12:
                    verts = verts[:-1]
                if len(verts) < 3:
                    continue
                path = ClosedPath2D(verts)
                if not path_clearance(path, pts[others], reg.clearance):
                    continue
                if winding_vector(path, pts[others]) == expected:
                    return path
    raise LayoutInfeasible(
        f"no clear loop from {reg.site_label(start)} around {reg.site_label(target)}"
    )


def compile_p(reg: LatticeRegister, qubit: int, n: int) -> MoveInstruction:
    """Move realising ``P(n * phi0)`` up to a global phase.

    The ``a``-site content circles the qubit's own ancilla; the phase lands on
    the ``|0>`` branch, i.e. ``diag(e^{-i n phi0}, 1) = e^{-i n phi0} P(n phi0)``.
    """
    statevec.check_qubit(qubit, reg.n_qubits)
    if n == 0:
        raise ValueError("phase gate multiple must be nonzero")
    s = reg.rule.sign(reg.qubit_type(qubit), reg.qubit_type(qubit).partner)
    if s == 0:
        raise LayoutInfeasible("phase rule gives no phase between a qubit and its ancilla")
    start = reg.site_index(qubit, "a")
    path = _lasso(reg, start, reg.site_index(qubit, "ancilla"), -n * s)
    return MoveInstruction(qubit, "a", path)


def compile_c(reg: LatticeRegister, qubit_i: int, qubit_j: int, n: int) -> MoveInstruction:
    """Move ``qubit_i``'s ``b`` content around ``qubit_j``'s ``b`` site: exactly ``C(n * phi0)``."""
    statevec.check_qubit(qubit_i, reg.n_qubits)
    statevec.check_qubit(qubit_j, reg.n_qubits)
    if qubit_i == qubit_j:
        raise SameQubit("controlled phase needs two distinct qubits")
    if n == 0:
        raise ValueError("controlled phase multiple must be nonzero")
    s = reg.rule.sign(reg.qubit_type(qubit_i), reg.qubit_type(qubit_j))
    if s == 0:
        raise LayoutInfeasible(
            f"phase rule gives no phase between {reg.qubit_type(qubit_i).value} and "
            f"{reg.qubit_type(qubit_j).value} particles"
        )
    path = _lasso(reg, reg.site_index(qubit_i, "b"), reg.site_index(qubit_j, "b"), n * s)
    return MoveInstruction(qubit_i, "b", path)


def compile_hadamard(reg: LatticeRegister, qubit: int, n_max: int) -> list[Instruction]:
    """``H = P(-pi/2) Rx(pi/4) P(-pi/2)`` with the phase gates done by braiding.

    The hopping pulse in the middle is a dynamical gate.
    """
    n = find_multiple(-0.5 * math.pi, reg.phi0, n_max)
    p = compile_p(reg, qubit, n)
    return [p, HoppingPulse(qubit, 0.25 * math.pi), p]


def instruction_to_dict(instr: Instruction) -> dict:
    if isinstance(instr, MoveInstruction):
        return {"move": {"qubit": instr.qubit, "site": instr.site, "path": instr.path.vertices.tolist()}}
    return {"hop": {"qubit": instr.qubit, "theta": instr.theta}}


def instruction_from_dict(data: dict) -> Instruction:
    if set(data) == {"move"}:
        m = data["move"]
        return MoveInstruction(int(m["qubit"]), m["site"], ClosedPath2D(m["path"]))
    if set(data) == {"hop"}:
        h = data["hop"]
        return HoppingPulse(int(h["qubit"]), float(h["theta"]))
    raise ValueError(f"unknown instruction {sorted(data)}")


def program_to_json(program: Sequence[Instruction]) -> str:
    return json.dumps([instruction_to_dict(i) for i in program])


def program_from_json(text: str) -> list[Instruction]:
    return [instruction_from_dict(d) for d in json.loads(text)]
