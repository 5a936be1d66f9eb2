"""Backend-independent circuits, their simulation, and compilation to hardware.

Basis ordering is little-endian throughout: qubit 0 is the least significant
bit and basis labels read ``"q_{n-1}...q_0"``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence, Union

import numpy as np

from . import lattice, statevec
from .errors import DimensionMismatch, TooLarge, UnsupportedGate
from .gates import make_gate, phase_distance
from .spinline import Architecture, SpinProgram, compile_su2, holonomy

MAX_UNITARY_QUBITS = 12
MAX_VERIFY_QUBITS = 8


@dataclass(frozen=True)
class GateInstr:
    kind: str
    targets: tuple
    angle: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        make_gate(self.kind, self.angle)  # validates kind and angle
        want = 2 if self.kind == "C" else 1
        if len(self.targets) != want:
            raise ValueError(f"{self.kind} acts on {want} qubit(s), got targets {self.targets}")
        if len(set(self.targets)) != len(self.targets):
            raise ValueError(f"targets {self.targets} must be distinct")

    @property
    def label(self) -> str:
        angle = "" if self.angle is None else f"({self.angle:.6g})"
        return f"{self.kind}{angle} q{','.join(map(str, self.targets))}"


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    instrs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "instrs", tuple(self.instrs))
        if self.n_qubits < 1:
            raise ValueError("circuit needs at least one qubit")
        for g in self.instrs:
            for t in g.targets:
                statevec.check_qubit(t, self.n_qubits)

    def to_dict(self) -> dict:
        gates = []
        for g in self.instrs:
            d = {"kind": g.kind, "targets": list(g.targets)}
            if g.angle is not None:
                d["phi" if g.kind in ("P", "C") else "theta"] = g.angle
            gates.append(d)
        return {"qubits": self.n_qubits, "gates": gates}

    @classmethod
    def from_dict(cls, data: dict) -> "Circuit":
        instrs = []
        for g in data["gates"]:
            angle = g.get("phi", g.get("theta"))
            instrs.append(GateInstr(g["kind"], tuple(g["targets"]), None if angle is None else float(angle)))
        return cls(int(data["qubits"]), tuple(instrs))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "Circuit":
        return cls.from_dict(json.loads(text))


def apply_gate(state: np.ndarray, g: GateInstr) -> np.ndarray:
    m = make_gate(g.kind, g.angle)
    if g.kind == "C":
        n = statevec.n_qubits_of(state.shape[0])
        both = statevec.bits(n, g.targets[0]) & statevec.bits(n, g.targets[1])
        return statevec.apply_diagonal(state, np.where(both, m[3, 3], 1.0 + 0j))
    return statevec.apply_1q(state, m, g.targets[0])


def simulate(c: Circuit, initial: Union[str, int, Sequence[complex], None] = None) -> np.ndarray:
    """Run ``c`` on a basis label, basis index or state vector (default ``|0...0>``)."""
    dim = 1 << c.n_qubits
    if initial is None:
        psi = statevec.basis_state(c.n_qubits)
    elif isinstance(initial, str):
        psi = statevec.basis_state(c.n_qubits, statevec.parse_bitstring(initial, c.n_qubits))
    elif isinstance(initial, (int, np.integer)):
        if not 0 <= initial < dim:
            raise DimensionMismatch(f"basis index {initial} out of range for {c.n_qubits} qubits")
        psi = statevec.basis_state(c.n_qubits, int(initial))
    else:
        psi = np.array(initial, dtype=complex)
        if psi.shape != (dim,):
            raise DimensionMismatch(f"initial state has shape {psi.shape}, expected ({dim},)")
        if abs(np.linalg.norm(psi) - 1.0) > 1e-10:
            raise ValueError("initial state must be normalized")
    for g in c.instrs:
        psi = apply_gate(psi, g)
    return psi


def circuit_unitary(c: Circuit) -> np.ndarray:
    if c.n_qubits > MAX_UNITARY_QUBITS:
        raise TooLarge(f"{c.n_qubits} qubits exceeds the {MAX_UNITARY_QUBITS}-qubit unitary limit")
    u = np.eye(1 << c.n_qubits, dtype=complex)
    for g in c.instrs:
        u = apply_gate(u, g)
    return u


class Tag(str, Enum):
    TOPOLOGICAL_AB = "TOPOLOGICAL(AB)"
    TOPOLOGICAL_AC = "TOPOLOGICAL(AC)"
    DYNAMICAL = "DYNAMICAL"
    UNSUPPORTED = "UNSUPPORTED"


# Which mechanism realises each gate kind on each backend.
CAPABILITIES = {
    "lattice": {
        "H": Tag.DYNAMICAL,
        "P": Tag.TOPOLOGICAL_AB,
        "C": Tag.TOPOLOGICAL_AB,
        "Rx": Tag.DYNAMICAL,
        "Ry": Tag.UNSUPPORTED,
        "Rz": Tag.UNSUPPORTED,
    },
    "spin": {
        "H": Tag.TOPOLOGICAL_AC,
        "P": Tag.TOPOLOGICAL_AC,
        "C": Tag.UNSUPPORTED,
        "Rx": Tag.TOPOLOGICAL_AC,
        "Ry": Tag.TOPOLOGICAL_AC,
        "Rz": Tag.TOPOLOGICAL_AC,
    },
}


@dataclass(frozen=True, eq=False)
class LatticeBackend:
    register: lattice.LatticeRegister
    n_max: int = 16
    name = "lattice"


@dataclass(frozen=True)
class SpinBackend:
    kappa: float = 1.0
    arch: Architecture = Architecture.FLYING
    field_strength: float = 1.0
    length: float = 1.0
    name = "spin"

    def __post_init__(self):
        object.__setattr__(self, "arch", Architecture(self.arch))


Backend = Union[LatticeBackend, SpinBackend]


@dataclass
class CompiledProgram:
    """Backend program plus the tag of every source gate.

    ``steps[i]`` holds what gate ``i`` compiled to: a list of lattice
    instructions, or ``(qubit, SpinProgram)`` for the spin backend.
    """

    backend: str
    n_qubits: int
    steps: list = field(default_factory=list)
    tags: list = field(default_factory=list)
    register: lattice.LatticeRegister | None = None

    @property
    def instructions(self) -> list:
        """Flat lattice instruction list."""
        return [i for step in self.steps for i in step]

    def report(self, c: Circuit) -> str:
        return "\n".join(f"{i}: {g.label}: {t.value}" for i, (g, t) in enumerate(zip(c.instrs, self.tags)))

    def to_dict(self) -> dict:
        data = {"backend": self.backend, "qubits": self.n_qubits, "tags": [t.value for t in self.tags]}
        if self.backend == "lattice":
            data["register"] = self.register.as_dict()
            data["steps"] = [[lattice.instruction_to_dict(i) for i in step] for step in self.steps]
        else:
            data["steps"] = [{"qubit": q, **p.as_dict()} for q, p in self.steps]
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "CompiledProgram":
        tags = [Tag(t) for t in data.get("tags", [])]
        if data["backend"] == "lattice":
            reg = lattice.LatticeRegister.from_dict(data["register"])
            steps = [[lattice.instruction_from_dict(i) for i in step] for step in data["steps"]]
            return cls("lattice", int(data["qubits"]), steps, tags, reg)
        if data["backend"] == "spin":
            steps = [(int(s["qubit"]), SpinProgram.from_dict(s)) for s in data["steps"]]
            return cls("spin", int(data["qubits"]), steps, tags)
        raise ValueError(f"unknown backend {data['backend']!r}")

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "CompiledProgram":
        return cls.from_dict(json.loads(text))


def capability(backend: Backend | str, kind: str) -> Tag:
    name = backend if isinstance(backend, str) else backend.name
    return CAPABILITIES[name][kind]


def _compile_lattice_gate(g: GateInstr, be: LatticeBackend) -> list:
    reg = be.register
    if g.kind == "H":
        return lattice.compile_hadamard(reg, g.targets[0], be.n_max)
    if g.kind == "Rx":
        return [lattice.HoppingPulse(g.targets[0], g.angle)]
    n = lattice.find_multiple(g.angle, reg.phi0, be.n_max, allow_zero=True)
    if n == 0:
        return []
    if g.kind == "P":
        return [lattice.compile_p(reg, g.targets[0], n)]
    i, j = sorted(g.targets)
    return [lattice.compile_c(reg, i, j, n)]


def compile(c: Circuit, backend: Backend) -> CompiledProgram:
    """Map each gate to backend instructions and tag how it is realised.

    Raises :class:`UnsupportedGate` for gates the backend cannot do at all and
    :class:`IncommensuratePhase` for lattice phases off the ``phi0`` grid.
    """
    if isinstance(backend, LatticeBackend) and backend.register.n_qubits != c.n_qubits:
        raise DimensionMismatch(
            f"register has {backend.register.n_qubits} qubits, circuit has {c.n_qubits}"
        )
    out = CompiledProgram(backend.name, c.n_qubits,
                          register=backend.register if isinstance(backend, LatticeBackend) else None)
    for g in c.instrs:
        tag = capability(backend, g.kind)
        if tag is Tag.UNSUPPORTED:
            raise UnsupportedGate(f"{backend.name} backend cannot perform {g.label}")
        if isinstance(backend, LatticeBackend):
            out.steps.append(_compile_lattice_gate(g, backend))
        else:
            prog = compile_su2(make_gate(g.kind, g.angle), backend.arch, backend.kappa,
                               backend.field_strength, backend.length)
            out.steps.append((g.targets[0], prog))
        out.tags.append(tag)
    return out


def program_unitary(prog: CompiledProgram) -> np.ndarray:
    if prog.backend == "lattice":
        if prog.register.n_qubits != prog.n_qubits:
            raise DimensionMismatch("program register size disagrees with its qubit count")
        return lattice.program_unitary(prog.register, prog.instructions)
    u = np.eye(1 << prog.n_qubits, dtype=complex)
    for q, spin in prog.steps:
        u = statevec.apply_1q(u, holonomy(spin), q)
    return u


def compilation_error(c: Circuit, prog: CompiledProgram) -> float:
    """Max entry deviation between program and circuit unitaries, global phase removed."""
    if c.n_qubits > MAX_VERIFY_QUBITS:
        raise TooLarge(f"verification is limited to {MAX_VERIFY_QUBITS} qubits")
    if prog.n_qubits != c.n_qubits:
        raise DimensionMismatch(f"program has {prog.n_qubits} qubits, circuit has {c.n_qubits}")
    return phase_distance(program_unitary(prog), circuit_unitary(c))


def verify_compilation(c: Circuit, backend: Backend | None, prog: CompiledProgram, tol: float) -> bool:
    """True iff ``prog`` implements ``c`` up to a global phase within ``tol``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    if backend is not None and backend.name != prog.backend:
        raise ValueError(f"program targets {prog.backend}, backend is {backend.name}")
    return compilation_error(c, prog) <= tol
