import math

import numpy as np
import pytest

from topogates import lattice
from topogates.circuit import (
    CAPABILITIES,
    Circuit,
    CompiledProgram,
    GateInstr,
    LatticeBackend,
    SpinBackend,
    Tag,
    circuit_unitary,
    compile,
    simulate,
    verify_compilation,
)
from topogates.errors import DimensionMismatch, IncommensuratePhase, InvalidQubit, TooLarge, UnsupportedGate
from topogates.gates import cphase, hadamard
from topogates.geometry import ClosedPath2D

from oracles import kron_embed

H0 = GateInstr("H", (0,))


def lattice_backend(n, phi0=math.pi / 2, anyon=False, n_max=16):
    rule = lattice.PhaseRule.anyon(phi0) if anyon else lattice.PhaseRule.charge_dipole(phi0)
    return LatticeBackend(lattice.LatticeRegister.row(n, rule), n_max)


class TestSimulate:
    def test_hadamard_on_zero(self):
        assert np.allclose(simulate(Circuit(1, [H0])), [1 / math.sqrt(2)] * 2, atol=1e-15)

    def test_hadamard_identity(self):
        decomposed = Circuit(1, [GateInstr("P", (0,), -math.pi / 2), GateInstr("Rx", (0,), math.pi / 4),
                                 GateInstr("P", (0,), -math.pi / 2)])
        for label in ("0", "1"):
            assert np.abs(simulate(decomposed, label) - simulate(Circuit(1, [H0]), label)).max() < 1e-12

    def test_graph_state(self):
        c = Circuit(2, [H0, GateInstr("H", (1,)), GateInstr("C", (0, 1), math.pi)])
        oracle = cphase(math.pi) @ np.kron(hadamard(), hadamard()) @ np.array([1, 0, 0, 0])
        assert np.allclose(oracle, [0.5, 0.5, 0.5, -0.5])
        assert np.abs(simulate(c, "00") - oracle).max() < 1e-15

    def test_little_endian_labels(self):
        c = Circuit(3, [GateInstr("Rx", (0,), math.pi / 2)])
        out = simulate(c, "100")
        assert out[0b101] == pytest.approx(1j)

    def test_initial_vector_and_errors(self):
        c = Circuit(2, [H0])
        psi = np.array([0, 1, 0, 0], dtype=complex)
        assert np.allclose(simulate(c, psi), simulate(c, "01"))
        with pytest.raises(DimensionMismatch):
            simulate(c, np.array([1, 0]))
        with pytest.raises(DimensionMismatch):
            simulate(c, "0")

    def test_norm_preserved_over_100_gates(self):
        rng = np.random.default_rng(0)
        kinds = ["H", "P", "C", "Rx", "Ry", "Rz"]
        gates = []
        for _ in range(100):
            k = kinds[int(rng.integers(6))]
            if k == "C":
                gates.append(GateInstr(k, tuple(rng.choice(4, 2, replace=False)), rng.uniform(-4, 4)))
            else:
                gates.append(GateInstr(k, (int(rng.integers(4)),), None if k == "H" else rng.uniform(-4, 4)))
        out = simulate(Circuit(4, gates), "1010")
        assert abs(np.linalg.norm(out) - 1) < 1e-12


class TestUnitary:
    def test_empty(self):
        assert np.array_equal(circuit_unitary(Circuit(3)), np.eye(8))

    def test_controlled_phase(self):
        assert np.allclose(circuit_unitary(Circuit(2, [GateInstr("C", (0, 1), 0.9)])), cphase(0.9))

    def test_little_endian_tensor(self):
        assert np.allclose(circuit_unitary(Circuit(2, [H0])), kron_embed(hadamard(), 0, 2))
        assert np.allclose(kron_embed(hadamard(), 0, 2), np.kron(np.eye(2), hadamard()))

    def test_columns_match_simulate(self):
        c = Circuit(3, [H0, GateInstr("C", (2, 0), 1.1), GateInstr("Ry", (1,), 0.4)])
        u = circuit_unitary(c)
        for j in range(8):
            assert np.allclose(u[:, j], simulate(c, j))

    def test_unitary_up_to_six(self):
        rng = np.random.default_rng(1)
        gates = [GateInstr("Rx", (int(rng.integers(6)),), rng.uniform(-3, 3)) for _ in range(20)]
        gates += [GateInstr("C", (0, 5), 0.3), GateInstr("H", (3,))]
        u = circuit_unitary(Circuit(6, gates))
        assert np.abs(u @ u.conj().T - np.eye(64)).max() < 1e-10

    def test_too_large(self):
        with pytest.raises(TooLarge):
            circuit_unitary(Circuit(13))


def test_gate_instr_validation():
    with pytest.raises(ValueError):
        GateInstr("C", (0,), 1.0)
    with pytest.raises(ValueError):
        GateInstr("C", (1, 1), 1.0)
    with pytest.raises(ValueError):
        GateInstr("P", (0,))
    with pytest.raises(InvalidQubit):
        Circuit(2, [GateInstr("H", (2,))])


def test_circuit_json_roundtrip():
    c = Circuit(2, [H0, GateInstr("P", (0,), 1.5708), GateInstr("C", (0, 1), 3.1416), GateInstr("Rz", (1,), 0.2)])
    data = c.to_dict()
    assert data["gates"][1] == {"kind": "P", "phi": 1.5708, "targets": [0]}
    assert data["gates"][3] == {"kind": "Rz", "theta": 0.2, "targets": [1]}
    assert Circuit.from_json(c.to_json()) == c


class TestCompile:
    def test_lattice_tags(self):
        c = Circuit(2, [H0, GateInstr("C", (0, 1), math.pi)])
        prog = compile(c, lattice_backend(2))
        assert prog.tags == [Tag.DYNAMICAL, Tag.TOPOLOGICAL_AB]
        assert verify_compilation(c, None, prog, 1e-10)

    def test_spin_hadamard(self):
        prog = compile(Circuit(1, [H0]), SpinBackend())
        assert len(prog.steps) == 1 and prog.tags == [Tag.TOPOLOGICAL_AC]

    def test_spin_rejects_two_qubit(self):
        with pytest.raises(UnsupportedGate, match="C"):
            compile(Circuit(2, [GateInstr("C", (0, 1), math.pi)]), SpinBackend())

    def test_lattice_rejects_ry(self):
        with pytest.raises(UnsupportedGate):
            compile(Circuit(1, [GateInstr("Ry", (0,), 0.3)]), lattice_backend(1))

    def test_lattice_incommensurate(self):
        with pytest.raises(IncommensuratePhase):
            compile(Circuit(1, [GateInstr("P", (0,), 1.0)]), lattice_backend(1, n_max=10))

    def test_lattice_register_size(self):
        with pytest.raises(DimensionMismatch):
            compile(Circuit(2, [H0]), lattice_backend(3))

    def test_c_moves_lower_qubit(self):
        prog = compile(Circuit(2, [GateInstr("C", (1, 0), math.pi)]), lattice_backend(2))
        assert prog.steps[0][0].qubit == 0

    def test_zero_phase_compiles_to_nothing(self):
        c = Circuit(1, [GateInstr("P", (0,), 0.0)])
        prog = compile(c, lattice_backend(1))
        assert prog.steps == [[]] and verify_compilation(c, None, prog, 1e-12)

    def test_capability_matrix(self):
        table = {"lattice": {"H": "no", "P": "yes", "C": "yes"}, "spin": {"H": "yes", "P": "yes", "C": "no"}}
        for name, row in table.items():
            for kind, entry in row.items():
                tag = CAPABILITIES[name][kind]
                if entry == "yes":
                    assert tag in (Tag.TOPOLOGICAL_AB, Tag.TOPOLOGICAL_AC)
                else:
                    assert tag in (Tag.DYNAMICAL, Tag.UNSUPPORTED)


class TestVerify:
    def test_lattice_roundtrip(self):
        c = Circuit(2, [GateInstr("P", (0,), math.pi / 2), GateInstr("C", (0, 1), math.pi)])
        be = lattice_backend(2)
        assert verify_compilation(c, be, compile(c, be), 1e-10)

    def test_spin_roundtrip(self):
        c = Circuit(1, [H0, GateInstr("Rz", (0,), 0.7)])
        be = SpinBackend(kappa=0.8, arch="static")
        assert verify_compilation(c, be, compile(c, be), 1e-10)

    def test_spin_multi_qubit(self):
        rng = np.random.default_rng(2)
        gates = [GateInstr(k, (int(rng.integers(3)),), None if k == "H" else rng.uniform(-3, 3))
                 for k in rng.choice(["H", "P", "Rx", "Ry", "Rz"], 15)]
        c = Circuit(3, gates)
        for arch in ("flying", "static"):
            be = SpinBackend(kappa=1.7, arch=arch)
            assert verify_compilation(c, be, compile(c, be), 1e-10)

    def test_flipped_winding_fails(self):
        c = Circuit(2, [GateInstr("C", (0, 1), math.pi / 2)])
        prog = compile(c, lattice_backend(2))
        mv = prog.steps[0][0]
        v = mv.path.vertices
        flipped = ClosedPath2D(np.concatenate([v[:1], v[:0:-1]]))
        prog.steps[0][0] = lattice.MoveInstruction(mv.qubit, mv.site, flipped)
        assert not verify_compilation(c, None, prog, 1e-10)

    def test_program_json_roundtrip(self):
        c = Circuit(2, [H0, GateInstr("C", (0, 1), math.pi), GateInstr("Rx", (1,), 0.3)])
        prog = compile(c, lattice_backend(2))
        back = CompiledProgram.from_json(prog.to_json())
        assert back.tags == prog.tags
        assert verify_compilation(c, None, back, 1e-10)
        spin = compile(Circuit(1, [H0]), SpinBackend())
        assert verify_compilation(Circuit(1, [H0]), None, CompiledProgram.from_json(spin.to_json()), 1e-10)

    def test_backend_mismatch(self):
        c = Circuit(1, [H0])
        with pytest.raises(ValueError):
            verify_compilation(c, SpinBackend(), compile(c, lattice_backend(1, -math.pi / 2)), 1e-10)

    def test_qubit_count_mismatch(self):
        prog = compile(Circuit(1, [H0]), SpinBackend())
        with pytest.raises(DimensionMismatch):
            verify_compilation(Circuit(2, [H0]), None, prog, 1e-10)
