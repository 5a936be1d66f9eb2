"""Simulation and compilation of gates built from topological phases."""

from .circuit import Circuit, GateInstr, LatticeBackend, SpinBackend, Tag, circuit_unitary, simulate, verify_compilation
from .gates import compose, equal_up_to_phase, euler_zyz, make_gate
from .geometry import ClosedPath2D, ClosedPath3D, path_clearance, solid_angle, winding_number, winding_vector
from .lattice import LatticeRegister, PhaseRule, program_unitary
from .monopole import MonopoleConfig, certify_topological, monopole_phase
from .spinline import Architecture, SpinProgram, SpinSegment, compile_su2, holonomy

__version__ = "0.1.0"
