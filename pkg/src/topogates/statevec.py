"""Little-endian statevector kernels: qubit 0 is the least significant bit."""
from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, InvalidQubit


def n_qubits_of(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim < 2 or 1 << n != dim:
        raise DimensionMismatch(f"state length {dim} is not a power of two >= 2")
    return n


def basis_state(n: int, index: int = 0) -> np.ndarray:
    psi = np.zeros(1 << n, dtype=complex)
    psi[index] = 1.0
    return psi


def parse_bitstring(label: str, n: int) -> int:
    """``"q_{n-1}...q_0"`` to a basis index."""
    if len(label) != n or set(label) - {"0", "1"}:
        raise DimensionMismatch(f"basis label {label!r} is not a {n}-bit string")
    return int(label, 2)


def check_qubit(qubit: int, n: int) -> None:
    if not 0 <= qubit < n:
        raise InvalidQubit(f"qubit {qubit} out of range for {n} qubits")


def apply_1q(state: np.ndarray, matrix: np.ndarray, qubit: int) -> np.ndarray:
    """Apply a 2x2 matrix to ``qubit``. Extra trailing axes are carried along."""
    n = n_qubits_of(state.shape[0])
    check_qubit(qubit, n)
    batch = state.shape[1:]
    psi = state.reshape((1 << (n - qubit - 1), 2, 1 << qubit) + batch)
    out = np.einsum("ij,ajb...->aib...", matrix, psi)
    return out.reshape(state.shape)


def bits(n: int, qubit: int) -> np.ndarray:
    """Value of ``qubit`` in every basis index."""
    return (np.arange(1 << n) >> qubit) & 1


def apply_diagonal(state: np.ndarray, diag: np.ndarray) -> np.ndarray:
    if diag.shape[0] != state.shape[0]:
        raise DimensionMismatch(f"diagonal of length {diag.shape[0]} on state of length {state.shape[0]}")
    return diag.reshape((-1,) + (1,) * (state.ndim - 1)) * state
