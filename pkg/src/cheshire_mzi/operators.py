"""Named kets and observables for the path, polarization and meter qubits."""

from __future__ import annotations

import numpy as np

from .state import PATH, POLARIZATION, Operator, StateVector, meter, tensor_ops

L = StateVector([PATH], [1, 0], normalized=True)
R = StateVector([PATH], [0, 1], normalized=True)
H = StateVector([POLARIZATION], [1, 0], normalized=True)
V = StateVector([POLARIZATION], [0, 1], normalized=True)

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

PROJ_L = Operator([PATH], [[1, 0], [0, 0]])
PROJ_R = Operator([PATH], [[0, 0], [0, 1]])
SIGMA_X = Operator([POLARIZATION], PAULI_X)
SIGMA_Z = Operator([POLARIZATION], PAULI_Z)

# arm-resolved polarization components
SIGMA_X_L = tensor_ops(PROJ_L, SIGMA_X)
SIGMA_X_R = tensor_ops(PROJ_R, SIGMA_X)
SIGMA_Z_L = tensor_ops(PROJ_L, SIGMA_Z)
SIGMA_Z_R = tensor_ops(PROJ_R, SIGMA_Z)

OBSERVABLES = {
    "piL": PROJ_L,
    "piR": PROJ_R,
    "xL": SIGMA_X_L,
    "xR": SIGMA_X_R,
    "zL": SIGMA_Z_L,
    "zR": SIGMA_Z_R,
}


def observable(tag: str) -> Operator:
    """Look up one of ``piL, piR, xL, xR, zL, zR``."""
    try:
        return OBSERVABLES[tag]
    except KeyError:
        raise KeyError(f"unknown observable {tag!r}; choose from {sorted(OBSERVABLES)}") from None


def meter_x(index: int = 0) -> Operator:
    return Operator([meter(index)], PAULI_X)


def meter_y(index: int = 0) -> Operator:
    return Operator([meter(index)], PAULI_Y)


def meter_z(index: int = 0) -> Operator:
    return Operator([meter(index)], PAULI_Z)


def meter_zero(index: int = 0) -> StateVector:
    return StateVector([meter(index)], [1, 0], normalized=True)


def meter_reflection(theta_g: float, index: int = 0) -> Operator:
    """``R(theta_g)``: |0> -> cos2t|0> + sin2t|1>, |1> -> sin2t|0> - cos2t|1>.

    Real symmetric with R @ R = I, so it is its own inverse.
    """
    c, s = np.cos(2 * theta_g), np.sin(2 * theta_g)
    return Operator([meter(index)], [[c, s], [s, -c]])
