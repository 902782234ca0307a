"""Single-qubit gate library and the spin-rotation helpers used by the 2-qubit games."""
from __future__ import annotations

from math import cos, sin

import numpy as np

from .qmath import StateVector, UnitaryOperator, expm_hermitian, tensor

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)

# the spin flip exp(i pi/2 sigma_x), written in closed form as i sigma_x so that
# flipped basis states carry no rounding residue
FLIP = 1j * SIGMA_X


def rx(theta: float) -> np.ndarray:
    """exp(-i theta sigma_x / 2)."""
    return expm_hermitian(SIGMA_X, -theta / 2)


def ry(theta: float) -> np.ndarray:
    return expm_hermitian(SIGMA_Y, -theta / 2)


def rz(theta: float) -> np.ndarray:
    return expm_hermitian(SIGMA_Z, -theta / 2)


def spin_rotation(theta: float, phi: float) -> np.ndarray:
    """SU(2) matrix taking |0>_z, |1>_z to the spin states along (theta, phi).

    Column 0 is cos(theta/2) e^{i phi/2}|0> - sin(theta/2) e^{-i phi/2}|1>.
    """
    c = cos(theta / 2) * np.exp(1j * phi / 2)
    s = sin(theta / 2) * np.exp(-1j * phi / 2)
    return np.array([[c, np.conj(s)], [-s, np.conj(c)]], dtype=complex)


def spin_operator(theta: float, phi: float) -> np.ndarray:
    """cos(theta) sigma_z + sin(theta) e^{-i phi} sigma_+ + sin(theta) e^{i phi} sigma_-."""
    plus = np.array([[0, 1], [0, 0]], dtype=complex)
    minus = plus.T
    return (cos(theta) * SIGMA_Z + sin(theta) * np.exp(-1j * phi) * plus
            + sin(theta) * np.exp(1j * phi) * minus)


def rotated_flip(theta: float, phi: float) -> np.ndarray:
    """FLIP carried into the rotated frame: R FLIP R^dag with R = spin_rotation(theta, phi).

    It exchanges the two spin states along (theta, phi) instead of |0>_z and |1>_z.
    """
    r = spin_rotation(theta, phi)
    return r @ FLIP @ r.conj().T


def op(matrix, label=None, factors=None) -> UnitaryOperator:
    return UnitaryOperator(matrix, label, tuple(factors) if factors else ())


def local(a: np.ndarray, b: np.ndarray, label=None) -> UnitaryOperator:
    """a on qubit A, b on qubit B."""
    return tensor(op(a, factors=(2,)), op(b, factors=(2,))).relabel(label)


def ground(nqubits: int = 2) -> StateVector:
    return StateVector.basis(0, (2,) * nqubits)


def bell_sym() -> StateVector:
    """(|01> + |10>)/sqrt(2)."""
    return StateVector(np.array([0, 1, 1, 0]) / np.sqrt(2), (2, 2))


def rotated_ground(theta: float, phi: float, theta_b: float, phi_b: float) -> StateVector:
    """|0>_{theta,phi,A} (x) |0>_{theta',phi',B}."""
    a = spin_rotation(theta, phi)[:, 0]
    b = spin_rotation(theta_b, phi_b)[:, 0]
    return StateVector(np.kron(a, b), (2, 2))
