"""Dense complex linear algebra for small tensor-factored Hilbert spaces.

States and operators are thin immutable wrappers around numpy arrays that
carry the tensor factorization (e.g. ``(2, 2)`` for two qubits). Player A
owns the first factor throughout the package.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from math import prod
from typing import Optional, Sequence, Union

import numpy as np

NORM_TOL = 1e-12
UNITARY_TOL = 1e-10
HERMITIAN_TOL = 1e-10
STATE_EQ_TOL = 1e-9


class DimensionError(ValueError):
    """Operands live on incompatible spaces."""


def _frozen(arr) -> np.ndarray:
    out = np.array(arr, dtype=complex)
    out.setflags(write=False)
    return out


def _check_factors(dim: int, factors: Optional[Sequence[int]]) -> tuple[int, ...]:
    if factors is None:
        return (dim,)
    factors = tuple(int(f) for f in factors)
    if any(f < 1 for f in factors) or prod(factors) != dim:
        raise DimensionError(f"factors {factors} do not multiply to dimension {dim}")
    return factors


@dataclass(frozen=True)
class StateVector:
    amps: np.ndarray
    factors: tuple[int, ...] = field(default=())

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex).reshape(-1)
        if not np.all(np.isfinite(amps)):
            raise ValueError("state amplitudes must be finite")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (norm={norm!r})")
        object.__setattr__(self, "amps", _frozen(amps))
        object.__setattr__(self, "factors", _check_factors(amps.size, self.factors or None))

    @classmethod
    def normalized(cls, amps, factors=None) -> "StateVector":
        amps = np.asarray(amps, dtype=complex).reshape(-1)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise ValueError("cannot normalize the zero vector")
        return cls(amps / norm, tuple(factors) if factors else ())

    @classmethod
    def basis(cls, index: int, factors: Sequence[int]) -> "StateVector":
        dim = prod(factors)
        amps = np.zeros(dim, dtype=complex)
        amps[index] = 1.0
        return cls(amps, tuple(factors))

    @property
    def dim(self) -> int:
        return self.amps.size

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def __repr__(self) -> str:
        return f"StateVector({np.round(self.amps, 6).tolist()}, factors={self.factors})"


@dataclass(frozen=True)
class UnitaryOperator:
    matrix: np.ndarray
    label: Optional[str] = None
    factors: tuple[int, ...] = field(default=())

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"operator must be square, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("operator entries must be finite")
        err = np.linalg.norm(m.conj().T @ m - np.eye(m.shape[0]))
        if err > UNITARY_TOL:
            raise ValueError(f"operator {self.label or ''} is not unitary (|U^dag U - I|_F = {err:.3e})")
        object.__setattr__(self, "matrix", _frozen(m))
        object.__setattr__(self, "factors", _check_factors(m.shape[0], self.factors or None))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def dagger(self) -> "UnitaryOperator":
        label = f"{self.label}^-1" if self.label else None
        return UnitaryOperator(self.matrix.conj().T, label, self.factors)

    def __matmul__(self, other: "UnitaryOperator") -> "UnitaryOperator":
        if not isinstance(other, UnitaryOperator):
            return NotImplemented
        if other.dim != self.dim:
            raise DimensionError(f"cannot compose {self.dim}x{self.dim} with {other.dim}x{other.dim}")
        label = f"{self.label}*{other.label}" if self.label and other.label else None
        factors = self.factors if len(self.factors) >= len(other.factors) else other.factors
        return UnitaryOperator(self.matrix @ other.matrix, label, factors)

    def relabel(self, label: Optional[str]) -> "UnitaryOperator":
        return UnitaryOperator(self.matrix, label, self.factors)

    def __repr__(self) -> str:
        return f"UnitaryOperator(label={self.label!r}, dim={self.dim}, factors={self.factors})"


@dataclass(frozen=True)
class DensityMatrix:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"density matrix must be square, got shape {m.shape}")
        if np.linalg.norm(m - m.conj().T) > HERMITIAN_TOL:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > HERMITIAN_TOL:
            raise ValueError(f"density matrix trace is {np.trace(m).real!r}, expected 1")
        if np.linalg.eigvalsh(m).min() < -HERMITIAN_TOL:
            raise ValueError("density matrix has negative eigenvalues")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)


Operand = Union[StateVector, UnitaryOperator]


def tensor(a: Operand, b: Operand) -> Operand:
    """Kronecker product; the factor lists are concatenated."""
    if isinstance(a, StateVector) and isinstance(b, StateVector):
        return StateVector(np.kron(a.amps, b.amps), a.factors + b.factors)
    if isinstance(a, UnitaryOperator) and isinstance(b, UnitaryOperator):
        label = f"{a.label}⊗{b.label}" if a.label and b.label else None
        return UnitaryOperator(np.kron(a.matrix, b.matrix), label, a.factors + b.factors)
    raise TypeError(f"cannot tensor {type(a).__name__} with {type(b).__name__}")


def tensor_all(*operands: Operand) -> Operand:
    return reduce(tensor, operands)


def apply(u: UnitaryOperator, s: StateVector) -> StateVector:
    if u.dim != s.dim:
        raise DimensionError(f"operator of dimension {u.dim} cannot act on state of dimension {s.dim}")
    out = u.matrix @ s.amps
    # renormalize away accumulated rounding; u is unitary to 1e-10
    return StateVector(out / np.linalg.norm(out), s.factors)


def commutator_norm(a: UnitaryOperator, b: UnitaryOperator) -> float:
    if a.dim != b.dim:
        raise DimensionError(f"commutator of {a.dim}x{a.dim} and {b.dim}x{b.dim} operators")
    c = a.matrix @ b.matrix - b.matrix @ a.matrix
    return float(np.linalg.norm(c))


def inner(s1: StateVector, s2: StateVector) -> complex:
    if s1.dim != s2.dim:
        raise DimensionError(f"inner product of dimension {s1.dim} and {s2.dim} states")
    return complex(np.vdot(s1.amps, s2.amps))


def fidelity(s1: StateVector, s2: StateVector) -> float:
    """|<s1|s2>|, blind to global phase."""
    return abs(inner(s1, s2))


def states_equal(s1: StateVector, s2: StateVector, tol: float = STATE_EQ_TOL) -> bool:
    return fidelity(s1, s2) >= 1.0 - tol


def reduced_density(s: StateVector, keep: int) -> DensityMatrix:
    """Partial trace of |s><s| over every factor except ``keep``."""
    if len(s.factors) < 2:
        raise DimensionError("reduced density needs a state with at least two tensor factors")
    if not 0 <= keep < len(s.factors):
        raise IndexError(f"factor index {keep} out of range for factors {s.factors}")
    psi = np.moveaxis(s.amps.reshape(s.factors), keep, 0).reshape(s.factors[keep], -1)
    rho = psi @ psi.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(rho / np.trace(rho).real)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """-Tr(rho ln rho) in nats, with 0 ln 0 = 0."""
    lam = rho.eigenvalues()
    lam = lam[lam > 1e-15]
    s = float(-np.sum(lam * np.log(lam)))
    return max(s, 0.0)


def expm_hermitian(h: np.ndarray, t: float = 1.0) -> np.ndarray:
    """exp(i t h) for Hermitian h via its eigendecomposition."""
    h = np.asarray(h, dtype=complex)
    if np.linalg.norm(h - h.conj().T) > HERMITIAN_TOL:
        raise ValueError("generator is not Hermitian")
    lam, vecs = np.linalg.eigh(h)
    return (vecs * np.exp(1j * t * lam)) @ vecs.conj().T


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_state(dim: int, rng: np.random.Generator, factors=None) -> StateVector:
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return StateVector.normalized(z, factors)
