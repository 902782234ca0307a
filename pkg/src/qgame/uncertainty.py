"""Outcome operators and the variance bound for games that differ only in their measurement."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .game import MeasurementBasis, OutcomeWeights, PreferenceRelation
from .qmath import HERMITIAN_TOL, DimensionError, StateVector

BOUND_TOL = 1e-9


@dataclass(frozen=True)
class OutcomeOperator:
    """Hermitian operator whose eigenvalue on each measurement eigenstate is the reward for that outcome."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if np.linalg.norm(m - m.conj().T) > HERMITIAN_TOL:
            raise ValueError("outcome operator is not Hermitian")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)


def outcome_operator(m: MeasurementBasis, pref: PreferenceRelation, w: OutcomeWeights) -> OutcomeOperator:
    if len(pref) != m.dim or len(w) != m.dim:
        raise DimensionError(f"basis of dimension {m.dim} with {len(pref)}-preference and {len(w)} weights")
    u = m.matrix
    e = (u * pref.state_weights(w)) @ u.conj().T
    return OutcomeOperator(0.5 * (e + e.conj().T))


def expectation_and_variance(state: StateVector, e: OutcomeOperator) -> tuple[float, float]:
    if state.dim != e.dim:
        raise DimensionError(f"state dimension {state.dim} vs operator dimension {e.dim}")
    v = e.matrix @ state.amps
    mean = float(np.vdot(state.amps, v).real)
    second = float(np.vdot(v, v).real)
    var = second - mean ** 2
    if -1e-12 < var < 0:
        var = 0.0
    return mean, var


@dataclass(frozen=True)
class BoundCheck:
    lhs: float
    rhs: float
    holds: bool


def uncertainty_bound_check(state: StateVector, e1: OutcomeOperator, e2: OutcomeOperator) -> BoundCheck:
    """Var(E1) Var(E2) >= |<[E1, E2]>|^2 / 4."""
    if not (state.dim == e1.dim == e2.dim):
        raise DimensionError("state and outcome operators differ in dimension")
    _, v1 = expectation_and_variance(state, e1)
    _, v2 = expectation_and_variance(state, e2)
    comm = e1.matrix @ e2.matrix - e2.matrix @ e1.matrix
    rhs = 0.25 * abs(np.vdot(state.amps, comm @ state.amps)) ** 2
    lhs = v1 * v2
    return BoundCheck(lhs, rhs, lhs >= rhs - BOUND_TOL)
