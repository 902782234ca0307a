"""Ready-made games: the 2-qubit Prisoner's Dilemma family and small fixtures."""
from __future__ import annotations

import numpy as np

from . import gates
from .game import GameSpec, MeasurementBasis, Order, OutcomeWeights, PreferenceRelation
from .qmath import StateVector

PD_PAPER_A = (2, 1, 4, 3)
PD_PAPER_B = (3, 1, 4, 2)


def _flip_sets(flip: np.ndarray = gates.FLIP, flip_b: np.ndarray = None):
    flip_b = flip if flip_b is None else flip_b
    ops_a = (gates.local(gates.I2, gates.I2, "I"), gates.local(flip, gates.I2, "FLIP"))
    ops_b = (gates.local(gates.I2, gates.I2, "I"), gates.local(gates.I2, flip_b, "FLIP"))
    return ops_a, ops_b


def _pd(initial: StateVector, *, swap=False, weights=None, measurement=None, ops=None, name="") -> GameSpec:
    pa, pb = (PD_PAPER_B, PD_PAPER_A) if swap else (PD_PAPER_A, PD_PAPER_B)
    ops_a, ops_b = ops if ops is not None else _flip_sets()
    return GameSpec(
        initial_state=initial,
        ops_a=ops_a,
        ops_b=ops_b,
        measurement=measurement or MeasurementBasis.computational((2, 2)),
        pref_a=PreferenceRelation(pa),
        pref_b=PreferenceRelation(pb),
        order=Order.SIMULTANEOUS,
        weights=OutcomeWeights(tuple(weights)) if weights is not None else None,
        name=name,
    )


def pd_paper(weights=None) -> GameSpec:
    """Flip / don't-flip on |00>, preferences (2,1,4,3) and (3,1,4,2) as printed."""
    return _pd(gates.ground(), weights=weights, name="pd-paper")


def pd_standard(weights=None) -> GameSpec:
    """As ``pd_paper`` with the two preference relations exchanged."""
    return _pd(gates.ground(), swap=True, weights=weights, name="pd-standard")


def pd_entangled(weights=None) -> GameSpec:
    """Flip / don't-flip on the input (|01> + |10>)/sqrt(2)."""
    return _pd(gates.bell_sym(), weights=weights, name="pd-entangled")


def pd_rotated_input(theta, phi, theta_b, phi_b, weights=None) -> GameSpec:
    return _pd(gates.rotated_ground(theta, phi, theta_b, phi_b), weights=weights, name="pd-rotated-input")


def pd_rotated_ops(theta, phi, theta_b, phi_b, weights=None) -> GameSpec:
    ops = _flip_sets(gates.rotated_flip(theta, phi), gates.rotated_flip(theta_b, phi_b))
    return _pd(gates.ground(), weights=weights, ops=ops, name="pd-rotated-ops")


def rotated_measurement(theta, phi, theta_b, phi_b) -> MeasurementBasis:
    """The states (R (x) R')|k> for R = spin_rotation(theta, phi), ordered like |00>,|01>,|10>,|11>."""
    u = np.kron(gates.spin_rotation(theta, phi), gates.spin_rotation(theta_b, phi_b))
    return MeasurementBasis.from_unitary(u, (2, 2), "rotated")


def pd_rotated_measurement(theta, phi, theta_b, phi_b, weights=None) -> GameSpec:
    m = rotated_measurement(theta, phi, theta_b, phi_b)
    return _pd(gates.ground(), weights=weights, measurement=m, name="pd-rotated-measurement")


def hadamard2() -> MeasurementBasis:
    return MeasurementBasis.from_unitary(np.kron(gates.HADAMARD, gates.HADAMARD), (2, 2), "hadamard2")


def pauli_invertible() -> GameSpec:
    """One qubit, both players hold {I, X, Y, Z}; A wants |0>, B wants |1>."""
    paulis = [("I", gates.I2), ("X", gates.SIGMA_X), ("Y", gates.SIGMA_Y), ("Z", gates.SIGMA_Z)]
    ops = tuple(gates.op(m, label, (2,)) for label, m in paulis)
    return GameSpec(
        initial_state=gates.ground(1),
        ops_a=ops,
        ops_b=ops,
        measurement=MeasurementBasis.computational((2,)),
        pref_a=PreferenceRelation((1, 2)),
        pref_b=PreferenceRelation((2, 1)),
        order=Order.A_FIRST,
        name="pauli-invertible",
    )


def order_sensitive(order: Order = Order.A_FIRST) -> GameSpec:
    """One qubit, A holds {I, H}, B holds {I, X}; H and X do not commute."""
    return GameSpec(
        initial_state=gates.ground(1),
        ops_a=(gates.op(gates.I2, "I", (2,)), gates.op(gates.HADAMARD, "H", (2,))),
        ops_b=(gates.op(gates.I2, "I", (2,)), gates.op(gates.SIGMA_X, "X", (2,))),
        measurement=MeasurementBasis.computational((2,)),
        pref_a=PreferenceRelation((1, 2)),
        pref_b=PreferenceRelation((2, 1)),
        order=order,
        name="order-sensitive",
    )


PRESETS = {
    "pd-paper": pd_paper,
    "pd-standard": pd_standard,
    "pd-entangled": pd_entangled,
    "pauli-invertible": pauli_invertible,
    "order-sensitive": order_sensitive,
}
