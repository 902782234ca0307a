"""Equilibrium analysis over finite operator sets.

Payoff comparisons treat values within ``TIE_TOL`` as equal, so cells whose
Born-rule payoffs agree up to rounding are reported as ties rather than
broken arbitrarily. Every multi-cell result is in row-major order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .game import (
    GameSpec,
    MeasurementBasis,
    Order,
    PayoffMatrices,
    PreferenceRelation,
    expected_from_probs,
    outcome_distribution,
    output_state,
    payoff_matrices,
)
from .qmath import StateVector, UnitaryOperator, apply

TIE_TOL = 1e-9
INVERSE_TOL = 1e-9

Cell = tuple[int, int]


def pure_nash(pm: PayoffMatrices, tol: float = TIE_TOL) -> list[Cell]:
    """Cells where neither player gains by a unilateral switch."""
    best_row = pm.e_a.max(axis=0)
    best_col = pm.e_b.max(axis=1)
    p, q = pm.shape
    return [
        (i, j)
        for i in range(p)
        for j in range(q)
        if pm.e_a[i, j] >= best_row[j] - tol and pm.e_b[i, j] >= best_col[i] - tol
    ]


def _strict_argmax(values: np.ndarray, tol: float) -> Optional[int]:
    k = int(np.argmax(values))
    others = np.delete(values, k)
    if others.size and not np.all(values[k] > others + tol):
        return None
    return k


def sum_dominance(pm: PayoffMatrices, tol: float = TIE_TOL) -> Optional[Cell]:
    """Row with the strictly largest A row-sum paired with the column with B's strictly largest column-sum.

    Equivalent to each player best-responding to a uniformly random opponent.
    """
    i = _strict_argmax(pm.e_a.sum(axis=1), tol)
    j = _strict_argmax(pm.e_b.sum(axis=0), tol)
    if i is None or j is None:
        return None
    return i, j


def stackelberg(pm: PayoffMatrices, first: str = "A", tol: float = TIE_TOL) -> list[Cell]:
    """Leader optimizes over the follower's best responses; ties are all kept."""
    first = first.upper()
    p, q = pm.shape
    if first == "A":
        candidates = [(i, j) for i in range(p) for j in range(q)
                      if pm.e_b[i, j] >= pm.e_b[i].max() - tol]
        leader = pm.e_a
    elif first == "B":
        candidates = [(i, j) for i in range(p) for j in range(q)
                      if pm.e_a[i, j] >= pm.e_a[:, j].max() - tol]
        leader = pm.e_b
    else:
        raise ValueError(f"first mover must be 'A' or 'B', got {first!r}")
    top = max(leader[c] for c in candidates)
    return sorted(c for c in candidates if leader[c] >= top - tol)


def _phase_inverse(b: UnitaryOperator, a: UnitaryOperator, tol: float) -> bool:
    """b a equals the identity up to a global phase."""
    return abs(np.trace(b.matrix @ a.matrix)) / a.dim >= 1.0 - tol


@dataclass(frozen=True)
class Invertibility:
    invertible: bool
    # (i, j) with ops_b[j] undoing ops_a[i]; or (i, None) naming the first op B cannot undo
    witness: tuple[int, Optional[int]]


def is_invertible_game(spec: GameSpec, tol: float = INVERSE_TOL) -> Invertibility:
    """B can undo each of A's operations (up to phase)."""
    witness = None
    for i, a in enumerate(spec.ops_a):
        match = next((j for j, b in enumerate(spec.ops_b) if _phase_inverse(b, a, tol)), None)
        if match is None:
            return Invertibility(False, (i, None))
        if witness is None:
            witness = (i, match)
    return Invertibility(True, witness)


def _identity_index(ops, who: str) -> int:
    for k, o in enumerate(ops):
        if np.allclose(o.matrix, np.eye(o.dim), atol=1e-12):
            return k
    raise ValueError(f"player {who} has no identity operation; the two-move test needs one")


def two_move_equilibrium_check(spec: GameSpec, cell: Cell, tol: float = TIE_TOL) -> bool:
    """After the first move lands on ``cell``, would both players choose identity as their second move?"""
    _identity_index(spec.ops_a, "A")
    _identity_index(spec.ops_b, "B")
    psi = output_state(spec, *cell)
    if spec.final_rotation is not None:
        # second moves act before the imposed rotation
        psi = apply(spec.final_rotation.dagger, psi)

    def value(state: StateVector, who: str) -> float:
        if spec.final_rotation is not None:
            state = apply(spec.final_rotation, state)
        probs = outcome_distribution(state, spec.measurement)
        return expected_from_probs(probs, spec.pref(who), spec.weights)

    stay_a, stay_b = value(psi, "A"), value(psi, "B")
    if any(value(apply(a, psi), "A") > stay_a + tol for a in spec.ops_a):
        return False
    if any(value(apply(b, psi), "B") > stay_b + tol for b in spec.ops_b):
        return False
    return True


def preference_region_contains(state: StateVector, m: MeasurementBasis, pref: PreferenceRelation,
                               tol: float = 1e-12) -> bool:
    """Outcome probabilities are (weakly) ordered the way the player ranks the outcomes."""
    probs = outcome_distribution(state, m)
    ordered = probs[np.array(pref.ranking) - 1]
    return bool(np.all(ordered[:-1] >= ordered[1:] - tol))


@dataclass
class EquilibriumReport:
    nash_cells: list[Cell]
    sum_dominance: Optional[Cell]
    stackelberg: list[tuple[str, Cell]]
    invertible: Invertibility
    notes: list[str] = field(default_factory=list)


def analyze_equilibria(spec: GameSpec, pm: Optional[PayoffMatrices] = None) -> EquilibriumReport:
    pm = pm if pm is not None else payoff_matrices(spec)
    leaders = {Order.A_FIRST: ["A"], Order.B_FIRST: ["B"], Order.SIMULTANEOUS: ["A", "B"]}[spec.order]
    stack = [(who, cell) for who in leaders for cell in stackelberg(pm, who)]
    notes = []
    nash = pure_nash(pm)
    dom = sum_dominance(pm)
    inv = is_invertible_game(spec)
    if not nash:
        notes.append("no pure-strategy Nash equilibrium")
    if len(nash) == pm.e_a.size:
        notes.append("every cell is a Nash equilibrium: players are indifferent")
    if spec.order is not Order.SIMULTANEOUS and dom is not None:
        notes.append("sum dominance assumes a commuting game; order of play is fixed here")
    if inv.invertible:
        notes.append("B can undo every move of A (invertible game)")
    return EquilibriumReport(nash, dom, stack, inv, notes)
