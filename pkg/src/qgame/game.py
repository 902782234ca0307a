"""The playable-game data model and payoff computation."""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from math import factorial
from typing import Iterator, Optional, Sequence

import numpy as np

from .qmath import (
    DimensionError,
    StateVector,
    UnitaryOperator,
    apply,
    commutator_norm,
)

COMMUTE_TOL = 1e-9
ORTHO_TOL = 1e-10


class Order(str, enum.Enum):
    A_FIRST = "A_first"
    B_FIRST = "B_first"
    SIMULTANEOUS = "simultaneous"


class SpecError(ValueError):
    """A game specification violates one of its invariants."""


@dataclass(frozen=True)
class PreferenceRelation:
    """Outcome indices (1-based) from most to least preferred."""

    ranking: tuple[int, ...]

    def __post_init__(self):
        ranking = tuple(int(k) for k in self.ranking)
        if sorted(ranking) != list(range(1, len(ranking) + 1)):
            raise SpecError(f"preference {ranking} is not a permutation of 1..{len(ranking)}")
        object.__setattr__(self, "ranking", ranking)

    def __len__(self) -> int:
        return len(self.ranking)

    def rank_of(self, outcome: int) -> int:
        """0-based rank of the 1-based outcome index."""
        return self.ranking.index(outcome)

    def state_weights(self, weights: "OutcomeWeights") -> np.ndarray:
        """Weight earned by each outcome, in outcome order."""
        if len(weights) != len(self):
            raise SpecError(f"{len(weights)} weights for {len(self)} outcomes")
        w = np.empty(len(self))
        for rank, outcome in enumerate(self.ranking):
            w[outcome - 1] = weights.values[rank]
        return w


@dataclass(frozen=True)
class OutcomeWeights:
    values: tuple[float, ...]

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        if not values:
            raise SpecError("weights must be non-empty")
        if any(a <= b for a, b in zip(values, values[1:])):
            raise SpecError(f"weights {values} are not strictly decreasing")
        object.__setattr__(self, "values", values)

    @classmethod
    def default(cls, n: int) -> "OutcomeWeights":
        return cls(tuple(float(n - k) for k in range(n)))

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class MeasurementBasis:
    eigenstates: tuple[StateVector, ...]
    label: str = ""

    def __post_init__(self):
        states = tuple(self.eigenstates)
        if not states:
            raise SpecError("measurement basis is empty")
        dim = states[0].dim
        if any(s.dim != dim for s in states):
            raise SpecError("measurement eigenstates have mixed dimensions")
        if len(states) != dim:
            raise SpecError(f"measurement basis has {len(states)} states for dimension {dim}")
        m = np.column_stack([s.amps for s in states])
        if np.linalg.norm(m.conj().T @ m - np.eye(dim)) > ORTHO_TOL:
            raise SpecError("measurement eigenstates are not orthonormal")
        object.__setattr__(self, "eigenstates", states)

    @classmethod
    def from_unitary(cls, u: np.ndarray, factors: Sequence[int], label: str = "") -> "MeasurementBasis":
        """Basis whose k-th eigenstate is column k of ``u``."""
        u = np.asarray(u, dtype=complex)
        return cls(tuple(StateVector(u[:, k], tuple(factors)) for k in range(u.shape[1])), label)

    @classmethod
    def computational(cls, factors: Sequence[int]) -> "MeasurementBasis":
        dim = int(np.prod(factors))
        return cls.from_unitary(np.eye(dim), factors, "computational")

    @property
    def dim(self) -> int:
        return self.eigenstates[0].dim

    @property
    def matrix(self) -> np.ndarray:
        """Columns are the eigenstates."""
        return np.column_stack([s.amps for s in self.eigenstates])


@dataclass(frozen=True)
class GameSpec:
    initial_state: StateVector
    ops_a: tuple[UnitaryOperator, ...]
    ops_b: tuple[UnitaryOperator, ...]
    measurement: MeasurementBasis
    pref_a: PreferenceRelation
    pref_b: PreferenceRelation
    order: Order = Order.A_FIRST
    weights: Optional[OutcomeWeights] = None
    # applied to the players' output before measurement (MW2, EWL3 perspectives)
    final_rotation: Optional[UnitaryOperator] = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "order", Order(self.order))
        ops_a = tuple(_labelled(o, f"a{k}") for k, o in enumerate(self.ops_a))
        ops_b = tuple(_labelled(o, f"b{k}") for k, o in enumerate(self.ops_b))
        object.__setattr__(self, "ops_a", ops_a)
        object.__setattr__(self, "ops_b", ops_b)
        if not ops_a or not ops_b:
            raise SpecError("both operator sets must be non-empty")
        n = self.initial_state.dim
        if self.weights is None:
            object.__setattr__(self, "weights", OutcomeWeights.default(n))
        for o in ops_a + ops_b:
            if o.dim != n:
                raise SpecError(f"operator {o.label} has dimension {o.dim}, state has {n}")
        if self.final_rotation is not None and self.final_rotation.dim != n:
            raise SpecError("final rotation dimension mismatch")
        if self.measurement.dim != n:
            raise SpecError(f"measurement dimension {self.measurement.dim} != state dimension {n}")
        for who, pref in (("A", self.pref_a), ("B", self.pref_b)):
            if len(pref) != n:
                raise SpecError(f"preference of {who} ranks {len(pref)} outcomes, need {n}")
        if len(self.weights) != n:
            raise SpecError(f"{len(self.weights)} weights for {n} outcomes")
        if self.order is Order.SIMULTANEOUS and not self.is_commuting():
            raise SpecError("simultaneous play requires every cross pair of operators to commute")

    @property
    def dim(self) -> int:
        return self.initial_state.dim

    @property
    def factors(self) -> tuple[int, ...]:
        return self.initial_state.factors

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.ops_a), len(self.ops_b)

    def is_commuting(self, tol: float = COMMUTE_TOL) -> bool:
        return all(commutator_norm(a, b) <= tol for a in self.ops_a for b in self.ops_b)

    def pref(self, player: str) -> PreferenceRelation:
        return {"A": self.pref_a, "B": self.pref_b}[_player(player)]

    def replace(self, **changes) -> "GameSpec":
        kwargs = {f: getattr(self, f) for f in self.__dataclass_fields__}
        kwargs.update(changes)
        return GameSpec(**kwargs)


def _labelled(o: UnitaryOperator, fallback: str) -> UnitaryOperator:
    return o if o.label else o.relabel(fallback)


def _player(player: str) -> str:
    p = str(player).upper()
    if p not in ("A", "B"):
        raise ValueError(f"player must be 'A' or 'B', got {player!r}")
    return p


@dataclass(frozen=True)
class PayoffMatrices:
    e_a: np.ndarray
    e_b: np.ndarray
    row_labels: tuple[str, ...] = ()
    col_labels: tuple[str, ...] = ()

    def __post_init__(self):
        e_a = np.array(self.e_a, dtype=float)
        e_b = np.array(self.e_b, dtype=float)
        if e_a.shape != e_b.shape or e_a.ndim != 2:
            raise ValueError(f"payoff shapes differ: {e_a.shape} vs {e_b.shape}")
        e_a.setflags(write=False)
        e_b.setflags(write=False)
        object.__setattr__(self, "e_a", e_a)
        object.__setattr__(self, "e_b", e_b)
        p, q = e_a.shape
        if not self.row_labels:
            object.__setattr__(self, "row_labels", tuple(f"a{i}" for i in range(p)))
        if not self.col_labels:
            object.__setattr__(self, "col_labels", tuple(f"b{j}" for j in range(q)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.e_a.shape


def output_state(spec: GameSpec, i: int, j: int) -> StateVector:
    """State handed to the measurement when A plays ops_a[i] and B plays ops_b[j]."""
    p, q = spec.shape
    if not (0 <= i < p and 0 <= j < q):
        raise IndexError(f"cell ({i}, {j}) outside the {p}x{q} game")
    alpha, beta = spec.ops_a[i], spec.ops_b[j]
    if spec.order is Order.B_FIRST:
        psi = apply(alpha, apply(beta, spec.initial_state))
    else:
        psi = apply(beta, apply(alpha, spec.initial_state))
    if spec.final_rotation is not None:
        psi = apply(spec.final_rotation, psi)
    return psi


def outcome_distribution(state: StateVector, m: MeasurementBasis) -> np.ndarray:
    """Born probabilities |<phi_k|psi>|^2 in basis order."""
    if state.dim != m.dim:
        raise DimensionError(f"state dimension {state.dim} vs measurement dimension {m.dim}")
    probs = np.abs(m.matrix.conj().T @ state.amps) ** 2
    return probs / probs.sum()


def expected_from_probs(probs: np.ndarray, pref: PreferenceRelation, weights: OutcomeWeights) -> float:
    return float(pref.state_weights(weights) @ probs)


def expected_outcome(spec: GameSpec, i: int, j: int, player: str) -> float:
    probs = outcome_distribution(output_state(spec, i, j), spec.measurement)
    return expected_from_probs(probs, spec.pref(player), spec.weights)


def payoff_matrices(spec: GameSpec) -> PayoffMatrices:
    p, q = spec.shape
    w_a = spec.pref_a.state_weights(spec.weights)
    w_b = spec.pref_b.state_weights(spec.weights)
    e_a = np.empty((p, q))
    e_b = np.empty((p, q))
    for i in range(p):
        for j in range(q):
            probs = outcome_distribution(output_state(spec, i, j), spec.measurement)
            e_a[i, j] = w_a @ probs
            e_b[i, j] = w_b @ probs
    return PayoffMatrices(
        e_a, e_b,
        tuple(o.label for o in spec.ops_a),
        tuple(o.label for o in spec.ops_b),
    )


@dataclass(frozen=True)
class SequentialPlay:
    """Outcome of a multi-round game plus one equivalent single-move factorization.

    For A-first rounds ``state == beta @ alpha |psi0>``: ``beta`` is B's final
    move and ``alpha`` absorbs every earlier operation. B-first rounds swap roles.
    """

    state: StateVector
    alpha: UnitaryOperator
    beta: UnitaryOperator
    moves: tuple[tuple[int, int], ...] = field(default=())


def compose_sequential(spec: GameSpec, moves: Sequence[tuple[int, int]]) -> SequentialPlay:
    if not moves:
        raise ValueError("a sequential game needs at least one move")
    p, q = spec.shape
    b_first = spec.order is Order.B_FIRST
    chain: list[UnitaryOperator] = []
    for i, j in moves:
        if not (0 <= i < p and 0 <= j < q):
            raise IndexError(f"move ({i}, {j}) outside the {p}x{q} game")
        a, b = spec.ops_a[i], spec.ops_b[j]
        chain.extend((b, a) if b_first else (a, b))

    state = spec.initial_state
    for o in chain:
        state = apply(o, state)

    first = chain[0]
    for o in chain[1:-1]:
        first = o @ first
    last = chain[-1]
    if len(chain) > 2:
        first = first.relabel(f"{'B' if b_first else 'A'}'")
    alpha, beta = (last, first) if b_first else (first, last)
    return SequentialPlay(state, alpha, beta, tuple((int(i), int(j)) for i, j in moves))


def classical_preference_pairs(n: int = 4) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Every (P_A, P_B) over n outcomes whose most-preferred outcomes differ."""
    perms = list(itertools.permutations(range(1, n + 1)))
    for pa in perms:
        for pb in perms:
            if pa[0] != pb[0]:
                yield pa, pb


def count_classical_preference_pairs(n: int = 4) -> int:
    return sum(1 for _ in classical_preference_pairs(n))


def count_preference_pairs_closed_form(n: int = 4) -> int:
    """n! * (n! - (n-1)!): B's favourite must avoid A's."""
    return factorial(n) * (factorial(n) - factorial(n - 1))
