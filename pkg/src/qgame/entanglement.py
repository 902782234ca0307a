"""Index of correlation and the product / partial / maximal partition of 2-party pure states."""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import gates
from .game import GameSpec, output_state
from .qmath import (
    DimensionError,
    StateVector,
    UnitaryOperator,
    apply,
    random_unitary,
    reduced_density,
    von_neumann_entropy,
)

CLASS_TOL = 1e-9


class EntanglementKind(str, enum.Enum):
    PRODUCT = "Product"
    PARTIAL = "Partial"
    MAXIMAL = "Maximal"


class GameType(str, enum.Enum):
    G1 = "G1"
    G2 = "G2"
    G3 = "G3"
    G4 = "G4"
    GC = "Gc"
    MIXED = "Mixed"


@dataclass(frozen=True)
class EntanglementClass:
    kind: EntanglementKind
    ic_value: float


def _two_factor(state: StateVector) -> None:
    if len(state.factors) != 2:
        raise DimensionError(f"index of correlation needs a 2-factor state, got factors {state.factors}")


def index_of_correlation(state: StateVector) -> float:
    """S_A + S_B in nats."""
    _two_factor(state)
    return (von_neumann_entropy(reduced_density(state, 0))
            + von_neumann_entropy(reduced_density(state, 1)))


def max_index_of_correlation(state: StateVector) -> float:
    return 2 * np.log(min(state.factors))


def classify_state(state: StateVector, tol: float = CLASS_TOL) -> EntanglementClass:
    ic = index_of_correlation(state)
    if ic <= tol:
        kind = EntanglementKind.PRODUCT
    elif abs(ic - max_index_of_correlation(state)) <= tol:
        kind = EntanglementKind.MAXIMAL
    else:
        kind = EntanglementKind.PARTIAL
    return EntanglementClass(kind, ic)


def game_type_of(kinds: Iterable[EntanglementKind]) -> GameType:
    seen = set(kinds)
    P, Q, M = EntanglementKind.PRODUCT, EntanglementKind.PARTIAL, EntanglementKind.MAXIMAL
    if seen == {P}:
        return GameType.G1
    if seen == {P, Q}:
        return GameType.G2
    if seen == {Q}:
        return GameType.G3
    if seen == {M}:
        return GameType.G4
    return GameType.MIXED


def cell_classes(spec: GameSpec) -> list[list[EntanglementClass]]:
    p, q = spec.shape
    return [[classify_state(output_state(spec, i, j)) for j in range(q)] for i in range(p)]


def classify_game(spec: GameSpec, unrestricted: bool = False) -> GameType:
    """Game type from the classes of all p*q reachable output states.

    ``unrestricted`` declares that the players may use any unitary, which is Gc
    regardless of the listed operators.
    """
    if unrestricted:
        return GameType.GC
    return game_type_of(c.kind for row in cell_classes(spec) for c in row)


def _su2(rng: np.random.Generator) -> np.ndarray:
    u = random_unitary(2, rng)
    return u / np.sqrt(np.linalg.det(u))


@dataclass(frozen=True)
class FamilyClassification:
    game_type: GameType
    counts: dict
    samples: int


def classify_local_family(t: UnitaryOperator, kind: str, samples: int = 256, seed: int = 0,
                          initial: StateVector = None) -> FamilyClassification:
    """Classify a game whose players pick arbitrary single-qubit rotations of their own particle.

    ``kind`` is "Plain", "EWL1" or "MW1A". The continuous family is sampled
    with ``samples`` random SU(2) pairs plus the four flip / no-flip pairs,
    which belong to every such family.
    """
    initial = initial if initial is not None else gates.ground()
    rng = np.random.default_rng(seed)
    pairs = [(a, b) for a in (gates.I2, gates.FLIP) for b in (gates.I2, gates.FLIP)]
    pairs += [(_su2(rng), _su2(rng)) for _ in range(samples)]
    tm, ti = t.matrix, t.matrix.conj().T
    counts: Counter = Counter()
    for ua, ub in pairs:
        local = np.kron(ua, ub)
        if kind == "Plain":
            m = local
        elif kind == "EWL1":
            m = ti @ local @ tm
        elif kind == "MW1A":
            m = local @ tm
        else:
            raise ValueError(f"unsupported family kind {kind!r}")
        psi = apply(UnitaryOperator(m, factors=(2, 2)), initial)
        counts[classify_state(psi).kind] += 1
    return FamilyClassification(game_type_of(counts), {k.value: v for k, v in sorted(counts.items())},
                                len(pairs))
