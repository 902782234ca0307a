"""Finite two-player quantum games: payoffs, equilibria, MW/EWL forms,
entanglement classes, classical coin simulation and the variance bound."""
from .coinsim import ClassicalCoinGame, build_coin_game, simulate, verify_equivalence
from .entanglement import (
    EntanglementKind,
    GameType,
    classify_game,
    classify_local_family,
    classify_state,
    index_of_correlation,
)
from .equilibria import (
    analyze_equilibria,
    is_invertible_game,
    pure_nash,
    stackelberg,
    sum_dominance,
    two_move_equilibrium_check,
)
from .forms import FormKind, build_perspective, entangler, specs_equivalent
from .game import (
    GameSpec,
    MeasurementBasis,
    Order,
    OutcomeWeights,
    PreferenceRelation,
    SpecError,
    compose_sequential,
    count_classical_preference_pairs,
    expected_outcome,
    output_state,
    payoff_matrices,
)
from .qmath import DensityMatrix, DimensionError, StateVector, UnitaryOperator
from .specdoc import DocumentError, load_spec, parse_spec, render
from .uncertainty import OutcomeOperator, outcome_operator, uncertainty_bound_check

__version__ = "0.1.0"

__all__ = [
    "ClassicalCoinGame",
    "DensityMatrix",
    "DimensionError",
    "DocumentError",
    "EntanglementKind",
    "FormKind",
    "GameSpec",
    "GameType",
    "MeasurementBasis",
    "Order",
    "OutcomeOperator",
    "OutcomeWeights",
    "PreferenceRelation",
    "SpecError",
    "StateVector",
    "UnitaryOperator",
    "analyze_equilibria",
    "build_coin_game",
    "build_perspective",
    "classify_game",
    "classify_local_family",
    "classify_state",
    "compose_sequential",
    "count_classical_preference_pairs",
    "entangler",
    "expected_outcome",
    "index_of_correlation",
    "is_invertible_game",
    "load_spec",
    "outcome_operator",
    "output_state",
    "parse_spec",
    "payoff_matrices",
    "pure_nash",
    "render",
    "simulate",
    "specs_equivalent",
    "stackelberg",
    "sum_dominance",
    "two_move_equilibrium_check",
    "uncertainty_bound_check",
    "verify_equivalence",
]
