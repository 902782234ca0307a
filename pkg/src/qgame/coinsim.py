"""Classical coin simulation of a finite quantum game.

Each player encodes their operator index as a string of coins. A referee
looks up the cell and draws each player's reward from a table of
probabilities computed once from the quantum game; no quantum state is
involved at play time.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil, log2
from typing import Optional

import numpy as np

from .game import GameSpec, expected_outcome, outcome_distribution, output_state

Cell = tuple[int, int]


def coin_count(size: int) -> int:
    return 0 if size <= 1 else ceil(log2(size))


def codewords(size: int) -> tuple[str, ...]:
    """Operator index -> coin string ('0' tails, '1' heads); unused strings stay invalid."""
    kappa = coin_count(size)
    return tuple(format(i, f"0{kappa}b") if kappa else "" for i in range(size))


@dataclass(frozen=True)
class RewardDistribution:
    """Reward values (most preferred first) and their probabilities."""

    weights: tuple[float, ...]
    probs: tuple[float, ...]

    @property
    def mean(self) -> float:
        return float(np.dot(self.weights, self.probs))


@dataclass(frozen=True)
class ClassicalCoinGame:
    kappa_a: int
    kappa_b: int
    codewords_a: tuple[str, ...]
    codewords_b: tuple[str, ...]
    # (i, j) -> {"A": RewardDistribution, "B": RewardDistribution}
    table: dict = field(repr=False)
    labels_a: tuple[str, ...] = ()
    labels_b: tuple[str, ...] = ()

    def cell_of(self, word_a: str, word_b: str) -> Cell:
        try:
            return self.codewords_a.index(word_a), self.codewords_b.index(word_b)
        except ValueError:
            raise KeyError(f"invalid codeword pair ({word_a!r}, {word_b!r})") from None

    def distribution(self, cell: Cell, player: str) -> RewardDistribution:
        if tuple(cell) not in self.table:
            raise KeyError(f"cell {cell} is not in the coin game table")
        return self.table[tuple(cell)][player.upper()]


def build_coin_game(spec: GameSpec) -> ClassicalCoinGame:
    """Tabulate, per cell and player, the probability of each reward value.

    The probability of the k-th reward is the Born probability of the
    outcome the player ranks k-th.
    """
    p, q = spec.shape
    weights = spec.weights.values
    table = {}
    for i in range(p):
        for j in range(q):
            probs = outcome_distribution(output_state(spec, i, j), spec.measurement)
            table[(i, j)] = {
                who: RewardDistribution(weights, tuple(float(probs[k - 1]) for k in spec.pref(who).ranking))
                for who in ("A", "B")
            }
    return ClassicalCoinGame(
        coin_count(p), coin_count(q), codewords(p), codewords(q), table,
        tuple(o.label for o in spec.ops_a), tuple(o.label for o in spec.ops_b),
    )


def _stream(seed: int, cell: Cell, player: str) -> np.random.Generator:
    # one independent substream per (seed, cell, player)
    ss = np.random.SeedSequence(int(seed) & (2**64 - 1), spawn_key=(cell[0], cell[1], ord(player)))
    return np.random.Generator(np.random.PCG64(ss))


def _draw_mean(dist: RewardDistribution, trials: int, rng: np.random.Generator) -> float:
    probs = np.clip(np.array(dist.probs), 0.0, None)
    probs /= probs.sum()
    counts = rng.multinomial(trials, probs)
    return float(np.dot(counts / trials, dist.weights))


def simulate(game: ClassicalCoinGame, cell: Cell, trials: int, seed: int) -> dict[str, float]:
    """Empirical mean reward per player over ``trials`` independent rounds of one cell."""
    if trials < 1:
        raise ValueError("trials must be positive")
    cell = (int(cell[0]), int(cell[1]))
    if cell not in game.table:
        raise KeyError(f"cell {cell} is not in the coin game table")
    return {who: _draw_mean(game.distribution(cell, who), trials, _stream(seed, cell, who))
            for who in ("A", "B")}


@dataclass
class CoinVerification:
    passed: bool
    worst_cell: Optional[Cell]
    worst_player: Optional[str]
    worst_deviation: float
    trials: int
    seed: int
    tol: float
    cells: list = field(default_factory=list)


def verify_equivalence(spec: GameSpec, trials: int, seed: int, tol: float) -> CoinVerification:
    """Play every cell of the coin game and compare with the quantum expected outcomes."""
    game = build_coin_game(spec)
    worst = (None, None, 0.0)
    rows = []
    for cell in sorted(game.table):
        empirical = simulate(game, cell, trials, seed)
        for who in ("A", "B"):
            quantum = expected_outcome(spec, cell[0], cell[1], who)
            dev = abs(empirical[who] - quantum)
            rows.append({"cell": list(cell), "player": who, "quantum": quantum,
                         "analytic": game.distribution(cell, who).mean,
                         "empirical": empirical[who], "deviation": dev})
            if worst[0] is None or dev > worst[2]:
                worst = (cell, who, dev)
    return CoinVerification(worst[2] <= tol, worst[0], worst[1], worst[2], trials, seed, tol, rows)
