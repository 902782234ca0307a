"""Acceptance criteria, one test each. Run with ``pytest tests/test_acceptance.py -s``
to see the PASS/FAIL line printed for every criterion."""
import contextlib
import itertools
import json
import math
import time

import numpy as np
import pytest

import oracles
from qgame import gates, presets
from qgame.cli import main
from qgame.coinsim import build_coin_game, verify_equivalence
from qgame.entanglement import GameType, classify_game, index_of_correlation
from qgame.equilibria import pure_nash, sum_dominance, two_move_equilibrium_check
from qgame.forms import EWL_KINDS, MW_KINDS, build_perspective, entangler
from qgame.game import (
    MeasurementBasis,
    OutcomeWeights,
    PreferenceRelation,
    count_classical_preference_pairs,
    expected_outcome,
    output_state,
    payoff_matrices,
)
from qgame.qmath import StateVector, UnitaryOperator, apply, random_state, random_unitary
from qgame.specdoc import load_spec
from qgame.uncertainty import expectation_and_variance, outcome_operator, uncertainty_bound_check

LN2 = math.log(2)


@contextlib.contextmanager
def criterion(number, title, budget=None):
    start = time.perf_counter()
    try:
        yield
        elapsed = time.perf_counter() - start
        if budget is not None:
            assert elapsed < budget, f"took {elapsed:.2f}s, budget {budget}s"
    except BaseException as exc:
        print(f"\nFAIL criterion {number}: {title} ({exc})")
        raise
    print(f"\nPASS criterion {number}: {title} ({time.perf_counter() - start:.2f}s)")


def test_criterion_01_classical_enumeration(capsys):
    with criterion(1, "432 classical preference pairs", budget=1.0):
        main(["enumerate-classical", "--json"])
        assert json.loads(capsys.readouterr().out) == {"count": 432}
        assert count_classical_preference_pairs(4) == 432
        # brute force: for each of A's 24 rankings, B may lead with any of the other 3 outcomes
        brute = 0
        for pa in itertools.permutations(range(4)):
            brute += sum(1 for pb in itertools.permutations(range(4)) if pb[0] != pa[0])
        assert brute == 24 * 18 == 432


def test_criterion_02_entangled_pd_indifference():
    with criterion(2, "entangled PD: every entry 2.5, four Nash cells", budget=1.0):
        spec = load_spec("pd-entangled")
        assert np.allclose(spec.initial_state.amps, [0, 1 / math.sqrt(2), 1 / math.sqrt(2), 0], atol=1e-15)
        assert spec.weights.values == (4, 3, 2, 1)
        pm = payoff_matrices(spec)
        assert np.abs(pm.e_a - 2.5).max() <= 1e-12
        assert np.abs(pm.e_b - 2.5).max() <= 1e-12
        assert sorted(pure_nash(pm)) == [(0, 0), (0, 1), (1, 0), (1, 1)]
        assert sorted(oracles.brute_nash(pm.e_a, pm.e_b)) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_criterion_03_rotated_amplitude_table():
    with criterion(3, "rotated-input amplitudes on 20 random tuples"):
        rng = np.random.default_rng(3)
        for _ in range(20):
            th, ph, th2, ph2 = rng.uniform(0, 2 * math.pi, 4)
            spec = presets.pd_rotated_input(th, ph, th2, ph2)
            table = oracles.rotated_amplitudes(th, ph, th2, ph2)
            for cell, ref in table.items():
                psi = output_state(spec, *cell).amps
                phase = np.vdot(ref, psi)
                assert np.abs(psi - phase * np.asarray(ref)).max() <= 1e-12
            p1, p2, p3, p4 = (abs(x) ** 2 for x in table[(0, 0)])
            assert abs(expected_outcome(spec, 0, 0, "A") - (4 * p2 + 3 * p1 + 2 * p4 + p3)) <= 1e-12
        flat = payoff_matrices(presets.pd_rotated_input(math.pi / 2, 0, math.pi / 2, 0))
        assert np.abs(flat.e_a - 2.5).max() <= 1e-12 and np.abs(flat.e_b - 2.5).max() <= 1e-12


def test_criterion_04_pd_equilibria():
    with criterion(4, "PD equilibria match the brute-force oracle"):
        pm = payoff_matrices(load_spec("pd-paper"))
        assert pure_nash(pm) == [(0, 0)] == oracles.brute_nash(pm.e_a, pm.e_b)
        assert sum_dominance(pm) == (0, 0)
        pm = payoff_matrices(load_spec("pd-standard"))
        assert pure_nash(pm) == [(1, 1)] == oracles.brute_nash(pm.e_a, pm.e_b)
        assert load_spec("pd-standard").ops_a[1].label == "FLIP"


def test_criterion_05_entanglement():
    with criterion(5, "index of correlation and G1/G4/G2 classes"):
        bell = StateVector(np.array([1, 0, 0, 1]) / math.sqrt(2), (2, 2))
        assert abs(index_of_correlation(bell) - 2 * LN2) <= 1e-9
        assert abs(oracles.index_of_correlation_2q(bell.amps) - 2 * LN2) <= 1e-9
        rng = np.random.default_rng(5)
        psi = random_state(4, rng, (2, 2))
        ic = index_of_correlation(psi)
        for _ in range(200):
            local = UnitaryOperator(np.kron(random_unitary(2, rng), random_unitary(2, rng)), factors=(2, 2))
            assert abs(index_of_correlation(apply(local, psi)) - ic) <= 1e-9
        assert classify_game(load_spec("pd-paper")) is GameType.G1
        assert classify_game(load_spec("pd-mw")) is GameType.G4
        assert classify_game(load_spec("pd-ewl")) is GameType.G2


def test_criterion_06_form_equivalence():
    with criterion(6, "MW and EWL perspectives agree within each family, differ across"):
        base = load_spec("pd-paper")
        t = entangler(math.pi / 2)
        for family in (MW_KINDS, EWL_KINDS):
            mats = [payoff_matrices(build_perspective(base, kind, t)) for kind in family]
            for pm in mats[1:]:
                assert np.abs(pm.e_a - mats[0].e_a).max() <= 1e-9
                assert np.abs(pm.e_b - mats[0].e_b).max() <= 1e-9
        assert len(MW_KINDS) == 4 and len(EWL_KINDS) == 7
        mw = payoff_matrices(build_perspective(base, MW_KINDS[0], t))
        ewl = payoff_matrices(build_perspective(base, EWL_KINDS[0], t))
        assert max(np.abs(mw.e_a - ewl.e_a).max(), np.abs(mw.e_b - ewl.e_b).max()) > 1e-9


def test_criterion_07_coin_simulation():
    with criterion(7, "classical coin game reproduces the quantum payoffs", budget=10.0):
        for name in ("pd-paper", "pd-rotated-input", "pd-entangled"):
            spec = load_spec(name)
            rep = verify_equivalence(spec, 100_000, 2024, 0.02)
            assert rep.passed, (name, rep.worst_deviation)
            game = build_coin_game(spec)
            for (i, j), row in game.table.items():
                for who in ("A", "B"):
                    assert abs(row[who].mean - expected_outcome(spec, i, j, who)) <= 1e-12


def test_criterion_08_uncertainty_bound():
    with criterion(8, "variance bound on 1000 states, flat conjugate payoff"):
        comp = MeasurementBasis.computational((2, 2))
        had = presets.hadamard2()
        w = OutcomeWeights.default(4)
        pref = PreferenceRelation((2, 1, 4, 3))
        e1, e2 = outcome_operator(comp, pref, w), outcome_operator(had, pref, w)
        rng = np.random.default_rng(8)
        for _ in range(1000):
            psi = random_state(4, rng, (2, 2))
            chk = uncertainty_bound_check(psi, e1, e2)
            _, v1 = oracles.mean_and_variance(psi.amps, e1.matrix)
            _, v2 = oracles.mean_and_variance(psi.amps, e2.matrix)
            comm = e1.matrix @ e2.matrix - e2.matrix @ e1.matrix
            rhs = abs(psi.amps.conj() @ comm @ psi.amps) ** 2 / 4
            assert chk.holds and v1 * v2 >= rhs - 1e-9
        for k in range(4):
            mean, _ = expectation_and_variance(StateVector.basis(k, (2, 2)), e2)
            assert abs(mean - 2.5) <= 1e-12


def test_criterion_09_pauli_game_has_no_pure_equilibrium():
    with criterion(9, "Pauli-group game has empty pure Nash"):
        spec = load_spec("pauli-invertible")
        assert [o.label for o in spec.ops_a] == ["I", "X", "Y", "Z"]
        pm = payoff_matrices(spec)
        assert pm.e_a.shape == (4, 4)
        assert pure_nash(pm) == [] == oracles.brute_nash(pm.e_a, pm.e_b)


def test_criterion_10_two_move_identity_test():
    with criterion(10, "two-move identity test agrees with Nash on plain PD"):
        spec = load_spec("pd-paper")
        nash = set(pure_nash(payoff_matrices(spec)))
        for cell in itertools.product(range(2), range(2)):
            assert two_move_equilibrium_check(spec, cell) == (cell in nash)


@pytest.fixture(autouse=True)
def _flip_is_exact():
    # every criterion above relies on FLIP being exactly i sigma_x
    assert np.array_equal(gates.FLIP, 1j * gates.SIGMA_X)
