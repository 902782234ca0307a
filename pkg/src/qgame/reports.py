"""JSON-ready report payloads for each CLI command.

Payloads contain only dicts, lists, strings, bools, ints and floats, with
cells in row-major order, so ``json.dumps(..., sort_keys=True)`` is
byte-stable for identical inputs.
"""
from __future__ import annotations

from typing import Optional

import numpy as np

from .coinsim import build_coin_game, verify_equivalence
from .entanglement import cell_classes, classify_game, classify_local_family
from .equilibria import analyze_equilibria, stackelberg, two_move_equilibrium_check
from .forms import FormKind, build_perspective, entangler, specs_equivalent
from .game import (
    GameSpec,
    MeasurementBasis,
    count_classical_preference_pairs,
    outcome_distribution,
    output_state,
    payoff_matrices,
)
from .specdoc import render
from .uncertainty import expectation_and_variance, outcome_operator, uncertainty_bound_check


def _cells(spec: GameSpec):
    p, q = spec.shape
    return [(i, j) for i in range(p) for j in range(q)]


def _cell(spec: GameSpec, cell) -> dict:
    i, j = cell
    return {"cell": [int(i), int(j)], "labels": [spec.ops_a[i].label, spec.ops_b[j].label]}


def _matrix(m: np.ndarray) -> list:
    return [[float(x) for x in row] for row in m]


def _fmt15(x: float) -> str:
    return format(float(x), ".15g")


def analyze(spec: GameSpec) -> dict:
    pm = payoff_matrices(spec)
    cells = []
    for i, j in _cells(spec):
        psi = output_state(spec, i, j)
        entry = _cell(spec, (i, j))
        entry["distribution"] = [float(x) for x in outcome_distribution(psi, spec.measurement)]
        entry["expected"] = {"A": float(pm.e_a[i, j]), "B": float(pm.e_b[i, j])}
        entry["state"] = [[float(a.real), float(a.imag)] for a in psi.amps]
        cells.append(entry)
    return {
        "game": spec.name,
        "order": spec.order.value,
        "shape": list(spec.shape),
        "row_labels": list(pm.row_labels),
        "col_labels": list(pm.col_labels),
        "payoffs": {"A": _matrix(pm.e_a), "B": _matrix(pm.e_b)},
        "cells": cells,
    }


def equilibria(spec: GameSpec, first_mover: Optional[str] = None) -> dict:
    pm = payoff_matrices(spec)
    rep = analyze_equilibria(spec, pm)
    stack = rep.stackelberg
    if first_mover:
        stack = [(first_mover.upper(), c) for c in stackelberg(pm, first_mover)]
    try:
        two_move = [dict(_cell(spec, c), identity_second_move=two_move_equilibrium_check(spec, c))
                    for c in _cells(spec)]
    except ValueError:
        two_move = None
    inv = rep.invertible
    return {
        "game": spec.name,
        "payoffs": {"A": _matrix(pm.e_a), "B": _matrix(pm.e_b)},
        "nash": [_cell(spec, c) for c in rep.nash_cells],
        "sum_dominance": _cell(spec, rep.sum_dominance) if rep.sum_dominance else None,
        "stackelberg": [dict(_cell(spec, c), first=who) for who, c in stack],
        "invertible": {"value": inv.invertible,
                       "witness": [inv.witness[0], inv.witness[1]]},
        "two_move": two_move,
        "notes": list(rep.notes),
    }


def classify(spec: GameSpec) -> dict:
    classes = cell_classes(spec)
    cells = []
    for i, j in _cells(spec):
        c = classes[i][j]
        cells.append(dict(_cell(spec, (i, j)), **{"class": c.kind.value, "ic": float(c.ic_value)}))
    return {"game": spec.name, "game_type": classify_game(spec).value, "cells": cells}


def coin_sim(spec: GameSpec, trials: int, seed: int, tol: float) -> dict:
    game = build_coin_game(spec)
    ver = verify_equivalence(spec, trials, seed, tol)
    table = []
    for cell in sorted(game.table):
        entry = _cell(spec, cell)
        entry["codewords"] = [game.codewords_a[cell[0]], game.codewords_b[cell[1]]]
        for who in ("A", "B"):
            d = game.distribution(cell, who)
            entry[who] = {"weights": [_fmt15(w) for w in d.weights], "probs": [_fmt15(p) for p in d.probs]}
        table.append(entry)
    return {
        "game": spec.name,
        "pass": ver.passed,
        "trials": trials,
        "seed": seed,
        "tol": tol,
        "kappa": {"A": game.kappa_a, "B": game.kappa_b},
        "worst": {"cell": list(ver.worst_cell) if ver.worst_cell else None,
                  "player": ver.worst_player, "deviation": ver.worst_deviation},
        "cells": ver.cells,
        "table": table,
    }


def transform(spec: GameSpec, kind: str, lam: float) -> dict:
    kind = FormKind(kind)
    t = entangler(lam)
    view = build_perspective(spec, kind, t)
    reference = {"MW": FormKind.MW0, "EWL": FormKind.EWL1, "Plain": FormKind.PLAIN}[kind.family]
    ref_view = build_perspective(spec, reference, t)
    vs_base = specs_equivalent(spec, view)
    vs_ref = specs_equivalent(ref_view, view)
    pm = payoff_matrices(view)
    return {
        "game": spec.name,
        "form": kind.value,
        "lambda": lam,
        "order": view.order.value,
        "payoffs": {"A": _matrix(pm.e_a), "B": _matrix(pm.e_b)},
        "equivalent_to_base": {"value": vs_base.equivalent, "min_fidelity": vs_base.min_fidelity,
                               "max_payoff_gap": vs_base.max_payoff_gap},
        "equivalent_to_reference": {"reference": reference.value, "value": vs_ref.equivalent,
                                    "min_fidelity": vs_ref.min_fidelity,
                                    "max_payoff_gap": vs_ref.max_payoff_gap},
        "document": render(view),
    }


def uncertainty(spec: GameSpec, second: MeasurementBasis) -> dict:
    rows = []
    for i, j in _cells(spec):
        psi = output_state(spec, i, j)
        for who in ("A", "B"):
            e1 = outcome_operator(spec.measurement, spec.pref(who), spec.weights)
            e2 = outcome_operator(second, spec.pref(who), spec.weights)
            m1, v1 = expectation_and_variance(psi, e1)
            m2, v2 = expectation_and_variance(psi, e2)
            b = uncertainty_bound_check(psi, e1, e2)
            rows.append(dict(_cell(spec, (i, j)), player=who, mean_1=float(m1), var_1=float(v1),
                             mean_2=float(m2), var_2=float(v2), lhs=float(b.lhs), rhs=float(b.rhs),
                             holds=bool(b.holds)))
    return {"game": spec.name, "second_basis": second.label, "pass": all(r["holds"] for r in rows),
            "cells": rows}


def compare_options(spec: GameSpec, lam: float, samples: int = 256, seed: int = 0) -> dict:
    """Plain play, the EWL1 form and the MW1A form of the same operator sets."""
    if spec.dim != 4:
        raise ValueError("compare-options needs a two-qubit game")
    t = entangler(lam)
    options = []
    for option, kind in (("1", FormKind.PLAIN), ("2", FormKind.EWL1), ("4", FormKind.MW1A)):
        view = build_perspective(spec, kind, t)
        pm = payoff_matrices(view)
        rep = analyze_equilibria(view, pm)
        fam = classify_local_family(t, kind.value, samples=samples, seed=seed, initial=spec.initial_state)
        options.append({
            "option": option,
            "form": kind.value,
            "game_type": classify_game(view).value,
            "payoffs": {"A": _matrix(pm.e_a), "B": _matrix(pm.e_b)},
            "nash": [_cell(view, c) for c in rep.nash_cells],
            "sum_dominance": _cell(view, rep.sum_dominance) if rep.sum_dominance else None,
            "stackelberg": [dict(_cell(view, c), first=who) for who, c in rep.stackelberg],
            "local_rotation_family": {"game_type": fam.game_type.value, "counts": fam.counts,
                                      "samples": fam.samples},
        })
    options.append({"option": "c", "form": "complete", "game_type": "Gc",
                    "note": "any two-qubit unitary is allowed; the game is invertible and has no pure equilibrium"})
    return {"game": spec.name, "lambda": lam, "options": options}


def enumerate_classical() -> dict:
    return {"count": count_classical_preference_pairs(4)}
