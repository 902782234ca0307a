"""MW / EWL game forms and their equivalent perspectives.

An MW-type game measures beta alpha T|psi0>; an EWL-type game measures
T^-1 beta alpha T|psi0>. Each form can be rewritten by moving T into the
input state, into one or both operator sets, or into a final rotation.
``build_perspective`` produces each rewriting from a plain base game.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .game import GameSpec, Order, output_state, payoff_matrices
from .qmath import DimensionError, UnitaryOperator, apply, fidelity

_S = 1 / np.sqrt(2)
_PSI_PLUS = np.array([0, _S, _S, 0])


class FormKind(str, enum.Enum):
    PLAIN = "Plain"
    MW0 = "MW0"
    MW1A = "MW1A"
    MW1B = "MW1B"
    MW2 = "MW2"
    EWL0A = "EWL0A"
    EWL0B = "EWL0B"
    EWL1 = "EWL1"
    EWL2A = "EWL2A"
    EWL2B = "EWL2B"
    EWL3A = "EWL3A"
    EWL3B = "EWL3B"

    @property
    def family(self) -> str:
        if self is FormKind.PLAIN:
            return "Plain"
        return "MW" if self.value.startswith("MW") else "EWL"

    @property
    def forced_order(self) -> Optional[Order]:
        if self.value.endswith("A"):
            return Order.A_FIRST
        if self.value.endswith("B"):
            return Order.B_FIRST
        return None


MW_KINDS = tuple(k for k in FormKind if k.family == "MW")
EWL_KINDS = tuple(k for k in FormKind if k.family == "EWL")


def entangler(lam: float) -> UnitaryOperator:
    """Rotation by ``lam`` in the plane of |00> and (|01>+|10>)/sqrt(2).

    (|01>-|10>)/sqrt(2) and |11> are left fixed, so entangler(pi/2)|00> is
    (|01>+|10>)/sqrt(2) and entangler(0) is the identity.
    """
    e00 = np.array([1.0, 0, 0, 0])
    c, s = np.cos(lam), np.sin(lam)
    plane = np.outer(e00, e00) + np.outer(_PSI_PLUS, _PSI_PLUS)
    m = (np.eye(4) + (c - 1) * plane
         + s * (np.outer(_PSI_PLUS, e00) - np.outer(e00, _PSI_PLUS)))
    return UnitaryOperator(m, f"T({lam:.6g})", (2, 2))


@dataclass(frozen=True)
class GameForm:
    kind: FormKind
    entangler: UnitaryOperator
    final_rotation: Optional[UnitaryOperator] = None

    def __post_init__(self):
        kind = FormKind(self.kind)
        object.__setattr__(self, "kind", kind)
        wants = kind in (FormKind.MW2, FormKind.EWL3A, FormKind.EWL3B)
        if wants != (self.final_rotation is not None):
            raise ValueError(f"{kind.value} {'requires' if wants else 'forbids'} a final rotation")


def _right(ops, t: UnitaryOperator):
    return tuple((o @ t).relabel(f"{o.label}·T") for o in ops)


def _left_inv(ops, t: UnitaryOperator):
    ti = t.dagger
    return tuple((ti @ o).relabel(f"T⁻¹·{o.label}") for o in ops)


def _conj(ops, t: UnitaryOperator):
    ti = t.dagger
    return tuple((ti @ o @ t).relabel(f"T⁻¹·{o.label}·T") for o in ops)


def form_of(kind, t: UnitaryOperator) -> GameForm:
    kind = FormKind(kind)
    rot = {FormKind.MW2: t, FormKind.EWL3A: t.dagger, FormKind.EWL3B: t.dagger}.get(kind)
    return GameForm(kind, t, rot)


def build_perspective(base: GameSpec, kind, t: UnitaryOperator) -> GameSpec:
    """Rewrite a plain base game as one perspective of its MW or EWL form under ``t``."""
    kind = FormKind(kind)
    if t.dim != base.dim:
        raise DimensionError(f"entangler dimension {t.dim} != game dimension {base.dim}")
    if base.final_rotation is not None:
        raise ValueError("base game already carries a final rotation")
    forced = kind.forced_order
    if forced is not None and base.order not in (Order.SIMULTANEOUS, forced):
        raise ValueError(f"{kind.value} requires {forced.value} play but the base game is {base.order.value}")
    order = forced or base.order
    psi0, xi0 = base.initial_state, apply(t, base.initial_state)
    A, B = base.ops_a, base.ops_b
    form = form_of(kind, t)

    table = {
        FormKind.PLAIN: (psi0, A, B),
        FormKind.MW0: (xi0, A, B),
        FormKind.MW1A: (psi0, _right(A, t), B),
        FormKind.MW1B: (psi0, A, _right(B, t)),
        FormKind.MW2: (psi0, _conj(A, t), _conj(B, t)),
        FormKind.EWL0A: (xi0, A, _left_inv(B, t)),
        FormKind.EWL0B: (xi0, _left_inv(A, t), B),
        FormKind.EWL1: (psi0, _conj(A, t), _conj(B, t)),
        FormKind.EWL2A: (psi0, _right(A, t), _left_inv(B, t)),
        FormKind.EWL2B: (psi0, _left_inv(A, t), _right(B, t)),
        FormKind.EWL3A: (psi0, _right(A, t), B),
        FormKind.EWL3B: (psi0, A, _right(B, t)),
    }
    state, ops_a, ops_b = table[kind]
    name = f"{base.name}:{kind.value}" if base.name else kind.value
    return base.replace(initial_state=state, ops_a=ops_a, ops_b=ops_b, order=order,
                        final_rotation=form.final_rotation, name=name)


@dataclass
class EquivalenceReport:
    equivalent: bool
    min_fidelity: float
    max_payoff_gap: float
    worst_cell: tuple[int, int]
    details: list[str] = field(default_factory=list)


def specs_equivalent(s1: GameSpec, s2: GameSpec, tol: float = 1e-9) -> EquivalenceReport:
    """Same measured state (up to phase) and same payoffs in every cell."""
    if s1.shape != s2.shape:
        raise ValueError(f"operator-set sizes differ: {s1.shape} vs {s2.shape}")
    if s1.measurement.dim != s2.measurement.dim or not np.allclose(
            s1.measurement.matrix, s2.measurement.matrix, atol=1e-12):
        raise ValueError("games use different measurements")
    pm1, pm2 = payoff_matrices(s1), payoff_matrices(s2)
    gap = np.maximum(np.abs(pm1.e_a - pm2.e_a), np.abs(pm1.e_b - pm2.e_b))
    p, q = s1.shape
    fids = np.array([[fidelity(output_state(s1, i, j), output_state(s2, i, j)) for j in range(q)]
                     for i in range(p)])
    worst = np.unravel_index(np.argmax(gap - fids), gap.shape)
    details = [f"cell ({i}, {j}): fidelity {fids[i, j]:.12f}, payoff gap {gap[i, j]:.3e}"
               for i in range(p) for j in range(q)
               if fids[i, j] < 1 - tol or gap[i, j] > tol]
    ok = bool(fids.min() >= 1 - tol and gap.max() <= tol)
    return EquivalenceReport(ok, float(fids.min()), float(gap.max()),
                             (int(worst[0]), int(worst[1])), details)


def factor_evolution(u: UnitaryOperator, alpha: UnitaryOperator) -> UnitaryOperator:
    """The beta with beta @ alpha == u; the caller picks alpha since the split is not unique."""
    if u.dim != alpha.dim:
        raise DimensionError(f"evolution dimension {u.dim} != alpha dimension {alpha.dim}")
    beta = u @ alpha.dagger
    return beta.relabel("beta")
