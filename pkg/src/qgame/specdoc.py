"""Game documents: YAML text <-> GameSpec.

A document lists the tensor factors, the initial state, each player's
operators (gate expressions) and preference, optional outcome weights, the
order of play, the measurement, and optionally an MW/EWL form to apply.
Structure is checked against ``data/gamespec.schema.json``; every error
carries the line and column of the offending YAML node.
"""
from __future__ import annotations

import json
import re
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any, Optional

import jsonschema
import numpy as np
import yaml

from . import gates
from .expr import ExprError, format_matrix, format_scalar, parse_gate, parse_real, parse_scalar
from .forms import FormKind, build_perspective, entangler
from .game import GameSpec, MeasurementBasis, Order, OutcomeWeights, PreferenceRelation, SpecError
from .presets import hadamard2, rotated_measurement
from .qmath import StateVector, UnitaryOperator


class DocumentError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.message = message
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


class DocumentSyntaxError(DocumentError):
    pass


class DocumentValidationError(DocumentError):
    pass


@lru_cache(maxsize=1)
def schema() -> dict:
    text = resources.files("qgame").joinpath("data/gamespec.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def fixture_names() -> list[str]:
    root = resources.files("qgame").joinpath("fixtures")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".yaml"))


def fixture_text(name: str) -> str:
    return resources.files("qgame").joinpath(f"fixtures/{name}.yaml").read_text(encoding="utf-8")


def _marks(node, path=()) -> dict:
    """Map each path in the document to the (line, column, quoted) of its YAML node."""
    out = {path: (node.start_mark.line + 1, node.start_mark.column + 1,
                  getattr(node, "style", None) in ("'", '"'))}
    if isinstance(node, yaml.MappingNode):
        for k, v in node.value:
            out.update(_marks(v, path + (k.value,)))
    elif isinstance(node, yaml.SequenceNode):
        for idx, v in enumerate(node.value):
            out.update(_marks(v, path + (idx,)))
    return out


class _Builder:
    def __init__(self, data: dict, marks: dict):
        self.data = data
        self.marks = marks

    def fail(self, path: tuple, message: str, offset: int = 0):
        while path not in self.marks and path:
            path = path[:-1]
        line, col, quoted = self.marks.get(path, (None, None, False))
        if col is not None and offset:
            col += offset + (1 if quoted else 0)
        raise DocumentValidationError(message, line, col)

    def scalar(self, path, value) -> complex:
        try:
            return parse_scalar(value)
        except ExprError as exc:
            self.fail(path, f"bad number {value!r}: {exc.message}", exc.pos)

    def real(self, path, value) -> float:
        try:
            return parse_real(value)
        except ExprError as exc:
            self.fail(path, f"bad number {value!r}: {exc.message}", exc.pos)

    def gate(self, path, text: str, label=None) -> UnitaryOperator:
        try:
            return parse_gate(text, label)
        except ExprError as exc:
            self.fail(path, f"bad gate expression {text!r}: {exc.message}", exc.pos)

    def angles(self, path, text: str) -> list[float]:
        m = re.fullmatch(r"\s*rotated\s*\((.*)\)\s*", text)
        parts = m.group(1).split(",") if m else []
        if len(parts) != 4:
            self.fail(path, f"expected rotated(theta, phi, theta', phi'), got {text!r}")
        return [self.real(path, p.strip()) for p in parts]

    def build(self) -> GameSpec:
        d = self.data
        factors = tuple(d.get("factors", (2, 2)))
        dim = int(np.prod(factors))
        two_qubit = factors == (2, 2)

        state = self.initial_state(d.get("initial_state", "ground"), factors, two_qubit)
        ops = {}
        prefs = {}
        for who in ("A", "B"):
            player = d["players"][who]
            ops[who] = tuple(self.operator(("players", who, "ops", k), entry, dim)
                             for k, entry in enumerate(player["ops"]))
            try:
                prefs[who] = PreferenceRelation(tuple(player["preference"]))
            except SpecError as exc:
                self.fail(("players", who, "preference"), str(exc))
            if len(prefs[who]) != dim:
                self.fail(("players", who, "preference"), f"preference ranks {len(prefs[who])} outcomes, need {dim}")

        weights = None
        if "weights" in d:
            values = tuple(self.real(("weights", k), v) for k, v in enumerate(d["weights"]))
            try:
                weights = OutcomeWeights(values)
            except SpecError as exc:
                self.fail(("weights",), str(exc))
            if len(weights) != dim:
                self.fail(("weights",), f"{len(weights)} weights for {dim} outcomes")

        measurement = self.measurement(d.get("measurement", "computational"), factors, two_qubit)
        final = None
        if "final_rotation" in d:
            final = self.gate(("final_rotation",), d["final_rotation"], "R")
            if final.dim != dim:
                self.fail(("final_rotation",), f"final rotation is {final.dim}x{final.dim}, need {dim}x{dim}")

        order = Order(d.get("order", "A_first"))
        try:
            spec = GameSpec(state, ops["A"], ops["B"], measurement, prefs["A"], prefs["B"], order,
                            weights, final, d.get("name", ""))
        except SpecError as exc:
            path = ("order",) if "simultaneous" in str(exc) else ()
            self.fail(path, str(exc))

        if "form" in d:
            spec = self.form(d["form"], spec)
        return spec

    def initial_state(self, value, factors, two_qubit) -> StateVector:
        path = ("initial_state",)
        if isinstance(value, list):
            amps = [self.scalar(path + (k,), v) for k, v in enumerate(value)]
            return self.vector(path, amps, factors)
        if value == "ground":
            return StateVector.basis(0, factors)
        if not two_qubit:
            self.fail(path, f"initial state {value!r} needs factors [2, 2]")
        if value == "bell_sym":
            return gates.bell_sym()
        return gates.rotated_ground(*self.angles(path, value))

    def vector(self, path, amps, factors) -> StateVector:
        dim = int(np.prod(factors))
        if len(amps) != dim:
            self.fail(path, f"{len(amps)} amplitudes for dimension {dim}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1) > 1e-9:
            self.fail(path, f"amplitudes are not normalized (norm {norm:.12g})")
        return StateVector(np.array(amps) / norm, factors)

    def operator(self, path, entry, dim) -> UnitaryOperator:
        if isinstance(entry, dict):
            op = self.gate(path + ("gate",), entry["gate"], entry.get("label"))
        else:
            op = self.gate(path, entry)
        if op.dim != dim:
            self.fail(path, f"operator is {op.dim}x{op.dim}, game dimension is {dim}")
        return op

    def measurement(self, value, factors, two_qubit) -> MeasurementBasis:
        path = ("measurement",)
        if isinstance(value, list):
            vecs = [self.vector(path + (k,), [self.scalar(path + (k, r), x) for r, x in enumerate(v)], factors)
                    for k, v in enumerate(value)]
            try:
                return MeasurementBasis(tuple(vecs), "explicit")
            except SpecError as exc:
                self.fail(path, str(exc))
        if value == "computational":
            return MeasurementBasis.computational(factors)
        if not two_qubit:
            self.fail(path, f"measurement {value!r} needs factors [2, 2]")
        if value == "hadamard2":
            return hadamard2()
        return rotated_measurement(*self.angles(path, value))

    def form(self, form: dict, base: GameSpec) -> GameSpec:
        path = ("form",)
        if "entangler" in form:
            t = self.gate(path + ("entangler",), form["entangler"], "T")
        else:
            if base.dim != 4:
                self.fail(path, "the built-in entangler needs a two-qubit game")
            t = entangler(self.real(path + ("lambda",), form.get("lambda", "pi/2")))
        try:
            return build_perspective(base, FormKind(form["kind"]), t)
        except ValueError as exc:
            self.fail(path, str(exc))


def load_document(text: str) -> tuple[dict, dict]:
    """YAML text -> (plain data, path marks); raises DocumentSyntaxError on malformed YAML."""
    try:
        loader = yaml.SafeLoader(text)
        try:
            node = loader.get_single_node()
            data = loader.construct_document(node) if node is not None else None
        finally:
            loader.dispose()
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark or exc.context_mark
        line, col = (mark.line + 1, mark.column + 1) if mark else (None, None)
        raise DocumentSyntaxError(f"YAML syntax error: {exc.problem}", line, col) from None
    if not isinstance(data, dict):
        raise DocumentSyntaxError("document must be a mapping", 1, 1)
    return data, _marks(node)


def parse_spec(text: str) -> GameSpec:
    data, marks = load_document(text)
    validator = jsonschema.Draft202012Validator(schema())
    errors = sorted(validator.iter_errors(data), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        err = errors[0]
        path = tuple(err.absolute_path)
        where = "/".join(map(str, path)) or "<root>"
        _Builder(data, marks).fail(path, f"{where}: {err.message}")
    return _Builder(data, marks).build()


def load_spec(source: str) -> GameSpec:
    """Parse a document file, or a bundled fixture when ``source`` names one."""
    path = Path(source)
    if path.exists():
        return parse_spec(path.read_text(encoding="utf-8"))
    if source in fixture_names():
        return parse_spec(fixture_text(source))
    raise FileNotFoundError(f"no such game document or fixture: {source}")


def _vector_text(amps) -> list[str]:
    return [format_scalar(a) for a in amps]


def render(spec: GameSpec) -> str:
    """Lossless document for ``spec``; every operator is written as an explicit matrix."""
    doc: dict[str, Any] = {}
    if spec.name:
        doc["name"] = spec.name
    doc["factors"] = list(spec.factors)
    doc["initial_state"] = _vector_text(spec.initial_state.amps)
    doc["players"] = {
        who: {
            "ops": [{"label": o.label, "gate": format_matrix(o.matrix)} for o in ops],
            "preference": list(spec.pref(who).ranking),
        }
        for who, ops in (("A", spec.ops_a), ("B", spec.ops_b))
    }
    doc["weights"] = [repr(w) for w in spec.weights.values]
    doc["order"] = spec.order.value
    doc["measurement"] = [_vector_text(s.amps) for s in spec.measurement.eigenstates]
    if spec.final_rotation is not None:
        doc["final_rotation"] = format_matrix(spec.final_rotation.matrix)
    return yaml.safe_dump(doc, sort_keys=False, allow_unicode=True, width=10_000)
