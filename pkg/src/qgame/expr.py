"""Recursive-descent parser for gate expressions and scalar literals.

Gate grammar::

    expr   := term ('*' term)*
    term   := atom (('⊗' | 'kron') atom)*
    atom   := 'I' | 'X' | 'Y' | 'Z' | 'H' | 'FLIP'
            | ('Rx' | 'Ry' | 'Rz') '(' scalar ')'
            | 'matrix' '[' row (',' row)* ']'
            | '(' expr ')'
    row    := '[' scalar (',' scalar)* ']'

``⊗`` binds tighter than ``*``, so ``H ⊗ I * FLIP ⊗ I`` is (H⊗I)(FLIP⊗I).
Scalars are arithmetic over decimal numbers, ``pi`` (or ``π``), the
imaginary unit ``i`` (also as a suffix, ``0.5i``), and sqrt/exp/cos/sin.
"""
from __future__ import annotations

import cmath
import re
from dataclasses import dataclass

import numpy as np

from . import gates
from .qmath import UnitaryOperator


class ExprError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.message = message
        self.text = text
        self.pos = pos
        super().__init__(f"{message} (column {pos + 1})" if text else message)

    @property
    def column(self) -> int:
        return self.pos + 1


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?[ij]?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*|π)
  | (?P<op>\*\*|[-+*/^()\[\],⊗])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ExprError(f"unexpected character {text[pos]!r}", text, pos)
        if m.lastgroup != "ws":
            value = m.group()
            tokens.append(Token(m.lastgroup, "^" if value == "**" else value, pos))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


_FUNCS = {"sqrt": cmath.sqrt, "exp": cmath.exp, "cos": cmath.cos, "sin": cmath.sin}
_CONSTS = {"pi": cmath.pi, "π": cmath.pi, "i": 1j, "j": 1j}
_GATES = {
    "I": gates.I2,
    "X": gates.SIGMA_X,
    "Y": gates.SIGMA_Y,
    "Z": gates.SIGMA_Z,
    "H": gates.HADAMARD,
    "FLIP": gates.FLIP,
}
_ROTATIONS = {"Rx": gates.rx, "Ry": gates.ry, "Rz": gates.rz}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.k = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.k]

    def error(self, message: str, tok: Token = None):
        tok = tok or self.tok
        raise ExprError(message, self.text, tok.pos)

    def accept(self, value: str) -> bool:
        if self.tok.value == value and self.tok.kind in ("op", "name"):
            self.k += 1
            return True
        return False

    def expect(self, value: str) -> Token:
        tok = self.tok
        if not self.accept(value):
            found = "end of input" if tok.kind == "end" else repr(tok.value)
            self.error(f"expected {value!r}, found {found}")
        return tok

    def done(self):
        if self.tok.kind != "end":
            self.error(f"unexpected {self.tok.value!r}")

    # scalars

    def scalar(self) -> complex:
        value = self.sterm()
        while self.tok.value in ("+", "-") and self.tok.kind == "op":
            op = self.tok.value
            self.k += 1
            rhs = self.sterm()
            value = value + rhs if op == "+" else value - rhs
        return value

    def sterm(self) -> complex:
        value = self.sfactor()
        while self.tok.value in ("*", "/") and self.tok.kind == "op":
            op = self.tok
            self.k += 1
            rhs = self.sfactor()
            if op.value == "/":
                if rhs == 0:
                    self.error("division by zero", op)
                value = value / rhs
            else:
                value = value * rhs
        return value

    def sfactor(self) -> complex:
        if self.accept("-"):
            return -self.sfactor()
        if self.accept("+"):
            return self.sfactor()
        base = self.sprimary()
        if self.accept("^"):
            return base ** self.sfactor()
        return base

    def sprimary(self) -> complex:
        tok = self.tok
        if tok.kind == "num":
            self.k += 1
            if tok.value[-1] in "ij":
                return float(tok.value[:-1]) * 1j
            return complex(float(tok.value))
        if tok.kind == "name":
            if tok.value in _CONSTS:
                self.k += 1
                return _CONSTS[tok.value]
            if tok.value in _FUNCS:
                self.k += 1
                self.expect("(")
                arg = self.scalar()
                self.expect(")")
                return _FUNCS[tok.value](arg)
            self.error(f"unknown name {tok.value!r} in numeric expression")
        if self.accept("("):
            value = self.scalar()
            self.expect(")")
            return value
        self.error("expected a number" if tok.kind != "end" else "unexpected end of input")

    def real(self) -> float:
        tok = self.tok
        value = self.scalar()
        if abs(value.imag) > 1e-12:
            self.error("expected a real number", tok)
        return value.real

    # gates

    def expr(self) -> tuple[np.ndarray, tuple[int, ...]]:
        m, factors = self.term()
        while self.tok.value == "*" and self.tok.kind == "op":
            op = self.tok
            self.k += 1
            rhs, rfactors = self.term()
            if rhs.shape != m.shape:
                self.error(f"cannot multiply {m.shape[0]}x{m.shape[0]} by {rhs.shape[0]}x{rhs.shape[0]}", op)
            m = m @ rhs
            if len(rfactors) > len(factors):
                factors = rfactors
        return m, factors

    def term(self) -> tuple[np.ndarray, tuple[int, ...]]:
        m, factors = self.atom()
        while (self.tok.value == "⊗" and self.tok.kind == "op") or (self.tok.value == "kron" and self.tok.kind == "name"):
            self.k += 1
            rhs, rfactors = self.atom()
            m = np.kron(m, rhs)
            factors = factors + rfactors
        return m, factors

    def atom(self) -> tuple[np.ndarray, tuple[int, ...]]:
        tok = self.tok
        if self.accept("("):
            value = self.expr()
            self.expect(")")
            return value
        if tok.kind != "name":
            self.error("expected a gate" if tok.kind != "end" else "unexpected end of input, expected a gate")
        self.k += 1
        if tok.value in _GATES:
            return _GATES[tok.value], (2,)
        if tok.value in _ROTATIONS:
            self.expect("(")
            theta = self.real()
            self.expect(")")
            return _ROTATIONS[tok.value](theta), (2,)
        if tok.value == "matrix":
            return self.matrix(tok)
        self.error(f"unknown gate {tok.value!r}", tok)

    def matrix(self, at: Token) -> tuple[np.ndarray, tuple[int, ...]]:
        self.expect("[")
        rows = [self.row()]
        while self.accept(","):
            rows.append(self.row())
        self.expect("]")
        n = len(rows)
        if any(len(r) != n for r in rows):
            self.error(f"matrix must be square; got {n} rows of lengths {[len(r) for r in rows]}", at)
        return np.array(rows, dtype=complex), (n,)

    def row(self) -> list[complex]:
        self.expect("[")
        entries = [self.scalar()]
        while self.accept(","):
            entries.append(self.scalar())
        self.expect("]")
        return entries


def parse_scalar(text) -> complex:
    """Evaluate a numeric literal such as ``pi/2`` or ``1/sqrt(2)``; numbers pass through."""
    if isinstance(text, (int, float, complex)) and not isinstance(text, bool):
        return complex(text)
    p = _Parser(str(text))
    value = p.scalar()
    p.done()
    return value


def parse_real(text) -> float:
    value = parse_scalar(text)
    if abs(value.imag) > 1e-12:
        raise ExprError(f"expected a real number, got {text!r}", str(text), 0)
    return value.real


def parse_gate(text: str, label: str = None) -> UnitaryOperator:
    p = _Parser(text)
    m, factors = p.expr()
    p.done()
    try:
        return UnitaryOperator(m, label or text.strip(), factors)
    except ValueError as exc:
        raise ExprError(str(exc), text, 0) from None


def format_scalar(z: complex) -> str:
    """Lossless text for ``parse_scalar``."""
    z = complex(z)
    if z.imag == 0:
        return repr(z.real)
    return f"{z.real!r}+{z.imag!r}i"


def format_matrix(m: np.ndarray) -> str:
    rows = ", ".join("[" + ", ".join(format_scalar(x) for x in row) + "]" for row in np.asarray(m))
    return f"matrix[{rows}]"
