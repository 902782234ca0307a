"""Command-line front end: ``qgame <command> <spec-file> [options]``.

Exit status is 0 when the requested computation ran (a failed verification
is reported as ``"pass": false``), 1 for usage errors and 2 for documents
that do not describe a playable game.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import reports
from .expr import ExprError, parse_real
from .forms import FormKind
from .game import MeasurementBasis, SpecError
from .presets import hadamard2, rotated_measurement
from .specdoc import DocumentError, load_spec

EXIT_OK, EXIT_USAGE, EXIT_INVALID = 0, 1, 2

COMMANDS = ("analyze", "equilibria", "classify", "coin-sim", "transform", "uncertainty",
            "compare-options", "enumerate-classical")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qgame", description="Analyze two-player finite quantum games.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("spec", nargs="?", help="game document path or bundled fixture name")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=0.02)
    p.add_argument("--form", choices=[k.value for k in FormKind])
    p.add_argument("--lambda", dest="lam", default="pi/2", help="entangler angle, e.g. pi/2")
    p.add_argument("--second-basis", default="hadamard2",
                   help="computational, hadamard2 or rotated(t, p, t', p')")
    p.add_argument("--first-mover", choices=("A", "B"), help="Stackelberg leader")
    return p


def _second_basis(text: str) -> MeasurementBasis:
    text = text.strip()
    if text == "hadamard2":
        return hadamard2()
    if text == "computational":
        return MeasurementBasis.computational((2, 2))
    if text.startswith("rotated(") and text.endswith(")"):
        parts = text[len("rotated("):-1].split(",")
        if len(parts) == 4:
            try:
                return rotated_measurement(*(parse_real(x) for x in parts))
            except ExprError as exc:
                raise UsageError(f"bad --second-basis angle: {exc}") from None
    raise UsageError(f"unknown second basis {text!r}")


def _fmt(x) -> str:
    return f"{x:.6g}" if isinstance(x, float) else str(x)


def _table(headers: list[str], rows: list[list]) -> str:
    cells = [headers] + [[_fmt(v) for v in r] for r in rows]
    widths = [max(len(r[k]) for r in cells) for k in range(len(headers))]
    lines = ["  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _payoff_text(payoffs: dict, rows: list[str], cols: list[str]) -> str:
    out = []
    for who in ("A", "B"):
        out.append(f"expected outcome for {who}")
        out.append(_table([""] + cols, [[r] + m for r, m in zip(rows, payoffs[who])]))
    return "\n".join(out)


def _cells_text(cells: list[dict]) -> str:
    return ", ".join("(" + ", ".join(c["labels"]) + ")" for c in cells) or "none"


def render_text(command: str, rep: dict) -> str:
    if command == "enumerate-classical":
        return f"classical preference pairs with pure equilibria: {rep['count']}"
    lines = [f"game: {rep.get('game') or '(unnamed)'}"]
    if command == "analyze":
        lines.append(_payoff_text(rep["payoffs"], rep["row_labels"], rep["col_labels"]))
        lines.append(_table(["cell", "distribution", "E_A", "E_B"],
                            [[",".join(c["labels"]), " ".join(f"{p:.4f}" for p in c["distribution"]),
                              c["expected"]["A"], c["expected"]["B"]] for c in rep["cells"]]))
    elif command == "equilibria":
        lines.append(f"nash: {_cells_text(rep['nash'])}")
        sd = rep["sum_dominance"]
        lines.append(f"sum dominance: {_cells_text([sd]) if sd else 'none'}")
        for s in rep["stackelberg"]:
            lines.append(f"stackelberg ({s['first']} first): {_cells_text([s])}")
        lines.append(f"invertible: {rep['invertible']['value']}")
        lines.extend(rep["notes"])
    elif command == "classify":
        lines.append(f"game type: {rep['game_type']}")
        lines.append(_table(["cell", "class", "I_c"],
                            [[",".join(c["labels"]), c["class"], c["ic"]] for c in rep["cells"]]))
    elif command == "coin-sim":
        lines.append(f"coins: A={rep['kappa']['A']} B={rep['kappa']['B']}  trials={rep['trials']}  seed={rep['seed']}")
        lines.append(_table(["cell", "player", "quantum", "empirical", "deviation"],
                            [[",".join(map(str, r["cell"])), r["player"], r["quantum"], r["empirical"],
                              r["deviation"]] for r in rep["cells"]]))
        lines.append(f"pass: {rep['pass']} (tol {rep['tol']})")
    elif command == "transform":
        lines.append(f"form {rep['form']} at lambda={_fmt(rep['lambda'])}, order {rep['order']}")
        base, ref = rep["equivalent_to_base"], rep["equivalent_to_reference"]
        lines.append(f"equivalent to base game: {base['value']} (max payoff gap {_fmt(base['max_payoff_gap'])})")
        lines.append(f"equivalent to {ref['reference']}: {ref['value']} (max payoff gap {_fmt(ref['max_payoff_gap'])})")
        lines.append(rep["document"].rstrip())
    elif command == "uncertainty":
        lines.append(f"second basis: {rep['second_basis']}")
        lines.append(_table(["cell", "player", "var_1", "var_2", "lhs", "rhs", "holds"],
                            [[",".join(r["labels"]), r["player"], r["var_1"], r["var_2"], r["lhs"], r["rhs"],
                              r["holds"]] for r in rep["cells"]]))
        lines.append(f"pass: {rep['pass']}")
    elif command == "compare-options":
        for opt in rep["options"]:
            head = f"option {opt['option']} ({opt['form']}): {opt['game_type']}"
            if "note" in opt:
                lines.append(f"{head}; {opt['note']}")
                continue
            fam = opt["local_rotation_family"]
            lines.append(f"{head}; local-rotation family {fam['game_type']}; nash {_cells_text(opt['nash'])}")
    return "\n".join(lines)


def run(args: argparse.Namespace) -> dict:
    if args.command == "enumerate-classical":
        return reports.enumerate_classical()
    if args.spec is None:
        raise UsageError(f"{args.command} needs a game document")
    if args.command in ("coin-sim",) and args.trials < 1:
        raise UsageError("--trials must be positive")
    second = _second_basis(args.second_basis) if args.command == "uncertainty" else None
    if args.command == "transform" and not args.form:
        raise UsageError("transform needs --form")
    try:
        lam = parse_real(args.lam)
    except ExprError as exc:
        raise UsageError(f"bad --lambda: {exc}") from None
    spec = load_spec(args.spec)
    if args.command == "analyze":
        return reports.analyze(spec)
    if args.command == "equilibria":
        return reports.equilibria(spec, args.first_mover)
    if args.command == "classify":
        return reports.classify(spec)
    if args.command == "coin-sim":
        return reports.coin_sim(spec, args.trials, args.seed, args.tol)
    if args.command == "transform":
        return reports.transform(spec, args.form, lam)
    if args.command == "uncertainty":
        return reports.uncertainty(spec, second)
    return reports.compare_options(spec, lam, seed=args.seed)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        rep = run(args)
    except UsageError as exc:
        print(f"qgame: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"qgame: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (DocumentError, SpecError, ExprError, ValueError) as exc:
        print(f"qgame: invalid game: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.json:
        print(json.dumps(rep, sort_keys=True, indent=2))
    else:
        print(render_text(args.command, rep))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
