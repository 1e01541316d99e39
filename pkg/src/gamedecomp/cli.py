"""Command-line front end.

Subcommands: decompose, classify, potential, project, nash, verify.
Documents go to stdout as JSON (or CSV where output is a table);
diagnostics go to stderr.  Output is exact "p/q" rationals unless
--decimal is given, in which case values are fixed-precision decimal
strings and the document is labeled approximate.  Exit code 0 means
the command reached a verdict; classification verdicts like "not
potential" are data, not errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Callable, Sequence

from gamedecomp import analysis
from gamedecomp.decompose import (
    decompose,
    differs_by_constant,
    is_member,
    nonstrategic_component_direct,
    potential_function,
    raw_potential_vector,
    solve_potential_equation,
)
from gamedecomp.games import (
    Game,
    GameFormatError,
    GameSpace,
    parse_game,
)
from gamedecomp.linalg import Matrix, mp_inverse
from gamedecomp.projectors import (
    SubspaceKind,
    build_B_N,
    build_B_P,
    build_P_N,
    build_projectors,
    subspace_dimension,
)

TABLE_COMMANDS = ("project", "potential")


def _parse_space(text: str) -> GameSpace:
    """Parse an 'n:k1,k2,...' space description."""
    try:
        head, _, tail = text.partition(":")
        players = int(head)
        counts = tuple(int(c) for c in tail.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"space must look like 'n:k1,k2,...', got {text!r}"
        ) from None
    if players != len(counts):
        raise argparse.ArgumentTypeError(
            f"space declares {players} players but lists {len(counts)} strategy counts"
        )
    try:
        return GameSpace(counts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.replace("−", "-").strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def _decimal_string(x: Fraction, digits: int) -> str:
    scaled = round(x * Fraction(10**digits))
    sign = "-" if scaled < 0 else ""
    magnitude = str(abs(scaled)).rjust(digits + 1, "0")
    if digits == 0:
        return f"{sign}{magnitude}"
    return f"{sign}{magnitude[:-digits]}.{magnitude[-digits:]}"


def _render(x: Fraction, decimal: int | None) -> object:
    if decimal is not None:
        return _decimal_string(x, decimal)
    if x.denominator == 1:
        return int(x)
    return f"{x.numerator}/{x.denominator}"


def _space_doc(space: GameSpace) -> dict:
    return {"players": space.n, "strategies": list(space.strategy_counts)}


def _game_doc(game: Game, decimal: int | None) -> dict:
    doc: dict = {
        "players": game.space.n,
        "strategies": list(game.space.strategy_counts),
        "payoffs": [[_render(x, decimal) for x in row] for row in game.payoff_rows],
    }
    if game.name is not None:
        doc["name"] = game.name
    return doc


def _emit_json(doc: dict, decimal: int | None) -> None:
    if decimal is not None:
        doc["approximate"] = True
        doc["decimal_digits"] = decimal
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")


def _load_game(args: argparse.Namespace) -> Game:
    with open(args.file, "r", encoding="utf-8") as handle:
        game = parse_game(handle.read())
    if args.space is not None:
        flat = [x for row in game.payoff_rows for x in row]
        if len(flat) != args.space.payoff_cells:
            raise GameFormatError(
                f"space override needs {args.space.payoff_cells} payoff cells, "
                f"file provides {len(flat)}"
            )
        game = Game.from_vector(args.space, flat)
    if any(c == 1 for c in game.space.strategy_counts):
        print(
            "warning: space has a single-strategy player; "
            "formulas degenerate but remain valid",
            file=sys.stderr,
        )
    return game


def _check_format(args: argparse.Namespace) -> int | None:
    if args.format == "csv" and args.command not in TABLE_COMMANDS:
        print(
            f"error: csv output is not defined for {args.command}; use --format json",
            file=sys.stderr,
        )
        return 2
    return None


# -- subcommands --------------------------------------------------------


def _cmd_decompose(args: argparse.Namespace) -> int:
    game = _load_game(args)
    parts = decompose(game)
    doc = {
        "command": "decompose",
        "space": _space_doc(game.space),
        "arithmetic": "exact-rational" if args.decimal is None else "decimal",
        "components": {
            "pure_potential": _game_doc(parts.pure_potential, args.decimal),
            "nonstrategic": _game_doc(parts.nonstrategic, args.decimal),
            "pure_harmonic": _game_doc(parts.pure_harmonic, args.decimal),
        },
        "components_sum_to_input": parts.total() == game,
    }
    _emit_json(doc, args.decimal)
    return 0


def _cmd_classify(args: argparse.Namespace) -> int:
    game = _load_game(args)
    memberships = {
        kind.value: is_member(game, kind) for kind in SubspaceKind
    }
    checks = {
        "nonstrategic": analysis.check_nonstrategic_defn(game),
        "pure-harmonic": analysis.check_pure_harmonic_defn(game),
        "harmonic": analysis.check_harmonic_defn(game),
    }
    agreement = {
        name: checks[name] == memberships[name] for name in checks
    }
    doc = {
        "command": "classify",
        "space": _space_doc(game.space),
        "memberships": memberships,
        "definitional_checks": checks,
        "checks_agree_with_memberships": agreement,
    }
    _emit_json(doc, args.decimal)
    return 0


def _cmd_potential(args: argparse.Namespace) -> int:
    game = _load_game(args)
    projected = potential_function(game)
    solved = solve_potential_equation(game)
    doc: dict = {"command": "potential", "space": _space_doc(game.space)}
    if projected is None:
        doc["potential"] = False
        doc["routes_agree"] = solved is None
        if args.experimental_raw_vector:
            doc["experimental_raw_vector"] = [
                _render(x, args.decimal) for x in raw_potential_vector(game)
            ]
            doc["experimental_raw_vector_semantics"] = "unspecified"
    else:
        values = projected.values
        if args.shift is not None:
            values = projected.shifted(args.shift).values
        doc["potential"] = True
        doc["values"] = [_render(x, args.decimal) for x in values]
        doc["shift"] = _render(args.shift or Fraction(0), None)
        doc["routes_agree_up_to_constant"] = solved is not None and differs_by_constant(
            projected.values, solved.values
        )
    if args.format == "csv":
        if projected is None:
            sys.stdout.write("potential,false\n")
            return 0
        lines = ["profile_index,value"]
        values = projected.shifted(args.shift).values if args.shift else projected.values
        for idx, value in enumerate(values, start=1):
            lines.append(f"{idx},{_render(value, args.decimal)}")
        sys.stdout.write("\n".join(lines) + "\n")
        return 0
    _emit_json(doc, args.decimal)
    return 0


def _cmd_project(args: argparse.Namespace) -> int:
    bundle = build_projectors(args.space)
    total = bundle.pure_potential + bundle.nonstrategic + bundle.pure_harmonic
    if total != Matrix.identity(args.space.payoff_cells):
        print("error: projection sum identity failed", file=sys.stderr)
        return 1
    kind = SubspaceKind(args.kind)
    matrix = bundle.projection(kind)
    if args.format == "csv":
        lines = []
        if args.decimal is not None:
            lines.append(f"# approximate: {args.decimal} decimal digits")
        for i in range(matrix.nrows):
            lines.append(
                ",".join(str(_render(x, args.decimal)) for x in matrix.row_tuple(i))
            )
        sys.stdout.write("\n".join(lines) + "\n")
        return 0
    doc = {
        "command": "project",
        "space": _space_doc(args.space),
        "kind": kind.value,
        "dimension": subspace_dimension(args.space, kind),
        "sum_identity_verified": True,
        "rows": [
            [_render(x, args.decimal) for x in matrix.row_tuple(i)]
            for i in range(matrix.nrows)
        ],
    }
    _emit_json(doc, args.decimal)
    return 0


def _cmd_nash(args: argparse.Namespace) -> int:
    game = _load_game(args)
    report = analysis.nash_report(game)
    doc = {
        "command": "nash",
        "space": _space_doc(game.space),
        "pure_equilibria": [list(s) for s in report.pure_equilibria],
        "uniform_mixed_is_nash": report.uniform_mixed_is_nash,
    }
    _emit_json(doc, args.decimal)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    game = _load_game(args)
    checks = _verification_checks(game)
    doc = {
        "command": "verify",
        "space": _space_doc(game.space),
        "checks": [{"name": name, "passed": passed} for name, passed in checks],
        "all_passed": all(passed for _, passed in checks),
    }
    _emit_json(doc, args.decimal)
    return 0 if doc["all_passed"] else 1


def _verification_checks(game: Game) -> list[tuple[str, bool]]:
    """Every cross-oracle identity the library can test on one game."""
    space = game.space
    bundle = build_projectors(space)
    identity = Matrix.identity(space.payoff_cells)
    named = {
        SubspaceKind.PURE_POTENTIAL: bundle.pure_potential,
        SubspaceKind.NONSTRATEGIC: bundle.nonstrategic,
        SubspaceKind.PURE_HARMONIC: bundle.pure_harmonic,
        SubspaceKind.POTENTIAL: bundle.potential,
        SubspaceKind.HARMONIC: bundle.harmonic,
    }
    checks: list[tuple[str, bool]] = []
    checks.append(
        ("projections_symmetric", all(m.is_symmetric() for m in named.values()))
    )
    checks.append(
        ("projections_idempotent", all(m @ m == m for m in named.values()))
    )
    parts = (bundle.pure_potential, bundle.nonstrategic, bundle.pure_harmonic)
    checks.append(("projection_sum_is_identity", sum(parts[1:], parts[0]) == identity))
    checks.append(
        (
            "projection_pairwise_products_zero",
            all(
                (parts[i] @ parts[j]).is_zero()
                for i in range(3)
                for j in range(3)
                if i != j
            ),
        )
    )
    checks.append(
        (
            "projection_traces_match_dimensions",
            all(
                named[kind].trace() == subspace_dimension(space, kind)
                for kind in SubspaceKind
            ),
        )
    )
    b_p = build_B_P(space)
    b_n = build_B_N(space)
    p_n = build_P_N(space)
    via_bp = b_p @ mp_inverse(b_p)
    via_bn = b_n @ mp_inverse(b_n)
    via_pn = p_n @ mp_inverse(p_n)
    checks.append(
        (
            "pseudoinverse_oracles_match",
            via_bp == bundle.potential
            and via_bn == bundle.nonstrategic
            and via_pn == bundle.pure_potential
            and via_bp == via_bn + via_pn,
        )
    )
    parts_g = decompose(game)
    checks.append(("decomposition_sums_to_input", parts_g.total() == game))
    checks.append(
        (
            "components_lie_in_their_subspaces",
            is_member(parts_g.pure_potential, SubspaceKind.PURE_POTENTIAL)
            and is_member(parts_g.nonstrategic, SubspaceKind.NONSTRATEGIC)
            and is_member(parts_g.pure_harmonic, SubspaceKind.PURE_HARMONIC),
        )
    )
    checks.append(
        (
            "definitional_checks_agree",
            analysis.check_nonstrategic_defn(game)
            == is_member(game, SubspaceKind.NONSTRATEGIC)
            and analysis.check_pure_harmonic_defn(game)
            == is_member(game, SubspaceKind.PURE_HARMONIC)
            and analysis.check_harmonic_defn(game)
            == is_member(game, SubspaceKind.HARMONIC),
        )
    )
    projected = potential_function(game)
    solved = solve_potential_equation(game)
    if projected is None or solved is None:
        agree = projected is None and solved is None
    else:
        agree = differs_by_constant(projected.values, solved.values)
    checks.append(("potential_routes_agree", agree))
    checks.append(
        (
            "nonstrategic_direct_agrees",
            nonstrategic_component_direct(game) == parts_g.nonstrategic,
        )
    )
    return checks


# -- parser --------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gamedecomp",
        description="Exact decomposition and analysis of finite normal-form games.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument(
            "--format", choices=("json", "csv"), default="json", help="output format"
        )
        p.add_argument(
            "--decimal",
            type=int,
            metavar="DIGITS",
            help="emit approximate decimal strings with this many digits",
        )
        p.add_argument(
            "--space",
            type=_parse_space,
            metavar="n:k1,k2,...",
            help="game space (overrides the file's space where a file is given)",
        )

    def add_game_command(
        name: str, helptext: str, func: Callable[[argparse.Namespace], int]
    ) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=helptext)
        p.add_argument("file", help="game JSON file")
        add_common(p)
        p.set_defaults(func=func)
        return p

    add_game_command(
        "decompose", "split a game into its three components", _cmd_decompose
    )
    add_game_command("classify", "test the five subspace memberships", _cmd_classify)
    p_potential = add_game_command(
        "potential", "extract a potential function if one exists", _cmd_potential
    )
    p_potential.add_argument(
        "--shift",
        type=_parse_rational,
        metavar="p/q",
        help="add a constant to the canonical potential",
    )
    p_potential.add_argument(
        "--experimental-raw-vector",
        action="store_true",
        help="for non-potential games, also emit the raw closed-form vector "
        "(semantics unspecified)",
    )
    p_project = sub.add_parser("project", help="emit a projection matrix")
    p_project.add_argument(
        "--kind",
        required=True,
        choices=[kind.value for kind in SubspaceKind],
        help="which canonical subspace",
    )
    add_common(p_project)
    p_project.set_defaults(func=_cmd_project)
    add_game_command("nash", "pure and uniformly-mixed equilibrium report", _cmd_nash)
    add_game_command("verify", "run every cross-oracle identity check", _cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "project" and args.space is None:
        parser.error("project requires --space")
    bad_format = _check_format(args)
    if bad_format is not None:
        return bad_format
    try:
        return args.func(args)
    except (GameFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
