"""Game and flow files, plus report emission.

Games and flows travel as JSON; batch reports as CSV or JSON. File
floats are written with repr precision so every value parses back to the
exact float that was written; fixed 6-decimal formatting is display-only
and lives in the CLI.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import IO, Any

from .batch import BatchReport
from .latency import LatencyFunction
from .model import Edge, Flow, Game, GameValidationError, PlayerType, validate_game
from .solver import SolveResult


class FormatError(ValueError):
    """A document parsed as JSON but does not match the expected schema."""


def game_from_dict(data: Any) -> Game:
    try:
        edges = tuple(
            Edge(
                id=str(entry["id"]),
                latency=LatencyFunction(tuple(float(c) for c in entry["latency"]["coeffs"])),
            )
            for entry in data["edges"]
        )
        player_types = tuple(
            PlayerType(
                id=str(entry["id"]),
                demand=float(entry["demand"]),
                strategies=tuple(
                    frozenset(str(e) for e in strategy) for strategy in entry["strategies"]
                ),
            )
            for entry in data["player_types"]
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed game document: {exc!r}") from exc
    return Game(edges=edges, player_types=player_types)


def game_to_dict(game: Game) -> dict[str, Any]:
    """Inverse of game_from_dict; duplicate strategies are re-expanded
    from their recorded multiplicities."""
    edges = [
        {"id": e.id, "latency": {"coeffs": list(e.latency.coeffs)}} for e in game.edges
    ]
    player_types = []
    for t in game.player_types:
        strategies: list[list[str]] = []
        for strategy, multiplicity in zip(t.strategies, t.multiplicities):
            strategies.extend([sorted(strategy)] * multiplicity)
        player_types.append({"id": t.id, "demand": t.demand, "strategies": strategies})
    return {"edges": edges, "player_types": player_types}


def load_game(path: str | Path) -> Game:
    """Parse and validate a game file.

    Raises json.JSONDecodeError (with line and column) on bad JSON,
    FormatError on schema mismatch, and GameValidationError listing every
    structural violation.
    """
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    game = game_from_dict(data)
    report = validate_game(game)
    if report:
        raise GameValidationError(report)
    return game


def save_game(game: Game, path: str | Path) -> None:
    Path(path).write_text(json.dumps(game_to_dict(game), indent=2) + "\n", encoding="utf-8")


def load_flow(path: str | Path, game: Game) -> Flow:
    """Parse a flow file against a game.

    Raises FormatError for schema problems, references to unknown types
    or strategies, duplicate entries, or negative amounts.
    """
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    try:
        entries = list(data["amounts"])
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed flow document: {exc!r}") from exc
    amounts: dict[tuple[str, int], float] = {}
    for entry in entries:
        try:
            type_id = str(entry["type"])
            index = int(entry["strategy"])
            amount = float(entry["x"])
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"malformed flow entry {entry!r}: {exc!r}") from exc
        try:
            ptype = game.player_type(type_id)
        except ValueError as exc:
            raise FormatError(str(exc)) from None
        if not 0 <= index < len(ptype.strategies):
            raise FormatError(
                f"strategy index {index} out of range for player type '{type_id}'"
            )
        if amount < 0:
            raise FormatError(f"negative amount {amount} for ('{type_id}', {index})")
        if (type_id, index) in amounts:
            raise FormatError(f"duplicate flow entry for ('{type_id}', {index})")
        amounts[(type_id, index)] = amount
    return Flow(amounts)


def flow_to_dict(flow: Flow) -> dict[str, Any]:
    return {
        "amounts": [
            {"type": type_id, "strategy": index, "x": amount}
            for (type_id, index), amount in sorted(flow.amounts.items())
        ]
    }


def save_flow(flow: Flow, path: str | Path) -> None:
    Path(path).write_text(json.dumps(flow_to_dict(flow), indent=2) + "\n", encoding="utf-8")


def save_solve_result(result: SolveResult, path: str | Path) -> None:
    """Flow schema plus a metadata block; load_flow reads it back."""
    document = flow_to_dict(result.flow)
    document["metadata"] = {
        "iterations": result.iterations,
        "relative_gap": result.relative_gap,
        "social_cost_original": result.social_cost_original,
    }
    Path(path).write_text(json.dumps(document, indent=2) + "\n", encoding="utf-8")


def batch_report_to_dict(report: BatchReport) -> dict[str, Any]:
    return {
        "per_edge": {
            edge_id: {
                "N_e": row.count,
                "x_e": row.load,
                "c_e": row.base_cost,
                "batch_c_e": row.batch_cost,
                "gap": row.gap,
            }
            for edge_id, row in report.per_edge.items()
        },
        "total_batch_cost": report.total_batch_cost,
        "total_original_cost": report.total_original_cost,
        "total_gap": report.total_gap,
    }


def save_batch_report_json(report: BatchReport, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(batch_report_to_dict(report), indent=2) + "\n", encoding="utf-8"
    )


def write_batch_report_csv(report: BatchReport, out: IO[str]) -> None:
    """Rows in ascending edge id plus a trailing TOTAL summary row."""
    writer = csv.writer(out)
    writer.writerow(["edge_id", "N_e", "x_e", "c_e", "batch_c_e", "gap"])
    for edge_id, row in report.per_edge.items():
        writer.writerow(
            [edge_id, row.count, repr(row.load), repr(row.base_cost),
             repr(row.batch_cost), repr(row.gap)]
        )
    writer.writerow(
        ["TOTAL", "", "", repr(report.total_original_cost),
         repr(report.total_batch_cost), repr(report.total_gap)]
    )


def save_batch_report_csv(report: BatchReport, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        write_batch_report_csv(report, handle)
