"""Nonatomic congestion games with explicit strategy sets.

A game is a list of edges carrying polynomial latencies plus a list of
player types, each spreading a divisible demand over an ordered list of
strategies (subsets of edges). Flows assign per-strategy amounts, edge
loads aggregate them, and the two scalar functionals (social cost and
per-type cost) are evaluated here.

All structural invariants are checked by validate_game, which returns a
report instead of raising so a bad input can be diagnosed in full. The
operations below raise ValueError only for genuine contract violations
(unknown ids, infeasible flows).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .latency import MAX_DEGREE, LatencyFunction

#: Default absolute tolerance on per-type demand conservation.
FEASIBILITY_TOL = 1e-9


@dataclass(frozen=True)
class Edge:
    id: str
    latency: LatencyFunction


@dataclass(frozen=True)
class PlayerType:
    """A player population with a demand and an ordered strategy list.

    Duplicate strategies (same edge set) collapse to one canonical copy at
    construction; the multiplicity is recorded but has no effect on loads,
    costs or equilibria, since only edge loads matter. Strategy indices in
    Flow refer to the collapsed list.
    """

    id: str
    demand: float
    strategies: tuple[frozenset[str], ...]
    multiplicities: tuple[int, ...] = field(init=False)

    def __post_init__(self) -> None:
        canonical: list[frozenset[str]] = []
        counts: list[int] = []
        for strategy in self.strategies:
            members = frozenset(strategy)
            if members in canonical:
                counts[canonical.index(members)] += 1
            else:
                canonical.append(members)
                counts.append(1)
        object.__setattr__(self, "demand", float(self.demand))
        object.__setattr__(self, "strategies", tuple(canonical))
        object.__setattr__(self, "multiplicities", tuple(counts))


@dataclass(frozen=True)
class Game:
    edges: tuple[Edge, ...]
    player_types: tuple[PlayerType, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "player_types", tuple(self.player_types))
        object.__setattr__(self, "_edges_by_id", {e.id: e for e in self.edges})
        object.__setattr__(self, "_types_by_id", {t.id: t for t in self.player_types})

    def edge(self, edge_id: str) -> Edge:
        try:
            return self._edges_by_id[edge_id]
        except KeyError:
            raise ValueError(f"unknown edge id '{edge_id}'") from None

    def player_type(self, type_id: str) -> PlayerType:
        try:
            return self._types_by_id[type_id]
        except KeyError:
            raise ValueError(f"unknown player type '{type_id}'") from None

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.edges)


@dataclass(frozen=True)
class Flow:
    """Per-strategy amounts keyed by (type id, strategy index).

    Missing keys mean zero. The dict is treated as immutable by
    convention; all operations in this package return fresh flows.
    """

    amounts: dict[tuple[str, int], float]

    def __post_init__(self) -> None:
        normalized = {
            (str(t), int(s)): float(v) for (t, s), v in self.amounts.items()
        }
        object.__setattr__(self, "amounts", normalized)

    def amount(self, type_id: str, strategy_index: int) -> float:
        return self.amounts.get((type_id, strategy_index), 0.0)


@dataclass(frozen=True)
class EdgeLoads:
    """Aggregated loads: per (edge id, type id) and total per edge id."""

    per_type: dict[tuple[str, str], float]
    total: dict[str, float]


@dataclass(frozen=True)
class Violation:
    """One structural defect, addressed by a field path into the game."""

    path: str
    message: str


class GameValidationError(ValueError):
    """A structurally invalid game reached an operation requiring a valid one."""

    def __init__(self, report: list[Violation]):
        detail = "; ".join(f"{v.path}: {v.message}" for v in report)
        super().__init__(f"invalid game: {detail}")
        self.report = tuple(report)


def validate_game(game: Game) -> list[Violation]:
    """Check every structural invariant and return all violations found.

    An empty list means the game is well formed. Checks: nonempty
    coefficient lists, nonnegative coefficients, degree cap, unique edge
    and type ids, nonnegative demands, strategies present whenever demand
    is positive, nonempty strategies, and strategy edges that exist.
    """
    violations: list[Violation] = []
    seen_edge_ids: set[str] = set()
    for k, edge in enumerate(game.edges):
        if edge.id in seen_edge_ids:
            violations.append(Violation(f"edges[{k}].id", f"duplicate edge id '{edge.id}'"))
        seen_edge_ids.add(edge.id)
        coeffs = edge.latency.coeffs
        if not coeffs:
            violations.append(Violation(f"edges[{k}].latency.coeffs", "empty coefficient list"))
        if len(coeffs) - 1 > MAX_DEGREE:
            violations.append(
                Violation(
                    f"edges[{k}].latency.coeffs",
                    f"degree {len(coeffs) - 1} exceeds maximum {MAX_DEGREE}",
                )
            )
        for j, c in enumerate(coeffs):
            if c < 0:
                violations.append(
                    Violation(f"edges[{k}].latency.coeffs[{j}]", f"negative coefficient {c}")
                )
    seen_type_ids: set[str] = set()
    for k, ptype in enumerate(game.player_types):
        if ptype.id in seen_type_ids:
            violations.append(
                Violation(f"player_types[{k}].id", f"duplicate player type id '{ptype.id}'")
            )
        seen_type_ids.add(ptype.id)
        if ptype.demand < 0:
            violations.append(
                Violation(f"player_types[{k}].demand", f"negative demand {ptype.demand}")
            )
        if ptype.demand > 0 and not ptype.strategies:
            violations.append(
                Violation(f"player_types[{k}].strategies", "no strategies for positive demand")
            )
        for s, strategy in enumerate(ptype.strategies):
            if not strategy:
                violations.append(
                    Violation(f"player_types[{k}].strategies[{s}]", "empty strategy")
                )
            for edge_id in sorted(strategy):
                if edge_id not in seen_edge_ids:
                    violations.append(
                        Violation(
                            f"player_types[{k}].strategies[{s}]",
                            f"unknown edge id '{edge_id}'",
                        )
                    )
    return violations


def edge_loads(game: Game, flow: Flow) -> EdgeLoads:
    """Aggregate a flow into per-type and total edge loads.

    Raises ValueError if the flow references an unknown player type or a
    strategy index out of range.
    """
    per_type = {(e.id, t.id): 0.0 for e in game.edges for t in game.player_types}
    for (type_id, index), amount in flow.amounts.items():
        ptype = game.player_type(type_id)
        if not 0 <= index < len(ptype.strategies):
            raise ValueError(
                f"strategy index {index} out of range for player type '{type_id}'"
            )
        for edge_id in ptype.strategies[index]:
            per_type[(edge_id, type_id)] += amount
    total = {
        e.id: sum(per_type[(e.id, t.id)] for t in game.player_types) for e in game.edges
    }
    return EdgeLoads(per_type=per_type, total=total)


def is_feasible(game: Game, flow: Flow, tol: float = FEASIBILITY_TOL) -> bool:
    """True iff all amounts are nonnegative, reference existing strategies,
    and each type's amounts sum to its demand within tol."""
    sums = {t.id: 0.0 for t in game.player_types}
    by_id = {t.id: t for t in game.player_types}
    for (type_id, index), amount in flow.amounts.items():
        if amount < 0:
            return False
        ptype = by_id.get(type_id)
        if ptype is None or not 0 <= index < len(ptype.strategies):
            return False
        sums[type_id] += amount
    return all(abs(sums[t.id] - t.demand) <= tol for t in game.player_types)


def social_cost(game: Game, flow: Flow, tol: float = FEASIBILITY_TOL) -> float:
    """Total cost sum_e l_e(x_e) * x_e of a feasible flow."""
    if not is_feasible(game, flow, tol):
        raise ValueError("infeasible flow")
    loads = edge_loads(game, flow)
    return sum(e.latency(loads.total[e.id]) * loads.total[e.id] for e in game.edges)


def player_cost(game: Game, flow: Flow, type_id: str, tol: float = FEASIBILITY_TOL) -> float:
    """Cost borne by one player type: sum_e l_e(x_e) * x_e^i."""
    ptype = game.player_type(type_id)
    if not is_feasible(game, flow, tol):
        raise ValueError("infeasible flow")
    loads = edge_loads(game, flow)
    return sum(
        e.latency(loads.total[e.id]) * loads.per_type[(e.id, ptype.id)]
        for e in game.edges
    )
