"""Variable-delay batch pricing of a flow.

Each edge's load is split into N_e equal batches and batch b pays the
marginal-cost latency evaluated at the fraction b / N_e of the load. The
per-edge total is then a right-endpoint Riemann sum of the marginal-cost
latency, which upper-bounds the plain edge cost and converges to it as
batch counts grow. select_batch_system inverts the Riemann error bound
to hit any requested total overshoot, and verify_batch_equilibrium
checks the induced game's equilibrium condition at its worst case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import FEASIBILITY_TOL, EdgeLoads, Flow, Game, edge_loads, is_feasible
from .solver import EPS_USE, SolverParams, SolveResult, solve

# Chunk size for batch sums; bounds memory when a tight epsilon demands
# batch counts in the millions, with a fixed size so sums stay
# deterministic.
_SUM_CHUNK = 1 << 20


@dataclass(frozen=True)
class BatchSystem:
    """Batch counts per edge id; every count is an integer >= 1."""

    counts: dict[str, int]

    def __post_init__(self) -> None:
        normalized: dict[str, int] = {}
        for edge_id, count in self.counts.items():
            if count != int(count):
                raise ValueError(f"batch count for '{edge_id}' must be an integer, got {count}")
            count = int(count)
            if count < 1:
                raise ValueError(f"batch count for '{edge_id}' must be >= 1, got {count}")
            normalized[str(edge_id)] = count
        object.__setattr__(self, "counts", normalized)

    @classmethod
    def uniform(cls, game: Game, count: int) -> BatchSystem:
        return cls({e.id: count for e in game.edges})


@dataclass(frozen=True)
class BatchEdgeReport:
    count: int
    load: float
    base_cost: float
    batch_cost: float
    gap: float


@dataclass(frozen=True)
class BatchReport:
    """Per-edge batch costs plus totals, aggregated in ascending edge id."""

    per_edge: dict[str, BatchEdgeReport]
    total_batch_cost: float
    total_original_cost: float
    total_gap: float


@dataclass(frozen=True)
class BatchEquilibrium:
    is_equilibrium: bool
    max_violation: float


@dataclass(frozen=True)
class MechanismReport:
    epsilon: float
    optimum: SolveResult
    batch_system: BatchSystem
    batch_report: BatchReport
    equilibrium: BatchEquilibrium
    selfish_cost: float
    price_of_anarchy: float | None

    @property
    def optimal_cost(self) -> float:
        return self.optimum.social_cost_original


class MechanismError(RuntimeError):
    """The mechanism's own guarantees failed on a solved flow."""


def _check_count(n_batches: int) -> int:
    if n_batches != int(n_batches) or int(n_batches) < 1:
        raise ValueError(f"batch count must be an integer >= 1, got {n_batches}")
    return int(n_batches)


def _check_cover(game: Game, batch_system: BatchSystem) -> None:
    have = set(batch_system.counts)
    want = set(game.edge_ids)
    if have != want:
        missing = sorted(want - have)
        extra = sorted(have - want)
        parts = []
        if missing:
            parts.append(f"missing edges {missing}")
        if extra:
            parts.append(f"unknown edges {extra}")
        raise ValueError("incomplete batch system: " + ", ".join(parts))


def batch_latency(
    game: Game, loads: EdgeLoads, edge_id: str, batch_index: int, n_batches: int
) -> float:
    """Per-unit latency charged to batch b of N on one edge."""
    n = _check_count(n_batches)
    if batch_index != int(batch_index) or not 1 <= int(batch_index) <= n:
        raise ValueError(f"batch index {batch_index} out of range 1..{n}")
    fraction = int(batch_index) / n
    return game.edge(edge_id).latency.marginal()(fraction * loads.total[edge_id])


def batch_schedule(
    game: Game, loads: EdgeLoads, edge_id: str, n_batches: int
) -> list[tuple[int, float, float]]:
    """All (batch index, per-unit latency, batch mass) rows for one edge.

    Latencies are nondecreasing in the batch index and the masses sum to
    the edge load.
    """
    n = _check_count(n_batches)
    mass = loads.total[edge_id] / n
    return [
        (b, batch_latency(game, loads, edge_id, b, n), mass) for b in range(1, n + 1)
    ]


def batch_edge_cost(game: Game, loads: EdgeLoads, edge_id: str, n_batches: int) -> float:
    """Total batch cost of one edge: the right-endpoint Riemann sum
    (x_e / N) * sum_b lhat((b / N) * x_e) of the marginal-cost latency."""
    n = _check_count(n_batches)
    x = loads.total[edge_id]
    coeffs = game.edge(edge_id).latency.marginal().coeffs
    total = 0.0
    for chunk_start in range(1, n + 1, _SUM_CHUNK):
        chunk_stop = min(chunk_start + _SUM_CHUNK, n + 1)
        z = (np.arange(chunk_start, chunk_stop, dtype=float) / n) * x
        acc = np.zeros_like(z)
        for c in reversed(coeffs):
            acc = acc * z + c
        total += float(acc.sum())
    return x / n * total


def batch_social_cost(
    game: Game, flow: Flow, batch_system: BatchSystem, tol: float = FEASIBILITY_TOL
) -> BatchReport:
    """Batch-price an entire feasible flow, edge by edge."""
    if not is_feasible(game, flow, tol):
        raise ValueError("infeasible flow")
    _check_cover(game, batch_system)
    loads = edge_loads(game, flow)
    per_edge: dict[str, BatchEdgeReport] = {}
    for edge_id in sorted(game.edge_ids):
        n = batch_system.counts[edge_id]
        x = loads.total[edge_id]
        batch_cost = batch_edge_cost(game, loads, edge_id, n)
        base_cost = game.edge(edge_id).latency(x) * x
        per_edge[edge_id] = BatchEdgeReport(
            count=n,
            load=x,
            base_cost=base_cost,
            batch_cost=batch_cost,
            gap=batch_cost - base_cost,
        )
    total_batch = sum(r.batch_cost for r in per_edge.values())
    total_base = sum(r.base_cost for r in per_edge.values())
    return BatchReport(
        per_edge=per_edge,
        total_batch_cost=total_batch,
        total_original_cost=total_base,
        total_gap=total_batch - total_base,
    )


def select_batch_system(
    game: Game, flow: Flow, epsilon: float, eps_use: float = EPS_USE
) -> BatchSystem:
    """Smallest batch counts whose Riemann error bound meets epsilon.

    The per-edge overshoot is at most (x_e / N_e) * (lhat(x_e) - lhat(0)),
    so splitting epsilon evenly over the m loaded edges and solving for
    N_e gives ceil(x_e * (lhat(x_e) - lhat(0)) * m / epsilon). Unloaded
    edges get N_e = 1.
    """
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if not is_feasible(game, flow):
        raise ValueError("infeasible flow")
    loads = edge_loads(game, flow)
    counts = {edge_id: 1 for edge_id in game.edge_ids}
    loaded = [edge_id for edge_id in sorted(game.edge_ids) if loads.total[edge_id] > eps_use]
    if loaded:
        budget = epsilon / len(loaded)
        for edge_id in loaded:
            x = loads.total[edge_id]
            marginal = game.edge(edge_id).latency.marginal()
            span = marginal(x) - marginal(0.0)
            if span > 0:
                counts[edge_id] = max(1, math.ceil(x * span / budget))
    return BatchSystem(counts)


def verify_batch_equilibrium(
    game: Game,
    flow: Flow,
    batch_system: BatchSystem,
    tol: float = 1e-6,
    eps_use: float = EPS_USE,
) -> BatchEquilibrium:
    """Check the batch equilibrium condition at its worst case.

    The binding instance of the condition is the last batch b_e = N_e on
    the current strategy, where the batch latency equals the full-load
    marginal-cost latency; deviations always pay full load. The verdict
    is therefore independent of the batch counts.
    """
    if not is_feasible(game, flow):
        raise ValueError("infeasible flow")
    _check_cover(game, batch_system)
    loads = edge_loads(game, flow)
    worst = 0.0
    for ptype in game.player_types:
        if not ptype.strategies:
            continue
        full_cost = []
        for strategy in ptype.strategies:
            full_cost.append(
                sum(
                    game.edge(edge_id).latency.marginal()(loads.total[edge_id])
                    for edge_id in sorted(strategy)
                )
            )
        cheapest = min(full_cost)
        for s, strategy in enumerate(ptype.strategies):
            if flow.amount(ptype.id, s) > eps_use:
                lhs = sum(
                    batch_latency(
                        game, loads, edge_id, batch_system.counts[edge_id],
                        batch_system.counts[edge_id],
                    )
                    for edge_id in sorted(strategy)
                )
                worst = max(worst, lhs - cheapest)
    worst = max(worst, 0.0)
    return BatchEquilibrium(is_equilibrium=worst <= tol, max_violation=worst)


def mechanism_pipeline(
    game: Game,
    epsilon: float,
    params: SolverParams | None = None,
    *,
    verify_tol: float = 1e-6,
) -> MechanismReport:
    """Solve for the social optimum, pick batch counts for epsilon, price
    the flow, and verify both guarantees.

    Raises MechanismError if the verified batch equilibrium fails or the
    realized cost overshoot exceeds epsilon; both indicate a solver or
    selection defect rather than bad input.
    """
    optimum = solve(game, "marginal", params)
    batch_system = select_batch_system(game, optimum.flow, epsilon)
    report = batch_social_cost(game, optimum.flow, batch_system)
    check = verify_batch_equilibrium(game, optimum.flow, batch_system, verify_tol)
    if not check.is_equilibrium:
        raise MechanismError(
            f"solved optimum is not a batch equilibrium (violation {check.max_violation:.3e})"
        )
    if report.total_gap > epsilon:
        raise MechanismError(
            f"batch cost overshoot {report.total_gap:.3e} exceeds epsilon {epsilon:.3e}"
        )
    selfish = solve(game, "original", params)
    if optimum.social_cost_original > 0:
        ratio = selfish.social_cost_original / optimum.social_cost_original
    else:
        ratio = None
    return MechanismReport(
        epsilon=epsilon,
        optimum=optimum,
        batch_system=batch_system,
        batch_report=report,
        equilibrium=check,
        selfish_cost=selfish.social_cost_original,
        price_of_anarchy=ratio,
    )
