"""Nonatomic congestion games: Wardrop equilibria, social optima and a
variable-delay batch pricing mechanism."""

from .batch import (
    BatchEdgeReport,
    BatchEquilibrium,
    BatchReport,
    BatchSystem,
    MechanismError,
    MechanismReport,
    batch_edge_cost,
    batch_latency,
    batch_schedule,
    batch_social_cost,
    mechanism_pipeline,
    select_batch_system,
    verify_batch_equilibrium,
)
from .formats import FormatError, load_flow, load_game, save_flow, save_game
from .latency import MAX_DEGREE, LatencyFunction
from .model import (
    Edge,
    EdgeLoads,
    Flow,
    Game,
    GameValidationError,
    PlayerType,
    Violation,
    edge_loads,
    is_feasible,
    player_cost,
    social_cost,
    validate_game,
)
from .solver import (
    ConvergenceError,
    SolveResult,
    SolverParams,
    best_response,
    line_search,
    potential,
    price_of_anarchy,
    solve,
    strategy_latency,
    wardrop_gap,
)

__version__ = "0.1.0"

__all__ = [
    "BatchEdgeReport",
    "BatchEquilibrium",
    "BatchReport",
    "BatchSystem",
    "ConvergenceError",
    "Edge",
    "EdgeLoads",
    "Flow",
    "FormatError",
    "Game",
    "GameValidationError",
    "LatencyFunction",
    "MAX_DEGREE",
    "MechanismError",
    "MechanismReport",
    "PlayerType",
    "SolveResult",
    "SolverParams",
    "Violation",
    "batch_edge_cost",
    "batch_latency",
    "batch_schedule",
    "batch_social_cost",
    "best_response",
    "edge_loads",
    "is_feasible",
    "line_search",
    "load_flow",
    "load_game",
    "mechanism_pipeline",
    "player_cost",
    "save_flow",
    "save_game",
    "potential",
    "price_of_anarchy",
    "select_batch_system",
    "social_cost",
    "solve",
    "strategy_latency",
    "validate_game",
    "verify_batch_equilibrium",
    "wardrop_gap",
]
