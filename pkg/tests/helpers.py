"""Shared generators for the test suite.

Random games stay at desk scale: at most 6 edges, 3 player types, degree
3, and 3 strategies per type, so every instance is cheap to solve and
small enough for the brute-force oracles.
"""

from __future__ import annotations

import numpy as np

from wardrop import BatchSystem, Edge, Flow, Game, LatencyFunction, PlayerType


def random_game(
    rng: np.random.Generator,
    max_edges: int = 6,
    max_types: int = 3,
    max_degree: int = 3,
) -> Game:
    n_edges = int(rng.integers(1, max_edges + 1))
    edges = []
    for k in range(n_edges):
        degree = int(rng.integers(0, max_degree + 1))
        coeffs = tuple(float(c) for c in rng.uniform(0.0, 1.5, size=degree + 1))
        edges.append(Edge(f"e{k}", LatencyFunction(coeffs)))
    edge_ids = [e.id for e in edges]
    types = []
    for t in range(int(rng.integers(1, max_types + 1))):
        strategies = []
        for _ in range(int(rng.integers(1, 4))):
            size = int(rng.integers(1, min(3, n_edges) + 1))
            members = rng.choice(n_edges, size=size, replace=False)
            strategies.append(frozenset(edge_ids[int(i)] for i in members))
        demand = float(rng.uniform(0.1, 1.5))
        types.append(PlayerType(f"t{t}", demand, tuple(strategies)))
    return Game(tuple(edges), tuple(types))


def random_feasible_flow(game: Game, rng: np.random.Generator) -> Flow:
    amounts: dict[tuple[str, int], float] = {}
    for ptype in game.player_types:
        if not ptype.strategies:
            continue
        weights = rng.random(len(ptype.strategies))
        weights = weights / weights.sum() * ptype.demand
        for s, value in enumerate(weights):
            amounts[(ptype.id, s)] = float(value)
    return Flow(amounts)


def random_batch_system(game: Game, rng: np.random.Generator, max_count: int = 8) -> BatchSystem:
    return BatchSystem({e.id: int(rng.integers(1, max_count + 1)) for e in game.edges})


def last_strategy_flow(game: Game) -> Flow:
    """All-or-nothing flow on each type's highest-index strategy; a
    second solver initialization distinct from the default one."""
    amounts: dict[tuple[str, int], float] = {}
    for ptype in game.player_types:
        last = len(ptype.strategies) - 1
        for s in range(len(ptype.strategies)):
            amounts[(ptype.id, s)] = ptype.demand if s == last else 0.0
    return Flow(amounts)


def mix_flows(current: Flow, target: Flow, gamma: float) -> Flow:
    keys = set(current.amounts) | set(target.amounts)
    return Flow(
        {
            key: (1.0 - gamma) * current.amounts.get(key, 0.0)
            + gamma * target.amounts.get(key, 0.0)
            for key in keys
        }
    )


def hard_game() -> Game:
    """A seeded instance that needs well over one solver iteration; used
    to exercise the non-convergence path deterministically."""
    rng = np.random.default_rng(7)
    game = random_game(rng)
    for _ in range(26):
        game = random_game(rng)
    return game
