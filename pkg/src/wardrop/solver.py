"""Wardrop equilibrium and social optimum solver.

Equilibria are minimizers of the convex edge-integral potential over the
product of per-type demand simplices, so the solver is a conditional
gradient loop: all-or-nothing best response, exact line search by
bisection, stop on the relative potential gap. Each iteration also
rebalances every player type by shifting mass from its costliest used
strategy onto its cheapest one (again with exact line search), which
removes the sublinear tail of the plain method. Every step is a descent
step, so the potential decreases monotonically.

Mode "original" prices edges by their latency and yields a Wardrop
equilibrium; mode "marginal" prices them by the marginal-cost transform,
whose potential is the social cost itself, so the result is a social
optimum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import (
    EdgeLoads,
    Flow,
    Game,
    GameValidationError,
    edge_loads,
    is_feasible,
    social_cost,
    validate_game,
)

MODES = ("original", "marginal")

# Floor for the relative-gap denominator, so near-zero potentials do not
# blow up the stopping rule.
EPS_DENOM = 1e-12

# A strategy counts as used when it carries more than this much mass.
EPS_USE = 1e-9


@dataclass(frozen=True)
class SolverParams:
    max_iterations: int = 10000
    relative_gap_tol: float = 1e-9
    line_search_tol: float = 1e-12

    def __post_init__(self) -> None:
        if self.max_iterations <= 0:
            raise ValueError("max_iterations must be positive")
        if self.relative_gap_tol <= 0 or self.line_search_tol <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class SolveResult:
    flow: Flow
    iterations: int
    relative_gap: float
    potential_value: float
    social_cost_original: float
    equilibrium_violation: float


class ConvergenceError(RuntimeError):
    def __init__(self, iterations: int, relative_gap: float):
        super().__init__(
            f"no convergence after {iterations} iterations, relative gap {relative_gap:.3e}"
        )
        self.iterations = iterations
        self.relative_gap = relative_gap


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got '{mode}'")


class _GameArrays:
    """Dense vector view of a game for the solver hot loop.

    Flow vectors are indexed by (type, strategy) keys in game order;
    loads are flow @ incidence. Latency coefficients are padded into one
    matrix per mode so a whole load vector evaluates in one Horner sweep.
    """

    def __init__(self, game: Game):
        self.game = game
        self.edge_index = {e.id: k for k, e in enumerate(game.edges)}
        n_edges = len(game.edges)
        keys: list[tuple[str, int]] = []
        spans: list[tuple[int, int]] = []
        rows: list[np.ndarray] = []
        for ptype in game.player_types:
            start = len(keys)
            for s, strategy in enumerate(ptype.strategies):
                keys.append((ptype.id, s))
                row = np.zeros(n_edges)
                for edge_id in strategy:
                    row[self.edge_index[edge_id]] = 1.0
                rows.append(row)
            spans.append((start, len(keys)))
        self.keys = keys
        self.row_index = {key: r for r, key in enumerate(keys)}
        self.spans = spans
        self.incidence = np.array(rows) if rows else np.zeros((0, n_edges))
        self.demands = [float(t.demand) for t in game.player_types]
        original = [e.latency.coeffs for e in game.edges]
        marginal = [e.latency.marginal().coeffs for e in game.edges]
        self.coeff_banks = {
            "original": _pad_bank(original, n_edges),
            "marginal": _pad_bank(marginal, n_edges),
        }
        # Plain tuples of the same coefficients for scalar work in the
        # line search, where numpy call overhead dominates.
        self.coeff_tuples = {"original": original, "marginal": marginal}
        self.integral_banks = {
            mode: bank / np.arange(1.0, bank.shape[1] + 1.0)
            for mode, bank in self.coeff_banks.items()
        }

    def loads(self, f: np.ndarray) -> np.ndarray:
        if self.incidence.shape[0] == 0:
            return np.zeros(self.incidence.shape[1])
        return f @ self.incidence

    def edge_values(self, bank: np.ndarray, x: np.ndarray) -> np.ndarray:
        acc = np.zeros_like(x)
        for j in range(bank.shape[1] - 1, -1, -1):
            acc = acc * x + bank[:, j]
        return acc

    def strategy_costs(self, x: np.ndarray, mode: str) -> np.ndarray:
        return self.incidence @ self.edge_values(self.coeff_banks[mode], x)

    def potential(self, x: np.ndarray, mode: str) -> float:
        return float(x @ self.edge_values(self.integral_banks[mode], x))

    def all_or_nothing(self, costs: np.ndarray) -> np.ndarray:
        f = np.zeros(len(self.keys))
        for (start, stop), ptype in zip(self.spans, self.game.player_types):
            if stop > start:
                f[start + int(np.argmin(costs[start:stop]))] = ptype.demand
            elif ptype.demand > 0:
                raise ValueError(
                    f"player type '{ptype.id}' has positive demand but no strategies"
                )
        return f

    def flow_vector(self, flow: Flow) -> np.ndarray:
        f = np.zeros(len(self.keys))
        for key, amount in flow.amounts.items():
            if key not in self.row_index:
                raise ValueError(f"flow references unknown strategy {key}")
            f[self.row_index[key]] = amount
        return f

    def to_flow(self, f: np.ndarray) -> Flow:
        return Flow({key: float(v) for key, v in zip(self.keys, f)})


def _pad_bank(coeff_lists: list[tuple[float, ...]], n_edges: int) -> np.ndarray:
    width = max((len(c) for c in coeff_lists), default=1) or 1
    bank = np.zeros((n_edges, width))
    for k, coeffs in enumerate(coeff_lists):
        bank[k, : len(coeffs)] = coeffs
    return bank


def _bisect_gamma(
    arrays: _GameArrays,
    x_current: np.ndarray,
    x_target: np.ndarray,
    mode: str,
    tol: float,
) -> float:
    """Minimize the potential along loads (1-g) * current + g * target.

    The directional derivative g -> sum_e l_e(x_e(g)) * delta_e is
    nondecreasing (convex potential), so bisection on its sign finds the
    minimizer. Returns 0 when the derivative at 0 is already nonnegative
    and 1 when it is still negative at 1.
    """
    coeff_lists = arrays.coeff_tuples[mode]
    active = [k for k in range(len(x_current)) if x_target[k] != x_current[k]]
    base = [float(x_current[k]) for k in active]
    delta = [float(x_target[k] - x_current[k]) for k in active]
    coeffs = [coeff_lists[k] for k in active]

    def slope(gamma: float) -> float:
        total = 0.0
        for b, d, cs in zip(base, delta, coeffs):
            x = b + gamma * d
            acc = 0.0
            for c in reversed(cs):
                acc = acc * x + c
            total += acc * d
        return total

    if slope(0.0) >= 0.0:
        return 0.0
    if slope(1.0) <= 0.0:
        return 1.0
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        d_mid = slope(mid)
        if d_mid == 0.0:
            return mid
        if d_mid < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _descend(
    arrays: _GameArrays, f: np.ndarray, target: np.ndarray, mode: str, tol: float
) -> np.ndarray:
    gamma = _bisect_gamma(arrays, arrays.loads(f), arrays.loads(target), mode, tol)
    if gamma == 0.0:
        return f
    return f + gamma * (target - f)


def strategy_latency(
    game: Game, loads: EdgeLoads, type_id: str, strategy_index: int, mode: str
) -> float:
    """Latency of one strategy at the given loads, in the given mode."""
    _check_mode(mode)
    ptype = game.player_type(type_id)
    if not 0 <= strategy_index < len(ptype.strategies):
        raise ValueError(
            f"strategy index {strategy_index} out of range for player type '{type_id}'"
        )
    total = 0.0
    for edge_id in sorted(ptype.strategies[strategy_index]):
        fn = game.edge(edge_id).latency
        if mode == "marginal":
            fn = fn.marginal()
        total += fn(loads.total[edge_id])
    return total


def best_response(game: Game, loads: EdgeLoads, mode: str) -> Flow:
    """All-or-nothing flow: each type's demand on its cheapest strategy.

    Ties break toward the lowest strategy index. Raises ValueError for a
    type with positive demand and no strategies.
    """
    _check_mode(mode)
    amounts: dict[tuple[str, int], float] = {}
    for ptype in game.player_types:
        if not ptype.strategies:
            if ptype.demand > 0:
                raise ValueError(
                    f"player type '{ptype.id}' has positive demand but no strategies"
                )
            continue
        costs = [
            strategy_latency(game, loads, ptype.id, s, mode)
            for s in range(len(ptype.strategies))
        ]
        pick = min(range(len(costs)), key=costs.__getitem__)
        for s in range(len(ptype.strategies)):
            amounts[(ptype.id, s)] = ptype.demand if s == pick else 0.0
    return Flow(amounts)


def line_search(
    game: Game, current: Flow, target: Flow, mode: str, tol: float = 1e-12
) -> float:
    """Step size in [0, 1] minimizing the potential between two flows.

    Returns 0 when the potential cannot decrease toward the target (in
    particular when current equals target).
    """
    _check_mode(mode)
    arrays = _GameArrays(game)
    x_current = arrays.loads(arrays.flow_vector(current))
    x_target = arrays.loads(arrays.flow_vector(target))
    return _bisect_gamma(arrays, x_current, x_target, mode, tol)


def potential(game: Game, flow: Flow, mode: str) -> float:
    """Beckmann-style objective: sum over edges of the mode latency
    integral from 0 to the edge load. In marginal mode this equals the
    social cost of the flow."""
    _check_mode(mode)
    loads = edge_loads(game, flow)
    total = 0.0
    for e in game.edges:
        fn = e.latency.marginal() if mode == "marginal" else e.latency
        total += fn.integral(loads.total[e.id])
    return total


def solve(
    game: Game,
    mode: str,
    params: SolverParams | None = None,
    *,
    initial_flow: Flow | None = None,
) -> SolveResult:
    """Minimize the mode potential; return the flow and convergence data.

    Starts from the all-or-nothing flow at zero loads unless initial_flow
    (any feasible flow) is given. Stops when the linearized improvement,
    relative to the potential magnitude, drops to relative_gap_tol.
    Raises ConvergenceError if the budget runs out first.
    """
    _check_mode(mode)
    if params is None:
        params = SolverParams()
    report = validate_game(game)
    if report:
        raise GameValidationError(report)
    arrays = _GameArrays(game)
    if initial_flow is None:
        zero = np.zeros(len(game.edges))
        f = arrays.all_or_nothing(arrays.strategy_costs(zero, mode))
    else:
        if not is_feasible(game, initial_flow):
            raise ValueError("initial flow is infeasible")
        f = arrays.flow_vector(initial_flow)

    iterations = 0
    relative_gap = float("inf")
    phi = 0.0
    for iteration in range(params.max_iterations + 1):
        x = arrays.loads(f)
        costs = arrays.strategy_costs(x, mode)
        target = arrays.all_or_nothing(costs)
        gap = float(costs @ (f - target))
        phi = arrays.potential(x, mode)
        relative_gap = gap / max(abs(phi), EPS_DENOM)
        if relative_gap <= params.relative_gap_tol:
            iterations = iteration
            break
        if iteration == params.max_iterations:
            raise ConvergenceError(iteration, relative_gap)
        f = _descend(arrays, f, target, mode, params.line_search_tol)
        # Rebalance each type: drain the costliest used strategy into the
        # cheapest until no profitable pair remains this round.
        for start, stop in arrays.spans:
            for _ in range(stop - start):
                x = arrays.loads(f)
                seg_costs = arrays.strategy_costs(x, mode)[start:stop]
                seg_flow = f[start:stop]
                used = np.flatnonzero(seg_flow > 0.0)
                if used.size == 0:
                    break
                worst = int(used[np.argmax(seg_costs[used])])
                best = int(np.argmin(seg_costs))
                if worst == best or seg_costs[worst] <= seg_costs[best]:
                    break
                swapped = f.copy()
                swapped[start + best] += swapped[start + worst]
                swapped[start + worst] = 0.0
                f = _descend(arrays, f, swapped, mode, params.line_search_tol)

    flow = arrays.to_flow(f)
    return SolveResult(
        flow=flow,
        iterations=iterations,
        relative_gap=relative_gap,
        potential_value=phi,
        social_cost_original=social_cost(game, flow),
        equilibrium_violation=wardrop_gap(game, flow, mode),
    )


def wardrop_gap(game: Game, flow: Flow, mode: str, eps_use: float = EPS_USE) -> float:
    """Worst excess of a used strategy's latency over its type's cheapest.

    Zero (up to eps_use mass filtering) characterizes a Wardrop
    equilibrium in the given mode. Requires a feasible flow.
    """
    _check_mode(mode)
    if not is_feasible(game, flow):
        raise ValueError("infeasible flow")
    loads = edge_loads(game, flow)
    worst = 0.0
    for ptype in game.player_types:
        if not ptype.strategies:
            continue
        costs = [
            strategy_latency(game, loads, ptype.id, s, mode)
            for s in range(len(ptype.strategies))
        ]
        cheapest = min(costs)
        for s, cost in enumerate(costs):
            if flow.amount(ptype.id, s) > eps_use:
                worst = max(worst, cost - cheapest)
    return max(worst, 0.0)


def price_of_anarchy(game: Game, params: SolverParams | None = None) -> float:
    """Equilibrium social cost over optimal social cost.

    Raises ValueError when the optimal social cost is zero, where the
    ratio is undefined.
    """
    selfish = solve(game, "original", params)
    optimal = solve(game, "marginal", params)
    if optimal.social_cost_original <= 0.0:
        raise ValueError("price of anarchy undefined: optimal social cost is zero")
    return selfish.social_cost_original / optimal.social_cost_original
