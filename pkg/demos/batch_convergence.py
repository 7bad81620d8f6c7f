#!/usr/bin/env python3
"""How fast batch pricing approaches the plain social cost.

Splitting each edge's load into N equal batches and charging batch b the
marginal-cost latency at b/N of the load overpays by a right-Riemann-sum
error. Doubling N halves that error on the Pigou network (it is exactly
1/(4N) there), and the same downward march shows on a cubic edge.
"""

from pathlib import Path

from wardrop import BatchSystem, batch_social_cost, load_game, solve

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


def sweep(name: str) -> None:
    game = load_game(FIXTURES / name)
    optimum = solve(game, "marginal").flow
    print(f"{name}: batch overshoot at the social optimum")
    print(f"  {'N':>5}  {'batch cost':>12}  {'gap':>12}")
    n = 1
    while n <= 1024:
        report = batch_social_cost(game, optimum, BatchSystem.uniform(game, n))
        print(f"  {n:>5}  {report.total_batch_cost:>12.8f}  {report.total_gap:>12.8f}")
        n *= 2
    print()


def main() -> None:
    sweep("pigou.json")
    sweep("mono.json")


if __name__ == "__main__":
    main()
