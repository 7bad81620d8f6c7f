#!/usr/bin/env python3
"""The two-road Pigou network, end to end.

One unit of traffic picks between a constant road (latency 1) and a
congestible road (latency x). Selfish routing piles everything onto the
congestible road; pricing edges at marginal cost splits the traffic and
cuts the total cost by a quarter.
"""

from pathlib import Path

from wardrop import (
    load_game,
    potential,
    price_of_anarchy,
    social_cost,
    solve,
    wardrop_gap,
)

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


def main() -> None:
    game = load_game(FIXTURES / "pigou.json")
    print("edges:")
    for e in game.edges:
        print(f"  {e.id}: coefficients {e.latency.coeffs}")

    selfish = solve(game, "original")
    print("\nselfish equilibrium (no one can switch and do better):")
    for (type_id, s), amount in sorted(selfish.flow.amounts.items()):
        print(f"  {type_id} strategy {s}: {amount:.4f}")
    print(f"  social cost {selfish.social_cost_original:.4f}")
    print(f"  equilibrium violation {wardrop_gap(game, selfish.flow, 'original'):.2e}")

    optimal = solve(game, "marginal")
    print("\nsocial optimum (equilibrium under marginal-cost pricing):")
    for (type_id, s), amount in sorted(optimal.flow.amounts.items()):
        print(f"  {type_id} strategy {s}: {amount:.4f}")
    print(f"  social cost {optimal.social_cost_original:.4f}")

    # The optimum is NOT a plain equilibrium: the constant road looks
    # worse than the half-loaded congestible one.
    print(f"\noptimum's plain-latency violation: "
          f"{wardrop_gap(game, optimal.flow, 'original'):.4f}")
    print(f"potential at the optimum: {potential(game, optimal.flow, 'original'):.4f}")
    print(f"price of anarchy: {price_of_anarchy(game):.6f} (4/3 exactly)")


if __name__ == "__main__":
    main()
