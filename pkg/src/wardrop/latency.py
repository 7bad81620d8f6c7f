"""Polynomial latency functions with exact calculus.

Latencies are polynomials with nonnegative coefficients. On x >= 0 that
makes them nonnegative, nondecreasing, convex and continuously
differentiable, and it turns the derivative, the marginal-cost transform
and the definite integral into exact coefficient operations, so no
quadrature is needed anywhere downstream.
"""

from __future__ import annotations

from dataclasses import dataclass

# Degree cap: keeps the (j+1) coefficient transforms and Horner evaluation
# well inside float range at the load magnitudes this package targets.
MAX_DEGREE = 16


@dataclass(frozen=True)
class LatencyFunction:
    """Latency polynomial l(x) = sum_j coeffs[j] * x**j, lowest power first.

    Structurally bad coefficient lists (empty, negative entries, degree
    above MAX_DEGREE) are deliberately constructible so that game
    validation can report them all at once; see model.validate_game.
    """

    coeffs: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x: float) -> float:
        """Evaluate l(x) by Horner's rule. Requires x >= 0."""
        _require_nonnegative(x)
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self, x: float) -> float:
        """Evaluate l'(x). Requires x >= 0."""
        _require_nonnegative(x)
        acc = 0.0
        for j in range(self.degree, 0, -1):
            acc = acc * x + j * self.coeffs[j]
        return acc

    def marginal(self) -> LatencyFunction:
        """Return the marginal-cost latency l(x) + l'(x) * x.

        For polynomials this is the coefficient map a_j -> (j+1) * a_j, so
        the result stays inside the same nonnegative-coefficient family.
        """
        return LatencyFunction(tuple((j + 1) * c for j, c in enumerate(self.coeffs)))

    def integral(self, x: float) -> float:
        """Exact definite integral of l from 0 to x. Requires x >= 0."""
        _require_nonnegative(x)
        acc = 0.0
        for j in range(self.degree, -1, -1):
            acc = acc * x + self.coeffs[j] / (j + 1)
        return acc * x


def _require_nonnegative(x: float) -> None:
    if x < 0:
        raise ValueError(f"latency argument must be nonnegative, got {x}")
