"""Quadrature rules.

High-order Gauss-Legendre rules on [-1, 1] generated by Newton iteration,
and a product rule on the sphere (Gauss in cos theta x uniform azimuths)
that integrates all spherical polynomials up to a requested degree exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

__all__ = [
    "GaussLegendreRule",
    "gauss_legendre",
    "SphereRule",
    "sphere_rule_for_degree",
    "integrate_sphere",
]

_MAX_GL_NODES = 20000
_MAX_SPHERE_DEGREE = 40000


@dataclass(frozen=True)
class GaussLegendreRule:
    """Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].

    Exact for polynomials of degree <= 2n - 1.  Nodes are strictly
    increasing and symmetric about 0; weights sum to 2.
    """

    n: int
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, values) -> float:
        values = np.asarray(values, dtype=float)
        if values.shape != (self.n,):
            raise ValueError("values length must equal node count")
        return float(np.sum(self.weights * values))


def _legendre_pair_arr(n, x):
    # (P_n, P_{n-1}) on an array, upward recurrence
    pm1 = np.ones_like(x)
    p = x.copy()
    for k in range(2, n + 1):
        pm1, p = p, ((2 * k - 1) * x * p - (k - 1) * pm1) / k
    return p, pm1


@lru_cache(maxsize=64)
def gauss_legendre(n: int) -> GaussLegendreRule:
    """Generate the n-point Gauss-Legendre rule by Newton iteration.

    Initial guesses are the Chebyshev-like asymptotic root approximations;
    convergence to machine precision takes a handful of sweeps.  The nodes
    are converged until the Newton update stalls at rounding level (the
    absolute residual |P_n(node)| is then bounded by |P_n'(node)| * eps,
    which is the best float64 can represent); exactness is verified on
    monomials in the test suite.  Raises if no convergence in 100 sweeps.
    """
    n = int(n)
    if not 1 <= n <= _MAX_GL_NODES:
        raise ValueError(f"node count must be in [1, {_MAX_GL_NODES}]")
    if n == 1:
        return GaussLegendreRule(1, np.zeros(1), np.full(1, 2.0))
    # only the nonnegative half (x decreasing in k); mirror afterwards
    m = (n + 1) // 2
    k = np.arange(1, m + 1)
    x = np.cos(math.pi * (k - 0.25) / (n + 0.5))
    polish = 2  # extra sweeps after the update stalls at rounding level
    for _ in range(100):
        p, pm1 = _legendre_pair_arr(n, x)
        dp = n * (x * p - pm1) / (x * x - 1.0)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) < 1e-13:
            if polish == 0:
                break
            polish -= 1
    else:
        raise RuntimeError("Gauss-Legendre Newton iteration failed to converge")
    if n % 2:
        x[m - 1] = 0.0
    p, pm1 = _legendre_pair_arr(n, x)
    dp = n * (x * p - pm1) / (x * x - 1.0)
    w_half = 2.0 / ((1.0 - x * x) * dp * dp)
    # x[:n-m] are the n-m strictly positive roots; their negatives come first
    nodes = np.concatenate([-x[: n - m], x[::-1]])
    weights = np.concatenate([w_half[: n - m], w_half[::-1]])
    return GaussLegendreRule(n, nodes, weights)


@dataclass(frozen=True)
class SphereRule:
    """Product cubature on S^2: Gauss-Legendre in cos theta, uniform azimuths.

    Integrates every spherical harmonic of degree <= exact_degree exactly;
    total weight is 4 pi.  Node values are laid out ring-major with shape
    (n_theta, n_phi); cos_theta is ascending.
    """

    exact_degree: int
    cos_theta: np.ndarray
    theta_weights: np.ndarray  # includes the 2 pi / n_phi azimuth factor
    n_phi: int
    phis: np.ndarray = field(repr=False)

    @property
    def n_theta(self) -> int:
        return len(self.cos_theta)

    @property
    def node_count(self) -> int:
        return self.n_theta * self.n_phi


def sphere_rule_for_degree(d: int) -> SphereRule:
    """Smallest product rule exact for all spherical polynomials of degree <= d."""
    d = int(d)
    if d < 0:
        raise ValueError("degree must be nonnegative")
    if d > _MAX_SPHERE_DEGREE:
        raise ValueError(f"degree {d} exceeds the resource cap {_MAX_SPHERE_DEGREE}")
    n_theta = (d + 2) // 2 if d > 0 else 1
    gl = gauss_legendre(max(n_theta, 1))
    n_phi = d + 1
    phis = 2.0 * math.pi * np.arange(n_phi) / n_phi
    return SphereRule(
        exact_degree=d,
        cos_theta=gl.nodes,
        theta_weights=gl.weights * (2.0 * math.pi / n_phi),
        n_phi=n_phi,
        phis=phis,
    )


def integrate_sphere(rule: SphereRule, values) -> float:
    """Cubature sum over the sphere of ring-major node values.

    Accepts shape (n_theta, n_phi) or the equivalent flat array.  Ring sums
    use pairwise accumulation; the cross-ring reduction is exactly rounded
    (math.fsum), so the result is deterministic and compensated.
    """
    values = np.asarray(values, dtype=float)
    if values.ndim == 1:
        if values.size != rule.node_count:
            raise ValueError("values length must equal node count")
        values = values.reshape(rule.n_theta, rule.n_phi)
    elif values.shape != (rule.n_theta, rule.n_phi):
        raise ValueError("values must have shape (n_theta, n_phi)")
    ring = values.sum(axis=1)
    return math.fsum(rule.theta_weights * ring)
