"""Normalized Hermite functions, oscillator eigenvalues, Gauss-Hermite rules.

phi_k(x) = (2^k k! sqrt(pi))^(-1/2) H_k(x) e^(-x^2/2) is evaluated through the
normalized three-term recurrence

    phi_{k+1}(x) = x sqrt(2/(k+1)) phi_k(x) - sqrt(k/(k+1)) phi_{k-1}(x),

which keeps every intermediate O(1); the raw polynomials H_k overflow near
k ~ 90.  The weight-free variant h_k(x) = phi_k(x) e^(x^2/2) follows the same
recurrence from h_0 = pi^(-1/4) and is what quadrature code should combine
with e^(-x^2)-weighted Gauss-Hermite rules, so no large/small float products
ever appear.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .multiindex import MultiIndex

_PI_QUARTER = np.pi ** (-0.25)


def hermite_table(max_degree: int, x, weighted: bool = True) -> np.ndarray:
    """Values phi_k(x) for k = 0..max_degree, shape (max_degree+1, len(x)).

    With weighted=False the Gaussian factor e^(-x^2/2) is dropped, giving the
    weight-free values h_k(x) = phi_k(x) e^(x^2/2).
    """
    if max_degree < 0:
        raise ValueError(f"max_degree must be >= 0, got {max_degree}")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if not np.all(np.isfinite(x)):
        raise ValueError("evaluation points must be finite")
    out = np.empty((max_degree + 1, x.size))
    out[0] = _PI_QUARTER * np.exp(-0.5 * x * x) if weighted else _PI_QUARTER
    if max_degree >= 1:
        out[1] = x * np.sqrt(2.0) * out[0]
    for k in range(1, max_degree):
        out[k + 1] = x * np.sqrt(2.0 / (k + 1)) * out[k] - np.sqrt(k / (k + 1.0)) * out[k - 1]
    return out


def eval_hermite_1d(k: int, x: float) -> float:
    """phi_k(x) for a single degree and point."""
    if k < 0:
        raise ValueError(f"degree must be >= 0, got {k}")
    if not np.isfinite(x):
        raise ValueError(f"evaluation point must be finite, got {x}")
    return float(hermite_table(k, [x])[k, 0])


def eval_hermite_multi(nu: MultiIndex, x) -> float:
    """Tensor-product value phi_nu(x) = prod_j phi_{nu_j}(x_j)."""
    x = np.asarray(x, dtype=float).ravel()
    if x.size != nu.dim:
        raise ValueError(f"point has dimension {x.size}, multi-index has {nu.dim}")
    return float(np.prod([eval_hermite_1d(k, xj) for k, xj in zip(nu, x)]))


def oscillator_eigenvalue(nu: MultiIndex) -> float:
    """Eigenvalue of the harmonic oscillator on phi_nu: 2|nu| + n."""
    return float(2 * nu.order + nu.dim)


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Hermite rule for the weight e^(-x^2) on the real line."""

    nodes: np.ndarray
    weights: np.ndarray

    @property
    def order(self) -> int:
        return self.nodes.size

    def integrate(self, values) -> float:
        """Integral of f(x) e^(-x^2) from samples f(nodes)."""
        return float(self.weights @ np.asarray(values, dtype=float))


def gauss_hermite_rule(q: int) -> QuadratureRule:
    """Golub-Welsch rule of order q: exact for x^k e^(-x^2), k <= 2q-1.

    Nodes are eigenvalues of the symmetric tridiagonal Jacobi matrix of the
    Hermite recurrence (off-diagonals sqrt(k/2)).  Weights come from the
    Christoffel identity w_i = 1 / sum_{k<q} p_k(x_i)^2 over the orthonormal
    polynomials; unlike squared eigenvector components this keeps full
    relative accuracy in the tiny extreme-node weights.
    """
    if q < 1:
        raise ValueError(f"quadrature order must be >= 1, got {q}")
    if q == 1:
        return QuadratureRule(np.zeros(1), np.array([np.sqrt(np.pi)]))
    beta = np.sqrt(np.arange(1, q) / 2.0)
    try:
        nodes = eigh_tridiagonal(np.zeros(q), beta, eigvals_only=True)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(f"Jacobi eigenproblem failed for order {q}: {exc}") from exc
    # symmetrize: nodes come in +/- pairs, enforce it exactly
    nodes = 0.5 * (nodes - nodes[::-1])
    table = hermite_table(q - 1, nodes, weighted=False)
    weights = 1.0 / np.sum(table**2, axis=0)
    weights = 0.5 * (weights + weights[::-1])
    return QuadratureRule(nodes, weights)


def default_quadrature_order(level: int) -> int:
    """Exactness for degree-2N integrands plus margin for smooth symbols."""
    return level + 32
