"""Spectral analysis of assembled operators: singular values, Schatten sums,
and the two independent trace computations.

trace_formula sums the diagonal integrals of the symbol (the nuclear-trace
expression); spectral_trace sums the eigenvalues of the assembled matrix.
For trace-class operators the two agree, and comparing them is the point of
this module.

All criterion-style sums are accumulated with math.fsum in a fixed order
(graded enumeration order of the truncation), so reports are reproducible
bit for bit regardless of thread counts.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .multiindex import TruncationSpec
from .operator import OperatorMatrix, assemble_matrix, basis_values, tensor_grid, _symbol_on_grid
from .symbol import SymbolSpec, _multiplier_value
from .hermite import default_quadrature_order

IMAG_RESIDUAL_TOL = 1e-8


def _entries(m) -> np.ndarray:
    return m.entries if isinstance(m, OperatorMatrix) else np.asarray(m, dtype=float)


def singular_values(m) -> np.ndarray:
    """Singular values of the matrix, descending."""
    a = _entries(m)
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    try:
        sv = np.linalg.svd(a, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(f"SVD did not converge: {exc}") from exc
    return np.sort(sv)[::-1]


def schatten_sum(sv, r: float) -> float:
    """Raw sum of sigma_i^r over the singular values, in given order."""
    if r <= 0:
        raise ValueError(f"Schatten order must be positive, got {r}")
    return math.fsum(float(s) ** r for s in np.asarray(sv, dtype=float))


def schatten_norm(sv, r: float) -> float:
    """(sum sigma_i^r)^(1/r)."""
    return schatten_sum(sv, r) ** (1.0 / r)


def spectral_trace(m) -> float:
    """Sum of the eigenvalues of the matrix, multiplicities included.

    Uses the dense nonsymmetric eigensolver; the imaginary parts must cancel
    to within 1e-8 * ||M|| or a warning is issued.
    """
    a = _entries(m)
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    if np.allclose(a, a.T, rtol=0.0, atol=1e-14 * max(1.0, np.abs(a).max())):
        return math.fsum(np.linalg.eigvalsh(a))
    try:
        eigs = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(f"eigendecomposition did not converge: {exc}") from exc
    scale = np.linalg.norm(a)
    imag = abs(math.fsum(eigs.imag))
    if imag > IMAG_RESIDUAL_TOL * max(scale, 1e-300):
        warnings.warn(
            f"imaginary parts of the eigenvalue sum do not cancel: {imag:.3e} "
            f"against tolerance {IMAG_RESIDUAL_TOL * scale:.3e}",
            RuntimeWarning,
        )
    return math.fsum(eigs.real)


# ---------------------------------------------------------------------------
# per-basis-function column integrals of the symbol

def column_integrals(
    sym: SymbolSpec, spec: TruncationSpec, q: int | None = None, squared: bool = True
) -> np.ndarray:
    """Per-nu integrals of m(x,nu)^2 phi_nu(x)^2 (squared=True) or of
    m(x,nu) phi_nu(x)^2 (squared=False), in enumeration order.

    Multiplier symbols are exact without quadrature: the integrals collapse
    to m(nu)^2 resp. m(nu) since phi_nu has unit norm.
    """
    if sym.dim != spec.dim:
        raise ValueError(f"symbol dimension {sym.dim} != truncation dimension {spec.dim}")
    if sym.is_multiplier:
        vals = np.array([_multiplier_value(sym, nu) for nu in spec.indices])
        return vals**2 if squared else vals
    if q is None:
        q = default_quadrature_order(spec.level)
    grid = tensor_grid(spec.dim, q)
    basis = basis_values(spec, grid)
    mvals = _symbol_on_grid(sym, spec, grid)
    integrand = (mvals**2 if squared else mvals) * basis**2
    return integrand @ grid.weights


def trace_formula(sym: SymbolSpec, spec: TruncationSpec, q: int | None = None) -> float:
    """Truncated nuclear-trace expression: sum over |nu| <= N of the
    integrals of m(x,nu) phi_nu(x)^2.

    These integrals are exactly the diagonal entries of the assembled matrix.
    """
    return math.fsum(column_integrals(sym, spec, q, squared=False))


def hilbert_schmidt_direct(sym: SymbolSpec, spec: TruncationSpec, q: int | None = None) -> float:
    """Truncated Hilbert-Schmidt criterion sum: sum of the integrals of
    |m(x,nu)|^2 phi_nu(x)^2 (the squared HS norm of T_m before truncation
    loss)."""
    return math.fsum(column_integrals(sym, spec, q, squared=True))


# ---------------------------------------------------------------------------
# aggregate report

@dataclass
class SchattenReport:
    dim: int
    level: int
    quad_order: int
    singular_values: np.ndarray
    schatten_norms: dict = field(default_factory=dict)  # r -> norm
    schatten_sums: dict = field(default_factory=dict)   # r -> raw sum
    matrix_trace: float = 0.0
    formula_trace: float = 0.0
    spectral_trace: float = 0.0
    hs_direct: float = 0.0
    assembly_residual: float = 0.0
    residual_warning: bool = False
    convergence: list = field(default_factory=list)  # (N, value) pairs

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "level": self.level,
            "quad_order": self.quad_order,
            "singular_values": [float(s) for s in self.singular_values],
            "schatten_norms": {repr(r): v for r, v in self.schatten_norms.items()},
            "schatten_sums": {repr(r): v for r, v in self.schatten_sums.items()},
            "matrix_trace": self.matrix_trace,
            "formula_trace": self.formula_trace,
            "spectral_trace": self.spectral_trace,
            "hilbert_schmidt_direct": self.hs_direct,
            "assembly_residual": self.assembly_residual,
            "residual_warning": self.residual_warning,
            "convergence": [[n, v] for n, v in self.convergence],
        }


def build_report(
    sym: SymbolSpec,
    spec: TruncationSpec,
    q: int | None = None,
    r_values: tuple[float, ...] = (1.0, 2.0),
) -> SchattenReport:
    """Assemble the operator and compute the full spectral summary."""
    m = assemble_matrix(sym, spec, q)
    sv = singular_values(m)
    report = SchattenReport(
        dim=spec.dim,
        level=spec.level,
        quad_order=m.quad_order,
        singular_values=sv,
        matrix_trace=m.trace(),
        formula_trace=trace_formula(sym, spec, q),
        spectral_trace=spectral_trace(m),
        hs_direct=hilbert_schmidt_direct(sym, spec, q),
        assembly_residual=m.assembly_residual,
        residual_warning=m.residual_warning,
    )
    for r in r_values:
        report.schatten_sums[r] = schatten_sum(sv, r)
        report.schatten_norms[r] = report.schatten_sums[r] ** (1.0 / r)
    return report
