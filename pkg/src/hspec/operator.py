"""Finite truncations of pseudo-multipliers: matrix assembly, kernel sums,
and the analysis/synthesis transforms on the Hermite basis.

The computed matrix is the compression P_N T_m P_N with entries
M[mu, nu] = <T_m phi_nu, phi_mu> = integral of m(x, nu) phi_nu(x) phi_mu(x).
Columns are indexed by the input basis function nu, so each column is one
1-D family of integrals of m(., nu) against the basis.

Quadrature never multiplies the Gaussian tails: the integrand is rewritten as
[m(x, nu) h_nu(x) h_mu(x)] e^(-|x|^2) with the weight-free values
h_k = phi_k e^(x^2/2), which Gauss-Hermite rules integrate directly.
"""

from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .hermite import default_quadrature_order, gauss_hermite_rule, hermite_table
from .multiindex import MultiIndex, TruncationSpec
from .symbol import SymbolSpec, _multiplier_value, eval_symbol

RESIDUAL_WARN = 1e-6


def _worker_count() -> int:
    raw = os.environ.get("HSPEC_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass(frozen=True)
class TensorGrid:
    """Tensor-product Gauss-Hermite grid in n dimensions."""

    points: np.ndarray   # (M, n)
    weights: np.ndarray  # (M,) products of 1-D weights, carry e^(-|x|^2)
    coord_index: np.ndarray  # (n, M) index of each point into the 1-D rule
    rule_nodes: np.ndarray   # 1-D nodes


def tensor_grid(dim: int, q: int) -> TensorGrid:
    rule = gauss_hermite_rule(q)
    if dim == 1:
        idx = np.arange(q)[None, :]
        return TensorGrid(rule.nodes[:, None], rule.weights.copy(), idx, rule.nodes)
    idx = np.indices((q,) * dim).reshape(dim, -1)
    points = rule.nodes[idx].T
    weights = np.prod(rule.weights[idx], axis=0)
    return TensorGrid(points, weights, idx, rule.nodes)


def basis_values(spec: TruncationSpec, grid: TensorGrid, weighted: bool = False) -> np.ndarray:
    """(D, M) matrix of basis values at the grid points.

    weighted=False gives the weight-free products prod_j h_{nu_j}(x_j), the
    form meant to be paired with the grid weights.
    """
    table = hermite_table(spec.level, grid.rule_nodes, weighted=weighted)
    out = np.empty((spec.size, grid.points.shape[0]))
    for i, nu in enumerate(spec.indices):
        vals = table[nu[0], grid.coord_index[0]]
        for j in range(1, spec.dim):
            vals = vals * table[nu[j], grid.coord_index[j]]
        out[i] = vals
    return out


@dataclass(frozen=True)
class OperatorMatrix:
    spec: TruncationSpec
    entries: np.ndarray
    quad_order: int
    assembly_residual: float
    residual_warning: bool
    symbol: SymbolSpec

    @property
    def size(self) -> int:
        return self.spec.size

    def trace(self) -> float:
        return float(np.trace(self.entries))


@dataclass(frozen=True)
class CoefficientVector:
    spec: TruncationSpec
    values: np.ndarray


def _symbol_on_grid(sym: SymbolSpec, spec: TruncationSpec, grid: TensorGrid) -> np.ndarray:
    """(D, M) values m(x_q, nu_i), column-parallel when HSPEC_THREADS > 1."""
    out = np.empty((spec.size, grid.points.shape[0]))

    def fill(i: int):
        out[i] = eval_symbol(sym, grid.points, spec.indices[i])

    workers = _worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill, range(spec.size)))
    else:
        for i in range(spec.size):
            fill(i)
    return out


def _assemble_once(sym: SymbolSpec, spec: TruncationSpec, q: int) -> np.ndarray:
    grid = tensor_grid(spec.dim, q)
    basis = basis_values(spec, grid)
    mvals = _symbol_on_grid(sym, spec, grid)
    # column nu: basis @ (w * m(., nu) * h_nu)
    return basis @ (grid.weights[None, :] * mvals * basis).T


def assemble_matrix(
    sym: SymbolSpec,
    spec: TruncationSpec,
    q: int | None = None,
    doubling_check: bool = True,
) -> OperatorMatrix:
    """Assemble P_N T_m P_N as a dense D x D matrix.

    Multiplier symbols take the analytic fast path: a diagonal of m(nu)
    values, no quadrature.  Otherwise the assembly is repeated at order 2q
    and the relative Frobenius change recorded; a change above 1e-6 sets the
    residual warning flag (the result is still returned).
    """
    if sym.dim != spec.dim:
        raise ValueError(f"symbol dimension {sym.dim} != truncation dimension {spec.dim}")
    if q is None:
        q = default_quadrature_order(spec.level)
    if q < spec.level + 1:
        raise ValueError(f"quadrature order {q} < N+1 = {spec.level + 1}")

    if sym.is_multiplier:
        diag = np.array([_multiplier_value(sym, nu) for nu in spec.indices])
        return OperatorMatrix(spec, np.diag(diag), q, 0.0, False, sym)

    entries = _assemble_once(sym, spec, q)
    residual = 0.0
    if doubling_check:
        refined = _assemble_once(sym, spec, 2 * q)
        scale = np.linalg.norm(refined)
        residual = float(np.linalg.norm(refined - entries) / scale) if scale > 0 else 0.0
        entries = refined
    return OperatorMatrix(spec, entries, q, residual, residual > RESIDUAL_WARN, sym)


def kernel_eval(sym: SymbolSpec, spec: TruncationSpec, x, y) -> float:
    """Truncated kernel K_m(x, y) = sum over |nu| <= N of m(x,nu) phi_nu(x) phi_nu(y)."""
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.size != spec.dim or y.size != spec.dim:
        raise ValueError(f"points must have dimension {spec.dim}")
    tx = hermite_table(spec.level, x)
    ty = hermite_table(spec.level, y)
    total = 0.0
    for nu in spec.indices:
        px = py = 1.0
        for j in range(spec.dim):
            px *= tx[nu[j], j]
            py *= ty[nu[j], j]
        m = eval_symbol(sym, x, nu)
        total += m * px * py
    return float(total)


def analyze(f, spec: TruncationSpec, q: int | None = None) -> CoefficientVector:
    """Coefficients <f, phi_nu> for |nu| <= N, by tensor Gauss-Hermite quadrature.

    f is a callable on (M, n) point arrays (or on 1-D arrays when n = 1).
    """
    if q is None:
        q = default_quadrature_order(spec.level)
    if q < spec.level + 1:
        raise ValueError(f"quadrature order {q} < N+1 = {spec.level + 1}")
    grid = tensor_grid(spec.dim, q)
    pts = grid.points[:, 0] if spec.dim == 1 else grid.points
    samples = np.asarray(f(pts), dtype=float)
    if samples.shape != (grid.points.shape[0],):
        raise ValueError(f"f must return one value per node, got shape {samples.shape}")
    if not np.all(np.isfinite(samples)):
        raise ValueError("f produced non-finite samples at quadrature nodes")
    basis = basis_values(spec, grid)
    # integrand f * phi_nu = [f e^(|x|^2/2)] h_nu e^(-|x|^2); fold the half
    # weight into the quadrature weights where it only shrinks them
    half_weight = grid.weights * np.exp(0.5 * np.sum(grid.points**2, axis=1))
    return CoefficientVector(spec, basis @ (half_weight * samples))


def synthesize(c: CoefficientVector, x) -> float:
    """Pointwise sum of c_nu phi_nu(x) over the truncation."""
    spec = c.spec
    x = np.asarray(x, dtype=float).ravel()
    if x.size != spec.dim:
        raise ValueError(f"point must have dimension {spec.dim}")
    table = hermite_table(spec.level, x)
    total = 0.0
    for ci, nu in zip(c.values, spec.indices):
        p = 1.0
        for j in range(spec.dim):
            p *= table[nu[j], j]
        total += ci * p
    return float(total)


def apply_matrix(m: OperatorMatrix, c: CoefficientVector) -> CoefficientVector:
    if m.spec is not c.spec and (m.spec.dim != c.spec.dim or m.spec.level != c.spec.level):
        raise ValueError("matrix and coefficient vector use different truncations")
    return CoefficientVector(c.spec, m.entries @ c.values)


def export_matrix_csv(m: OperatorMatrix, path: str) -> None:
    """Row-major CSV with an n/N/Q header row, plus a JSON metadata sidecar."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"n={m.spec.dim}", f"N={m.spec.level}", f"Q={m.quad_order}"])
        for row in m.entries:
            writer.writerow([repr(float(v)) for v in row])
    meta = {
        "dim": m.spec.dim,
        "level": m.spec.level,
        "size": m.size,
        "quad_order": m.quad_order,
        "assembly_residual": m.assembly_residual,
        "residual_warning": m.residual_warning,
        "symbol": m.symbol.describe(),
    }
    with open(path + ".meta.json", "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
