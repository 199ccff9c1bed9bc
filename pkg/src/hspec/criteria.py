"""The four Schatten-membership criteria, evaluated as truncated sums with an
explicit tail policy.

Each criterion is an infinite sum over multi-indices; a finite tool can only
report evidence.  A verdict therefore carries the partial sum, the per-shell
contributions (shell s = all nu with |nu| = s), and a tail flag obtained by
fitting log(shell sum) against log(2s + n) over the top half of the shells:

    slope >= -1          -> "diverging"   (shell sums not summable)
    slope <= -1.2        -> "converging"
    otherwise            -> "inconclusive"

For diverging sums the reported growth exponent slope + 1 estimates the
polynomial growth rate of the partial sums.  Sums are accumulated with
math.fsum in shell-major, enumeration order, so identical inputs produce
bitwise-identical verdicts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .multiindex import TruncationSpec
from .operator import assemble_matrix
from .schatten import column_integrals
from .symbol import SymbolSpec, _multiplier_value

DIVERGE_SLOPE = -1.0
CONVERGE_SLOPE = -1.2
# boundary tolerance: exact power laws land on the thresholds up to rounding
SLOPE_TOL = 1e-6

SYMMETRY_TOL = 1e-8
POSITIVITY_TOL = 1e-8
CROSS_CHECK_MAX_SIZE = 512


class CriterionPreconditionError(Exception):
    """A criterion refused to run; the message names the violated check."""


@dataclass
class CriterionVerdict:
    criterion: str
    partial_sum: float
    shells: list  # (s, shell sum) pairs, s = 0..N
    tail_flag: str  # converging | diverging | inconclusive
    parameters: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "partial_sum": self.partial_sum,
            "shells": [[s, v] for s, v in self.shells],
            "tail_flag": self.tail_flag,
            "parameters": dict(self.parameters),
            "extras": dict(self.extras),
        }


def shell_partition(spec: TruncationSpec, terms: np.ndarray) -> list[tuple[int, float]]:
    """Group per-index terms (enumeration order) into per-shell fsum totals."""
    terms = np.asarray(terms, dtype=float)
    if terms.shape != (spec.size,):
        raise ValueError(f"expected {spec.size} terms, got {terms.shape}")
    out = []
    pos = 0
    for s, members in spec.shells():
        k = len(members)
        out.append((s, math.fsum(terms[pos:pos + k])))
        pos += k
    return out


def classify_tail(shells: list[tuple[int, float]], dim: int) -> tuple[str, dict]:
    """Tail flag plus fit diagnostics from the top half of the shells."""
    tail = shells[len(shells) // 2:]
    positive = [(s, v) for s, v in tail if v > 0.0]
    if len(positive) < 3:
        if all(v == 0.0 for _, v in tail):
            return "converging", {"fit_slope": None, "growth_exponent": None,
                                  "note": "tail shells identically zero"}
        return "inconclusive", {"fit_slope": None, "growth_exponent": None,
                                "note": "too few positive tail shells to fit"}
    lam = np.log([2.0 * s + dim for s, _ in positive])
    val = np.log([v for _, v in positive])
    slope = float(np.polyfit(lam, val, 1)[0])
    if slope >= DIVERGE_SLOPE - SLOPE_TOL:
        flag = "diverging"
    elif slope <= CONVERGE_SLOPE + SLOPE_TOL:
        flag = "converging"
    else:
        flag = "inconclusive"
    return flag, {"fit_slope": slope, "growth_exponent": slope + 1.0}


def _verdict(name: str, spec: TruncationSpec, terms: np.ndarray,
             parameters: dict, extras: dict | None = None) -> CriterionVerdict:
    shells = shell_partition(spec, terms)
    flag, fit = classify_tail(shells, spec.dim)
    merged = dict(fit)
    if extras:
        merged.update(extras)
    return CriterionVerdict(
        criterion=name,
        partial_sum=math.fsum(v for _, v in shells),
        shells=shells,
        tail_flag=flag,
        parameters=parameters,
        extras=merged,
    )


def check_hilbert_schmidt(
    sym: SymbolSpec, spec: TruncationSpec, q: int | None = None,
    cross_check: bool | None = None,
) -> CriterionVerdict:
    """Hilbert-Schmidt criterion: sum of the integrals of |m(x,nu)|^2 phi_nu^2.

    When cross_check is enabled (default for truncations up to 512 basis
    functions) the squared Frobenius norm of the assembled matrix and its
    relative gap against the direct sum are recorded in the extras.
    """
    terms = column_integrals(sym, spec, q, squared=True)
    extras = {}
    if cross_check is None:
        cross_check = spec.size <= CROSS_CHECK_MAX_SIZE
    if cross_check:
        m = assemble_matrix(sym, spec, q)
        fro2 = float(np.sum(m.entries**2))
        direct = math.fsum(terms)
        extras["frobenius_squared"] = fro2
        extras["relative_gap"] = abs(fro2 - direct) / direct if direct > 0 else 0.0
    return _verdict("HS-iff", spec, terms, {}, extras)


def check_trace_class_positive(
    sym: SymbolSpec, spec: TruncationSpec, q: int | None = None
) -> CriterionVerdict:
    """Trace-class criterion for positive self-adjoint operators: sum of the
    integrals of m(x,nu) phi_nu^2.

    Refuses to run unless the symbol claims positive self-adjointness, and
    verifies the claim numerically on the assembled matrix (symmetry to
    1e-8 relative in the max norm, smallest eigenvalue >= -1e-8 ||M||).
    """
    if not sym.claims_positive_selfadjoint:
        raise CriterionPreconditionError(
            "trace-class criterion requires the symbol to claim positive "
            "self-adjointness (positive_selfadjoint flag unset)"
        )
    if sym.is_multiplier:
        diag = np.array([_multiplier_value(sym, nu) for nu in spec.indices])
        scale = max(np.abs(diag).max(), 1e-300)
        if diag.min() < -POSITIVITY_TOL * scale:
            raise CriterionPreconditionError(
                f"positivity check failed: multiplier value {diag.min():.3e} < 0"
            )
        terms = diag
    else:
        m = assemble_matrix(sym, spec, q)
        a = m.entries
        scale = max(np.abs(a).max(), 1e-300)
        asym = np.abs(a - a.T).max()
        if asym > SYMMETRY_TOL * scale:
            raise CriterionPreconditionError(
                f"symmetry check failed: max|M - M^T| = {asym:.3e} "
                f"exceeds {SYMMETRY_TOL:.0e} * max|M| = {SYMMETRY_TOL * scale:.3e}"
            )
        lo = float(np.linalg.eigvalsh(0.5 * (a + a.T)).min())
        norm = float(np.linalg.norm(a))
        if lo < -POSITIVITY_TOL * norm:
            raise CriterionPreconditionError(
                f"positivity check failed: smallest eigenvalue {lo:.3e} "
                f"below -{POSITIVITY_TOL:.0e} * ||M||"
            )
        terms = column_integrals(sym, spec, q, squared=False)
    return _verdict("TraceClass-iff", spec, terms, {})


def check_sr_small(
    sym: SymbolSpec, spec: TruncationSpec, q: int | None = None, r: float = 1.0
) -> CriterionVerdict:
    """Sufficient S_r criterion for 0 < r <= 1: sum of the r/2 powers of the
    column integrals of |m(x,nu)|^2 phi_nu^2."""
    if not 0.0 < r <= 1.0:
        raise ValueError(f"r must lie in (0, 1], got {r}")
    if sym.is_multiplier:
        # exact: the column integral is m(nu)^2, so the r/2 power is |m(nu)|^r
        terms = np.array([abs(_multiplier_value(sym, nu)) ** r for nu in spec.indices])
    else:
        terms = column_integrals(sym, spec, q, squared=True) ** (r / 2.0)
    return _verdict("Sr-sufficient", spec, terms, {"r": r})


def sigma_lower_bound(dim: int, r: float) -> float:
    return dim * (1.0 / r - 0.5)


def default_sigma(dim: int, r: float) -> float:
    """Strictly inside the admissible region, with an order-one margin."""
    return sigma_lower_bound(dim, r) + 0.5


def check_sr_sigma(
    sym: SymbolSpec, spec: TruncationSpec, q: int | None = None,
    r: float = 1.5, sigma: float | None = None,
) -> CriterionVerdict:
    """Sufficient S_r criterion for 1 < r < 2: the column integrals weighted
    by (2|nu|+n)^(2 sigma), with sigma > n(1/r - 1/2) required.

    The weight uses 2|nu|+n rather than |nu| (the two are comparable), which
    keeps the nu = 0 term non-degenerate.
    """
    if not 1.0 < r < 2.0:
        raise ValueError(f"r must lie in (1, 2), got {r}")
    bound = sigma_lower_bound(spec.dim, r)
    if sigma is None:
        sigma = default_sigma(spec.dim, r)
    if sigma <= bound:
        raise CriterionPreconditionError(
            f"sigma = {sigma} violates the admissibility bound "
            f"sigma > n(1/r - 1/2) = {bound}"
        )
    lam = np.array([2.0 * nu.order + spec.dim for nu in spec.indices])
    terms = lam ** (2.0 * sigma) * column_integrals(sym, spec, q, squared=True)
    return _verdict("Sr-sigma", spec, terms, {"r": r, "sigma": sigma})


def check_multiplier_schatten(
    sym: SymbolSpec, spec: TruncationSpec, r: float
) -> CriterionVerdict:
    """Exact multiplier criterion for any r > 0: sum of |m(nu)|^r.

    Valid because the singular values of a multiplier are the |m(nu)|; no
    quadrature is involved."""
    if r <= 0:
        raise ValueError(f"r must be positive, got {r}")
    if not sym.is_multiplier:
        raise CriterionPreconditionError(
            "the |m(nu)|^r criterion is exact only for multipliers; "
            "this symbol depends on x"
        )
    terms = np.array([abs(_multiplier_value(sym, nu)) ** r for nu in spec.indices])
    return _verdict("Multiplier-Sr", spec, terms, {"r": r})
