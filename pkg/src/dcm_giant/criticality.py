"""Analytic phase-transition quantities for the directed configuration model.

Solves the branching-process fixed points of a bi-degree distribution and
assembles the predicted giant-SCC node fraction and edge density.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict

import numpy as np

from .degrees import BiDegreeDistribution

TIE_TOLERANCE = 1e-9       # regime label tie band on nu
FIXED_POINT_TOL = 1e-14    # successive-change stopping rule
RESIDUAL_TOL = 1e-12
MAX_ITERATIONS = 10**6


class ConvergenceError(RuntimeError):
    """Fixed-point iteration hit the iteration cap before converging."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (last residual {residual:.3e})")
        self.residual = residual


@dataclass(frozen=True)
class CriticalityReport:
    nu: float
    rho_minus: float
    rho_plus: float
    s_minus: float
    s_plus: float
    eta: float
    edge_density: float
    regime: str
    solver_iterations: tuple[int, int]
    residuals: tuple[float, float]

    def to_json(self) -> str:
        d = asdict(self)
        d["solver_iterations"] = list(self.solver_iterations)
        d["residuals"] = list(self.residuals)
        return json.dumps(d)


def regime_label(nu: float, tie_tolerance: float = TIE_TOLERANCE) -> str:
    if nu > 1.0 + tie_tolerance:
        return "supercritical"
    if nu < 1.0 - tie_tolerance:
        return "subcritical"
    return "critical"


def _fixed_point(phi, tol: float = FIXED_POINT_TOL, max_iter: int = MAX_ITERATIONS):
    """Smallest fixed point of a PGF-type map by monotone iteration from 0.

    Returns (root, iterations, residual).  Iterates of a PGF from 0 are
    nondecreasing and bounded by 1, so convergence is to the smallest
    nonnegative root.
    """
    z = 0.0
    for it in range(1, max_iter + 1):
        z_next = phi(z)
        if z_next < z:
            # PGF monotonicity can only be violated by rounding noise
            z_next = z
        if z_next - z < tol:
            residual = abs(z_next - phi(z_next))
            if residual > RESIDUAL_TOL:
                raise ConvergenceError("fixed point stalled above residual tolerance", residual)
            return min(z_next, 1.0), it, residual
        z = z_next
    raise ConvergenceError("fixed-point iteration did not converge", abs(phi(z) - z))


def solve_extinction(dist: BiDegreeDistribution):
    """Smallest nonnegative roots (rho_minus, rho_plus) of the system
    z = (1/lam) df/dw(z, 1) and w = (1/lam) df/dz(1, w)."""
    (rm, _, _), (rp, _, _) = _solve_extinction_detailed(dist)
    return rm, rp


def _solve_extinction_detailed(dist: BiDegreeDistribution):
    k, l, p = dist.arrays()
    lam = dist.lam
    wk = l * p / lam   # weights of the backward offspring pgf, in powers of z^k
    wl = k * p / lam   # weights of the forward offspring pgf, in powers of w^l

    def phi_minus(z: float) -> float:
        return float(wk @ np.power(z, k))

    def phi_plus(w: float) -> float:
        return float(wl @ np.power(w, l))

    return _fixed_point(phi_minus), _fixed_point(phi_plus)


def predict(dist: BiDegreeDistribution, tie_tolerance: float = TIE_TOLERANCE) -> CriticalityReport:
    """Full analytic report: nu, extinction/survival probabilities, giant
    node fraction eta and giant edge density lam*s-*s+.

    eta is evaluated both as the series sum p_{i,j}(1-rho-^i)(1-rho+^j) and
    as the closed form 1 + f(r-, r+) - f(r-, 1) - f(1, r+); the two must
    agree within 1e-9.  Subcritical and critical regimes report eta = 0.
    """
    mom = dist.moments()
    regime = regime_label(mom.nu, tie_tolerance)

    if regime == "supercritical":
        (rm, it_m, res_m), (rp, it_p, res_p) = _solve_extinction_detailed(dist)
    else:
        # at nu <= 1 the smallest positive root of each equation is 1
        rm, it_m, res_m = 1.0, 0, 0.0
        rp, it_p, res_p = 1.0, 0, 0.0

    sm, sp = 1.0 - rm, 1.0 - rp
    if regime == "supercritical":
        k, l, p = dist.arrays()
        eta_series = float(p @ ((1.0 - np.power(rm, k)) * (1.0 - np.power(rp, l))))
        f_mm = dist.pgf(rm, rp).f
        f_m1 = dist.pgf(rm, 1.0).f
        f_1p = dist.pgf(1.0, rp).f
        eta_closed = 1.0 + f_mm - f_m1 - f_1p
        if abs(eta_series - eta_closed) > 1e-9:
            raise ArithmeticError(
                f"eta series {eta_series} and closed form {eta_closed} disagree beyond 1e-9"
            )
        eta = min(max(eta_closed, 0.0), 1.0)
        edge_density = dist.lam * sm * sp
    else:
        eta = 0.0
        edge_density = 0.0

    return CriticalityReport(
        nu=mom.nu,
        rho_minus=rm,
        rho_plus=rp,
        s_minus=sm,
        s_plus=sp,
        eta=eta,
        edge_density=edge_density,
        regime=regime,
        solver_iterations=(it_m, it_p),
        residuals=(res_m, res_p),
    )


def karp_rho(nu: float, tol: float = 1e-12) -> float:
    """Root in (0, 1) of rho = exp(-nu (1 - rho)), by bisection.

    This is the extinction probability of a Poisson(nu) branching process
    and the convenience path for Poisson-pair families.
    """
    if nu <= 1.0:
        raise ValueError(f"karp_rho requires nu > 1, got {nu}")

    def g(r: float) -> float:
        return r - math.exp(-nu * (1.0 - r))

    # g(0) < 0 and g > 0 on (root, 1), but g(1-) underflows when nu is close
    # to 1; widen the gap below 1 until the sign shows
    lo, gap = 0.0, 1e-15
    while g(1.0 - gap) <= 0.0:
        gap *= 2.0
        if gap >= 1.0:
            raise ConvergenceError("no bracket below 1; nu too close to 1", gap)
    hi = 1.0 - gap
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if g(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
