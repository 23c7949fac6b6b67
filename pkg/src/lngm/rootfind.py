"""Bisection root finders for the secular branches.

Both routines track a single descending root (secular value crossing zero
with negative slope) by halving the admissible interval, consulting the
derivative only when the value does not decide the move on its own, and
reporting "absent" instead of NaN when no root is certified.  The exact-zero
tests of the idealized arithmetic are realized as tiny scale-aware bands so
the derivative safeguards stay reachable in floating point.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .secular import (BranchContext, TYPE2_BRANCHES, TYPE3_BRANCHES,
                      psi_eval, psi_prime_eval)

ZERO_BAND_FACTOR = 1e-12


class Terminal(enum.Enum):
    EXACT_ROOT = "exact_root"            # value hit the zero band with negative slope
    INTERVAL_CONVERGED = "interval_converged"
    GUARDED = "guarded"                  # derivative hit the zero band; degenerate
    NON_VIABLE = "non_viable"            # empty interval, zero edge projection, or gate


@dataclass(frozen=True)
class BisectionOutcome:
    eta_star: Optional[float]
    iterations: int
    psi_evals: int
    psi_prime_evals: int
    terminal: Terminal
    gate_value: Optional[float] = None   # psi(0) when the type-3 gate fired

    @property
    def found(self) -> bool:
        return self.eta_star is not None


def _zero_bands(ctx: BranchContext) -> tuple[float, float]:
    lam = ctx.spec.lam
    r2 = float(np.dot(ctx.spec.r, ctx.spec.r))
    lam_scale = max(1.0, abs(float(lam[0])), abs(float(lam[-1])))
    zeta = ZERO_BAND_FACTOR * (1.0 + abs(ctx.spec.c) + r2 * lam_scale)
    zeta_prime = ZERO_BAND_FACTOR * (1.0 + r2 * lam_scale)
    return zeta, zeta_prime


def _non_viable(gate_value: Optional[float] = None,
                psi_evals: int = 0) -> BisectionOutcome:
    return BisectionOutcome(None, 0, psi_evals, 0, Terminal.NON_VIABLE, gate_value)


def bisect_type2(ctx: BranchContext, eps: float) -> BisectionOutcome:
    """Bisection on the convex normalization (PSI1/PSI2).

    The secular value diverges to -inf at the right end of the interval, so a
    positive value anywhere certifies a descending root further right; the
    converged bracket's right end is returned.
    """
    if ctx.branch not in TYPE2_BRANCHES:
        raise ValueError(f"bisect_type2 does not handle {ctx.branch.name}")
    if not eps > 0.0:
        raise ValueError("eps must be positive")
    if not ctx.viable:
        return _non_viable()
    return _bisect(ctx, eps, lower_is_root_side=False)


def bisect_type3(ctx: BranchContext, eps: float) -> BisectionOutcome:
    """Bisection on the concave normalization (PSI3/PSI4).

    When the gate eigenvalue is negative the interval's left end is eta = 0
    rather than a pole, and a descending root requires psi(0) > 0; otherwise
    the branch is reported absent before any iteration.  The converged
    bracket's left end is returned.
    """
    if ctx.branch not in TYPE3_BRANCHES:
        raise ValueError(f"bisect_type3 does not handle {ctx.branch.name}")
    if not eps > 0.0:
        raise ValueError("eps must be positive")
    if not ctx.viable:
        return _non_viable()
    gate_value = None
    if ctx.guard_lambda < 0.0:
        gate_value = psi_eval(ctx, 0.0)
        if not gate_value > 0.0:
            return _non_viable(gate_value=gate_value, psi_evals=1)
    return _bisect(ctx, eps, lower_is_root_side=True, gate_value=gate_value,
                   psi_evals=0 if gate_value is None else 1)


def _bisect(ctx: BranchContext, eps: float, lower_is_root_side: bool,
            gate_value: Optional[float] = None, psi_evals: int = 0) -> BisectionOutcome:
    # lower_is_root_side selects the mirrored update rules: type 2 keeps the
    # root bracketed against the upper end, type 3 against the lower end.
    U1, U2 = ctx.U1, ctx.U2
    zeta, zeta_prime = _zero_bands(ctx)
    temp = False
    iterations = 0
    dpsi_evals = 0

    while True:
        eta = 0.5 * (U1 + U2)
        p = psi_eval(ctx, eta)
        iterations += 1
        psi_evals += 1

        if abs(p) <= zeta:
            dp = psi_prime_eval(ctx, eta)
            dpsi_evals += 1
            if abs(dp) <= zeta_prime:
                return BisectionOutcome(None, iterations, psi_evals, dpsi_evals,
                                        Terminal.GUARDED, gate_value)
            if dp < 0.0:
                return BisectionOutcome(eta, iterations, psi_evals, dpsi_evals,
                                        Terminal.EXACT_ROOT, gate_value)
            temp = True
            if lower_is_root_side:
                U2 = eta
            else:
                U1 = eta
        elif (p > 0.0) != lower_is_root_side:
            # Value on the "keep going" side: the root is certified ahead.
            temp = True
            if lower_is_root_side:
                U2 = eta
            else:
                U1 = eta
        else:
            dp = psi_prime_eval(ctx, eta)
            dpsi_evals += 1
            if abs(dp) <= zeta_prime:
                return BisectionOutcome(None, iterations, psi_evals, dpsi_evals,
                                        Terminal.GUARDED, gate_value)
            if lower_is_root_side:
                if dp > 0.0:
                    U2 = eta
                else:
                    U1 = eta
            else:
                if dp > 0.0:
                    U1 = eta
                else:
                    U2 = eta

        if U2 - U1 <= eps:
            if not temp:
                return BisectionOutcome(None, iterations, psi_evals, dpsi_evals,
                                        Terminal.INTERVAL_CONVERGED, gate_value)
            eta_star = U1 if lower_is_root_side else U2
            return BisectionOutcome(eta_star, iterations, psi_evals, dpsi_evals,
                                    Terminal.INTERVAL_CONVERGED, gate_value)


def iteration_bound(U1: float, U2: float, eps: float) -> int:
    """Worst-case midpoint evaluations for an eps-converged bracket."""
    width = U2 - U1
    if width <= eps:
        return 1
    return int(math.ceil(math.log2(width / eps))) + 1
