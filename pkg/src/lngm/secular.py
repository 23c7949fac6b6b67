"""Spectral data of the normalized constraint and the four secular branches.

After normalization the candidate minimizers are parameterized by a scalar
eta > 0 on one of four branches, one per (objective sign, multiplier sign)
combination:

    PSI1: min +|y|^2, mu = +1/eta, search (max{-lam2, 0}, -lam1)
    PSI2: min +|y|^2, mu = -1/eta, search (max{lam_{n-1}, 0}, lam_n)
    PSI3: min -|y|^2, mu = +1/eta, search (max{lam1, 0}, lam2)
    PSI4: min -|y|^2, mu = -1/eta, search (max{-lam_n, 0}, -lam_{n-1})

All four are evaluated through a single rational kernel

    k(s) = c - sum_i r_i^2 (lam_i + 2s) / (lam_i + s)^2

via psi1(eta) = k(eta), psi2(eta) = -k(-eta), psi3(eta) = k(-eta),
psi4(eta) = -k(eta), which keeps the reflection identities exact by
construction.  Sums are accumulated with compensated summation so the
dominant near-pole term cannot wash out the rest.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .pencil import TransformedProblem
from .problem import NumericalFailure

# Eigenvalue ties below this relative gap make the adjacent branch interval
# meaningless (the strict inequality chain collapses).
CLUSTER_RTOL = 1e-10
# Constraint projections below this relative size count as zero.
EDGE_RTOL = 1e-10
# Refuse kernel evaluation closer to a pole than this (relative).
POLE_RTOL = 1e-13


class Branch(enum.Enum):
    PSI1 = "psi1"
    PSI2 = "psi2"
    PSI3 = "psi3"
    PSI4 = "psi4"


#: Branches solved on the convex normalization (min +|y|^2).
TYPE2_BRANCHES = (Branch.PSI1, Branch.PSI2)
#: Branches solved on the concave normalization (min -|y|^2).
TYPE3_BRANCHES = (Branch.PSI3, Branch.PSI4)


class PoleProximityError(ValueError):
    """eta is at or beyond a pole of the branch; the caller must shrink."""


@dataclass(frozen=True)
class SpectralData:
    """Eigendecomposition A = V diag(lam) V' plus projections r = V'b."""

    lam: np.ndarray
    V: np.ndarray
    r: np.ndarray
    c: float
    sgn: int

    @property
    def n(self) -> int:
        return self.lam.shape[0]


@dataclass(frozen=True)
class BranchContext:
    branch: Branch
    U1: float
    U2: float
    edge_r: float
    guard_lambda: float
    pole_lo: float
    pole_hi: float
    spec: SpectralData

    @property
    def viable(self) -> bool:
        lam = self.spec.lam
        lam_scale = max(1.0, abs(float(lam[0])), abs(float(lam[-1])))
        b_scale = max(1.0, float(np.linalg.norm(self.spec.r)))
        return (self.U2 - self.U1 > CLUSTER_RTOL * lam_scale
                and abs(self.edge_r) > EDGE_RTOL * b_scale)


def spectral_decompose(T: TransformedProblem) -> SpectralData:
    """Eigendecompose the normalized constraint matrix (ascending order)."""
    try:
        lam, V = np.linalg.eigh(T.A)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure("eigendecomposition did not converge") from exc
    r = V.T @ T.b
    lam = lam.copy()
    lam.setflags(write=False)
    V.setflags(write=False)
    r.setflags(write=False)
    return SpectralData(lam=lam, V=V, r=r, c=float(T.c), sgn=T.sgn)


def branch_interval(spec: SpectralData, branch: Branch) -> BranchContext:
    """Build the admissible search interval and edge data for one branch.

    Non-viable branches (empty interval or vanishing edge projection) are
    returned, not errored; callers read ``ctx.viable``.  PSI1 tolerates n = 1
    with lam2 read as +inf; the other branches require n >= 2.
    """
    lam = spec.lam
    n = spec.n
    if branch is not Branch.PSI1 and n < 2:
        raise ValueError(f"{branch.name} requires n >= 2")
    if branch is Branch.PSI1:
        lam2 = float(lam[1]) if n >= 2 else math.inf
        U1, U2 = max(-lam2, 0.0), -float(lam[0])
        edge_r, guard = float(spec.r[0]), 0.0
        pole_lo, pole_hi = -lam2, -float(lam[0])
    elif branch is Branch.PSI2:
        U1, U2 = max(float(lam[-2]), 0.0), float(lam[-1])
        edge_r, guard = float(spec.r[-1]), 0.0
        pole_lo, pole_hi = float(lam[-2]), float(lam[-1])
    elif branch is Branch.PSI3:
        U1, U2 = max(float(lam[0]), 0.0), float(lam[1])
        # Gate eigenvalue: when it is negative, a descending root needs
        # psi(0) > 0 (0 is then interior to the pole-free interval).
        edge_r, guard = float(spec.r[0]), float(lam[0])
        pole_lo, pole_hi = float(lam[0]), float(lam[1])
    else:  # PSI4
        U1, U2 = max(-float(lam[-1]), 0.0), -float(lam[-2])
        # PSI4 is PSI3 of the negated constraint, whose smallest eigenvalue
        # is -lam_n; that sign matters for the psi(0) > 0 gate.
        edge_r, guard = float(spec.r[-1]), -float(lam[-1])
        pole_lo, pole_hi = -float(lam[-1]), -float(lam[-2])
    return BranchContext(branch=branch, U1=U1, U2=U2, edge_r=edge_r,
                         guard_lambda=guard, pole_lo=pole_lo, pole_hi=pole_hi,
                         spec=spec)


def _kernel_shift(ctx: BranchContext, eta: float) -> float:
    """Map branch-local eta to the kernel argument s (lam_i + s denominators)."""
    return eta if ctx.branch in (Branch.PSI1, Branch.PSI4) else -eta


def _denominators(ctx: BranchContext, eta: float) -> np.ndarray:
    if not (ctx.pole_lo < eta < ctx.pole_hi):
        raise PoleProximityError(
            f"eta={eta!r} outside the pole-free interval "
            f"({ctx.pole_lo!r}, {ctx.pole_hi!r}) of {ctx.branch.name}")
    lam = ctx.spec.lam
    den = lam + _kernel_shift(ctx, eta)
    lam_scale = max(1.0, abs(float(lam[0])), abs(float(lam[-1])))
    if np.abs(den).min() < POLE_RTOL * lam_scale:
        raise PoleProximityError(f"eta={eta!r} within pole tolerance of {ctx.branch.name}")
    return den


def _branch_sign(branch: Branch) -> float:
    return 1.0 if branch in (Branch.PSI1, Branch.PSI3) else -1.0


# Exactly-rounded summation is cheap for small spectra; above this size
# pairwise summation keeps the dominant near-pole term from swamping the
# rest at a fraction of the cost.
_EXACT_SUM_MAX_N = 64


def _pole_aware_sum(terms: np.ndarray, den: np.ndarray) -> float:
    if terms.shape[0] <= _EXACT_SUM_MAX_N:
        return math.fsum(terms.tolist())
    return float(np.sum(terms))


def psi_eval(ctx: BranchContext, eta: float) -> float:
    """Value of the branch's secular function at eta."""
    den = _denominators(ctx, eta)
    lam, r = ctx.spec.lam, ctx.spec.r
    s = _kernel_shift(ctx, eta)
    terms = -(r * r) * (lam + 2.0 * s) / (den * den)
    value = _pole_aware_sum(terms, den) + ctx.spec.c
    return _branch_sign(ctx.branch) * value


def psi_prime_eval(ctx: BranchContext, eta: float) -> float:
    """Derivative of the branch's secular function at eta."""
    den = _denominators(ctx, eta)
    r = ctx.spec.r
    phi = _pole_aware_sum((r * r) / den ** 3, den)
    # d(psi)/d(eta) carries one sign from the branch reflection and one from
    # the kernel-argument flip; the product collapses to 2*eta*phi for
    # PSI1/PSI3 and -2*eta*phi for PSI2/PSI4.
    sign = 1.0 if ctx.branch in (Branch.PSI1, Branch.PSI3) else -1.0
    return sign * 2.0 * eta * phi


def y_of_eta(ctx: BranchContext, eta: float) -> np.ndarray:
    """Candidate point of the branch: -(A +- eta I)^{-1} b in eigencoordinates."""
    den = _denominators(ctx, eta)
    w = -ctx.spec.r / den
    return ctx.spec.V @ w


def candidate_multiplier(ctx: BranchContext, eta: float) -> float:
    """Normalized-space multiplier attached to a root of this branch."""
    if ctx.branch in (Branch.PSI1, Branch.PSI3):
        return 1.0 / eta
    return -1.0 / eta
