"""Independent optimality-condition checks in original x-space.

A candidate (x, mu) is certified as a strict local-nonglobal minimizer when
it is feasible and stationary, the constraint gradient is nonzero (regular
point), the Lagrangian Hessian restricted to the tangent hyperplane is
positive definite, the full Lagrangian Hessian is not positive semidefinite,
and the kind-specific side conditions hold (A1 != 0 for equality, mu > 0 for
inequality).  Everything here is computed from the raw problem data, never
from solver internals, so it doubles as the certificate checker for
externally supplied points.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import null_space

from .problem import ConstraintKind, ProblemInstance
from .secular import SpectralData

DEFAULT_KKT_TOL = 1e-6
DEFAULT_CURVATURE_TOL = 1e-9


@dataclass(frozen=True)
class VerificationVerdict:
    kkt_ok: bool
    regular_ok: bool
    tangent_pd_ok: bool
    not_psd_ok: bool
    a1_nonzero_ok: Optional[bool]      # equality kind only
    mu_positive_ok: Optional[bool]     # inequality kind only
    feasibility_residual: float
    stationarity_residual: float
    tangent_min_eig: Optional[float]   # None when n = 1 (empty tangent space)
    hessian_min_eig: float
    witness: Optional[np.ndarray]      # tangent direction of non-positive curvature
    reasons: tuple[str, ...]

    @property
    def certified(self) -> bool:
        flags = [self.kkt_ok, self.regular_ok, self.tangent_pd_ok, self.not_psd_ok]
        if self.a1_nonzero_ok is not None:
            flags.append(self.a1_nonzero_ok)
        if self.mu_positive_ok is not None:
            flags.append(self.mu_positive_ok)
        return all(flags)


def check_strict_lngm(inst: ProblemInstance, x: np.ndarray, mu: float,
                      tol: float = DEFAULT_KKT_TOL,
                      curvature_tol: float = DEFAULT_CURVATURE_TOL) -> VerificationVerdict:
    """Check the strict local-nonglobal minimizer conditions at (x, mu).

    Residual tolerances are scaled by the data magnitudes at x so the checks
    behave uniformly across dimensions and entry ranges; curvature margins
    are relative to the Frobenius norm of the Lagrangian Hessian.
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape != (inst.n,):
        raise ValueError(f"point has length {x.shape[0]}, expected {inst.n}")
    if not (np.all(np.isfinite(x)) and np.isfinite(mu)):
        raise ValueError("non-finite candidate")

    reasons: list[str] = []
    xnorm = float(np.linalg.norm(x))
    a1_norm = float(np.linalg.norm(inst.A1, "fro"))
    b1_norm = float(np.linalg.norm(inst.b1))

    feas = abs(inst.f1(x))
    tol_feas = tol * (1.0 + abs(inst.c1) + b1_norm * xnorm + a1_norm * xnorm ** 2)
    g0 = inst.grad_f0(x)
    g1 = inst.grad_f1(x)
    stat = float(np.linalg.norm(g0 + mu * g1))
    tol_stat = tol * (1.0 + float(np.linalg.norm(g0)) + abs(mu) * float(np.linalg.norm(g1)))
    kkt_ok = feas <= tol_feas and stat <= tol_stat
    if feas > tol_feas:
        reasons.append(f"infeasible: |f1(x)| = {feas:.3e} > {tol_feas:.3e}")
    if stat > tol_stat:
        reasons.append(f"not stationary: |grad L| = {stat:.3e} > {tol_stat:.3e}")

    regular_ok = float(np.linalg.norm(g1)) > tol * (1.0 + a1_norm * xnorm + b1_norm)
    if not regular_ok:
        reasons.append("not a regular point: grad f1(x) vanishes")

    H = inst.lagrangian_hessian(mu)
    h_eigs = np.linalg.eigvalsh(H)
    band = curvature_tol * float(np.linalg.norm(H, "fro"))
    hessian_min_eig = float(h_eigs[0])
    not_psd_ok = hessian_min_eig < -band
    if not not_psd_ok:
        reasons.append("Lagrangian Hessian is positive semidefinite (global-type point)")

    tangent_min_eig: Optional[float] = None
    witness: Optional[np.ndarray] = None
    if inst.n == 1:
        tangent_pd_ok = regular_ok         # empty tangent space, vacuously definite
    elif regular_ok:
        Z = null_space(g1.reshape(1, -1))
        P = Z.T @ H @ Z
        P = 0.5 * (P + P.T)
        p_eigs, p_vecs = np.linalg.eigh(P)
        tangent_min_eig = float(p_eigs[0])
        tangent_pd_ok = tangent_min_eig > band
        if not tangent_pd_ok:
            witness = Z @ p_vecs[:, 0]
            reasons.append(f"tangent Hessian not positive definite "
                           f"(min eigenvalue {tangent_min_eig:.3e})")
    else:
        tangent_pd_ok = False

    if inst.kind is ConstraintKind.EQUALITY:
        a1_nonzero_ok = a1_norm > 1e-12 * max(1.0, float(np.linalg.norm(inst.A0, "fro")))
        if not a1_nonzero_ok:
            reasons.append("A1 = 0: equality-constrained problems need a genuinely "
                           "quadratic constraint")
        mu_positive_ok = None
    else:
        a1_nonzero_ok = None
        mu_positive_ok = mu > 0.0
        if not mu_positive_ok:
            reasons.append(f"multiplier {mu:.6g} is not positive")

    return VerificationVerdict(
        kkt_ok=kkt_ok, regular_ok=regular_ok, tangent_pd_ok=tangent_pd_ok,
        not_psd_ok=not_psd_ok, a1_nonzero_ok=a1_nonzero_ok,
        mu_positive_ok=mu_positive_ok, feasibility_residual=feas,
        stationarity_residual=stat, tangent_min_eig=tangent_min_eig,
        hessian_min_eig=hessian_min_eig, witness=witness, reasons=tuple(reasons))


def lagrangian_inertia(inst: ProblemInstance, mu: float,
                       tol: float = DEFAULT_CURVATURE_TOL) -> tuple[int, int, int]:
    """Signs (negative, zero, positive) of the Lagrangian Hessian eigenvalues."""
    if not np.isfinite(mu):
        raise ValueError("mu must be finite")
    H = inst.lagrangian_hessian(mu)
    eigs = np.linalg.eigvalsh(H)
    band = tol * float(np.linalg.norm(H, "fro"))
    neg = int(np.sum(eigs < -band))
    pos = int(np.sum(eigs > band))
    return neg, inst.n - neg - pos, pos


def is_global_candidate(inst: ProblemInstance, x: np.ndarray, mu: float,
                        tol: float = 1e-8) -> bool:
    """Global-minimizer test at a KKT point (caller ensures KKT residuals).

    Requires the Lagrangian Hessian to clear -tol*I; inequality problems
    additionally need mu >= -tol and complementarity |mu * f1(x)| <= tol.
    """
    H = inst.lagrangian_hessian(mu)
    if float(np.linalg.eigvalsh(H)[0]) < -tol:
        return False
    if inst.kind is ConstraintKind.INEQUALITY:
        if mu < -tol:
            return False
        if abs(mu * inst.f1(np.asarray(x, dtype=float))) > tol:
            return False
    return True


def reduced_hessian_determinant_check(spec: SpectralData, eta: float) -> tuple[float, float]:
    """Determinant identity of the projected shifted Hessian, both sides.

    Builds the explicit tangent-basis matrix W(eta) and the projected matrix
    B(eta) = W'(A + eta I)W for the convex/positive-multiplier branch and
    returns (det B, closed-form product).  The two sides are computed by
    independent code paths; agreement validates the projection machinery.
    """
    lam = spec.lam
    r = spec.r
    n = spec.n
    if n < 2:
        raise ValueError("the projected matrix needs n >= 2")
    if not (-lam[1] < eta < -lam[0]):
        raise ValueError(f"eta={eta!r} outside (-lam2, -lam1)")
    den = lam + eta
    if np.abs(den).min() < 1e-13 * max(1.0, abs(float(lam[0])), abs(float(lam[-1]))):
        raise ValueError("eta too close to a pole")
    if r[0] == 0.0:
        raise ValueError("edge projection r1 is zero")

    u = r[1:] / den[1:]
    W = (r[0] / den[0]) * spec.V[:, 1:] - np.outer(spec.V[:, 0], u)
    M = (spec.V * den) @ spec.V.T          # A + eta I reassembled from the spectrum
    B = W.T @ M @ W
    lhs = float(np.linalg.det(B))

    h = float(r[0]) ** (2 * n - 4) * float(np.prod(den[1:])) / float(den[0]) ** (2 * n - 5)
    phi = float(np.sum((r * r) / den ** 3))
    return lhs, h * phi
