"""Definiteness of the Hessian pair (A0, A1) and the normalizing transform.

The pair is jointly definite when some mu1 makes A0 + mu1*A1 positive or
negative definite.  m(mu) = lambda_min(+-(A0 + mu*A1)) is concave in mu, so a
bracketed one-dimensional maximization finds the best mu globally.  A
successful detection is turned into an invertible affine change of variables
x = Q'y + q that maps the Lagrangian Hessian to +-I, reducing the problem to
minimizing +-|y|^2 subject to one quadratic equation.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import solve_triangular
from scipy.optimize import minimize_scalar

from .problem import NumericalFailure, ProblemInstance

# Bracket-expansion cap for the concave search; beyond this the pencil is
# treated as indefinite (lambda_min plateaus when A1 is singular semidefinite).
MU_CAP = 1e8
DEFAULT_DEFINITENESS_TOL = 1e-9


class Definiteness(enum.Enum):
    JOINTLY_POSITIVE = "jointly_positive"
    JOINTLY_NEGATIVE = "jointly_negative"
    NOT_JOINTLY_DEFINITE = "not_jointly_definite"


@dataclass(frozen=True)
class DefinitenessResult:
    verdict: Definiteness
    mu1: Optional[float]
    lambda_min_at_mu1: float

    @property
    def is_definite(self) -> bool:
        return self.verdict is not Definiteness.NOT_JOINTLY_DEFINITE

    @property
    def sgn(self) -> int:
        if self.verdict is Definiteness.JOINTLY_POSITIVE:
            return 1
        if self.verdict is Definiteness.JOINTLY_NEGATIVE:
            return -1
        raise ValueError("pencil is not jointly definite")


@dataclass(frozen=True)
class CongruenceTransform:
    """x = Q'y + q with Q the inverse Cholesky factor of sgn*(A0+mu1*A1)."""

    mu1: float
    sgn: int
    Q: np.ndarray
    q: np.ndarray
    c0: float


@dataclass(frozen=True)
class TransformedProblem:
    """Constraint data of min sgn*|y|^2  s.t.  y'Ay + 2b'y + c = 0."""

    A: np.ndarray
    b: np.ndarray
    c: float
    sgn: int

    @property
    def n(self) -> int:
        return self.A.shape[0]

    def g(self, y: np.ndarray) -> float:
        y = np.asarray(y, dtype=float)
        return float(y @ self.A @ y + 2.0 * self.b @ y + self.c)


def _check_pair(A0: np.ndarray, A1: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    A0 = np.asarray(A0, dtype=float)
    A1 = np.asarray(A1, dtype=float)
    if A0.ndim != 2 or A0.shape[0] != A0.shape[1]:
        raise ValueError(f"A0 must be square, got shape {A0.shape}")
    if A1.shape != A0.shape:
        raise ValueError(f"dimension mismatch: A0 {A0.shape} vs A1 {A1.shape}")
    if not (np.all(np.isfinite(A0)) and np.all(np.isfinite(A1))):
        raise ValueError("non-finite entries in pencil matrices")
    return 0.5 * (A0 + A0.T), 0.5 * (A1 + A1.T)


def _margin_scale(A0: np.ndarray, A1: np.ndarray, mu: float) -> float:
    return max(1.0, float(np.linalg.norm(A0, "fro") + abs(mu) * np.linalg.norm(A1, "fro")))


def _maximize_concave(m, cap: float = MU_CAP) -> tuple[float, float]:
    """Maximize a concave scalar function by ladder bracketing + bounded Brent.

    Returns (argmax, max).  The ladder doubles outward from [-1, 1] until the
    incumbent maximum is interior or the cap is hit; concavity makes the
    resulting bracket global.
    """
    pts = [-1.0, 0.0, 1.0]
    vals = [m(p) for p in pts]
    while True:
        k = int(np.argmax(vals))
        if 0 < k < len(pts) - 1:
            break
        if max(abs(pts[0]), abs(pts[-1])) >= cap:
            break
        if k == 0:
            pts.insert(0, 2.0 * pts[0])
            vals.insert(0, m(pts[0]))
        else:
            pts.append(2.0 * pts[-1])
            vals.append(m(pts[-1]))
    k = int(np.argmax(vals))
    lo = pts[max(k - 1, 0)]
    hi = pts[min(k + 1, len(pts) - 1)]
    if lo == hi:
        return pts[k], vals[k]
    res = minimize_scalar(lambda t: -m(t), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-9 * max(1.0, abs(lo), abs(hi)), "maxiter": 500})
    mu = float(res.x)
    val = float(-res.fun)
    if vals[k] > val:
        mu, val = pts[k], vals[k]
    return mu, val


def detect_joint_definiteness(A0: np.ndarray, A1: np.ndarray,
                              tol: float = DEFAULT_DEFINITENESS_TOL) -> DefinitenessResult:
    """Decide whether some mu1 makes A0 + mu1*A1 definite, and certify it.

    Acceptance is scale-invariant: lambda_min must clear
    tol * max(1, |A0|_F + |mu1||A1|_F).
    """
    A0, A1 = _check_pair(A0, A1)

    def accept(verdict: Definiteness, mu: float, lam: float) -> Optional[DefinitenessResult]:
        if lam > tol * _margin_scale(A0, A1, mu):
            return DefinitenessResult(verdict, mu, lam)
        return None

    # mu = 0 first: catches already-normalized problems exactly.
    lam0 = float(np.linalg.eigvalsh(A0)[0])
    res = accept(Definiteness.JOINTLY_POSITIVE, 0.0, lam0)
    if res:
        return res
    res = accept(Definiteness.JOINTLY_NEGATIVE, 0.0, float(np.linalg.eigvalsh(-A0)[0]))
    if res:
        return res

    # Definite A1 gives a closed-form mu1, avoiding unbounded bracket growth.
    eig1 = np.linalg.eigvalsh(A1)
    scale1 = max(1.0, float(np.linalg.norm(A1, "fro")))
    if eig1[0] > tol * scale1:
        mu = float(np.linalg.eigvalsh(-A0)[-1]) / float(eig1[0]) + 1.0
        res = accept(Definiteness.JOINTLY_POSITIVE, mu,
                     float(np.linalg.eigvalsh(A0 + mu * A1)[0]))
        if res:
            return res
    if eig1[-1] < -tol * scale1:
        mu = -(float(np.linalg.eigvalsh(-A0)[-1]) / float(np.linalg.eigvalsh(-A1)[0]) + 1.0)
        res = accept(Definiteness.JOINTLY_POSITIVE, mu,
                     float(np.linalg.eigvalsh(A0 + mu * A1)[0]))
        if res:
            return res

    def m_pos(mu: float) -> float:
        return float(np.linalg.eigvalsh(A0 + mu * A1)[0])

    def m_neg(mu: float) -> float:
        return float(np.linalg.eigvalsh(-(A0 + mu * A1))[0])

    mu_p, val_p = _maximize_concave(m_pos)
    res = accept(Definiteness.JOINTLY_POSITIVE, mu_p, val_p)
    if res:
        return res
    mu_n, val_n = _maximize_concave(m_neg)
    res = accept(Definiteness.JOINTLY_NEGATIVE, mu_n, val_n)
    if res:
        return res
    return DefinitenessResult(Definiteness.NOT_JOINTLY_DEFINITE, None, max(val_p, val_n))


def build_transform(inst: ProblemInstance,
                    det: DefinitenessResult) -> tuple[CongruenceTransform, TransformedProblem]:
    """Factor sgn*(A0+mu1*A1) = LL' and assemble x = Q'y + q with Q = inv(L).

    Raises NumericalFailure when the Cholesky factorization breaks down, i.e.
    the definiteness margin is below working precision.
    """
    if not det.is_definite:
        raise ValueError("cannot build a transform for an indefinite pencil")
    mu1 = float(det.mu1)
    sgn = det.sgn
    M = sgn * (inst.A0 + mu1 * inst.A1)
    try:
        L = np.linalg.cholesky(M)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(
            "Cholesky of the shifted pencil failed; definiteness margin is below "
            "working precision (tighten the detection tolerance or treat the pair "
            "as not jointly definite)") from exc
    Q = solve_triangular(L, np.eye(inst.n), lower=True)
    s = inst.b0 + mu1 * inst.b1
    q = -sgn * (Q.T @ (Q @ s))
    c0 = float(s @ q + mu1 * inst.c1)
    T = CongruenceTransform(mu1=mu1, sgn=sgn, Q=Q, q=q, c0=c0)

    A = Q @ inst.A1 @ Q.T
    A = 0.5 * (A + A.T)
    b = Q @ (inst.A1 @ q + inst.b1)
    c = float(q @ inst.A1 @ q + 2.0 * inst.b1 @ q + inst.c1)
    return T, TransformedProblem(A=A, b=b, c=c, sgn=sgn)


def pull_back(y: np.ndarray, mu_y: float, T: CongruenceTransform) -> tuple[np.ndarray, float]:
    """Map a normalized-space candidate (y, mu_y) back to x-space."""
    y = np.asarray(y, dtype=float)
    if not (np.all(np.isfinite(y)) and np.isfinite(mu_y)):
        raise ValueError("non-finite candidate")
    return T.Q.T @ y + T.q, T.mu1 + float(mu_y)
