"""Problem data: one quadratic objective, one quadratic constraint.

The objective is f0(x) = x'A0x + 2 b0'x and the constraint is
f1(x) = x'A1x + 2 b1'x + c1, required to be <= 0 (inequality kind) or
== 0 (equality kind).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

# Relative asymmetry accepted on load; anything worse is an input error.
SYMMETRY_RTOL = 1e-12


class ConstraintKind(enum.Enum):
    EQUALITY = "equality"
    INEQUALITY = "inequality"


class NumericalFailure(RuntimeError):
    """A dense linear-algebra kernel broke down (Cholesky/eigensolver)."""


def _as_symmetric(M: np.ndarray, name: str) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError(f"{name} contains non-finite entries")
    scale = max(1.0, float(np.abs(M).max()))
    asym = float(np.abs(M - M.T).max())
    if asym > SYMMETRY_RTOL * scale:
        raise ValueError(f"{name} is not symmetric (relative asymmetry {asym / scale:.3e})")
    S = 0.5 * (M + M.T)
    S.setflags(write=False)
    return S


def _as_vector(v: np.ndarray, n: int, name: str) -> np.ndarray:
    v = np.asarray(v, dtype=float).reshape(-1)
    if v.shape != (n,):
        raise ValueError(f"{name} must have length {n}, got {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} contains non-finite entries")
    v = v.copy()
    v.setflags(write=False)
    return v


@dataclass(frozen=True)
class ProblemInstance:
    """The sextuple (A0, b0, A1, b1, c1, kind) in dimension n >= 1.

    Matrices are symmetrized on load; all data is immutable afterwards, so
    instances are safe to share across threads.
    """

    A0: np.ndarray
    b0: np.ndarray
    A1: np.ndarray
    b1: np.ndarray
    c1: float
    kind: ConstraintKind = ConstraintKind.EQUALITY
    n: int = field(init=False)

    def __post_init__(self):
        A0 = _as_symmetric(self.A0, "A0")
        n = A0.shape[0]
        if n < 1:
            raise ValueError("dimension must be >= 1")
        A1 = _as_symmetric(self.A1, "A1")
        if A1.shape != (n, n):
            raise ValueError(f"A1 has shape {A1.shape}, expected {(n, n)}")
        b0 = _as_vector(self.b0, n, "b0")
        b1 = _as_vector(self.b1, n, "b1")
        c1 = float(self.c1)
        if not np.isfinite(c1):
            raise ValueError("c1 is not finite")
        if not isinstance(self.kind, ConstraintKind):
            raise ValueError(f"kind must be a ConstraintKind, got {self.kind!r}")
        object.__setattr__(self, "A0", A0)
        object.__setattr__(self, "b0", b0)
        object.__setattr__(self, "A1", A1)
        object.__setattr__(self, "b1", b1)
        object.__setattr__(self, "c1", c1)
        object.__setattr__(self, "n", n)

    def f0(self, x: np.ndarray) -> float:
        x = np.asarray(x, dtype=float)
        return float(x @ self.A0 @ x + 2.0 * self.b0 @ x)

    def f1(self, x: np.ndarray) -> float:
        x = np.asarray(x, dtype=float)
        return float(x @ self.A1 @ x + 2.0 * self.b1 @ x + self.c1)

    def grad_f0(self, x: np.ndarray) -> np.ndarray:
        return 2.0 * (self.A0 @ np.asarray(x, dtype=float) + self.b0)

    def grad_f1(self, x: np.ndarray) -> np.ndarray:
        return 2.0 * (self.A1 @ np.asarray(x, dtype=float) + self.b1)

    def lagrangian_hessian(self, mu: float) -> np.ndarray:
        return self.A0 + mu * self.A1
