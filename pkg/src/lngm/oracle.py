"""Brute-force validation tools, independent of the solver's branch logic.

scan_all_kkt enumerates stationary points by sweeping the scalar multiplier
over the whole real line (every stationary point with a well-defined
multiplier sits on that one-dimensional curve), bracketing feasibility sign
changes on a dense pole-aware grid, and polishing each bracket.  Eigenvector
fibers at poles with vanishing projection are solved in closed form so the
sweep also covers the degenerate directions the secular branches exclude.

empirical_local_check samples the constraint surface near a point and tries
to find a feasible neighbor with a smaller objective.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .pencil import build_transform, detect_joint_definiteness, pull_back
from .problem import ConstraintKind, ProblemInstance
from .secular import spectral_decompose
from .verifier import check_strict_lngm, is_global_candidate, lagrangian_inertia


class Classification(enum.Enum):
    GLOBAL_MIN = "global_min"
    LNGM = "lngm"
    OTHER_STATIONARY = "other_stationary"


@dataclass(frozen=True)
class StationaryPoint:
    x: np.ndarray
    mu: float
    classification: Classification
    f0_value: float


@dataclass(frozen=True)
class EmpiricalCheckResult:
    looks_local_min: bool
    counterexample: Optional[np.ndarray] = None


class OracleInconclusive(RuntimeError):
    """Too many surface projections failed to trust the sample."""


def _classify(inst: ProblemInstance, x: np.ndarray, mu: float) -> Classification:
    verdict = check_strict_lngm(inst, x, mu)
    if verdict.certified and lagrangian_inertia(inst, mu) == (1, 0, inst.n - 1):
        return Classification.LNGM
    H = inst.lagrangian_hessian(mu)
    tol = 1e-7 * (1.0 + float(np.linalg.norm(H, "fro")))
    if is_global_candidate(inst, x, mu, tol=tol):
        return Classification.GLOBAL_MIN
    return Classification.OTHER_STATIONARY


def _sweep_grid(poles: np.ndarray, grid_points: int, scale: float) -> list[np.ndarray]:
    """Per-segment grids: cosine-clustered inside gaps, geometric tails."""
    segments: list[np.ndarray] = []
    k = max(grid_points // (len(poles) + 2), 64)
    tail = np.geomspace(1e-9 * scale, 1e12 * scale, k)
    if poles.size == 0:
        return [np.concatenate([-tail[::-1], [0.0], tail])]
    segments.append(poles[0] - tail[::-1])
    for a, b in zip(poles[:-1], poles[1:]):
        u = 0.5 * (1.0 - np.cos(np.pi * np.arange(1, k + 1) / (k + 1)))
        inner = a + (b - a) * u
        edge = (b - a) * np.geomspace(1e-12, 1e-2, 16)
        segments.append(np.unique(np.concatenate([inner, a + edge, b - edge])))
    segments.append(poles[-1] + tail)
    return segments


def scan_all_kkt(inst: ProblemInstance, grid_points: int = 20000) -> list[StationaryPoint]:
    """Enumerate and classify every isolated KKT point, sorted by objective.

    Requires a jointly definite instance.  Pole fibers spanned by more than
    one eigenvector carry non-isolated stationary sets and are beyond the
    grid-resolution guarantee; only one-dimensional fibers are solved.
    """
    if grid_points < 100:
        raise ValueError("grid_points is too small to bracket roots reliably")
    det = detect_joint_definiteness(inst.A0, inst.A1)
    if not det.is_definite:
        raise ValueError("oracle sweep requires a jointly definite instance")
    T, TP = build_transform(inst, det)
    spec = spectral_decompose(TP)
    lam, V, r, c, sgn = spec.lam, spec.V, spec.r, spec.c, spec.sgn
    n = spec.n
    lam_scale = max(1.0, abs(float(lam[0])), abs(float(lam[-1])))
    r_scale = max(1.0, float(np.linalg.norm(r)))

    # Cluster numerically equal eigenvalues; a cluster is a pole of the
    # feasibility curve only if it carries constraint mass.
    clusters: list[tuple[float, list[int]]] = []
    for i, value in enumerate(lam):
        if clusters and value - clusters[-1][0] <= 1e-10 * lam_scale:
            clusters[-1][1].append(i)
        else:
            clusters.append((float(value), [i]))
    pole_list = []
    fibers = []
    for value, idx in clusters:
        mass = float(np.sqrt(np.sum(r[idx] ** 2)))
        if mass > 1e-12 * r_scale:
            pole_list.append(-value)
        elif len(idx) == 1 and abs(value) > 1e-12 * lam_scale:
            fibers.append((value, idx[0]))
    poles = np.sort(np.asarray(pole_list))

    def g_of_nu(nu: float) -> float:
        den = lam + nu
        return float(c - np.sum((r * r) * (lam + 2.0 * nu) / (den * den)))

    roots: list[float] = []
    for grid in _sweep_grid(poles, grid_points, lam_scale + r_scale):
        den = lam[None, :] + grid[:, None]
        vals = c - np.sum((r * r)[None, :] * (lam[None, :] + 2.0 * grid[:, None]) / den ** 2,
                          axis=1)
        ok = np.isfinite(vals)
        sign_change = np.where((vals[:-1] * vals[1:] < 0.0) & ok[:-1] & ok[1:])[0]
        for j in sign_change:
            roots.append(float(brentq(g_of_nu, grid[j], grid[j + 1],
                                      xtol=1e-12, rtol=8.9e-16)))
        roots.extend(float(grid[j]) for j in np.where(vals == 0.0)[0])

    roots.sort()
    unique_roots: list[float] = []
    for nu in roots:
        if not unique_roots or abs(nu - unique_roots[-1]) > 1e-9 * (1.0 + abs(nu)):
            unique_roots.append(nu)

    points: list[StationaryPoint] = []

    def add_candidate(y: np.ndarray, mu_y: float) -> None:
        x, mu = pull_back(y, mu_y, T)
        points.append(StationaryPoint(x=x, mu=mu,
                                      classification=_classify(inst, x, mu),
                                      f0_value=inst.f0(x)))

    for nu in unique_roots:
        if abs(nu) <= 1e-12 * lam_scale:
            continue                      # multiplier diverges; not a KKT point
        y = V @ (-r / (lam + nu))
        add_candidate(y, sgn / nu)

    for value, i in fibers:
        # (A + nu I) is singular at nu = -value but the system stays
        # consistent; the solution line meets the constraint in <= 2 points.
        den = lam - value
        w = np.where(np.arange(n) == i, 0.0, -np.divide(r, den, where=den != 0.0))
        y_part = V @ w
        t_sq = -TP.g(y_part) / value
        if t_sq < -1e-12 * r_scale ** 2:
            continue
        mu_y = -sgn / value
        for t in {np.sqrt(max(t_sq, 0.0)), -np.sqrt(max(t_sq, 0.0))}:
            add_candidate(y_part + t * V[:, i], mu_y)

    if abs(c) <= 1e-9 * (1.0 + abs(c) + r_scale):
        add_candidate(np.zeros(n), 0.0)

    points.sort(key=lambda p: p.f0_value)
    return points


def _project_to_surface(inst: ProblemInstance, p0: np.ndarray, w: np.ndarray,
                        reach: float) -> Optional[np.ndarray]:
    """Root of t -> f1(p0 + t w) bracketed within [-reach, reach], by bisection."""
    f0_val = inst.f1(p0)
    ladder = reach * np.arange(1, 9) / 8.0
    for direction in (1.0, -1.0):
        t_prev, f_prev = 0.0, f0_val
        for t in direction * ladder:
            f_t = inst.f1(p0 + t * w)
            if f_prev == 0.0:
                return p0 + t_prev * w
            if f_prev * f_t < 0.0:
                a, b, fa = t_prev, t, f_prev
                for _ in range(80):
                    m = 0.5 * (a + b)
                    fm = inst.f1(p0 + m * w)
                    if fm == 0.0:
                        return p0 + m * w
                    if fa * fm < 0.0:
                        b = m
                    else:
                        a, fa = m, fm
                return p0 + 0.5 * (a + b) * w
            t_prev, f_prev = t, f_t
    return None


def empirical_local_check(inst: ProblemInstance, x: np.ndarray, radius: float,
                          samples: int, rng_seed: int) -> EmpiricalCheckResult:
    """Sample feasible neighbors of x and look for a smaller objective value.

    Each draw perturbs x and projects back to the constraint surface along a
    second random direction (inequality problems accept already-feasible
    perturbations directly).  The first feasible point within `radius` whose
    objective beats f0(x) by more than rounding slack refutes local
    minimality.  Deterministic for a fixed seed.
    """
    if radius <= 0.0:
        raise ValueError("radius must be positive")
    x = np.asarray(x, dtype=float).reshape(-1)
    n = inst.n
    f_ref = inst.f0(x)
    slack = 1e-10 * (1.0 + abs(f_ref))
    feas_tol = 1e-9 * (1.0 + abs(inst.c1) + float(np.linalg.norm(inst.b1))
                       + float(np.linalg.norm(inst.A1, "fro"))) * max(1.0, float(np.linalg.norm(x))) ** 2
    rng = np.random.default_rng(rng_seed)
    failures = 0
    for _ in range(samples):
        d = rng.standard_normal(n)
        d /= np.linalg.norm(d)
        p0 = x + radius * rng.uniform(0.1, 0.9) * d
        if inst.kind is ConstraintKind.INEQUALITY and inst.f1(p0) <= feas_tol:
            p = p0
        else:
            w = rng.standard_normal(n)
            w /= np.linalg.norm(w)
            p = _project_to_surface(inst, p0, w, 4.0 * radius)
            if p is None or abs(inst.f1(p)) > feas_tol:
                failures += 1
                continue
        if np.linalg.norm(p - x) > radius:
            failures += 1
            continue
        if inst.f0(p) < f_ref - slack:
            return EmpiricalCheckResult(looks_local_min=False, counterexample=p)
    if failures > 0.9 * samples:
        raise OracleInconclusive(f"{failures} of {samples} surface projections failed")
    return EmpiricalCheckResult(looks_local_min=True)
