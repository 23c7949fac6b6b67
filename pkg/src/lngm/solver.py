"""End-to-end search for all local-nonglobal minimizers (LNGMs).

Pipeline for n >= 2: detect joint definiteness, normalize by congruence,
eigendecompose the constraint, run the bisection branches selected by the
objective sign, refine each secular root, pull candidates back to x-space,
and keep only those the independent verifier certifies.  Inequality problems
are solved through their equality twin and filtered to positive multipliers.
The univariate case is handled by direct enumeration of the feasible set.
"""
from __future__ import annotations

import enum
import time
from dataclasses import dataclass, replace
from typing import Optional, Union

import numpy as np

from .pencil import (CongruenceTransform, DefinitenessResult, build_transform,
                     detect_joint_definiteness, pull_back)
from .problem import ConstraintKind, NumericalFailure, ProblemInstance
from .rootfind import BisectionOutcome, bisect_type2, bisect_type3
from .secular import (Branch, BranchContext, PoleProximityError,
                      TYPE2_BRANCHES, TYPE3_BRANCHES, branch_interval,
                      candidate_multiplier, psi_eval, psi_prime_eval,
                      spectral_decompose, y_of_eta)
from .verifier import VerificationVerdict, check_strict_lngm, lagrangian_inertia

DEFAULT_EPS = 1e-5
#: Multiplier filter floor for inequality problems, scaled by |mu1| downstream.
MU_FILTER_FACTOR = 1e-9
#: Candidates refine the bisection root with at most this many Newton steps.
_POLISH_MAX_STEPS = 60

UNIVARIATE = "univariate"


class SolveStatus(enum.Enum):
    SOLVED = "solved"
    NOT_JOINTLY_DEFINITE = "not_jointly_definite"
    NUMERICAL_FAILURE = "numerical_failure"


class Verdict(enum.Enum):
    CERTIFIED = "CertifiedStrictLNGM"
    REJECTED = "RejectedByVerifier"


@dataclass(frozen=True)
class LngmCertificate:
    x_star: np.ndarray
    mu_star: float
    eta_star: Optional[float]
    branch: Union[Branch, str]
    constraint_residual: float
    stationarity_residual: float
    inertia: tuple[int, int, int]
    verdict: Verdict
    f0_value: float
    verification: Optional[VerificationVerdict] = None
    reason: Optional[str] = None


@dataclass(frozen=True)
class BranchRun:
    branch: Branch
    U1: float
    U2: float
    viable: bool
    outcome: BisectionOutcome
    eta_refined: Optional[float] = None


@dataclass(frozen=True)
class SolveReport:
    status: SolveStatus
    n: int
    kind: ConstraintKind
    definiteness: Optional[DefinitenessResult]
    mu1: Optional[float]
    sgn: Optional[int]
    certificates: tuple[LngmCertificate, ...]
    rejected: tuple[LngmCertificate, ...]
    branches: tuple[BranchRun, ...]
    eig_time: float
    bis_time: float
    notes: tuple[str, ...]

    @property
    def lngm_count(self) -> int:
        return len(self.certificates)


def _empty_report(inst: ProblemInstance, status: SolveStatus,
                  det: Optional[DefinitenessResult], notes: tuple[str, ...] = ()):
    return SolveReport(status=status, n=inst.n, kind=inst.kind, definiteness=det,
                       mu1=None if det is None or not det.is_definite else det.mu1,
                       sgn=None if det is None or not det.is_definite else det.sgn,
                       certificates=(), rejected=(), branches=(),
                       eig_time=0.0, bis_time=0.0, notes=notes)


def _refine_root(ctx: BranchContext, eta0: float, eps: float) -> float:
    """Polish a bisection root with safeguarded Newton inside the bracket.

    The bisection answer is the end of an eps-wide bracket; its residual is
    O(|psi'| * eps), which is too loose for the certificate tolerances.
    Newton from inside the bracket sharpens it to near machine precision.
    Failure to improve just keeps the best point seen; the verifier decides.
    """
    lam = ctx.spec.lam
    lam_scale = max(1.0, abs(float(lam[0])), abs(float(lam[-1])))
    margin = 1e-12 * lam_scale
    lo = max(ctx.U1, ctx.pole_lo + margin, eta0 - 2.0 * eps)
    hi = min(ctx.U2, ctx.pole_hi - margin, eta0 + 2.0 * eps)
    if not lo < hi:
        return eta0
    eta = min(max(eta0, lo), hi)
    try:
        p = psi_eval(ctx, eta)
    except PoleProximityError:
        return eta0
    best_eta, best_abs = eta, abs(p)
    for _ in range(_POLISH_MAX_STEPS):
        dp = psi_prime_eval(ctx, eta)
        if dp == 0.0 or not np.isfinite(dp):
            break
        nxt = min(max(eta - p / dp, lo), hi)
        if nxt == eta:
            break
        try:
            p_nxt = psi_eval(ctx, nxt)
        except PoleProximityError:
            break
        eta, p = nxt, p_nxt
        if abs(p) < best_abs:
            best_eta, best_abs = eta, abs(p)
        else:
            break
    return best_eta


def _assemble_candidate(inst: ProblemInstance, T: CongruenceTransform,
                        ctx: BranchContext, eta: float) -> LngmCertificate:
    if not eta > 0.0:
        raise ValueError(f"secular root {eta!r} is not strictly positive; "
                         "the multiplier 1/eta would overflow")
    y = y_of_eta(ctx, eta)
    mu_y = candidate_multiplier(ctx, eta)
    x, mu = pull_back(y, mu_y, T)
    verdict = check_strict_lngm(inst, x, mu)
    inertia = lagrangian_inertia(inst, mu)
    certified = verdict.certified and inertia == (1, 0, inst.n - 1)
    reason = None
    if not certified:
        reason = "; ".join(verdict.reasons) or f"Lagrangian inertia {inertia} != (1, 0, n-1)"
    return LngmCertificate(
        x_star=x, mu_star=mu, eta_star=eta, branch=ctx.branch,
        constraint_residual=verdict.feasibility_residual,
        stationarity_residual=verdict.stationarity_residual,
        inertia=inertia,
        verdict=Verdict.CERTIFIED if certified else Verdict.REJECTED,
        f0_value=inst.f0(x), verification=verdict, reason=reason)


def solve_gtre(inst: ProblemInstance, eps: float = DEFAULT_EPS) -> SolveReport:
    """Find every LNGM of the equality-constrained problem, or none.

    Requires joint definiteness of (A0, A1); n = 1 is handled by direct
    enumeration.  Returns all certified minimizers (0, 1 or 2 of them)
    together with per-branch bisection traces and rejected candidates.
    """
    if inst.kind is not ConstraintKind.EQUALITY:
        raise ValueError("solve_gtre expects an equality-constrained instance")
    if inst.n == 1:
        return solve_univariate(inst)
    if not eps > 0.0:
        raise ValueError("eps must be positive")

    det = detect_joint_definiteness(inst.A0, inst.A1)
    if not det.is_definite:
        return _empty_report(inst, SolveStatus.NOT_JOINTLY_DEFINITE, det,
                             ("no mu makes A0 + mu*A1 definite (best margin "
                              f"{det.lambda_min_at_mu1:.3e})",))
    try:
        T, TP = build_transform(inst, det)
        t0 = time.perf_counter()
        spec = spectral_decompose(TP)
        eig_time = time.perf_counter() - t0
    except NumericalFailure as exc:
        return _empty_report(inst, SolveStatus.NUMERICAL_FAILURE, det, (str(exc),))

    branch_set = TYPE2_BRANCHES if det.sgn > 0 else TYPE3_BRANCHES
    bisect = bisect_type2 if det.sgn > 0 else bisect_type3

    runs: list[BranchRun] = []
    candidates: list[LngmCertificate] = []
    notes: list[str] = []
    bis_time = 0.0
    for branch in branch_set:
        ctx = branch_interval(spec, branch)
        t0 = time.perf_counter()
        outcome = bisect(ctx, eps)
        bis_time += time.perf_counter() - t0
        eta_refined = None
        if outcome.found:
            eta_refined = _refine_root(ctx, outcome.eta_star, eps)
            try:
                candidates.append(_assemble_candidate(inst, T, ctx, eta_refined))
            except (PoleProximityError, ValueError) as exc:
                notes.append(f"{branch.name}: candidate discarded ({exc})")
        runs.append(BranchRun(branch=branch, U1=ctx.U1, U2=ctx.U2,
                              viable=ctx.viable, outcome=outcome,
                              eta_refined=eta_refined))

    certified = [c for c in candidates if c.verdict is Verdict.CERTIFIED]
    rejected = [c for c in candidates if c.verdict is Verdict.REJECTED]
    if det.sgn < 0 and len(certified) > 1:
        # The concave normalization admits at most one LNGM; keep the
        # sharper candidate if numerics ever certify both.
        certified.sort(key=lambda c: c.stationarity_residual)
        extra = certified[1:]
        certified = certified[:1]
        for c in extra:
            rejected.append(replace(c, verdict=Verdict.REJECTED,
                                    reason="exceeds the single-minimizer bound "
                                           "of the concave normalization"))
        notes.append("both concave branches certified; kept the sharper candidate")

    return SolveReport(status=SolveStatus.SOLVED, n=inst.n, kind=inst.kind,
                       definiteness=det, mu1=det.mu1, sgn=det.sgn,
                       certificates=tuple(certified), rejected=tuple(rejected),
                       branches=tuple(runs), eig_time=eig_time, bis_time=bis_time,
                       notes=tuple(notes))


def solve_gtr(inst: ProblemInstance, eps: float = DEFAULT_EPS) -> SolveReport:
    """Find every LNGM of the inequality-constrained problem.

    All LNGMs sit on the constraint boundary with a positive multiplier, so
    the equality twin is solved and its certificates filtered by sign.
    """
    if inst.kind is not ConstraintKind.INEQUALITY:
        raise ValueError("solve_gtr expects an inequality-constrained instance")
    if inst.n == 1:
        return solve_univariate(inst)

    twin = ProblemInstance(inst.A0, inst.b0, inst.A1, inst.b1, inst.c1,
                           ConstraintKind.EQUALITY)
    rep = solve_gtre(twin, eps)
    if rep.status is not SolveStatus.SOLVED:
        return replace(rep, kind=inst.kind)

    tol_mu = MU_FILTER_FACTOR * (1.0 + abs(rep.mu1 or 0.0))
    kept: list[LngmCertificate] = []
    rejected = list(rep.rejected)
    notes = list(rep.notes)
    for cert in rep.certificates:
        if cert.mu_star > tol_mu:
            verdict = check_strict_lngm(inst, cert.x_star, cert.mu_star)
            kept.append(replace(cert, verification=verdict,
                                verdict=Verdict.CERTIFIED if verdict.certified
                                else Verdict.REJECTED))
        elif cert.mu_star > 0.0:
            rejected.append(replace(cert, verdict=Verdict.REJECTED,
                                    reason=f"boundary multiplier {cert.mu_star:.3e} within "
                                           f"{tol_mu:.3e} of zero"))
            notes.append("a candidate multiplier sits at the global/local boundary; "
                         "inspect the rejected list")
        else:
            rejected.append(replace(cert, verdict=Verdict.REJECTED,
                                    reason=f"multiplier {cert.mu_star:.6g} <= 0: minimizer "
                                           "of the equality twin only"))
    kept = [c for c in kept if c.verdict is Verdict.CERTIFIED]
    return replace(rep, kind=inst.kind, certificates=tuple(kept),
                   rejected=tuple(rejected), notes=tuple(notes))


def solve(inst: ProblemInstance, eps: float = DEFAULT_EPS) -> SolveReport:
    """Dispatch on constraint kind (and on n = 1)."""
    if inst.kind is ConstraintKind.EQUALITY:
        return solve_gtre(inst, eps)
    return solve_gtr(inst, eps)


# --- univariate enumeration ---------------------------------------------

def _quadratic_roots(a: float, b: float, c: float) -> list[float]:
    """Real roots of a t^2 + 2 b t + c = 0 (a != 0), stably computed."""
    disc = b * b - a * c
    if disc < 0.0:
        return []
    if disc == 0.0:
        return [-b / a]
    s = np.sqrt(disc)
    t = -(b + s) if b >= 0.0 else -(b - s)
    return sorted({t / a, c / t} if t != 0.0 else {0.0, -2.0 * b / a})


def _univariate_certificate(inst: ProblemInstance, x: float,
                            reason_on_reject: str = "") -> LngmCertificate:
    xv = np.array([x])
    g1 = float(inst.grad_f1(xv)[0])
    g0 = float(inst.grad_f0(xv)[0])
    mu = -g0 / g1 if abs(g1) > 1e-12 * (1.0 + abs(g0)) else 0.0
    verdict = check_strict_lngm(inst, xv, mu)
    inertia = lagrangian_inertia(inst, mu)
    certified = verdict.certified and inertia == (1, 0, 0)
    isolated_equality = (inst.kind is ConstraintKind.EQUALITY)
    if isolated_equality and not certified:
        # An isolated feasible point is a local minimizer regardless of
        # curvature; fall back to the full verdict only for flag reporting.
        certified = verdict.certified
    reason = None if certified else ("; ".join(verdict.reasons) or reason_on_reject or None)
    return LngmCertificate(
        x_star=xv, mu_star=mu, eta_star=None, branch=UNIVARIATE,
        constraint_residual=verdict.feasibility_residual,
        stationarity_residual=verdict.stationarity_residual,
        inertia=inertia,
        verdict=Verdict.CERTIFIED if certified else Verdict.REJECTED,
        f0_value=inst.f0(xv), verification=verdict, reason=reason)


def _feasible_pieces(a1: float, b1: float, c1: float):
    """Intervals of {f1 <= 0} plus boundary endpoints with inward directions.

    Returns (pieces, endpoints, note); pieces are (lo, hi) with +-inf ends,
    endpoints are (x, inward direction) pairs on the constraint boundary.
    """
    if a1 > 0.0:
        roots = _quadratic_roots(a1, b1, c1)
        if not roots:
            return [], [], "infeasible: the constraint quadratic is always positive"
        if len(roots) == 1:
            x0 = roots[0]
            return [(x0, x0)], [], "feasible set is the single point of tangency"
        lo, hi = roots
        return [(lo, hi)], [(lo, +1.0), (hi, -1.0)], None
    if a1 < 0.0:
        roots = _quadratic_roots(a1, b1, c1)
        if len(roots) < 2:
            return [(-np.inf, np.inf)], [], None
        lo, hi = roots
        return [(-np.inf, lo), (hi, np.inf)], [(lo, -1.0), (hi, +1.0)], None
    if b1 != 0.0:
        x0 = -c1 / (2.0 * b1)
        if b1 > 0.0:
            return [(-np.inf, x0)], [(x0, -1.0)], None
        return [(x0, np.inf)], [(x0, +1.0)], None
    if c1 <= 0.0:
        return [(-np.inf, np.inf)], [], None
    return [], [], "infeasible: constant constraint is positive"


def _piece_infimum(a0: float, b0: float, lo: float, hi: float) -> float:
    vals = []
    for e in (lo, hi):
        if np.isfinite(e):
            vals.append(a0 * e * e + 2.0 * b0 * e)
    if a0 > 0.0:
        xhat = -b0 / a0
        if lo <= xhat <= hi:
            vals.append(a0 * xhat * xhat + 2.0 * b0 * xhat)
        elif not vals:
            vals.append(np.inf)
    elif a0 < 0.0:
        if not (np.isfinite(lo) and np.isfinite(hi)):
            return -np.inf
    else:
        if b0 > 0.0 and not np.isfinite(lo):
            return -np.inf
        if b0 < 0.0 and not np.isfinite(hi):
            return -np.inf
        if b0 == 0.0:
            vals.append(0.0)
    return min(vals) if vals else np.inf


def solve_univariate(inst: ProblemInstance) -> SolveReport:
    """Enumerate the n = 1 feasible set and classify its local minimizers.

    Equality: the feasible set is the (at most two) roots of f1; each root is
    isolated, hence a local minimizer, and those with objective strictly above
    the best root are local-nonglobal.  Inequality: the feasible set is an
    interval, a ray, two rays, everything or nothing; only boundary points
    passing the one-sided descent test can be nonglobal local minimizers.
    """
    if inst.n != 1:
        raise ValueError("solve_univariate expects n = 1")
    a0, b0 = float(inst.A0[0, 0]), float(inst.b0[0])
    a1, b1, c1 = float(inst.A1[0, 0]), float(inst.b1[0]), inst.c1
    det = detect_joint_definiteness(inst.A0, inst.A1)
    notes: list[str] = []
    certs: list[LngmCertificate] = []
    rejected: list[LngmCertificate] = []

    if inst.kind is ConstraintKind.EQUALITY:
        if a1 != 0.0:
            roots = _quadratic_roots(a1, b1, c1)
        elif b1 != 0.0:
            roots = [-c1 / (2.0 * b1)]
        else:
            roots = []
            notes.append("constraint is the constant 0 = 0; problem is unconstrained"
                         if c1 == 0.0 else "infeasible: constant constraint is nonzero")
        if a1 != 0.0 and not roots:
            notes.append("infeasible: the constraint quadratic has no real root")
        if len(roots) == 2:
            f_vals = [a0 * x * x + 2.0 * b0 * x for x in roots]
            spread = abs(f_vals[0] - f_vals[1])
            if spread > 1e-10 * (1.0 + max(abs(v) for v in f_vals)):
                worse = roots[int(np.argmax(f_vals))]
                cert = _univariate_certificate(inst, worse)
                (certs if cert.verdict is Verdict.CERTIFIED else rejected).append(cert)
    else:
        pieces, endpoints, note = _feasible_pieces(a1, b1, c1)
        if note:
            notes.append(note)
        if pieces:
            global_inf = min(_piece_infimum(a0, b0, lo, hi) for lo, hi in pieces)
            for e, inward in endpoints:
                slope = inward * (2.0 * a0 * e + 2.0 * b0)
                slope_tol = 1e-12 * (1.0 + abs(a0 * e) + abs(b0))
                is_local_min = slope > slope_tol or (abs(slope) <= slope_tol and a0 > 0.0)
                if not is_local_min:
                    continue
                f_e = a0 * e * e + 2.0 * b0 * e
                if global_inf == -np.inf or f_e > global_inf + 1e-10 * (1.0 + abs(global_inf)):
                    cert = _univariate_certificate(inst, e)
                    (certs if cert.verdict is Verdict.CERTIFIED else rejected).append(cert)

    return SolveReport(status=SolveStatus.SOLVED, n=1, kind=inst.kind,
                       definiteness=det,
                       mu1=det.mu1 if det.is_definite else None,
                       sgn=det.sgn if det.is_definite else None,
                       certificates=tuple(certs), rejected=tuple(rejected),
                       branches=(), eig_time=0.0, bis_time=0.0, notes=tuple(notes))
