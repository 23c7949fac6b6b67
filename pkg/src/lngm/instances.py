"""Random instance generation, the curated regression corpus, and JSON I/O.

Generated instances are already in normalized form (identity objective
Hessian, zero objective linear term): entries of the constraint matrix and
vector are uniform on the configured range, draws are rejected until the
targeted secular branch is viable, and the constraint constant is then set
so the secular function takes a prescribed value at an interior anchor,
which guarantees at least one local-nonglobal minimizer exists.

The corpus collects small worked problems with known outcomes: the
three-root secular example in its equality / inequality / maximization
variants, degenerate-pencil problems that must be reported as not jointly
definite, a necessary-but-not-sufficient stationary point for the verifier,
and the univariate specials.  Multi-constraint problems (e.g. the
four-dimensional two-constraint counterexample built on the same saddle
surface) do not fit the single-constraint schema and are deliberately not
included.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .problem import ConstraintKind, ProblemInstance
from .secular import Branch

DEFAULT_ENTRY_RANGE = (-100.0, 100.0)
GENERATION_ATTEMPTS = 100


class InstanceFormatError(ValueError):
    """Malformed instance file (schema, dimensions, or values)."""


@dataclass(frozen=True)
class GeneratorConfig:
    n: int
    seed: int
    entry_range: tuple[float, float] = DEFAULT_ENTRY_RANGE
    target_branch: Branch = Branch.PSI1
    anchor_fraction: float = 0.8

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("generated instances need n >= 2")
        lo, hi = self.entry_range
        if not lo < hi:
            raise ValueError("entry_range must satisfy low < high")
        if not 0.0 < self.anchor_fraction < 1.0:
            raise ValueError("anchor_fraction must lie strictly in (0, 1)")
        if self.target_branch not in (Branch.PSI1, Branch.PSI3):
            raise ValueError("only the positive-multiplier branches can be targeted")


def _kernel_sum(lam: np.ndarray, r: np.ndarray, s: float) -> float:
    """Constraint value along the secular curve, minus the constant term."""
    den = lam + s
    return float(math.fsum((-(r * r) * (lam + 2.0 * s) / (den * den)).tolist()))


def _valley_bottom(lam: np.ndarray, r: np.ndarray, lo: float, hi: float) -> Optional[float]:
    """Zero of the increasing slope kernel sum(r_i^2/(lam_i - eta)^3) in (lo, hi)."""
    def slope(eta: float) -> float:
        return float(np.sum((r * r) / (lam - eta) ** 3))

    gap = 1e-9 * (hi - lo)
    a, b = lo + gap, hi - gap
    fa, fb = slope(a), slope(b)
    if fa >= 0.0 or fb <= 0.0:
        return None
    for _ in range(200):
        m = 0.5 * (a + b)
        if slope(m) < 0.0:
            a = m
        else:
            b = m
    return 0.5 * (a + b)


def generate_random(cfg: GeneratorConfig) -> ProblemInstance:
    """Draw a normalized instance whose targeted branch certifiably has a root.

    PSI1 targeting emits min |x|^2 problems with the secular value pinned to
    +1 at the anchor; PSI3 targeting emits min -|x|^2 problems pinned to -1
    (with the positive value at 0 that branch additionally requires).
    Deterministic per seed: each rejected draw advances to a fresh substream.
    """
    lo, hi = cfg.entry_range
    streams = np.random.SeedSequence(cfg.seed).spawn(GENERATION_ATTEMPTS)
    b_floor = 1e-6
    for stream in streams:
        rng = np.random.default_rng(stream)
        M = rng.uniform(lo, hi, size=(cfg.n, cfg.n))
        A = 0.5 * (M + M.T)
        b = rng.uniform(lo, hi, size=cfg.n)
        lam, V = np.linalg.eigh(A)
        r = V.T @ b
        if cfg.target_branch is Branch.PSI1:
            if not (lam[0] < min(lam[1], 0.0) and abs(r[0]) > b_floor * np.linalg.norm(b)):
                continue
            U1, U2 = max(-float(lam[1]), 0.0), -float(lam[0])
            anchor = U1 + cfg.anchor_fraction * (U2 - U1)
            c = 1.0 - _kernel_sum(lam, r, anchor)
            return ProblemInstance(np.eye(cfg.n), np.zeros(cfg.n), A, b, c,
                                   ConstraintKind.EQUALITY)
        # PSI3: concave objective, positive multiplier.  The branch's secular
        # function is valley-shaped with its descending root left of the
        # slope zero, so the value is pinned negative at the valley bottom;
        # the target depth leaves room for the positive value the gate at 0
        # demands.  Either sign of the constraint data is an equally uniform
        # draw, and the branch needs the second-smallest eigenvalue positive,
        # so both orientations are tried.
        for flip in (1.0, -1.0):
            lam_f = flip * lam[::-1] if flip < 0 else lam
            r_f = flip * r[::-1] if flip < 0 else r
            if not (lam_f[1] > max(lam_f[0], 0.0)
                    and abs(r_f[0]) > b_floor * np.linalg.norm(b)):
                continue
            U1, U2 = max(float(lam_f[0]), 0.0), float(lam_f[1])
            bottom = _valley_bottom(lam_f, r_f, U1, U2)
            if bottom is None:
                continue                   # secular value is monotone; no root pair fits
            if lam_f[0] < 0.0:
                depth = _kernel_sum(lam_f, r_f, 0.0) - _kernel_sum(lam_f, r_f, -bottom)
                if depth <= 0.0:
                    continue
                target = -min(1.0, 0.5 * depth)
            else:
                target = -1.0
            c = target - _kernel_sum(lam_f, r_f, -bottom)
            return ProblemInstance(-np.eye(cfg.n), np.zeros(cfg.n),
                                   flip * A, flip * b, c, ConstraintKind.EQUALITY)
    raise RuntimeError(f"no viable draw in {GENERATION_ATTEMPTS} attempts "
                       f"(seed {cfg.seed}, n {cfg.n})")


@dataclass(frozen=True)
class CorpusEntry:
    instance: ProblemInstance
    applicability: str                     # "solver" | "detection" | "verifier"
    expected_lngm_count: Optional[int] = None
    expected_multipliers: tuple[float, ...] = ()
    expected_points: tuple[tuple[float, ...], ...] = ()
    expected_etas: tuple[float, ...] = ()
    note: str = ""


def _three_root_constraint():
    return (np.diag([-4.0, 1.0]), np.array([1.0, 8.0]), 45.0)


def corpus() -> dict[str, CorpusEntry]:
    """Named regression problems with their expected outcomes."""
    A1, b1, c1 = _three_root_constraint()
    I2 = np.eye(2)
    z2 = np.zeros(2)
    entries: dict[str, CorpusEntry] = {}

    entries["psi-roots-eq"] = CorpusEntry(
        instance=ProblemInstance(I2, z2, A1, b1, c1, ConstraintKind.EQUALITY),
        applicability="solver", expected_lngm_count=2,
        expected_multipliers=(-2.8474, 0.2776),
        expected_points=((0.2298, -12.3305), (2.5113, -1.7385)),
        expected_etas=(3.6018, 0.3512),
        note="secular function with three roots; both signed branches certify")

    entries["psi-roots-gtr"] = CorpusEntry(
        instance=ProblemInstance(np.diag([17.0, -3.0]), np.array([-4.0, -32.0]),
                                 A1, b1, c1, ConstraintKind.INEQUALITY),
        applicability="solver", expected_lngm_count=2,
        expected_multipliers=(1.1526, 4.2776),
        note="same constraint with the objective shifted by -4*f1; detection "
             "must recover the normalizing multiplier 4")

    entries["psi-roots-max"] = CorpusEntry(
        instance=ProblemInstance(-I2, z2, A1, b1, c1, ConstraintKind.EQUALITY),
        applicability="solver", expected_lngm_count=1,
        expected_multipliers=(-0.8454,),
        expected_points=((0.3550, -3.6649),),
        expected_etas=(1.1829,),
        note="concave objective; the positive-multiplier branch is closed by "
             "its value-at-zero gate and the negative branch certifies")

    entries["psi-roots-max-gtr"] = CorpusEntry(
        instance=ProblemInstance(-I2, z2, A1, b1, c1, ConstraintKind.INEQUALITY),
        applicability="solver", expected_lngm_count=0,
        note="the equality twin's only minimizer has a negative multiplier, "
             "so inequality filtering removes it")

    entries["unit-sphere"] = CorpusEntry(
        instance=ProblemInstance(I2, z2, I2, z2, -1.0, ConstraintKind.EQUALITY),
        applicability="solver", expected_lngm_count=0,
        note="every feasible point is global; degenerate spectrum makes all "
             "branches non-viable")

    entries["ellipse-axes"] = CorpusEntry(
        instance=ProblemInstance(I2, z2, np.diag([1.0, 4.0]), z2, -1.0,
                                 ConstraintKind.EQUALITY),
        applicability="solver", expected_lngm_count=0,
        note="all constraint projections vanish; stationary points live on "
             "eigenvector fibers (oracle-only territory)")

    entries["indefinite-linear-gtr"] = CorpusEntry(
        instance=ProblemInstance(np.diag([1.0, -1.0]), z2, np.zeros((2, 2)),
                                 np.array([-0.5, 0.5]), 0.0,
                                 ConstraintKind.INEQUALITY),
        applicability="detection", expected_lngm_count=None,
        note="linear constraint, indefinite objective: no shift makes the "
             "pencil definite, yet a nonstrict LNGM exists at (1, 1)")

    entries["hyperbolic-cross-eq"] = CorpusEntry(
        instance=ProblemInstance(np.diag([1.0, -1.0]), np.array([-1.0, 0.0]),
                                 np.array([[0.0, 0.5], [0.5, 0.0]]), z2, 0.0,
                                 ConstraintKind.EQUALITY),
        applicability="detection", expected_lngm_count=None,
        note="constraint x1*x2 = 0; the pencil determinant is never positive, "
             "and the LNGM at (1, 0) carries multiplier 0")

    entries["bilinear-ray-eq"] = CorpusEntry(
        instance=ProblemInstance(np.array([[0.0, 0.5], [0.5, -1.0]]), z2,
                                 np.array([[0.0, -0.5], [-0.5, 0.0]]), z2, 0.0,
                                 ConstraintKind.EQUALITY),
        applicability="detection", expected_lngm_count=None,
        note="a whole ray of nonstrict LNGMs; jointly definite pairs cannot "
             "produce this, and detection must refuse")

    entries["saddle-counterexample-3d"] = CorpusEntry(
        instance=ProblemInstance(
            np.array([[0.0, 1.0, 0.0], [1.0, 0.0, -1.0], [0.0, -1.0, 1.0]]),
            np.array([-1.0, 0.0, 0.0]),
            np.array([[0.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0]]),
            np.array([1.0, 0.0, 0.0]), 0.0, ConstraintKind.EQUALITY),
        applicability="verifier", expected_lngm_count=None,
        note="the origin with multiplier 1 passes the necessary conditions "
             "but fails strict tangent definiteness along (0, 1, 0) and is "
             "not a local minimizer")

    entries["martinez-1d"] = CorpusEntry(
        instance=ProblemInstance(np.array([[-1.0]]), np.array([0.5]),
                                 np.array([[0.0]]), np.array([0.5]), -1.0,
                                 ConstraintKind.INEQUALITY),
        applicability="solver", expected_lngm_count=1,
        expected_multipliers=(1.0,), expected_points=((1.0,),),
        note="univariate ray problem whose boundary point is a strict LNGM; "
             "its equality twin has no LNGM at all")

    entries["isolated-roots-1d"] = CorpusEntry(
        instance=ProblemInstance(np.array([[-1.0]]), np.array([0.0]),
                                 np.array([[1.0]]), np.array([-0.5]), 0.0,
                                 ConstraintKind.EQUALITY),
        applicability="solver", expected_lngm_count=1,
        expected_multipliers=(0.0,), expected_points=((0.0,),),
        note="two isolated feasible points; the worse one is an LNGM whose "
             "multiplier is exactly zero")

    return entries


# --- JSON persistence ------------------------------------------------------

_SCHEMA_KEYS = {"n", "A0", "b0", "A1", "b1", "c1", "kind"}
_KIND_MAP = {"equality": ConstraintKind.EQUALITY, "inequality": ConstraintKind.INEQUALITY}


def instance_to_dict(inst: ProblemInstance) -> dict:
    return {
        "n": inst.n,
        "A0": inst.A0.tolist(),
        "b0": inst.b0.tolist(),
        "A1": inst.A1.tolist(),
        "b1": inst.b1.tolist(),
        "c1": inst.c1,
        "kind": inst.kind.value,
    }


def instance_from_dict(data: dict) -> ProblemInstance:
    if not isinstance(data, dict):
        raise InstanceFormatError("instance document must be a JSON object")
    unknown = set(data) - _SCHEMA_KEYS
    if unknown:
        raise InstanceFormatError(f"unknown fields: {sorted(unknown)}")
    missing = _SCHEMA_KEYS - set(data)
    if missing:
        raise InstanceFormatError(f"missing fields: {sorted(missing)}")
    n = data["n"]
    if not isinstance(n, int) or n < 1:
        raise InstanceFormatError(f"n must be a positive integer, got {n!r}")
    kind = _KIND_MAP.get(data["kind"])
    if kind is None:
        raise InstanceFormatError(f"kind must be 'equality' or 'inequality', "
                                  f"got {data['kind']!r}")

    def matrix(name: str) -> np.ndarray:
        M = np.asarray(data[name], dtype=float)
        if M.shape != (n, n):
            raise InstanceFormatError(f"{name} must be {n}x{n}, got shape {M.shape}")
        if not np.all(np.isfinite(M)):
            raise InstanceFormatError(f"{name} contains non-finite entries")
        return M

    def vector(name: str) -> np.ndarray:
        v = np.asarray(data[name], dtype=float)
        if v.shape != (n,):
            raise InstanceFormatError(f"{name} must have length {n}, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise InstanceFormatError(f"{name} contains non-finite entries")
        return v

    c1 = data["c1"]
    if not isinstance(c1, (int, float)) or not math.isfinite(c1):
        raise InstanceFormatError(f"c1 must be a finite number, got {c1!r}")
    try:
        return ProblemInstance(matrix("A0"), vector("b0"), matrix("A1"),
                               vector("b1"), float(c1), kind)
    except ValueError as exc:
        raise InstanceFormatError(str(exc)) from exc


def write_instance(inst: ProblemInstance, path) -> None:
    """Serialize losslessly: floats keep their exact binary value on reload."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(instance_to_dict(inst), fh, indent=2)
        fh.write("\n")


def read_instance(path) -> ProblemInstance:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"not valid JSON: {exc}") from exc
    return instance_from_dict(data)
