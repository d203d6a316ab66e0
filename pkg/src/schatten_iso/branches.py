"""Analytic eigenvalue branches of ``t -> A + tB`` and their zero structure.

Branches are sampled on a symmetric grid around ``t_center`` and stitched
outward by linear prediction, so analytic crossings keep their identity.  A
branch vanishing at the center behaves like ``(t - t_c)^m mu(t)``; ``m`` and
``mu(t_c)`` come from a log-log fit on an inner window.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import IllConditioned, MatchAmbiguous, NotVanishing
from .linalg import require_hermitian, spectral_decompose

ZERO_TOL = 1e-8
MU_FLOOR = 1e-6
TIE_TOL = 1e-12
DEGENERATE_TOL = 1e-9
EXP_TOL = 0.05
COEF_TOL = 1e-2
FIT_WINDOW = (3, 12)


@dataclass(frozen=True)
class BranchFamily:
    """Eigenvalue curves on a grid; ``branches[k, j]`` is branch k at ``t_grid[j]``."""

    t_grid: np.ndarray
    branches: np.ndarray
    t_center: float
    match_cost: float = 0.0
    ambiguous_steps: int = 0

    @property
    def n(self) -> int:
        return self.branches.shape[0]

    @property
    def center_index(self) -> int:
        return int(np.argmin(np.abs(self.t_grid - self.t_center)))

    @property
    def half_width(self) -> float:
        return float(self.t_grid[-1] - self.t_center)

    @classmethod
    def from_samples(cls, t_grid, branches, t_center: float = 0.0) -> "BranchFamily":
        t = np.asarray(t_grid, dtype=float)
        b = np.atleast_2d(np.asarray(branches, dtype=float))
        if b.shape[1] != len(t):
            raise ValueError("each branch needs one value per grid point")
        return cls(t, b, float(t_center))

    def max_second_difference(self) -> float:
        if len(self.t_grid) < 3:
            return 0.0
        return float(np.max(np.abs(np.diff(self.branches, 2, axis=1))))

    def spectral_mismatch(self, A, B) -> float:
        """Largest gap between sorted branch values and eigenvalues of ``A + tB`` over the grid."""
        A = np.asarray(A, dtype=complex)
        B = np.asarray(B, dtype=complex)
        worst = 0.0
        for j, t in enumerate(self.t_grid):
            w = spectral_decompose(A + t * B).eigenvalues
            worst = max(worst, float(np.max(np.abs(np.sort(self.branches[:, j]) - w))))
        return worst

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"n={self.n}", f"t_center={_fmt(self.t_center)}", f"half_width={_fmt(self.half_width)}"])
        w.writerow(["t"] + [f"branch_{k}" for k in range(self.n)])
        for j, t in enumerate(self.t_grid):
            w.writerow([_fmt(t)] + [_fmt(v) for v in self.branches[:, j]])
        return buf.getvalue()

    def write_csv(self, path) -> None:
        Path(path).write_text(self.to_csv())

    @classmethod
    def read_csv(cls, path) -> "BranchFamily":
        rows = list(csv.reader(io.StringIO(Path(path).read_text())))
        meta = dict(item.split("=", 1) for item in rows[0])
        data = np.array([[float(x) for x in r] for r in rows[2:]])
        return cls.from_samples(data[:, 0], data[:, 1:].T, float(meta["t_center"]))


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _assign(values: np.ndarray, predicted: np.ndarray) -> tuple[np.ndarray, float, bool]:
    """Match sorted ``values`` to ``predicted`` branch positions.

    Returns new branch values, the matching cost, and whether the optimum was
    tied (equal predictions competing for different values).  Ties give the
    lower branch index the lower value.
    """
    cost = np.abs(predicted[:, None] - values[None, :])
    rows, cols = linear_sum_assignment(cost)
    out = np.empty_like(predicted)
    out[rows] = values[cols]
    total = float(cost[rows, cols].sum())
    tied = False
    order = np.argsort(predicted, kind="stable")
    start = 0
    for k in range(1, len(order) + 1):
        if k == len(order) or predicted[order[k]] - predicted[order[k - 1]] > TIE_TOL:
            group = order[start:k]
            if len(group) > 1:
                vals = np.sort(out[group])
                if vals[-1] - vals[0] > TIE_TOL:
                    tied = True
                out[np.sort(group)] = vals
            start = k
    return out, total, tied


def track_branches(A, B, t_center: float = 0.0, half_width: float = 0.05, points: int = 41,
                   strict: bool = False) -> BranchFamily:
    """Sample and stitch the eigenvalue branches of ``A + tB`` around ``t_center``.

    The first step pairs the two neighbours of the center so that each branch
    passes straight through its center value (``|left + right - 2 center|``
    minimal); afterwards every step solves an assignment problem against the
    linear extrapolation ``2 l(t_j) - l(t_{j-1})``.  Degenerate center values
    are ordered by slope.

    Raises
    ------
    MatchAmbiguous
        Only with ``strict=True``, when some assignment is tied.
    """
    if points < 11 or points % 2 == 0:
        raise ValueError("points must be odd and at least 11")
    if half_width <= 0:
        raise ValueError("half_width must be positive")
    A = require_hermitian(A)
    B = require_hermitian(B)
    t = t_center + half_width * np.linspace(-1.0, 1.0, points)
    c = points // 2
    t[c] = t_center
    eig = np.array([spectral_decompose(A + tj * B).eigenvalues for tj in t]).T
    n = eig.shape[0]
    br = np.empty_like(eig)
    br[:, c] = eig[:, c]
    center = eig[:, c]
    cost_total = 0.0
    ambiguous = 0

    left, cl, tl = _assign(eig[:, c - 1], center)
    right, cr, tr = _assign(eig[:, c + 1], center)
    cost_total += cl + cr
    # re-pair within each degenerate cluster at the center
    start = 0
    for k in range(1, n + 1):
        if k == n or center[k] - center[k - 1] > DEGENERATE_TOL:
            idx = np.arange(start, k)
            if len(idx) > 1:
                L, R = left[idx], right[idx]
                cost = np.abs(L[:, None] + R[None, :] - 2 * center[idx].mean())
                rows, cols = linear_sum_assignment(cost)
                pairs = sorted(zip(L[rows], R[cols]), key=lambda lr: (lr[1] - lr[0], lr[0]))
                if any(abs(x[1] - x[0] - (y[1] - y[0])) <= TIE_TOL and abs(x[0] - y[0]) > TIE_TOL
                       for x, y in zip(pairs, pairs[1:])):
                    ambiguous += 1
                left[idx] = [lr[0] for lr in pairs]
                right[idx] = [lr[1] for lr in pairs]
            start = k
    br[:, c - 1] = left
    br[:, c + 1] = right

    for direction in (+1, -1):
        j = c + direction
        while 0 <= j + direction < points:
            pred = 2 * br[:, j] - br[:, j - direction]
            vals, cost, tied = _assign(eig[:, j + direction], pred)
            br[:, j + direction] = vals
            cost_total += cost
            ambiguous += int(tied)
            j += direction
    if strict and ambiguous:
        raise MatchAmbiguous(f"{ambiguous} tied assignment steps")
    return BranchFamily(t, br, float(t_center), cost_total, ambiguous)


@dataclass(frozen=True)
class MultiplicityEstimate:
    branch_index: int
    m: int
    mu0: float
    fit_residual: float
    confidence: float
    slope: float = math.nan


def is_identically_zero(family: BranchFamily, branch_index: int, zero_tol: float = ZERO_TOL) -> bool:
    return bool(np.max(np.abs(family.branches[branch_index])) < zero_tol)


def vanishing_branches(family: BranchFamily, zero_tol: float = ZERO_TOL) -> list[int]:
    """Indices of branches that vanish at the center without vanishing identically."""
    c = family.center_index
    return [k for k in range(family.n)
            if abs(family.branches[k, c]) < zero_tol and not is_identically_zero(family, k, zero_tol)]


def estimate_zero_multiplicity(family: BranchFamily, branch_index: int, zero_tol: float = ZERO_TOL,
                               window: tuple[int, int] = FIT_WINDOW) -> MultiplicityEstimate:
    """Fit ``l(t) ~ (t - t_c)^m mu0`` to one branch.

    The slope of ``log|l|`` against ``log|t - t_c|`` on grid offsets
    ``window[0]..window[1]`` from the center (both sides) gives ``m``; ``mu0`` is
    the geometric mean of ``|l| / |t - t_c|^m`` over the same points, which
    cancels the odd first-order correction, signed by the branch on the
    ``t > t_c`` side.

    Raises
    ------
    NotVanishing
        If the branch is not below ``zero_tol`` at the center.
    IllConditioned
        If the slope is more than 0.25 from an integer, or the branch is
        identically zero.
    """
    c = family.center_index
    vals = family.branches[branch_index]
    if abs(vals[c]) >= zero_tol:
        raise NotVanishing(f"branch {branch_index} is {vals[c]:.3e} at the center")
    if is_identically_zero(family, branch_index, zero_tol):
        raise IllConditioned(f"branch {branch_index} vanishes identically")
    half = min(c, len(vals) - 1 - c)
    lo, hi = window
    hi = min(hi, half)
    lo = min(lo, max(1, hi - 2))
    offsets = np.arange(lo, hi + 1)
    idx = np.concatenate([c - offsets, c + offsets])
    dt = np.abs(family.t_grid[idx] - family.t_center)
    lv = np.abs(vals[idx])
    if np.any(lv == 0):
        raise IllConditioned(f"branch {branch_index} has exact zeros inside the fitting window")
    x, y = np.log(dt), np.log(lv)
    slope, intercept = np.polyfit(x, y, 1)
    m = int(round(slope))
    if abs(slope - m) > 0.25 or m < 1:
        raise IllConditioned(f"log-log slope {slope:.3f} is not close to a positive integer")
    resid = float(np.max(np.abs(y - (slope * x + intercept))))
    log_mu = float(np.mean(y - m * x))
    sign = 1.0 if vals[c + offsets[0]] > 0 else -1.0
    mu0 = sign * math.exp(log_mu)
    confidence = math.exp(-abs(slope - m) / 0.05) * math.exp(-resid / 0.1)
    return MultiplicityEstimate(branch_index, m, mu0, resid, confidence, float(slope))


def binomial_alpha(rho: float, k: int) -> float:
    """Generalized binomial coefficient ``rho (rho-1) ... (rho-k+1) / k!``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    out = 1.0
    for j in range(1, k + 1):
        out *= (rho - j + 1) / j
    return out


@dataclass(frozen=True)
class SeriesConditionReport:
    q: float
    p: float
    exponents: list[float]
    alphas: list[float]
    matched_conditions: list[tuple[str, bool, float]] = field(default_factory=list)
    sign_obstruction: bool = False

    def condition(self, cid: str) -> tuple[str, bool, float]:
        for item in self.matched_conditions:
            if item[0] == cid:
                return item
        raise KeyError(cid)


def series_condition_check(family: BranchFamily | None, estimates: list[MultiplicityEstimate],
                           q: float, p: float, exp_tol: float = EXP_TOL, coef_tol: float = COEF_TOL,
                           max_terms: int | None = None) -> SeriesConditionReport:
    """Compare the vanishing-branch expansion with the series of ``(1 + |t|^q)^(p/q)``.

    Near the center the left side is ``1 + sum_j alpha_j |t|^(jq)`` and the
    right side contributes ``|mu_k(0)|^p |t|^(m_k p)`` per vanishing branch.
    Conditions reported:

    ``exponent_k``
        ``m_k p`` equals some ``j q`` or an integer (otherwise the right side
        carries a power the left side lacks).
    ``alpha_j``
        ``alpha_j = sum_{k : m_k p = j q} |mu_k(0)|^p`` for every ``j q`` that is
        not an integer, ``j q < 2 max(m_k p, 1)`` (non-analytic powers must
        balance).
    ``sign_j``
        Raised (unsatisfied) when ``alpha_j < 0`` but branches with ``m_k p = j q``
        exist, since their coefficient sum is positive.
    """
    del family  # the estimates carry everything needed
    exps = [e.m * p for e in estimates]
    top = max(exps + [1.0]) * 2
    if max_terms is None:
        max_terms = max(1, int(math.floor(top / q + 1e-12))) if math.isfinite(q) else 1
    alphas = [binomial_alpha(p / q, j) for j in range(1, max_terms + 1)] if math.isfinite(q) else []
    conds: list[tuple[str, bool, float]] = []

    def near_int(x):
        return abs(x - round(x)) <= exp_tol

    for e, x in zip(estimates, exps):
        gaps = [abs(x - j * q) for j in range(1, max_terms + 1)] if math.isfinite(q) else []
        best = min(gaps + [abs(x - round(x))])
        conds.append((f"exponent_{e.branch_index}", best <= exp_tol, best))

    obstruction = False
    for j, a in enumerate(alphas, start=1):
        target = j * q
        if near_int(target):
            continue
        members = [e for e, x in zip(estimates, exps) if abs(x - target) <= exp_tol]
        total = sum(abs(e.mu0) ** p for e in members)
        resid = abs(a - total)
        conds.append((f"alpha_{j}", resid <= coef_tol * max(1.0, abs(a)), resid))
        if members and a < 0:
            obstruction = True
            conds.append((f"sign_{j}", False, total - a))
    return SeriesConditionReport(q, p, exps, alphas, conds, obstruction)
