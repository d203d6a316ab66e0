"""Numerical search for pairs satisfying ``||A + tB||_p = ||(1, t)||_q``.

An isometric copy of ``l_q^2`` inside ``S_p^n`` would give a diagonal real ``A``
and a self-adjoint ``B`` of unit p-quasi-norm with
``||A + tB||_p^p = (1 + |t|^q)^(p/q)`` for every real ``t``.  The search below
minimizes the worst deviation from that identity over a fixed set of ``t``
samples.  A strictly positive floor is evidence, never a proof, that no such
pair exists.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .derivatives import schatten_second_derivative
from .errors import BudgetExhausted, SingularOperand
from .linalg import (as_matrix, matrix_to_payload, require_hermitian, schatten_norm, schatten_power,
                     spectral_decompose)

BANNER = ("numerical corroboration only: a positive floor is evidence against an isometric "
          "embedding, not a proof of non-existence")
NORM_TOL = 1e-9
DISJOINT_TOL = 1e-12
BASE_T_SAMPLES = (0.1, 0.25, 0.5, 1.0, 2.0, 5.0)


def default_t_samples(q: float) -> tuple[float, ...]:
    pos = BASE_T_SAMPLES + ((10.0,) if math.isinf(q) else ())
    return tuple(sorted([-t for t in pos] + list(pos)))


def target_power(t, q: float, p: float):
    """``||(1, t)||_q^p``, i.e. ``(1 + |t|^q)^(p/q)`` or ``max(1, |t|)^p`` for ``q = inf``."""
    at = np.abs(np.asarray(t, dtype=float))
    if math.isinf(q):
        return np.maximum(1.0, at) ** p
    return (1.0 + at ** q) ** (p / q)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


@dataclass(frozen=True)
class EmbeddingInstance:
    """Candidate ``(A, B)``: ``A`` diagonal real, ``B`` self-adjoint, both of unit p-quasi-norm."""

    q: float
    p: float
    A: np.ndarray
    B: np.ndarray
    t_samples: tuple[float, ...] = ()
    norm_tol: float = NORM_TOL

    def __post_init__(self):
        A = as_matrix(self.A)
        B = require_hermitian(self.B)
        if A.shape != B.shape:
            raise ValueError("A and B must have the same shape")
        if np.max(np.abs(A - np.diag(np.diag(A)))) > 0 or np.max(np.abs(np.diag(A).imag)) > 0:
            raise ValueError("A must be diagonal with real entries")
        if not 0 < self.p < 1:
            raise ValueError("p must lie in (0, 1)")
        if not self.q > 0:
            raise ValueError("q must be positive")
        for name, M in (("A", A), ("B", B)):
            nrm = schatten_norm(M, self.p)
            if abs(nrm - 1.0) > self.norm_tol:
                raise ValueError(f"||{name}||_p = {nrm!r}, expected 1")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        if not self.t_samples:
            object.__setattr__(self, "t_samples", default_t_samples(self.q))

    @property
    def n(self) -> int:
        return self.A.shape[0]


@dataclass
class ResidualReport:
    max_residual: float
    residual_at: float
    per_t: list[tuple[float, float, float, float]]
    restarts: int = 0
    best_over_restarts: float = math.nan
    restart_floors: list[float] = field(default_factory=list)
    evaluations: int = 0
    q: float = math.nan
    p: float = math.nan
    n: int = 0
    seed: int | None = None
    A: np.ndarray | None = None
    B: np.ndarray | None = None
    budget_exhausted: bool = False
    banner: str = BANNER

    @property
    def floor(self) -> float:
        return self.best_over_restarts if self.restarts else self.max_residual

    def to_dict(self) -> dict:
        def enc(x):
            return "inf" if math.isinf(x) else x

        out = {
            "banner": self.banner,
            "q": enc(self.q),
            "p": self.p,
            "n": self.n,
            "seed": self.seed,
            "restarts": self.restarts,
            "evaluations": self.evaluations,
            "floor": self.floor,
            "max_residual": self.max_residual,
            "residual_at": self.residual_at,
            "budget_exhausted": self.budget_exhausted,
            "restart_floors": list(self.restart_floors),
            "per_t": [{"t": t, "lhs": l, "rhs": r, "residual": d} for t, l, r, d in self.per_t],
        }
        if self.A is not None:
            A, B = np.asarray(self.A), np.asarray(self.B)
            if A.ndim == 2:
                out["best_instance"] = {"A": matrix_to_payload(A), "B": matrix_to_payload(B)}
            else:
                out["best_instance"] = {"a": [[float(z.real), float(z.imag)] for z in A.astype(complex)],
                                        "b": [[float(z.real), float(z.imag)] for z in B.astype(complex)]}
        return out

    def write_json(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")


def _report_from_values(ts, lhs, rhs) -> ResidualReport:
    res = np.abs(np.asarray(lhs) - np.asarray(rhs))
    k = int(np.argmax(res))
    per_t = [(float(t), float(l), float(r), float(d)) for t, l, r, d in zip(ts, lhs, rhs, res)]
    return ResidualReport(float(res[k]), float(ts[k]), per_t)


def iqp_residual(inst: EmbeddingInstance) -> ResidualReport:
    """Deviation ``| ||A + tB||_p^p - ||(1, t)||_q^p |`` at each sample ``t``."""
    ts = np.asarray(inst.t_samples, dtype=float)
    lhs = [schatten_power(inst.A + t * inst.B, inst.p) for t in ts]
    rhs = target_power(ts, inst.q, inst.p)
    rep = _report_from_values(ts, lhs, rhs)
    rep.q, rep.p, rep.n, rep.A, rep.B = inst.q, inst.p, inst.n, inst.A, inst.B
    return rep


def disjoint_support_check(A, B, tol: float = DISJOINT_TOL) -> bool:
    """True when ``||AB||_max <= tol``, i.e. ``A`` and ``B`` have disjoint supports."""
    A = require_hermitian(A)
    B = require_hermitian(B)
    return float(np.max(np.abs(A @ B))) <= tol


def reduce_to_selfadjoint(A, B, p: float) -> tuple[np.ndarray, np.ndarray]:
    """Self-adjoint dilations ``2^(-1/p) [[0, X], [X*, 0]]`` of ``X = A, B``.

    The off-diagonal blocks of ``z A' + w B'`` are ``zA + wB`` and
    ``(conj(z) A + conj(w) B)*``, so

        ||z A' + w B'||_p^p = (||zA + wB||_p^p + ||conj(z) A + conj(w) B||_p^p) / 2.

    The quasi-norm is therefore preserved for real ``z, w``, for matrices with
    real entries, and whenever ``(z, w) -> zA + wB`` is already isometric.
    """
    A = as_matrix(A)
    B = as_matrix(B)
    if A.shape != B.shape:
        raise ValueError("A and B must have the same shape")
    c = 2.0 ** (-1.0 / p)
    Z = np.zeros_like(A)

    def dilate(X):
        return c * np.block([[Z, X], [X.conj().T, Z]])

    return dilate(A), dilate(B)


def positivity_obstruction_check(A, B, q: float, p: float, t_samples: Sequence[float] | None = None) -> dict:
    """Second-derivative obstruction for definite, invertible ``A``.

    For ``A > 0`` or ``A < 0`` the second derivative of ``t -> ||A + tB||_p^p``
    at 0 is negative whenever ``B != 0``.  If the identity held, half of it
    would equal ``lim (p/q)|t|^(q-2)``, which is ``p/2`` for ``q = 2``, ``0`` for
    ``q > 2`` and ``+inf`` for ``q < 2``: never negative.  ``contradiction`` is
    set when both facts hold numerically.
    """
    A = require_hermitian(A)
    B = require_hermitian(B)
    w = spectral_decompose(A).eigenvalues
    report = {"applicable": False, "reason": "", "second_derivative": None, "lhs_limit": None,
              "contradiction": False, "identity_residual": None}
    if float(np.min(np.abs(w))) <= 1e-8 * float(np.max(np.abs(A))):
        raise SingularOperand("A must be invertible")
    if not (np.all(w > 0) or np.all(w < 0)):
        report["reason"] = "A is indefinite"
        return report
    if disjoint_support_check(A, B):
        report["reason"] = "AB = 0: excluded, such pairs never satisfy the identity"
        return report
    ts = np.asarray(t_samples if t_samples is not None else default_t_samples(q), dtype=float)
    lhs = [schatten_power(A + t * B, p) for t in ts]
    report["identity_residual"] = float(np.max(np.abs(np.asarray(lhs) - target_power(ts, q, p))))
    d2 = schatten_second_derivative(A, B, p)
    if math.isinf(q) or q < 2:
        limit = math.inf
    elif q == 2:
        limit = p / q
    else:
        limit = 0.0
    report.update(applicable=True, second_derivative=d2, lhs_limit=limit,
                  contradiction=bool(d2 < 0 <= limit))
    report["reason"] = "A is definite and invertible"
    return report


# -- search ---------------------------------------------------------------

@dataclass(frozen=True)
class SearchConfig:
    """Multi-start simplex settings.

    ``screen`` candidates are drawn uniformly on the unit p-sphere (in
    p-power coordinates) and the best ``restarts`` of them start a simplex run
    of at most ``max_evals`` evaluations each.  The ``polish`` best distinct
    results are then refined by restarting the simplex in place until it stops
    improving.  ``total_evals`` caps the whole run.
    """

    restarts: int = 50
    max_evals: int = 2000
    seed: int = 0
    screen: int = 100000
    polish: int = 8
    polish_rounds: int = 20
    t_samples: tuple[float, ...] | None = None
    workers: int = 1
    total_evals: int | None = None
    complex_mode: bool = False


def _power_coords(y: np.ndarray, p: float) -> np.ndarray:
    """Map ``y`` to ``a`` with ``|a_k|^p = |y_k|`` and the phase/sign of ``y_k``."""
    m = np.abs(y)
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(m > 0, m ** (1.0 / p - 1.0), 0.0)
    return y * scale


def _eigvalsh_batch(H: np.ndarray) -> np.ndarray:
    if H.shape[-1] == 2:
        h11 = H[..., 0, 0].real
        h22 = H[..., 1, 1].real
        mid = 0.5 * (h11 + h22)
        rad = np.hypot(0.5 * (h11 - h22), np.abs(H[..., 0, 1]))
        return np.stack([mid - rad, mid + rad], axis=-1)
    return np.linalg.eigvalsh(H)


class _MatrixObjective:
    """Worst residual of the identity as a function of ``n + n^2`` real parameters.

    Layout: ``y`` (power coordinates of diag A), the upper triangle of Re B,
    then the strict upper triangle of Im B.  The hot loop uses closed-form 2x2
    eigenvalues (LAPACK above that); reported residuals are recomputed with the
    package's own eigensolver.
    """

    def __init__(self, q, p, n, ts):
        self.q, self.p, self.n = q, p, n
        self.ts = np.asarray(ts, dtype=float)
        self.rhs = target_power(self.ts, q, p)
        self.iu = np.triu_indices(n)
        self.iu1 = np.triu_indices(n, 1)
        self.dim = n + n * n

    def decode(self, X):
        X = np.atleast_2d(X)
        n, k = self.n, self.n + len(self.iu[0])
        a = _power_coords(X[:, :n], self.p)
        B = np.zeros((X.shape[0], n, n), dtype=complex)
        B[:, self.iu[0], self.iu[1]] = X[:, n:k]
        B[:, self.iu1[0], self.iu1[1]] += 1j * X[:, k:]
        B = B + np.conj(np.swapaxes(np.triu(B, 1), 1, 2))
        return a, B

    def encode(self, y, B):
        B = np.asarray(B)
        return np.concatenate([np.asarray(y, dtype=float), B[self.iu].real, B[self.iu1].imag])

    def normalized(self, x):
        a, B = self.decode(x)
        a, B = a[0], B[0]
        na = np.sum(np.abs(a) ** self.p)
        nb = np.sum(np.abs(_eigvalsh_batch(B)) ** self.p)
        return a / na ** (1 / self.p), B / nb ** (1 / self.p)

    def batch(self, X):
        a, B = self.decode(X)
        p = self.p
        na = np.sum(np.abs(a) ** p, axis=1)
        nb = np.sum(np.abs(_eigvalsh_batch(B)) ** p, axis=1)
        bad = (na == 0) | (nb == 0) | ~np.isfinite(na) | ~np.isfinite(nb)
        na[bad] = 1.0
        nb[bad] = 1.0
        a = a / na[:, None] ** (1 / p)
        B = B / nb[:, None, None] ** (1 / p)
        H = self.ts[None, :, None, None] * B[:, None]
        d = np.arange(self.n)
        H[:, :, d, d] += a[:, None, :]
        lhs = np.sum(np.abs(_eigvalsh_batch(H)) ** p, axis=-1)
        out = np.max(np.abs(lhs - self.rhs), axis=1)
        out[bad | ~np.isfinite(out)] = 1e6
        return out

    def __call__(self, x):
        if self.n == 2:
            return self._call2(x)
        p, n = self.p, self.n
        y = x[:n]
        na = float(np.sum(np.abs(y)))
        k = n + len(self.iu[0])
        B = np.zeros((n, n), dtype=complex)
        B[self.iu] = x[n:k]
        B[self.iu1] += 1j * x[k:]
        B = B + np.triu(B, 1).conj().T
        nb = float(np.sum(np.abs(np.linalg.eigvalsh(B)) ** p))
        if not (na > 0 and nb > 0 and math.isfinite(na) and math.isfinite(nb)):
            return 1e6
        a = _power_coords(y, p) / na ** (1 / p)
        H = self.ts[:, None, None] * (B / nb ** (1 / p))
        H[:, np.arange(n), np.arange(n)] += a
        lhs = np.sum(np.abs(np.linalg.eigvalsh(H)) ** p, axis=1)
        out = float(np.max(np.abs(lhs - self.rhs)))
        return out if math.isfinite(out) else 1e6

    def _call2(self, x):
        p = self.p
        y0, y1, b11, b12r, b22, b12i = (float(v) for v in x)
        na = abs(y0) + abs(y1)
        b12 = math.hypot(b12r, b12i)
        mid = 0.5 * (b11 + b22)
        rad = math.hypot(0.5 * (b11 - b22), b12)
        nb = abs(mid - rad) ** p + abs(mid + rad) ** p
        if not (na > 0 and nb > 0 and math.isfinite(na) and math.isfinite(nb)):
            return 1e6
        sa = na ** (-1 / p)
        sb = nb ** (-1 / p)
        a0 = math.copysign(abs(y0) ** (1 / p), y0) * sa
        a1 = math.copysign(abs(y1) ** (1 / p), y1) * sa
        ts = self.ts
        h11 = a0 + ts * (b11 * sb)
        h22 = a1 + ts * (b22 * sb)
        m = 0.5 * (h11 + h22)
        r = np.hypot(0.5 * (h11 - h22), np.abs(ts) * (b12 * sb))
        lhs = np.abs(m - r) ** p + np.abs(m + r) ** p
        out = float(np.max(np.abs(lhs - self.rhs)))
        return out if math.isfinite(out) else 1e6

    def sample(self, rng, size):
        n, p = self.n, self.p
        y = rng.dirichlet(np.ones(n), size) * rng.choice([-1.0, 1.0], (size, n))
        beta = rng.dirichlet(np.ones(n), size) ** (1 / p) * rng.choice([-1.0, 1.0], (size, n))
        Z = rng.standard_normal((size, n, n)) + 1j * rng.standard_normal((size, n, n))
        Q, _ = np.linalg.qr(Z)
        B = np.einsum("sij,sj,skj->sik", Q, beta, Q.conj())
        return np.concatenate([y, B[:, self.iu[0], self.iu[1]].real, B[:, self.iu1[0], self.iu1[1]].imag], axis=1)

    def witness(self):
        """The disjoint-support pair ``diag(1, 0, ...)``, ``diag(0, 1, 0, ...)``."""
        y = np.zeros(self.n)
        y[0] = 1.0
        B = np.zeros((self.n, self.n))
        B[1, 1] = 1.0
        return self.encode(y, B)

    def report(self, x) -> ResidualReport:
        a, B = self.normalized(x)
        A = np.diag(a).astype(complex)
        B = 0.5 * (B + B.conj().T)
        lhs = [schatten_power(A + t * B, self.p) for t in self.ts]
        rep = _report_from_values(self.ts, lhs, self.rhs)
        rep.A, rep.B = A, B
        return rep


class _VectorObjective:
    """Commutative analogue: ``sum_k |a_k + t b_k|^p`` with ``a, b`` in power coordinates."""

    def __init__(self, q, p, n, ts, complex_mode=False):
        self.q, self.p, self.n = q, p, n
        self.complex_mode = complex_mode
        self.ts = np.asarray(ts, dtype=float)
        self.rhs = target_power(self.ts, q, p)
        self.dim = 4 * n if complex_mode else 2 * n

    def decode(self, X):
        X = np.atleast_2d(X)
        n = self.n
        if self.complex_mode:
            ya = X[:, :n] + 1j * X[:, n:2 * n]
            yb = X[:, 2 * n:3 * n] + 1j * X[:, 3 * n:]
        else:
            ya, yb = X[:, :n], X[:, n:]
        return _power_coords(ya, self.p), _power_coords(yb, self.p)

    def normalized(self, x):
        a, b = self.decode(x)
        a, b = a[0], b[0]
        p = self.p
        return a / np.sum(np.abs(a) ** p) ** (1 / p), b / np.sum(np.abs(b) ** p) ** (1 / p)

    def batch(self, X):
        a, b = self.decode(X)
        p = self.p
        na = np.sum(np.abs(a) ** p, axis=1)
        nb = np.sum(np.abs(b) ** p, axis=1)
        bad = (na == 0) | (nb == 0)
        na[bad] = 1.0
        nb[bad] = 1.0
        a = a / na[:, None] ** (1 / p)
        b = b / nb[:, None] ** (1 / p)
        lhs = np.sum(np.abs(a[:, None, :] + self.ts[None, :, None] * b[:, None, :]) ** p, axis=-1)
        out = np.max(np.abs(lhs - self.rhs), axis=1)
        out[bad | ~np.isfinite(out)] = 1e6
        return out

    def __call__(self, x):
        return float(self.batch(x[None, :])[0])

    def sample(self, rng, size):
        n = self.n
        parts = []
        for _ in range(2):
            w = rng.dirichlet(np.ones(n), size)
            if self.complex_mode:
                ph = np.exp(2j * np.pi * rng.random((size, n)))
                parts += [(w * ph).real, (w * ph).imag]
            else:
                parts.append(w * rng.choice([-1.0, 1.0], (size, n)))
        if self.complex_mode:
            return np.concatenate([parts[0], parts[1], parts[2], parts[3]], axis=1)
        return np.concatenate(parts, axis=1)

    def witness(self):
        x = np.zeros(self.dim)
        x[0] = 1.0
        x[2 * self.n + 1 if self.complex_mode else self.n + 1] = 1.0
        return x

    def report(self, x) -> ResidualReport:
        a, b = self.normalized(x)
        lhs = [float(np.sum(np.abs(a + t * b) ** self.p)) for t in self.ts]
        rep = _report_from_values(self.ts, lhs, self.rhs)
        rep.A, rep.B = a, b
        return rep


def _simplex(obj, x0, max_evals):
    res = minimize(obj, x0, method="Nelder-Mead",
                   options={"maxfev": max_evals, "xatol": 1e-13, "fatol": 1e-16, "adaptive": True})
    return np.asarray(res.x), float(res.fun), int(res.nfev)


def _restart_job(args):
    obj, x0, max_evals = args
    return _simplex(obj, x0, max_evals)


def _search(obj, q, p, n, config: SearchConfig) -> ResidualReport:
    rng = np.random.default_rng([config.seed, 0])
    budget = config.total_evals
    evals = 0
    pool = np.vstack([obj.witness()[None, :], obj.sample(rng, max(config.screen, config.restarts))])
    values = obj.batch(pool)
    evals += len(pool)
    starts = np.argsort(values, kind="stable")[:config.restarts]

    exhausted = False
    jobs = [(obj, pool[i], config.max_evals) for i in starts]
    results: list[tuple[float, int, np.ndarray]] = []
    if config.workers > 1 and budget is None:
        with ProcessPoolExecutor(max_workers=config.workers) as ex:
            outs = list(ex.map(_restart_job, jobs))
        for k, (x, fx, nfev) in enumerate(outs):
            results.append((fx, k, x))
            evals += nfev
    else:
        for k, job in enumerate(jobs):
            if budget is not None and evals + config.max_evals > budget:
                exhausted = True
                break
            x, fx, nfev = _restart_job(job)
            results.append((fx, k, x))
            evals += nfev
    if not results:
        k = int(starts[0])
        results.append((float(values[k]), 0, pool[k]))
    restart_floors = [fx for fx, _, _ in results]
    results.sort(key=lambda r: (r[0], r[1]))

    # polish the best distinct local minima by restarting the simplex in place
    distinct: list[tuple[float, int, np.ndarray]] = []
    for r in results:
        if all(abs(r[0] - d[0]) > 1e-9 * max(d[0], 1e-300) for d in distinct):
            distinct.append(r)
        if len(distinct) == config.polish:
            break
    polished = []
    for fx, k, x in distinct:
        for _ in range(config.polish_rounds):
            if budget is not None and evals + config.max_evals > budget:
                exhausted = True
                break
            x2, f2, nfev = _simplex(obj, x, config.max_evals)
            evals += nfev
            if f2 < fx * (1 - 1e-9):
                x, fx = x2, f2
            else:
                break
        polished.append((fx, k, x))
    polished.sort(key=lambda r: (r[0], r[1]))
    best_x = polished[0][2]

    rep = obj.report(best_x)
    rep.restarts = len(restart_floors)
    rep.best_over_restarts = rep.max_residual
    rep.restart_floors = restart_floors
    rep.evaluations = evals
    rep.q, rep.p, rep.n, rep.seed = q, p, n, config.seed
    rep.budget_exhausted = exhausted
    if exhausted:
        raise BudgetExhausted(f"evaluation budget {budget} exhausted", rep)
    return rep


def _validate(q, p, n):
    if not 0 < p < 1:
        raise ValueError("p must lie in (0, 1)")
    if not q > 0:
        raise ValueError("q must be positive")
    if n < 2:
        raise ValueError("n must be at least 2")


def falsify(q: float, p: float, n: int, config: SearchConfig | None = None) -> ResidualReport:
    """Smallest worst-case residual found over normalized ``(A diagonal real, B self-adjoint)``.

    Raises
    ------
    BudgetExhausted
        When ``config.total_evals`` runs out; the exception carries the best
        report found so far.
    """
    config = config or SearchConfig()
    _validate(q, p, n)
    ts = config.t_samples or default_t_samples(q)
    return _search(_MatrixObjective(q, p, n, ts), q, p, n, config)


def falsify_commutative(q: float, p: float, n: int, config: SearchConfig | None = None) -> ResidualReport:
    """Vector version: ``sum_k |a_k + t b_k|^p`` against ``(1 + |t|^q)^(p/q)``."""
    config = config or SearchConfig()
    _validate(q, p, n)
    ts = config.t_samples or default_t_samples(q)
    return _search(_VectorObjective(q, p, n, ts, config.complex_mode), q, p, n, config)


SWEEP_HEADER = ("q", "p", "n", "seed", "floor")


def sweep_rows(reports: Sequence[ResidualReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    for r in reports:
        w.writerow(["inf" if math.isinf(r.q) else _fmt(r.q), _fmt(r.p), r.n, r.seed, _fmt(r.floor)])
    return buf.getvalue()


def merge_sweeps(texts: Sequence[str]) -> str:
    """Concatenate sweep CSVs, drop duplicate rows, sort by (q, p, n, seed)."""
    rows = set()
    for text in texts:
        reader = csv.reader(io.StringIO(text))
        header = next(reader, None)
        if header is None:
            continue
        if tuple(header) != SWEEP_HEADER:
            raise ValueError(f"unexpected header {header}")
        rows.update(tuple(r) for r in reader if r)

    def key(r):
        return (float(r[0]), float(r[1]), int(r[2]), int(r[3]))

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    for r in sorted(rows, key=key):
        w.writerow(r)
    return buf.getvalue()


def with_seed(config: SearchConfig, seed: int) -> SearchConfig:
    return replace(config, seed=seed)
