"""Derivatives of ``t -> Tr f(A + tB)`` and ``t -> ||A + tB||_p^p`` at ``t = 0``.

Closed forms go through divided differences and multiple operator integrals;
``finite_difference`` and ``differentiability_probe`` are the independent
numerical oracles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .divdiff import GROUP_TOL, ScalarSymbol, abs_power, divided_difference, signed_abs_power
from .errors import DomainError, SingularOperand, ZeroCoordinate
from .linalg import as_matrix, require_hermitian, schatten_power, spectral_decompose
from .moi import divided_difference_symbol, moi_apply

FD_TOL = 1e-5
FD2_TOL = 1e-4
H1 = 1e-4
H2 = 1e-3
SING_RTOL = 1e-8
PROBE_TOL = 0.05


@dataclass(frozen=True)
class DerivativeReport:
    order: int
    closed_form: float
    finite_difference: float

    @property
    def abs_err(self) -> float:
        return abs(self.closed_form - self.finite_difference)

    @property
    def rel_err(self) -> float:
        return self.abs_err / max(1.0, abs(self.closed_form))


def trace_derivative(f: ScalarSymbol, A, B, r: int, group_tol: float = GROUP_TOL) -> float:
    """``d^r/dt^r Tr f(A + tB)`` at ``t = 0`` as ``r! Tr T_{f^[r]}(B, ..., B)``."""
    if r < 1:
        raise ValueError("r must be at least 1")
    A = require_hermitian(A)
    B = require_hermitian(B)
    phi = divided_difference_symbol(f, r, group_tol)
    T = moi_apply(phi, [A] * (r + 1), [B] * r, group_tol)
    tr = complex(np.trace(T))
    return math.factorial(r) * tr.real


def _check_invertible(eigs: np.ndarray, A: np.ndarray, sing_tol: float | None) -> float:
    if sing_tol is None:
        sing_tol = SING_RTOL * float(np.max(np.abs(A)))
    smallest = float(np.min(np.abs(eigs)))
    if smallest <= sing_tol:
        raise SingularOperand(f"min |eigenvalue| = {smallest:.3e} <= {sing_tol:.3e}")
    return smallest


def schatten_first_derivative(A, B, p: float, sing_tol: float | None = None) -> float:
    """``d/dt ||A + tB||_p^p`` at 0, i.e. ``p Tr(B |A|^(p-1) sgn A)``, for invertible ``A``."""
    if not 0 < p <= 1:
        raise ValueError("p must lie in (0, 1]")
    A = require_hermitian(A)
    B = require_hermitian(B)
    dec = spectral_decompose(A)
    _check_invertible(dec.eigenvalues, A, sing_tol)
    g = signed_abs_power(p, max_order=0)
    U = dec.eigenvectors
    G = (U * np.array([g(x) for x in dec.eigenvalues])) @ U.conj().T
    return p * float(np.trace(B @ G).real)


def schatten_second_derivative(A, B, p: float, eps: float | None = None,
                               sing_tol: float | None = None) -> float:
    """``d^2/dt^2 ||A + tB||_p^p`` at 0 for invertible self-adjoint ``A``.

    With ``d`` the eigenvalues of ``A`` and ``b = U* B U`` the perturbation in
    its eigenbasis, the second derivative is twice

        sum_l |b_ll|^2 f[d_l, d_l, d_l]
          + sum_{l<k} |b_lk|^2 (f[d_l, d_k, d_k] + f[d_k, d_l, d_l])

    with ``f = |x|^p``.  ``eps`` is the radius of the excluded interval around
    0 and defaults to half the smallest ``|d_l|``.
    """
    if not 0 < p < 1:
        raise ValueError("p must lie in (0, 1)")
    A = require_hermitian(A)
    B = require_hermitian(B)
    dec = spectral_decompose(A)
    smallest = _check_invertible(dec.eigenvalues, A, sing_tol)
    if eps is None:
        eps = 0.5 * smallest
    if not 0 < eps < smallest:
        raise DomainError(f"eps={eps!r} must lie in (0, min|eig(A)|={smallest:.3e})")
    f = abs_power(p, eps)
    d = dec.eigenvalues
    U = dec.eigenvectors
    b2 = np.abs(U.conj().T @ B @ U) ** 2
    n = len(d)
    total = 0.0
    for l in range(n):
        total += b2[l, l] * divided_difference(f, (d[l], d[l], d[l]))
        for k in range(l + 1, n):
            total += b2[l, k] * (divided_difference(f, (d[l], d[k], d[k]))
                                 + divided_difference(f, (d[k], d[l], d[l])))
    return 2.0 * total


def diagonal_second_difference(d: float, p: float) -> dict[str, float]:
    """Two readings of ``f[d, d, d]`` for ``f = |x|^p``.

    ``recursion`` is the confluent divided difference ``f''(d)/2``;
    ``inline_formula`` is the shortcut ``p(p-1)|d|^(p-1)``.  Only the first
    agrees with finite differences; both are negative for ``0 < p < 1``.
    """
    return {
        "recursion": divided_difference(abs_power(p), (d, d, d)),
        "inline_formula": p * (p - 1) * abs(d) ** (p - 1),
    }


def finite_difference(g: Callable[[float], float], t0: float, order: int, h: float | None = None) -> float:
    """Central difference at ``t0`` with one Richardson step (steps ``h`` and ``2h``)."""
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    if h is None:
        h = H1 if order == 1 else H2
    if h <= 0:
        raise ValueError("h must be positive")

    def central(s):
        if order == 1:
            return (g(t0 + s) - g(t0 - s)) / (2 * s)
        return (g(t0 + s) - 2 * g(t0) + g(t0 - s)) / (s * s)

    return (4 * central(h) - central(2 * h)) / 3


def compare_with_fd(closed_form: float, g: Callable[[float], float], order: int,
                    h: float | None = None) -> DerivativeReport:
    return DerivativeReport(order, float(closed_form), finite_difference(g, 0.0, order, h))


def _one_sided(g, t0, k, h, side):
    acc = 0.0
    for j in range(k + 1):
        acc += (-1) ** (k - j) * math.comb(k, j) * g(t0 + side * j * h)
    return acc / (side * h) ** k


def differentiability_probe(g: Callable[[float], float], t0: float = 0.0,
                            probe_tol: float = PROBE_TOL, max_order: int = 4) -> int:
    """Estimate how many times ``g`` is differentiable at ``t0``.

    For each order k the forward and backward k-th difference quotients are
    evaluated on dyadic steps ``h = 2^-j``.  Order k passes when both sequences
    settle (spread of the last three values below ``probe_tol``, relative to
    ``max(1, |value|)``) and the two one-sided limits agree.  The smallest step
    per order stays above the round-off floor ``eps^(1/(k+2))``.

    Returns the largest passing k (0 = not differentiable), or ``max_order + 1``
    when every order up to ``max_order`` passes.
    """
    eps = np.finfo(float).eps
    for k in range(1, max_order + 1):
        j_max = int(math.floor(-math.log2(eps ** (1.0 / (k + 2)))))
        hs = [2.0 ** -j for j in range(3, j_max + 1)]
        fwd = [_one_sided(g, t0, k, h, +1) for h in hs]
        bwd = [_one_sided(g, t0, k, h, -1) for h in hs]
        ok = True
        for seq in (fwd, bwd):
            tail = seq[-3:]
            if not all(np.isfinite(tail)):
                ok = False
                break
            scale = max(1.0, abs(tail[-1]))
            if max(tail) - min(tail) > probe_tol * scale:
                ok = False
                break
        if ok:
            scale = max(1.0, abs(fwd[-1]), abs(bwd[-1]))
            ok = abs(fwd[-1] - bwd[-1]) <= probe_tol * scale
        if not ok:
            return k - 1
    return max_order + 1


def commutative_second_derivative(a, b, p: float) -> float:
    """``d^2/dt^2 sum_k |a_k + t b_k|^p`` at 0, equal to ``p(p-1) sum |a_k|^(p-2) |b_k|^2``."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError("a and b must have the same length")
    if np.any(a == 0):
        raise ZeroCoordinate("every a_k must be non-zero")
    if np.iscomplexobj(a) or np.iscomplexobj(b):
        raise ValueError("the closed form holds for real vectors only")
    return float(p * (p - 1) * np.sum(np.abs(a) ** (p - 2) * np.abs(b) ** 2))


def schatten_power_path(A, B, p: float) -> Callable[[float], float]:
    """``t -> ||A + tB||_p^p`` as a plain function, for the finite-difference oracles."""
    A = as_matrix(A)
    B = as_matrix(B)
    return lambda t: schatten_power(A + t * B, p)
