"""Confluent divided differences of scalar functions.

``divided_difference`` follows the classical recursion that drops either the
last or the second-to-last node,

    f[x0..xr] = (f[x0..x(r-2), xr] - f[x0..x(r-1)]) / (xr - x(r-1)),

falling back to the derivative branch when every node coincides.  Nodes closer
than ``group_tol`` are snapped to their common mean first.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, OrderTooLow

GROUP_TOL = 1e-9
POLY_MAX_ORDER = 64
FD_TOL = 1e-5


def _falling(p: float, k: int) -> float:
    out = 1.0
    for j in range(k):
        out *= p - j
    return out


@dataclass(frozen=True)
class ScalarSymbol:
    """A real function of one variable together with its first ``max_order`` derivatives.

    ``derivative(k, x)`` returns the k-th derivative at ``x``; ``domain(x)``
    says whether ``x`` is admissible.
    """

    derivative: Callable[[int, float], float]
    max_order: int
    name: str = "f"
    domain: Callable[[float], bool] = field(default=lambda x: True)

    def eval(self, k: int, x: float) -> float:
        if k < 0:
            raise ValueError("derivative order must be non-negative")
        if k > self.max_order:
            raise OrderTooLow(f"{self.name}: derivative of order {k} requested, max_order={self.max_order}")
        if not self.domain(x):
            raise DomainError(f"{self.name}: {x!r} outside domain")
        return self.derivative(k, x)

    def __call__(self, x: float) -> float:
        return self.eval(0, x)

    def consistency_defect(self, points: Sequence[float], h: float = 1e-5) -> float:
        """Largest relative gap between ``eval(k)`` and a central difference of ``eval(k-1)``."""
        worst = 0.0
        for x in points:
            for k in range(1, self.max_order + 1):
                fd = (self.eval(k - 1, x + h) - self.eval(k - 1, x - h)) / (2 * h)
                exact = self.eval(k, x)
                worst = max(worst, abs(fd - exact) / max(1.0, abs(exact)))
        return worst


def power(d: int, max_order: int | None = None) -> ScalarSymbol:
    """``x**d`` for an integer ``d >= 0``."""
    if d < 0:
        raise ValueError("d must be non-negative")

    def deriv(k, x):
        if k > d:
            return 0.0
        return _falling(d, k) * x ** (d - k)

    return ScalarSymbol(deriv, POLY_MAX_ORDER if max_order is None else max_order, name=f"x^{d}")


def exponential(max_order: int = 8) -> ScalarSymbol:
    return ScalarSymbol(lambda k, x: math.exp(x), max_order, name="exp")


def sine(max_order: int = 8) -> ScalarSymbol:
    return ScalarSymbol(lambda k, x: math.sin(x + k * math.pi / 2), max_order, name="sin")


def abs_power(p: float, eps: float = 0.0, max_order: int = 6) -> ScalarSymbol:
    """``|x|**p`` on ``|x| >= eps``.

    With ``eps > 0`` this is the restriction of a smooth function that agrees
    with ``|x|**p`` away from the origin, which is all the spectral formulas ever
    see once the spectrum avoids ``[-eps, eps]``.
    """
    if p <= 0:
        raise ValueError("p must be positive")

    def deriv(k, x):
        ax = abs(x)
        if ax == 0.0:
            if k == 0:
                return 0.0
            raise DomainError(f"|x|^{p} has no derivative of order {k} at 0")
        sign = 1.0 if x > 0 else -1.0
        return _falling(p, k) * ax ** (p - k) * sign ** k

    def dom(x):
        return abs(x) >= eps if eps > 0 else True

    return ScalarSymbol(deriv, max_order, name=f"|x|^{p}", domain=dom)


def signed_abs_power(p: float, eps: float = 0.0, max_order: int = 6) -> ScalarSymbol:
    """``|x|**(p-1) sgn(x)``, the derivative of ``|x|**p / p``."""
    base = abs_power(p, eps, max_order + 1)

    def deriv(k, x):
        return base.derivative(k + 1, x) / p

    return ScalarSymbol(deriv, max_order, name=f"|x|^{p - 1}sgn", domain=base.domain)


def snap_nodes(nodes: Sequence[float], group_tol: float = GROUP_TOL) -> tuple[float, ...]:
    """Sort nodes and replace each cluster (gaps <= group_tol) by its mean."""
    xs = sorted(float(x) for x in nodes)
    out: list[float] = []
    i = 0
    while i < len(xs):
        j = i
        while j + 1 < len(xs) and xs[j + 1] - xs[j] <= group_tol:
            j += 1
        mean = sum(xs[i:j + 1]) / (j + 1 - i)
        out.extend([mean] * (j + 1 - i))
        i = j + 1
    return tuple(out)


def _recursive(f: ScalarSymbol, nodes: tuple[float, ...]) -> float:
    @lru_cache(maxsize=None)
    def dd(xs: tuple[float, ...]) -> float:
        r = len(xs) - 1
        if r == 0:
            return f.eval(0, xs[0])
        if all(x == xs[0] for x in xs):
            return f.eval(r, xs[0]) / math.factorial(r)
        if xs[-1] == xs[-2]:
            # symmetric in its nodes: move a node distinct from the last one to the end
            k = next(i for i in range(r + 1) if xs[i] != xs[-1])
            xs = xs[:k] + xs[k + 1:] + (xs[k],)
        upper = dd(tuple(sorted(xs[:-2] + (xs[-1],))))
        lower = dd(tuple(sorted(xs[:-1])))
        return (upper - lower) / (xs[-1] - xs[-2])

    return dd(nodes)


def divided_difference(f: ScalarSymbol, nodes: Sequence[float], group_tol: float = GROUP_TOL) -> float:
    """Order ``len(nodes)-1`` divided difference of ``f``, repeated nodes allowed.

    Raises
    ------
    OrderTooLow
        If a repeated node needs a derivative above ``f.max_order``.
    DomainError
        If a node lies outside ``f``'s domain.
    """
    if len(nodes) == 0:
        raise ValueError("need at least one node")
    xs = snap_nodes(nodes, group_tol)
    for x in xs:
        if not f.domain(x):
            raise DomainError(f"{f.name}: node {x!r} outside domain")
    return _recursive(f, xs)


def confluent_table(f: ScalarSymbol, nodes: Sequence[float], group_tol: float = GROUP_TOL) -> np.ndarray:
    """Upper-triangular table ``T[i, j] = f[x_i, ..., x_j]`` over the given node order.

    Entries below the diagonal are NaN.  Windows whose end nodes coincide are
    delegated to :func:`divided_difference`.
    """
    raw = [float(x) for x in nodes]
    snapped = snap_nodes(raw, group_tol)
    # put snapped values back in the caller's order
    order = sorted(range(len(raw)), key=lambda i: raw[i])
    xs = [0.0] * len(raw)
    for rank, i in enumerate(order):
        xs[i] = snapped[rank]
    n = len(xs)
    T = np.full((n, n), np.nan)
    for i in range(n):
        T[i, i] = f.eval(0, xs[i])
    for width in range(1, n):
        for i in range(n - width):
            j = i + width
            if xs[j] != xs[i]:
                T[i, j] = (T[i + 1, j] - T[i, j - 1]) / (xs[j] - xs[i])
            else:
                T[i, j] = _recursive(f, tuple(sorted(xs[i:j + 1])))
    return T
