"""Discrete multiple operator integrals.

For self-adjoint ``A_0, ..., A_n`` and perturbations ``B_1, ..., B_n``

    T(B_1, ..., B_n) = sum phi(l_0, ..., l_n) E_0(l_0) B_1 E_1(l_1) ... B_n E_n(l_n)

where ``l_j`` runs over the distinct eigenvalues of ``A_j`` and ``E_j`` are the
corresponding spectral projections.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .divdiff import GROUP_TOL, ScalarSymbol, divided_difference
from .errors import ArityMismatch, DimensionMismatch
from .linalg import as_matrix, spectral_decompose


@dataclass(frozen=True)
class MultiSymbol:
    arity: int
    fn: Callable[..., float]
    name: str = "phi"

    def __call__(self, *lams: float) -> float:
        if len(lams) != self.arity:
            raise ArityMismatch(f"{self.name} takes {self.arity} arguments, got {len(lams)}")
        return self.fn(*lams)


def divided_difference_symbol(f: ScalarSymbol, r: int, group_tol: float = GROUP_TOL) -> MultiSymbol:
    """The symbol ``f^[r]`` of arity ``r + 1``."""
    return MultiSymbol(r + 1, lambda *lams: divided_difference(f, lams, group_tol), name=f"{f.name}^[{r}]")


@dataclass(frozen=True)
class ProjectionFamily:
    distinct_eigenvalues: tuple[float, ...]
    projections: tuple[np.ndarray, ...]

    def __len__(self) -> int:
        return len(self.distinct_eigenvalues)

    def defects(self) -> dict[str, float]:
        """Idempotence, self-adjointness, completeness and orthogonality defects (max-norm)."""
        n = self.projections[0].shape[0]
        idem = max(float(np.max(np.abs(P @ P - P))) for P in self.projections)
        sa = max(float(np.max(np.abs(P.conj().T - P))) for P in self.projections)
        total = float(np.max(np.abs(sum(self.projections) - np.eye(n))))
        ortho = 0.0
        for i, P in enumerate(self.projections):
            for Q in self.projections[i + 1:]:
                ortho = max(ortho, float(np.max(np.abs(P @ Q))))
        return {"idempotent": idem, "self_adjoint": sa, "resolution": total, "orthogonal": ortho}


def projection_family(A, group_tol: float = GROUP_TOL) -> ProjectionFamily:
    """Cluster the eigenvalues of ``A`` and build the spectral projection of each cluster."""
    dec = spectral_decompose(A)
    w, U = dec.eigenvalues, dec.eigenvectors
    values, projections = [], []
    start = 0
    for k in range(1, len(w) + 1):
        if k == len(w) or w[k] - w[k - 1] > group_tol:
            cols = U[:, start:k]
            values.append(float(np.mean(w[start:k])))
            projections.append(cols @ cols.conj().T)
            start = k
    return ProjectionFamily(tuple(values), tuple(projections))


def moi_apply(phi: MultiSymbol, operators: Sequence, perturbations: Sequence,
              group_tol: float = GROUP_TOL) -> np.ndarray:
    """Evaluate the discrete multiple operator integral of ``phi``.

    Tuples are enumerated in lexicographic order and partial products
    ``E_0 B_1 E_1 ... B_k E_k`` are shared between tuples with a common prefix.

    Raises
    ------
    ArityMismatch
        If ``phi.arity != len(operators)`` or ``len(operators) != len(perturbations) + 1``.
    DimensionMismatch
        If the matrices do not share one dimension.
    NotHermitian
        If an operator is not self-adjoint.
    """
    if len(operators) != len(perturbations) + 1:
        raise ArityMismatch(f"{len(operators)} operators need {len(operators) - 1} perturbations")
    if phi.arity != len(operators):
        raise ArityMismatch(f"symbol arity {phi.arity} != {len(operators)} operators")
    ops = [as_matrix(A) for A in operators]
    perts = [as_matrix(B) for B in perturbations]
    dim = ops[0].shape[0]
    if any(M.shape[0] != dim for M in ops + perts):
        raise DimensionMismatch("all operators and perturbations must share one dimension")

    families = [projection_family(A, group_tol) for A in ops]
    result = np.zeros((dim, dim), dtype=complex)

    def walk(level: int, lams: tuple, prefix: np.ndarray) -> None:
        nonlocal result
        fam = families[level]
        for lam, E in zip(fam.distinct_eigenvalues, fam.projections):
            prod = E if level == 0 else prefix @ perts[level - 1] @ E
            if level + 1 == len(families):
                result = result + phi(*lams, lam) * prod
            else:
                walk(level + 1, lams + (lam,), prod)

    walk(0, (), np.eye(dim, dtype=complex))
    return result
