"""Dense complex matrices: Hermitian eigensolver, spectral calculus and Schatten quasi-norms.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  The eigensolver is
a cyclic complex Jacobi iteration, so every spectral quantity in the package is
computed without LAPACK.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, DomainError, NoConvergence, NotHermitian

HERM_RTOL = 1e-12
ORTHO_TOL = 1e-10
RECON_TOL = 1e-10
SLACK_TOL = 1e-12
MAX_SWEEPS = 64
JACOBI_TOL = 1e-15


def as_matrix(M) -> np.ndarray:
    """Return ``M`` as a square, finite complex128 array (a copy)."""
    a = np.array(M, dtype=complex, copy=True)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] == 0:
        raise DimensionMismatch("matrix dimension must be positive")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def hermitian_defect(M) -> float:
    """max_ij |M_ij - conj(M_ji)|."""
    a = np.asarray(M)
    return float(np.max(np.abs(a - a.conj().T)))


def is_hermitian(M, herm_tol: float | None = None) -> bool:
    a = np.asarray(M)
    if herm_tol is None:
        herm_tol = HERM_RTOL * float(np.max(np.abs(a)))
    return hermitian_defect(a) <= herm_tol


def require_hermitian(M, herm_tol: float | None = None) -> np.ndarray:
    a = as_matrix(M)
    if not is_hermitian(a, herm_tol):
        raise NotHermitian(f"matrix is not self-adjoint (defect {hermitian_defect(a):.3e})")
    return 0.5 * (a + a.conj().T)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (ascending) and unitary eigenvector columns of a Hermitian matrix."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    def reconstruct(self) -> np.ndarray:
        U = self.eigenvectors
        return (U * self.eigenvalues) @ U.conj().T

    def unitarity_defect(self) -> float:
        U = self.eigenvectors
        return float(np.max(np.abs(U.conj().T @ U - np.eye(self.n))))

    def check(self, H, ortho_tol: float = ORTHO_TOL, recon_tol: float = RECON_TOL) -> bool:
        H = np.asarray(H)
        scale = max(float(np.max(np.abs(H))), np.finfo(float).tiny)
        recon = float(np.max(np.abs(self.reconstruct() - H)))
        return (
            self.unitarity_defect() <= ortho_tol
            and recon <= recon_tol * scale
            and bool(np.all(np.diff(self.eigenvalues) >= 0))
        )


def _jacobi_rotation(H, V, p, q):
    b = H[p, q]
    ab = abs(b)
    if ab == 0.0:
        return
    tau = (H[q, q].real - H[p, p].real) / (2.0 * ab)
    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
    c = 1.0 / math.sqrt(1.0 + t * t)
    s = t * c
    ph = b.conjugate() / ab
    G = np.array([[c, s], [-s * ph, c * ph]])
    idx = [p, q]
    H[:, idx] = H[:, idx] @ G
    H[idx, :] = G.conj().T @ H[idx, :]
    H[p, q] = H[q, p] = 0.0
    H[p, p] = H[p, p].real
    H[q, q] = H[q, q].real
    V[:, idx] = V[:, idx] @ G


def spectral_decompose(H, tol: float = JACOBI_TOL, herm_tol: float | None = None,
                       max_sweeps: int = MAX_SWEEPS) -> SpectralDecomposition:
    """Diagonalize a Hermitian matrix with cyclic complex Jacobi rotations.

    Sweeps stop once the off-diagonal Frobenius norm drops to ``tol * ||H||_F``.
    Eigenvalues are returned in ascending order; ties keep the column order
    produced by the sweep, so the output is deterministic.

    Raises
    ------
    NotHermitian
        If ``H`` fails the self-adjointness check.
    NoConvergence
        If ``max_sweeps`` sweeps do not reach the threshold.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    A = require_hermitian(H, herm_tol)
    n = A.shape[0]
    V = np.eye(n, dtype=complex)
    fro = float(np.linalg.norm(A))
    threshold = tol * fro
    if n > 1 and fro > 0.0:
        iu = np.triu_indices(n, 1)
        for _ in range(max_sweeps):
            off = math.sqrt(2.0) * float(np.linalg.norm(A[iu]))
            if off <= threshold:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    _jacobi_rotation(A, V, p, q)
        else:
            off = math.sqrt(2.0) * float(np.linalg.norm(A[iu]))
            if off > threshold:
                raise NoConvergence(f"Jacobi sweep limit {max_sweeps} reached (off-diagonal {off:.3e})")
    w = np.real(np.diag(A)).copy()
    order = np.argsort(w, kind="stable")
    return SpectralDecomposition(eigenvalues=w[order], eigenvectors=V[:, order])


def eigvalsh(H) -> np.ndarray:
    return spectral_decompose(H).eigenvalues


def _apply_scalar(f, x: float):
    if hasattr(f, "eval"):
        return f.eval(0, x)
    return f(x)


def matrix_function(H, f, decomposition: SpectralDecomposition | None = None) -> np.ndarray:
    """Spectral calculus ``f(H) = U f(diag(w)) U*``.

    ``f`` is a :class:`~schatten_iso.divdiff.ScalarSymbol` or any callable of
    one real argument.
    """
    dec = decomposition if decomposition is not None else spectral_decompose(H)
    vals = []
    for w in dec.eigenvalues:
        try:
            v = _apply_scalar(f, float(w))
        except (ZeroDivisionError, ValueError, OverflowError) as exc:
            if isinstance(exc, DomainError):
                raise
            raise DomainError(f"function undefined at eigenvalue {w!r}") from exc
        if not np.isfinite(v):
            raise DomainError(f"function undefined at eigenvalue {w!r}")
        vals.append(v)
    U = dec.eigenvectors
    return (U * np.asarray(vals)) @ U.conj().T


def singular_values(M) -> np.ndarray:
    """Singular values in ascending order.

    Hermitian input uses ``|eigenvalues|``; otherwise the eigenvalues of ``M*M``
    are clipped at zero and square-rooted.
    """
    a = as_matrix(M)
    if is_hermitian(a):
        return np.sort(np.abs(spectral_decompose(a).eigenvalues))
    w = spectral_decompose(a.conj().T @ a).eigenvalues
    return np.sqrt(np.clip(w, 0.0, None))


def schatten_power(M, p: float) -> float:
    """``sum_k s_k**p`` (the p-th power of the Schatten quasi-norm), finite ``p`` only."""
    if not p > 0 or math.isinf(p):
        raise ValueError("p must be a finite positive number")
    s = singular_values(M)
    return float(np.sum(s[s > 0] ** p))


def schatten_norm(M, p: float) -> float:
    """Schatten p-(quasi-)norm for ``p`` in ``(0, inf]``."""
    if not p > 0:
        raise ValueError("p must be positive")
    if math.isinf(p):
        return float(np.max(singular_values(M)))
    return schatten_power(M, p) ** (1.0 / p)


def quasi_triangle_check(A, B, p: float, slack_tol: float = SLACK_TOL) -> bool:
    """True iff ``||A+B||_p <= 2**(1/p - 1) (||A||_p + ||B||_p) + slack_tol``."""
    A = as_matrix(A)
    B = as_matrix(B)
    if A.shape != B.shape:
        raise DimensionMismatch(f"{A.shape} vs {B.shape}")
    if not 0 < p < 1:
        raise ValueError("p must lie in (0, 1)")
    lhs = schatten_norm(A + B, p)
    rhs = 2.0 ** (1.0 / p - 1.0) * (schatten_norm(A, p) + schatten_norm(B, p))
    return lhs <= rhs + slack_tol


def random_hermitian(n: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * 0.5 * (X + X.conj().T)


# -- file format -----------------------------------------------------------

def matrix_to_payload(M) -> dict:
    a = as_matrix(M)
    n = a.shape[0]
    entries = [[float(z.real), float(z.imag)] for z in a.reshape(-1)]
    return {"n": n, "entries": entries}


def matrix_from_payload(payload: dict) -> np.ndarray:
    try:
        n = int(payload["n"])
        entries = payload["entries"]
    except (KeyError, TypeError) as exc:
        raise ValueError("matrix payload needs fields 'n' and 'entries'") from exc
    if n <= 0 or len(entries) != n * n:
        raise DimensionMismatch(f"payload declares n={n} but has {len(entries)} entries")
    flat = np.empty(n * n, dtype=complex)
    for k, pair in enumerate(entries):
        if len(pair) != 2:
            raise ValueError("each entry must be a [re, im] pair")
        flat[k] = complex(float(pair[0]), float(pair[1]))
    return as_matrix(flat.reshape(n, n))


def save_matrix(path, M) -> None:
    Path(path).write_text(json.dumps(matrix_to_payload(M)) + "\n")


def load_matrix(path) -> np.ndarray:
    return matrix_from_payload(json.loads(Path(path).read_text()))
