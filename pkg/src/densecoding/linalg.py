"""Dense complex linear algebra on multipartite index spaces.

Matrices are plain ``numpy`` complex arrays. A list of local dimensions
(``dims``) describes how the row/column index factorises over parties,
party ``k`` being the ``k``-th tensor factor (0-indexed).
"""

from __future__ import annotations

import math
import os
from typing import Iterable, Sequence

import numpy as np

HERMITIAN_TOL = 1e-10
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100

# "lapack" routes spectra through numpy.linalg.eigvalsh, "jacobi" through
# the in-house solver below. Both honour the same contract.
EIG_BACKEND = os.environ.get("DENSECODE_EIG", "lapack")


class DimensionError(ValueError):
    """Raised when a matrix does not match the declared party dimensions."""


class HermiticityError(ValueError):
    """Raised when an operator that must be Hermitian is not."""


def check_dims(dims: Iterable[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims:
        raise DimensionError("dims must contain at least one party")
    if any(d < 2 for d in dims):
        raise DimensionError(f"every local dimension must be >= 2, got {list(dims)}")
    return dims


def _check_square(m: np.ndarray, dims: Sequence[int]) -> None:
    side = math.prod(dims)
    if m.ndim != 2 or m.shape != (side, side):
        raise DimensionError(
            f"matrix of shape {m.shape} does not match dims {list(dims)} (side {side})"
        )


def kron(a: np.ndarray, b: np.ndarray, *more: np.ndarray) -> np.ndarray:
    """Kronecker product of two or more matrices, left factor outermost."""
    out = np.kron(a, b)
    for m in more:
        out = np.kron(out, m)
    return out


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def hermitian_defect(m: np.ndarray) -> float:
    """Max-norm of ``m - m^dagger``."""
    return float(np.max(np.abs(m - dagger(m)))) if m.size else 0.0


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    return m.ndim == 2 and m.shape[0] == m.shape[1] and hermitian_defect(m) <= tol


def symmetrize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + dagger(m))


def _normalize_keep(keep: Iterable[int], n: int) -> list[int]:
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise DimensionError("keep must name at least one party")
    if keep[0] < 0 or keep[-1] >= n:
        raise DimensionError(f"party indices {keep} out of range for {n} parties")
    return keep


def partial_trace(m: np.ndarray, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out every party not in ``keep``.

    The kept parties appear in the result in their original relative order.

    >>> rho = np.eye(4) / 4
    >>> partial_trace(rho, [2, 2], keep={0}).real
    array([[0.5, 0. ],
           [0. , 0.5]])
    """
    dims = check_dims(dims)
    m = np.asarray(m)
    _check_square(m, dims)
    n = len(dims)
    keep = _normalize_keep(keep, n)
    if len(keep) == n:
        return m.copy()

    tensor = m.reshape(dims + dims)
    row = list(range(n))
    col = [i + n if i in keep else i for i in range(n)]
    out = [i for i in keep] + [i + n for i in keep]
    reduced = np.einsum(tensor, row + col, out)
    side = math.prod(dims[i] for i in keep)
    return reduced.reshape(side, side)


def permute_systems(m: np.ndarray, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors so that new party ``i`` is old party ``perm[i]``."""
    dims = check_dims(dims)
    m = np.asarray(m)
    _check_square(m, dims)
    n = len(dims)
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(n)):
        raise DimensionError(f"{perm} is not a permutation of {n} parties")
    tensor = m.reshape(dims + dims)
    tensor = tensor.transpose(perm + [p + n for p in perm])
    side = math.prod(dims)
    return tensor.reshape(side, side)


def _jacobi(a: np.ndarray, tol: float, max_sweeps: int) -> tuple[np.ndarray, np.ndarray, int]:
    """Cyclic complex Jacobi on a Hermitian matrix (modified in place)."""
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    for sweep in range(1, max_sweeps + 1):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off <= tol:
            return a, v, sweep - 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                # phase makes the pivot real; then an ordinary real rotation
                phase = apq / mag
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # columns p, q of J = [[c, s], [-s*conj(phase), c*conj(phase)]]
                jp0, jp1 = c, -s * phase.conjugate()
                jq0, jq1 = s, c * phase.conjugate()
                colp = a[:, p].copy()
                colq = a[:, q].copy()
                a[:, p] = colp * jp0 + colq * jp1
                a[:, q] = colp * jq0 + colq * jq1
                rowp = a[p, :].copy()
                rowq = a[q, :].copy()
                a[p, :] = rowp * np.conj(jp0) + rowq * np.conj(jp1)
                a[q, :] = rowp * np.conj(jq0) + rowq * np.conj(jq1)
                a[p, q] = 0.0
                a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = vp * jp0 + vq * jp1
                v[:, q] = vp * jq0 + vq * jq1
    return a, v, max_sweeps


def hermitian_eig(
    m: np.ndarray,
    tol: float = JACOBI_TOL,
    max_sweeps: int = JACOBI_MAX_SWEEPS,
) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    m : ndarray
        Square complex matrix, Hermitian to within ``1e-10``.
    tol : float
        Sweeps stop once the off-diagonal Frobenius norm drops below ``tol``
        (scaled by the matrix norm for large inputs).
    max_sweeps : int
        Hard cap on the number of cyclic sweeps.

    Returns
    -------
    eigenvalues : ndarray
        Real, ascending.
    eigenvectors : ndarray
        Unitary matrix whose columns pair with ``eigenvalues``.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    if not is_hermitian(m):
        raise HermiticityError(
            f"matrix is not Hermitian: max|M - M^dagger| = {hermitian_defect(m):.3e}"
        )
    a = symmetrize(m)
    scale = max(1.0, float(np.linalg.norm(a)))
    a, v, _ = _jacobi(a, tol * scale, max_sweeps)
    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def eigvalsh(m: np.ndarray, backend: str | None = None) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix using the configured backend."""
    backend = backend or EIG_BACKEND
    if backend == "jacobi":
        return hermitian_eig(m)[0]
    if backend != "lapack":
        raise ValueError(f"unknown eigen backend {backend!r}")
    m = np.asarray(m)
    if not is_hermitian(m):
        raise HermiticityError(
            f"matrix is not Hermitian: max|M - M^dagger| = {hermitian_defect(m):.3e}"
        )
    return np.linalg.eigvalsh(symmetrize(m))
