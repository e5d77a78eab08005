"""Two-qubit entanglement of formation and qubit-measured quantum discord."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .entropy import conditional_entropy, entropy
from .linalg import DimensionError
from .states import MultipartiteState, StateError

SIGMA_Y = np.array([[0, -1j], [1j, 0]])
PAULIS = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    SIGMA_Y,
    np.array([[1, 0], [0, -1]], dtype=complex),
)

# spectrum below this is treated as exact zero when forming sqrt(rho)
RANK_CUTOFF = 1e-14

N_STARTS = 32
ANGLE_TOL = 1e-6
MAX_ROUNDS = 200
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class UnsupportedDimensionError(ValueError):
    """Raised when a measure is requested outside the dimensions it supports."""


def binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def _require_two_qubits(s: MultipartiteState) -> None:
    if s.dims != (2, 2):
        raise UnsupportedDimensionError(f"two-qubit state required, got dims {list(s.dims)}")


def concurrence(s: MultipartiteState) -> float:
    """Wootters concurrence of a two-qubit state.

    The decreasing square roots of the spectrum of ``rho (Y⊗Y) rho* (Y⊗Y)``
    are obtained as singular values of ``W^T (Y⊗Y) W`` where ``rho = W W^†``,
    which avoids square roots of near-zero eigenvalues.
    """
    _require_two_qubits(s)
    w, v = np.linalg.eigh(s.matrix)
    w = np.where(w > RANK_CUTOFF, w, 0.0)
    half = v * np.sqrt(w)
    yy = np.kron(SIGMA_Y, SIGMA_Y)
    lam = np.linalg.svd(half.T @ yy @ half, compute_uv=False)
    lam = np.sort(lam)[::-1]
    c = lam[0] - lam[1] - lam[2] - lam[3]
    return float(min(max(c, 0.0), 1.0))


@dataclass(frozen=True)
class EofResult:
    concurrence: float
    eof: float


def eof_from_concurrence(c: float) -> float:
    return binary_entropy((1.0 + math.sqrt(max(1.0 - c * c, 0.0))) / 2.0)


def eof_two_qubit(s: MultipartiteState) -> EofResult:
    c = concurrence(s)
    return EofResult(concurrence=c, eof=eof_from_concurrence(c))


# -- discord -------------------------------------------------------------------


@dataclass(frozen=True)
class DiscordResult:
    value: float
    optimizer_angles: tuple[float, float]
    starts_used: int
    converged: bool
    classical_correlation: float = float("nan")


def fibonacci_sphere(n: int) -> np.ndarray:
    """``n`` roughly uniform (theta, phi) pairs on the sphere."""
    k = np.arange(n) + 0.5
    theta = np.arccos(1.0 - 2.0 * k / n)
    phi = (np.pi * (1.0 + math.sqrt(5.0)) * k) % (2.0 * np.pi)
    return np.stack([theta, phi], axis=1)


class _MeasuredEntropy:
    """Post-measurement conditional entropy of X for projective qubit measurements on Y.

    For the axis ``n`` the unnormalised conditional states are
    ``(rho_X ± sum_k n_k T_k) / 2`` with ``T_k = tr_Y[(I ⊗ sigma_k) rho]``.
    """

    def __init__(self, rho: np.ndarray, dx: int) -> None:
        t = rho.reshape(dx, 2, dx, 2)
        self.rho_x = np.einsum("iaja->ij", t)
        self.t = np.stack([np.einsum("iajb,ba->ij", t, p) for p in PAULIS])

    def __call__(self, theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
        n = np.stack(
            [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1
        )
        bloch = np.einsum("bk,kij->bij", n, self.t)
        out = np.zeros(theta.shape)
        for sign in (1.0, -1.0):
            sigma = 0.5 * (self.rho_x + sign * bloch)
            sigma = 0.5 * (sigma + np.conj(np.swapaxes(sigma, -1, -2)))
            w = np.clip(np.linalg.eigvalsh(sigma), 0.0, None)
            q = w.sum(axis=-1)
            with np.errstate(divide="ignore", invalid="ignore"):
                h = -np.sum(np.where(w > 0, w * np.log2(w), 0.0), axis=-1)
                h += np.where(q > 0, q * np.log2(q), 0.0)
            out += h
        return out


def _golden_section(f, lo: np.ndarray, hi: np.ndarray, tol: float, other: np.ndarray, axis: int):
    """Batched golden-section minimisation along one angle coordinate."""

    def call(x):
        return f(x, other) if axis == 0 else f(other, x)

    a, b = lo.copy(), hi.copy()
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = call(c), call(d)
    while np.max(b - a) > tol:
        left = fc < fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        new_c = b - INV_PHI * (b - a)
        new_d = a + INV_PHI * (b - a)
        c_next = np.where(left, new_c, d)
        d_next = np.where(left, c, new_d)
        fresh = np.where(left, new_c, new_d)
        ff = call(fresh)
        fc, fd = np.where(left, ff, fd), np.where(left, fc, ff)
        c, d = c_next, d_next
    x = 0.5 * (a + b)
    return x, call(x)


def minimize_measured_entropy(
    rho: np.ndarray, dx: int, n_starts: int = N_STARTS, tol: float = ANGLE_TOL
) -> tuple[float, tuple[float, float], bool]:
    """Minimum over Bloch axes of the post-measurement conditional entropy."""
    f = _MeasuredEntropy(rho, dx)
    start = fibonacci_sphere(n_starts)
    theta, phi = start[:, 0].copy(), start[:, 1].copy()
    best = f(theta, phi)
    width = np.full(n_starts, 0.5)
    converged = False
    for _ in range(MAX_ROUNDS):
        new_theta, _ = _golden_section(f, theta - width, theta + width, tol, phi, 0)
        new_phi, val = _golden_section(f, phi - width, phi + width, tol, new_theta, 1)
        # moves that do not lower the objective are discarded; on flat
        # landscapes this is what lets a start terminate
        improved = val < best - 1e-15
        step = np.where(improved, np.maximum(np.abs(new_theta - theta), np.abs(new_phi - phi)), 0.0)
        theta = np.where(improved, new_theta, theta)
        phi = np.where(improved, new_phi, phi)
        best = np.minimum(val, best)
        width = np.clip(4.0 * step, 4.0 * tol, 0.5)
        if np.all(step < tol):
            converged = True
            break
    k = int(np.argmin(best))
    th = float(theta[k] % (2 * np.pi))
    ph = float(phi[k] % (2 * np.pi))
    return float(best[k]), (th, ph), converged


def _bipartition(
    s: MultipartiteState, measured: int, unmeasured: Iterable[int] | int | None
) -> tuple[MultipartiteState, int]:
    """Marginal on (unmeasured, measured) and the local index of the measured party."""
    n = s.n_parties
    if not 0 <= measured < n:
        raise DimensionError(f"measured party {measured} out of range for {n} parties")
    if unmeasured is None:
        if n != 2:
            raise DimensionError("name the unmeasured party when the state has more than two parties")
        unmeasured = 1 - measured
    if isinstance(unmeasured, (int, np.integer)):
        unmeasured = (int(unmeasured),)
    unmeasured = tuple(sorted(set(unmeasured)))
    if measured in unmeasured or not unmeasured:
        raise DimensionError("measured and unmeasured parties must be disjoint and nonempty")
    if s.dims[measured] != 2:
        raise UnsupportedDimensionError(
            f"discord is implemented for a measured qubit only; party {measured} has dimension {s.dims[measured]}"
        )
    keep = sorted(unmeasured + (measured,))
    sub = s if len(keep) == n else s.marginal(keep)
    rest = [keep.index(k) for k in unmeasured]
    m_local = keep.index(measured)
    # reorder so the measured qubit is the last tensor factor
    sub = sub.permuted(rest + [m_local]) if m_local != len(keep) - 1 else sub
    return sub, len(keep) - 1


def discord(
    s: MultipartiteState,
    measured_party: int,
    unmeasured: Iterable[int] | int | None = None,
    n_starts: int = N_STARTS,
) -> DiscordResult:
    """Quantum discord of ``rho_{XY}`` with rank-1 projective measurement on ``Y``.

    ``D = I(X:Y) - max_n [S(X) - sum_m q_m S(X|m)]``. Because the maximum is
    approached from below, the returned value can only overshoot the true
    projective-measurement discord.
    """
    sub, y = _bipartition(s, measured_party, unmeasured)
    x = list(range(y))
    dx = math.prod(sub.dims[:y])
    cond_min, angles, converged = minimize_measured_entropy(sub.matrix, dx, n_starts)
    s_x = entropy(sub, x)
    s_y = entropy(sub, {y})
    s_xy = entropy(sub)
    mutual = s_x + s_y - s_xy
    classical = s_x - cond_min
    return DiscordResult(
        value=mutual - classical,
        optimizer_angles=angles,
        starts_used=n_starts,
        converged=converged,
        classical_correlation=classical,
    )


def _require_pure_qubit_triple(s: MultipartiteState) -> None:
    if s.dims != (2, 2, 2):
        raise UnsupportedDimensionError(f"three-qubit state required, got dims {list(s.dims)}")
    if not s.is_pure():
        raise StateError(f"purity invariant violated: tr(rho^2) = {s.purity():.12g}")


def koashi_winter_residual(s: MultipartiteState) -> float:
    """``E_AB - D_AC - S(A|C)`` for a pure three-qubit state (parties A, B, C = 0, 1, 2).

    ``D_AC`` is measured on C. The identity makes this vanish; a shortfall of
    the discord optimiser pushes it slightly negative.
    """
    _require_pure_qubit_triple(s)
    e_ab = eof_two_qubit(s.marginal([0, 1])).eof
    d_ac = discord(s, measured_party=2, unmeasured=0).value
    return e_ab - d_ac - conditional_entropy(s, {0}, {2})

