"""Von Neumann entropies (in bits) of multipartite marginals."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .linalg import DimensionError, eigvalsh
from .states import MultipartiteState, StateError

CLAMP_TOL = 1e-10


@dataclass(frozen=True)
class EntropyReport:
    subsystem: frozenset[int]
    value: float


def spectrum_entropy(eigenvalues: np.ndarray) -> float:
    """Shannon entropy in bits of a spectrum, with tiny negatives clamped to 0."""
    w = np.asarray(eigenvalues, dtype=float)
    if w.size and w.min() < -CLAMP_TOL:
        raise StateError(f"positivity invariant violated: eigenvalue {w.min():.3e}")
    w = w[w > 0]
    return float(max(-np.sum(w * np.log2(w)), 0.0))


def von_neumann(m: np.ndarray) -> float:
    """Entropy in bits of a (possibly sub-normalised) density matrix."""
    return spectrum_entropy(eigvalsh(m))


def _subset(s: MultipartiteState, parties: Iterable[int], name: str = "keep") -> frozenset[int]:
    sub = frozenset(int(k) for k in parties)
    if not sub:
        raise DimensionError(f"{name} must be a nonempty set of parties")
    if min(sub) < 0 or max(sub) >= s.n_parties:
        raise DimensionError(f"{name}={sorted(sub)} out of range for {s.n_parties} parties")
    return sub


def entropy(s: MultipartiteState, keep: Iterable[int] | None = None) -> float:
    """S(rho_keep) in bits; ``keep=None`` means the whole state."""
    keep = range(s.n_parties) if keep is None else keep
    return von_neumann(s.reduced(_subset(s, keep)))


def entropy_report(s: MultipartiteState, keep: Iterable[int]) -> EntropyReport:
    sub = _subset(s, keep)
    return EntropyReport(sub, entropy(s, sub))


def conditional_entropy(
    s: MultipartiteState, target: Iterable[int], condition: Iterable[int]
) -> float:
    """S(target | condition) = S(target ∪ condition) - S(condition); may be negative."""
    t = _subset(s, target, "target")
    c = _subset(s, condition, "condition")
    if t & c:
        raise DimensionError(f"target {sorted(t)} and condition {sorted(c)} overlap")
    return entropy(s, t | c) - entropy(s, c)


def mutual_information(s: MultipartiteState, x: Iterable[int], y: Iterable[int]) -> float:
    a = _subset(s, x, "x")
    b = _subset(s, y, "y")
    if a & b:
        raise DimensionError(f"x {sorted(a)} and y {sorted(b)} overlap")
    return entropy(s, a) + entropy(s, b) - entropy(s, a | b)


def ssa_slack(
    s: MultipartiteState, a: Iterable[int], b: Iterable[int], c: Iterable[int]
) -> float:
    """S(B) + S(C) - S(AB) - S(AC); strong subadditivity makes this <= 0."""
    sa = _subset(s, a, "a")
    sb = _subset(s, b, "b")
    sc = _subset(s, c, "c")
    if sa & sb or sa & sc or sb & sc:
        raise DimensionError("a, b and c must be pairwise disjoint")
    return entropy(s, sb) + entropy(s, sc) - entropy(s, sa | sb) - entropy(s, sa | sc)


def cyclic_window(n: int, j: int, size: int) -> tuple[int, ...]:
    return tuple((j + k) % n for k in range(size))


def q_functional(s: MultipartiteState) -> float:
    """Sum of single-party entropies minus entropies of the N cyclic (N-1)-blocks.

    Block ``j`` holds parties ``j, ..., j+N-2`` (mod N). The value is at most
    zero for every state and vanishes on pure states.
    """
    n = s.n_parties
    if n < 3:
        raise DimensionError(f"the cyclic functional needs at least 3 parties, got {n}")
    singles = sum(entropy(s, {j}) for j in range(n))
    blocks = sum(entropy(s, cyclic_window(n, j, n - 1)) for j in range(n))
    return singles - blocks
