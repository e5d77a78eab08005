"""Dense coding capacities and the Holevo-quantity oracle.

The closed form for senders ``S`` and receiver ``r`` is

    C = sum_{i in S} log2 d_i + S(rho_r) - S(rho_{S ∪ r})

with every other party traced out first. ``holevo_oracle`` recomputes the
same number the long way: it builds the ensemble produced by uniformly
random Heisenberg-Weyl encodings on every sender and evaluates its Holevo
quantity directly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .entropy import entropy, von_neumann
from .linalg import DimensionError
from .states import MultipartiteState, embed

ADVANTAGE_EPS = 1e-9
ORACLE_MAX_SIDE = 64


@dataclass(frozen=True)
class CapacityResult:
    senders: tuple[int, ...]
    receiver: int
    quantum_part: float
    classical_floor: float
    full_capacity: float
    advantage: bool

    def as_dict(self) -> dict:
        return {
            "senders": list(self.senders),
            "receiver": self.receiver,
            "quantum_part": self.quantum_part,
            "classical_floor": self.classical_floor,
            "full_capacity": self.full_capacity,
            "advantage": self.advantage,
        }


def _roles(s: MultipartiteState, senders: Iterable[int], receiver: int) -> tuple[tuple[int, ...], int]:
    senders = tuple(int(k) for k in senders)
    receiver = int(receiver)
    n = s.n_parties
    if not senders:
        raise DimensionError("at least one sender is required")
    if len(set(senders)) != len(senders):
        raise DimensionError(f"duplicate senders {list(senders)}")
    for k in senders + (receiver,):
        if not 0 <= k < n:
            raise DimensionError(f"party {k} out of range for {n} parties")
    if receiver in senders:
        raise DimensionError(f"receiver {receiver} cannot also be a sender")
    return senders, receiver


def classical_floor(s: MultipartiteState, senders: Iterable[int]) -> float:
    return float(sum(math.log2(s.dims[k]) for k in senders))


def dc_quantum_part(s: MultipartiteState, senders: Iterable[int], receiver: int) -> float:
    """Quantum part of the (multi-port) dense coding capacity, in bits."""
    senders, receiver = _roles(s, senders, receiver)
    return (
        classical_floor(s, senders)
        + entropy(s, {receiver})
        - entropy(s, set(senders) | {receiver})
    )


def dc_capacity(s: MultipartiteState, senders: Iterable[int], receiver: int) -> CapacityResult:
    senders, receiver = _roles(s, senders, receiver)
    q = dc_quantum_part(s, senders, receiver)
    floor = classical_floor(s, senders)
    return CapacityResult(
        senders=senders,
        receiver=receiver,
        quantum_part=q,
        classical_floor=floor,
        full_capacity=max(q, floor),
        advantage=q > floor + ADVANTAGE_EPS,
    )


def cyclic_groups(n: int) -> list[tuple[tuple[int, ...], int]]:
    """Sender blocks of a ring of ``n`` parties.

    Group ``j`` has senders ``j, ..., j+n-3`` and receiver ``j+n-2`` (mod n);
    party ``j+n-1`` sits out.

    >>> cyclic_groups(3)
    [((0,), 1), ((1,), 2), ((2,), 0)]
    """
    if n < 3:
        raise DimensionError(f"cyclic sender groups need at least 3 parties, got {n}")
    return [
        (tuple((j + k) % n for k in range(n - 2)), (j + n - 2) % n)
        for j in range(n)
    ]


# -- Holevo oracle -------------------------------------------------------------


@dataclass(frozen=True)
class Ensemble:
    """Finite ensemble ``{(p_i, rho_i)}`` of states on one shared profile."""

    items: tuple[tuple[float, MultipartiteState], ...]

    def __post_init__(self) -> None:
        items = tuple((float(p), st) for p, st in self.items)
        if not items:
            raise ValueError("an ensemble needs at least one member")
        probs = np.array([p for p, _ in items])
        if np.any(probs < 0) or not np.all(np.isfinite(probs)):
            raise ValueError("ensemble probabilities must be nonnegative and finite")
        if abs(probs.sum() - 1.0) > 1e-10:
            raise ValueError(f"ensemble probabilities sum to {probs.sum():.12g}, not 1")
        dims = {st.dims for _, st in items}
        if len(dims) != 1:
            raise ValueError(f"ensemble members disagree on dims: {sorted(dims)}")
        object.__setattr__(self, "items", items)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.items[0][1].dims

    def average(self) -> np.ndarray:
        return sum(p * st.matrix for p, st in self.items)


def holevo_chi(e: Ensemble) -> float:
    """S(average state) - sum_i p_i S(rho_i), in bits."""
    return von_neumann(e.average()) - sum(p * von_neumann(st.matrix) for p, st in e.items if p > 0)


def shift_operator(d: int) -> np.ndarray:
    """X|j> = |j+1 mod d>."""
    return np.roll(np.eye(d, dtype=complex), 1, axis=0)


def clock_operator(d: int) -> np.ndarray:
    """Z|j> = omega^j |j> with omega = exp(2 pi i / d)."""
    return np.diag(np.exp(2j * np.pi * np.arange(d) / d))


def weyl_operators(d: int) -> list[np.ndarray]:
    """The d**2 unitaries X^a Z^b, ordered by (a, b)."""
    x, z = shift_operator(d), clock_operator(d)
    return [
        np.linalg.matrix_power(x, a) @ np.linalg.matrix_power(z, b)
        for a in range(d)
        for b in range(d)
    ]


def weyl_encoding_ensemble(s: MultipartiteState, sender: int | Sequence[int]) -> Ensemble:
    """Uniform ensemble of ``s`` under all Weyl encodings on the sender(s).

    Several senders encode independently, so the ensemble is indexed by
    tuples of Weyl operators, one per sender.
    """
    senders = (sender,) if isinstance(sender, (int, np.integer)) else tuple(sender)
    for k in senders:
        if not 0 <= k < s.n_parties:
            raise DimensionError(f"party {k} out of range for {s.n_parties} parties")
    if len(set(senders)) != len(senders):
        raise DimensionError(f"duplicate senders {list(senders)}")
    if s.side > ORACLE_MAX_SIDE:
        raise DimensionError(
            f"Holevo oracle limited to total dimension {ORACLE_MAX_SIDE}, got {s.side}"
        )
    local = [[embed(u, k, s.dims) for u in weyl_operators(s.dims[k])] for k in senders]
    members = []
    for combo in itertools.product(*local):
        u = combo[0]
        for extra in combo[1:]:
            u = u @ extra
        members.append(u @ s.matrix @ u.conj().T)
    p = 1.0 / len(members)
    return Ensemble(tuple((p, MultipartiteState(m, s.dims)) for m in members))


def holevo_oracle(s: MultipartiteState, senders: Iterable[int], receiver: int) -> float:
    """Holevo quantity of the Weyl-encoded ensemble on ``rho_{senders ∪ receiver}``."""
    senders, receiver = _roles(s, senders, receiver)
    keep = sorted(set(senders) | {receiver})
    sub = s.marginal(keep)
    local_senders = [keep.index(k) for k in senders]
    return holevo_chi(weyl_encoding_ensemble(sub, local_senders))
