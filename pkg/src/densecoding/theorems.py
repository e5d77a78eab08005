"""Executable checks of the dense coding exclusion and monogamy relations.

Every check takes a state and returns a :class:`TheoremVerdict`. Roles are
positional: party 0 is the distinguished party (the sole sender for the
exclusion checks, the sole receiver for receiver monogamy). Use
``MultipartiteState.permuted`` to relabel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .capacity import cyclic_groups, dc_capacity, dc_quantum_part
from .correlations import discord, eof_two_qubit
from .entropy import entropy
from .linalg import DimensionError
from .states import MultipartiteState, StateError, depolarize_party

SLACK_TOL = 1e-8
PREMISE_TOL = 1e-8
MAXENT_TOL = 1e-6
MONOTONE_TOL = 1e-9
CORRELATION_TOL = 2e-3
NEAR_BOUNDARY = 1e-6

THEOREM_IDS = ("T1", "C1", "T2", "C2", "NOISE", "T3", "C3", "C4", "C5", "T4")

DEFAULT_NOISE_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)


@dataclass(frozen=True)
class TheoremVerdict:
    theorem_id: str
    lhs: float
    rhs: float
    holds: bool
    applicable: bool = True
    state_fingerprint: str = ""
    details: dict = field(default_factory=dict, compare=False)

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs


def _parties(s: MultipartiteState, n: int | None = None, at_least: int | None = None) -> None:
    if n is not None and s.n_parties != n:
        raise DimensionError(f"expected exactly {n} parties, got {s.n_parties}")
    if at_least is not None and s.n_parties < at_least:
        raise DimensionError(f"expected at least {at_least} parties, got {s.n_parties}")


def _require_pure(s: MultipartiteState) -> None:
    if not s.is_pure():
        raise StateError(f"purity invariant violated: tr(rho^2) = {s.purity():.12g}")


def check_exclusion(s: MultipartiteState) -> TheoremVerdict:
    """At most one of A->B, A->C has a quantum advantage; C_AB + C_AC <= 2 log2 d_A."""
    _parties(s, 3)
    ab = dc_capacity(s, [0], 1)
    ac = dc_capacity(s, [0], 2)
    lhs = ab.quantum_part + ac.quantum_part
    rhs = 2 * math.log2(s.dims[0])
    both = ab.advantage and ac.advantage
    return TheoremVerdict(
        "T1",
        lhs,
        rhs,
        holds=(rhs - lhs >= -SLACK_TOL) and not both,
        state_fingerprint=s.fingerprint(),
        details={
            "C_AB": ab.quantum_part,
            "C_AC": ac.quantum_part,
            "advantages": int(ab.advantage) + int(ac.advantage),
        },
    )


def check_cor1(s: MultipartiteState) -> TheoremVerdict:
    """Full capacities: Cbar_AB + Cbar_AC <= 3 log2 d_A."""
    _parties(s, 3)
    ab = dc_capacity(s, [0], 1)
    ac = dc_capacity(s, [0], 2)
    lhs = ab.full_capacity + ac.full_capacity
    rhs = 3 * math.log2(s.dims[0])
    return TheoremVerdict(
        "C1", lhs, rhs, holds=rhs - lhs >= -SLACK_TOL, state_fingerprint=s.fingerprint()
    )


def _pair_capacities(s: MultipartiteState):
    return [dc_capacity(s, [0], i) for i in range(1, s.n_parties)]


def check_t2(s: MultipartiteState) -> TheoremVerdict:
    """Among rho_{A B_i}, at most one pair has a quantum advantage.

    The record also carries the summed full capacities against the
    ``(N+1) log2 d_A`` bound (see :func:`check_cor2`).
    """
    _parties(s, at_least=3)
    caps = _pair_capacities(s)
    count = sum(c.advantage for c in caps)
    full = sum(c.full_capacity for c in caps)
    bound = s.n_parties * math.log2(s.dims[0])
    return TheoremVerdict(
        "T2",
        float(count),
        1.0,
        holds=count <= 1,
        state_fingerprint=s.fingerprint(),
        details={
            "quantum_parts": [c.quantum_part for c in caps],
            "full_sum": full,
            "full_bound": bound,
            "full_sum_holds": bound - full >= -SLACK_TOL,
        },
    )


def check_cor2(s: MultipartiteState) -> TheoremVerdict:
    """Sum over receivers of full capacities from A is at most (N+1) log2 d_A."""
    _parties(s, at_least=3)
    caps = _pair_capacities(s)
    lhs = sum(c.full_capacity for c in caps)
    rhs = s.n_parties * math.log2(s.dims[0])
    return TheoremVerdict(
        "C2", lhs, rhs, holds=rhs - lhs >= -SLACK_TOL, state_fingerprint=s.fingerprint()
    )


def check_receiver_monogamy(s: MultipartiteState) -> TheoremVerdict:
    """C_BA + C_CA <= C_{BC:A} with A = party 0 receiving."""
    _parties(s, 3)
    ba = dc_quantum_part(s, [1], 0)
    ca = dc_quantum_part(s, [2], 0)
    bca = dc_quantum_part(s, [1, 2], 0)
    return TheoremVerdict(
        "T3",
        ba + ca,
        bca,
        holds=bca - (ba + ca) >= -SLACK_TOL,
        state_fingerprint=s.fingerprint(),
        details={"C_BA": ba, "C_CA": ca},
    )


def _sender_monogamy_premise(s: MultipartiteState) -> tuple[float, float]:
    lhs = dc_quantum_part(s, [0], 1) + dc_quantum_part(s, [0], 2)
    # A sends to the joint BC pair: log2 d_A + S(BC) - S(ABC)
    rhs = math.log2(s.dims[0]) + entropy(s, {1, 2}) - entropy(s)
    return lhs, rhs


def check_cor3(s: MultipartiteState) -> TheoremVerdict:
    """For pure states, C_AB + C_AC <= C_{A:BC} forces S(rho_A) = log2 d_A.

    ``applicable`` records whether the premise held (within 1e-8); states
    within 1e-6 of the premise boundary are flagged in ``details``.
    """
    _parties(s, 3)
    _require_pure(s)
    lhs, rhs = _sender_monogamy_premise(s)
    applicable = rhs - lhs >= -PREMISE_TOL
    gap = math.log2(s.dims[0]) - entropy(s, {0})
    holds = (not applicable) or abs(gap) <= MAXENT_TOL
    return TheoremVerdict(
        "C3",
        lhs,
        rhs,
        holds=holds,
        applicable=applicable,
        state_fingerprint=s.fingerprint(),
        details={"entropy_gap": gap, "near_boundary": abs(rhs - lhs) <= NEAR_BOUNDARY},
    )


def check_cor4(s: MultipartiteState) -> TheoremVerdict:
    """If C_AB + C_AC <= C_{A:BC}, then log2 d_A - S(A) <= S(A)+S(B)+S(C) - S(ABC)."""
    _parties(s, 3)
    p_lhs, p_rhs = _sender_monogamy_premise(s)
    applicable = p_rhs - p_lhs >= -PREMISE_TOL
    s_a = entropy(s, {0})
    lhs = math.log2(s.dims[0]) - s_a
    rhs = s_a + entropy(s, {1}) + entropy(s, {2}) - entropy(s)
    holds = (not applicable) or rhs - lhs >= -SLACK_TOL
    return TheoremVerdict(
        "C4",
        lhs,
        rhs,
        holds=holds,
        applicable=applicable,
        state_fingerprint=s.fingerprint(),
        details={"premise_lhs": p_lhs, "premise_rhs": p_rhs},
    )


def check_cor5(s: MultipartiteState) -> TheoremVerdict:
    """Pure three qubits: C_AB + C_AC >= D_AB + D_AC, and D_AB + D_AC = E_AB + E_AC.

    Discords are measured on the receiver (B for D_AB, C for D_AC); both
    comparisons use the one-sided optimiser tolerance 2e-3.
    """
    _parties(s, 3)
    if s.dims != (2, 2, 2):
        raise StateError(f"dimension invariant violated: three qubits required, got {list(s.dims)}")
    _require_pure(s)
    c_sum = dc_quantum_part(s, [0], 1) + dc_quantum_part(s, [0], 2)
    d_ab = discord(s, measured_party=1, unmeasured=0).value
    d_ac = discord(s, measured_party=2, unmeasured=0).value
    e_ab = eof_two_qubit(s.marginal([0, 1])).eof
    e_ac = eof_two_qubit(s.marginal([0, 2])).eof
    d_sum = d_ab + d_ac
    e_sum = e_ab + e_ac
    holds = c_sum >= d_sum - CORRELATION_TOL and abs(d_sum - e_sum) <= CORRELATION_TOL
    return TheoremVerdict(
        "C5",
        d_sum,
        c_sum,
        holds=holds,
        state_fingerprint=s.fingerprint(),
        details={"D_AB": d_ab, "D_AC": d_ac, "E_AB": e_ab, "E_AC": e_ac},
    )


def check_multiport_monogamy(s: MultipartiteState) -> TheoremVerdict:
    """Sum of cyclic multi-port quantum parts <= (N-2) sum_j log2 d_j.

    Also requires that at most N-1 of the N sender groups show an advantage.
    """
    _parties(s, at_least=3)
    n = s.n_parties
    caps = [dc_capacity(s, senders, receiver) for senders, receiver in cyclic_groups(n)]
    lhs = sum(c.quantum_part for c in caps)
    rhs = (n - 2) * sum(math.log2(d) for d in s.dims)
    count = sum(c.advantage for c in caps)
    return TheoremVerdict(
        "T4",
        lhs,
        rhs,
        holds=rhs - lhs >= -SLACK_TOL and count <= n - 1,
        state_fingerprint=s.fingerprint(),
        details={"advantages": count, "quantum_parts": [c.quantum_part for c in caps]},
    )


def check_noise_monotonicity(
    s: MultipartiteState, p_grid: Sequence[float] = DEFAULT_NOISE_GRID
) -> TheoremVerdict:
    """Depolarise the sender (party 0) along ``p_grid``.

    Holds when exclusion passes at every grid point and both C_AB and C_AC
    never increase with p (beyond 1e-9). ``lhs`` is the largest quantum-part
    sum along the grid, ``rhs`` the exclusion bound.
    """
    _parties(s, 3)
    grid = [float(p) for p in p_grid]
    if not grid or any(not 0.0 <= p <= 1.0 for p in grid) or grid != sorted(grid):
        raise ValueError(f"noise grid must be ascending values in [0, 1], got {grid}")
    verdicts = [check_exclusion(depolarize_party(s, 0, p)) for p in grid]
    c_ab = [v.details["C_AB"] for v in verdicts]
    c_ac = [v.details["C_AC"] for v in verdicts]
    rises = [
        max(c_ab[k + 1] - c_ab[k], c_ac[k + 1] - c_ac[k]) for k in range(len(grid) - 1)
    ]
    worst_rise = max(rises, default=0.0)
    monotone = worst_rise <= MONOTONE_TOL
    return TheoremVerdict(
        "NOISE",
        max(v.lhs for v in verdicts),
        verdicts[0].rhs,
        holds=monotone and all(v.holds for v in verdicts),
        state_fingerprint=s.fingerprint(),
        details={"grid": grid, "C_AB": c_ab, "C_AC": c_ac, "worst_rise": worst_rise},
    )


CHECKS: dict[str, Callable[[MultipartiteState], TheoremVerdict]] = {
    "T1": check_exclusion,
    "C1": check_cor1,
    "T2": check_t2,
    "C2": check_cor2,
    "NOISE": check_noise_monotonicity,
    "T3": check_receiver_monogamy,
    "C3": check_cor3,
    "C4": check_cor4,
    "C5": check_cor5,
    "T4": check_multiport_monogamy,
}


def requirements(theorem_id: str) -> dict:
    """Structural constraints a state must meet for ``theorem_id``."""
    return {
        "T1": {"parties": 3},
        "C1": {"parties": 3},
        "NOISE": {"parties": 3},
        "T3": {"parties": 3},
        "C4": {"parties": 3},
        "C3": {"parties": 3, "pure": True},
        "C5": {"parties": 3, "pure": True, "qubits": True},
        "T2": {"min_parties": 3},
        "C2": {"min_parties": 3},
        "T4": {"min_parties": 3},
    }[theorem_id]


def compatibility_error(theorem_id: str, dims: Sequence[int], pure: bool) -> str | None:
    """Reason why ``theorem_id`` cannot run on states of this shape, else None."""
    if theorem_id not in CHECKS:
        return f"unknown theorem id {theorem_id!r}; choose from {', '.join(THEOREM_IDS)}"
    req = requirements(theorem_id)
    n = len(dims)
    if "parties" in req and n != req["parties"]:
        return f"{theorem_id} needs exactly {req['parties']} parties, got {n}"
    if "min_parties" in req and n < req["min_parties"]:
        return f"{theorem_id} needs at least {req['min_parties']} parties, got {n}"
    if req.get("pure") and not pure:
        return f"{theorem_id} needs pure states"
    if req.get("qubits") and any(d != 2 for d in dims):
        return f"{theorem_id} needs all parties to be qubits"
    return None


def run_check(theorem_id: str, s: MultipartiteState) -> TheoremVerdict:
    return CHECKS[theorem_id](s)
