"""Multipartite density operators: construction, validation, sampling, noise."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Literal, Sequence

import numpy as np

from .linalg import (
    HERMITIAN_TOL,
    DimensionError,
    check_dims,
    hermitian_defect,
    kron,
    partial_trace,
    permute_systems,
    symmetrize,
)

TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-10
PURITY_TOL = 1e-9

NAMED_STATES = ("ghz", "w", "bell", "product_zero", "bell_times_pure")


class StateError(ValueError):
    """A density operator violates one of its invariants.

    The message always names the violated invariant.
    """


@dataclass(frozen=True, eq=False)
class MultipartiteState:
    """Density operator over an ordered list of parties.

    The matrix is validated and symmetrised once on construction; after that
    the instance is treated as immutable (the array is marked read-only).
    """

    matrix: np.ndarray
    dims: tuple[int, ...]
    pure: bool | None = None
    _fingerprint: str | None = field(default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        try:
            dims = check_dims(self.dims)
        except DimensionError as exc:
            raise StateError(f"dimension invariant violated: {exc}") from None
        m = np.array(self.matrix, dtype=complex)
        side = math.prod(dims)
        if m.shape != (side, side):
            raise StateError(
                f"dimension invariant violated: matrix shape {m.shape}, "
                f"dims {list(dims)} require ({side}, {side})"
            )
        defect = hermitian_defect(m)
        if defect > HERMITIAN_TOL:
            raise StateError(f"hermiticity invariant violated: max|M - M^dagger| = {defect:.3e}")
        m = symmetrize(m)
        tr = float(np.trace(m).real)
        if abs(tr - 1.0) > TRACE_TOL:
            raise StateError(f"trace invariant violated: trace = {tr:.12g}")
        lo = float(np.linalg.eigvalsh(m)[0])
        if lo < -POSITIVITY_TOL:
            raise StateError(f"positivity invariant violated: smallest eigenvalue {lo:.3e}")
        if self.pure:
            purity = float(np.real(np.vdot(m, m)))
            if purity < 1.0 - PURITY_TOL:
                raise StateError(f"purity invariant violated: tr(rho^2) = {purity:.12g}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    @property
    def side(self) -> int:
        return self.matrix.shape[0]

    def purity(self) -> float:
        return float(np.real(np.vdot(self.matrix, self.matrix)))

    def is_pure(self, tol: float = PURITY_TOL) -> bool:
        return self.purity() >= 1.0 - tol

    def reduced(self, keep: Iterable[int]) -> np.ndarray:
        return partial_trace(self.matrix, self.dims, keep)

    def marginal(self, keep: Iterable[int]) -> "MultipartiteState":
        keep = sorted(set(keep))
        return MultipartiteState(self.reduced(keep), tuple(self.dims[k] for k in keep))

    def permuted(self, perm: Sequence[int]) -> "MultipartiteState":
        m = permute_systems(self.matrix, self.dims, perm)
        return MultipartiteState(m, tuple(self.dims[p] for p in perm), self.pure)

    def fingerprint(self) -> str:
        """SHA-256 over the dimension list and the raw matrix bytes."""
        if self._fingerprint is None:
            h = hashlib.sha256()
            h.update(json.dumps(list(self.dims)).encode())
            h.update(np.ascontiguousarray(self.matrix).tobytes())
            object.__setattr__(self, "_fingerprint", h.hexdigest())
        return self._fingerprint


def from_vector(psi: np.ndarray, dims: Sequence[int]) -> MultipartiteState:
    psi = np.asarray(psi, dtype=complex).ravel()
    nrm = np.linalg.norm(psi)
    if nrm == 0:
        raise StateError("normalization invariant violated: zero vector")
    psi = psi / nrm
    return MultipartiteState(np.outer(psi, psi.conj()), tuple(dims), pure=True)


def basis_vector(index: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def named_state(name: str, dims: Sequence[int]) -> MultipartiteState:
    """Textbook states used for golden values.

    ``ghz`` and ``w`` require equal local dimensions; the d-level GHZ state is
    the uniform superposition of ``|j...j>``. ``bell`` is the maximally
    entangled state of the first two parties (any further parties are in
    ``|0>``), which is also what ``bell_times_pure`` means for three parties.
    """
    try:
        dims = check_dims(dims)
    except DimensionError as exc:
        raise StateError(f"dimension invariant violated: {exc}") from None
    n = len(dims)
    side = math.prod(dims)
    strides = [math.prod(dims[k + 1 :]) for k in range(n)]

    if name == "ghz":
        if len(set(dims)) != 1 or n < 2:
            raise StateError("ghz requires at least two parties of equal dimension")
        d = dims[0]
        psi = np.zeros(side, dtype=complex)
        for j in range(d):
            psi[sum(j * s for s in strides)] = 1.0
        return from_vector(psi, dims)

    if name == "w":
        if len(set(dims)) != 1 or n < 2:
            raise StateError("w requires at least two parties of equal dimension")
        psi = np.zeros(side, dtype=complex)
        for s in strides:
            psi[s] = 1.0
        return from_vector(psi, dims)

    if name == "product_zero":
        psi = np.zeros(side, dtype=complex)
        psi[0] = 1.0
        return from_vector(psi, dims)

    if name in ("bell", "bell_times_pure"):
        if n < 2 or dims[0] != dims[1]:
            raise StateError(f"{name} requires the first two parties to have equal dimension")
        if name == "bell_times_pure" and n < 3:
            raise StateError("bell_times_pure requires at least three parties")
        d = dims[0]
        pair = sum(kron(basis_vector(j, d), basis_vector(j, d)) for j in range(d))
        psi = pair
        for dk in dims[2:]:
            psi = np.kron(psi, basis_vector(0, dk))
        return from_vector(psi, dims)

    raise StateError(f"unknown named state {name!r}; choose from {', '.join(NAMED_STATES)}")


def werner_state(p: float) -> MultipartiteState:
    """Two-qubit ``p |Phi+><Phi+| + (1 - p) I/4``."""
    bell = named_state("bell", (2, 2)).matrix
    return MultipartiteState(p * bell + (1 - p) * np.eye(4) / 4, (2, 2))


def product_state(*states: MultipartiteState) -> MultipartiteState:
    m = states[0].matrix
    dims = list(states[0].dims)
    for s in states[1:]:
        m = np.kron(m, s.matrix)
        dims += s.dims
    pure = all(s.pure for s in states) or None
    return MultipartiteState(m, tuple(dims), pure)


def maximally_mixed(dims: Sequence[int]) -> MultipartiteState:
    side = math.prod(dims)
    return MultipartiteState(np.eye(side) / side, tuple(dims))


# -- random states -----------------------------------------------------------


@dataclass(frozen=True)
class RandomSpec:
    """Recipe for a seeded random state.

    ``ancilla_dim`` only matters for ``induced_mixed``; ``None`` selects the
    Hilbert-Schmidt measure (ancilla as large as the system).
    """

    dims: tuple[int, ...]
    kind: Literal["haar_pure", "induced_mixed"] = "haar_pure"
    seed: int = 0
    ancilla_dim: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "dims", check_dims(self.dims))
        if self.kind not in ("haar_pure", "induced_mixed"):
            raise ValueError(f"unknown sampling kind {self.kind!r}")
        if self.ancilla_dim is not None and self.ancilla_dim < 1:
            raise ValueError("ancilla_dim must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def stream_rng(master_seed: int, index: int | None = None) -> np.random.Generator:
    """Generator for sample ``index`` of a run seeded with ``master_seed``.

    Streams are derived from ``(master_seed, index)`` alone, so the value of
    a sample never depends on which worker drew it or in what order.
    """
    key = () if index is None else (int(index),)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(master_seed), spawn_key=key)))


def _gaussian_vector(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def haar_pure(dims: Sequence[int], rng: np.random.Generator) -> MultipartiteState:
    dims = check_dims(dims)
    return from_vector(_gaussian_vector(rng, math.prod(dims)), dims)


def induced_mixed(
    dims: Sequence[int], rng: np.random.Generator, ancilla_dim: int | None = None
) -> MultipartiteState:
    """Trace an ancilla out of a Haar-random pure state on system x ancilla."""
    dims = check_dims(dims)
    side = math.prod(dims)
    k = side if ancilla_dim is None else int(ancilla_dim)
    g = _gaussian_vector(rng, side * k).reshape(side, k)
    g /= np.linalg.norm(g)
    return MultipartiteState(g @ g.conj().T, dims)


def sample(spec: RandomSpec, index: int | None = None) -> MultipartiteState:
    """Draw the state described by ``spec``; deterministic in ``(seed, index)``."""
    rng = stream_rng(spec.seed, index)
    if spec.kind == "haar_pure":
        return haar_pure(spec.dims, rng)
    return induced_mixed(spec.dims, rng, spec.ancilla_dim)


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar unitary via QR of a Ginibre matrix with the phase fix."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


# -- local operations --------------------------------------------------------


def embed(op: np.ndarray, party: int, dims: Sequence[int]) -> np.ndarray:
    """``I ⊗ ... ⊗ op ⊗ ... ⊗ I`` with ``op`` acting on ``party``."""
    factors = [np.eye(d) for d in dims]
    factors[party] = op
    out = factors[0]
    for f in factors[1:]:
        out = np.kron(out, f)
    return out


def apply_local_unitary(s: MultipartiteState, party: int, u: np.ndarray) -> MultipartiteState:
    full = embed(u, party, s.dims)
    return MultipartiteState(full @ s.matrix @ full.conj().T, s.dims, s.pure)


def depolarize_party(s: MultipartiteState, party: int, p: float) -> MultipartiteState:
    """Replace ``party`` by the maximally mixed state with probability ``p``."""
    if not (0.0 <= p <= 1.0) or math.isnan(p):
        raise ValueError(f"depolarizing probability must lie in [0, 1], got {p}")
    if not 0 <= party < s.n_parties:
        raise DimensionError(f"party {party} out of range for {s.n_parties} parties")
    if p == 0:
        return s
    d = s.dims[party]
    rest = [k for k in range(s.n_parties) if k != party]
    noise = np.kron(np.eye(d) / d, partial_trace(s.matrix, s.dims, rest))
    # kron puts the fresh factor first; move it back to its slot
    order_dims = (d,) + tuple(s.dims[k] for k in rest)
    perm = [0] * s.n_parties
    for new_pos in range(s.n_parties):
        if new_pos == party:
            perm[new_pos] = 0
        else:
            perm[new_pos] = 1 + rest.index(new_pos)
    noise = permute_systems(noise, order_dims, perm)
    return MultipartiteState((1 - p) * s.matrix + p * noise, s.dims)


# -- file format -------------------------------------------------------------


def state_from_json(obj: dict) -> MultipartiteState:
    """Parse ``{"dims": [...], "form": "pure"|"mixed", "data": [[re, im], ...]}``."""
    try:
        dims = obj["dims"]
        form = obj["form"]
        data = obj["data"]
    except (KeyError, TypeError):
        raise StateError("schema invariant violated: need keys 'dims', 'form', 'data'") from None
    if not isinstance(dims, list) or not all(isinstance(d, int) for d in dims):
        raise StateError("schema invariant violated: 'dims' must be a list of integers")
    try:
        dims = check_dims(dims)
    except DimensionError as exc:
        raise StateError(f"dimension invariant violated: {exc}") from None
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError):
        raise StateError("schema invariant violated: 'data' must be a list of [re, im] pairs") from None
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise StateError("schema invariant violated: 'data' must be a list of [re, im] pairs")
    values = arr[:, 0] + 1j * arr[:, 1]
    side = math.prod(dims)
    if form == "pure":
        if values.size != side:
            raise StateError(
                f"dimension invariant violated: pure data needs {side} amplitudes, got {values.size}"
            )
        nrm = np.linalg.norm(values)
        if abs(nrm - 1.0) > 1e-9:
            raise StateError(f"normalization invariant violated: |psi| = {nrm:.12g}")
        return from_vector(values, dims)
    if form == "mixed":
        if values.size != side * side:
            raise StateError(
                f"dimension invariant violated: mixed data needs {side * side} entries, got {values.size}"
            )
        return MultipartiteState(values.reshape(side, side), dims)
    raise StateError(f"schema invariant violated: unknown form {form!r}")


def state_to_json(s: MultipartiteState, form: str = "mixed") -> dict:
    if form == "pure":
        w, v = np.linalg.eigh(s.matrix)
        if w[-1] < 1 - PURITY_TOL:
            raise StateError("purity invariant violated: cannot export a mixed state as pure")
        data = v[:, -1]
    else:
        data = s.matrix.ravel()
    return {
        "dims": list(s.dims),
        "form": form,
        "data": [[float(z.real), float(z.imag)] for z in data],
    }


def load_state(path: str | Path) -> MultipartiteState:
    try:
        obj = json.loads(Path(path).read_text())
    except OSError as exc:
        raise StateError(f"readable-file invariant violated: {exc}") from None
    except json.JSONDecodeError as exc:
        raise StateError(f"schema invariant violated: invalid JSON ({exc})") from None
    return state_from_json(obj)
