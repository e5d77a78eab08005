import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from densecoding.capacity import dc_quantum_part
from densecoding.entropy import entropy
from densecoding.linalg import partial_trace
from densecoding.states import (
    MultipartiteState,
    RandomSpec,
    StateError,
    apply_local_unitary,
    depolarize_party,
    haar_unitary,
    load_state,
    maximally_mixed,
    named_state,
    sample,
    state_from_json,
    state_to_json,
    stream_rng,
)


def ket(bits):
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1
    return v


def page_average_bits(m, n):
    """Average entanglement entropy of an m x n Haar pure state (m <= n), in bits."""
    nats = sum(1.0 / k for k in range(n + 1, m * n + 1)) - (m - 1) / (2 * n)
    return nats / math.log(2)


def test_page_formula_value():
    assert page_average_bits(2, 2) == pytest.approx((1 / 3 + 1 / 4 - 1 / 4) / math.log(2))
    assert page_average_bits(2, 2) == pytest.approx(0.4809, abs=5e-5)


def test_ghz_definition(ghz3):
    psi = (ket("000") + ket("111")) / math.sqrt(2)
    np.testing.assert_allclose(ghz3.matrix, np.outer(psi, psi.conj()), atol=1e-15)


def test_w_definition(w3):
    psi = (ket("001") + ket("010") + ket("100")) / math.sqrt(3)
    np.testing.assert_allclose(w3.matrix, np.outer(psi, psi.conj()), atol=1e-15)


def test_bell_times_pure(bell_pure):
    phi = (ket("00") + ket("11")) / math.sqrt(2)
    expected = np.kron(np.outer(phi, phi), np.diag([1, 0]))
    np.testing.assert_allclose(bell_pure.matrix, expected, atol=1e-15)


def test_qutrit_ghz():
    s = named_state("ghz", (3, 3, 3))
    assert s.is_pure()
    np.testing.assert_allclose(np.diag(s.reduced({0})).real, [1 / 3] * 3, atol=1e-15)


@pytest.mark.parametrize("name,dims", [("ghz", (2, 3)), ("w", (2, 2, 3)), ("bell", (2, 3)), ("nope", (2, 2))])
def test_named_state_rejects_profile(name, dims):
    with pytest.raises(StateError):
        named_state(name, dims)


def test_degenerate_dimension_rejected():
    with pytest.raises(StateError):
        MultipartiteState(np.eye(2) / 2, (2, 1))


@pytest.mark.parametrize(
    "matrix,fragment",
    [
        (np.eye(2), "trace invariant"),
        (np.array([[1, 1], [0, 0]]), "hermiticity invariant"),
        (np.diag([1.5, -0.5]), "positivity invariant"),
    ],
)
def test_validation_names_invariant(matrix, fragment):
    with pytest.raises(StateError, match=fragment):
        MultipartiteState(matrix, (2,))


def test_purity_hint_checked():
    with pytest.raises(StateError, match="purity"):
        MultipartiteState(np.eye(2) / 2, (2,), pure=True)


def test_state_is_immutable(bell):
    with pytest.raises(ValueError):
        bell.matrix[0, 0] = 0


@settings(max_examples=25, deadline=None)
@given(dims=st.lists(st.integers(2, 3), min_size=1, max_size=3), seed=st.integers(0, 2**64 - 1))
def test_haar_pure_normalized_and_deterministic(dims, seed):
    spec = RandomSpec(tuple(dims), "haar_pure", seed)
    a, b = sample(spec), sample(spec)
    assert abs(a.purity() - 1) <= 1e-12
    assert a.matrix.tobytes() == b.matrix.tobytes()


def test_sample_streams_are_counter_derived():
    spec = RandomSpec((2, 2, 2), "induced_mixed", 42)
    a = sample(spec, 3)
    assert a.matrix.tobytes() == sample(spec, 3).matrix.tobytes()
    assert a.matrix.tobytes() != sample(spec, 4).matrix.tobytes()


def test_induced_mixed_default_is_full_rank():
    s = sample(RandomSpec((2, 2), "induced_mixed", 1))
    assert np.linalg.eigvalsh(s.matrix)[0] > 1e-8


def test_induced_mixed_small_ancilla_rank():
    s = sample(RandomSpec((2, 3), "induced_mixed", 1, ancilla_dim=2))
    w = np.linalg.eigvalsh(s.matrix)
    assert np.sum(w > 1e-12) == 2


def test_random_spec_validation():
    with pytest.raises(ValueError):
        RandomSpec((2, 2), "induced_mixed", 0, ancilla_dim=0)
    with pytest.raises(ValueError):
        RandomSpec((2, 2), "thermal", 0)


def test_page_average_single_qubit_entropy():
    spec = RandomSpec((2, 2), "haar_pure", 9)
    values = [entropy(sample(spec, k), {0}) for k in range(10_000)]
    assert abs(np.mean(values) - page_average_bits(2, 2)) <= 0.01


def test_page_average_monte_carlo_oracle():
    # independent sampler: first column of a Haar unitary, entropy via Schmidt coefficients
    rng = stream_rng(11)
    vals = []
    for _ in range(4000):
        psi = haar_unitary(4, rng)[:, 0].reshape(2, 2)
        sv = np.linalg.svd(psi, compute_uv=False) ** 2
        sv = sv[sv > 0]
        vals.append(-np.sum(sv * np.log2(sv)))
    assert abs(np.mean(vals) - page_average_bits(2, 2)) <= 0.015


def test_depolarize_zero_is_identity(bell):
    assert depolarize_party(bell, 0, 0.0) is bell


def test_depolarize_full_on_bell(bell):
    out = depolarize_party(bell, 0, 1.0)
    np.testing.assert_allclose(out.matrix, np.eye(4) / 4, atol=1e-15)
    assert dc_quantum_part(bell, [0], 1) == pytest.approx(2, abs=1e-12)
    assert dc_quantum_part(out, [0], 1) == pytest.approx(0, abs=1e-12)


def test_depolarize_places_identity_at_party(rng):
    a = sample(RandomSpec((2,), "induced_mixed", 3)).matrix
    b = sample(RandomSpec((3,), "induced_mixed", 4)).matrix
    c = sample(RandomSpec((2,), "induced_mixed", 5)).matrix
    s = MultipartiteState(np.kron(np.kron(a, b), c), (2, 3, 2))
    out = depolarize_party(s, 1, 1.0)
    np.testing.assert_allclose(out.matrix, np.kron(np.kron(a, np.eye(3) / 3), c), atol=1e-14)


def test_depolarize_rejects_bad_probability(bell):
    for p in (-0.1, 1.1, float("nan")):
        with pytest.raises(ValueError):
            depolarize_party(bell, 0, p)


@settings(max_examples=30, deadline=None)
@given(
    seed=st.integers(0, 2**32 - 1),
    party=st.integers(0, 2),
    p=st.floats(0, 1),
    q=st.floats(0, 1),
)
def test_depolarize_properties(seed, party, p, q):
    s = sample(RandomSpec((2, 3, 2), "induced_mixed", seed))
    lo, hi = sorted((p, q))
    out_lo = depolarize_party(s, party, lo)
    out_hi = depolarize_party(s, party, hi)
    assert abs(np.trace(out_hi.matrix) - 1) <= 1e-10
    assert np.linalg.eigvalsh(out_hi.matrix)[0] >= -1e-10
    receiver = (party + 1) % 3
    assert dc_quantum_part(out_hi, [party], receiver) <= dc_quantum_part(out_lo, [party], receiver) + 1e-9


def test_local_unitary_preserves_state_validity(rng):
    s = sample(RandomSpec((2, 3), "induced_mixed", 8))
    out = apply_local_unitary(s, 1, haar_unitary(3, rng))
    np.testing.assert_allclose(np.linalg.eigvalsh(out.matrix), np.linalg.eigvalsh(s.matrix), atol=1e-12)


def test_json_roundtrip_mixed(tmp_path):
    s = sample(RandomSpec((2, 3), "induced_mixed", 2))
    path = tmp_path / "s.json"
    path.write_text(json.dumps(state_to_json(s)))
    back = load_state(path)
    assert back.dims == (2, 3)
    np.testing.assert_allclose(back.matrix, s.matrix, atol=1e-15)


def test_json_roundtrip_pure(ghz3):
    back = state_from_json(state_to_json(ghz3, form="pure"))
    np.testing.assert_allclose(back.matrix, ghz3.matrix, atol=1e-14)


@pytest.mark.parametrize(
    "obj,fragment",
    [
        ({"dims": [2], "form": "mixed", "data": [[1, 0], [0, 0], [0, 0], [1, 0]]}, "trace invariant"),
        ({"dims": [2, 2], "form": "pure", "data": [[1, 0]]}, "dimension invariant"),
        ({"dims": [2], "form": "pure", "data": [[1, 0], [1, 0]]}, "normalization invariant"),
        ({"dims": [2], "form": "weird", "data": [[1, 0], [0, 0]]}, "schema invariant"),
        ({"dims": [2]}, "schema invariant"),
        ({"dims": [1, 2], "form": "pure", "data": [[1, 0], [0, 0]]}, "dimension invariant"),
    ],
)
def test_json_validation(obj, fragment):
    with pytest.raises(StateError, match=fragment):
        state_from_json(obj)


def test_maximally_mixed():
    s = maximally_mixed((2, 3))
    assert entropy(s) == pytest.approx(math.log2(6))
    np.testing.assert_allclose(partial_trace(s.matrix, s.dims, {1}), np.eye(3) / 3)
