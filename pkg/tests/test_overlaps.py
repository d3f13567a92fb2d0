import numpy as np
import pytest

from cqff import EstimatorConfig, HamiltonianSpec, build_moment_set, builtin
from cqff.backend import prepare_basis_state, prepare_layered_random_state
from cqff.errors import DimensionError
from cqff.overlaps import ExpectationCache, assemble, assemble_D, assemble_E, assemble_observable
from cqff.pauli import parse_label

from conftest import case_state, kron_matrix


def dense_basis(ms, phi):
    # oracle: columns built from Kronecker matrices, not from apply_pauli
    return np.column_stack([kron_matrix(p.label()) @ phi for p in ms.ops])


def test_single_state_e():
    ms = build_moment_set(builtin("H3"), 0)
    np.testing.assert_array_equal(assemble_E(ms, prepare_basis_state("10")), [[1]])


def test_h3_k1_e_and_d():
    ms = build_moment_set(builtin("H3"), 1)
    phi = prepare_basis_state("10")
    E = assemble_E(ms, phi)
    # XX|10> = YY|10> = |01>, so the two level-1 states coincide exactly
    np.testing.assert_allclose(E, [[1, 0, 0], [0, 1, 1], [0, 1, 1]], atol=1e-15)
    B = dense_basis(ms, phi)
    np.testing.assert_allclose(E, B.conj().T @ B, atol=1e-15)
    assert np.linalg.matrix_rank(E) == 2
    D = assemble_D(ms, builtin("H3"), phi)
    assert D[0, 0] == 0


def test_identity_hamiltonian_gives_scaled_e():
    h = builtin("H1", 2)
    ms = build_moment_set(h, 1)
    phi = prepare_layered_random_state(2, rng_seed=3)
    c = HamiltonianSpec.from_labels([(2.5, "II")], 2)
    np.testing.assert_allclose(assemble_D(ms, c, phi), 2.5 * assemble_E(ms, phi), atol=1e-14)
    np.testing.assert_allclose(assemble_observable(ms, HamiltonianSpec.from_labels([(1, "II")], 2), phi),
                               assemble_E(ms, phi), atol=1e-15)


def test_z1_on_basis_state():
    ms = build_moment_set(builtin("H3"), 0)
    z1 = HamiltonianSpec.from_labels([(1, "Z1")], 2)
    np.testing.assert_array_equal(assemble_observable(ms, z1, prepare_basis_state("10")), [[-1]])


@pytest.mark.parametrize("seed", range(3))
def test_exact_matches_dense_oracle(builtin_case, seed):
    h, K, name = builtin_case
    phi = case_state(name, h.n_qubits, seed)
    ms = build_moment_set(h, K)
    om = assemble(ms, h, phi)
    B = dense_basis(ms, phi)
    hm = sum(c * kron_matrix(p.label()) for c, p in h.terms)
    np.testing.assert_allclose(om.E, B.conj().T @ B, atol=1e-12, rtol=0)
    np.testing.assert_allclose(om.D, B.conj().T @ hm @ B, atol=1e-12, rtol=0)
    obs = HamiltonianSpec.from_labels([(1, "Y2")], h.n_qubits)
    np.testing.assert_allclose(assemble_observable(ms, obs, phi), B.conj().T @ kron_matrix(obs.strings[0].label()) @ B,
                               atol=1e-12, rtol=0)
    assert np.linalg.eigvalsh(om.E).min() >= -1e-10


def test_cache_calls_distinct_strings(builtin_case):
    h, K, name = builtin_case
    phi = case_state(name, h.n_qubits, 0)
    ms = build_moment_set(h, K)
    om = assemble(ms, h, phi)
    L, r = len(ms), len(h)
    assert om.meta["backend_calls"] < 2 * L**2 + r * L**2
    # one call per distinct non-identity string among all products used
    strings = set()
    for p in ms.ops:
        for q in ms.ops:
            strings.add((p * q).label())
            for u in h.strings:
                strings.add((p * u * q).label())
    strings.discard("I" * h.n_qubits)
    assert om.meta["backend_calls"] == len(strings)


def test_sampled_is_exactly_hermitian_with_unit_diagonal():
    h = builtin("H1", 3)
    ms = build_moment_set(h, 2)
    phi = prepare_layered_random_state(3, rng_seed=0)
    om = assemble(ms, h, phi, EstimatorConfig("sampled", 1024, 7))
    assert np.array_equal(om.E, om.E.conj().T)
    assert np.array_equal(om.D, om.D.conj().T)
    assert np.all(om.E.diagonal() == 1)
    assert om.meta["estimator"] == {"mode": "sampled", "shots": 1024, "seed": 7}


def test_sampled_converges_with_shots():
    h = builtin("H1", 2)
    ms = build_moment_set(h, 1)
    phi = prepare_layered_random_state(2, rng_seed=5)
    exact = assemble(ms, h, phi)
    errs = []
    for shots in (256, 4096, 65536):
        sq = [np.mean(np.abs(assemble(ms, h, phi, EstimatorConfig("sampled", shots, s)).E - exact.E) ** 2)
              for s in range(30)]
        errs.append(np.sqrt(np.mean(sq)))
    # each step is 16x more shots, so the RMS error should shrink by about 4
    for a, b in zip(errs, errs[1:]):
        assert 3.0 < a / b < 5.3


def test_shared_cache_across_assemblies():
    h = builtin("H2", 4)
    ms = build_moment_set(h, 2)
    cache = ExpectationCache(prepare_layered_random_state(4, rng_seed=1))
    assemble_E(ms, cache=cache)
    calls = cache.calls
    assemble_E(ms, cache=cache)
    assert cache.calls == calls


def test_dimension_mismatch():
    ms = build_moment_set(builtin("H3"), 1)
    with pytest.raises(DimensionError):
        assemble_D(ms, builtin("H1", 3), prepare_basis_state("10"))


def test_phase_bookkeeping_against_products():
    # E_ij must follow from the exact phase of P_i P_j, not just the canonical string
    ms = build_moment_set(builtin("H1", 3), 1)
    phi = prepare_layered_random_state(3, rng_seed=6)
    E = assemble_E(ms, phi)
    for i, p in enumerate(ms.ops):
        for j, q in enumerate(ms.ops):
            prod = p * q
            want = prod.phase * np.vdot(phi, kron_matrix(prod.label()) @ phi)
            assert abs(E[i, j] - want) < 1e-12
    assert parse_label("XXI") in ms.ops
