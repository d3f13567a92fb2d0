import numpy as np
import pytest

from cqff import EstimatorConfig, HamiltonianSpec, builtin, exact_evolve, expectation, xy_pair
from cqff.backend import apply_pauli, prepare_basis_state, prepare_layered_random_state
from cqff.errors import ContractError, DimensionError
from cqff.pauli import PauliString, parse_label

from conftest import expm_herm, kron_matrix


def sampled(shots=8192, seed=0):
    return EstimatorConfig("sampled", shots, seed)


def test_zero_layers_is_all_zeros():
    s = prepare_layered_random_state(3, n_layers=0, rng_seed=5)
    assert s[0] == 1 and np.count_nonzero(s) == 1


def test_layered_state_deterministic_and_normalized():
    a = prepare_layered_random_state(2, rng_seed=11)
    b = prepare_layered_random_state(2, rng_seed=11)
    assert np.array_equal(a, b)
    assert abs(np.linalg.norm(a) - 1) < 1e-12
    assert not np.array_equal(a, prepare_layered_random_state(2, rng_seed=12))


@pytest.mark.parametrize("bits,index", [("10", 2), ("00", 0), ("101", 5)])
def test_basis_state(bits, index):
    s = prepare_basis_state(bits)
    assert s.shape == (2 ** len(bits),) and s[index] == 1 and np.count_nonzero(s) == 1


def test_basis_state_rejects_bad_chars():
    with pytest.raises(ValueError):
        prepare_basis_state("1a")


def test_apply_pauli_examples():
    np.testing.assert_array_equal(apply_pauli(parse_label("X"), prepare_basis_state("0")), prepare_basis_state("1"))
    np.testing.assert_array_equal(apply_pauli(parse_label("XX"), prepare_basis_state("10")), prepare_basis_state("01"))
    np.testing.assert_allclose(apply_pauli(parse_label("YY"), prepare_basis_state("10")), prepare_basis_state("01"))


def test_apply_pauli_matches_dense(rng):
    s = prepare_layered_random_state(3, rng_seed=2)
    for label in ["XYZ", "YIY", "ZZI", "IXY"]:
        for k in range(4):
            p = parse_label(label)
            p = PauliString(3, p.x_bits, p.z_bits, k)
            np.testing.assert_allclose(apply_pauli(p, s), (1j) ** k * kron_matrix(label) @ s, atol=1e-14)


def test_apply_pauli_dimension_error():
    with pytest.raises(DimensionError):
        apply_pauli(parse_label("XX"), prepare_basis_state("1"))


def test_exact_expectations():
    assert expectation(prepare_basis_state("0"), parse_label("Z")) == 1.0
    assert expectation(prepare_basis_state("10"), parse_label("XX")) == 0.0


def test_expectation_requires_canonical():
    with pytest.raises(ContractError):
        expectation(prepare_basis_state("0"), PauliString(1, 1, 0, 1))


def test_sampled_eigenstate_is_exact():
    plus = np.array([1, 1], dtype=complex) / np.sqrt(2)
    assert expectation(plus, parse_label("X"), sampled()) == 1.0
    minus_i = np.array([1, -1j], dtype=complex) / np.sqrt(2)
    assert expectation(minus_i, parse_label("Y"), sampled()) == -1.0


def test_sampled_reproducible_per_string():
    s = prepare_layered_random_state(3, rng_seed=1)
    p = parse_label("XYZ")
    assert expectation(s, p, sampled(seed=3)) == expectation(s, p, sampled(seed=3))
    assert expectation(s, p, sampled(seed=3)) != expectation(s, p, sampled(seed=4))


def test_sampled_zero_mean_within_binomial_band():
    # <0|X|0> = 0; single-shot variance 1 so the standard error is 1/sqrt(shots)
    zero = prepare_basis_state("0")
    est = np.array([expectation(zero, parse_label("X"), sampled(8192, s)) for s in range(200)])
    inside = np.mean(np.abs(est) <= 5 / np.sqrt(8192))
    assert inside >= 0.99


@pytest.mark.parametrize("label", ["XYZ", "YYI", "ZIX"])
def test_sampled_unbiased(label):
    s = prepare_layered_random_state(3, rng_seed=9)
    p = parse_label(label)
    exact = expectation(s, p)
    est = np.array([expectation(s, p, sampled(1024, seed)) for seed in range(200)])
    pooled_se = est.std(ddof=1) / np.sqrt(len(est))
    assert abs(est.mean() - exact) < 4 * pooled_se


def test_sampled_std_scales_as_inverse_sqrt_shots():
    s = prepare_layered_random_state(2, rng_seed=3)
    p = parse_label("XY")
    stds = [np.std([expectation(s, p, sampled(n, seed)) for seed in range(400)], ddof=1) for n in (256, 1024, 4096)]
    for a, b in zip(stds, stds[1:]):
        assert abs(a / b / 2 - 1) < 0.2


def test_exact_evolve_h3_closed_form():
    s = prepare_basis_state("10")
    for t in [0.0, 0.3, 1.7, 10.0]:
        want = np.cos(2 * t) * prepare_basis_state("10") - 1j * np.sin(2 * t) * prepare_basis_state("01")
        np.testing.assert_allclose(exact_evolve(xy_pair(), s, t), want, atol=1e-12)


def test_exact_evolve_z_phase_and_zero_time():
    h = HamiltonianSpec.from_labels([(1.0, "Z")], 1)
    zero = prepare_basis_state("0")
    np.testing.assert_allclose(exact_evolve(h, zero, 0.8), np.exp(-0.8j) * zero, atol=1e-14)
    s = prepare_layered_random_state(3, rng_seed=4)
    np.testing.assert_allclose(exact_evolve(builtin("H1", 3), s, 0.0), s, atol=1e-14)


def test_exact_evolve_matches_expm_and_group_property():
    h = builtin("H2", 4)
    s = prepare_layered_random_state(4, rng_seed=8)
    hm = kron_matrix("ZXZI") + kron_matrix("IZXZ")
    np.testing.assert_allclose(exact_evolve(h, s, 1.3), expm_herm(hm, 1.3) @ s, atol=1e-12)
    a = exact_evolve(h, exact_evolve(h, s, 0.4), 2.1)
    np.testing.assert_allclose(a, exact_evolve(h, s, 2.5), atol=1e-10)
    assert abs(np.linalg.norm(exact_evolve(h, s, 7.0)) - 1) < 1e-12


def test_exact_evolve_grid_shape():
    out = exact_evolve(xy_pair(), prepare_basis_state("10"), np.linspace(0, 1, 5))
    assert out.shape == (5, 4)


def test_dense_limit():
    h = builtin("H1", 3)
    with pytest.raises(DimensionError):
        exact_evolve(h, prepare_basis_state("000"), 1.0, dense_limit=2)
