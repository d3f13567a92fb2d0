import numpy as np
import pytest
from scipy.linalg import orth

from cqff import build_moment_set, builtin, krylov_residual, three_body_zxz
from cqff.backend import prepare_basis_state, prepare_layered_random_state

from conftest import BUILTIN_CASES, case_state


@pytest.mark.parametrize(
    "name,n,sizes",
    [("H1", 2, [4]), ("H1", 3, [7, 16]), ("H2", 4, [3, 4]), ("H2", 5, [4, 7, 8]), ("H3", 2, [3])],
)
def test_table_sizes(name, n, sizes):
    ms = build_moment_set(builtin(name, n), len(sizes))
    assert ms.level_sizes()[1:] == sizes


def test_k0_is_identity_only():
    ms = build_moment_set(builtin("H1", 3), 0)
    assert len(ms) == 1 and ms.ops[0].is_identity()


def test_order_and_levels():
    ms = build_moment_set(builtin("H3"), 2)
    assert ms.labels() == ["II", "XX", "YY", "ZZ"]
    assert ms.level_of == (0, 1, 1, 2)


def test_periodic_boundary_differs():
    # the wrap-around reading of the three-body sum gives larger first levels
    assert len(build_moment_set(three_body_zxz(4, boundary="periodic"), 1)) == 5
    assert len(build_moment_set(three_body_zxz(5, boundary="periodic"), 1)) == 6


@pytest.mark.parametrize("name,n", [("H1", 2), ("H1", 3), ("H2", 4), ("H2", 5), ("H3", 2)])
def test_monotone_nested_and_capped(name, n):
    h = builtin(name, n)
    prev = set()
    for K in range(5):
        ms = build_moment_set(h, K)
        cur = set(ms.ops)
        assert len(cur) == len(ms.ops)
        assert prev <= cur
        assert len(cur) <= 4 ** n
        assert max(ms.level_of) <= K
        prev = cur


def test_negative_k_rejected():
    with pytest.raises(ValueError):
        build_moment_set(builtin("H3"), -1)


def _oracle_residual(h, phi, m, ms):
    q = orth(ms.basis(phi))
    v = np.linalg.matrix_power(h.to_matrix(), m - 1) @ phi
    return np.linalg.norm(v - q @ (q.conj().T @ v))


def test_krylov_m1_is_zero():
    h = builtin("H1", 2)
    phi = prepare_layered_random_state(2, rng_seed=0)
    assert krylov_residual(h, phi, 1, build_moment_set(h, 1)) < 1e-14


def test_krylov_h3_basis_state():
    h = builtin("H3")
    phi = prepare_basis_state("10")
    ms = build_moment_set(h, 1)
    assert krylov_residual(h, phi, 2, ms) <= 1e-10
    assert _oracle_residual(h, phi, 2, ms) <= 1e-10


@pytest.mark.parametrize("name,n,K", BUILTIN_CASES)
def test_krylov_containment(name, n, K):
    h = builtin(name, n)
    ms = build_moment_set(h, K)
    for seed in range(3):
        phi = case_state(name, n, seed)
        for m in range(1, K + 2):
            assert krylov_residual(h, phi, m, ms) <= 1e-10


def test_krylov_residual_detects_escape():
    # one level short of containment: H**2 phi leaves span(CS_0)
    h = builtin("H1", 2)
    phi = prepare_layered_random_state(2, rng_seed=0)
    ms = build_moment_set(h, 0)
    with pytest.raises(ValueError):
        krylov_residual(h, phi, 2, ms)
    assert _oracle_residual(h, phi, 2, ms) > 1e-3


def test_basis_columns():
    h = builtin("H3")
    ms = build_moment_set(h, 1)
    b = ms.basis(prepare_basis_state("10"))
    np.testing.assert_allclose(b[:, 1], prepare_basis_state("01"))
    np.testing.assert_allclose(b[:, 2], prepare_basis_state("01"))
