import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cqff.errors import DimensionError, PauliParseError
from cqff.pauli import PauliString, canonicalize, commutes, multiply, parse_label

from conftest import kron_matrix


def op(label, phase_exp=0):
    p = parse_label(label)
    return PauliString(p.n_qubits, p.x_bits, p.z_bits, phase_exp)


def dense(p: PauliString) -> np.ndarray:
    return (1j) ** p.phase_exp * kron_matrix(p.label())


def test_parse_identity():
    p = parse_label("II")
    assert p.is_identity() and p.phase_exp == 0 and p.n_qubits == 2


def test_parse_xx_bits():
    p = parse_label("XX")
    assert p.x_bits == 0b11 and p.z_bits == 0


def test_parse_indexed_tokens():
    p = parse_label("Z1 X2 Z3", 5)
    assert p.letters() == {0: "Z", 1: "X", 2: "Z"}
    assert p.label() == "ZXZII"


def test_parse_identity_shorthand():
    assert parse_label("I", 3).is_identity()


@pytest.mark.parametrize("label,n", [("XQ", None), ("X1 W2", 3), ("X4", 3), ("X1 Z1", 2), ("", 2), ("Z1", None)])
def test_parse_errors_name_token(label, n):
    with pytest.raises(PauliParseError):
        parse_label(label, n)


def test_parse_error_mentions_token():
    with pytest.raises(PauliParseError, match="W2"):
        parse_label("X1 W2", 3)


def test_x_times_y_is_iz():
    assert multiply(op("X"), op("Y")) == op("Z", 1)


def test_xx_times_yy_is_minus_zz():
    assert multiply(op("XX"), op("YY")) == op("ZZ", 2)


def test_three_body_product_matches_dense():
    p, q = parse_label("Z1 X2 Z3", 4), parse_label("Z2 X3 Z4", 4)
    r = multiply(p, q)
    assert r.label() == "ZYYZ"
    np.testing.assert_array_equal(dense(r), kron_matrix("ZXZI") @ kron_matrix("IZXZ"))


def test_canonicalize_examples():
    assert canonicalize(op("Z", 1)) == (op("Z"), 1j)
    assert canonicalize(op("ZZ", 2)) == (op("ZZ"), -1)
    assert canonicalize(op("II")) == (op("II"), 1)


def test_commutes_examples():
    assert commutes(op("X"), op("X"))
    assert not commutes(op("X"), op("Z"))
    assert commutes(op("XX"), op("ZZ"))


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        multiply(op("X"), op("XX"))
    with pytest.raises(DimensionError):
        commutes(op("X"), op("XX"))


def test_to_matrix_matches_kron():
    for label in map("".join, itertools.product("IXYZ", repeat=2)):
        np.testing.assert_array_equal(parse_label(label).to_matrix(), kron_matrix(label))


pauli_strings = st.integers(1, 6).flatmap(
    lambda n: st.tuples(
        st.text("IXYZ", min_size=n, max_size=n),
        st.text("IXYZ", min_size=n, max_size=n),
        st.text("IXYZ", min_size=n, max_size=n),
        st.integers(0, 3),
        st.integers(0, 3),
    )
)


@settings(max_examples=200, deadline=None)
@given(pauli_strings)
def test_group_law(data):
    a, b, c, pa, pb = data
    p, q, r = op(a, pa), op(b, pb), op(c)
    assert multiply(multiply(p, q), r) == multiply(p, multiply(q, r))
    canon = canonicalize(multiply(p, q))[0]
    assert canon.is_canonical() and canon.is_hermitian()
    assert multiply(op(a), op(a)) == PauliString.identity(len(a))


@settings(max_examples=200, deadline=None)
@given(pauli_strings)
def test_dense_product_exact(data):
    a, b, _, pa, pb = data
    if len(a) > 3:
        a, b = a[:3], b[:3]
    p, q = op(a, pa), op(b, pb)
    # entries are 0 or unit phases, so the comparison is exact
    np.testing.assert_array_equal(dense(multiply(p, q)), dense(p) @ dense(q))
    comm = dense(p) @ dense(q) - dense(q) @ dense(p)
    assert commutes(p, q) == (np.abs(comm).max() == 0)


def test_canonical_reconstructs_operator():
    p = op("XYZ", 3)
    canon, phase = canonicalize(p)
    np.testing.assert_array_equal(phase * dense(canon), dense(p))
