"""
Tensored Pauli operators in symplectic form.

An n-qubit Pauli string is stored as two integer bit masks plus a power of i:

    P = i**phase_exp * sigma(x_0, z_0) (x) ... (x) sigma(x_{n-1}, z_{n-1})

with sigma(0, 0) = I, sigma(1, 0) = X, sigma(0, 1) = Z and sigma(1, 1) = Y.
Y is fixed by the convention Y = i X Z, so a string with phase_exp = 0 is
always Hermitian and squares to the identity.

Qubit k (0-based, the k-th letter of a label) lives at bit ``n - 1 - k`` of
the masks. This matches the big-endian basis ordering of state vectors, where
the label "10" is the basis index 2.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, PauliParseError

_LETTERS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_BITS_TO_LETTER = {v: k for k, v in _LETTERS.items()}
_PHASES = (1, 1j, -1, -1j)
_TOKEN = re.compile(r"^([IXYZ])(\d+)$")


def _popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True)
class PauliString:
    n_qubits: int
    x_bits: int
    z_bits: int
    phase_exp: int = 0

    def __post_init__(self):
        if self.n_qubits < 1:
            raise DimensionError(f"n_qubits must be positive, got {self.n_qubits}")
        full = (1 << self.n_qubits) - 1
        if self.x_bits & ~full or self.z_bits & ~full:
            raise DimensionError("bit masks exceed the qubit count")
        object.__setattr__(self, "phase_exp", self.phase_exp % 4)

    @classmethod
    def identity(cls, n_qubits: int) -> PauliString:
        return cls(n_qubits, 0, 0, 0)

    @classmethod
    def from_letters(cls, letters: dict[int, str], n_qubits: int) -> PauliString:
        """Build a canonical string from a {0-based qubit: letter} map."""
        x = z = 0
        for q, letter in letters.items():
            xb, zb = _LETTERS[letter]
            bit = 1 << (n_qubits - 1 - q)
            x |= bit * xb
            z |= bit * zb
        return cls(n_qubits, x, z, 0)

    @property
    def phase(self) -> complex:
        return _PHASES[self.phase_exp]

    @property
    def support(self) -> int:
        """Bit mask of qubits acted on non-trivially."""
        return self.x_bits | self.z_bits

    @property
    def weight(self) -> int:
        return _popcount(self.support)

    def is_identity(self) -> bool:
        return self.x_bits == 0 and self.z_bits == 0

    def is_canonical(self) -> bool:
        return self.phase_exp == 0

    def is_hermitian(self) -> bool:
        # canonical strings are Hermitian; a global phase keeps that only if real
        return self.phase_exp % 2 == 0

    def letter(self, qubit: int) -> str:
        bit = self.n_qubits - 1 - qubit
        return _BITS_TO_LETTER[((self.x_bits >> bit) & 1, (self.z_bits >> bit) & 1)]

    def letters(self) -> dict[int, str]:
        """Non-identity letters keyed by 0-based qubit index."""
        out = {}
        for q in range(self.n_qubits):
            c = self.letter(q)
            if c != "I":
                out[q] = c
        return out

    def label(self) -> str:
        """Dense label such as "XIZ", without phase."""
        return "".join(self.letter(q) for q in range(self.n_qubits))

    def __str__(self):
        prefix = ("", "i", "-", "-i")[self.phase_exp]
        return prefix + self.label()

    def __mul__(self, other: PauliString) -> PauliString:
        return multiply(self, other)

    def to_matrix(self) -> np.ndarray:
        """Dense 2**n x 2**n matrix, built entry by entry from the bit masks."""
        dim = 1 << self.n_qubits
        cols = np.arange(dim)
        signs = 1 - 2 * (np.bitwise_count(cols & self.z_bits).astype(np.int64) & 1)
        coeff = self.phase * (1j) ** _popcount(self.x_bits & self.z_bits)
        m = np.zeros((dim, dim), dtype=complex)
        m[cols ^ self.x_bits, cols] = coeff * signs
        return m


def parse_label(label: str, n_qubits: int | None = None) -> PauliString:
    """
    Parse a Pauli label into a canonical PauliString.

    Two forms are accepted: a dense label ("XIZ", one letter per qubit), or
    space separated indexed tokens with 1-based qubit numbers ("Z1 X2 Z3").
    The indexed form needs `n_qubits`. A lone "I" with `n_qubits` given is the
    identity.
    """
    text = label.strip()
    if not text:
        raise PauliParseError("empty Pauli label")
    tokens = text.split()
    if len(tokens) == 1 and all(c in _LETTERS for c in text):
        if n_qubits is not None and len(text) != n_qubits:
            if text == "I":
                return PauliString.identity(n_qubits)
            raise PauliParseError(
                f"label {text!r} has {len(text)} letters, expected {n_qubits}"
            )
        return PauliString.from_letters(dict(enumerate(text)), len(text))

    if n_qubits is None:
        raise PauliParseError(f"indexed label {text!r} requires n_qubits")
    letters: dict[int, str] = {}
    for tok in tokens:
        m = _TOKEN.match(tok)
        if m is None:
            raise PauliParseError(f"bad Pauli token {tok!r} in {text!r}")
        q = int(m.group(2))
        if not 1 <= q <= n_qubits:
            raise PauliParseError(f"qubit index in {tok!r} outside 1..{n_qubits}")
        if q - 1 in letters:
            raise PauliParseError(f"qubit {q} appears twice in {text!r}")
        if m.group(1) != "I":
            letters[q - 1] = m.group(1)
    return PauliString.from_letters(letters, n_qubits)


def multiply(p: PauliString, q: PauliString) -> PauliString:
    """Exact operator product p @ q."""
    if p.n_qubits != q.n_qubits:
        raise DimensionError(f"cannot multiply {p.n_qubits}- and {q.n_qubits}-qubit strings")
    x = p.x_bits ^ q.x_bits
    z = p.z_bits ^ q.z_bits
    # Writing sigma(x, z) = i**(x.z) X**x Z**z, moving Z**z1 past X**x2 costs (-1)**(z1.x2).
    k = (
        _popcount(p.x_bits & p.z_bits)
        + _popcount(q.x_bits & q.z_bits)
        + 2 * _popcount(p.z_bits & q.x_bits)
        - _popcount(x & z)
    )
    return PauliString(p.n_qubits, x, z, p.phase_exp + q.phase_exp + k)


def canonicalize(p: PauliString) -> tuple[PauliString, complex]:
    """Split p into (phase-free string, unit phase) with phase * canonical == p."""
    return PauliString(p.n_qubits, p.x_bits, p.z_bits, 0), p.phase


def commutes(p: PauliString, q: PauliString) -> bool:
    if p.n_qubits != q.n_qubits:
        raise DimensionError(f"cannot compare {p.n_qubits}- and {q.n_qubits}-qubit strings")
    return (_popcount(p.x_bits & q.z_bits) + _popcount(p.z_bits & q.x_bits)) % 2 == 0
