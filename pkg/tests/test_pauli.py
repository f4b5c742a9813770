"""Pauli words on qubits and Weyl words in prime dimension."""

import itertools

import numpy as np
import pytest

from qpad.errors import ResourceLimitError
from qpad.pauli import (
    PauliOp,
    QuditOp,
    commute_sign,
    conjugate_pauli,
    conjugate_qudit,
    is_prime,
    pauli_coefficient,
    pauli_dense,
    pauli_mul,
    pauli_trace,
    pauli_trace_table,
    phase_mask_conjugate,
    purity_via_pauli,
    qudit_dagger,
    qudit_dense,
    qudit_mul,
    qudit_x_pow,
    qudit_z_pow,
)
from qpad.qcore import DensityMatrix, purity, random_mixed, random_pure

# ---------------------------------------------------------------------------
# qubit words


def test_pauli_str_and_validation():
    p = PauliOp(3, 0b101, 0b100, -1)
    assert str(p) == "-X(101)Z(001)"
    with pytest.raises(ValueError):
        PauliOp(2, 4, 0)
    with pytest.raises(ValueError):
        PauliOp(2, 0, 0, sign=2)


@pytest.mark.parametrize("n", [1, 2])
def test_group_law_exhaustive_against_dense(n):
    d = 1 << n
    words = [
        PauliOp(n, u, v, s)
        for u in range(d)
        for v in range(d)
        for s in (1, -1)
    ]
    for p in words:
        for q in words:
            prod = pauli_mul(p, q)
            want = pauli_dense(p) @ pauli_dense(q)
            # dense entries are exact integers, so compare exactly
            assert np.array_equal(pauli_dense(prod), want), (p, q)


@pytest.mark.parametrize("n", [1, 2])
def test_commute_sign_exhaustive(n):
    d = 1 << n
    for u1, v1, u2, v2 in itertools.product(range(d), repeat=4):
        p = PauliOp(n, u1, v1)
        q = PauliOp(n, u2, v2)
        pq = pauli_dense(p) @ pauli_dense(q)
        qp = pauli_dense(q) @ pauli_dense(p)
        assert np.array_equal(pq, commute_sign(p, q) * qp)


def test_words_are_orthonormal_after_scaling():
    # Tr(W1^dagger W2) = 2^n [W1 == W2] for sign-free words
    n = 2
    d = 1 << n
    for u1, v1, u2, v2 in itertools.product(range(d), repeat=4):
        a = pauli_dense(PauliOp(n, u1, v1))
        b = pauli_dense(PauliOp(n, u2, v2))
        tr = np.trace(a.conj().T @ b)
        want = d if (u1, v1) == (u2, v2) else 0
        assert tr == want


def test_pauli_trace_against_dense():
    rng = np.random.default_rng(5)
    rho = random_mixed(8, 3, rng)
    for u in range(8):
        for v in range(8):
            want = complex(np.trace(pauli_dense(PauliOp(3, u, v)) @ rho.mat))
            assert abs(pauli_trace(rho, u, v) - want) < 1e-12


def test_pauli_trace_table_matches_single_traces():
    rng = np.random.default_rng(6)
    rho = random_mixed(4, 2, rng)
    table = pauli_trace_table(rho)
    for u in range(4):
        for v in range(4):
            assert abs(table[u, v] - pauli_trace(rho, u, v)) < 1e-12


def test_coefficient_reconstruction():
    # rho = sum_{u,v} c(u,v) X^u Z^v reproduces the matrix
    rng = np.random.default_rng(8)
    rho = random_mixed(4, 4, rng)
    acc = np.zeros((4, 4), dtype=np.complex128)
    for u in range(4):
        for v in range(4):
            acc += pauli_coefficient(rho, u, v) * pauli_dense(PauliOp(2, u, v))
    assert np.max(np.abs(acc - rho.mat)) < 1e-12


def test_purity_via_pauli_matches_frobenius():
    rng = np.random.default_rng(9)
    for rho in (random_mixed(8, 2, rng), random_pure(8, rng), DensityMatrix.maximally_mixed(8)):
        assert purity_via_pauli(rho) == pytest.approx(purity(rho), abs=1e-10)


def test_conjugate_pauli_against_dense():
    rng = np.random.default_rng(10)
    rho = random_mixed(8, 3, rng)
    for a in range(8):
        for b in range(8):
            w = pauli_dense(PauliOp(3, a, b))
            want = w @ rho.mat @ w.conj().T
            got = conjugate_pauli(rho, a, b)
            assert np.max(np.abs(got.mat - want)) < 1e-14


def test_conjugate_pauli_is_involution():
    rng = np.random.default_rng(12)
    rho = random_mixed(4, 2, rng)
    back = conjugate_pauli(conjugate_pauli(rho, 2, 3), 2, 3)
    assert np.array_equal(back.mat, rho.mat)  # signed permutation twice is exact


def test_conjugate_pauli_validation():
    rho = DensityMatrix.maximally_mixed(3)
    with pytest.raises(ValueError):
        conjugate_pauli(rho, 0, 0)  # dim not a power of two
    with pytest.raises(ValueError):
        conjugate_pauli(DensityMatrix.maximally_mixed(4), 4, 0)


def test_pauli_dense_resource_limit():
    with pytest.raises(ResourceLimitError):
        pauli_dense(PauliOp(13, 0, 0))


# ---------------------------------------------------------------------------
# prime-dimension words


def test_is_prime_small():
    primes = [n for n in range(20) if is_prime(n)]
    assert primes == [2, 3, 5, 7, 11, 13, 17, 19]


def test_qudit_validation():
    with pytest.raises(ValueError):
        QuditOp(4, 0, 0)  # not prime
    with pytest.raises(ValueError):
        QuditOp(5, 5, 0)
    with pytest.raises(ValueError):
        QuditOp(5, 0, 0, phase=7)


@pytest.mark.parametrize("d", [2, 3, 5])
def test_qudit_group_law_exhaustive_against_dense(d):
    words = [QuditOp(d, j, k, ph) for j in range(d) for k in range(d) for ph in range(d)]
    for p in words:
        for q in words:
            prod = qudit_mul(p, q)
            want = qudit_dense(p) @ qudit_dense(q)
            assert np.max(np.abs(qudit_dense(prod) - want)) < 1e-12, (p, q)


@pytest.mark.parametrize("d", [3, 5, 7])
def test_qudit_commutation_relation(d):
    # Z X = w X Z
    w = np.exp(2j * np.pi / d)
    zx = qudit_z_pow(1, d) @ qudit_x_pow(1, d)
    xz = qudit_x_pow(1, d) @ qudit_z_pow(1, d)
    assert np.max(np.abs(zx - w * xz)) < 1e-12


@pytest.mark.parametrize("d", [2, 3, 5])
def test_qudit_dagger_inverts(d):
    for j in range(d):
        for k in range(d):
            for ph in range(d):
                p = QuditOp(d, j, k, ph)
                prod = qudit_mul(p, qudit_dagger(p))
                assert (prod.j, prod.k, prod.phase) == (0, 0, 0)
                dense = qudit_dense(p) @ qudit_dense(qudit_dagger(p))
                assert np.max(np.abs(dense - np.eye(d))) < 1e-12


def test_qudit_words_orthonormal_after_scaling():
    d = 5
    for j1, k1, j2, k2 in itertools.product(range(3), repeat=4):
        a = qudit_dense(QuditOp(d, j1, k1))
        b = qudit_dense(QuditOp(d, j2, k2))
        tr = np.trace(a.conj().T @ b)
        want = d if (j1, k1) == (j2, k2) else 0
        assert abs(tr - want) < 1e-12


def test_conjugate_qudit_against_dense():
    rng = np.random.default_rng(14)
    rho = random_mixed(5, 3, rng)
    for j in range(5):
        for k in range(5):
            w = qudit_dense(QuditOp(5, j, k))
            want = w @ rho.mat @ w.conj().T
            got = conjugate_qudit(rho, j, k)
            assert np.max(np.abs(got.mat - want)) < 1e-13


def test_conjugate_qudit_negative_powers_invert():
    rng = np.random.default_rng(15)
    rho = random_mixed(7, 2, rng)
    back = conjugate_qudit(conjugate_qudit(rho, 3, 5), -3, -5)
    # undoing X^j Z^k with X^-j Z^-k leaves only cancelling scalar phases
    assert np.max(np.abs(back.mat - rho.mat)) < 1e-14


def test_conjugate_qudit_requires_prime_dim():
    with pytest.raises(ValueError):
        conjugate_qudit(DensityMatrix.maximally_mixed(4), 1, 1)


def test_phase_mask_conjugate_involution_and_dense():
    rng = np.random.default_rng(16)
    rho = random_mixed(5, 2, rng)  # non-power-of-two dimension is allowed
    mask = 0b101
    got = phase_mask_conjugate(rho, mask)
    s = np.array([1 - 2 * (bin(mask & x).count("1") & 1) for x in range(5)], dtype=float)
    want = (s[:, None] * s[None, :]) * rho.mat
    assert np.array_equal(got.mat, want)
    back = phase_mask_conjugate(got, mask)
    assert np.array_equal(back.mat, rho.mat)
    with pytest.raises(ValueError):
        phase_mask_conjugate(rho, -1)
