"""Signed Pauli words on qubits and Weyl words in prime dimension.

A Pauli word is sign * X^u Z^v with u, v packed n-bit strings: X^u
permutes basis states by XOR with u, Z^v applies (-1)^<v, j> to |j>.
The group law picks up (-1)^<a, v> when X^a crosses Z^v, everything else
is XOR.  Conjugation of a density matrix by a word is a signed
permutation of entries, done directly on the array (no dense operator).

In prime dimension d the analogues are X|t> = |t+1 mod d> and
Z|t> = w^t |t> with w = exp(2 pi i / d); a word is w^phase X^j Z^k and
Z^k X^j = w^(jk) X^j Z^k, i.e. commuting X past Z costs w^(-jk).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ResourceLimitError
from .gf2 import Bits, parity
from .qcore import DensityMatrix

_MAX_DENSE_QUBITS = 12
_MAX_DENSE_DIM = 4099


@dataclass(frozen=True)
class PauliOp:
    """sign * X^u Z^v on n qubits; sign is +1 or -1."""

    n: int
    u: int
    v: int
    sign: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if not 0 <= self.u < (1 << self.n) or not 0 <= self.v < (1 << self.n):
            raise ValueError(f"u/v must fit in {self.n} bits")
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")

    def __str__(self):
        head = "-" if self.sign < 0 else ""
        return f"{head}X({Bits(self.n, self.u).to_text()})Z({Bits(self.n, self.v).to_text()})"


def pauli_mul(p: PauliOp, q: PauliOp) -> PauliOp:
    """Group product p * q (p applied after q)."""
    if p.n != q.n:
        raise ValueError(f"width mismatch: {p.n} != {q.n}")
    sign = p.sign * q.sign * (1 - 2 * parity(q.u & p.v))
    return PauliOp(p.n, p.u ^ q.u, p.v ^ q.v, sign)


def commute_sign(p: PauliOp, q: PauliOp) -> int:
    """+1 if the words commute, -1 if they anticommute."""
    if p.n != q.n:
        raise ValueError(f"width mismatch: {p.n} != {q.n}")
    return 1 - 2 * (parity(p.u & q.v) ^ parity(p.v & q.u))


def pauli_dense(p: PauliOp) -> np.ndarray:
    """The 2^n x 2^n matrix of the word (entries 0, +-1 as complex)."""
    if p.n > _MAX_DENSE_QUBITS:
        raise ResourceLimitError(f"dense Pauli word on {p.n} qubits is beyond desk scale")
    d = 1 << p.n
    j = np.arange(d)
    signs = p.sign * (
        1.0 - 2.0 * (np.bitwise_count(np.uint64(p.v) & j.astype(np.uint64)) & np.uint64(1)).astype(np.float64)
    )
    mat = np.zeros((d, d), dtype=np.complex128)
    mat[j ^ p.u, j] = signs
    return mat


def conjugate_pauli(rho: DensityMatrix, a: int, b: int) -> DensityMatrix:
    """X^a Z^b rho (X^a Z^b)^dagger, as a signed permutation of entries.

    Entry (i, j) of the result is (-1)^(<b,i> + <b,j>) rho[i^a, j^a]; the
    word's own sign and phase cancel in conjugation.  Exact (no rounding).
    """
    d = rho.dim
    if d & (d - 1):
        raise ValueError(f"dimension {d} is not a power of two")
    if not 0 <= a < d or not 0 <= b < d:
        raise ValueError(f"a/b must be valid {d.bit_length() - 1}-bit masks")
    idx = np.arange(d, dtype=np.uint64)
    s = 1.0 - 2.0 * (np.bitwise_count(np.uint64(b) & idx) & np.uint64(1)).astype(np.float64)
    perm = (idx ^ np.uint64(a)).astype(np.intp)
    out = (s[:, None] * s[None, :]) * rho.mat[np.ix_(perm, perm)]
    return DensityMatrix(out, validate=False)


def pauli_trace(rho: DensityMatrix, u: int, v: int) -> complex:
    """Tr(X^u Z^v rho)."""
    d = rho.dim
    j = np.arange(d, dtype=np.uint64)
    s = 1.0 - 2.0 * (np.bitwise_count(np.uint64(v) & j) & np.uint64(1)).astype(np.float64)
    perm = (j ^ np.uint64(u)).astype(np.intp)
    # (X^u Z^v)[j^u, j] = (-1)^<v,j>, so the trace walks rho[j, j^u]
    return complex(np.sum(s * rho.mat[j.astype(np.intp), perm]))


def pauli_trace_table(rho: DensityMatrix) -> np.ndarray:
    """All word traces at once: T[u, v] = Tr(X^u Z^v rho).

    For fixed u the v-dependence is a Walsh-Hadamard transform of the
    diagonal rho[j, j^u], so the table costs 2^n transforms of length 2^n.
    """
    d = rho.dim
    if d & (d - 1):
        raise ValueError(f"dimension {d} is not a power of two")
    idx = np.arange(d)
    table = np.empty((d, d), dtype=np.complex128)
    for u in range(d):
        g = rho.mat[idx, idx ^ u]
        re = np.ascontiguousarray(g.real)
        im = np.ascontiguousarray(g.imag)
        _kernels.fwht(re)
        _kernels.fwht(im)
        table[u] = re + 1j * im
    return table


def pauli_coefficient(rho: DensityMatrix, u: int, v: int) -> complex:
    """Expansion coefficient of rho at the word (u, v): Tr(Z^v X^u rho) / 2^n."""
    d = rho.dim
    # Z^v X^u = (-1)^<u,v> X^u Z^v
    tr = pauli_trace(rho, u, v) * (1 - 2 * parity(u & v))
    return tr / d


def purity_via_pauli(rho: DensityMatrix) -> float:
    """Tr(rho^2) summed over word traces: sum_{u,v} |Tr(X^u Z^v rho)|^2 / 2^n.

    Independent route to the purity; matches the Frobenius computation to
    rounding and exercises the full coefficient table.
    """
    t = pauli_trace_table(rho)
    return float(np.sum(np.abs(t) ** 2) / rho.dim)


# ---------------------------------------------------------------------------
# Weyl words in prime dimension


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    p = 2
    while p * p <= n:
        if n % p == 0:
            return False
        p += 1
    return True


@dataclass(frozen=True)
class QuditOp:
    """w^phase X^j Z^k in prime dimension d, w = exp(2 pi i / d)."""

    d: int
    j: int
    k: int
    phase: int = 0

    def __post_init__(self):
        if not is_prime(self.d):
            raise ValueError(f"dimension must be prime, got {self.d}")
        for name in ("j", "k", "phase"):
            val = getattr(self, name)
            if not 0 <= val < self.d:
                raise ValueError(f"{name} must be in 0..{self.d - 1}, got {val}")

    def __str__(self):
        head = f"w^{self.phase} " if self.phase else ""
        return f"{head}X^{self.j} Z^{self.k} (d={self.d})"


def qudit_mul(p: QuditOp, q: QuditOp) -> QuditOp:
    """Group product p * q; moving p's Z^k past q's X^j costs w^(k_p j_q)."""
    if p.d != q.d:
        raise ValueError(f"dimension mismatch: {p.d} != {q.d}")
    d = p.d
    phase = (p.phase + q.phase + p.k * q.j) % d
    return QuditOp(d, (p.j + q.j) % d, (p.k + q.k) % d, phase)


def qudit_dagger(p: QuditOp) -> QuditOp:
    """(w^phase X^j Z^k)^dagger = w^(jk - phase) X^(-j) Z^(-k)."""
    d = p.d
    return QuditOp(d, (-p.j) % d, (-p.k) % d, (p.j * p.k - p.phase) % d)


def qudit_dense(p: QuditOp) -> np.ndarray:
    """The d x d matrix of the word."""
    if p.d > _MAX_DENSE_DIM:
        raise ResourceLimitError(f"dense word in dimension {p.d} is beyond desk scale")
    d = p.d
    w = np.exp(2j * np.pi * np.arange(d) / d)
    t = np.arange(d)
    mat = np.zeros((d, d), dtype=np.complex128)
    # X^j Z^k |t> = w^(k t) |t + j>
    mat[(t + p.j) % d, t] = w[(p.k * t) % d]
    return w[p.phase] * mat


def qudit_x_pow(j: int, d: int) -> np.ndarray:
    return qudit_dense(QuditOp(d, j % d, 0))


def qudit_z_pow(k: int, d: int) -> np.ndarray:
    return qudit_dense(QuditOp(d, 0, k % d))


def conjugate_qudit(rho: DensityMatrix, j: int, k: int) -> DensityMatrix:
    """X^j Z^k rho (X^j Z^k)^dagger in dimension d = rho.dim.

    Entry (s, t) of the result is w^(k (s - t)) rho[s - j, t - j] with
    indices mod d; any scalar phase on the word cancels.
    """
    d = rho.dim
    if not is_prime(d):
        raise ValueError(f"dimension must be prime, got {d}")
    j %= d
    k %= d
    w = np.exp(2j * np.pi * np.arange(d) / d)
    idx = np.arange(d)
    perm = (idx - j) % d
    ph = w[(k * idx) % d]
    out = (ph[:, None] * np.conj(ph)[None, :]) * rho.mat[np.ix_(perm, perm)]
    return DensityMatrix(out, validate=False)


def phase_mask_conjugate(rho: DensityMatrix, mask: int) -> DensityMatrix:
    """Conjugate by the diagonal sign operator U|x> = (-1)^<mask, x> |x>.

    Defined for any dimension d <= 2^m where m is the mask width; entry
    (x, y) picks up (-1)^(<mask,x> + <mask,y>).  U is its own inverse.
    """
    d = rho.dim
    if mask < 0:
        raise ValueError(f"mask must be >= 0, got {mask}")
    idx = np.arange(d, dtype=np.uint64)
    s = 1.0 - 2.0 * (np.bitwise_count(np.uint64(mask) & idx) & np.uint64(1)).astype(np.float64)
    out = (s[:, None] * s[None, :]) * rho.mat
    return DensityMatrix(out, validate=False)


def qudit_core_mix(rho: DensityMatrix) -> DensityMatrix:
    """Uniform average over a of conjugation by X^a Z^(a^2 mod d)."""
    d = rho.dim
    if not is_prime(d):
        raise ValueError(f"dimension must be prime, got {d}")
    return DensityMatrix(_kernels.qudit_core_mix(rho.mat), validate=False)
