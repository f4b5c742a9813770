"""Three keyed state-randomization schemes built from small-bias sets.

All three approximate the perfect one-time pad on quantum states with
shorter keys, trading exactness for a trace-distance slack epsilon.

Scheme A keys a signed-permutation (Pauli) conjugation by a point of a
single delta-biased set over 2n bits.  The keyed average shrinks every
word coefficient of the input by the set's bias at the matching string,
so the output purity, and with it the distance from uniform, is
controlled by delta.

Scheme B drops the set and publishes a random nonzero field element: the
ciphertext carries a public tag alpha of GF(2^(2n)) and the key is a
field element kappa from the span K of the low k monomials.  Conjugation
uses the point alpha * kappa.  The family {alpha * K} has small
root-mean-square bias, which bounds the distance of the tagged
(classical-quantum) ciphertext from uniform.

Scheme C works in the smallest odd prime dimension d >= 2^n.  A diagonal
sign layer keyed by an epsilon-biased set over ceil(log2 d) bits kills
off-diagonal mass in expectation, and the shift-and-quadratic-phase layer
X^a Z^(a^2) spreads what is left; the composition lands within the set's
bias of the maximally mixed state.

Key-length accounting for all three is in ``key_length_table``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import InvalidStateError, ResourceLimitError
from .pauli import (
    conjugate_pauli,
    conjugate_qudit,
    is_prime,
    pauli_dense,
    phase_mask_conjugate,
    PauliOp,
)
from .qcore import ClassicalQuantumState, DensityMatrix, random_pure
from .smallbias import BiasReport, SmallBiasSet, bias_vector, certify_bias
from .gf2 import FieldSpec, find_irreducible

_SCHEME_B_FULL_LIMIT = 3
_SCHEME_B_SAMPLED_LIMIT = 5


def split_point(point: int, n: int) -> tuple[int, int]:
    """Split a 2n-bit point little-endian into (a, b) = (low n, high n)."""
    mask = (1 << n) - 1
    return point & mask, (point >> n) & mask


@dataclass(frozen=True)
class Key:
    """Key material for one scheme: A holds a set index, B a field element
    of the key span, C an (a, mask index) pair."""

    scheme: str
    material: int | tuple[int, int]

    def __post_init__(self):
        if self.scheme not in ("A", "B", "C"):
            raise ValueError(f"scheme must be A, B or C, got {self.scheme!r}")


@dataclass(frozen=True)
class Ciphertext:
    """An encrypted state; scheme B carries its public nonzero tag."""

    scheme: str
    state: DensityMatrix
    tag: int | None = None


# ---------------------------------------------------------------------------
# Scheme A: Pauli conjugation keyed by a small-bias set over 2n bits


class SchemeAConfig:
    """Parameters for scheme A on n qubits.

    ``sbset`` must sample 2n-bit strings; it is certified exactly at
    construction.  ``secure`` holds when the certified bias is at most
    epsilon_target * 2^(-n/2); with ``relaxed_constant`` the requirement
    is loosened by sqrt(2) (the accounting constant some analyses use).
    """

    __slots__ = ("n", "sbset", "epsilon_target", "relaxed_constant", "cert")

    def __init__(self, n: int, sbset: SmallBiasSet, epsilon_target: float,
                 relaxed_constant: bool = False):
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        if sbset.m != 2 * n:
            raise ValueError(f"set samples {sbset.m}-bit strings, scheme needs {2 * n}")
        if not 0 < epsilon_target <= 2.0:
            raise ValueError(f"epsilon target must be in (0, 2], got {epsilon_target}")
        self.n = n
        self.sbset = sbset
        self.epsilon_target = float(epsilon_target)
        self.relaxed_constant = bool(relaxed_constant)
        self.cert: BiasReport = certify_bias(sbset)

    @property
    def delta(self) -> float:
        """Certified bias of the keyed set."""
        return self.cert.max_bias

    @property
    def distance_bound(self) -> float:
        """Certified trace-distance bound delta * 2^(n/2) for the channel."""
        return self.delta * 2.0 ** (self.n / 2)

    @property
    def security_mode(self) -> str:
        return "relaxed" if self.relaxed_constant else "strict"

    @property
    def secure(self) -> bool:
        slack = math.sqrt(2.0) if self.relaxed_constant else 1.0
        return self.delta <= slack * self.epsilon_target * 2.0 ** (-self.n / 2)

    @property
    def key_bits(self) -> int:
        """Bits needed to index the key set."""
        return max(1, math.ceil(math.log2(self.sbset.size)))

    def __repr__(self):
        return (
            f"SchemeAConfig(n={self.n}, |B|={self.sbset.size}, delta={self.delta:.6g}, "
            f"epsilon={self.epsilon_target:.6g}, mode={self.security_mode})"
        )


def scheme_a_keygen(cfg: SchemeAConfig, seed: int) -> Key:
    rng = np.random.default_rng(seed)
    return Key("A", int(rng.integers(cfg.sbset.size)))


def scheme_a_encrypt(cfg: SchemeAConfig, key: Key, rho: DensityMatrix) -> Ciphertext:
    if key.scheme != "A":
        raise ValueError(f"key is for scheme {key.scheme}, not A")
    if not 0 <= key.material < cfg.sbset.size:
        raise ValueError(f"key index {key.material} out of range")
    if rho.dim != 1 << cfg.n:
        raise ValueError(f"state dimension {rho.dim} != 2^{cfg.n}")
    a, b = split_point(int(cfg.sbset.points[key.material]), cfg.n)
    return Ciphertext("A", conjugate_pauli(rho, a, b))


def scheme_a_decrypt(cfg: SchemeAConfig, key: Key, ct: Ciphertext) -> DensityMatrix:
    if ct.scheme != "A":
        raise ValueError(f"ciphertext is for scheme {ct.scheme}, not A")
    if not 0 <= key.material < cfg.sbset.size:
        raise ValueError(f"key index {key.material} out of range")
    a, b = split_point(int(cfg.sbset.points[key.material]), cfg.n)
    # the conjugation is an involution up to a global sign that cancels
    return conjugate_pauli(ct.state, a, b)


def scheme_a_channel(cfg: SchemeAConfig, rho: DensityMatrix) -> DensityMatrix:
    """The adversary's view: the uniform average over the whole key set."""
    if rho.dim != 1 << cfg.n:
        raise ValueError(f"state dimension {rho.dim} != 2^{cfg.n}")
    out = _kernels.pauli_mix(rho.mat, cfg.sbset.points, cfg.n)
    return DensityMatrix(out, validate=False)


def channel_purity_bound(cfg: SchemeAConfig, input_purity: float) -> float:
    """Certified bound (1 + delta^2 2^n Tr rho^2) / 2^n on output purity."""
    d = 1 << cfg.n
    return (1.0 + cfg.delta**2 * d * input_purity) / d


# ---------------------------------------------------------------------------
# Scheme B: public field tag, key from the span of low monomials


class SchemeBConfig:
    """Parameters for scheme B on n qubits with a 2^k-element key span.

    Keys are the field elements of GF(2^(2n)) with bits below k, i.e. the
    span of the monomials x^0 .. x^(k-1).  ``secure`` holds when
    2^(-k/2) <= epsilon_target * 2^(-n/2), i.e. k >= n + 2 log2(1/eps).
    """

    __slots__ = ("n", "k", "epsilon_target", "field")

    def __init__(self, n: int, k: int, epsilon_target: float):
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        if not 1 <= k <= 2 * n:
            raise ValueError(f"need 1 <= k <= 2n, got k={k}, n={n}")
        if not 0 < epsilon_target <= 2.0:
            raise ValueError(f"epsilon target must be in (0, 2], got {epsilon_target}")
        self.n = n
        self.k = k
        self.epsilon_target = float(epsilon_target)
        self.field: FieldSpec = find_irreducible(2 * n)

    @property
    def family_bias(self) -> float:
        """Exact root-mean-square bias of the tag family at any nonzero alpha."""
        n2 = 2 * self.n
        return math.sqrt(((1 << (n2 - self.k)) - 1) / ((1 << n2) - 1))

    @property
    def distance_bound(self) -> float:
        """Certified bound 2^(-k/2) 2^(n/2) on the tagged-view distance."""
        return 2.0 ** ((self.n - self.k) / 2)

    @property
    def secure(self) -> bool:
        return self.k >= self.n + 2 * math.log2(1.0 / self.epsilon_target) - 1e-9

    @property
    def key_bits(self) -> int:
        return self.k

    def __repr__(self):
        return f"SchemeBConfig(n={self.n}, k={self.k}, epsilon={self.epsilon_target:.6g})"


def scheme_b_keygen(cfg: SchemeBConfig, seed: int) -> Key:
    """Uniform key from the span {0 .. 2^k - 1}.

    kappa = 0 encrypts trivially (identity for every tag) but stays
    admissible: the security statement is an average over the key set.
    """
    rng = np.random.default_rng(seed)
    return Key("B", int(rng.integers(1 << cfg.k)))


def scheme_b_encrypt(cfg: SchemeBConfig, key: Key, rho: DensityMatrix, seed: int) -> Ciphertext:
    """Draw a public nonzero tag, conjugate by the split of tag * key."""
    if key.scheme != "B":
        raise ValueError(f"key is for scheme {key.scheme}, not B")
    if not 0 <= key.material < (1 << cfg.k):
        raise ValueError(f"key 0x{key.material:x} is outside the span of {cfg.k} monomials")
    if rho.dim != 1 << cfg.n:
        raise ValueError(f"state dimension {rho.dim} != 2^{cfg.n}")
    rng = np.random.default_rng(seed)
    alpha = int(rng.integers(1, 1 << (2 * cfg.n)))
    point = cfg.field.mul(alpha, key.material)
    a, b = split_point(point, cfg.n)
    return Ciphertext("B", conjugate_pauli(rho, a, b), tag=alpha)


def scheme_b_decrypt(cfg: SchemeBConfig, key: Key, ct: Ciphertext) -> DensityMatrix:
    if ct.scheme != "B":
        raise ValueError(f"ciphertext is for scheme {ct.scheme}, not B")
    if ct.tag is None or not 0 < ct.tag < (1 << (2 * cfg.n)):
        raise ValueError("scheme B ciphertext needs a nonzero field tag")
    if not 0 <= key.material < (1 << cfg.k):
        raise ValueError(f"key 0x{key.material:x} is outside the span of {cfg.k} monomials")
    point = cfg.field.mul(ct.tag, key.material)
    a, b = split_point(point, cfg.n)
    return conjugate_pauli(ct.state, a, b)


def scheme_b_channel(cfg: SchemeBConfig, rho: DensityMatrix,
                     alpha_sample: int | None = None, seed: int = 0) -> ClassicalQuantumState:
    """The adversary's view: per-tag key averages with the tag kept classical.

    Branch alpha holds the average over all 2^k keys of conjugation by
    split(alpha * kappa), weighted uniformly over the nonzero tags.  The
    full tag set is materialized for n <= 3; larger n (up to 5) needs
    ``alpha_sample`` to pick a seeded uniform subset of tags, which is a
    diagnostic approximation, not the exact view.
    """
    if rho.dim != 1 << cfg.n:
        raise ValueError(f"state dimension {rho.dim} != 2^{cfg.n}")
    n2 = 2 * cfg.n
    all_tags = range(1, 1 << n2)
    if alpha_sample is None:
        if cfg.n > _SCHEME_B_FULL_LIMIT:
            raise ResourceLimitError(
                f"full tag set 2^{n2}-1 at n={cfg.n} is beyond desk scale; "
                f"pass alpha_sample to subsample tags"
            )
        tags = list(all_tags)
    else:
        if cfg.n > _SCHEME_B_SAMPLED_LIMIT:
            raise ResourceLimitError(f"scheme B channel is limited to n <= {_SCHEME_B_SAMPLED_LIMIT}")
        if not 1 <= alpha_sample <= (1 << n2) - 1:
            raise ValueError(f"alpha_sample must be in 1..{(1 << n2) - 1}")
        rng = np.random.default_rng(seed)
        tags = sorted(int(t) + 1 for t in rng.choice((1 << n2) - 1, size=alpha_sample, replace=False))
    prob = 1.0 / len(tags)
    branches = []
    for alpha in tags:
        pts = np.array(
            [cfg.field.mul(alpha, kappa) for kappa in range(1 << cfg.k)], dtype=np.uint64
        )
        avg = _kernels.pauli_mix(rho.mat, pts, cfg.n)
        branches.append((prob, alpha, DensityMatrix(avg, validate=False)))
    return ClassicalQuantumState(tuple(branches))


# ---------------------------------------------------------------------------
# Scheme C: prime-dimension phase layer plus quadratic shear


def next_odd_prime_geq(x: int) -> int:
    c = max(3, x + (1 - (x & 1)))  # first odd >= x (and >= 3)
    while not is_prime(c):
        c += 2
    return c


class SchemeCConfig:
    """Parameters for scheme C on n qubits.

    Works in the smallest odd prime dimension d >= 2^n; the diagonal sign
    layer is keyed by ``sbset`` over ceil(log2 d) bits, certified at
    construction.  ``secure`` holds when the certified bias is at most
    epsilon_target.
    """

    __slots__ = ("n", "d", "m", "sbset", "epsilon_target", "cert")

    def __init__(self, n: int, sbset: SmallBiasSet, epsilon_target: float):
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        d = next_odd_prime_geq(1 << n)
        m = max(1, math.ceil(math.log2(d)))
        if sbset.m != m:
            raise ValueError(f"set samples {sbset.m}-bit strings, dimension {d} needs {m}")
        if not 0 < epsilon_target <= 1.0:
            raise ValueError(f"epsilon target must be in (0, 1], got {epsilon_target}")
        self.n = n
        self.d = d
        self.m = m
        self.sbset = sbset
        self.epsilon_target = float(epsilon_target)
        self.cert: BiasReport = certify_bias(sbset)

    @property
    def epsilon(self) -> float:
        """Certified bias of the phase-layer set (the distance bound)."""
        return self.cert.max_bias

    @property
    def secure(self) -> bool:
        return self.epsilon <= self.epsilon_target

    @property
    def key_bits(self) -> int:
        return math.ceil(math.log2(self.d)) + max(1, math.ceil(math.log2(self.sbset.size)))

    def __repr__(self):
        return (
            f"SchemeCConfig(n={self.n}, d={self.d}, |B|={self.sbset.size}, "
            f"epsilon={self.epsilon:.6g})"
        )


def embed_qubits(rho: DensityMatrix, d: int) -> DensityMatrix:
    """Embed an n-qubit state into dimension d >= 2^n (zero padding)."""
    if d < rho.dim:
        raise ValueError(f"target dimension {d} is below the state dimension {rho.dim}")
    out = np.zeros((d, d), dtype=np.complex128)
    out[: rho.dim, : rho.dim] = rho.mat
    return DensityMatrix(out, validate=False)


def unembed_qubits(rho_d: DensityMatrix, n: int, tol: float = 1e-10) -> DensityMatrix:
    """Restrict back to the first 2^n coordinates.

    The state must actually live there: mass outside above ``tol`` raises
    InvalidStateError.  The restricted block is renormalized by its trace
    to absorb rounding.
    """
    dim = 1 << n
    if rho_d.dim < dim:
        raise ValueError(f"state dimension {rho_d.dim} is below 2^{n}")
    outside = float(np.trace(rho_d.mat).real - np.trace(rho_d.mat[:dim, :dim]).real)
    if outside > tol:
        raise InvalidStateError(f"mass {outside:.3g} outside the first {dim} coordinates")
    block = rho_d.mat[:dim, :dim]
    return DensityMatrix(block / np.trace(block).real)


def scheme_c_keygen(cfg: SchemeCConfig, seed: int) -> Key:
    rng = np.random.default_rng(seed)
    a = int(rng.integers(cfg.d))
    b_idx = int(rng.integers(cfg.sbset.size))
    return Key("C", (a, b_idx))


def _check_scheme_c_key(cfg: SchemeCConfig, key: Key) -> tuple[int, int]:
    if key.scheme != "C":
        raise ValueError(f"key is for scheme {key.scheme}, not C")
    a, b_idx = key.material
    if not 0 <= a < cfg.d:
        raise ValueError(f"shift {a} out of range for dimension {cfg.d}")
    if not 0 <= b_idx < cfg.sbset.size:
        raise ValueError(f"mask index {b_idx} out of range")
    return a, b_idx


def scheme_c_encrypt(cfg: SchemeCConfig, key: Key, rho_d: DensityMatrix) -> Ciphertext:
    """Apply the keyed sign mask, then the keyed shift-and-quadratic-phase."""
    a, b_idx = _check_scheme_c_key(cfg, key)
    if rho_d.dim != cfg.d:
        raise ValueError(f"state dimension {rho_d.dim} != {cfg.d}; embed first")
    mask = int(cfg.sbset.points[b_idx])
    s1 = phase_mask_conjugate(rho_d, mask)
    return Ciphertext("C", conjugate_qudit(s1, a, (a * a) % cfg.d))


def scheme_c_decrypt(cfg: SchemeCConfig, key: Key, ct: Ciphertext) -> DensityMatrix:
    if ct.scheme != "C":
        raise ValueError(f"ciphertext is for scheme {ct.scheme}, not C")
    a, b_idx = _check_scheme_c_key(cfg, key)
    if ct.state.dim != cfg.d:
        raise ValueError(f"ciphertext dimension {ct.state.dim} != {cfg.d}")
    mask = int(cfg.sbset.points[b_idx])
    s1 = conjugate_qudit(ct.state, -a, -(a * a) % cfg.d)
    return phase_mask_conjugate(s1, mask)


def scheme_c_phase_channel(cfg: SchemeCConfig, rho_d: DensityMatrix) -> DensityMatrix:
    """Average over the sign-mask key alone.

    Entry (x, y) is scaled by the set's signed bias at x XOR y, so every
    off-diagonal entry shrinks to at most the certified bias times its
    input magnitude and the diagonal is untouched.
    """
    if rho_d.dim != cfg.d:
        raise ValueError(f"state dimension {rho_d.dim} != {cfg.d}")
    bias = bias_vector(cfg.sbset)
    x = np.arange(cfg.d)
    factors = bias[x[:, None] ^ x[None, :]]
    return DensityMatrix(factors * rho_d.mat, validate=False)


def scheme_c_core_channel(rho_d: DensityMatrix) -> DensityMatrix:
    """Average over a of conjugation by X^a Z^(a^2 mod d), d prime.

    Exact output purity is 1/d + (sum of squared off-diagonal input
    magnitudes)/d; in particular diagonal inputs map to I/d exactly.  The
    quadratic exponent needs d odd so that 2 is invertible mod d.
    """
    d = rho_d.dim
    if not is_prime(d) or d == 2:
        raise ValueError(f"dimension must be an odd prime, got {d}")
    return DensityMatrix(_kernels.qudit_core_mix(rho_d.mat), validate=False)


def scheme_c_channel(cfg: SchemeCConfig, rho_d: DensityMatrix) -> DensityMatrix:
    """The adversary's view: sign-mask average followed by the core average."""
    return scheme_c_core_channel(scheme_c_phase_channel(cfg, rho_d))


# ---------------------------------------------------------------------------
# key-length accounting


@dataclass(frozen=True)
class KeyLengthRow:
    """One line of the key-length table.

    ``bits`` is the ceiling of the formula value; ``plus_constant`` marks
    formulas exact only up to an additive constant; ``constructed`` is
    False for branches whose ingredient is not built here.
    """

    scheme: str
    bits: int
    plus_constant: bool
    constructed: bool
    note: str


def key_length_table(n: int, epsilon: float) -> list[KeyLengthRow]:
    """Key budgets of the three schemes at block size n and slack epsilon."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0 < epsilon <= 1.0:
        raise ValueError(f"epsilon must be in (0, 1], got {epsilon}")
    le = math.log2(1.0 / epsilon)
    ln = math.log2(n) if n > 1 else 0.0
    a_bits = math.ceil(n + 2 * ln + 2 * le)
    b_bits = math.ceil(n + 2 * le)
    c_left = 2 * ln + 2 * le
    c_right = ln + 3 * le
    c_aghp = math.ceil(n + c_left)
    c_amp = math.ceil(n + c_right)
    rows = [
        KeyLengthRow("A", a_bits, True, True, "single small-bias set over 2n bits"),
        KeyLengthRow("B", b_bits, False, True, "set family with public field tag"),
        KeyLengthRow("C-aghp", c_aghp, True, True, "prime-dimension hybrid, power-construction mask"),
        KeyLengthRow("C-amplified", c_amp, True, False,
                     "prime-dimension hybrid, distance-amplified mask (formula only, not constructed)"),
        KeyLengthRow("C", min(c_aghp, c_amp), True, min(c_aghp, c_amp) == c_aghp,
                     "best of the two mask constructions"),
    ]
    return rows


# ---------------------------------------------------------------------------
# fixed adversarial test states


def adversarial_states(dim: int, seed: int = 0, random_count: int = 3):
    """Labeled states that stress the channels from several directions.

    Basis states and the uniform superposition probe diagonal versus
    maximal coherence; for power-of-two dimensions the states
    (I + word)/dim are flat in the word basis; random pure states cover
    the rest.  Deterministic for a given seed.
    """
    if dim < 2:
        raise ValueError(f"dimension must be >= 2, got {dim}")
    out = [
        ("basis_0", DensityMatrix.basis_state(dim, 0)),
        ("basis_last", DensityMatrix.basis_state(dim, dim - 1)),
        ("uniform_sup", DensityMatrix.pure(np.ones(dim))),
    ]
    if dim & (dim - 1) == 0:
        n = dim.bit_length() - 1
        eye = np.eye(dim, dtype=np.complex128)
        allb = dim - 1
        out.append(("flat_plus_x", DensityMatrix((eye + pauli_dense(PauliOp(n, allb, 0))) / dim)))
        out.append(("flat_plus_z", DensityMatrix((eye + pauli_dense(PauliOp(n, 0, allb))) / dim)))
        if n >= 2:
            # u and v disjoint keeps the word Hermitian
            out.append(("flat_plus_xz", DensityMatrix((eye + pauli_dense(PauliOp(n, 1, 2))) / dim)))
    else:
        v = np.zeros(dim)
        v[0] = v[1] = 1.0
        out.append(("coh_01", DensityMatrix.pure(v)))
    rng = np.random.default_rng(seed)
    for i in range(random_count):
        out.append((f"random_pure_{i}", random_pure(dim, rng)))
    return out
