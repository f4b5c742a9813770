"""Density matrices, block classical-quantum states, and exact metrics.

Everything runs at desk scale with dense complex128 arrays.  Eigenvalues
come from the package's own cyclic Jacobi solver (no LAPACK), so trace
distances are reproducible to the solver's tolerance across platforms.
Matrices are treated as immutable once constructed; every constructor
copies its input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import EigensolverError

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
EIGEN_TOL = -1e-9
_MAX_DIM = 1 << 12


def hermitian_eigenvalues(mat: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix by cyclic Jacobi sweeps.

    The input must be Hermitian to within 1e-8 entrywise; it is symmetrized
    before the sweep.  Convergence is the off-diagonal Frobenius mass
    falling below ``tol`` times the Frobenius norm, within ``max_sweeps``
    sweeps; failure raises EigensolverError rather than returning a
    truncated answer.
    """
    a = np.asarray(mat, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    if np.max(np.abs(a - a.conj().T)) > 1e-8:
        raise ValueError("matrix is not Hermitian within 1e-8")
    h = (a + a.conj().T) / 2
    vals, converged, sweeps = _kernels.jacobi_eigvals(h, tol, max_sweeps)
    if not converged:
        raise EigensolverError(
            f"Jacobi sweep did not converge in {sweeps} sweeps (dim {a.shape[0]})"
        )
    return vals


class DensityMatrix:
    """A validated density matrix over complex128.

    Construction checks squareness, Hermiticity (1e-10), unit trace
    (1e-10) and positive semidefiniteness (eigenvalues >= -1e-9, via the
    Jacobi solver).  Internal code that produces states from
    trace-preserving conjugations of validated states may skip the checks
    with ``validate=False``.
    """

    __slots__ = ("mat",)

    def __init__(self, mat, validate: bool = True):
        m = np.array(mat, dtype=np.complex128, order="C", copy=True)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {m.shape}")
        if m.shape[0] > _MAX_DIM:
            from .errors import ResourceLimitError

            raise ResourceLimitError(f"dimension {m.shape[0]} is beyond desk scale")
        if validate:
            if not np.all(np.isfinite(m)):
                raise ValueError("matrix has non-finite entries")
            if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
                raise ValueError("matrix is not Hermitian within 1e-10")
            tr = np.trace(m)
            if abs(tr - 1.0) > TRACE_TOL:
                raise ValueError(f"trace {tr} is not 1 within 1e-10")
            if float(hermitian_eigenvalues(m)[0]) < EIGEN_TOL:
                raise ValueError("matrix has an eigenvalue below -1e-9")
        self.mat = m

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @classmethod
    def pure(cls, vec) -> "DensityMatrix":
        """|v><v| for a nonzero vector v (normalized here)."""
        v = np.asarray(vec, dtype=np.complex128).reshape(-1)
        nrm = np.linalg.norm(v)
        if nrm == 0:
            raise ValueError("zero vector has no associated state")
        v = v / nrm
        return cls(np.outer(v, v.conj()), validate=False)

    @classmethod
    def basis_state(cls, dim: int, i: int) -> "DensityMatrix":
        if not 0 <= i < dim:
            raise ValueError(f"basis index {i} out of range for dimension {dim}")
        v = np.zeros(dim)
        v[i] = 1.0
        return cls.pure(v)

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        if dim < 1:
            raise ValueError(f"dimension must be >= 1, got {dim}")
        return cls(np.eye(dim, dtype=np.complex128) / dim, validate=False)

    @classmethod
    def from_diagonal(cls, probs) -> "DensityMatrix":
        p = np.asarray(probs, dtype=np.float64)
        if p.ndim != 1 or p.size == 0:
            raise ValueError("probabilities must form a nonempty vector")
        return cls(np.diag(p.astype(np.complex128)))

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim})"


def purity(rho: DensityMatrix) -> float:
    """Tr(rho^2), computed as the squared Frobenius norm."""
    return float(np.vdot(rho.mat, rho.mat).real)


def renyi2(rho: DensityMatrix) -> float:
    """Collision entropy -log2 Tr(rho^2)."""
    return float(-np.log2(purity(rho)))


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Trace norm of the difference, via the Jacobi eigensolver."""
    if rho.dim != sigma.dim:
        raise ValueError(f"dimension mismatch: {rho.dim} != {sigma.dim}")
    vals = hermitian_eigenvalues(rho.mat - sigma.mat)
    return float(np.sum(np.abs(vals)))


def distinguish_advantage(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Best single-measurement guessing probability between two states."""
    return 0.5 + trace_distance(rho, sigma) / 4.0


def purity_distance_bound(purity_value: float, dim: int) -> float:
    """Upper bound on the trace distance from the maximally mixed state.

    A state with Tr(rho^2) = p in dimension d satisfies
    ||rho - I/d||_tr <= sqrt(d p - 1) (Cauchy-Schwarz over the spectrum),
    so low purity certifies closeness to uniform.
    """
    if dim < 1:
        raise ValueError(f"dimension must be >= 1, got {dim}")
    if purity_value < 1.0 / dim - 1e-12:
        raise ValueError(f"purity {purity_value} below 1/{dim} is not a state purity")
    return float(np.sqrt(max(0.0, dim * purity_value - 1.0)))


@dataclass(frozen=True)
class ClassicalQuantumState:
    """A block state: distinct classical tags with quantum conditional states.

    ``branches`` holds (probability, tag, state) triples over a common
    quantum dimension.  Probabilities must be nonnegative and sum to 1
    within 1e-10; tags must be distinct.  The full matrix (block diagonal
    with blocks p_i * rho_i) is never materialized here.
    """

    branches: tuple[tuple[float, int, DensityMatrix], ...]

    def __post_init__(self):
        if not self.branches:
            raise ValueError("at least one branch is required")
        tags = [t for _, t, _ in self.branches]
        if len(set(tags)) != len(tags):
            raise ValueError("branch tags must be distinct")
        probs = np.array([p for p, _, _ in self.branches])
        if np.any(probs < -1e-12):
            raise ValueError("branch probabilities must be nonnegative")
        if abs(float(probs.sum()) - 1.0) > 1e-10:
            raise ValueError(f"branch probabilities sum to {probs.sum()}, not 1")
        dims = {r.dim for _, _, r in self.branches}
        if len(dims) != 1:
            raise ValueError(f"branches have mixed dimensions {sorted(dims)}")

    @property
    def block_dim(self) -> int:
        return self.branches[0][2].dim

    @property
    def total_dim(self) -> int:
        return len(self.branches) * self.block_dim


def cq_purity(s: ClassicalQuantumState) -> float:
    """Tr(rho^2) of the block state: sum_i p_i^2 Tr(rho_i^2)."""
    return float(sum(p * p * purity(r) for p, _, r in s.branches))


def cq_trace_distance_uniform(s: ClassicalQuantumState) -> float:
    """Trace distance from uniform tags with maximally mixed conditionals.

    The reference state puts probability 1/N on each tag present and I/d on
    the quantum side; block diagonality makes the distance the sum of
    per-branch trace norms.
    """
    n = len(s.branches)
    d = s.block_dim
    target = np.eye(d, dtype=np.complex128) / (n * d)
    total = 0.0
    for p, _, r in s.branches:
        vals = hermitian_eigenvalues(p * r.mat - target)
        total += float(np.sum(np.abs(vals)))
    return total


def random_pure(dim: int, rng: np.random.Generator) -> DensityMatrix:
    """Haar-ish random pure state from a normalized complex Gaussian vector."""
    if not 1 <= dim <= _MAX_DIM:
        raise ValueError(f"dimension must be in 1..{_MAX_DIM}, got {dim}")
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return DensityMatrix.pure(v)


def random_mixed(dim: int, rank: int, rng: np.random.Generator) -> DensityMatrix:
    """Uniform mixture of ``rank`` independent random pure states."""
    if rank < 1:
        raise ValueError(f"rank must be >= 1, got {rank}")
    if not 1 <= dim <= _MAX_DIM:
        raise ValueError(f"dimension must be in 1..{_MAX_DIM}, got {dim}")
    acc = np.zeros((dim, dim), dtype=np.complex128)
    for _ in range(rank):
        acc += random_pure(dim, rng).mat
    return DensityMatrix(acc / rank, validate=False)


def random_pure_density(n_qubits: int, seed: int) -> DensityMatrix:
    """Seeded random pure state on n qubits."""
    return random_pure(1 << n_qubits, np.random.default_rng(seed))


def random_mixed_density(n_qubits: int, rank: int, seed: int) -> DensityMatrix:
    """Seeded random rank-limited mixed state on n qubits."""
    return random_mixed(1 << n_qubits, rank, np.random.default_rng(seed))


# ---------------------------------------------------------------------------
# file format: "QSTATE v1 dim=<d>" then d rows of d complex entries
# formatted re{+-}im i with 17 significant digits (exact float64 round trip)


def format_complex(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}i"


def parse_complex(text: str) -> complex:
    if not text.endswith("i"):
        raise ValueError(f"bad complex entry: {text!r}")
    body = text[:-1]
    split = -1
    for i in range(1, len(body)):
        if body[i] in "+-" and body[i - 1] not in "eE":
            split = i
    if split < 0:
        raise ValueError(f"bad complex entry: {text!r}")
    try:
        return complex(float(body[:split]), float(body[split:]))
    except ValueError as exc:
        raise ValueError(f"bad complex entry: {text!r}") from exc


def write_state(path, rho: DensityMatrix):
    d = rho.dim
    lines = [f"QSTATE v1 dim={d}"]
    for i in range(d):
        lines.append(" ".join(format_complex(z) for z in rho.mat[i]))
    text = "\n".join(lines) + "\n"
    if hasattr(path, "write"):
        path.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def read_state(path, validate: bool = True) -> DensityMatrix:
    if hasattr(path, "read"):
        text = path.read()
    else:
        with open(path) as fh:
            text = fh.read()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty state file")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "QSTATE" or head[1] != "v1" or not head[2].startswith("dim="):
        raise ValueError(f"bad state header: {lines[0]!r}")
    try:
        d = int(head[2][4:])
    except ValueError as exc:
        raise ValueError(f"bad state header: {lines[0]!r}") from exc
    if len(lines) != d + 1:
        raise ValueError(f"expected {d} rows, found {len(lines) - 1}")
    mat = np.empty((d, d), dtype=np.complex128)
    for i, ln in enumerate(lines[1:]):
        entries = ln.split()
        if len(entries) != d:
            raise ValueError(f"row {i} has {len(entries)} entries, expected {d}")
        for j, tok in enumerate(entries):
            mat[i, j] = parse_complex(tok)
    return DensityMatrix(mat, validate=validate)
