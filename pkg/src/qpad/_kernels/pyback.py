"""Numpy implementations of the numeric kernels.

The compiled twin (``qpad._kernels._core``) exposes the same five functions
with identical semantics; whichever is selected at import time, results
agree (bit-exact for the integer-valued kernels, to rounding for the rest).
All kernels are deterministic: accumulation order is fixed and independent
of any threading in the caller.
"""

import numpy as np


def fwht(a):
    """In-place Walsh-Hadamard transform of a float64 vector.

    Natural (Hadamard) ordering: out[k] = sum_j (-1)^popcount(k & j) in[j].
    The length must be a power of two.  Returns the input array.
    """
    n = a.shape[0]
    if a.ndim != 1 or n == 0 or (n & (n - 1)) != 0:
        raise ValueError(f"length must be a power of two, got shape {a.shape}")
    h = 1
    v = a
    while h < n:
        v = v.reshape(-1, 2, h)
        x = v[:, 0, :].copy()
        y = v[:, 1, :]
        v[:, 0, :] = x + y
        v[:, 1, :] = x - y
        v = v.reshape(n)
        h *= 2
    return a


def aghp_points(n_out, m, modulus):
    """Sample points of the power construction over GF(2^m).

    One point per pair (x, y) of field elements: bit i of the point is
    <x^i, y> with the inner product over GF(2).  Point index is
    (x << m) | y, so the result has 2^(2m) entries of n_out bits each.
    """
    size = 1 << m
    x = np.arange(size, dtype=np.uint64)
    pts = np.zeros((size, size), dtype=np.uint64)
    p = np.ones(size, dtype=np.uint64)  # x^0 == 1 for every x
    one = np.uint64(1)
    mnp = np.uint64(m)
    mod = np.uint64(modulus)
    for i in range(n_out):
        par = (np.bitwise_count(p[:, None] & x[None, :]) & np.uint8(1)).astype(np.uint64)
        pts |= par << np.uint64(i)
        # pointwise field multiply p[e] <- p[e] * e, schoolbook over the bits of e
        r = np.zeros_like(p)
        t = p
        for bit in range(m):
            r ^= t * ((x >> np.uint64(bit)) & one)
            t = t << one
            t ^= ((t >> mnp) & one) * mod
        p = r
    return pts.reshape(-1)


def pauli_mix(rho, points, n):
    """Average of conjugations of rho by signed permutations.

    Each 2n-bit point splits little-endian into (a, b) = (low n bits, high
    n bits) and contributes the conjugate with entries
    (-1)^(<b,i> + <b,j>) rho[i ^ a, j ^ a].  Points are accumulated in
    array order and the average uses the multiset size.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    d = 1 << n
    mask = d - 1
    idx = np.arange(d, dtype=np.uint64)
    out = np.zeros_like(rho)
    for pt in points:
        pt = int(pt)
        a = pt & mask
        b = (pt >> n) & mask
        s = 1.0 - 2.0 * (np.bitwise_count(np.uint64(b) & idx) & np.uint64(1)).astype(np.float64)
        perm = (idx ^ np.uint64(a)).astype(np.intp)
        out += (s[:, None] * s[None, :]) * rho[np.ix_(perm, perm)]
    out /= len(points)
    return out


def qudit_core_mix(rho):
    """Average over a of conjugation by the shift-and-quadratic-phase word.

    For dimension d (from the shape), term a maps entry (s, t) to
    w^(a^2 (s - t)) rho[s - a, t - a] with w = exp(2 pi i / d), indices
    mod d.  Terms a = 0 .. d-1 are accumulated in order, then divided by d.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    d = rho.shape[0]
    w = np.exp(2j * np.pi * np.arange(d) / d)
    idx = np.arange(d)
    out = np.zeros_like(rho)
    for a in range(d):
        k = (a * a) % d
        perm = (idx - a) % d
        ph = w[(k * idx) % d]
        out += (ph[:, None] * np.conj(ph)[None, :]) * rho[np.ix_(perm, perm)]
    out /= d
    return out


def jacobi_eigvals(h, tol=1e-12, max_sweeps=100):
    """Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations.

    Sweeps rotate every (p, q) pair; convergence is declared when the
    off-diagonal Frobenius mass drops below tol times the Frobenius norm of
    the input.  Returns (ascending eigenvalues, converged flag, sweeps).
    The caller is responsible for checking the flag.
    """
    a = np.array(h, dtype=np.complex128)
    d = a.shape[0]
    if d == 1:
        return np.array([a[0, 0].real]), True, 0
    fnorm = float(np.linalg.norm(a))
    if fnorm == 0.0:
        return np.zeros(d), True, 0
    skip = 1e-18 * fnorm
    offmask = ~np.eye(d, dtype=bool)

    def off_mass():
        # summed directly over off-diagonal entries: subtracting the diagonal
        # mass from the total cancels catastrophically near convergence
        return float(np.sqrt(np.sum(np.abs(a[offmask]) ** 2)))

    for sweep in range(max_sweeps):
        if off_mass() <= tol * fnorm:
            return np.sort(np.diagonal(a).real.copy()), True, sweep
        for p in range(d - 1):
            for q in range(p + 1, d):
                g = a[p, q]
                absg = abs(g)
                if absg <= skip:
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    continue
                ph = g / absg
                tau = (a[q, q].real - a[p, p].real) / (2.0 * absg)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                phc = np.conj(ph)
                colp = a[:, p].copy()
                colq = a[:, q].copy()
                a[:, p] = c * colp - (s * phc) * colq
                a[:, q] = s * colp + (c * phc) * colq
                rowp = a[p, :].copy()
                rowq = a[q, :].copy()
                a[p, :] = c * rowp - (s * ph) * rowq
                a[q, :] = s * rowp + (c * ph) * rowq
                a[p, q] = 0.0
                a[q, p] = 0.0
    converged = bool(off_mass() <= tol * fnorm)
    return np.sort(np.diagonal(a).real.copy()), converged, max_sweeps
