# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the numeric kernels in ``pyback``.

Same five functions, same semantics, same deterministic accumulation
order.  The integer-valued kernels (fwht on integer-valued input,
aghp_points, pauli_mix) match the numpy fallback bit for bit; the rest
agree to rounding.
"""

import numpy as np

cimport cython


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


def fwht(double[::1] a):
    """In-place Walsh-Hadamard transform, natural ordering."""
    cdef Py_ssize_t n = a.shape[0]
    if n == 0 or (n & (n - 1)) != 0:
        raise ValueError(f"length must be a power of two, got {n}")
    cdef Py_ssize_t h = 1, i, j
    cdef double x, y
    while h < n:
        for i in range(0, n, 2 * h):
            for j in range(i, i + h):
                x = a[j]
                y = a[j + h]
                a[j] = x + y
                a[j + h] = x - y
        h *= 2
    return np.asarray(a)


def aghp_points(int n_out, int m, unsigned long long modulus):
    """Power-construction sample points; see the pyback docstring."""
    cdef Py_ssize_t size = 1 << m
    out_arr = np.zeros(size * size, dtype=np.uint64)
    cdef unsigned long long[::1] out = out_arr
    pw_arr = np.ones(size, dtype=np.uint64)
    cdef unsigned long long[::1] pw = pw_arr
    cdef Py_ssize_t i, xi, yi, bit
    cdef unsigned long long r, t, par
    for i in range(n_out):
        for xi in range(size):
            for yi in range(size):
                par = <unsigned long long>(__builtin_popcountll(pw[xi] & <unsigned long long>yi) & 1)
                out[xi * size + yi] |= par << i
        for xi in range(size):
            r = 0
            t = pw[xi]
            for bit in range(m):
                if (xi >> bit) & 1:
                    r ^= t
                t <<= 1
                if (t >> m) & 1:
                    t ^= modulus
            pw[xi] = r
    return out_arr


def pauli_mix(rho, points, int n):
    """Average of signed-permutation conjugations; see pyback."""
    rho_arr = np.ascontiguousarray(rho, dtype=np.complex128)
    pts_arr = np.ascontiguousarray(points, dtype=np.uint64)
    cdef double complex[:, ::1] r = rho_arr
    cdef unsigned long long[::1] pts = pts_arr
    cdef Py_ssize_t d = 1 << n
    if r.shape[0] != d or r.shape[1] != d:
        raise ValueError(f"matrix is {r.shape[0]}x{r.shape[1]}, expected {d}x{d}")
    out_arr = np.zeros((d, d), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    sgn_arr = np.empty(d, dtype=np.float64)
    cdef double[::1] sgn = sgn_arr
    cdef Py_ssize_t kidx, i, j
    cdef unsigned long long pt, a, b, mask = <unsigned long long>(d - 1)
    cdef double si
    for kidx in range(pts.shape[0]):
        pt = pts[kidx]
        a = pt & mask
        b = (pt >> n) & mask
        for i in range(d):
            sgn[i] = 1.0 - 2.0 * <double>(__builtin_popcountll(b & <unsigned long long>i) & 1)
        for i in range(d):
            si = sgn[i]
            for j in range(d):
                out[i, j] = out[i, j] + (si * sgn[j]) * r[i ^ a, j ^ a]
    cdef double inv = 1.0 / <double>pts.shape[0]
    for i in range(d):
        for j in range(d):
            out[i, j] = out[i, j] * inv
    return out_arr


def qudit_core_mix(rho):
    """Average of shift-and-quadratic-phase conjugations; see pyback."""
    rho_arr = np.ascontiguousarray(rho, dtype=np.complex128)
    cdef double complex[:, ::1] r = rho_arr
    cdef Py_ssize_t d = r.shape[0]
    if r.shape[1] != d:
        raise ValueError("matrix is not square")
    # phase table from np.exp so both backends use identical values
    w_arr = np.exp(2j * np.pi * np.arange(d) / d)
    cdef double complex[::1] w = w_arr
    out_arr = np.zeros((d, d), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t a, s, t, k, ps, pt
    cdef double complex phs
    for a in range(d):
        k = (a * a) % d
        for s in range(d):
            ps = (s - a) % d
            if ps < 0:
                ps += d
            phs = w[(k * s) % d]
            for t in range(d):
                pt = (t - a) % d
                if pt < 0:
                    pt += d
                out[s, t] = out[s, t] + (phs * w[(k * t) % d].conjugate()) * r[ps, pt]
    cdef double inv = 1.0 / <double>d
    for s in range(d):
        for t in range(d):
            out[s, t] = out[s, t] * inv
    return out_arr


def jacobi_eigvals(h, double tol=1e-12, int max_sweeps=100):
    """Cyclic complex Jacobi eigensolver; see pyback."""
    a_arr = np.array(h, dtype=np.complex128, order="C")
    cdef double complex[:, ::1] a = a_arr
    cdef Py_ssize_t d = a.shape[0]
    if a.shape[1] != d:
        raise ValueError("matrix is not square")
    if d == 1:
        return np.array([a_arr[0, 0].real]), True, 0
    cdef double fnorm = float(np.linalg.norm(a_arr))
    if fnorm == 0.0:
        return np.zeros(d), True, 0
    cdef double skip = 1e-18 * fnorm
    cdef double thresh = tol * fnorm
    cdef Py_ssize_t sweep, p, q, i
    cdef double off2, absg, tau, tval, c, s
    cdef double complex g, ph, phc, tmp_p, tmp_q
    cdef bint converged = False
    cdef int sweeps_done = max_sweeps
    for sweep in range(max_sweeps):
        off2 = 0.0
        for p in range(d):
            for q in range(d):
                if p != q:
                    g = a[p, q]
                    off2 += g.real * g.real + g.imag * g.imag
        if off2 <= thresh * thresh:
            converged = True
            sweeps_done = sweep
            break
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
                    tval = 1.0 / (tau + (1.0 + tau * tau) ** 0.5)
                else:
                    tval = -1.0 / (-tau + (1.0 + tau * tau) ** 0.5)
                c = 1.0 / (1.0 + tval * tval) ** 0.5
                s = tval * c
                phc = ph.conjugate()
                for i in range(d):
                    tmp_p = a[i, p]
                    tmp_q = a[i, q]
                    a[i, p] = c * tmp_p - (s * phc) * tmp_q
                    a[i, q] = s * tmp_p + (c * phc) * tmp_q
                for i in range(d):
                    tmp_p = a[p, i]
                    tmp_q = a[q, i]
                    a[p, i] = c * tmp_p - (s * ph) * tmp_q
                    a[q, i] = s * tmp_p + (c * ph) * tmp_q
                a[p, q] = 0.0
                a[q, p] = 0.0
    if not converged:
        off2 = 0.0
        for p in range(d):
            for q in range(d):
                if p != q:
                    g = a[p, q]
                    off2 += g.real * g.real + g.imag * g.imag
        converged = off2 <= thresh * thresh
    return np.sort(np.diagonal(a_arr).real.copy()), bool(converged), sweeps_done
