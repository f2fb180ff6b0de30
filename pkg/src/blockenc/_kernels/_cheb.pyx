# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Clenshaw evaluation of Chebyshev series, compiled hot path.

The degree search evaluates series with thousands of coefficients on grids
of ~10^4-10^5 points many times per parameter set; this inner loop dominates
the whole sweep.  Points are processed in blocks so the per-point recurrence
chains run independently and the block loop vectorises.
"""

def cheb_eval(double[::1] coeffs, double[::1] xs, double[::1] out):
    cdef Py_ssize_t n = coeffs.shape[0]
    cdef Py_ssize_t m = xs.shape[0]
    cdef Py_ssize_t i0, i, k, width, t
    cdef double ck
    cdef double x2[64]
    cdef double b0[64]
    cdef double b1[64]
    cdef double b2[64]

    if n == 0:
        for i in range(m):
            out[i] = 0.0
        return
    if n == 1:
        for i in range(m):
            out[i] = coeffs[0]
        return

    with nogil:
        for i0 in range(0, m, 64):
            width = m - i0
            if width > 64:
                width = 64
            for t in range(width):
                x2[t] = 2.0 * xs[i0 + t]
                b1[t] = 0.0
                b2[t] = 0.0
            for k in range(n - 1, 0, -1):
                ck = coeffs[k]
                for t in range(width):
                    b0[t] = ck + x2[t] * b1[t] - b2[t]
                    b2[t] = b1[t]
                    b1[t] = b0[t]
            for t in range(width):
                out[i0 + t] = coeffs[0] + 0.5 * x2[t] * b1[t] - b2[t]
