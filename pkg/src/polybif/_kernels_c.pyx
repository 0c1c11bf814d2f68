# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: orbit jets for Newton/continuation, block iteration for diagrams."""

from libc.math cimport fabs, NAN


cdef inline double _horner(const double[::1] a, Py_ssize_t m, double x) noexcept nogil:
    cdef double acc = 0.0
    cdef Py_ssize_t j
    for j in range(m - 1, -1, -1):
        acc = acc * x + a[j]
    return acc


cdef inline double _horner_d(const double[::1] a, Py_ssize_t m, double x) noexcept nogil:
    cdef double acc = 0.0
    cdef Py_ssize_t j
    for j in range(m - 1, 0, -1):
        acc = acc * x + j * a[j]
    return acc


def orbit_jet(const double[::1] a, const double[::1] da, double x0, int n, double[::1] cycle):
    """Iterate ``n`` times from ``x0``; return ``(x_n, dx_n/dx0, dx_n/dt)``.

    ``cycle`` receives ``x_0 .. x_{n-1}``.
    """
    cdef Py_ssize_t m = a.shape[0], md = da.shape[0]
    cdef double x = x0, dx = 1.0, dt = 0.0, fx
    cdef int k
    with nogil:
        for k in range(n):
            cycle[k] = x
            fx = _horner_d(a, m, x)
            dt = fx * dt + _horner(da, md, x)
            dx = fx * dx
            x = _horner(a, m, x)
    return x, dx, dt


def iterate_block(const double[:, ::1] coeffs, const double[::1] x0, long transient,
                  long keep, double escape, double[:, ::1] out):
    """Iterate every row's map from its seed; record ``keep`` iterates after
    ``transient``.  Escaped rows are filled with NaN.  Returns escaped count."""
    cdef Py_ssize_t rows = coeffs.shape[0], m = coeffs.shape[1]
    cdef Py_ssize_t i, j
    cdef long k
    cdef double x, acc
    cdef long escaped = 0
    cdef bint lost
    with nogil:
        for i in range(rows):
            x = x0[i]
            lost = False
            for k in range(transient + keep):
                acc = 0.0
                for j in range(m - 1, -1, -1):
                    acc = acc * x + coeffs[i, j]
                x = acc
                if not (fabs(x) <= escape):
                    lost = True
                    break
                if k >= transient:
                    out[i, k - transient] = x
            if lost:
                escaped += 1
                for k in range(keep):
                    out[i, k] = NAN
    return escaped
