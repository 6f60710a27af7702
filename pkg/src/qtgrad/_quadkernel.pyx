# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loop for the quadratic benchmark.

One fused pass per iteration: step update, gradient refresh and the three
inner products the stepsize rules need.  Mirrors _quadkernel_py exactly.
"""

BACKEND = "cython"


def quad_step(double[::1] v, double[::1] xstar, double[::1] x,
              double[::1] g_old, double[::1] g_new,
              double alpha, double gscale):
    cdef Py_ssize_t i, n = x.shape[0]
    cdef double gy = 0.0, yy = 0.0, gg = 0.0
    cdef double xi, gi, yi
    for i in range(n):
        xi = x[i] - alpha * g_old[i]
        x[i] = xi
        gi = gscale * v[i] * (xi - xstar[i])
        g_new[i] = gi
        yi = gi - g_old[i]
        gy += g_old[i] * yi
        yy += yi * yi
        gg += gi * gi
    return gy, yy, gg


def quad_gradient(double[::1] v, double[::1] xstar, double[::1] x,
                  double gscale, double[::1] out):
    cdef Py_ssize_t i, n = x.shape[0]
    cdef double gg = 0.0, gi
    for i in range(n):
        gi = gscale * v[i] * (x[i] - xstar[i])
        out[i] = gi
        gg += gi * gi
    return gg


def quad_value(double[::1] v, double[::1] xstar, double[::1] x,
               double vscale):
    cdef Py_ssize_t i, n = x.shape[0]
    cdef double acc = 0.0, di
    for i in range(n):
        di = x[i] - xstar[i]
        acc += v[i] * di * di
    return vscale * acc
