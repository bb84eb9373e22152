# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled RK4 step-doubling kernel for Hamiltonians linear in closed-form drives.

H(t) = H0 + sum_k c_k(t) M_k with c_k(t) = sum_{j: owner_j = k} amp_j * f(shape_j, rate_j t).
Shape codes match :class:`spindimer.drives.Shape`. Step control mirrors
``_reference.integrate`` exactly.
"""

from libc.math cimport cosh, sin, cos, tanh, exp, fabs, pow, sqrt
from libc.stdlib cimport malloc, free

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef double complex cplx

cdef enum:
    OK = 0
    STEP_LIMIT = 1
    TOL_UNREACHABLE = 2


cdef inline double _basis(int shape, double x) noexcept nogil:
    if shape == 0:
        return 1.0
    elif shape == 1:
        if fabs(x) > 700.0:
            return 0.0
        return 1.0 / cosh(x)
    elif shape == 2:
        return cosh(x)
    elif shape == 3:
        return sin(x)
    elif shape == 4:
        return cos(x)
    elif shape == 5:
        return tanh(x)
    elif shape == 6:
        return exp(-x * x)
    return 0.0


cdef struct Model:
    int n
    int m
    int nmat
    int nterm
    cplx *h0
    cplx *mats
    int *shapes
    double *amps
    double *rates
    int *owners
    double *coef
    cplx *H
    cplx scale


cdef void _rhs(Model *M, double t, const cplx *y, cplx *out) noexcept nogil:
    cdef int n = M.n, m = M.m, nn = M.n * M.n
    cdef int i, j, k
    cdef cplx acc
    cdef double c
    for k in range(M.nmat):
        M.coef[k] = 0.0
    for j in range(M.nterm):
        M.coef[M.owners[j]] += M.amps[j] * _basis(M.shapes[j], M.rates[j] * t)
    for i in range(nn):
        M.H[i] = M.h0[i]
    for k in range(M.nmat):
        c = M.coef[k]
        if c != 0.0:
            for i in range(nn):
                M.H[i] = M.H[i] + c * M.mats[k * nn + i]
    for i in range(n):
        for j in range(m):
            acc = 0.0
            for k in range(n):
                acc = acc + M.H[i * n + k] * y[k * m + j]
            out[i * m + j] = M.scale * acc


cdef void _rk4(Model *M, double t, const cplx *y, const cplx *k1, double h, cplx *out,
               cplx *k2, cplx *k3, cplx *k4, cplx *tmp) noexcept nogil:
    cdef int i, N = M.n * M.m
    cdef double hh = 0.5 * h
    for i in range(N):
        tmp[i] = y[i] + hh * k1[i]
    _rhs(M, t + hh, tmp, k2)
    for i in range(N):
        tmp[i] = y[i] + hh * k2[i]
    _rhs(M, t + hh, tmp, k3)
    for i in range(N):
        tmp[i] = y[i] + h * k3[i]
    _rhs(M, t + h, tmp, k4)
    for i in range(N):
        out[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])


cdef inline double _cabs(cplx z) noexcept nogil:
    return sqrt(z.real * z.real + z.imag * z.imag)


def integrate_linear(
    cplx[::1] h0,
    cplx[::1] mats,
    int[::1] shapes,
    double[::1] amps,
    double[::1] rates,
    int[::1] owners,
    int nmat,
    cplx[::1] y0,
    int n,
    int m,
    double[::1] t_out,
    double hbar,
    double abs_tol,
    double rel_tol,
    double h_init,
    long max_steps,
    bint adaptive,
):
    """Return ``(ys, steps, status, t_fail)`` with ``ys`` of shape (len(t_out), n*m)."""
    cdef int N = n * m
    cdef int nout = t_out.shape[0]
    cdef Model M
    cdef cnp.ndarray[cplx, ndim=2] ys = np.empty((nout, N), dtype=np.complex128)
    cdef cplx[:, ::1] ysv = ys
    cdef int dummy_int = 0
    cdef double dummy_double = 0.0
    cdef cplx *work = <cplx *> malloc(sizeof(cplx) * (N * 12 + n * n))
    cdef double *coef = <double *> malloc(sizeof(double) * (nmat + 1))
    if work == NULL or coef == NULL:
        free(work)
        free(coef)
        raise MemoryError()

    M.n = n
    M.m = m
    M.nmat = nmat
    M.nterm = shapes.shape[0]
    M.h0 = &h0[0]
    M.mats = &mats[0] if mats.shape[0] > 0 else NULL
    M.shapes = &shapes[0] if shapes.shape[0] > 0 else &dummy_int
    M.amps = &amps[0] if amps.shape[0] > 0 else &dummy_double
    M.rates = &rates[0] if rates.shape[0] > 0 else &dummy_double
    M.owners = &owners[0] if owners.shape[0] > 0 else &dummy_int
    M.coef = coef
    M.H = work + N * 12
    M.scale = -1j / hbar

    cdef cplx *y = work
    cdef cplx *k1 = work + N
    cdef cplx *full = work + 2 * N
    cdef cplx *mid = work + 3 * N
    cdef cplx *kmid = work + 4 * N
    cdef cplx *two = work + 5 * N
    cdef cplx *k2 = work + 6 * N
    cdef cplx *k3 = work + 7 * N
    cdef cplx *k4 = work + 8 * N
    cdef cplx *tmp = work + 9 * N

    cdef int i, kk
    cdef double t = 0.0, h = h_init, hh, half, target, err, tol, fac, ymax, d
    cdef long steps = 0
    cdef bint last
    cdef int status = OK

    for i in range(N):
        y[i] = y0[i]

    with nogil:
        for kk in range(nout):
            target = t_out[kk]
            while t < target:
                last = t + h >= target
                hh = target - t if last else h
                _rhs(&M, t, y, k1)
                _rk4(&M, t, y, k1, hh, full, k2, k3, k4, tmp)
                steps += 1
                if steps > max_steps:
                    status = STEP_LIMIT
                    break
                if adaptive:
                    half = 0.5 * hh
                    _rk4(&M, t, y, k1, half, mid, k2, k3, k4, tmp)
                    _rhs(&M, t + half, mid, kmid)
                    _rk4(&M, t + half, mid, kmid, half, two, k2, k3, k4, tmp)
                    err = 0.0
                    ymax = 0.0
                    for i in range(N):
                        d = _cabs(two[i] - full[i])
                        if d > err:
                            err = d
                        d = _cabs(two[i])
                        if d > ymax:
                            ymax = d
                    err = err / 15.0
                    tol = abs_tol + rel_tol * ymax
                    if err == 0.0:
                        fac = 4.0
                    else:
                        fac = 0.9 * pow(tol / err, 0.2)
                        if fac > 4.0:
                            fac = 4.0
                        if fac < 0.2:
                            fac = 0.2
                    if err <= tol:
                        for i in range(N):
                            y[i] = two[i] + (two[i] - full[i]) / 15.0
                        t = target if last else t + hh
                        if (not last) or fac < 1.0:
                            h = hh * fac
                    else:
                        h = hh * fac
                        if h < 1e-14 * (fabs(t) if fabs(t) > 1.0 else 1.0):
                            status = TOL_UNREACHABLE
                            break
                else:
                    for i in range(N):
                        y[i] = full[i]
                    t = target if last else t + hh
            if status != OK:
                break
            for i in range(N):
                ysv[kk, i] = y[i]

    free(work)
    free(coef)
    return ys, steps, status, t
