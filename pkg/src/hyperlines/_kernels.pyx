# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled LU determinant kernels (hot path of the Monte Carlo engine).

Operation-for-operation identical to _kernels_py.py: same pivot rule, same
temporaries, same rounding points.  Compiled with -ffp-contract=off so no
multiply-add fusion can change results relative to the numpy fallback.
"""

import numpy as np

from libc.math cimport fabs, frexp, sqrt

BACKEND_NAME = "compiled"


def lu_logabsdet_real_batch(double[:, :, ::1] mats):
    """Batched real LU with partial pivoting; mats is destroyed.

    Returns (sign int8[S], mant float64[S] in [1,2) or 0, exp int64[S]).
    """
    cdef Py_ssize_t S = mats.shape[0]
    cdef Py_ssize_t D = mats.shape[1]
    sign_arr = np.ones(S, dtype=np.int8)
    mant_arr = np.zeros(S, dtype=np.float64)
    exp_arr = np.zeros(S, dtype=np.int64)
    cdef signed char[::1] sign = sign_arr
    cdef double[::1] mant = mant_arr
    cdef long long[::1] expo = exp_arr
    cdef Py_ssize_t s, k, r, j, best
    cdef double bv, v, p, pm, nm, rm, t, m
    cdef long long re
    cdef int pe, sg
    with nogil:
        for s in range(S):
            sg = 1
            rm = 0.5
            re = 1
            for k in range(D):
                best = k
                bv = fabs(mats[s, k, k])
                for r in range(k + 1, D):
                    v = fabs(mats[s, r, k])
                    if v > bv:
                        bv = v
                        best = r
                if bv == 0.0:
                    sg = 0
                    break
                if best != k:
                    for j in range(D):
                        t = mats[s, k, j]
                        mats[s, k, j] = mats[s, best, j]
                        mats[s, best, j] = t
                    sg = -sg
                p = mats[s, k, k]
                if p < 0.0:
                    sg = -sg
                pm = frexp(fabs(p), &pe)
                nm = rm * pm
                if nm < 0.5:
                    nm = nm * 2.0
                    re = re + pe - 1
                else:
                    re = re + pe
                rm = nm
                for r in range(k + 1, D):
                    m = mats[s, r, k] / p
                    for j in range(k + 1, D):
                        t = m * mats[s, k, j]
                        mats[s, r, j] = mats[s, r, j] - t
            if sg == 0:
                sign[s] = 0
                mant[s] = 0.0
                expo[s] = 0
            else:
                sign[s] = sg
                mant[s] = rm * 2.0
                expo[s] = re - 1
    return sign_arr, mant_arr, exp_arr


def lu_logabsdetsq_complex_batch(double[:, :, ::1] ar, double[:, :, ::1] ai):
    """Batched complex LU on split parts (destroyed); pivot score |re| + |im|.

    Returns (phase_re, phase_im, mant, exp) with |det|^2 = mant * 2^exp.
    """
    cdef Py_ssize_t S = ar.shape[0]
    cdef Py_ssize_t D = ar.shape[1]
    phr_arr = np.ones(S, dtype=np.float64)
    phi_arr = np.zeros(S, dtype=np.float64)
    mant_arr = np.zeros(S, dtype=np.float64)
    exp_arr = np.zeros(S, dtype=np.int64)
    cdef double[::1] phr = phr_arr
    cdef double[::1] phi = phi_arr
    cdef double[::1] mant = mant_arr
    cdef long long[::1] expo = exp_arr
    cdef Py_ssize_t s, k, r, j, best
    cdef double bv, v, pr, pi, t1, t2, psq, pm, nm, rm, pabs, cr, ci
    cdef double u1, u2, u3, u4, a, b, arki, aiki, s1, s2, s3, s4, snum, sden
    cdef double mr, mi, v1, v2, v3, v4, tr, ti, tswap
    cdef long long re
    cdef int pe, dead
    with nogil:
        for s in range(S):
            a = 1.0
            b = 0.0
            rm = 0.5
            re = 1
            dead = 0
            for k in range(D):
                best = k
                bv = fabs(ar[s, k, k]) + fabs(ai[s, k, k])
                for r in range(k + 1, D):
                    v = fabs(ar[s, r, k]) + fabs(ai[s, r, k])
                    if v > bv:
                        bv = v
                        best = r
                if bv == 0.0:
                    dead = 1
                    break
                if best != k:
                    for j in range(D):
                        tswap = ar[s, k, j]
                        ar[s, k, j] = ar[s, best, j]
                        ar[s, best, j] = tswap
                        tswap = ai[s, k, j]
                        ai[s, k, j] = ai[s, best, j]
                        ai[s, best, j] = tswap
                    a = -a
                    b = -b
                pr = ar[s, k, k]
                pi = ai[s, k, k]
                t1 = pr * pr
                t2 = pi * pi
                psq = t1 + t2
                pm = frexp(psq, &pe)
                nm = rm * pm
                if nm < 0.5:
                    nm = nm * 2.0
                    re = re + pe - 1
                else:
                    re = re + pe
                rm = nm
                pabs = sqrt(psq)
                cr = pr / pabs
                ci = pi / pabs
                u1 = a * cr
                u2 = b * ci
                u3 = a * ci
                u4 = b * cr
                a = u1 - u2
                b = u3 + u4
                for r in range(k + 1, D):
                    arki = ar[s, r, k]
                    aiki = ai[s, r, k]
                    s1 = arki * pr
                    s2 = aiki * pi
                    snum = s1 + s2
                    mr = snum / psq
                    s3 = aiki * pr
                    s4 = arki * pi
                    sden = s3 - s4
                    mi = sden / psq
                    for j in range(k + 1, D):
                        v1 = mr * ar[s, k, j]
                        v2 = mi * ai[s, k, j]
                        tr = v1 - v2
                        v3 = mr * ai[s, k, j]
                        v4 = mi * ar[s, k, j]
                        ti = v3 + v4
                        ar[s, r, j] = ar[s, r, j] - tr
                        ai[s, r, j] = ai[s, r, j] - ti
            if dead:
                phr[s] = 0.0
                phi[s] = 0.0
                mant[s] = 0.0
                expo[s] = 0
            else:
                phr[s] = a
                phi[s] = b
                mant[s] = rm * 2.0
                expo[s] = re - 1
    return phr_arr, phi_arr, mant_arr, exp_arr
