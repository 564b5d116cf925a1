"""Pure numpy LU determinant kernels (fallback backend).

Implements exactly the same sequence of IEEE-754 operations as the compiled
kernel in _kernels.pyx: same pivot rule (first row of maximal score), same
temporaries, same rounding points.  The two backends therefore agree bit for
bit on identical inputs; tests assert this whenever the extension is built.

Determinant magnitudes are returned as (mantissa, base-2 exponent) pairs with
mantissa in [1, 2), renormalized with frexp after every pivot multiplication,
so there is no overflow for any matrix size used here.  Input matrices are
overwritten.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"


def lu_logabsdet_real_batch(mats: np.ndarray):
    """Batched real LU with partial pivoting.

    mats: (S, D, D) float64, destroyed.
    Returns (sign int8[S], mant float64[S] in [1,2) or 0, exp int64[S]).
    """
    S, D, _ = mats.shape
    sign = np.ones(S, dtype=np.int8)
    rm = np.full(S, 0.5)
    re = np.ones(S, dtype=np.int64)  # running |det| = rm * 2^re
    alive = np.ones(S, dtype=bool)
    ar = np.arange(S)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for k in range(D):
            sub = np.abs(mats[:, k:, k])
            piv = sub.argmax(axis=1)
            pv = sub[ar, piv]
            dead_now = alive & (pv == 0.0)
            sign[dead_now] = 0
            alive &= pv != 0.0
            do_swap = (piv != 0) & alive
            if do_swap.any():
                idx = np.nonzero(do_swap)[0]
                rows = piv[idx] + k
                tmp = mats[idx, k, :].copy()
                mats[idx, k, :] = mats[idx, rows, :]
                mats[idx, rows, :] = tmp
                sign[idx] = -sign[idx]
            p = mats[:, k, k]
            neg = alive & (p < 0.0)
            sign[neg] = -sign[neg]
            pm, pe = np.frexp(np.abs(p))
            nm = rm * pm
            small = nm < 0.5
            nm2 = np.where(small, nm * 2.0, nm)
            ne = re + pe.astype(np.int64) - small.astype(np.int64)
            rm = np.where(alive, nm2, rm)
            re = np.where(alive, ne, re)
            if k < D - 1:
                m = mats[:, k + 1 :, k] / p[:, None]
                m[~alive] = 0.0
                t = m[:, :, None] * mats[:, k : k + 1, k + 1 :]
                mats[:, k + 1 :, k + 1 :] -= t
    mant = np.where(sign != 0, rm * 2.0, 0.0)
    expo = np.where(sign != 0, re - 1, 0)
    return sign, mant, expo


def lu_logabsdetsq_complex_batch(ar_: np.ndarray, ai_: np.ndarray):
    """Batched complex LU on split real/imaginary parts, destroyed.

    Pivot score is |re| + |im|.  Returns (phase_re, phase_im, mant, exp) with
    |det|^2 = mant * 2^exp, mant in [1, 2) or 0, and phase the unit complex
    sign of det (0 for singular input).
    """
    S, D, _ = ar_.shape
    phr = np.ones(S)
    phi = np.zeros(S)
    rm = np.full(S, 0.5)
    re = np.ones(S, dtype=np.int64)  # running |det|^2 = rm * 2^re
    alive = np.ones(S, dtype=bool)
    idx_all = np.arange(S)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for k in range(D):
            score = np.abs(ar_[:, k:, k]) + np.abs(ai_[:, k:, k])
            piv = score.argmax(axis=1)
            pv = score[idx_all, piv]
            alive &= pv != 0.0
            do_swap = (piv != 0) & alive
            if do_swap.any():
                w = np.nonzero(do_swap)[0]
                rows = piv[w] + k
                for arr in (ar_, ai_):
                    tmp = arr[w, k, :].copy()
                    arr[w, k, :] = arr[w, rows, :]
                    arr[w, rows, :] = tmp
                phr[w] = -phr[w]
                phi[w] = -phi[w]
            pr = ar_[:, k, k]
            pi = ai_[:, k, k]
            t1 = pr * pr
            t2 = pi * pi
            psq = t1 + t2
            pm, pe = np.frexp(psq)
            nm = rm * pm
            small = nm < 0.5
            nm2 = np.where(small, nm * 2.0, nm)
            ne = re + pe.astype(np.int64) - small.astype(np.int64)
            rm = np.where(alive, nm2, rm)
            re = np.where(alive, ne, re)
            pabs = np.sqrt(psq)
            cr = pr / pabs
            ci = pi / pabs
            u1 = phr * cr
            u2 = phi * ci
            u3 = phr * ci
            u4 = phi * cr
            nphr = u1 - u2
            nphi = u3 + u4
            phr = np.where(alive, nphr, phr)
            phi = np.where(alive, nphi, phi)
            if k < D - 1:
                ark = ar_[:, k + 1 :, k]
                aik = ai_[:, k + 1 :, k]
                s1 = ark * pr[:, None]
                s2 = aik * pi[:, None]
                snum = s1 + s2
                mr = snum / psq[:, None]
                s3 = aik * pr[:, None]
                s4 = ark * pi[:, None]
                sden = s3 - s4
                mi = sden / psq[:, None]
                mr[~alive] = 0.0
                mi[~alive] = 0.0
                rkr = ar_[:, k : k + 1, k + 1 :]
                rki = ai_[:, k : k + 1, k + 1 :]
                v1 = mr[:, :, None] * rkr
                v2 = mi[:, :, None] * rki
                tr = v1 - v2
                v3 = mr[:, :, None] * rki
                v4 = mi[:, :, None] * rkr
                ti = v3 + v4
                ar_[:, k + 1 :, k + 1 :] -= tr
                ai_[:, k + 1 :, k + 1 :] -= ti
    dead = ~alive
    phr[dead] = 0.0
    phi[dead] = 0.0
    mant = np.where(alive, rm * 2.0, 0.0)
    expo = np.where(alive, re - 1, 0)
    return phr, phi, mant, expo
