"""Numba-compiled quadrature kernels (default backend).

Scalar-loop twins of the functions in ``_kernels_numpy``: identical nodes,
seeding and retirement rule, so both backends agree to within the
quadrature tolerance.  Compiled lazily with on-disk caching.

Maintenance note: the module-level arrays imported from ``_gknodes`` are
baked into the cached machine code as constants, and numba does not
invalidate its cache when only they change.  After editing ``_gknodes``,
delete the package ``__pycache__`` directories.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from ._gknodes import (
    MAX_ROUNDS,
    MIN_WIDTH,
    RETIRE_FRACTION,
    SEED_FINITE,
    SEED_ZERO,
    TINY,
    WG7,
    WK15,
    XK15,
)

_CAP = 4096


@njit(cache=True)
def _scaled_error(raw, resasc):
    if resasc > 0.0 and raw > 0.0:
        scale = (200.0 * raw / resasc) ** 1.5
        if scale < 1.0:
            scaled = resasc * scale
            if scaled < raw:
                return scaled
    return raw


@njit(cache=True)
def _finish_panel(ftm, fte, half):
    ktm = 0.0
    kte = 0.0
    gtm = 0.0
    gte = 0.0
    for j in range(15):
        ktm += WK15[j] * ftm[j]
        kte += WK15[j] * fte[j]
        gtm += WG7[j] * ftm[j]
        gte += WG7[j] * fte[j]
    mean_tm = 0.5 * ktm
    mean_te = 0.5 * kte
    resasc_tm = 0.0
    resasc_te = 0.0
    for j in range(15):
        resasc_tm += WK15[j] * np.abs(ftm[j] - mean_tm)
        resasc_te += WK15[j] * np.abs(fte[j] - mean_te)
    vtm = half * ktm
    vte = half * kte
    err = _scaled_error(half * np.abs(ktm - gtm), half * resasc_tm) + _scaled_error(
        half * np.abs(kte - gte), half * resasc_te
    )
    return vtm, vte, err


@njit(cache=True)
def _panel_finite(lo, hi, z, e1, e2, perfect1, perfect2):
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    ftm = np.empty(15)
    fte = np.empty(15)
    for j in range(15):
        y = mid + half * XK15[j]
        if perfect1:
            dtm1 = 1.0
            dte1 = 1.0
        else:
            em1 = e1 - 1.0
            c = z * z * em1
            t = np.sqrt(c + y * y)
            dte1 = c / ((t + y) * (t + y))
            den = e1 * y + t
            dtm1 = em1 * (y * y * (e1 + 1.0) - z * z) / (den * den)
        if perfect2:
            dtm2 = 1.0
            dte2 = 1.0
        else:
            em1 = e2 - 1.0
            c = z * z * em1
            t = np.sqrt(c + y * y)
            dte2 = c / ((t + y) * (t + y))
            den = e2 * y + t
            dtm2 = em1 * (y * y * (e2 + 1.0) - z * z) / (den * den)
        damp = np.exp(-2.0 * y)
        ftm[j] = y * np.log1p(-dtm1 * dtm2 * damp)
        fte[j] = y * np.log1p(-dte1 * dte2 * damp)
    return _finish_panel(ftm, fte, half)


@njit(cache=True)
def _panel_zero(lo, hi, rtm, tek1, lt1, tek2, lt2):
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    ftm = np.empty(15)
    fte = np.empty(15)
    for j in range(15):
        y = mid + half * XK15[j]
        dte = 1.0
        if tek1 == 0:
            dte = 0.0
        elif tek1 == 1:
            root = np.sqrt(lt1 + y * y)
            dte *= lt1 / ((root + y) * (root + y))
        if tek2 == 0:
            dte = 0.0
        elif tek2 == 1:
            root = np.sqrt(lt2 + y * y)
            dte *= lt2 / ((root + y) * (root + y))
        damp = np.exp(-2.0 * y)
        ftm[j] = y * np.log1p(-rtm * damp)
        fte[j] = y * np.log1p(-dte * damp)
    return _finish_panel(ftm, fte, half)


@njit(cache=True)
def _adapt_finite(z, e1, e2, perfect1, perfect2, reltol, W, floor):
    nseed = SEED_FINITE.size
    cur_lo = np.empty(_CAP)
    cur_hi = np.empty(_CAP)
    cur_tm = np.empty(_CAP)
    cur_te = np.empty(_CAP)
    cur_er = np.empty(_CAP)
    nxt_lo = np.empty(_CAP)
    nxt_hi = np.empty(_CAP)
    n = 0
    for k in range(nseed):
        cur_lo[n] = z + SEED_FINITE[k]
        cur_hi[n] = z + W if k == nseed - 1 else z + SEED_FINITE[k + 1]
        n += 1
    for k in range(n):
        cur_tm[k], cur_te[k], cur_er[k] = _panel_finite(
            cur_lo[k], cur_hi[k], z, e1, e2, perfect1, perfect2
        )
    ret_tm = 0.0
    ret_te = 0.0
    ret_er = 0.0
    for _ in range(MAX_ROUNDS):
        if n == 0:
            break
        s = ret_tm + ret_te
        for k in range(n):
            s += cur_tm[k] + cur_te[k]
        mag = np.abs(s)
        if mag < floor:
            mag = floor
        if mag < TINY:
            mag = TINY
        nn = 0
        for k in range(n):
            w = cur_hi[k] - cur_lo[k]
            if cur_er[k] <= RETIRE_FRACTION * reltol * mag * w / W or w <= MIN_WIDTH or nn + 2 > _CAP:
                ret_tm += cur_tm[k]
                ret_te += cur_te[k]
                ret_er += cur_er[k]
            else:
                m = 0.5 * (cur_lo[k] + cur_hi[k])
                nxt_lo[nn] = cur_lo[k]
                nxt_hi[nn] = m
                nxt_lo[nn + 1] = m
                nxt_hi[nn + 1] = cur_hi[k]
                nn += 2
        cur_lo, nxt_lo = nxt_lo, cur_lo
        cur_hi, nxt_hi = nxt_hi, cur_hi
        n = nn
        for k in range(n):
            cur_tm[k], cur_te[k], cur_er[k] = _panel_finite(
                cur_lo[k], cur_hi[k], z, e1, e2, perfect1, perfect2
            )
    for k in range(n):
        ret_tm += cur_tm[k]
        ret_te += cur_te[k]
        ret_er += cur_er[k]
    return ret_tm, ret_te, ret_er


@njit(cache=True)
def finite_m_batch(zs, eps1, eps2, perfect1, perfect2, reltol, W, floor=0.0):
    n = zs.size
    tm = np.empty(n)
    te = np.empty(n)
    er = np.empty(n)
    for i in range(n):
        tm[i], te[i], er[i] = _adapt_finite(
            zs[i], eps1[i], eps2[i], perfect1, perfect2, reltol, W, floor
        )
    return tm, te, er


@njit(cache=True)
def zero_mode_term(dtm1, dtm2, tek1, lt1, tek2, lt2, reltol, W, floor=0.0):
    rtm = dtm1 * dtm2
    nseed = SEED_ZERO.size
    cur_lo = np.empty(_CAP)
    cur_hi = np.empty(_CAP)
    cur_tm = np.empty(_CAP)
    cur_te = np.empty(_CAP)
    cur_er = np.empty(_CAP)
    nxt_lo = np.empty(_CAP)
    nxt_hi = np.empty(_CAP)
    n = 0
    for k in range(nseed):
        cur_lo[n] = SEED_ZERO[k]
        cur_hi[n] = W if k == nseed - 1 else SEED_ZERO[k + 1]
        n += 1
    for k in range(n):
        cur_tm[k], cur_te[k], cur_er[k] = _panel_zero(
            cur_lo[k], cur_hi[k], rtm, tek1, lt1, tek2, lt2
        )
    ret_tm = 0.0
    ret_te = 0.0
    ret_er = 0.0
    for _ in range(MAX_ROUNDS):
        if n == 0:
            break
        s = ret_tm + ret_te
        for k in range(n):
            s += cur_tm[k] + cur_te[k]
        mag = np.abs(s)
        if mag < floor:
            mag = floor
        if mag < TINY:
            mag = TINY
        nn = 0
        for k in range(n):
            w = cur_hi[k] - cur_lo[k]
            if cur_er[k] <= RETIRE_FRACTION * reltol * mag * w / W or w <= MIN_WIDTH or nn + 2 > _CAP:
                ret_tm += cur_tm[k]
                ret_te += cur_te[k]
                ret_er += cur_er[k]
            else:
                m = 0.5 * (cur_lo[k] + cur_hi[k])
                nxt_lo[nn] = cur_lo[k]
                nxt_hi[nn] = m
                nxt_lo[nn + 1] = m
                nxt_hi[nn + 1] = cur_hi[k]
                nn += 2
        cur_lo, nxt_lo = nxt_lo, cur_lo
        cur_hi, nxt_hi = nxt_hi, cur_hi
        n = nn
        for k in range(n):
            cur_tm[k], cur_te[k], cur_er[k] = _panel_zero(
                cur_lo[k], cur_hi[k], rtm, tek1, lt1, tek2, lt2
            )
    for k in range(n):
        ret_tm += cur_tm[k]
        ret_te += cur_te[k]
        ret_er += cur_er[k]
    return ret_tm, ret_te, ret_er
