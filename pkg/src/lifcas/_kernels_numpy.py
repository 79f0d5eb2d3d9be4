"""Pure-numpy quadrature kernels (fallback backend).

Same mathematics as the numba backend, organised breadth-first: every
refinement round evaluates the Gauss-Kronrod rule on all pending intervals
of all batch elements in one vectorized pass.  Selected by setting the
environment variable ``LIFCAS_NUMBA=0``.
"""

from __future__ import annotations

import numpy as np

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

_ACTIVE_CAP = 65536


def _scaled_error(raw, resasc):
    """QUADPACK-style realistic error from the raw K15-G7 difference."""
    err = raw.copy()
    mask = (resasc > 0.0) & (raw > 0.0)
    scaled = resasc[mask] * np.minimum(1.0, (200.0 * raw[mask] / resasc[mask]) ** 1.5)
    err[mask] = np.minimum(raw[mask], scaled)
    return err


def _panel_values(ftm, fte, half):
    vtm = half * (ftm * WK15).sum(axis=1)
    vte = half * (fte * WK15).sum(axis=1)
    gtm = half * (ftm * WG7).sum(axis=1)
    gte = half * (fte * WG7).sum(axis=1)
    mean_tm = (0.5 * vtm / half)[:, None]
    mean_te = (0.5 * vte / half)[:, None]
    resasc_tm = half * (np.abs(ftm - mean_tm) * WK15).sum(axis=1)
    resasc_te = half * (np.abs(fte - mean_te) * WK15).sum(axis=1)
    err = _scaled_error(np.abs(vtm - gtm), resasc_tm) + _scaled_error(np.abs(vte - gte), resasc_te)
    return vtm, vte, err


def _adapt_batch(eval_fn, nelem, eidx, lo, hi, reltol, W, floor):
    """Breadth-first adaptive refinement over a flat list of intervals.

    ``eval_fn(eidx, lo, hi) -> (vtm, vte, err)`` evaluates the embedded
    G7/K15 pair on each interval.  Intervals retire once their error fits
    the width-proportional share of the element's budget; ``floor`` is an
    absolute scale below which element magnitudes are not pushed further.
    """
    ret_tm = np.zeros(nelem)
    ret_te = np.zeros(nelem)
    ret_err = np.zeros(nelem)
    vtm, vte, err = eval_fn(eidx, lo, hi)
    for _ in range(MAX_ROUNDS):
        if eidx.size == 0:
            break
        est = ret_tm + ret_te
        est = est + np.bincount(eidx, weights=vtm + vte, minlength=nelem)
        mag = np.maximum(np.maximum(np.abs(est), floor), TINY)
        width = hi - lo
        budget = RETIRE_FRACTION * reltol * mag[eidx] * width / W
        retire = (err <= budget) | (width <= MIN_WIDTH)
        if eidx.size > _ACTIVE_CAP:
            retire = np.ones_like(retire)
        np.add.at(ret_tm, eidx[retire], vtm[retire])
        np.add.at(ret_te, eidx[retire], vte[retire])
        np.add.at(ret_err, eidx[retire], err[retire])
        split = ~retire
        if not split.any():
            eidx = eidx[:0]
            break
        slo, shi = lo[split], hi[split]
        mid = 0.5 * (slo + shi)
        n = slo.size
        lo = np.empty(2 * n)
        hi = np.empty(2 * n)
        lo[0::2], hi[0::2] = slo, mid
        lo[1::2], hi[1::2] = mid, shi
        eidx = np.repeat(eidx[split], 2)
        vtm, vte, err = eval_fn(eidx, lo, hi)
    if eidx.size:
        # round limit reached: keep what we have, report the residual error
        np.add.at(ret_tm, eidx, vtm)
        np.add.at(ret_te, eidx, vte)
        np.add.at(ret_err, eidx, err)
    return ret_tm, ret_te, ret_err


def finite_m_batch(zs, eps1, eps2, perfect1, perfect2, reltol, W, floor=0.0):
    """Inner y-integrals (TM part, TE part, error) for a batch of z = m*gamma.

    ``eps1``/``eps2`` hold eps(i*zeta_m) per element; a perfect flag makes
    that side reflect with unit coefficients and ignores its eps array.
    """
    zs = np.asarray(zs, dtype=float)
    n = zs.size

    def eval_fn(eidx, lo, hi):
        half = 0.5 * (hi - lo)
        y = (0.5 * (hi + lo))[:, None] + half[:, None] * XK15
        z = zs[eidx][:, None]
        if perfect1:
            dtm1 = dte1 = 1.0
        else:
            e = eps1[eidx][:, None]
            em1 = e - 1.0
            c = z * z * em1
            t = np.sqrt(c + y * y)
            dte1 = c / (t + y) ** 2
            dtm1 = em1 * (y * y * (e + 1.0) - z * z) / (e * y + t) ** 2
        if perfect2:
            dtm2 = dte2 = 1.0
        else:
            e = eps2[eidx][:, None]
            em1 = e - 1.0
            c = z * z * em1
            t = np.sqrt(c + y * y)
            dte2 = c / (t + y) ** 2
            dtm2 = em1 * (y * y * (e + 1.0) - z * z) / (e * y + t) ** 2
        damp = np.exp(-2.0 * y)
        ftm = y * np.log1p(-dtm1 * dtm2 * damp)
        fte = y * np.log1p(-dte1 * dte2 * damp)
        return _panel_values(ftm, fte, half)

    offs = np.append(SEED_FINITE, W)
    nseg = offs.size - 1
    lo = (zs[:, None] + offs[:-1]).ravel()
    hi = (zs[:, None] + offs[1:]).ravel()
    eidx = np.repeat(np.arange(n), nseg)
    return _adapt_batch(eval_fn, n, eidx, lo, hi, reltol, W, floor)


def zero_mode_term(dtm1, dtm2, tek1, lt1, tek2, lt2, reltol, W, floor=0.0):
    """m = 0 integral from the analytic limits of the coefficients.

    ``dtm*`` are the constant TM limits; ``tek*`` select the TE limit per
    side (0 vanishing, 1 finite with dimensionless limit ``lt*``, 2 ideal).
    """
    rtm = dtm1 * dtm2

    def eval_fn(eidx, lo, hi):
        half = 0.5 * (hi - lo)
        y = (0.5 * (hi + lo))[:, None] + half[:, None] * XK15
        dte = 1.0
        for tek, lt in ((tek1, lt1), (tek2, lt2)):
            if tek == 0:
                dte = 0.0
            elif tek == 1:
                root = np.sqrt(lt + y * y)
                dte = dte * lt / (root + y) ** 2
            # tek == 2: ideal, factor 1
        damp = np.exp(-2.0 * y)
        ftm = y * np.log1p(-rtm * damp)
        fte = y * np.log1p(-dte * damp)
        return _panel_values(ftm, fte, half)

    offs = np.append(SEED_ZERO, W)
    lo = offs[:-1].copy()
    hi = offs[1:].copy()
    eidx = np.zeros(lo.size, dtype=int)
    tm, te, err = _adapt_batch(eval_fn, 1, eidx, lo, hi, reltol, W, floor)
    return float(tm[0]), float(te[0]), float(err[0])
