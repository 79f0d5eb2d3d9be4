"""Central differences with Richardson step-halving refinement.

Shared by the entropy routines: the derivative is refined until the
extrapolation stabilizes or starts to grow again, the latter marking the
floor set by summation noise in the underlying free energies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

_RICHARDSON_LEVELS = 6


@dataclass(frozen=True)
class DerivativeEstimate:
    value: float
    error: float
    step: float
    noise_limited: bool


def central_derivative(f, x, h0, target_rel=1.0e-6, levels=_RICHARDSON_LEVELS) -> DerivativeEstimate:
    """Derivative of ``f`` at ``x`` from central differences of step ``h0``.

    Builds the Richardson table over halved steps; the returned error is
    the change of the last diagonal entry.  ``noise_limited`` is set when
    refinement stopped because the estimate degraded instead of improving.
    """
    if h0 <= 0:
        raise ValueError("step must be positive")
    diag_prev = None
    best = None
    best_err = math.inf
    best_h = h0
    noise = False
    rows = []
    h = h0
    for level in range(levels):
        d = (f(x + h) - f(x - h)) / (2.0 * h)
        row = [d]
        if rows:
            prev = rows[-1]
            fac = 4.0
            for j in range(len(prev)):
                row.append((fac * row[j] - prev[j]) / (fac - 1.0))
                fac *= 4.0
        rows.append(row)
        diag = row[-1]
        if diag_prev is not None:
            err = abs(diag - diag_prev)
            if err < best_err:
                best, best_err, best_h = diag, err, h
                if err <= target_rel * abs(diag):
                    break
            elif err > 4.0 * best_err:
                # differencing noise dominates; keep the best level
                noise = True
                break
        diag_prev = diag
        h *= 0.5
    if best is None:
        best, best_err, best_h = diag_prev, math.inf, h0
    return DerivativeEstimate(best, best_err, best_h, noise)
