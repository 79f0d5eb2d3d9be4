"""Gauss-Kronrod 7-15 nodes shared by the numba and numpy kernel backends.

Abscissae/weights are the standard QUADPACK dqk15 values.  The arrays are
laid out as the full 15-point symmetric rule in ascending node order; WG7
carries zeros at pure-Kronrod nodes so that both embedded estimates come
from a single weighted sum over the same function values.
"""

import numpy as np

_XGK_HALF = np.array([
    0.9914553711208126,
    0.9491079123427585,
    0.8648644233597691,
    0.7415311855993944,
    0.5860872354676911,
    0.4058451513773972,
    0.2077849550078985,
    0.0,
])
_WGK_HALF = np.array([
    0.02293532201052922,
    0.06309209262997855,
    0.1047900103222502,
    0.1406532597155259,
    0.1690047266392679,
    0.1903505780647854,
    0.2044329400752989,
    0.2094821410847278,
])
_WG_HALF = np.array([
    0.1294849661688697,
    0.2797053914892767,
    0.3818300505051189,
    0.4179591836734694,
])

XK15 = np.concatenate([-_XGK_HALF[:7], _XGK_HALF[::-1]])
WK15 = np.concatenate([_WGK_HALF[:7], _WGK_HALF[::-1]])
WG7 = np.zeros(15)
WG7[1:7:2] = _WG_HALF[:3]
WG7[7] = _WG_HALF[3]
WG7[9:15:2] = _WG_HALF[:3][::-1]

for _arr in (XK15, WK15, WG7):
    _arr.setflags(write=False)

#: Seed breakpoint offsets (relative to the lower limit) for the inner
#: integral; the zero-mode variant resolves the logarithmic endpoint.
SEED_FINITE = np.array([0.0, 0.5, 1.0, 2.0, 4.0, 8.0])
SEED_ZERO = np.array([0.0, 1.0e-4, 1.0e-2, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0])
SEED_FINITE.setflags(write=False)
SEED_ZERO.setflags(write=False)

#: Breadth-first refinement limits shared by both backends.
MAX_ROUNDS = 64
MIN_WIDTH = 1.0e-10
RETIRE_FRACTION = 0.25
TINY = 1.0e-300


def integration_extent(reltol):
    """Width W of the integration window [z, z + W].

    The analytic tail bound on the integrand, 2*(Y + 1/2)*exp(-2Y) relative
    to the retained part, drops below a small fraction of ``reltol`` at
    W = ln(800/reltol)/2 because the reflection product is non-increasing
    in y.  Clamped to [10, 30].
    """
    w = 0.5 * np.log(800.0 / reltol)
    return float(min(max(w, 10.0), 30.0))
