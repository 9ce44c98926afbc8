"""Special functions: principal-branch Lambert W and the AWGN spectral
efficiency boundary C(Eb/N0)."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .params import LN2, EbN0, InfeasibleError

_BRANCH_POINT = -1.0 / math.e


@dataclass(frozen=True)
class AwgnCapacityPoint:
    """Maximum interference-free spectral efficiency at a given Eb/N0.

    ``c_bps_hz`` solves 2^C - 1 = (Eb/N0) * C; it is ``math.inf`` for the
    noiseless sentinel (the optimizer then treats the domain as (0, inf)).
    """

    eb_n0: EbN0
    c_bps_hz: float

    @property
    def is_unbounded(self) -> bool:
        return math.isinf(self.c_bps_hz)


def lambert_w0(z: float) -> float:
    """Principal branch of the Lambert W function, w * e^w = z with w >= -1.

    Series initialization near the branch point -1/e, asymptotic log
    initialization for large z, polished with Halley iterations.
    """
    if z < _BRANCH_POINT:
        # allow for rounding right at the branch point
        if z > _BRANCH_POINT * (1.0 + 4.0 * 1e-16):
            return -1.0
        raise ValueError(f"lambert_w0 domain is z >= -1/e, got {z}")
    if z == 0.0:
        return 0.0

    # p = sqrt(2 (e z + 1)) parametrizes the branch-point series
    p2 = 2.0 * (math.e * z + 1.0)
    if p2 <= 0.0:
        return -1.0
    if p2 < 1e-4:
        p = math.sqrt(p2)
        return -1.0 + p - p * p / 3.0 + (11.0 / 72.0) * p ** 3

    if z > math.e:
        lz = math.log(z)
        w = lz - math.log(lz)
    elif z > 0.0:
        w = z / (1.0 + z)  # crude but inside the basin
    else:
        w = -1.0 + math.sqrt(p2)

    for _ in range(50):
        ew = math.exp(w)
        f = w * ew - z
        # Halley step
        denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0)
        step = f / denom
        w -= step
        if abs(step) <= 1e-14 * max(1.0, abs(w)):
            break
    return w


def awgn_spectral_efficiency(eb_n0: EbN0) -> AwgnCapacityPoint:
    """Unique positive C with 2^C - 1 = (Eb/N0) C, the feasibility boundary.

    Raises InfeasibleError below ln 2 (operating beyond interference-free
    capacity); returns C = 0 exactly at ln 2 and the unbounded marker for
    the noiseless sentinel.
    """
    if eb_n0.is_infinite:
        return AwgnCapacityPoint(eb_n0, math.inf)
    e = eb_n0.value_linear
    if e < LN2:
        raise InfeasibleError(
            f"Eb/N0 = {eb_n0.value_db:.2f} dB is below ln 2 = -1.59 dB"
        )
    if e == LN2:
        return AwgnCapacityPoint(eb_n0, 0.0)

    def g(c: float) -> float:
        return math.expm1(c * LN2) - e * c

    # g < 0 just above 0 (slope ln2 - e), grows without bound: bracket upward
    hi = 1.0
    while g(hi) <= 0.0:
        hi *= 2.0
    lo = 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if g(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    c = 0.5 * (lo + hi)
    # one Newton polish to push the residual to rounding level
    slope = LN2 * math.exp(c * LN2) - e
    if slope != 0.0:
        c -= g(c) / slope
    return AwgnCapacityPoint(eb_n0, c)
