import math
from typing import List, Optional

from sharpe_pi.core.config import settings
from sharpe_pi.core.exceptions import EmptyIntervalSetError
from sharpe_pi.schemas.solver import Interval, IntervalSet


def _ordered(parts: List[Interval]) -> IntervalSet:
    return IntervalSet(parts=tuple(sorted(parts, key=lambda part: part.hi, reverse=True)))


def subtract(interval_set: IntervalSet, cut: Interval, epsilon_y: Optional[float] = None) -> IntervalSet:
    """
    Remove ``cut`` from every part. Leftover pieces narrower than ``epsilon_y``
    are dropped; parts the cut does not touch are kept as they are.
    """
    epsilon_y = settings.EPSILON_Y if epsilon_y is None else epsilon_y
    parts = []
    for part in interval_set.parts:
        if cut.hi < part.lo or cut.lo > part.hi:
            parts.append(part)
            continue
        if cut.lo > part.lo and cut.lo - part.lo >= epsilon_y:
            parts.append(Interval(lo=part.lo, hi=cut.lo))
        if cut.hi < part.hi and part.hi - cut.hi >= epsilon_y:
            parts.append(Interval(lo=cut.hi, hi=part.hi))
    return _ordered(parts)


def next_probe(interval_set: IntervalSet) -> float:
    """Midpoint of the part with the largest upper endpoint."""
    if interval_set.is_empty():
        raise EmptyIntervalSetError("no pseudo-mean interval left to probe")
    return interval_set.parts[0].midpoint


def extra_domination_interval(m2v: float, kappa: float) -> Optional[Interval]:
    """
    Means |eta| <= sqrt(m2v / kappa) are dominated by the candidate with value ``m2v``.

    Only valid when kappa >= 1 (then eta^2 + (1 - kappa) zeta <= eta^2) and m2v > 0.
    """
    if kappa < 1.0 or m2v <= 0.0:
        return None
    radius = math.sqrt(m2v / kappa)
    return Interval(lo=-radius, hi=radius)
