"""Closed-form failure-time distributions.

For an exponential law with rate ``l`` the cumulative distribution function
is ``1 - exp(-l*t)`` for ``t >= 0`` and ``0`` for negative ``t``; the
reliability (survival) function is its complement ``exp(-l*t)``, defined for
non-negative times only.  The asymmetry is deliberate: a failure-time CDF is
defined on the whole real line, while time-to-failure itself is never
negative.

:func:`check_reliability_axioms` packages the three properties that
characterize any reliability curve on the positive axis - it starts at 1,
never increases, and decays below any positive threshold - as an executable
report, so alternative implementations can be checked against them.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

from rbdkit.core import (
    FailureModel,
    PropertyCheck,
    PropertyReport,
    require_time,
)


def cdf(model: FailureModel, t: float) -> float:
    """Probability that the failure time is <= ``t``.

    Accepts any finite ``t`` (negative times have probability 0).
    """
    _require_model(model)
    t = float(t)
    if not math.isfinite(t):
        raise ValueError(f"time must be finite, got {t!r}")
    if t < 0.0:
        return 0.0
    # -expm1 keeps full precision for small rate*t where 1-exp(-x) loses it.
    return -math.expm1(-(model.rate * t))


def reliability(model: FailureModel, t: float) -> float:
    """Survival probability exp(-rate*t) at time ``t >= 0``."""
    return math.exp(log_reliability(model, t))


def log_reliability(model: FailureModel, t: float) -> float:
    """Log survival probability, exactly ``-(rate*t)``.

    The underflow-safe representation for long series products:
    ``exp(log_reliability(m, t))`` equals ``reliability(m, t)`` bit for bit.
    """
    _require_model(model)
    t = require_time(t)
    return -(model.rate * t)


def check_reliability_axioms(
    model: FailureModel,
    grid: Sequence[float],
    epsilon: float,
    reliability_fn: Callable[[FailureModel, float], float] | None = None,
) -> PropertyReport:
    """Check the three characterizing reliability properties on a time grid.

    * ``max_at_zero``: R(0) == 1 exactly.
    * ``monotone``: R never increases between consecutive grid points.
    * ``vanishing``: R(t) < epsilon at every grid time beyond
      ``log(1/epsilon)/rate`` (vacuously true if the grid stops short).

    ``grid`` must be sorted ascending and start at 0.  ``reliability_fn``
    substitutes the implementation under test; it defaults to
    :func:`reliability`.
    """
    _require_model(model)
    if not (0.0 < epsilon < 1.0):
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    times = [require_time(t) for t in grid]
    if not times:
        raise ValueError("grid must be non-empty")
    if times[0] != 0.0:
        raise ValueError("grid must start at 0")
    for a, b in zip(times, times[1:]):
        if b < a:
            raise ValueError("grid must be sorted ascending")
    fn = reliability_fn if reliability_fn is not None else reliability

    values = [fn(model, t) for t in times]

    r0 = values[0]
    max_at_zero = PropertyCheck(
        "max_at_zero",
        r0 == 1.0,
        f"R(0) = {r0!r}",
    )

    bad_step = next(
        (
            (times[i], times[i + 1])
            for i in range(len(values) - 1)
            if values[i + 1] > values[i]
        ),
        None,
    )
    monotone = PropertyCheck(
        "monotone",
        bad_step is None,
        "non-increasing on grid" if bad_step is None else f"increases on {bad_step}",
    )

    threshold = math.log(1.0 / epsilon) / model.rate
    tail = [(t, v) for t, v in zip(times, values) if t > threshold]
    offender = next(((t, v) for t, v in tail if v >= epsilon), None)
    vanishing = PropertyCheck(
        "vanishing",
        offender is None,
        (
            f"{len(tail)} grid points beyond t={threshold!r} all below {epsilon!r}"
            if offender is None
            else f"R({offender[0]!r}) = {offender[1]!r} >= {epsilon!r}"
        ),
    )

    return PropertyReport((max_at_zero, monotone, vanishing))


def _require_model(model: FailureModel) -> None:
    if not isinstance(model, FailureModel):
        raise ValueError(f"expected a FailureModel, got {model!r}")
