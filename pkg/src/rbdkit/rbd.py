"""Closed-form evaluation of reliability block diagrams.

Series groups multiply the reliabilities of their children (the product rule
for mutually independent survival events); parallel groups complement the
product of the children's failure probabilities.  Mutual independence is a
structural assumption here - the Monte Carlo module provides the statistical
counterpart.

All products are accumulated in log space: a series of 100 000 segments
would underflow a direct product long before the log-space sum loses
anything.  Log-space sums use ``math.fsum`` (exact summation, correctly
rounded), which makes series evaluation invariant under any reordering of
the segments, bit for bit.
"""

from __future__ import annotations

import math
from typing import Sequence

from rbdkit.core import (
    Block,
    CurveSource,
    Leaf,
    ParallelNode,
    RbdModel,
    ReliabilityCurve,
    Segment,
    SeriesNode,
    ValidationError,
    require_time,
    validate_model,
)
from rbdkit.distributions import log_reliability


def series_reliability(segments: Sequence[Segment], t: float) -> float:
    """Reliability of the segments connected in series at time ``t``.

    Computed as ``exp(sum of log reliabilities)``; equals the product of the
    per-segment reliabilities.
    """
    segs = _require_segments(segments)
    t = require_time(t)
    return math.exp(math.fsum(log_reliability(s.model, t) for s in segs))


def series_min_bound(segments: Sequence[Segment], t: float) -> float:
    """Reliability of the least reliable segment at time ``t``.

    A series system can never beat its weakest segment, so this is an upper
    bound on :func:`series_reliability` for the same list.
    """
    segs = _require_segments(segments)
    t = require_time(t)
    return min(math.exp(log_reliability(s.model, t)) for s in segs)


def pipeline_reliability_closed_form(rates: Sequence[float], t: float) -> float:
    """Series reliability of exponential segments from their rates alone.

    A series of exponential components is itself exponential with the summed
    rate, so R(t) = exp(-(sum of rates) * t).  Agrees with
    :func:`series_reliability` on the corresponding segment list to relative
    1e-12.
    """
    rate_list = [float(r) for r in rates]
    if not rate_list:
        raise ValueError("rate list must be non-empty")
    for r in rate_list:
        if not math.isfinite(r) or r <= 0.0:
            raise ValueError(f"rates must be finite and > 0, got {r!r}")
    t = require_time(t)
    return math.exp(-(math.fsum(rate_list) * t))


def parallel_reliability(blocks: Sequence[Block], t: float) -> float:
    """Reliability of the blocks connected in parallel at time ``t``.

    The group fails only when every block fails: 1 - prod(1 - R_i), assuming
    independent blocks.
    """
    block_list = list(blocks)
    if not block_list:
        raise ValueError("block list must be non-empty")
    probe = RbdModel("", ParallelNode(tuple(block_list)))
    issues = validate_model(probe)
    if issues:
        raise ValidationError(issues)
    t = require_time(t)
    return math.exp(_log_parallel([_log_block(b, t) for b in block_list]))


def evaluate(model: RbdModel, t: float) -> float:
    """System reliability of a validated model at time ``t``."""
    issues = validate_model(model)
    if issues:
        raise ValidationError(issues)
    t = require_time(t)
    return math.exp(_log_block(model.structure, t))


def reliability_curve(model: RbdModel, t_max: float, steps: int) -> ReliabilityCurve:
    """Closed-form curve on the uniform grid {0, t_max/steps, ..., t_max}."""
    issues = validate_model(model)
    if issues:
        raise ValidationError(issues)
    t_max = require_time(t_max)
    if t_max <= 0.0:
        raise ValueError(f"t_max must be > 0, got {t_max!r}")
    steps = int(steps)
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps!r}")
    times = [t_max * i / steps for i in range(steps)] + [t_max]
    values = [math.exp(_log_block(model.structure, t)) for t in times]
    return ReliabilityCurve(tuple(times), tuple(values), CurveSource.CLOSED_FORM)


def _require_segments(segments: Sequence[Segment]) -> list[Segment]:
    segs = list(segments)
    if not segs:
        raise ValueError("segment list must be non-empty")
    names = set()
    for s in segs:
        if not isinstance(s, Segment):
            raise ValueError(f"expected a Segment, got {s!r}")
        if s.name in names:
            raise ValueError(f"duplicate segment name {s.name!r}")
        names.add(s.name)
    return segs


def _log_block(block: Block, t: float) -> float:
    """Log reliability of a block; -inf when the value underflows to 0."""
    if isinstance(block, Leaf):
        return log_reliability(block.segment.model, t)
    if isinstance(block, SeriesNode):
        parts = [_log_block(c, t) for c in block.children]
        if any(p == -math.inf for p in parts):
            return -math.inf
        return math.fsum(parts)
    return _log_parallel([_log_block(c, t) for c in block.children])


def _log_parallel(log_rs: list[float]) -> float:
    # A certain child makes the group certain.
    if any(lr == 0.0 for lr in log_rs):
        return 0.0
    # log prod(1 - R_i); expm1 keeps precision when R_i is close to 0 or 1,
    # and a dead child (lr = -inf) contributes log(1) = 0.
    s = math.fsum(math.log(-math.expm1(lr)) for lr in log_rs)
    if s == 0.0:
        # Every complement rounded to 1: the group reliability underflows.
        return -math.inf
    return math.log(-math.expm1(s))
