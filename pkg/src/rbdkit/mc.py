"""Deterministic Monte Carlo oracle for RBD reliability.

Failure times are drawn by inverting the exponential CDF: ``X = -ln(u)/rate``
with ``u`` uniform on the open interval (0, 1).  Keeping ``u`` away from both
endpoints means a sampled failure time is always finite and strictly
positive, so at ``t = 0`` every sample survives and the estimate is exactly 1.

Reproducibility contract: sampling is split into fixed-size chunks and chunk
``i`` draws from a counter-based Philox stream derived from ``(seed, i)``
(``numpy.random.Philox(key=seed).jumped(i)``).  Chunk results are integers
summed in index order, so a given :class:`McConfig` produces a bit-identical
estimate no matter how many worker threads run the chunks.  The generator
choice is part of the contract and stable within a major release.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from rbdkit.core import (
    Block,
    FailureModel,
    Leaf,
    PropertyCheck,
    PropertyReport,
    RbdModel,
    Segment,
    SeriesNode,
    ValidationError,
    require_time,
    validate_model,
)

_U53 = float(1 << 53)

MIN_INDEPENDENCE_SAMPLES = 10_000
MAX_INDEPENDENCE_EVENTS = 20


@dataclass(frozen=True)
class McConfig:
    """Reproducible sampling plan: seed, sample count, chunking."""

    seed: int
    samples: int
    chunk_size: int = 65_536

    def __post_init__(self) -> None:
        if not isinstance(self.seed, int) or not (0 <= self.seed < 2**64):
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if not isinstance(self.samples, int) or self.samples < 1:
            raise ValueError(f"samples must be a positive integer, got {self.samples!r}")
        if not isinstance(self.chunk_size, int) or self.chunk_size < 1:
            raise ValueError(f"chunk_size must be a positive integer, got {self.chunk_size!r}")


@dataclass(frozen=True)
class McEstimate:
    """Estimated survival probability with its binomial standard error."""

    p_hat: float
    std_err: float
    samples: int

    def __post_init__(self) -> None:
        if not (0.0 <= self.p_hat <= 1.0):
            raise ValueError(f"p_hat must lie in [0, 1], got {self.p_hat!r}")
        if self.samples < 1:
            raise ValueError(f"samples must be >= 1, got {self.samples!r}")
        expected = math.sqrt(self.p_hat * (1.0 - self.p_hat) / self.samples)
        if abs(self.std_err - expected) > 1e-12:
            raise ValueError(
                f"std_err {self.std_err!r} inconsistent with p_hat and samples"
            )


def sample_failure_time(model: FailureModel, u: float) -> float:
    """Failure time by inverse-CDF sampling: ``-ln(u)/rate`` for u in (0, 1]."""
    if not isinstance(model, FailureModel):
        raise ValueError(f"expected a FailureModel, got {model!r}")
    u = float(u)
    if not (0.0 < u <= 1.0):
        raise ValueError(f"u must lie in (0, 1], got {u!r}")
    return -math.log(u) / model.rate


def survival_event(model: FailureModel, t: float, u: float) -> bool:
    """Whether the failure time drawn from ``u`` is strictly beyond ``t``."""
    t = require_time(t)
    return sample_failure_time(model, u) > t


def estimate_system_reliability(
    model: RbdModel,
    t: float,
    cfg: McConfig,
    workers: int = 1,
) -> McEstimate:
    """Estimate system reliability at ``t`` by simulating failure times.

    Each sample draws one failure time per segment (mutually independent by
    construction) and evaluates the structure function: a series group
    survives iff all children survive, a parallel group iff any does.
    ``workers`` only controls how many threads run the chunks; it never
    changes the result.
    """
    issues = validate_model(model)
    if issues:
        raise ValidationError(issues)
    t = require_time(t)
    if not isinstance(cfg, McConfig):
        raise ValueError(f"expected an McConfig, got {cfg!r}")

    structure = model.structure

    def run_chunk(index: int) -> int:
        start = index * cfg.chunk_size
        n = min(cfg.chunk_size, cfg.samples - start)
        gen = _chunk_generator(cfg.seed, index)
        return int(_surviving(structure, t, gen, n).sum())

    survivors = _map_chunks(run_chunk, _chunk_count(cfg), workers)
    p_hat = survivors / cfg.samples
    return McEstimate(
        p_hat=p_hat,
        std_err=math.sqrt(p_hat * (1.0 - p_hat) / cfg.samples),
        samples=cfg.samples,
    )


def survival_indicator_matrix(
    segments: Sequence[Segment],
    times: Sequence[float],
    cfg: McConfig,
    workers: int = 1,
) -> np.ndarray:
    """Boolean matrix [samples x segments]: segment j survives past times[j].

    Column j of each row is an independent draw of segment j's survival
    indicator at its own time, under the same chunked Philox scheme as
    :func:`estimate_system_reliability`.  The columns are mutually
    independent by construction, which makes this the natural input for
    :func:`check_mutual_independence`.
    """
    segs = list(segments)
    if not segs:
        raise ValueError("segment list must be non-empty")
    for s in segs:
        if not isinstance(s, Segment):
            raise ValueError(f"expected a Segment, got {s!r}")
    ts = [require_time(x) for x in times]
    if len(ts) != len(segs):
        raise ValueError("times must have one entry per segment")
    if not isinstance(cfg, McConfig):
        raise ValueError(f"expected an McConfig, got {cfg!r}")

    def run_chunk(index: int) -> np.ndarray:
        start = index * cfg.chunk_size
        n = min(cfg.chunk_size, cfg.samples - start)
        gen = _chunk_generator(cfg.seed, index)
        cols = [
            _leaf_survivors(s.model.rate, ts[j], gen, n) for j, s in enumerate(segs)
        ]
        return np.column_stack(cols)

    parts = _map_chunks_list(run_chunk, _chunk_count(cfg), workers)
    return np.vstack(parts)


def check_mutual_independence(
    indicator_samples: np.ndarray,
    tolerance_sigmas: float,
) -> PropertyReport:
    """Product-rule test of mutual independence over every event subset.

    For each subset S of at least two event columns, compares the empirical
    probability of the joint event (all columns in S true) against the
    product of the individual empirical probabilities.  A subset passes when
    the deviation stays within ``tolerance_sigmas`` pooled standard errors,
    where the pooled error combines the binomial error of the joint
    frequency with the delta-method error of the product (computed under the
    independence hypothesis, dropping their positive covariance - a
    conservative widening).

    Enumerating subsets covers every ordering and prefix of the columns,
    because intersections and products do not care about order.  The report
    carries one check per subset, named by its column indices.
    """
    tolerance_sigmas = float(tolerance_sigmas)
    if tolerance_sigmas <= 0.0:
        raise ValueError(f"tolerance_sigmas must be > 0, got {tolerance_sigmas!r}")
    ind = np.asarray(indicator_samples, dtype=bool)
    if ind.ndim != 2:
        raise ValueError("indicator matrix must be 2-D [samples x events]")
    n, n_events = ind.shape
    if not (2 <= n_events <= MAX_INDEPENDENCE_EVENTS):
        raise ValueError(
            f"event count must lie in [2, {MAX_INDEPENDENCE_EVENTS}], got {n_events}"
        )
    if n < MIN_INDEPENDENCE_SAMPLES:
        raise ValueError(
            f"need at least {MIN_INDEPENDENCE_SAMPLES} samples, got {n}"
        )

    joint_counts = _subset_joint_counts(ind)
    masks = np.arange(1 << n_events, dtype=np.int64)
    sizes = _popcount(masks)

    p_single = np.array(
        [joint_counts[1 << j] / n for j in range(n_events)], dtype=np.float64
    )
    joint = joint_counts / n

    product = np.ones(1 << n_events, dtype=np.float64)
    var_product = np.zeros(1 << n_events, dtype=np.float64)
    for j in range(n_events):
        has_j = (masks & (1 << j)) != 0
        product[has_j] *= p_single[j]
    for j in range(n_events):
        pj = p_single[j]
        if pj <= 0.0 or pj >= 1.0:
            continue  # degenerate column contributes no product variance
        has_j = (masks & (1 << j)) != 0
        others = product[has_j] / pj
        var_product[has_j] += others * others * pj * (1.0 - pj) / n

    var_joint = joint * (1.0 - joint) / n
    pooled_se = np.sqrt(var_joint + var_product)
    deviation = np.abs(joint - product)

    checks = []
    for mask in masks[sizes >= 2]:
        cols = tuple(j for j in range(n_events) if mask & (1 << j))
        se = float(pooled_se[mask])
        dev = float(deviation[mask])
        if se > 0.0:
            z = dev / se
            ok = z <= tolerance_sigmas
        else:
            z = 0.0 if dev == 0.0 else math.inf
            ok = dev == 0.0
        checks.append(
            PropertyCheck(
                name="subset " + ",".join(map(str, cols)),
                passed=bool(ok),
                detail=(
                    f"joint={float(joint[mask])!r} "
                    f"product={float(product[mask])!r} z={z:.3f}"
                ),
            )
        )
    return PropertyReport(tuple(checks))


def _chunk_generator(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed).jumped(index))


def _chunk_count(cfg: McConfig) -> int:
    return -(-cfg.samples // cfg.chunk_size)


def _open_uniforms(gen: np.random.Generator, n: int) -> np.ndarray:
    # Uniform on the open interval (0, 1): multiples of 2^-53 excluding 0, 1.
    return gen.integers(1, 1 << 53, size=n) / _U53


def _leaf_survivors(
    rate: float, t: float, gen: np.random.Generator, n: int
) -> np.ndarray:
    u = _open_uniforms(gen, n)
    return (-np.log(u) / rate) > t


def _surviving(
    block: Block, t: float, gen: np.random.Generator, n: int
) -> np.ndarray:
    """Vector of per-sample survival indicators; draws in leaf order."""
    if isinstance(block, Leaf):
        return _leaf_survivors(block.segment.model.rate, t, gen, n)
    if isinstance(block, SeriesNode):
        acc = _surviving(block.children[0], t, gen, n)
        for child in block.children[1:]:
            acc = acc & _surviving(child, t, gen, n)
        return acc
    acc = _surviving(block.children[0], t, gen, n)
    for child in block.children[1:]:
        acc = acc | _surviving(child, t, gen, n)
    return acc


def _map_chunks(run_chunk, n_chunks: int, workers: int) -> int:
    workers = max(1, min(int(workers), n_chunks))
    if workers == 1:
        return sum(run_chunk(i) for i in range(n_chunks))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(run_chunk, range(n_chunks)))


def _map_chunks_list(run_chunk, n_chunks: int, workers: int) -> list:
    workers = max(1, min(int(workers), n_chunks))
    if workers == 1:
        return [run_chunk(i) for i in range(n_chunks)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_chunk, range(n_chunks)))


def _subset_joint_counts(ind: np.ndarray) -> np.ndarray:
    """counts[mask] = number of rows where every column in mask is True.

    Rows are first bucketed by their full indicator pattern (bincount), then
    a superset-sum transform turns pattern counts into subset-joint counts in
    O(N * 2^N), independent of the sample count.
    """
    n, n_events = ind.shape
    codes = np.zeros(n, dtype=np.int64)
    for j in range(n_events):
        codes |= ind[:, j].astype(np.int64) << j
    counts = np.bincount(codes, minlength=1 << n_events).astype(np.int64)
    table = counts.reshape([2] * n_events)
    for axis in range(n_events):
        lo = [slice(None)] * n_events
        hi = [slice(None)] * n_events
        lo[axis] = 0
        hi[axis] = 1
        table[tuple(lo)] += table[tuple(hi)]
    return table.reshape(-1)


def _popcount(masks: np.ndarray) -> np.ndarray:
    return np.bitwise_count(masks)
