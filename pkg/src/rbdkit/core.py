"""Domain model for reliability block diagrams.

A system is an :class:`RbdModel`: a tree of series and parallel groups whose
leaves are named :class:`Segment` objects, each carrying a parametric
:class:`FailureModel`.  All types are immutable after construction and can be
shared freely across threads.

Cheap local invariants (positive finite rate, non-empty names, non-empty
child lists) are enforced at construction time.  Whole-tree invariants
(unique segment names, depth and size limits) are checked by
:func:`validate_model`, which every evaluation entry point calls before
doing real work, so an invalid model can never reach the numeric code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Union

MAX_TREE_DEPTH = 32
MAX_LEAVES = 100_000


class DistributionKind(Enum):
    """Supported failure-time laws."""

    EXPONENTIAL = "exponential"


class CurveSource(Enum):
    """How a reliability curve was produced."""

    CLOSED_FORM = "closed_form"
    MONTE_CARLO = "monte_carlo"


@dataclass(frozen=True)
class FailureModel:
    """Failure-time law of one component.

    ``rate`` is the failure rate in failures per unit time; the mean time to
    failure is ``1/rate``.  The rate must be finite and strictly positive: a
    non-failing component (rate 0) is not representable because its survival
    probability would not decay to zero.
    """

    rate: float
    kind: DistributionKind = DistributionKind.EXPONENTIAL

    def __post_init__(self) -> None:
        object.__setattr__(self, "rate", float(self.rate))
        if not isinstance(self.kind, DistributionKind):
            raise ValueError(f"unknown distribution kind: {self.kind!r}")
        if not math.isfinite(self.rate) or self.rate <= 0.0:
            raise ValueError(
                f"failure rate must be finite and > 0, got {self.rate!r}"
            )


@dataclass(frozen=True)
class Segment:
    """A named component of the system (e.g. one pipeline segment)."""

    name: str
    model: FailureModel

    def __post_init__(self) -> None:
        if not isinstance(self.name, str) or not self.name:
            raise ValueError("segment name must be a non-empty string")
        if not isinstance(self.model, FailureModel):
            raise ValueError(f"segment model must be a FailureModel, got {self.model!r}")


@dataclass(frozen=True)
class Leaf:
    """Tree leaf wrapping a single segment."""

    segment: Segment

    def __post_init__(self) -> None:
        if not isinstance(self.segment, Segment):
            raise ValueError(f"leaf must wrap a Segment, got {self.segment!r}")


@dataclass(frozen=True)
class SeriesNode:
    """All children must survive for the group to survive."""

    children: tuple["Block", ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "children", tuple(self.children))
        if not self.children:
            raise ValueError("series group must have at least one child")


@dataclass(frozen=True)
class ParallelNode:
    """The group survives while any child survives."""

    children: tuple["Block", ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "children", tuple(self.children))
        if not self.children:
            raise ValueError("parallel group must have at least one child")


Block = Union[Leaf, SeriesNode, ParallelNode]


@dataclass(frozen=True)
class RbdModel:
    """A named reliability block diagram."""

    name: str
    structure: Block

    def __post_init__(self) -> None:
        if not isinstance(self.name, str):
            raise ValueError("model name must be a string")

    def segments(self) -> list[Segment]:
        """All leaf segments in depth-first order."""
        out: list[Segment] = []
        _collect_segments(self.structure, out)
        return out


def _collect_segments(block: Block, out: list[Segment]) -> None:
    if isinstance(block, Leaf):
        out.append(block.segment)
    elif isinstance(block, (SeriesNode, ParallelNode)):
        for child in block.children:
            _collect_segments(child, out)


@dataclass(frozen=True)
class ReliabilityCurve:
    """R(t) sampled on an increasing time grid.

    Closed-form curves must be non-increasing; Monte Carlo curves are allowed
    to wiggle within their sampling noise.
    """

    times: tuple[float, ...]
    values: tuple[float, ...]
    source: CurveSource

    def __post_init__(self) -> None:
        object.__setattr__(self, "times", tuple(float(t) for t in self.times))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if not isinstance(self.source, CurveSource):
            raise ValueError(f"unknown curve source: {self.source!r}")
        if len(self.times) != len(self.values):
            raise ValueError("times and values must have the same length")
        if not self.times:
            raise ValueError("curve must contain at least one point")
        for t in self.times:
            if not math.isfinite(t) or t < 0.0:
                raise ValueError(f"curve times must be finite and >= 0, got {t!r}")
        for a, b in zip(self.times, self.times[1:]):
            if not b > a:
                raise ValueError("curve times must be strictly increasing")
        for v in self.values:
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"curve values must lie in [0, 1], got {v!r}")
        if self.source is CurveSource.CLOSED_FORM:
            for a, b in zip(self.values, self.values[1:]):
                if b > a:
                    raise ValueError("closed-form curve values must be non-increasing")


@dataclass(frozen=True)
class ValidationIssue:
    """One violated model invariant, located by a path of child indices."""

    code: str
    path: tuple[int, ...]
    message: str

    def __str__(self) -> str:
        where = "structure" + "".join(f"[{i}]" for i in self.path)
        return f"{where}: {self.message} [{self.code}]"


class ValidationError(ValueError):
    """Raised when an operation receives a model that fails validation."""

    def __init__(self, issues: Iterable[ValidationIssue]):
        self.issues = tuple(issues)
        super().__init__("; ".join(str(i) for i in self.issues) or "invalid model")


@dataclass(frozen=True)
class PropertyCheck:
    """Outcome of one named property check."""

    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class PropertyReport:
    """A bundle of property checks; passes iff every check passes."""

    checks: tuple[PropertyCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> tuple[PropertyCheck, ...]:
        return tuple(c for c in self.checks if not c.passed)

    def __getitem__(self, name: str) -> PropertyCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def require_time(t: float) -> float:
    """Validate a time value: finite, non-negative. Returns it as float."""
    t = float(t)
    if not math.isfinite(t) or t < 0.0:
        raise ValueError(f"time must be finite and >= 0, got {t!r}")
    return t


def validate_model(model: RbdModel) -> list[ValidationIssue]:
    """Check every model invariant and return the violations found.

    Returns an empty list iff the model is well formed.  Never raises: this
    function is total on arbitrary object trees (unknown node types, hand
    patched fields, over-deep nesting) and reports each problem with a path
    of child indices from the root.
    """
    issues: list[ValidationIssue] = []
    if not isinstance(model, RbdModel):
        return [ValidationIssue("bad_node", (), f"not an RbdModel: {model!r}")]
    if not isinstance(model.name, str):
        issues.append(ValidationIssue("bad_name", (), "model name must be a string"))

    seen_names: dict[str, tuple[int, ...]] = {}
    leaf_count = 0

    def visit(block: object, path: tuple[int, ...], depth: int) -> None:
        nonlocal leaf_count
        if depth > MAX_TREE_DEPTH:
            issues.append(
                ValidationIssue(
                    "max_depth", path, f"tree deeper than {MAX_TREE_DEPTH} levels"
                )
            )
            return
        if isinstance(block, Leaf):
            leaf_count += 1
            _check_leaf(block, path, issues, seen_names)
        elif isinstance(block, (SeriesNode, ParallelNode)):
            children = block.children
            if not isinstance(children, (tuple, list)) or len(children) == 0:
                issues.append(
                    ValidationIssue("empty_children", path, "group has no children")
                )
                return
            for i, child in enumerate(children):
                visit(child, path + (i,), depth + 1)
        else:
            issues.append(
                ValidationIssue("bad_node", path, f"not a Block node: {block!r}")
            )

    visit(model.structure, (), 1)
    if leaf_count > MAX_LEAVES:
        issues.append(
            ValidationIssue(
                "max_leaves", (), f"{leaf_count} leaves exceed the limit of {MAX_LEAVES}"
            )
        )
    return issues


def _check_leaf(
    leaf: Leaf,
    path: tuple[int, ...],
    issues: list[ValidationIssue],
    seen_names: dict[str, tuple[int, ...]],
) -> None:
    segment = leaf.segment
    if not isinstance(segment, Segment):
        issues.append(ValidationIssue("bad_node", path, f"not a Segment: {segment!r}"))
        return
    name = segment.name
    if not isinstance(name, str) or not name:
        issues.append(ValidationIssue("bad_name", path, "segment name must be non-empty"))
    elif name in seen_names:
        issues.append(
            ValidationIssue("duplicate_name", path, f"duplicate segment name {name!r}")
        )
    else:
        seen_names[name] = path
    model = segment.model
    if not isinstance(model, FailureModel):
        issues.append(ValidationIssue("bad_node", path, f"not a FailureModel: {model!r}"))
        return
    if not isinstance(model.kind, DistributionKind):
        issues.append(
            ValidationIssue("bad_kind", path, f"unknown distribution kind {model.kind!r}")
        )
    rate = model.rate
    if not isinstance(rate, (int, float)) or not math.isfinite(rate) or rate <= 0.0:
        issues.append(
            ValidationIssue("bad_rate", path, f"failure rate must be finite and > 0, got {rate!r}")
        )
