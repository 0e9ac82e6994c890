"""Line-oriented spec language for pipeline RBD models.

Grammar (one statement per line, ``#`` starts a comment):

    pipeline "<name>"
    series {
    parallel {
    }
    segment <name> exponential rate=<float>
    group <count> <prefix> exponential rate=<float>

A document declares exactly one ``pipeline``, followed by exactly one
structure: a ``series { ... }`` or ``parallel { ... }`` block (which may nest
further blocks), or a single ``segment`` line.  ``group`` lines are only
valid inside a block and expand to ``<count>`` segments named
``<prefix>_1 .. <prefix>_<count>``.  Rates accept scientific notation and
must be positive.

:func:`parse_spec` collects every problem it can find and raises a single
:class:`SpecParseError` carrying :class:`ParseIssue` rows with line, column
and a stable error code.  :func:`print_spec` emits the canonical form
(groups expanded, two-space indentation, shortest round-trip floats), and
``parse_spec(print_spec(doc))`` reproduces the model exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from rbdkit.core import (
    MAX_LEAVES,
    MAX_TREE_DEPTH,
    Block,
    FailureModel,
    Leaf,
    ParallelNode,
    RbdModel,
    Segment,
    SeriesNode,
    validate_model,
)

E_SYNTAX = "syntax"
E_UNKNOWN_KEYWORD = "unknown_keyword"
E_DUPLICATE_NAME = "duplicate_name"
E_BAD_RATE = "bad_rate"
E_BAD_COUNT = "bad_count"
E_STRUCTURE = "structure"
E_NO_PIPELINE = "no_pipeline"
E_LIMIT = "limit"

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_PIPELINE_RE = re.compile(r'^pipeline\s+"([^"]*)"\s*$')


@dataclass(frozen=True)
class ParseIssue:
    """One parse problem, located by 1-based line and column."""

    line: int
    column: int
    code: str
    message: str

    def __str__(self) -> str:
        return f"line {self.line}:{self.column}: {self.message} [{self.code}]"


class SpecParseError(ValueError):
    """Raised by :func:`parse_spec`; carries every issue found."""

    def __init__(self, issues: list[ParseIssue]):
        self.issues = tuple(issues)
        super().__init__("; ".join(str(i) for i in self.issues) or "parse error")


@dataclass
class SpecDocument:
    """A parsed, validated model plus source locations for its nodes.

    ``line_map`` keys are paths of child indices from the structure root
    (``()`` is the root itself); values are 1-based source lines.
    """

    model: RbdModel
    source_path: str = "<string>"
    line_map: dict[tuple[int, ...], int] = field(default_factory=dict)


@dataclass
class _Draft:
    """Unvalidated tree node built during parsing."""

    kind: str  # "series" | "parallel" | "leaf"
    line: int
    children: list["_Draft"] = field(default_factory=list)
    segment: Segment | None = None


def parse_spec(text: str, source_path: str = "<string>") -> SpecDocument:
    """Parse DSL text into a validated :class:`SpecDocument`.

    Raises :class:`SpecParseError` listing every detected problem; never
    raises anything else, whatever the input text.
    """
    issues: list[ParseIssue] = []
    pipeline_name: str | None = None
    pipeline_line = 0
    root: _Draft | None = None
    stack: list[_Draft] = []
    names: dict[str, int] = {}
    leaf_total = 0

    def complain(line_no: int, column: int, code: str, message: str) -> None:
        issues.append(ParseIssue(line_no, column, code, message))

    def place(draft: _Draft, line_no: int, column: int) -> None:
        nonlocal root
        if stack:
            stack[-1].children.append(draft)
        elif root is None:
            root = draft
        else:
            complain(
                line_no,
                column,
                E_STRUCTURE,
                "pipeline already has a structure; only one is allowed",
            )

    def make_segment(
        name: str, rate: float, line_no: int, name_col: int
    ) -> Segment | None:
        if name in names:
            complain(
                line_no,
                name_col,
                E_DUPLICATE_NAME,
                f"segment name {name!r} already used on line {names[name]}",
            )
            return None
        names[name] = line_no
        return Segment(name, FailureModel(rate))

    lines = text.splitlines()
    for line_no, raw in enumerate(lines, start=1):
        stripped = _strip_comment(raw)
        tokens = stripped.split()
        if not tokens:
            continue
        col = raw.find(tokens[0]) + 1
        keyword = tokens[0]

        if keyword == "pipeline":
            match = _PIPELINE_RE.match(stripped.strip())
            if match is None:
                complain(line_no, col, E_SYNTAX, 'expected: pipeline "<name>"')
                continue
            if pipeline_name is not None:
                complain(
                    line_no, col, E_SYNTAX,
                    f"pipeline already declared on line {pipeline_line}",
                )
                continue
            if root is not None or stack:
                complain(
                    line_no, col, E_SYNTAX,
                    "pipeline declaration must precede the structure",
                )
            pipeline_name = match.group(1)
            pipeline_line = line_no
            continue

        if keyword in ("series", "parallel"):
            if tokens[1:] != ["{"]:
                complain(line_no, col, E_SYNTAX, f"expected: {keyword} {{")
                continue
            if pipeline_name is None:
                complain(line_no, col, E_SYNTAX, "structure found before pipeline declaration")
            if len(stack) >= MAX_TREE_DEPTH:
                # Refuse to nest deeper: keeps tree assembly recursion bounded.
                complain(
                    line_no, col, E_LIMIT,
                    f"blocks nested deeper than {MAX_TREE_DEPTH} levels",
                )
                continue
            block = _Draft(keyword, line_no)
            stack.append(block)
            continue

        if keyword == "}":
            if tokens != ["}"]:
                complain(line_no, col, E_SYNTAX, "closing brace must stand alone")
                continue
            if not stack:
                complain(line_no, col, E_SYNTAX, "unmatched closing brace")
                continue
            block = stack.pop()
            if not block.children:
                complain(
                    block.line, 1, E_STRUCTURE,
                    f"{block.kind} block is empty",
                )
                continue
            place(block, line_no, col)
            continue

        if keyword == "segment":
            parsed = _parse_component_tail(
                tokens, raw, line_no, "segment <name> exponential rate=<float>", complain
            )
            if parsed is None:
                continue
            name, rate, name_col = parsed
            if pipeline_name is None:
                complain(line_no, col, E_SYNTAX, "segment found before pipeline declaration")
            if leaf_total + 1 > MAX_LEAVES:
                complain(
                    line_no, col, E_LIMIT,
                    f"segment would exceed the {MAX_LEAVES}-segment limit",
                )
                continue
            leaf_total += 1
            segment = make_segment(name, rate, line_no, name_col)
            if segment is not None:
                place(_Draft("leaf", line_no, segment=segment), line_no, col)
            continue

        if keyword == "group":
            if len(tokens) < 2:
                complain(line_no, col, E_SYNTAX, "expected: group <count> <prefix> exponential rate=<float>")
                continue
            count_col = raw.find(tokens[1], col) + 1
            try:
                count = int(tokens[1])
            except ValueError:
                complain(line_no, count_col, E_BAD_COUNT, f"group count must be an integer, got {tokens[1]!r}")
                continue
            if count < 1:
                complain(line_no, count_col, E_BAD_COUNT, f"group count must be >= 1, got {count}")
                continue
            parsed = _parse_component_tail(
                tokens[1:], raw, line_no, "group <count> <prefix> exponential rate=<float>", complain
            )
            if parsed is None:
                continue
            prefix, rate, name_col = parsed
            if not stack:
                complain(
                    line_no, col, E_STRUCTURE,
                    "group requires an enclosing series or parallel block",
                )
                continue
            if leaf_total + count > MAX_LEAVES:
                # Refuse before expanding: a typo'd count must not eat memory.
                complain(
                    line_no, count_col, E_LIMIT,
                    f"group would exceed the {MAX_LEAVES}-segment limit",
                )
                continue
            leaf_total += count
            for i in range(1, count + 1):
                segment = make_segment(f"{prefix}_{i}", rate, line_no, name_col)
                if segment is not None:
                    stack[-1].children.append(_Draft("leaf", line_no, segment=segment))
            continue

        complain(line_no, col, E_UNKNOWN_KEYWORD, f"unknown keyword {keyword!r}")

    for block in stack:
        complain(block.line, 1, E_SYNTAX, f"{block.kind} block is never closed")
    if pipeline_name is None:
        complain(max(len(lines), 1), 1, E_NO_PIPELINE, "no pipeline declared")
    elif root is None:
        complain(pipeline_line, 1, E_STRUCTURE, "pipeline has no structure")

    if issues:
        raise SpecParseError(issues)
    assert pipeline_name is not None and root is not None

    line_map: dict[tuple[int, ...], int] = {}
    structure = _freeze(root, (), line_map)
    model = RbdModel(pipeline_name, structure)
    for issue in validate_model(model):
        issues.append(
            ParseIssue(
                line_map.get(issue.path, pipeline_line), 1, E_LIMIT, issue.message
            )
        )
    if issues:
        raise SpecParseError(issues)
    return SpecDocument(model=model, source_path=source_path, line_map=line_map)


def parse_spec_file(path: str) -> SpecDocument:
    """Read a UTF-8 spec file and parse it."""
    with open(path, "r", encoding="utf-8") as handle:
        return parse_spec(handle.read(), source_path=path)


def print_spec(doc: SpecDocument) -> str:
    """Canonical text for a document; parses back to an equal model."""
    lines = [f'pipeline "{doc.model.name}"']
    _print_block(doc.model.structure, 0, lines)
    return "\n".join(lines) + "\n"


def _print_block(block: Block, indent: int, lines: list[str]) -> None:
    pad = "  " * indent
    if isinstance(block, Leaf):
        seg = block.segment
        lines.append(f"{pad}segment {seg.name} exponential rate={seg.model.rate!r}")
    else:
        kind = "series" if isinstance(block, SeriesNode) else "parallel"
        lines.append(f"{pad}{kind} {{")
        for child in block.children:
            _print_block(child, indent + 1, lines)
        lines.append(f"{pad}}}")


def _strip_comment(line: str) -> str:
    in_quote = False
    for i, ch in enumerate(line):
        if ch == '"':
            in_quote = not in_quote
        elif ch == "#" and not in_quote:
            return line[:i]
    return line


def _parse_component_tail(
    tokens: list[str],
    raw: str,
    line_no: int,
    usage: str,
    complain,
) -> tuple[str, float, int] | None:
    """Parse ``<name> exponential rate=<float>`` from tokens[1:]."""
    if len(tokens) != 4:
        complain(line_no, raw.find(tokens[0]) + 1, E_SYNTAX, f"expected: {usage}")
        return None
    name, law, rate_tok = tokens[1], tokens[2], tokens[3]
    name_col = raw.find(name) + 1
    if not _NAME_RE.match(name):
        complain(
            line_no, name_col, E_SYNTAX,
            f"invalid name {name!r} (letters, digits and underscores only)",
        )
        return None
    if law != "exponential":
        complain(
            line_no, raw.find(law, name_col) + 1, E_UNKNOWN_KEYWORD,
            f"unknown distribution {law!r} (only 'exponential' is supported)",
        )
        return None
    rate_col = raw.find(rate_tok, name_col) + 1
    if not rate_tok.startswith("rate="):
        complain(line_no, rate_col, E_SYNTAX, f"expected rate=<float>, got {rate_tok!r}")
        return None
    try:
        rate = float(rate_tok[len("rate="):])
    except ValueError:
        complain(
            line_no, rate_col, E_BAD_RATE,
            f"rate is not a number: {rate_tok[len('rate='):]!r}",
        )
        return None
    if not 0.0 < rate < float("inf"):
        complain(line_no, rate_col, E_BAD_RATE, f"rate must be > 0 and finite, got {rate!r}")
        return None
    return name, rate, name_col


def _freeze(
    draft: _Draft, path: tuple[int, ...], line_map: dict[tuple[int, ...], int]
) -> Block:
    line_map[path] = draft.line
    if draft.kind == "leaf":
        assert draft.segment is not None
        return Leaf(draft.segment)
    children = tuple(
        _freeze(child, path + (i,), line_map) for i, child in enumerate(draft.children)
    )
    if draft.kind == "series":
        return SeriesNode(children)
    return ParallelNode(children)
