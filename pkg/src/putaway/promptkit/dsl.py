"""Scanner and parsers for the Pythonic completion DSL.

The grammar is deliberately tiny: a statement line is either a call
`ident("arg", ...)` with double-quoted string arguments (no escapes), a
name-list assignment `objects = [...]` / `receptacles = [...]`, or a
`# Summary:` comment. Unknown-but-well-formed calls terminate parsing with a
warning instead of erroring, since models may ramble after the block.
"""

import re
from dataclasses import dataclass

from putaway.core import Placement, Primitive, PrimitiveChoice


class PromptError(Exception):
    """Base class for prompt building and completion parsing failures."""


class InvalidName(PromptError):
    """A name contains a quote/newline or surrounding whitespace."""


class EmptySummary(PromptError):
    """Summarization completion had no text before the first newline."""


class StitchError(PromptError):
    """Completion does not complete the prompt's partial first call."""


class DslSyntaxError(PromptError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class DuplicateName(PromptError):
    """A parsed name list contains the same name twice."""


@dataclass(frozen=True)
class PickAndPlace2:
    object: str
    receptacle: str


@dataclass(frozen=True)
class PickAndPlace1:
    object: str


@dataclass(frozen=True)
class PickAndToss1:
    object: str


@dataclass(frozen=True)
class ObjectsList:
    names: tuple[str, ...]


@dataclass(frozen=True)
class ReceptaclesList:
    names: tuple[str, ...]


@dataclass(frozen=True)
class SummaryComment:
    text: str


DslStatement = (
    PickAndPlace2 | PickAndPlace1 | PickAndToss1 | ObjectsList | ReceptaclesList | SummaryComment
)

_IDENT_CALL = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*\(")
SUMMARY_MARKER = "# Summary:"


def _scan_string(s: str, i: int, lineno: int) -> tuple[str, int]:
    """Scan one double-quoted string starting at s[i]; no escape sequences."""
    if i >= len(s) or s[i] != '"':
        raise DslSyntaxError(lineno, f"expected opening quote at column {i + 1}")
    end = s.find('"', i + 1)
    if end < 0:
        raise DslSyntaxError(lineno, "unterminated string literal")
    value = s[i + 1 : end]
    if not value:
        raise DslSyntaxError(lineno, "empty string literal")
    return value, end + 1


def _skip_ws(s: str, i: int) -> int:
    while i < len(s) and s[i] in " \t":
        i += 1
    return i


def scan_quoted_list(s: str, i: int, lineno: int) -> tuple[tuple[str, ...], int]:
    """Scan a bracketed list of quoted strings starting at s[i] == '['."""
    if i >= len(s) or s[i] != "[":
        raise DslSyntaxError(lineno, "expected '['")
    i = _skip_ws(s, i + 1)
    names = []
    if i < len(s) and s[i] == "]":
        return (), i + 1
    while True:
        name, i = _scan_string(s, i, lineno)
        names.append(name)
        i = _skip_ws(s, i)
        if i < len(s) and s[i] == ",":
            i = _skip_ws(s, i + 1)
            continue
        if i < len(s) and s[i] == "]":
            return tuple(names), i + 1
        raise DslSyntaxError(lineno, "expected ',' or ']' in name list")


def _scan_args(s: str, i: int, lineno: int) -> tuple[tuple[str, ...], int]:
    """Scan '(' quoted args ')' starting at s[i] == '('."""
    i = _skip_ws(s, i + 1)
    args = []
    if i < len(s) and s[i] == ")":
        return (), i + 1
    while True:
        arg, i = _scan_string(s, i, lineno)
        args.append(arg)
        i = _skip_ws(s, i)
        if i < len(s) and s[i] == ",":
            i = _skip_ws(s, i + 1)
            continue
        if i < len(s) and s[i] == ")":
            return tuple(args), i + 1
        raise DslSyntaxError(lineno, "expected ',' or ')' in argument list")


def scan_call(line: str, lineno: int = 1) -> tuple[str, tuple[str, ...]] | None:
    """Scan `ident("a", "b")`; None if the line is not call-shaped.

    Lines that start like a `pick_and_` call but violate the grammar raise
    DslSyntaxError; anything else non-call-shaped returns None.
    """
    stripped = line.strip()
    m = _IDENT_CALL.match(stripped)
    if m is None:
        if stripped.startswith("pick_and_"):
            raise DslSyntaxError(lineno, f"malformed call: {stripped!r}")
        return None
    name = m.group(1)
    try:
        args, end = _scan_args(stripped, m.end() - 1, lineno)
        if stripped[end:].strip():
            raise DslSyntaxError(lineno, f"trailing text after call: {stripped!r}")
    except DslSyntaxError:
        if name.startswith("pick_and_"):
            raise
        return None
    return name, args


def scan_statement(line: str, lineno: int = 1) -> DslStatement | None:
    """Classify one line; None for blank or unrecognized lines."""
    stripped = line.strip()
    if not stripped:
        return None
    if stripped.startswith(SUMMARY_MARKER):
        return SummaryComment(stripped[len(SUMMARY_MARKER) :].strip())
    for prefix, cls in (("objects", ObjectsList), ("receptacles", ReceptaclesList)):
        m = re.match(rf"^{prefix}\s*=\s*", stripped)
        if m:
            names, end = scan_quoted_list(stripped, m.end(), lineno)
            if stripped[end:].strip():
                raise DslSyntaxError(lineno, "trailing text after name list")
            return cls(names)
    call = scan_call(line, lineno)
    if call is None:
        return None
    name, args = call
    if name == "pick_and_place" and len(args) == 2:
        return PickAndPlace2(args[0], args[1])
    if name == "pick_and_place" and len(args) == 1:
        return PickAndPlace1(args[0])
    if name == "pick_and_toss" and len(args) == 1:
        return PickAndToss1(args[0])
    return None


@dataclass(frozen=True)
class PlacementParse:
    placements: tuple[Placement, ...]
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class ChoiceParse:
    choices: tuple[PrimitiveChoice, ...]
    warnings: tuple[str, ...] = ()


def parse_summary(completion: str):
    """First line of a summarization completion, trimmed; later lines ignored."""
    from putaway.promptkit.templates import Summary

    first = completion.split("\n", 1)[0].strip()
    if not first:
        raise EmptySummary("no summary text before the first newline")
    return Summary(text=first)


def parse_placements(first_object: str, completion: str) -> PlacementParse:
    """Stitch the partial first call and parse consecutive 2-arg place calls.

    Parsing stops cleanly at the first line that is not a
    `pick_and_place("o", "r")` statement; a warning records what stopped it.
    """
    stitched = f'pick_and_place("{first_object}",' + completion
    lines = stitched.split("\n")
    try:
        stmt = scan_statement(lines[0], 1)
    except DslSyntaxError as e:
        raise StitchError(f"completion does not finish the partial call: {e}") from e
    if not isinstance(stmt, PickAndPlace2) or stmt.object != first_object:
        raise StitchError(
            f"completion does not finish the partial call for {first_object!r}"
        )
    placements = [Placement(stmt.object, stmt.receptacle)]
    warnings = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            break
        stmt = scan_statement(line, lineno)
        if isinstance(stmt, PickAndPlace2):
            placements.append(Placement(stmt.object, stmt.receptacle))
        else:
            warnings.append(f"line {lineno}: stopped at unrecognized line {line.strip()!r}")
            break
    return PlacementParse(tuple(placements), tuple(warnings))


def parse_primitive_choices(completion: str) -> ChoiceParse:
    """Parse whole-line one-argument calls into primitive choices."""
    choices = []
    warnings = []
    for lineno, line in enumerate(completion.split("\n"), start=1):
        if not line.strip():
            break
        stmt = scan_statement(line, lineno)
        if isinstance(stmt, PickAndPlace1):
            choices.append(PrimitiveChoice(stmt.object, Primitive.PLACE))
        elif isinstance(stmt, PickAndToss1):
            choices.append(PrimitiveChoice(stmt.object, Primitive.TOSS))
        else:
            warnings.append(f"line {lineno}: stopped at unrecognized line {line.strip()!r}")
            break
    return ChoiceParse(tuple(choices), tuple(warnings))


def parse_object_list(prefix: str, completion: str) -> tuple[str, ...]:
    """Stitch `objects = ["` + completion and parse one quoted name list."""
    stitched = prefix + completion
    line = stitched.split("\n", 1)[0]
    stmt_match = re.match(r"^\s*objects\s*=\s*", line)
    if stmt_match is None:
        raise DslSyntaxError(1, f"expected an objects list, got {line.strip()!r}")
    names, end = scan_quoted_list(line, stmt_match.end(), 1)
    if line[end:].strip():
        raise DslSyntaxError(1, "trailing text after name list")
    seen = set()
    for n in names:
        if n in seen:
            raise DuplicateName(f"duplicate name {n!r} in parsed list")
        seen.add(n)
    return names
