"""Prompt construction for every LLM completion task.

Each builder renders a test block from structured inputs and prepends the
fixed in-context examples shipped as data files, so the examples stay
auditable as plain text. Prompts end exactly at the completion point their
kind documents (see PromptKind) — builders never add trailing whitespace.
"""

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from importlib import resources

from putaway.core import Placement, Primitive, PrimitiveChoice
from putaway.promptkit.dsl import SUMMARY_MARKER, InvalidName

_BLOCK_SEP = "\n\n"


class PromptKind(Enum):
    RECEPTACLE_SUMMARIZATION = "receptacle_summarization"
    RECEPTACLE_SELECTION = "receptacle_selection"
    PRIMITIVE_SUMMARIZATION = "primitive_summarization"
    PRIMITIVE_SELECTION = "primitive_selection"
    CATEGORY_EXTRACTION = "category_extraction"
    RECEPTACLE_SELECTION_REAL = "receptacle_selection_real"
    PRIMITIVE_SELECTION_REAL = "primitive_selection_real"
    EXAMPLES_ONLY = "examples_only"
    COMMONSENSE = "commonsense"


@dataclass(frozen=True)
class PromptText:
    text: str
    kind: PromptKind


@dataclass(frozen=True)
class Summary:
    """One-line natural-language rule text, plus optional extracted categories."""

    text: str
    categories: tuple[str, ...] | None = None

    def __post_init__(self):
        if not self.text.strip():
            raise ValueError("summary text must be nonempty")
        if "\n" in self.text:
            raise ValueError("summary text must be a single line")
        if self.categories is not None:
            if not self.categories:
                raise ValueError("categories, when present, must be nonempty")
            if len(set(self.categories)) != len(self.categories):
                raise ValueError("categories must be duplicate-free")


def _check_name(name: str) -> str:
    if not isinstance(name, str) or not name:
        raise InvalidName(f"empty name {name!r}")
    if '"' in name or "\n" in name:
        raise InvalidName(f"name {name!r} contains a quote or newline")
    if name != name.strip():
        raise InvalidName(f"name {name!r} has surrounding whitespace")
    return name


def _name_list(var: str, names) -> str:
    return f"{var} = [" + ", ".join(f'"{_check_name(n)}"' for n in names) + "]"


def _place_line(p: Placement) -> str:
    return f'pick_and_place("{_check_name(p.object)}", "{_check_name(p.receptacle)}")'


def _choice_line(c: PrimitiveChoice) -> str:
    call = "pick_and_place" if c.primitive is Primitive.PLACE else "pick_and_toss"
    return f'{call}("{_check_name(c.object)}")'


def _partial_place(obj: str) -> str:
    return f'pick_and_place("{_check_name(obj)}",'


@lru_cache(maxsize=None)
def _incontext(name: str) -> str:
    path = resources.files("putaway.promptkit") / "data" / f"{name}.txt"
    return path.read_text(encoding="utf-8")


def build_receptacle_summarization_prompt(
    objects, receptacles, seen
) -> PromptText:
    """Seen placements rendered for summarization; ends at `# Summary:`."""
    if not seen:
        raise ValueError("seen placements must be nonempty")
    objects = tuple(objects)
    receptacles = tuple(receptacles)
    for p in seen:
        if p.object not in objects:
            raise ValueError(f"placement object {p.object!r} not in objects list")
        if p.receptacle not in receptacles:
            raise ValueError(
                f"placement receptacle {p.receptacle!r} not in receptacles list"
            )
    block = "\n".join(
        [
            _name_list("objects", objects),
            _name_list("receptacles", receptacles),
            *(_place_line(p) for p in seen),
            SUMMARY_MARKER,
        ]
    )
    text = _BLOCK_SEP.join([_incontext("receptacle_summarization"), block])
    return PromptText(text, PromptKind.RECEPTACLE_SUMMARIZATION)


def _selection_block(summary: Summary, objects, receptacles) -> str:
    lines = [f"{SUMMARY_MARKER} {summary.text}", _name_list("objects", objects)]
    if receptacles is not None:
        lines.append(_name_list("receptacles", receptacles))
    lines.append(_partial_place(tuple(objects)[0]))
    return "\n".join(lines)


def build_receptacle_selection_prompt(
    summary: Summary, objects, receptacles
) -> PromptText:
    """Summary plus object/receptacle lists; ends at the partial first call."""
    objects = tuple(objects)
    if not objects:
        raise ValueError("objects must be nonempty")
    block = _selection_block(summary, objects, tuple(receptacles))
    text = _BLOCK_SEP.join([_incontext("receptacle_selection"), block])
    return PromptText(text, PromptKind.RECEPTACLE_SELECTION)


def build_primitive_summarization_prompt(objects, choices) -> PromptText:
    if not choices:
        raise ValueError("primitive choices must be nonempty")
    objects = tuple(objects)
    for c in choices:
        if c.object not in objects:
            raise ValueError(f"choice object {c.object!r} not in objects list")
    block = "\n".join(
        [
            _name_list("objects", objects),
            *(_choice_line(c) for c in choices),
            SUMMARY_MARKER,
        ]
    )
    text = _BLOCK_SEP.join([_incontext("primitive_summarization"), block])
    return PromptText(text, PromptKind.PRIMITIVE_SUMMARIZATION)


def build_primitive_selection_prompt(summary: Summary, objects) -> PromptText:
    """Ends after the objects list line; the model emits whole call lines."""
    objects = tuple(objects)
    if not objects:
        raise ValueError("objects must be nonempty")
    block = "\n".join(
        [f"{SUMMARY_MARKER} {summary.text}", _name_list("objects", objects)]
    )
    text = _BLOCK_SEP.join([_incontext("primitive_selection"), block]) + "\n"
    return PromptText(text, PromptKind.PRIMITIVE_SELECTION)


def build_category_extraction_prompt(summary: Summary) -> PromptText:
    """Ends at the opening `objects = ["` fragment."""
    block = f'{SUMMARY_MARKER} {summary.text}\nobjects = ["'
    text = _BLOCK_SEP.join([_incontext("category_extraction"), block])
    return PromptText(text, PromptKind.CATEGORY_EXTRACTION)


def build_realworld_receptacle_selection_prompt(
    summary: Summary, categories, receptacles
) -> PromptText:
    """Receptacle selection over category names instead of instance names."""
    categories = tuple(categories)
    if not categories:
        raise ValueError("categories must be nonempty")
    if not tuple(receptacles):
        raise ValueError("receptacles must be nonempty")
    block = _selection_block(summary, categories, tuple(receptacles))
    text = _BLOCK_SEP.join([_incontext("receptacle_selection"), block])
    return PromptText(text, PromptKind.RECEPTACLE_SELECTION_REAL)


def build_realworld_primitive_selection_prompt(
    summary: Summary, categories
) -> PromptText:
    categories = tuple(categories)
    if not categories:
        raise ValueError("categories must be nonempty")
    block = "\n".join(
        [f"{SUMMARY_MARKER} {summary.text}", _name_list("objects", categories)]
    )
    text = _BLOCK_SEP.join([_incontext("primitive_selection"), block]) + "\n"
    return PromptText(text, PromptKind.PRIMITIVE_SELECTION_REAL)


def build_realworld_selection_prompts(
    receptacle_summary: Summary,
    primitive_summary: Summary,
    categories,
    receptacles,
) -> tuple[PromptText, PromptText]:
    """Receptacle- and primitive-selection prompts over category names.

    Each selection step conditions on its own summary (receptacle rules for
    the first prompt, primitive rules for the second).
    """
    return (
        build_realworld_receptacle_selection_prompt(
            receptacle_summary, categories, receptacles
        ),
        build_realworld_primitive_selection_prompt(primitive_summary, categories),
    )


def build_examples_only_prompt(
    seen_objects, receptacles, seen, unseen_objects
) -> PromptText:
    """Seen block, blank line, unseen block ending at the partial first call."""
    seen_objects = tuple(seen_objects)
    receptacles = tuple(receptacles)
    unseen_objects = tuple(unseen_objects)
    if not seen:
        raise ValueError("seen placements must be nonempty")
    if not unseen_objects:
        raise ValueError("unseen objects must be nonempty")
    seen_block = "\n".join(
        [
            _name_list("objects", seen_objects),
            _name_list("receptacles", receptacles),
            *(_place_line(p) for p in seen),
        ]
    )
    unseen_block = "\n".join(
        [
            _name_list("objects", unseen_objects),
            _name_list("receptacles", receptacles),
            _partial_place(unseen_objects[0]),
        ]
    )
    return PromptText(
        _BLOCK_SEP.join([seen_block, unseen_block]), PromptKind.EXAMPLES_ONLY
    )


COMMONSENSE_HEADER = "# Put objects into their appropriate receptacles."


def build_commonsense_prompt(objects, receptacles) -> PromptText:
    """Placement without preferences; ends at the partial first call."""
    objects = tuple(objects)
    receptacles = tuple(receptacles)
    if not objects:
        raise ValueError("objects must be nonempty")
    if not receptacles:
        raise ValueError("receptacles must be nonempty")
    text = "\n".join(
        [
            COMMONSENSE_HEADER,
            _name_list("objects", objects),
            _name_list("receptacles", receptacles),
            _partial_place(objects[0]),
        ]
    )
    return PromptText(text, PromptKind.COMMONSENSE)
