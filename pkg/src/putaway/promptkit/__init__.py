"""Prompt templates and completion parsing for the tidying DSL."""

from putaway.promptkit.dsl import (
    ChoiceParse,
    DslSyntaxError,
    DuplicateName,
    EmptySummary,
    InvalidName,
    PlacementParse,
    PromptError,
    StitchError,
    parse_object_list,
    parse_placements,
    parse_primitive_choices,
    parse_summary,
    scan_statement,
)
from putaway.promptkit.templates import (
    PromptKind,
    PromptText,
    Summary,
    build_category_extraction_prompt,
    build_commonsense_prompt,
    build_examples_only_prompt,
    build_primitive_selection_prompt,
    build_primitive_summarization_prompt,
    build_realworld_primitive_selection_prompt,
    build_realworld_receptacle_selection_prompt,
    build_realworld_selection_prompts,
    build_receptacle_selection_prompt,
    build_receptacle_summarization_prompt,
)

__all__ = [
    "ChoiceParse",
    "DslSyntaxError",
    "DuplicateName",
    "EmptySummary",
    "InvalidName",
    "PlacementParse",
    "PromptError",
    "PromptKind",
    "PromptText",
    "StitchError",
    "Summary",
    "build_category_extraction_prompt",
    "build_commonsense_prompt",
    "build_examples_only_prompt",
    "build_primitive_selection_prompt",
    "build_primitive_summarization_prompt",
    "build_realworld_primitive_selection_prompt",
    "build_realworld_receptacle_selection_prompt",
    "build_realworld_selection_prompts",
    "build_receptacle_selection_prompt",
    "build_receptacle_summarization_prompt",
    "parse_object_list",
    "parse_placements",
    "parse_primitive_choices",
    "parse_summary",
    "scan_statement",
]
