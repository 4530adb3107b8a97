"""Domain model and benchmark dataset schema.

A Dataset is a list of Scenarios. Each scenario names its receptacles, gives
"seen" example placements (the user's preferences) and "unseen" held-out
placements, optionally annotates each placement with a manipulation
primitive, and is tagged with the sorting criteria it exercises.
"""

import json
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path


class DatasetError(Exception):
    """Base class for dataset loading/validation failures."""


class ParseError(DatasetError):
    """Malformed dataset file; message carries the file/field locus."""


class ValidationError(DatasetError):
    """A scenario invariant is violated; message names scenario and rule."""


class Primitive(Enum):
    PLACE = "place"
    TOSS = "toss"


class RoomType(Enum):
    LIVING_ROOM = "living_room"
    BEDROOM = "bedroom"
    KITCHEN = "kitchen"
    PANTRY_ROOM = "pantry_room"


class SortingCriterion(Enum):
    CATEGORY = "category"
    ATTRIBUTE = "attribute"
    FUNCTION = "function"
    SUBCATEGORY = "subcategory"
    MULTIPLE_CATEGORIES = "multiple_categories"


# Expected scenario count per room type in the full-scale dataset; smaller
# fixture datasets only trigger a warning.
FULL_SCALE_PER_ROOM = 24


def validate_name(text: str, what: str = "name") -> str:
    """Check the character rules shared by object and receptacle names."""
    if not isinstance(text, str) or not text:
        raise ValidationError(f"{what} must be a nonempty string, got {text!r}")
    if '"' in text or "\n" in text:
        raise ValidationError(f"{what} {text!r} contains a quote or newline")
    if text != text.strip():
        raise ValidationError(f"{what} {text!r} has surrounding whitespace")
    return text


@dataclass(frozen=True)
class Placement:
    object: str
    receptacle: str


@dataclass(frozen=True)
class PrimitiveChoice:
    object: str
    primitive: Primitive


@dataclass(frozen=True)
class Scenario:
    id: str
    room_type: RoomType
    receptacles: tuple[str, ...]
    seen: tuple[Placement, ...]
    unseen: tuple[Placement, ...]
    criteria: frozenset[SortingCriterion]
    seen_primitives: tuple[PrimitiveChoice, ...] | None = None
    unseen_primitives: tuple[PrimitiveChoice, ...] | None = None

    @property
    def seen_objects(self) -> tuple[str, ...]:
        return tuple(p.object for p in self.seen)

    @property
    def unseen_objects(self) -> tuple[str, ...]:
        return tuple(p.object for p in self.unseen)

    def has_primitives(self) -> bool:
        return self.seen_primitives is not None and self.unseen_primitives is not None


@dataclass(frozen=True)
class Dataset:
    scenarios: tuple[Scenario, ...]

    def by_id(self, scenario_id: str) -> Scenario:
        for s in self.scenarios:
            if s.id == scenario_id:
                return s
        raise KeyError(scenario_id)


@dataclass
class ValidationReport:
    """Findings from validate_dataset.

    problems are invariant violations (a valid dataset has none); warnings
    are advisory (e.g. the dataset is smaller than the full-scale 24
    scenarios per room type). statistics summarizes placement counts and the
    per-criterion scenario tally.
    """

    problems: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    statistics: dict = field(default_factory=dict)

    @property
    def empty(self) -> bool:
        return not self.problems

    def render(self) -> str:
        lines = []
        if self.problems:
            lines.append(f"{len(self.problems)} problem(s):")
            lines.extend(f"  PROBLEM: {p}" for p in self.problems)
        else:
            lines.append("no problems found")
        for w in self.warnings:
            lines.append(f"  warning: {w}")
        stats = self.statistics
        if stats:
            lines.append(
                "statistics: {scenarios} scenario(s), {seen} seen / {unseen} unseen placements".format(
                    scenarios=stats.get("scenarios", 0),
                    seen=stats.get("seen_placements", 0),
                    unseen=stats.get("unseen_placements", 0),
                )
            )
            tally = stats.get("criteria_tally", {})
            if tally:
                lines.append(
                    "criteria tally: "
                    + ", ".join(f"{k}={v}" for k, v in sorted(tally.items()))
                )
        return "\n".join(lines)


def _scenario_problems(s: Scenario) -> list[str]:
    """All invariant violations for one scenario, each tagged with its id."""
    errs = []

    def bad(msg):
        errs.append(f"scenario {s.id!r}: {msg}")

    try:
        for r in s.receptacles:
            validate_name(r, "receptacle")
        for p in s.seen + s.unseen:
            validate_name(p.object, "object")
            validate_name(p.receptacle, "receptacle")
    except ValidationError as e:
        bad(str(e))

    if not 2 <= len(s.receptacles) <= 5:
        bad(f"receptacle count {len(s.receptacles)} outside 2..5")
    if len(set(s.receptacles)) != len(s.receptacles):
        bad("duplicate receptacle names")
    if not 4 <= len(s.seen) <= 10:
        bad(f"seen placement count {len(s.seen)} outside 4..10")
    if len(s.seen) != len(s.unseen):
        bad(f"seen count {len(s.seen)} != unseen count {len(s.unseen)}")

    recs = set(s.receptacles)
    for split_name, split in (("seen", s.seen), ("unseen", s.unseen)):
        for p in split:
            if p.receptacle not in recs:
                bad(
                    f"{split_name} placement of {p.object!r} references receptacle "
                    f"{p.receptacle!r} absent from the receptacle list"
                )
        counts = Counter(p.receptacle for p in split)
        for r in s.receptacles:
            if counts.get(r, 0) != 2:
                bad(
                    f"receptacle {r!r} appears in {counts.get(r, 0)} {split_name} "
                    f"placements, expected exactly 2 per receptacle"
                )

    seen_names = [p.object for p in s.seen]
    unseen_names = [p.object for p in s.unseen]
    if len(set(seen_names + unseen_names)) != len(seen_names + unseen_names):
        overlap = set(seen_names) & set(unseen_names)
        if overlap:
            bad(f"seen and unseen object names not disjoint: {sorted(overlap)}")
        for names, split_name in ((seen_names, "seen"), (unseen_names, "unseen")):
            dupes = [n for n, c in Counter(names).items() if c > 1]
            if dupes:
                bad(f"duplicate object names within {split_name}: {sorted(dupes)}")

    for attr, split_name, names in (
        (s.seen_primitives, "seen", seen_names),
        (s.unseen_primitives, "unseen", unseen_names),
    ):
        if attr is not None:
            annotated = [c.object for c in attr]
            if sorted(annotated) != sorted(names) or len(annotated) != len(names):
                bad(
                    f"{split_name}_primitives must cover exactly the {split_name} "
                    f"objects (one choice each)"
                )

    if not s.criteria:
        bad("no sorting criteria tagged (at least one required)")

    return errs


def validate_dataset(ds: Dataset) -> ValidationReport:
    """Collect every invariant violation; report is empty iff dataset valid."""
    report = ValidationReport()
    ids = Counter(s.id for s in ds.scenarios)
    for sid, n in sorted(ids.items()):
        if n > 1:
            report.problems.append(f"scenario id {sid!r} appears {n} times")
    for s in ds.scenarios:
        report.problems.extend(_scenario_problems(s))

    room_counts = Counter(s.room_type.value for s in ds.scenarios)
    for room in RoomType:
        if room_counts.get(room.value, 0) != FULL_SCALE_PER_ROOM:
            report.warnings.append(
                f"room type {room.value!r} has {room_counts.get(room.value, 0)} "
                f"scenarios (full-scale dataset has {FULL_SCALE_PER_ROOM})"
            )

    tally = Counter()
    for s in ds.scenarios:
        for c in s.criteria:
            tally[c.value] += 1
    report.statistics = {
        "scenarios": len(ds.scenarios),
        "room_types": dict(sorted(room_counts.items())),
        "seen_placements": sum(len(s.seen) for s in ds.scenarios),
        "unseen_placements": sum(len(s.unseen) for s in ds.scenarios),
        "criteria_tally": dict(sorted(tally.items())),
    }
    return report


def criteria_tally(ds: Dataset) -> dict[SortingCriterion, int]:
    """Per-criterion scenario counts (a scenario may carry several tags)."""
    tally = {c: 0 for c in SortingCriterion}
    for s in ds.scenarios:
        for c in s.criteria:
            tally[c] += 1
    return tally


def _parse_enum(enum_cls, raw, locus: str):
    try:
        return enum_cls(raw)
    except ValueError:
        valid = ", ".join(e.value for e in enum_cls)
        raise ParseError(f"{locus}: {raw!r} is not one of {valid}") from None


def _parse_placements(raw, locus: str):
    placements = []
    primitives = []
    if not isinstance(raw, list):
        raise ParseError(f"{locus}: expected a list of placement objects")
    for i, entry in enumerate(raw):
        here = f"{locus}[{i}]"
        if not isinstance(entry, dict):
            raise ParseError(f"{here}: expected an object")
        try:
            obj = entry["object"]
            rec = entry["receptacle"]
        except KeyError as e:
            raise ParseError(f"{here}: missing field {e.args[0]!r}") from None
        if not isinstance(obj, str) or not isinstance(rec, str):
            raise ParseError(f"{here}: object/receptacle must be strings")
        placements.append(Placement(obj, rec))
        if "primitive" in entry:
            prim = _parse_enum(Primitive, entry["primitive"], f"{here}.primitive")
            primitives.append(PrimitiveChoice(obj, prim))
    if primitives and len(primitives) != len(placements):
        raise ParseError(
            f"{locus}: primitive annotations must cover all placements or none"
        )
    return tuple(placements), tuple(primitives) if primitives else None


def scenario_from_obj(obj: dict, locus: str = "scenario") -> Scenario:
    if not isinstance(obj, dict):
        raise ParseError(f"{locus}: expected an object")
    for key in ("id", "room_type", "receptacles", "seen", "unseen", "criteria"):
        if key not in obj:
            raise ParseError(f"{locus}: missing field {key!r}")
    sid = obj["id"]
    if not isinstance(sid, str) or not sid:
        raise ParseError(f"{locus}.id: must be a nonempty string")
    room = _parse_enum(RoomType, obj["room_type"], f"{locus}.room_type")
    recs = obj["receptacles"]
    if not isinstance(recs, list) or not all(isinstance(r, str) for r in recs):
        raise ParseError(f"{locus}.receptacles: expected a list of strings")
    seen, seen_prims = _parse_placements(obj["seen"], f"{locus}.seen")
    unseen, unseen_prims = _parse_placements(obj["unseen"], f"{locus}.unseen")
    raw_criteria = obj["criteria"]
    if not isinstance(raw_criteria, list):
        raise ParseError(f"{locus}.criteria: expected a list")
    criteria = frozenset(
        _parse_enum(SortingCriterion, c, f"{locus}.criteria") for c in raw_criteria
    )
    return Scenario(
        id=sid,
        room_type=room,
        receptacles=tuple(recs),
        seen=seen,
        unseen=unseen,
        criteria=criteria,
        seen_primitives=seen_prims,
        unseen_primitives=unseen_prims,
    )


def dataset_from_obj(obj: dict) -> Dataset:
    if not isinstance(obj, dict) or "scenarios" not in obj:
        raise ParseError("top level: expected an object with a 'scenarios' list")
    raw = obj["scenarios"]
    if not isinstance(raw, list):
        raise ParseError("scenarios: expected a list")
    scenarios = tuple(
        scenario_from_obj(s, f"scenarios[{i}]") for i, s in enumerate(raw)
    )
    return Dataset(scenarios)


def load_dataset(path) -> Dataset:
    """Parse and validate a dataset file.

    Raises ParseError on malformed files (with a field locus) and
    ValidationError if any scenario invariant is violated.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"{path}: {e}") from e
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from e
    ds = dataset_from_obj(obj)
    report = validate_dataset(ds)
    if not report.empty:
        raise ValidationError("; ".join(report.problems))
    return ds


def scenario_to_obj(s: Scenario) -> dict:
    def split_objs(placements, primitives):
        by_obj = {c.object: c.primitive for c in primitives} if primitives else {}
        out = []
        for p in placements:
            entry = {"object": p.object, "receptacle": p.receptacle}
            if p.object in by_obj:
                entry["primitive"] = by_obj[p.object].value
            out.append(entry)
        return out

    return {
        "id": s.id,
        "room_type": s.room_type.value,
        "receptacles": list(s.receptacles),
        "seen": split_objs(s.seen, s.seen_primitives),
        "unseen": split_objs(s.unseen, s.unseen_primitives),
        "criteria": sorted(c.value for c in s.criteria),
    }


def serialize_dataset(ds: Dataset) -> str:
    obj = {"scenarios": [scenario_to_obj(s) for s in ds.scenarios]}
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def dump_dataset(ds: Dataset, path) -> None:
    Path(path).write_text(serialize_dataset(ds), encoding="utf-8")
