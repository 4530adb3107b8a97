"""Tidying episode loop and Monte Carlo sweeps.

An episode repeats: find the closest detected floor object, drive to it,
classify it, look up the receptacle and primitive its category maps to,
drive to the receptacle, execute the primitive. It ends when no detected
objects remain on the floor or the step budget runs out.

Category-to-receptacle/primitive lookups are resolved once before the loop
(decoding is deterministic at temperature 0, so per-object queries would
return the same answers). The headline metric counts an object as correctly
put away only if its first execution attempt deposited it into the
receptacle its ground-truth category maps to; retried objects still get
cleaned up but count as failures, keeping the metric one-attempt-per-object.
"""

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path

from putaway.core import Primitive
from putaway.llmbackend import DecodingParams
from putaway.promptkit import (
    Summary,
    build_realworld_primitive_selection_prompt,
    build_realworld_receptacle_selection_prompt,
    parse_placements,
    parse_primitive_choices,
)
from putaway.simworld import rng as rngmod
from putaway.simworld.control import PathTracker
from putaway.simworld.geometry import Pose2D, SimError, dist
from putaway.simworld.grid import (
    BlockedEndpoint,
    OccupancyGrid,
    PathPlanner,
    build_occupancy_grid,
)
from putaway.simworld.world import (
    ConfigError,
    ObjectState,
    ReceptacleBody,
    SimConfig,
    WorldState,
    closest_object,
    execute_primitive,
    load_world,
    simulate_classify,
)


@dataclass(frozen=True)
class EpisodeRules:
    receptacle_summary: Summary
    primitive_summary: Summary
    categories: tuple[str, ...]

    @staticmethod
    def from_file(path) -> "EpisodeRules":
        try:
            obj = json.loads(Path(path).read_text(encoding="utf-8"))
            return EpisodeRules(
                receptacle_summary=Summary(text=obj["receptacle_summary"]),
                primitive_summary=Summary(text=obj["primitive_summary"]),
                categories=tuple(obj["categories"]),
            )
        except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
            raise ConfigError(f"rules file {path}: {e}") from e


@dataclass(frozen=True)
class RuleBook:
    """Per-category receptacle body and primitive, resolved before the loop."""

    receptacle_by_category: dict
    primitive_by_category: dict

    def receptacle_for(self, category: str) -> ReceptacleBody:
        return self.receptacle_by_category[category]

    def primitive_for(self, category: str) -> Primitive:
        return self.primitive_by_category[category]


def resolve_rules(
    rules: EpisodeRules, world: WorldState, backend, params: DecodingParams
) -> RuleBook:
    """Query the selection prompts once per category set."""
    if not rules.categories:
        raise ConfigError("rules carry no categories")
    receptacle_names = tuple(r.name for r in world.receptacles)
    rec_prompt = build_realworld_receptacle_selection_prompt(
        rules.receptacle_summary, rules.categories, receptacle_names
    )
    rec_completion = backend.complete(rec_prompt, params).completion
    placements = parse_placements(rules.categories[0], rec_completion).placements

    prim_prompt = build_realworld_primitive_selection_prompt(
        rules.primitive_summary, rules.categories
    )
    prim_completion = backend.complete(prim_prompt, params).completion
    choices = parse_primitive_choices(prim_completion).choices

    receptacle_by_category = {}
    for p in placements:
        if p.object in rules.categories and p.object not in receptacle_by_category:
            receptacle_by_category[p.object] = world.receptacle_by_name(p.receptacle)
    primitive_by_category = {}
    for c in choices:
        if c.object in rules.categories and c.object not in primitive_by_category:
            primitive_by_category[c.object] = c.primitive
    missing = [
        c for c in rules.categories
        if c not in receptacle_by_category or c not in primitive_by_category
    ]
    if missing:
        raise ConfigError(f"rule selection left categories unresolved: {missing}")
    return RuleBook(receptacle_by_category, primitive_by_category)


@dataclass(frozen=True)
class ObjectOutcome:
    object_id: str
    name: str
    category: str
    localized: bool
    predicted_category: str | None
    chosen_receptacle: str | None
    chosen_primitive: str | None
    execution_success: bool | None
    attempts: int
    final_state: str
    final_receptacle: str | None
    correct_put_away: bool
    final_correct: bool


@dataclass(frozen=True)
class EpisodeLog:
    outcomes: tuple[ObjectOutcome, ...]
    steps: int
    control_ticks: int
    localization_rate: float
    classification_rate: float | None
    execution_rate: float | None
    classify_events: int
    classify_correct: int
    exec_attempts: int
    exec_successes: int
    overall_fraction: float
    final_correct_fraction: float
    anomalies: tuple[str, ...]
    trace: tuple[dict, ...]

    def to_json_obj(self) -> dict:
        return {
            "steps": self.steps,
            "control_ticks": self.control_ticks,
            "localization_rate": self.localization_rate,
            "classification_rate": self.classification_rate,
            "execution_rate": self.execution_rate,
            "overall_fraction": self.overall_fraction,
            "final_correct_fraction": self.final_correct_fraction,
            "anomalies": list(self.anomalies),
            "objects": [
                {
                    "id": o.object_id,
                    "name": o.name,
                    "category": o.category,
                    "localized": o.localized,
                    "predicted_category": o.predicted_category,
                    "chosen_receptacle": o.chosen_receptacle,
                    "chosen_primitive": o.chosen_primitive,
                    "execution_success": o.execution_success,
                    "attempts": o.attempts,
                    "final_state": o.final_state,
                    "final_receptacle": o.final_receptacle,
                    "correct_put_away": o.correct_put_away,
                    "final_correct": o.final_correct,
                }
                for o in self.outcomes
            ],
        }


def approach_point(grid: OccupancyGrid, from_xy, target_xy):
    """Nearest free point to the target along the line back toward from_xy."""
    if grid.is_free(grid.world_to_cell(*target_xy)):
        return target_xy
    span = dist(from_xy, target_xy)
    if span == 0.0:
        raise BlockedEndpoint("cannot approach a blocked point from itself")
    n = int(span / (grid.resolution / 4.0)) + 1
    for i in range(1, n + 1):
        t = i / n
        p = (
            target_xy[0] + t * (from_xy[0] - target_xy[0]),
            target_xy[1] + t * (from_xy[1] - target_xy[1]),
        )
        if grid.is_free(grid.world_to_cell(*p)):
            return p
    raise BlockedEndpoint(f"no free approach point toward {target_xy}")


class _Navigator:
    """Plan-and-track with a tick budget; collisions abort the leg."""

    def __init__(self, world: WorldState, grid: OccupancyGrid,
                 planner: PathPlanner, cfg: SimConfig):
        self.world = world
        self.grid = grid
        self.planner = planner
        self.cfg = cfg
        self.ticks = 0

    def go_to(self, target_xy) -> bool:
        goal = approach_point(self.grid, self.world.robot.xy, target_xy)
        if dist(self.world.robot.xy, goal) <= self.grid.resolution:
            return True
        path = self.planner.plan(self.world.robot.xy, goal)
        ticks_per_leg = max(1.0, dist(path[0], path[-1]) / (self.cfg.speed * self.cfg.dt))
        budget = 20 + int(10.0 * ticks_per_leg)
        tracker = PathTracker(
            self.world.robot, path, self.cfg.lookahead, self.cfg.speed,
            self.cfg.dt, goal_tol=self.grid.resolution,
        )
        n = 0
        while not tracker.done and n < budget:
            pose = tracker.step()
            n += 1
            if not self.grid.is_free(self.grid.world_to_cell(pose.x, pose.y)):
                self.ticks += n
                self.world.robot = pose
                raise SimError(
                    f"tracked pose entered an occupied cell near {pose.xy}"
                )
        self.ticks += n
        self.world.robot = tracker.pose
        return tracker.done


def run_episode(
    world,
    rules: EpisodeRules,
    backend,
    cfg: SimConfig,
    *,
    planner: PathPlanner | None = None,
    rulebook: RuleBook | None = None,
    params: DecodingParams | None = None,
) -> EpisodeLog:
    """One full perceive-classify-select-manipulate episode."""
    if not isinstance(world, WorldState):
        world = load_world(world)
    world = world.fresh_copy()
    total = len(world.objects)
    grid = planner.grid if planner is not None else build_occupancy_grid(
        world.receptacles, world.bounds, world.resolution, cfg.inflation
    )
    planner = planner or PathPlanner(grid)
    if rulebook is None:
        if params is None:
            raise ConfigError("run_episode needs decoding params to resolve rules")
        rulebook = resolve_rules(rules, world, backend, params)
    bad = [o.id for o in world.objects if o.category not in rules.categories]
    if bad:
        raise ConfigError(f"objects with categories outside the rules: {bad}")

    loc_rng = rngmod.stream(cfg.rng_seed, "localize")
    cls_rng = rngmod.stream(cfg.rng_seed, "classify")
    prim_rng = rngmod.stream(cfg.rng_seed, "primitive")

    for o in world.objects:
        o.detected = bool(loc_rng.random() < cfg.p_localize)

    first: dict[str, dict] = {
        o.id: {
            "localized": o.detected,
            "category": None,
            "receptacle": None,
            "primitive": None,
            "success": None,
            "attempts": 0,
        }
        for o in world.objects
    }
    classify_events = classify_correct = 0
    exec_attempts = exec_successes = 0
    anomalies: list[str] = []
    trace: list[dict] = []
    nav = _Navigator(world, grid, planner, cfg)
    steps = 0

    def pose_list():
        return [round(world.robot.x, 6), round(world.robot.y, 6),
                round(world.robot.theta, 6)]

    while steps < cfg.max_steps:
        obj = closest_object(world, world.robot)
        if obj is None:
            break
        steps += 1
        rec = first[obj.id]
        rec["attempts"] += 1
        outcome = None
        try:
            if not nav.go_to(obj.position):
                raise SimError("navigation budget exhausted before the object")
            obj.state = ObjectState.GRASPED
            category = simulate_classify(obj, rules.categories, cfg.p_classify, cls_rng)
            classify_events += 1
            if category == obj.category:
                classify_correct += 1
            body = rulebook.receptacle_for(category)
            primitive = rulebook.primitive_for(category)
            if rec["category"] is None:
                rec["category"] = category
                rec["receptacle"] = body.id
                rec["primitive"] = primitive.value
            if not nav.go_to(body.drop_point):
                raise SimError("navigation budget exhausted before the receptacle")
            success = execute_primitive(
                world, primitive, body, cfg.p_place, cfg.p_toss, prim_rng
            )
            exec_attempts += 1
            exec_successes += int(success)
            if rec["success"] is None:
                rec["success"] = success
            outcome = (
                f"deposited:{body.id}" if success else f"drop_failed:{body.id}"
            )
        except SimError as e:
            # skip this object: put it down if grasped, stop chasing it
            if obj.state is ObjectState.GRASPED:
                obj.state = ObjectState.ON_FLOOR
                obj.position = world.robot.xy
            obj.detected = False
            anomalies.append(f"object {obj.id}: {e}")
            outcome = f"skipped:{e}"
        counts = world.state_counts()
        if sum(counts.values()) != total:
            raise SimError("object conservation violated")
        trace.append(
            {
                "step": steps,
                "action": "put_away",
                "object": obj.id,
                "pose": pose_list(),
                "outcome": outcome,
            }
        )

    outcomes = []
    n_localized = 0
    n_correct = 0
    n_final_correct = 0
    for o in world.objects:
        rec = first[o.id]
        truth_body = rulebook.receptacle_for(o.category)
        correct = bool(
            rec["localized"]
            and rec["success"]
            and rec["receptacle"] == truth_body.id
        )
        final_correct = (
            o.state is ObjectState.DEPOSITED and o.deposited_in == truth_body.id
        )
        n_localized += int(rec["localized"])
        n_correct += int(correct)
        n_final_correct += int(final_correct)
        outcomes.append(
            ObjectOutcome(
                object_id=o.id,
                name=o.name,
                category=o.category,
                localized=rec["localized"],
                predicted_category=rec["category"],
                chosen_receptacle=rec["receptacle"],
                chosen_primitive=rec["primitive"],
                execution_success=rec["success"],
                attempts=rec["attempts"],
                final_state=o.state.value,
                final_receptacle=o.deposited_in,
                correct_put_away=correct,
                final_correct=final_correct,
            )
        )

    return EpisodeLog(
        outcomes=tuple(outcomes),
        steps=steps,
        control_ticks=nav.ticks,
        localization_rate=n_localized / total if total else 0.0,
        classification_rate=(
            classify_correct / classify_events if classify_events else None
        ),
        execution_rate=exec_successes / exec_attempts if exec_attempts else None,
        classify_events=classify_events,
        classify_correct=classify_correct,
        exec_attempts=exec_attempts,
        exec_successes=exec_successes,
        overall_fraction=n_correct / total if total else 0.0,
        final_correct_fraction=n_final_correct / total if total else 0.0,
        anomalies=tuple(anomalies),
        trace=tuple(trace),
    )


@dataclass(frozen=True)
class SweepResult:
    episodes: int
    mean_overall: float
    std_overall: float
    ci95: float
    mean_final_correct: float
    mean_localization: float
    mean_classification: float
    mean_execution: float

    def render(self) -> str:
        return (
            f"episodes: {self.episodes}\n"
            f"overall put-away fraction: {self.mean_overall:.4f} "
            f"+/- {self.ci95:.4f} (95% CI)\n"
            f"final-state correct fraction: {self.mean_final_correct:.4f}\n"
            f"component rates: localize {self.mean_localization:.4f}, "
            f"classify {self.mean_classification:.4f}, "
            f"execute {self.mean_execution:.4f}"
        )


def run_sweep(worlds, rules: EpisodeRules, backend, cfg: SimConfig, seeds,
              params: DecodingParams | None = None) -> SweepResult:
    """Seeded episodes over every (world, seed) pair; one generator per seed."""
    loaded = [w if isinstance(w, WorldState) else load_world(w) for w in worlds]
    if not loaded or not seeds:
        raise ConfigError("sweep needs at least one world and one seed")
    prepared = []
    for w in loaded:
        grid = build_occupancy_grid(w.receptacles, w.bounds, w.resolution, cfg.inflation)
        book = resolve_rules(rules, w, backend, params) if backend else None
        prepared.append((w, PathPlanner(grid), book))
    fractions = []
    finals = []
    loc_rates = []
    cls_num = cls_den = 0
    exe_num = exe_den = 0
    for seed in seeds:
        seed_cfg = replace(cfg, rng_seed=int(seed))
        for w, planner, book in prepared:
            log = run_episode(
                w, rules, backend, seed_cfg,
                planner=planner, rulebook=book, params=params,
            )
            fractions.append(log.overall_fraction)
            finals.append(log.final_correct_fraction)
            loc_rates.append(log.localization_rate)
            cls_num += log.classify_correct
            cls_den += log.classify_events
            exe_num += log.exec_successes
            exe_den += log.exec_attempts
    n = len(fractions)
    mean = sum(fractions) / n
    var = sum((f - mean) ** 2 for f in fractions) / n
    std = math.sqrt(var)
    return SweepResult(
        episodes=n,
        mean_overall=mean,
        std_overall=std,
        ci95=1.96 * std / math.sqrt(n),
        mean_final_correct=sum(finals) / n,
        mean_localization=sum(loc_rates) / n,
        mean_classification=cls_num / cls_den if cls_den else 0.0,
        mean_execution=exe_num / exe_den if exe_den else 0.0,
    )
