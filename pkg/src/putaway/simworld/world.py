"""World state for the tidying simulator.

Sensing is parametric rather than camera-based: overhead localization is a
per-object Bernoulli draw at episode start, and egocentric classification is
a confusion model that returns the true category with probability p and a
uniform wrong category otherwise. Manipulation primitives succeed with their
configured probability; a failed attempt drops the object back on the floor
beside the receptacle, still detected, so the episode may retry it.
"""

import json
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

from putaway.simworld.geometry import Pose2D, Rect, SimError, dist
from putaway.core import Primitive


class ConfigError(SimError):
    pass


class UnknownCategory(SimError):
    """Object's ground-truth category is missing from the label set."""


class NothingGrasped(SimError):
    pass


class ObjectState(Enum):
    ON_FLOOR = "on_floor"
    GRASPED = "grasped"
    DEPOSITED = "deposited"


@dataclass
class WorldObject:
    id: str
    name: str
    category: str
    position: tuple[float, float] | None
    state: ObjectState = ObjectState.ON_FLOOR
    deposited_in: str | None = None
    detected: bool = False


@dataclass(frozen=True)
class ReceptacleBody:
    id: str
    name: str
    footprint: Rect
    drop_point: tuple[float, float]

    def __post_init__(self):
        if not self.footprint.contains(*self.drop_point):
            raise ConfigError(
                f"receptacle {self.id}: drop point {self.drop_point} outside footprint"
            )


@dataclass
class WorldState:
    bounds: Rect
    resolution: float
    robot: Pose2D
    objects: list[WorldObject]
    receptacles: list[ReceptacleBody]

    def fresh_copy(self) -> "WorldState":
        return WorldState(
            bounds=self.bounds,
            resolution=self.resolution,
            robot=self.robot,
            objects=[replace(o) for o in self.objects],
            receptacles=list(self.receptacles),
        )

    def grasped_object(self) -> WorldObject | None:
        for o in self.objects:
            if o.state is ObjectState.GRASPED:
                return o
        return None

    def state_counts(self) -> dict[str, int]:
        counts = {s.value: 0 for s in ObjectState}
        for o in self.objects:
            counts[o.state.value] += 1
        return counts

    def receptacle_by_name(self, name: str) -> ReceptacleBody:
        wanted = " ".join(name.split()).casefold()
        for r in self.receptacles:
            if " ".join(r.name.split()).casefold() == wanted:
                return r
        raise ConfigError(f"no receptacle named {name!r} in the world")


def load_world(path) -> WorldState:
    """Simulator scenario file: bounds, resolution, robot start, bodies."""
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"world file {path}: {e}") from e
    try:
        bounds = Rect(*obj["bounds"])
        resolution = float(obj["resolution"])
        robot = Pose2D(*obj["robot_start"])
        objects = [
            WorldObject(
                id=o["id"],
                name=o["name"],
                category=o["category"],
                position=(float(o["position"][0]), float(o["position"][1])),
            )
            for o in obj["objects"]
        ]
        receptacles = [
            ReceptacleBody(
                id=r["id"],
                name=r["name"],
                footprint=Rect(*r["footprint"]),
                drop_point=(float(r["drop_point"][0]), float(r["drop_point"][1])),
            )
            for r in obj["receptacles"]
        ]
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"world file {path}: {e}") from e
    if resolution <= 0:
        raise ConfigError(f"world file {path}: resolution must be positive")
    ids = [o.id for o in objects] + [r.id for r in receptacles]
    if len(set(ids)) != len(ids):
        raise ConfigError(f"world file {path}: duplicate ids")
    world = WorldState(
        bounds=bounds, resolution=resolution, robot=robot,
        objects=objects, receptacles=receptacles,
    )
    for o in objects:
        if not bounds.contains(*o.position):
            raise ConfigError(f"object {o.id} at {o.position} outside bounds")
    return world


@dataclass(frozen=True)
class SimConfig:
    p_localize: float = 1.0
    p_classify: float = 1.0
    p_place: float = 1.0
    p_toss: float = 1.0
    lookahead: float = 0.3
    speed: float = 1.0
    dt: float = 0.1
    inflation: float = 0.15
    max_steps: int = 200
    rng_seed: int = 0

    def __post_init__(self):
        for name in ("p_localize", "p_classify", "p_place", "p_toss"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ConfigError(f"{name}={v} outside [0, 1]")
        if self.lookahead <= 0:
            raise ConfigError("lookahead must be positive")
        if self.speed <= 0:
            raise ConfigError("speed must be positive")
        if self.dt <= 0:
            raise ConfigError("dt must be positive")
        if self.inflation < 0:
            raise ConfigError("inflation must be nonnegative")
        if self.max_steps <= 0:
            raise ConfigError("max_steps must be positive")

    @staticmethod
    def from_file(path) -> "SimConfig":
        try:
            obj = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"sim config {path}: {e}") from e
        known = {f for f in SimConfig.__dataclass_fields__}
        unknown = set(obj) - known
        if unknown:
            raise ConfigError(f"sim config {path}: unknown fields {sorted(unknown)}")
        return SimConfig(**obj)


def closest_object(world: WorldState, pose: Pose2D) -> WorldObject | None:
    """Nearest detected on-floor object, or None (episode then terminates)."""
    best = None
    best_d = math.inf
    for o in world.objects:
        if o.state is ObjectState.ON_FLOOR and o.detected:
            d = dist(o.position, pose.xy)
            if d < best_d:
                best, best_d = o, d
    return best


def simulate_classify(obj: WorldObject, categories, p_classify: float, rng) -> str:
    """Ground truth with probability p_classify, else a uniform wrong label."""
    categories = list(categories)
    if obj.category not in categories:
        raise UnknownCategory(
            f"object {obj.id} category {obj.category!r} not in label set {categories}"
        )
    hit = rng.random() < p_classify
    if hit or len(categories) == 1:
        return obj.category
    others = [c for c in categories if c != obj.category]
    return others[int(rng.integers(len(others)))]


def _drop_beside(world: WorldState, body: ReceptacleBody) -> tuple[float, float]:
    x, y = world.robot.x, world.robot.y
    if not body.footprint.contains(x, y):
        return (x, y)
    # robot unexpectedly inside the footprint: push out past the near edge
    dx = x - body.drop_point[0]
    dy = y - body.drop_point[1]
    norm = math.hypot(dx, dy) or 1.0
    span = max(body.footprint.width, body.footprint.height)
    return (x + dx / norm * span, y + dy / norm * span)


def execute_primitive(
    world: WorldState,
    primitive: Primitive,
    receptacle: ReceptacleBody,
    p_place: float,
    p_toss: float,
    rng,
) -> bool:
    """Deposit the grasped object with the primitive's success probability.

    On failure the object lands beside the receptacle, still detected.
    """
    obj = world.grasped_object()
    if obj is None:
        raise NothingGrasped("no object is grasped")
    p = p_place if primitive is Primitive.PLACE else p_toss
    success = rng.random() < p
    if success:
        obj.state = ObjectState.DEPOSITED
        obj.deposited_in = receptacle.id
        obj.position = None
        obj.detected = False
    else:
        obj.state = ObjectState.ON_FLOOR
        obj.position = _drop_beside(world, receptacle)
        obj.detected = True
    return success
