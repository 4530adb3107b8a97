"""2D tidying simulator: world model, planner, controller, episode loop."""

from putaway.simworld.control import EmptyPath, PathTracker, find_lookahead_point, pure_pursuit_step
from putaway.simworld.episode import (
    EpisodeLog,
    EpisodeRules,
    ObjectOutcome,
    RuleBook,
    SweepResult,
    approach_point,
    resolve_rules,
    run_episode,
    run_sweep,
)
from putaway.simworld.geometry import Pose2D, Rect, SimError, normalize_angle
from putaway.simworld.grid import (
    BlockedEndpoint,
    NoPath,
    OccupancyGrid,
    OutOfBounds,
    PathPlanner,
    build_occupancy_grid,
    path_step_counts,
    plan_cells,
    plan_path,
)
from putaway.simworld.rng import stream
from putaway.simworld.world import (
    ConfigError,
    NothingGrasped,
    ObjectState,
    ReceptacleBody,
    SimConfig,
    UnknownCategory,
    WorldObject,
    WorldState,
    closest_object,
    execute_primitive,
    load_world,
    simulate_classify,
)

__all__ = [
    "BlockedEndpoint",
    "ConfigError",
    "EmptyPath",
    "EpisodeLog",
    "EpisodeRules",
    "NoPath",
    "NothingGrasped",
    "ObjectOutcome",
    "ObjectState",
    "OccupancyGrid",
    "OutOfBounds",
    "PathPlanner",
    "PathTracker",
    "Pose2D",
    "Rect",
    "ReceptacleBody",
    "RuleBook",
    "SimConfig",
    "SimError",
    "SweepResult",
    "UnknownCategory",
    "WorldObject",
    "WorldState",
    "approach_point",
    "build_occupancy_grid",
    "closest_object",
    "execute_primitive",
    "find_lookahead_point",
    "load_world",
    "normalize_angle",
    "path_step_counts",
    "plan_cells",
    "plan_path",
    "pure_pursuit_step",
    "resolve_rules",
    "run_episode",
    "run_sweep",
    "stream",
]
