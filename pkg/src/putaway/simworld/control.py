"""Pure pursuit path tracking for a unicycle robot.

Each step steers toward the lookahead point: the farthest-along intersection
of the circle of radius L around the robot with the path polyline (nearest
path point as fallback, final waypoint once within L of the goal). The
commanded curvature is kappa = 2 * y_l / L^2 with y_l the lateral offset of
the lookahead point in the robot frame; motion integrates the exact arc.
"""

import math

from putaway.simworld.geometry import Pose2D, SimError, dist, normalize_angle


class EmptyPath(SimError):
    pass


def _segment_circle_intersection(p1, p2, center, radius):
    """Largest t in [0, 1] with |p1 + t*(p2-p1) - center| = radius, or None."""
    dx = p2[0] - p1[0]
    dy = p2[1] - p1[1]
    fx = p1[0] - center[0]
    fy = p1[1] - center[1]
    a = dx * dx + dy * dy
    if a == 0.0:
        return None
    b = 2.0 * (fx * dx + fy * dy)
    c = fx * fx + fy * fy - radius * radius
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        return None
    sq = math.sqrt(disc)
    for t in ((-b + sq) / (2.0 * a), (-b - sq) / (2.0 * a)):
        if 0.0 <= t <= 1.0:
            return t
    return None


def _nearest_point_on_path(path, center):
    best = path[0]
    best_d = dist(path[0], center)
    for p1, p2 in zip(path, path[1:]):
        dx = p2[0] - p1[0]
        dy = p2[1] - p1[1]
        pl2 = dx * dx + dy * dy
        if pl2 == 0.0:
            candidate = p1
        else:
            t = ((center[0] - p1[0]) * dx + (center[1] - p1[1]) * dy) / pl2
            t = min(1.0, max(0.0, t))
            candidate = (p1[0] + t * dx, p1[1] + t * dy)
        d = dist(candidate, center)
        if d < best_d - 1e-12:
            best, best_d = candidate, d
    return best


def find_lookahead_point(pose: Pose2D, path, lookahead: float, start_seg: int = 0):
    """The point pure pursuit steers toward from this pose."""
    if not path:
        raise EmptyPath("path has no waypoints")
    if lookahead <= 0:
        raise SimError("lookahead must be positive")
    center = pose.xy
    if dist(center, path[-1]) <= lookahead:
        return path[-1]
    target = None
    for i in range(max(0, start_seg), len(path) - 1):
        t = _segment_circle_intersection(path[i], path[i + 1], center, lookahead)
        if t is not None:
            p1, p2 = path[i], path[i + 1]
            target = (p1[0] + t * (p2[0] - p1[0]), p1[1] + t * (p2[1] - p1[1]))
    if target is None:
        target = _nearest_point_on_path(path, center)
    return target


def _advance(pose: Pose2D, target, lookahead: float, speed: float,
             dt: float) -> Pose2D:
    # lateral offset of the target in the robot frame
    dx = target[0] - pose.x
    dy = target[1] - pose.y
    sin_t = math.sin(pose.theta)
    cos_t = math.cos(pose.theta)
    y_l = -sin_t * dx + cos_t * dy
    kappa = 2.0 * y_l / (lookahead * lookahead)
    omega = speed * kappa
    if abs(omega) < 1e-12:
        return Pose2D(
            pose.x + speed * dt * cos_t, pose.y + speed * dt * sin_t, pose.theta
        )
    radius = speed / omega
    theta_new = pose.theta + omega * dt
    return Pose2D(
        pose.x + radius * (math.sin(theta_new) - sin_t),
        pose.y - radius * (math.cos(theta_new) - cos_t),
        normalize_angle(theta_new),
    )


def pure_pursuit_step(pose: Pose2D, path, lookahead: float, speed: float,
                      dt: float) -> Pose2D:
    """One control tick: pick the lookahead point and integrate the arc."""
    target = find_lookahead_point(pose, path, lookahead)
    return _advance(pose, target, lookahead, speed, dt)


class PathTracker:
    """Stateful tracker for episode use: scans segments from its progress
    index forward, so long paths cost O(1) per tick instead of O(n)."""

    def __init__(self, pose: Pose2D, path, lookahead: float, speed: float,
                 dt: float, goal_tol: float):
        if not path:
            raise EmptyPath("path has no waypoints")
        self.pose = pose
        self.path = path
        self.lookahead = lookahead
        self.speed = speed
        self.dt = dt
        self.goal_tol = goal_tol
        self._seg = 0

    @property
    def done(self) -> bool:
        return dist(self.pose.xy, self.path[-1]) <= self.goal_tol

    def step(self) -> Pose2D:
        center = self.pose.xy
        target = None
        if dist(center, self.path[-1]) <= self.lookahead:
            target = self.path[-1]
            self._seg = len(self.path) - 1
        else:
            for i in range(self._seg, len(self.path) - 1):
                t = _segment_circle_intersection(
                    self.path[i], self.path[i + 1], center, self.lookahead
                )
                if t is not None:
                    p1, p2 = self.path[i], self.path[i + 1]
                    target = (
                        p1[0] + t * (p2[0] - p1[0]),
                        p1[1] + t * (p2[1] - p1[1]),
                    )
                    self._seg = i
            if target is None:
                target = _nearest_point_on_path(self.path, center)
        self.pose = _advance(self.pose, target, self.lookahead, self.speed, self.dt)
        return self.pose
