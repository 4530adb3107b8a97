"""Occupancy grid and shortest-path planning.

Planning is A* on the 8-connected grid with diagonal cost sqrt(2). Diagonal
moves additionally require both adjacent orthogonal cells to be free, so
paths never cut corners of obstacles.
"""

import heapq
import math
from dataclasses import dataclass

import numpy as np

from putaway.simworld.geometry import Rect, SimError

SQRT2 = math.sqrt(2.0)
_EPS = 1e-7  # cell-unit tolerance against float noise in footprint edges


class OutOfBounds(SimError):
    pass


class NoPath(SimError):
    pass


class BlockedEndpoint(SimError):
    pass


@dataclass
class OccupancyGrid:
    resolution: float
    width: int
    height: int
    origin: tuple[float, float]  # world coords of cell (0, 0) corner
    occupied: np.ndarray  # bool, shape (height, width), indexed [iy, ix]

    def world_to_cell(self, x: float, y: float) -> tuple[int, int]:
        ox, oy = self.origin
        return (int((x - ox) / self.resolution), int((y - oy) / self.resolution))

    def cell_center(self, cell: tuple[int, int]) -> tuple[float, float]:
        ox, oy = self.origin
        ix, iy = cell
        return (ox + (ix + 0.5) * self.resolution, oy + (iy + 0.5) * self.resolution)

    def in_bounds(self, cell: tuple[int, int]) -> bool:
        ix, iy = cell
        return 0 <= ix < self.width and 0 <= iy < self.height

    def is_free(self, cell: tuple[int, int]) -> bool:
        return self.in_bounds(cell) and not bool(self.occupied[cell[1], cell[0]])

    def occupied_count(self) -> int:
        return int(self.occupied.sum())


def build_occupancy_grid(
    receptacles, bounds: Rect, resolution: float, inflation: float = 0.0
) -> OccupancyGrid:
    """Mark cells overlapping any inflated receptacle footprint as occupied."""
    if resolution <= 0:
        raise SimError("resolution must be positive")
    if inflation < 0:
        raise SimError("inflation must be nonnegative")
    width = max(1, round(bounds.width / resolution))
    height = max(1, round(bounds.height / resolution))
    occupied = np.zeros((height, width), dtype=bool)
    grid = OccupancyGrid(
        resolution=resolution,
        width=width,
        height=height,
        origin=(bounds.xmin, bounds.ymin),
        occupied=occupied,
    )
    for body in receptacles:
        footprint = body.footprint if hasattr(body, "footprint") else body
        if not footprint.inside(bounds):
            raise OutOfBounds(f"footprint {footprint} outside world bounds {bounds}")
        rect = footprint.inflate(inflation)
        ix0 = max(0, math.floor((rect.xmin - bounds.xmin) / resolution + _EPS))
        iy0 = max(0, math.floor((rect.ymin - bounds.ymin) / resolution + _EPS))
        ix1 = min(width, math.ceil((rect.xmax - bounds.xmin) / resolution - _EPS))
        iy1 = min(height, math.ceil((rect.ymax - bounds.ymin) / resolution - _EPS))
        occupied[iy0:iy1, ix0:ix1] = True
    return grid


_NEIGHBORS = (
    (1, 0, 1.0), (-1, 0, 1.0), (0, 1, 1.0), (0, -1, 1.0),
    (1, 1, SQRT2), (1, -1, SQRT2), (-1, 1, SQRT2), (-1, -1, SQRT2),
)


def _octile(a: tuple[int, int], b: tuple[int, int]) -> float:
    dx = abs(a[0] - b[0])
    dy = abs(a[1] - b[1])
    return dx + dy + (SQRT2 - 2.0) * min(dx, dy)


def plan_cells(
    grid: OccupancyGrid, start: tuple[int, int], goal: tuple[int, int]
) -> list[tuple[int, int]]:
    """A* over cells; raises BlockedEndpoint/NoPath. Returns start..goal."""
    for name, cell in (("start", start), ("goal", goal)):
        if not grid.in_bounds(cell):
            raise BlockedEndpoint(f"{name} cell {cell} outside the grid")
        if not grid.is_free(cell):
            raise BlockedEndpoint(f"{name} cell {cell} is occupied")
    if start == goal:
        return [start]
    free = ~grid.occupied
    g_score = {start: 0.0}
    came_from: dict[tuple[int, int], tuple[int, int]] = {}
    counter = 0
    open_heap = [(_octile(start, goal), counter, start)]
    closed = set()
    while open_heap:
        _, _, current = heapq.heappop(open_heap)
        if current == goal:
            path = [current]
            while current in came_from:
                current = came_from[current]
                path.append(current)
            path.reverse()
            return path
        if current in closed:
            continue
        closed.add(current)
        cx, cy = current
        for dx, dy, cost in _NEIGHBORS:
            nx, ny = cx + dx, cy + dy
            if not (0 <= nx < grid.width and 0 <= ny < grid.height):
                continue
            if not free[ny, nx]:
                continue
            if dx and dy and not (free[cy, nx] and free[ny, cx]):
                continue  # no corner cutting
            tentative = g_score[current] + cost
            neighbor = (nx, ny)
            if tentative < g_score.get(neighbor, math.inf) - 1e-12:
                g_score[neighbor] = tentative
                came_from[neighbor] = current
                counter += 1
                heapq.heappush(
                    open_heap, (tentative + _octile(neighbor, goal), counter, neighbor)
                )
    raise NoPath(f"no collision-free path from {start} to {goal}")


def path_step_counts(cells) -> tuple[int, int]:
    """(straight, diagonal) step counts; the exact cost is s + d*sqrt(2)."""
    straight = diagonal = 0
    for a, b in zip(cells, cells[1:]):
        if a[0] != b[0] and a[1] != b[1]:
            diagonal += 1
        else:
            straight += 1
    return straight, diagonal


def plan_path(
    grid: OccupancyGrid, start: tuple[float, float], goal: tuple[float, float]
) -> list[tuple[float, float]]:
    """World-coordinate polyline of cell centers along the shortest path."""
    cells = plan_cells(grid, grid.world_to_cell(*start), grid.world_to_cell(*goal))
    return [grid.cell_center(c) for c in cells]


class PathPlanner:
    """plan_path with a per-grid memo of cell-to-cell paths.

    Paths are a pure function of (start cell, goal cell), so memoization
    does not affect results; it makes repeated Monte Carlo episodes cheap.
    """

    def __init__(self, grid: OccupancyGrid):
        self.grid = grid
        self._memo: dict[tuple, list[tuple[int, int]]] = {}

    def plan(self, start_xy, goal_xy) -> list[tuple[float, float]]:
        key = (self.grid.world_to_cell(*start_xy), self.grid.world_to_cell(*goal_xy))
        cells = self._memo.get(key)
        if cells is None:
            cells = plan_cells(self.grid, key[0], key[1])
            self._memo[key] = cells
        return [self.grid.cell_center(c) for c in cells]
