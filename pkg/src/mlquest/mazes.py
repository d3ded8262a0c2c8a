"""Perfect-maze carving and path utilities shared by levels 1 and 2.

A maze is a cell grid whose open passages form a spanning tree, so exactly
one simple path exists between any two cells. Cells are addressed in cell
coordinates; rendering expands to a (2R+1) x (2C+1) character raster where
odd/odd tiles are cells.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import DIRECTION_ORDER, Direction, GridPos, ParseError, check_keys
from .rng import Rng

_BIT = {Direction.NORTH: 1, Direction.EAST: 2, Direction.SOUTH: 4, Direction.WEST: 8}


@dataclass
class Maze:
    rows: int
    cols: int
    open_walls: list[list[int]] = field(default_factory=list)  # passage bitmask per cell

    def __post_init__(self) -> None:
        if not self.open_walls:
            self.open_walls = [[0] * self.cols for _ in range(self.rows)]

    def in_bounds(self, pos: GridPos) -> bool:
        return 0 <= pos.row < self.rows and 0 <= pos.col < self.cols

    def is_open(self, pos: GridPos, direction: Direction) -> bool:
        return bool(self.open_walls[pos.row][pos.col] & _BIT[direction])

    def carve(self, pos: GridPos, direction: Direction) -> None:
        target = pos.step(direction)
        self.open_walls[pos.row][pos.col] |= _BIT[direction]
        self.open_walls[target.row][target.col] |= _BIT[direction.opposite]

    def neighbors(self, pos: GridPos) -> list[GridPos]:
        """Cells reachable in one move (passage open), in fixed N/E/S/W order."""
        out = []
        for direction in DIRECTION_ORDER:
            if self.is_open(pos, direction):
                out.append(pos.step(direction))
        return out

    def degree(self, pos: GridPos) -> int:
        return bin(self.open_walls[pos.row][pos.col]).count("1")

    def cells(self) -> list[GridPos]:
        return [GridPos(r, c) for r in range(self.rows) for c in range(self.cols)]

    def to_dict(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "open_walls": [list(row) for row in self.open_walls]}

    @classmethod
    def from_dict(cls, data: dict) -> "Maze":
        check_keys(data, {"rows", "cols", "open_walls"}, where="maze")
        rows, cols = int(data["rows"]), int(data["cols"])
        walls = data["open_walls"]
        if len(walls) != rows or any(len(row) != cols for row in walls):
            raise ParseError("maze open_walls shape does not match rows x cols")
        return cls(rows=rows, cols=cols, open_walls=[[int(v) for v in row] for row in walls])


def carve_perfect_maze(rows: int, cols: int, rng: Rng) -> Maze:
    """Recursive-backtracker carve: depth-first, random unvisited neighbor."""
    maze = Maze(rows, cols)
    visited = [[False] * cols for _ in range(rows)]
    start = GridPos(0, 0)
    visited[0][0] = True
    stack = [start]
    while stack:
        current = stack[-1]
        options = []
        for direction in DIRECTION_ORDER:
            nxt = current.step(direction)
            if maze.in_bounds(nxt) and not visited[nxt.row][nxt.col]:
                options.append(direction)
        if not options:
            stack.pop()
            continue
        direction = rng.choice(options)
        nxt = current.step(direction)
        maze.carve(current, direction)
        visited[nxt.row][nxt.col] = True
        stack.append(nxt)
    return maze


def is_perfect(maze: Maze) -> bool:
    """Connected and acyclic: passage count = cells - 1 and all reachable."""
    total_open = sum(maze.degree(cell) for cell in maze.cells())
    if total_open != 2 * (maze.rows * maze.cols - 1):
        return False
    seen = {GridPos(0, 0)}
    frontier = [GridPos(0, 0)]
    while frontier:
        cell = frontier.pop()
        for nxt in maze.neighbors(cell):
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return len(seen) == maze.rows * maze.cols


def unique_path(maze: Maze, start: GridPos, goal: GridPos) -> list[GridPos]:
    """The one simple path between two cells of a perfect maze (BFS parents)."""
    parents: dict[GridPos, GridPos] = {start: start}
    frontier = [start]
    while frontier and goal not in parents:
        nxt_frontier = []
        for cell in frontier:
            for nxt in maze.neighbors(cell):
                if nxt not in parents:
                    parents[nxt] = cell
                    nxt_frontier.append(nxt)
        frontier = nxt_frontier
    if goal not in parents:
        raise ValueError(f"no path from {start} to {goal}")
    path = [goal]
    while path[-1] != start:
        path.append(parents[path[-1]])
    path.reverse()
    return path


def path_directions(path: list[GridPos]) -> list[Direction]:
    return [path[i].direction_to(path[i + 1]) for i in range(len(path) - 1)]


def render_raster(maze: Maze, marks: dict[GridPos, str] | None = None) -> list[str]:
    """Expand to a wall-tile raster: '#' wall, '.' corridor, plus cell marks."""
    marks = marks or {}
    height, width = 2 * maze.rows + 1, 2 * maze.cols + 1
    grid = [["#"] * width for _ in range(height)]
    for r in range(maze.rows):
        for c in range(maze.cols):
            grid[2 * r + 1][2 * c + 1] = "."
            cell = GridPos(r, c)
            if maze.is_open(cell, Direction.EAST):
                grid[2 * r + 1][2 * c + 2] = "."
            if maze.is_open(cell, Direction.SOUTH):
                grid[2 * r + 2][2 * c + 1] = "."
    for cell, mark in marks.items():
        grid[2 * cell.row + 1][2 * cell.col + 1] = mark
    return ["".join(row) for row in grid]
