"""Procedural generation and validation of level specs.

Every pedagogical invariant the levels rely on (unique maze solution,
unique steepest descent, winnable rescue race) is machine-checked here:
generators rejection-sample until a candidate passes, and ``validate``
re-derives each invariant from scratch so hand-edited files are caught.

Elevations are built on a 0.1 lattice held as integer tenths, so slope
labels round cleanly and the 0.1 display margin between the steepest
edge and the runner-up is exact.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import content, mazes
from .level1 import Level1Spec
from .level2 import Edge, Level2Spec, RedManSpec
from .level3 import Level3Spec, PursuerSpec
from .model import DIRECTION_ORDER, GridPos, MLQuestError
from .rng import Rng

_MASK = (1 << 64) - 1
GOAL_TENTHS = 10  # goal elevation 1.0; everything else sits above it
SLOPE_EPS = 1e-9


class ConfigInvalid(MLQuestError):
    pass


@dataclass(frozen=True)
class GenConfig:
    seed: int
    maze_width: int = 9  # rendered tile columns, odd (cells = (n-1)/2)
    maze_height: int = 9
    junction_limit: int = 50
    diamond_count: int = 3
    town_rows: int = 11
    town_cols: int = 11
    red_man_count: int = 2

    def check(self) -> None:
        for name in ("maze_width", "maze_height"):
            value = getattr(self, name)
            if value < 5 or value % 2 == 0:
                raise ConfigInvalid(f"{name} must be odd and >= 5, got {value}")
        for name in ("junction_limit", "diamond_count", "town_rows", "town_cols", "red_man_count"):
            if getattr(self, name) < 1:
                raise ConfigInvalid(f"{name} must be positive, got {getattr(self, name)}")
        if self.town_rows < 5 or self.town_cols < 5:
            raise ConfigInvalid("town must be at least 5x5")

    @property
    def cell_rows(self) -> int:
        return (self.maze_height - 1) // 2

    @property
    def cell_cols(self) -> int:
        return (self.maze_width - 1) // 2


def _rng(cfg: GenConfig, lane: int, attempt: int) -> Rng:
    # Distinct deterministic stream per (seed, level, retry).
    mixed = (cfg.seed ^ (lane * 0x9E3779B97F4A7C15) ^ (attempt * 0xBF58476D1CE4E5B9)) & _MASK
    return Rng(mixed)


@dataclass(frozen=True)
class ValidationReport:
    level: int
    passed: bool
    violations: tuple[tuple[str, str], ...]  # (invariant name, witness)

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "passed": self.passed,
            "violations": [{"name": name, "witness": witness} for name, witness in self.violations],
        }


def _report(level: int, violations: list[tuple[str, str]]) -> ValidationReport:
    return ValidationReport(level=level, passed=not violations, violations=tuple(violations))


# --- junction graph extraction -------------------------------------------

def junction_nodes(maze: mazes.Maze) -> list[GridPos]:
    """Cells where a route choice exists or ends: degree 1 tips and
    degree >= 3 branches. Corridor interiors (degree 2) are not nodes."""
    return [cell for cell in maze.cells() if maze.degree(cell) != 2]


def corridors(maze: mazes.Maze) -> list[tuple[GridPos, GridPos, tuple[GridPos, ...]]]:
    """Undirected corridor runs (node, node, cells inclusive), each once."""
    nodes = set(junction_nodes(maze))
    consumed: set[tuple[GridPos, GridPos]] = set()
    runs = []
    for node in sorted(nodes):
        for direction in DIRECTION_ORDER:
            if not maze.is_open(node, direction):
                continue
            first = node.step(direction)
            if (node, first) in consumed:
                continue
            cells = [node, first]
            prev, cur = node, first
            while cur not in nodes:
                nxt = [n for n in maze.neighbors(cur) if n != prev][0]
                prev, cur = cur, nxt
                cells.append(cur)
            consumed.add((node, first))
            consumed.add((cur, cells[-2]))
            runs.append((node, cur, tuple(cells)))
    return runs


def _adjacency(runs) -> dict[GridPos, list[tuple[GridPos, tuple[GridPos, ...]]]]:
    adj: dict[GridPos, list[tuple[GridPos, tuple[GridPos, ...]]]] = {}
    for u, v, cells in runs:
        adj.setdefault(u, []).append((v, cells))
        adj.setdefault(v, []).append((u, tuple(reversed(cells))))
    for options in adj.values():
        options.sort(key=lambda item: item[0])
    return adj


def _node_path(adj, start: GridPos, goal: GridPos) -> list[GridPos] | None:
    """Junction-node path via BFS; None when no route exists."""
    parents: dict[GridPos, GridPos] = {start: start}
    frontier = [start]
    while frontier:
        nxt = []
        for node in frontier:
            for other, _ in adj.get(node, []):
                if other not in parents:
                    parents[other] = node
                    nxt.append(other)
        frontier = nxt
    if goal not in parents:
        return None
    path = [goal]
    while path[-1] != start:
        path.append(parents[path[-1]])
    path.reverse()
    return path


# --- level 1 ---------------------------------------------------------------

def generate_level1(cfg: GenConfig) -> Level1Spec:
    cfg.check()
    rows, cols = cfg.cell_rows, cfg.cell_cols
    if cfg.diamond_count > rows * cols - 1:
        raise ConfigInvalid(f"{cfg.diamond_count} diamonds cannot fit on any path in a {rows}x{cols} maze")
    for attempt in range(100):
        rng = _rng(cfg, 1, attempt)
        maze = mazes.carve_perfect_maze(rows, cols, rng)
        entrance = GridPos(rng.randrange(rows), 0)
        exit_ = GridPos(rng.randrange(rows), cols - 1)
        path = mazes.unique_path(maze, entrance, exit_)
        candidates = path[1:]  # entrance excluded; a diamond there is never stepped onto
        if cfg.diamond_count > len(candidates):
            continue  # this maze's path is too short; recarve
        picks = list(candidates)
        rng.shuffle(picks)
        diamonds = tuple(sorted(picks[: cfg.diamond_count]))

        sequence = tuple(mazes.path_directions(path))
        trail = [GridPos(0, 0)]
        for direction in sequence:
            trail.append(trail[-1].step(direction))
        min_r = min(p.row for p in trail)
        min_c = min(p.col for p in trail)
        max_r = max(p.row for p in trail)
        max_c = max(p.col for p in trail)
        return Level1Spec(
            overworld_rows=max_r - min_r + 3,  # the walk plus a 1-tile border
            overworld_cols=max_c - min_c + 3,
            spawn=GridPos(1 - min_r, 1 - min_c),
            maze=maze,
            entrance=entrance,
            exit=exit_,
            canonical_sequence=sequence,
            diamonds=diamonds,
            outcome=content.default_outcome(1),
        )
    raise ConfigInvalid(
        f"no {cfg.cell_rows}x{cfg.cell_cols} maze path fits {cfg.diamond_count} diamonds (seed {cfg.seed})"
    )


def _validate_level1(spec: Level1Spec) -> list[tuple[str, str]]:
    violations: list[tuple[str, str]] = []
    maze = spec.maze
    if not (maze.in_bounds(spec.entrance) and maze.in_bounds(spec.exit)) or spec.entrance == spec.exit:
        violations.append(("bad-endpoints", f"entrance {spec.entrance.to_list()}, exit {spec.exit.to_list()}"))
        return violations
    if not mazes.is_perfect(maze):
        violations.append(("maze-not-perfect", "passage graph is not a spanning tree"))

    pos = spec.entrance
    walked = [pos]
    for i, direction in enumerate(spec.canonical_sequence):
        if not maze.is_open(pos, direction):
            violations.append(("sequence-unsolved", f"step {i} ({direction.value}) hits a wall at {pos.to_list()}"))
            break
        pos = pos.step(direction)
        walked.append(pos)
    else:
        if pos != spec.exit:
            violations.append(("sequence-unsolved", f"sequence ends at {pos.to_list()}, not the exit"))

    path_cells = set(walked)
    seen: set[GridPos] = set()
    for diamond in spec.diamonds:
        if diamond in seen:
            violations.append(("diamond-duplicate", str(diamond.to_list())))
        seen.add(diamond)
        if diamond not in path_cells:
            violations.append(("diamond-off-path", str(diamond.to_list())))
    if spec.diamond_value <= 0:
        violations.append(("diamond-value", str(spec.diamond_value)))

    for cell in spec.red_path:
        if not (0 <= cell.row < spec.overworld_rows and 0 <= cell.col < spec.overworld_cols):
            violations.append(("red-path-out-of-bounds", str(cell.to_list())))
            break
    return violations


# --- level 2 ---------------------------------------------------------------

def generate_level2(cfg: GenConfig) -> Level2Spec:
    cfg.check()
    if cfg.junction_limit < 3:
        raise ConfigInvalid("a descent needs at least 3 junctions (start, a branch, goal)")
    for attempt in range(200):
        rng = _rng(cfg, 2, attempt)
        maze = mazes.carve_perfect_maze(cfg.cell_rows, cfg.cell_cols, rng)
        nodes = junction_nodes(maze)
        if not 3 <= len(nodes) <= cfg.junction_limit:
            continue
        branch_nodes = [n for n in nodes if maze.degree(n) >= 3]
        if not branch_nodes:
            continue
        start = branch_nodes[rng.randrange(len(branch_nodes))]
        runs = corridors(maze)
        adj = _adjacency(runs)
        leaves = []
        for node in nodes:
            if maze.degree(node) == 1 and node != start:
                path = _node_path(adj, start, node)
                if path is not None and len(path) >= 3:
                    leaves.append(node)
        if not leaves:
            continue
        goal = leaves[rng.randrange(len(leaves))]
        spec = _assemble_level2(cfg, rng, maze, runs, adj, start, goal)
        if spec is not None:
            return spec
    raise ConfigInvalid(f"no junction tree under {cfg.junction_limit} junctions found (seed {cfg.seed})")


def _assemble_level2(cfg, rng, maze, runs, adj, start, goal) -> Level2Spec | None:
    node_path = _node_path(adj, start, goal)
    run_by_pair = {frozenset((u, v)): (u, v, cells) for u, v, cells in runs}

    # Elevations in integer tenths, assigned goal-up along the canonical
    # path, then outward over the branches.
    tenths: dict[GridPos, int] = {goal: GOAL_TENTHS}
    canonical_out: dict[GridPos, int] = {}  # node -> its canonical edge's slope
    for i in range(len(node_path) - 2, -1, -1):
        u, v = node_path[i], node_path[i + 1]
        length = len(run_by_pair[frozenset((u, v))][2]) - 1
        slope = 5 + rng.randrange(26)  # 0.5 .. 3.0 per tile
        canonical_out[u] = slope
        tenths[u] = tenths[v] + slope * length

    assigned = {frozenset((node_path[i], node_path[i + 1])) for i in range(len(node_path) - 1)}
    queue = list(node_path)
    while queue:
        u = queue.pop(0)
        for v, cells in adj[u]:
            pair = frozenset((u, v))
            if pair in assigned:
                continue
            assigned.add(pair)
            length = len(cells) - 1
            cap = canonical_out[u] - 1 if u in canonical_out else 30
            cap = min(cap, (tenths[u] - GOAL_TENTHS - 1) // length)
            slope = -30 + rng.randrange(cap + 31)  # lattice pick from [-3.0, cap/10]
            tenths[v] = tenths[u] - slope * length
            queue.append(v)

    elevations = {node: value / 10.0 for node, value in tenths.items()}
    edges = []
    for u, v, cells in runs:
        length = len(cells) - 1
        edges.append(Edge(src=u, dst=v, cells=cells, slope=(elevations[u] - elevations[v]) / length))
        edges.append(
            Edge(src=v, dst=u, cells=tuple(reversed(cells)), slope=(elevations[v] - elevations[u]) / length)
        )
    edges.sort(key=lambda e: (e.src, e.dst))

    canonical_cells = set()
    for i in range(len(node_path) - 1):
        canonical_cells.update(run_by_pair[frozenset((node_path[i], node_path[i + 1]))][2])

    red_men = _level2_red_men(cfg, runs, assigned, node_path, canonical_cells)
    return Level2Spec(
        maze=maze,
        start=start,
        goal=goal,
        elevations=elevations,
        edges=tuple(edges),
        red_men=tuple(red_men),
        outcome=content.default_outcome(2),
    )


def _level2_red_men(cfg, runs, assigned, node_path, canonical_cells) -> list[RedManSpec]:
    """Confine enemies to dead-end corridors, clear of the canonical path,
    so the steepest-descent route itself is never forced through damage."""
    canonical_pairs = {frozenset((node_path[i], node_path[i + 1])) for i in range(len(node_path) - 1)}
    domains = []
    for u, v, cells in runs:
        if frozenset((u, v)) in canonical_pairs:
            continue
        interior = cells[1:-1]
        segment: list[GridPos] = []
        best: list[GridPos] = []
        for cell in interior:
            if all(cell.chebyshev(c) >= 2 for c in canonical_cells):
                segment.append(cell)
                if len(segment) > len(best):
                    best = list(segment)
            else:
                segment = []
        if len(best) >= 2:
            domains.append(best)
    domains.sort(key=lambda seg: (-len(seg), seg[0]))
    return [
        RedManSpec(spawn=seg[len(seg) // 2], walk_domain=frozenset(seg))
        for seg in domains[: cfg.red_man_count]
    ]


def _display(slope: float) -> float:
    return round(slope, 1)


def _validate_level2(spec: Level2Spec) -> list[tuple[str, str]]:
    violations: list[tuple[str, str]] = []
    maze = spec.maze

    derived_nodes = set(junction_nodes(maze))
    stored_nodes = set(spec.elevations)
    if derived_nodes != stored_nodes:
        diff = sorted(derived_nodes ^ stored_nodes)[:3]
        violations.append(("junction-set-mismatch", str([p.to_list() for p in diff])))
        return violations
    if spec.start == spec.goal or spec.start not in stored_nodes or spec.goal not in stored_nodes:
        violations.append(("start-goal-invalid", f"start {spec.start.to_list()}, goal {spec.goal.to_list()}"))
        return violations

    runs = corridors(maze)
    derived = {}
    for u, v, cells in runs:
        derived[(u, v)] = cells
        derived[(v, u)] = tuple(reversed(cells))
    stored = {(e.src, e.dst): e.cells for e in spec.edges}
    if stored != derived:
        missing = sorted(derived.keys() - stored.keys()) + sorted(stored.keys() - derived.keys())
        sample = missing[0] if missing else next(iter(k for k in stored if stored[k] != derived[k]))
        violations.append(("edge-maze-mismatch", f"{sample[0].to_list()}->{sample[1].to_list()}"))
        return violations

    for edge in spec.edges:
        expected = (spec.elevations[edge.src] - spec.elevations[edge.dst]) / edge.length
        if abs(edge.slope - expected) > SLOPE_EPS:
            violations.append(("slope-inconsistent", f"{edge.id}: {edge.slope} vs {expected}"))

    goal_elev = spec.elevations[spec.goal]
    for node, elev in sorted(spec.elevations.items()):
        if node != spec.goal and elev <= goal_elev:
            violations.append(("goal-not-minimum", f"{node.to_list()} at {elev} vs goal {goal_elev}"))

    adj = _adjacency(runs)
    routes = _all_node_paths(adj, spec.start, spec.goal)
    if not routes:
        violations.append(("no-goal-route", "start and goal are disconnected"))
        return violations
    if len(routes) > 1:
        violations.append(("alternative-goal-route", f"{len(routes)} junction paths reach the goal"))

    canonical = routes[0]
    for earlier, later in zip(canonical, canonical[1:]):
        if spec.elevations[later] >= spec.elevations[earlier]:
            violations.append(("non-monotone-descent", f"{earlier.to_list()} -> {later.to_list()}"))
            break

    greedy = [spec.start]
    seen = {spec.start}
    while greedy[-1] != spec.goal:
        options = spec.edges_from(greedy[-1])
        if not options:
            violations.append(("greedy-misses-goal", f"stuck at {greedy[-1].to_list()}"))
            break
        ranked = sorted(options, key=lambda e: e.slope, reverse=True)
        if len(ranked) > 1 and _display(ranked[0].slope) - _display(ranked[1].slope) < 0.1 - SLOPE_EPS:
            violations.append(("non-unique-greedy-edge", f"at {greedy[-1].to_list()}"))
            break
        nxt = ranked[0].dst
        if nxt in seen:
            violations.append(("greedy-misses-goal", f"cycles back to {nxt.to_list()}"))
            break
        seen.add(nxt)
        greedy.append(nxt)

    cells = set(maze.cells())
    for i, red in enumerate(spec.red_men):
        if red.spawn not in red.walk_domain or not red.walk_domain <= cells:
            violations.append(("red-man-domain", f"red man {i}"))
    return violations


def _all_node_paths(adj, start: GridPos, goal: GridPos) -> list[list[GridPos]]:
    """Every simple junction path start -> goal (graphs stay <= 50 nodes)."""
    paths: list[list[GridPos]] = []
    stack = [(start, [start])]
    while stack:
        node, path = stack.pop()
        if node == goal:
            paths.append(path)
            continue
        for other, _ in adj.get(node, []):
            if other not in path:
                stack.append((other, path + [other]))
    return paths


# --- level 3 ---------------------------------------------------------------

def _steps_into_reach(a: GridPos, b: GridPos, radius: int) -> int:
    """4-directional moves until within the arrival radius of b."""
    return max(0, abs(a.row - b.row) - radius) + max(0, abs(a.col - b.col) - radius)


def _arrival_tick(steps: int, speed: float) -> int:
    """First tick by which a pursuer at the given speed has taken `steps` steps."""
    if steps == 0:
        return 0
    tick = 1
    while int(tick * speed) < steps:
        tick += 1
    return tick


def generate_level3(cfg: GenConfig) -> Level3Spec:
    cfg.check()
    if cfg.red_man_count < 2:
        raise ConfigInvalid("the loss condition needs two red men; got fewer")
    needed = 4 + cfg.red_man_count
    if needed > cfg.town_rows * cfg.town_cols:
        raise ConfigInvalid("town too small for player, Bobs, and red men")
    for attempt in range(500):
        rng = _rng(cfg, 3, attempt)
        cells = [GridPos(r, c) for r in range(cfg.town_rows) for c in range(cfg.town_cols)]
        rng.shuffle(cells)
        spawn = cells[0]
        bobs = tuple(cells[1:4])
        reds = cells[4 : 4 + cfg.red_man_count]
        spec = Level3Spec(
            rows=cfg.town_rows,
            cols=cfg.town_cols,
            spawn=spawn,
            bobs=bobs,
            red_men=tuple(PursuerSpec(spawn=r, speed=0.5) for r in reds),
            outcome=content.default_outcome(3),
        )
        if _level3_race_ok(spec, margin=1) and _level3_threat_ok(spec):
            return spec
    raise ConfigInvalid(f"no winnable town layout found (seed {cfg.seed})")


def _level3_race_ok(spec: Level3Spec, margin: int = 0) -> bool:
    """Dashing straight at each Bob beats the second red man's arrival.

    Red men restart from their spawns at each activation; the player's
    worst-case start is anywhere adjacent to the previous Bob (+2 slack).
    """
    radius = spec.arrival_radius
    if any(b_i.chebyshev(b_j) <= 2 * radius for i, b_i in enumerate(spec.bobs) for b_j in spec.bobs[i + 1 :]):
        return False
    if _steps_into_reach(spec.spawn, spec.bobs[0], radius) < 2:
        return False
    for i, bob in enumerate(spec.bobs):
        if i == 0:
            player_steps = _steps_into_reach(spec.spawn, bob, radius)
        else:
            player_steps = _steps_into_reach(spec.bobs[i - 1], bob, radius) + 2
        arrivals = sorted(
            _arrival_tick(_steps_into_reach(red.spawn, bob, radius), red.speed) for red in spec.red_men
        )
        if any(_steps_into_reach(red.spawn, bob, radius) < 2 for red in spec.red_men):
            return False  # a red man would arrive at (or before) activation
        if player_steps + margin >= arrivals[1]:
            return False
    return True


def _level3_threat_ok(spec: Level3Spec) -> bool:
    """At least one red man starts within 1.5x the player's distance."""
    for i, bob in enumerate(spec.bobs):
        origin = spec.spawn if i == 0 else spec.bobs[i - 1]
        player_d = origin.euclidean(bob)
        if min(red.spawn.euclidean(bob) for red in spec.red_men) > 1.5 * player_d:
            return False
    return True


def _validate_level3(spec: Level3Spec) -> list[tuple[str, str]]:
    violations: list[tuple[str, str]] = []
    if len(spec.bobs) != 3:
        violations.append(("bob-count", str(len(spec.bobs))))
    if len(spec.red_men) < 2:
        violations.append(("red-man-count", str(len(spec.red_men))))
    if spec.k < 1 or spec.k % 2 == 0:
        violations.append(("even-k", str(spec.k)))
    if spec.player_votes != 2 or spec.enemy_votes != 1:
        violations.append(("vote-config", f"player {spec.player_votes}, enemy {spec.enemy_votes}"))
    if spec.arrival_radius < 1:
        violations.append(("arrival-radius", str(spec.arrival_radius)))
    for label, pos in [("spawn", spec.spawn)] + [(f"bob{i+1}", b) for i, b in enumerate(spec.bobs)] + [
        (f"red{i+1}", r.spawn) for i, r in enumerate(spec.red_men)
    ]:
        if not spec.in_bounds(pos):
            violations.append(("out-of-bounds", f"{label} at {pos.to_list()}"))
    for i, red in enumerate(spec.red_men):
        if not 0.0 < red.speed <= 1.0:
            violations.append(("speed-invalid", f"red{i+1} speed {red.speed}"))
    positions = [spec.spawn] + list(spec.bobs)
    if len(set(positions)) != len(positions):
        violations.append(("position-conflict", "spawn and Bobs overlap"))
    if violations:
        return violations
    if not _level3_race_ok(spec):
        violations.append(("not-winnable", "a straight dash loses some rescue race"))
    return violations


# --- dispatch ---------------------------------------------------------------

def validate(spec, level: int) -> ValidationReport:
    expected = {1: Level1Spec, 2: Level2Spec, 3: Level3Spec}.get(level)
    if expected is None:
        return _report(level, [("level-mismatch", f"no such level {level}")])
    if not isinstance(spec, expected):
        return _report(level, [("level-mismatch", f"got {type(spec).__name__} for level {level}")])
    checker = {1: _validate_level1, 2: _validate_level2, 3: _validate_level3}[level]
    return _report(level, checker(spec))


def generate(cfg: GenConfig, level: int):
    gen = {1: generate_level1, 2: generate_level2, 3: generate_level3}.get(level)
    if gen is None:
        raise ConfigInvalid(f"no such level {level}")
    return gen(cfg)
