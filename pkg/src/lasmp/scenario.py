"""Scenario files: map reference, poses, instruction, lexicon, routes, regions, params.

Sections are introduced by ``[name]``; the section body is the rest of the header
line plus any following lines up to the next header. ``map``, ``instruction``,
``turns``, ``params`` and ``scenario`` hold ``key = value`` pairs (newline or ``;``
separated); ``start``/``goal`` hold ``x y yaw``; ``zone``, ``route`` and ``region``
are repeatable records (region labels are single tokens). Angles accept ``pi`` forms such as ``-pi/2`` or ``0.5*pi``.
"""

from __future__ import annotations

import dataclasses
import math
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .gridmap import OccupancyGrid, Pose, inflate, is_free, read_map
from .grounding import (
    NavCommand,
    RouteTable,
    ZoneLexicon,
    nav_sequence,
    parse_route_record,
    parse_turn_list,
    region_of,
)
from .planner import PlannerParams


class ScenarioError(ValueError):
    pass


KV_SECTIONS = {"scenario", "map", "instruction", "turns", "params"}
RECORD_SECTIONS = {"start", "goal", "zone", "route", "region"}

_PI = re.compile(r"^([+-]?)(?:(\d*\.?\d+)\s*\*?\s*)?pi(?:\s*/\s*(\d*\.?\d+))?$")
_HEADER = re.compile(r"^\[(\w+)\]\s*(.*)$")
_KV_SPLIT = re.compile(r";(?=\s*\w+\s*=)")

_INT_PARAMS = {"n_cons", "max_iters", "seed"}


def parse_number(token: str) -> float:
    t = token.strip().lower()
    m = _PI.match(t)
    if m:
        sign, mult, div = m.groups()
        v = math.pi * (float(mult) if mult else 1.0) / (float(div) if div else 1.0)
        return -v if sign == "-" else v
    try:
        return float(t)
    except ValueError:
        raise ScenarioError(f"not a number: {token!r}") from None


@dataclass
class Scenario:
    id: str
    map_file: Path
    raw_grid: OccupancyGrid
    grid: OccupancyGrid
    start: Pose
    goal: Pose
    inflation: float = 0.0
    instruction: str | None = None
    turns: tuple[NavCommand, ...] | None = None
    lexicon: ZoneLexicon = field(default_factory=ZoneLexicon)
    routes: RouteTable = field(default_factory=RouteTable)
    regions: dict[str, tuple[float, float, float, float]] = field(default_factory=dict)
    params: PlannerParams = field(default_factory=PlannerParams)
    description: str = ""

    @property
    def start_region(self) -> str | None:
        return region_of(self.start.position, self.regions)

    def resolve(self) -> tuple[tuple[NavCommand, ...], Pose]:
        """Turn list and goal: an explicit turn list wins over the instruction."""
        if self.turns is not None:
            return self.turns, self.goal
        turns, goal = nav_sequence(self.instruction, self)
        if not is_free(self.grid, goal.position):
            raise ScenarioError(f"{self.id}: zone goal {tuple(goal.position)} is in collision")
        return turns, goal


def _sections(text: str):
    current = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _HEADER.match(line)
        if m:
            current = [m.group(1).lower(), []]
            if m.group(2):
                current[1].append(m.group(2))
            yield current
        elif current is None:
            raise ScenarioError(f"content before first section: {line!r}")
        else:
            current[1].append(line)


def _kv(lines) -> dict[str, str]:
    out = {}
    for line in lines:
        for part in _KV_SPLIT.split(line):
            key, eq, value = part.partition("=")
            if not eq:
                raise ScenarioError(f"expected key = value, got {part!r}")
            out[key.strip().lower()] = value.strip()
    return out


def _pose(lines, name) -> Pose:
    toks = " ".join(lines).split()
    if len(toks) not in (2, 3):
        raise ScenarioError(f"[{name}] expects 'x y yaw'")
    vals = [parse_number(t) for t in toks]
    return Pose.of(vals[0], vals[1], vals[2] if len(vals) == 3 else 0.0)


def load_scenario(text: str, base_dir: str | Path | None = None, scenario_id: str | None = None) -> Scenario:
    base = Path(base_dir) if base_dir is not None else Path.cwd()
    kv: dict[str, dict[str, str]] = {}
    records: dict[str, list[str]] = {k: [] for k in RECORD_SECTIONS}
    for name, lines in _sections(text):
        if name in KV_SECTIONS:
            kv.setdefault(name, {}).update(_kv(lines))
        elif name in RECORD_SECTIONS:
            records[name].extend(lines)
        else:
            raise ScenarioError(f"unknown section [{name}]")

    for required in ("map",):
        if required not in kv or "file" not in kv["map"]:
            raise ScenarioError("missing required [map] file")
    for required in ("start", "goal"):
        if not records[required]:
            raise ScenarioError(f"missing required [{required}]")
    if "instruction" not in kv and "turns" not in kv:
        raise ScenarioError("scenario needs an [instruction] or a [turns] list")

    map_file = (base / kv["map"]["file"]).resolve()
    if not map_file.is_file():
        raise ScenarioError(f"unknown map: {map_file}")
    raw = read_map(map_file)
    inflation = parse_number(kv["map"].get("inflation", "0"))
    grid = inflate(raw, inflation)

    start = _pose(records["start"], "start")
    goal = _pose(records["goal"], "goal")
    sid = scenario_id or kv.get("scenario", {}).get("id") or "scenario"
    for label, pose in (("start", start), ("goal", goal)):
        if not is_free(grid, pose.position):
            raise ScenarioError(f"{sid}: {label} {tuple(pose.position)} is in collision after inflation")

    zones = {}
    for rec in records["zone"]:
        toks = rec.split()
        if len(toks) < 4:
            raise ScenarioError(f"[zone] expects 'name x y yaw': {rec!r}")
        x, y, yaw = (parse_number(t) for t in toks[-3:])
        zones[" ".join(toks[:-3])] = Pose.of(x, y, yaw)
    for name, pose in zones.items():
        if not (grid.x_min <= pose.position.x <= grid.x_max and grid.y_min <= pose.position.y <= grid.y_max):
            raise ScenarioError(f"zone {name!r} lies outside the map")
    routes = RouteTable({(r, z): t for r, z, t in map(parse_route_record, records["route"])})

    regions = {}
    for rec in records["region"]:
        toks = rec.split()
        if len(toks) != 5:
            raise ScenarioError(f"[region] expects 'label xmin ymin xmax ymax': {rec!r}")
        regions[toks[0]] = tuple(parse_number(t) for t in toks[1:])

    overrides = {}
    fields = {f.name for f in dataclasses.fields(PlannerParams)}
    for key, value in kv.get("params", {}).items():
        if key not in fields:
            raise ScenarioError(f"unknown planner parameter {key!r}")
        overrides[key] = int(value) if key in _INT_PARAMS else parse_number(value)
    try:
        params = PlannerParams(**overrides)
    except ValueError as exc:
        raise ScenarioError(str(exc)) from None

    turns = parse_turn_list(kv["turns"]["list"]) if "turns" in kv else None
    return Scenario(
        id=sid,
        map_file=map_file,
        raw_grid=raw,
        grid=grid,
        start=start,
        goal=goal,
        inflation=inflation,
        instruction=kv.get("instruction", {}).get("text"),
        turns=turns,
        lexicon=ZoneLexicon(zones) if zones else ZoneLexicon.from_names(),
        routes=routes,
        regions=regions,
        params=params,
        description=kv.get("scenario", {}).get("description", ""),
    )


def read_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    sid = None if "[scenario]" in text else path.stem
    return load_scenario(text, base_dir=path.parent, scenario_id=sid)


SUITE = ("de_2", "de_3", "de_4", "os_2", "os_3", "os_4", "ro_2", "ro_3", "ro_4")


def bundled_path(name: str) -> Path:
    """Filesystem path of a bundled scenario (``de_3``) or map (``de.map``)."""
    data = resources.files("lasmp") / "data"
    if name.endswith(".map"):
        return Path(str(data / "maps" / name))
    return Path(str(data / "scenarios" / f"{name}.scn"))


def bundled_scenario(name: str) -> Scenario:
    return read_scenario(bundled_path(name))


def bundled_suite() -> list[Scenario]:
    return [bundled_scenario(n) for n in SUITE]
