"""Rule-based grounding of navigation instructions.

Free text is mapped onto six motion entities (Straight, Right, Left, Backward and
the prohibitions NR/NL) plus named destination zones by longest-match lookup over
a closed synonym table. Zone-only instructions are turned into a turn list through
an explicit route table keyed by (start region, zone).
"""

from __future__ import annotations

import enum
import string
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .gridmap import Pose


class GroundingError(ValueError):
    pass


class NavCommand(enum.Enum):
    STRAIGHT = "Straight"
    RIGHT = "Right"
    LEFT = "Left"
    BACKWARD = "Backward"
    NR = "NR"
    NL = "NL"

    @property
    def label(self) -> str:
        return self.name

    @property
    def is_prohibition(self) -> bool:
        return self in (NavCommand.NR, NavCommand.NL)

    @classmethod
    def parse(cls, token: str) -> "NavCommand":
        key = token.strip().upper()
        aliases = {"NO_RIGHT": "NR", "NO_LEFT": "NL", "BACK": "BACKWARD"}
        key = aliases.get(key, key)
        try:
            return cls[key]
        except KeyError:
            raise GroundingError(f"unknown navigation command {token!r}") from None


TurnList = tuple  # ordered tuple of NavCommand

ZONE = "ZONE"

DEFAULT_ZONES = ("bedroom", "kitchen", "living room", "dining room", "bathroom", "laundry")

# Unified-entity synonyms: the closed phrase set plus common paraphrases.
MOTION_PHRASES: dict[NavCommand, tuple[str, ...]] = {
    NavCommand.STRAIGHT: (
        "go straight", "move straight", "go ahead", "proceed in a straight line",
        "keep straight", "continue straight", "head straight", "go forward",
        "move forward", "keep going straight", "straight ahead", "proceed straight",
        "go straight ahead", "continue ahead", "move ahead",
    ),
    NavCommand.RIGHT: (
        "go right", "turn right", "move right", "take a right", "right turn", "go rightward",
        "take the right", "make a right", "hang a right", "head right", "bear right",
        "veer right", "turn to the right", "move rightward", "head rightward", "take right",
    ),
    NavCommand.LEFT: (
        "turn left", "left turn", "take a left", "move left", "head left", "go leftward",
        "go left", "take the left", "make a left", "hang a left", "bear left",
        "veer left", "turn to the left", "move leftward", "head leftward", "take left",
    ),
    NavCommand.BACKWARD: (
        "go down", "move down", "go back", "go backward", "go backwards", "move back",
        "move backward", "turn around", "head back", "turn back",
    ),
}

PROHIBITION_TRIGGERS = (
    "do not", "dont", "avoid taking", "avoid", "skip", "not to take", "never take",
    "never turn", "ignore", "pass", "bypass", "no",
)

SIDE_WORDS = {
    "right": NavCommand.NR, "rightward": NavCommand.NR,
    "left": NavCommand.NL, "leftward": NavCommand.NL,
}

PROHIBITION_WINDOW = 4

_STRIP = str.maketrans({c: " " for c in string.punctuation if c != "'"} | {"'": None, "’": None})


def normalize_text(text: str) -> list[str]:
    """Lowercase, drop apostrophes, turn other punctuation into spaces, split."""
    return text.lower().translate(_STRIP).split()


def _phrase_index(phrases: Mapping[str, object]) -> dict[tuple[str, ...], object]:
    return {tuple(normalize_text(p)): v for p, v in phrases.items()}


_MOTION_INDEX = _phrase_index({p: cmd for cmd, ps in MOTION_PHRASES.items() for p in ps})
_TRIGGER_INDEX = _phrase_index({p: True for p in PROHIBITION_TRIGGERS})


@dataclass(frozen=True)
class ZoneLexicon:
    """Zone name -> goal pose (pose may be None when only names matter)."""

    entries: Mapping[str, Pose | None] = field(default_factory=dict)

    def __post_init__(self):
        norm = {}
        for name, pose in self.entries.items():
            key = " ".join(normalize_text(name))
            if not key:
                raise GroundingError("empty zone name")
            if key in norm:
                raise GroundingError(f"duplicate zone {key!r}")
            norm[key] = pose
        object.__setattr__(self, "entries", norm)

    @classmethod
    def from_names(cls, names: Iterable[str] = DEFAULT_ZONES) -> "ZoneLexicon":
        return cls({n: None for n in names})

    def __contains__(self, name: str) -> bool:
        return " ".join(normalize_text(name)) in self.entries

    def pose(self, name: str) -> Pose:
        pose = self.entries.get(" ".join(normalize_text(name)))
        if pose is None:
            raise GroundingError(f"no pose recorded for zone {name!r}")
        return pose

    def index(self) -> dict[tuple[str, ...], str]:
        return {tuple(k.split()): k for k in self.entries}


@dataclass(frozen=True)
class RouteTable:
    """(start region, zone) -> turn list; stands in for a learned route classifier."""

    entries: Mapping[tuple[str, str], tuple[NavCommand, ...]] = field(default_factory=dict)

    MAX_TURNS = 4

    def __post_init__(self):
        norm = {}
        for (region, zone), turns in self.entries.items():
            turns = tuple(turns)
            if len(turns) > self.MAX_TURNS:
                raise GroundingError(f"route {region}->{zone} has more than {self.MAX_TURNS} turns")
            if not all(isinstance(t, NavCommand) for t in turns):
                raise GroundingError("route entries must be NavCommand sequences")
            norm[(region, " ".join(normalize_text(zone)))] = turns
        object.__setattr__(self, "entries", norm)

    def to_lines(self) -> list[str]:
        """Serialized ``region zone turns`` records, as used by ``[route]`` sections."""
        return [
            f"{region} {zone} {','.join(t.name.lower() for t in turns)}"
            for (region, zone), turns in sorted(self.entries.items())
        ]

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> "RouteTable":
        entries = {}
        for line in lines:
            region, zone, turns = parse_route_record(line)
            entries[(region, zone)] = turns
        return cls(entries)


def parse_turn_list(text: str) -> tuple[NavCommand, ...]:
    return tuple(NavCommand.parse(t) for t in text.replace(";", ",").split(",") if t.strip())


def parse_route_record(line: str) -> tuple[str, str, tuple[NavCommand, ...]]:
    parts = line.split()
    if len(parts) < 3:
        raise GroundingError(f"route record needs 'region zone turns': {line!r}")
    return parts[0], " ".join(parts[1:-1]), parse_turn_list(parts[-1])


@dataclass(frozen=True)
class Entity:
    label: str  # NavCommand name or ZONE
    start: int  # token span
    end: int
    value: NavCommand | str


@dataclass(frozen=True)
class GroundedInstruction:
    turns: tuple[NavCommand, ...] = ()
    zone: str | None = None
    goal: Pose | None = None
    entities: tuple[Entity, ...] = ()

    @property
    def labels(self) -> list[str]:
        return [e.label for e in self.entities]

    @property
    def valid(self) -> bool:
        return bool(self.turns) or self.zone is not None


def _longest_match(tokens: Sequence[str], i: int, index: Mapping[tuple[str, ...], object]):
    best = None
    for key, value in index.items():
        n = len(key)
        if tuple(tokens[i:i + n]) == key and (best is None or n > len(best[0])):
            best = (key, value)
    return best


def extract_entities(text: str, lexicon: ZoneLexicon | None = None,
                     window: int = PROHIBITION_WINDOW) -> GroundedInstruction:
    """Left-to-right longest-match scan for motion, prohibition and zone entities."""
    if lexicon is None:
        lexicon = ZoneLexicon.from_names()
    tokens = normalize_text(text)
    zones = lexicon.index()
    entities: list[Entity] = []
    i = 0
    while i < len(tokens):
        trig = _longest_match(tokens, i, _TRIGGER_INDEX)
        if trig is not None:
            after = i + len(trig[0])
            hit = next((j for j in range(after, min(after + window, len(tokens)))
                        if tokens[j] in SIDE_WORDS), None)
            if hit is not None:
                cmd = SIDE_WORDS[tokens[hit]]
                end = hit + 1
                # "skip the right turn": swallow a trailing "turn" unless it opens
                # the next motion phrase ("never turn right; turn left")
                if (end < len(tokens) and tokens[end] in ("turn", "turns")
                        and _longest_match(tokens, end, _MOTION_INDEX) is None):
                    end += 1
                entities.append(Entity(cmd.name, i, end, cmd))
                i = end
                continue
        candidates = []
        motion = _longest_match(tokens, i, _MOTION_INDEX)
        if motion is not None:
            candidates.append((len(motion[0]), motion[1].name, motion[1]))
        zone = _longest_match(tokens, i, zones)
        if zone is not None:
            candidates.append((len(zone[0]), ZONE, zone[1]))
        if candidates:
            n, label, value = max(candidates, key=lambda c: c[0])
            entities.append(Entity(label, i, i + n, value))
            i += n
        else:
            i += 1
    turns = tuple(e.value for e in entities if e.label != ZONE)
    zone_names = [e.value for e in entities if e.label == ZONE]
    zone_name = zone_names[-1] if zone_names else None
    goal = lexicon.entries.get(zone_name) if zone_name else None
    return GroundedInstruction(turns, zone_name, goal, tuple(entities))


def resolve_route(zone: str, start_region: str | None, table: RouteTable) -> tuple[NavCommand, ...]:
    key = (start_region, " ".join(normalize_text(zone)))
    if key not in table.entries:
        raise GroundingError(f"no route from region {start_region!r} to zone {zone!r}")
    return table.entries[key]


def region_of(point, regions: Mapping[str, tuple[float, float, float, float]]) -> str | None:
    """Label of the first region rectangle (xmin, ymin, xmax, ymax) containing ``point``."""
    x, y = point[0], point[1]
    for label, (x0, y0, x1, y1) in regions.items():
        if x0 <= x <= x1 and y0 <= y <= y1:
            return label
    return None


def nav_sequence(text: str, scenario) -> tuple[tuple[NavCommand, ...], Pose]:
    """Turn list and goal pose for an instruction in the context of a scenario.

    ``scenario`` needs ``lexicon``, ``routes``, ``start_region`` and ``goal`` attributes.
    Turns spelled out in the text win; a bare zone goes through the route table.
    """
    grounded = extract_entities(text, scenario.lexicon)
    if not grounded.valid:
        raise GroundingError(f"ungroundable instruction: {text!r}")
    if grounded.turns:
        turns = grounded.turns
    else:
        turns = resolve_route(grounded.zone, scenario.start_region, scenario.routes)
    goal = scenario.goal
    if grounded.zone is not None and grounded.goal is not None:
        goal = grounded.goal
    return turns, goal


def read_corpus(text: str) -> list[tuple[str, list[str]]]:
    """Corpus lines: ``instruction<TAB>LABEL,LABEL``; blank and # lines skipped."""
    rows = []
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        sentence, _, labels = line.partition("\t")
        rows.append((sentence, [t.strip().upper() for t in labels.split(",") if t.strip()]))
    return rows
