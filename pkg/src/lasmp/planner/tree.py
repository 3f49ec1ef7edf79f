from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..gridmap import State
from ..grounding import NavCommand


@dataclass
class Path:
    states: list[State] = field(default_factory=list)
    turn_events: list[tuple[int, NavCommand]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.states)

    @property
    def length(self) -> float:
        return sum(math.dist(a, b) for a, b in zip(self.states, self.states[1:]))

    def to_text(self) -> str:
        lines = ["# path"]
        lines += [f"{s.x:.9g} {s.y:.9g}" for s in self.states]
        lines += [f"# turn {i} {cmd.name}" for i, cmd in self.turn_events]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Path":
        states, events = [], []
        for line in text.splitlines():
            line = line.strip()
            if not line or line == "# path":
                continue
            if line.startswith("#"):
                parts = line[1:].split()
                if len(parts) == 3 and parts[0] == "turn":
                    events.append((int(parts[1]), NavCommand.parse(parts[2])))
                continue
            x, y = line.split()
            states.append(State(float(x), float(y)))
        return cls(states, events)


class SearchTree:
    """Insertion-ordered tree; node 0 is the root.

    ``consumed[i]`` counts the turn-list tokens consumed on the path root -> i,
    ``events[i]`` is the command consumed on arrival at node i (if any).
    """

    def __init__(self, root, capacity: int = 256):
        self._xy = np.empty((capacity, 2))
        self._xy[0] = (float(root[0]), float(root[1]))
        self.parents: list[int | None] = [None]
        self.consumed: list[int] = [0]
        self.events: dict[int, NavCommand] = {}
        self._consumed = np.zeros(capacity, dtype=np.int64)
        self._n = 1

    def __len__(self) -> int:
        return self._n

    @property
    def xy(self) -> np.ndarray:
        return self._xy[: self._n]

    def node(self, i: int) -> State:
        if not 0 <= i < self._n:
            raise IndexError(f"node index {i} out of range")
        return State(float(self._xy[i, 0]), float(self._xy[i, 1]))

    @property
    def nodes(self) -> list[State]:
        return [State(float(x), float(y)) for x, y in self.xy]

    def add(self, state, parent: int, event: NavCommand | None = None) -> int:
        if not 0 <= parent < self._n:
            raise IndexError(f"parent index {parent} out of range")
        if self._n == len(self._xy):
            self._xy = np.vstack((self._xy, np.empty_like(self._xy)))
            self._consumed = np.concatenate((self._consumed, np.zeros_like(self._consumed)))
        i = self._n
        self._xy[i] = (float(state[0]), float(state[1]))
        level = self.consumed[parent] + (event is not None)
        self.parents.append(parent)
        self.consumed.append(level)
        self._consumed[i] = level
        if event is not None:
            self.events[i] = event
        self._n += 1
        return i

    def edges(self) -> list[tuple[int, int]]:
        return [(p, i) for i, p in enumerate(self.parents) if p is not None]

    def depth(self, i: int) -> int:
        d = 0
        while self.parents[i] is not None:
            i = self.parents[i]
            d += 1
        return d


def nearest_node(tree: SearchTree, x_rand, level: int | None = None) -> int:
    """Index of the node closest to ``x_rand``; ties go to the earliest node.

    ``level`` restricts the search to nodes with that many consumed commands.
    """
    if len(tree) == 0:
        raise ValueError("empty tree")
    xy = tree.xy
    d2 = (xy[:, 0] - x_rand[0]) ** 2 + (xy[:, 1] - x_rand[1]) ** 2
    if level is not None:
        d2 = np.where(tree._consumed[: len(tree)] == level, d2, np.inf)
    return int(np.argmin(d2))


def extract_path(tree: SearchTree, index: int) -> Path:
    tree.node(index)  # range check
    chain = []
    i = index
    while i is not None:
        chain.append(i)
        i = tree.parents[i]
    chain.reverse()
    states = [tree.node(i) for i in chain]
    events = [(k, tree.events[i]) for k, i in enumerate(chain) if i in tree.events]
    return Path(states, events)
