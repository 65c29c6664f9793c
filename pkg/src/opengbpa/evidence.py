"""Frames of discernment, focal sets and (generalized) mass functions.

Focal sets are plain ``int`` bitmasks: bit ``i`` is set when ``frame.labels[i]``
belongs to the set and ``0`` is the empty set.  Mass functions are stored
sparsely and are immutable once built.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

MAX_FRAME_SIZE = 20
SUM_TOLERANCE = 1e-9
ZERO_MASS = 1e-12

FocalSet = int


class World(str, Enum):
    OPEN = "open"
    CLOSED = "closed"


class FrameMismatchError(ValueError):
    """Two operands were defined over different frames."""


@dataclass(frozen=True)
class Frame:
    labels: tuple[str, ...]
    world: World = World.OPEN

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "world", World(self.world))
        if not labels:
            raise ValueError("a frame needs at least one label")
        if len(labels) > MAX_FRAME_SIZE:
            raise ValueError(f"frame has {len(labels)} labels; at most {MAX_FRAME_SIZE} are supported")
        if any(not isinstance(lab, str) or not lab for lab in labels):
            raise ValueError("labels must be non-empty strings")
        if len(set(labels)) != len(labels):
            dupes = sorted({lab for lab in labels if labels.count(lab) > 1})
            raise ValueError(f"duplicate labels: {dupes}")

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def full(self) -> FocalSet:
        """The whole frame as a bitmask."""
        return (1 << self.n) - 1

    def with_world(self, world: World | str) -> "Frame":
        return Frame(self.labels, World(world))

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"{label!r} is not in frame {self.labels}") from None

    def subset(self, labels: Iterable[str]) -> FocalSet:
        """Bitmask for a collection of labels."""
        if isinstance(labels, str):
            labels = [labels]
        bits = 0
        for lab in labels:
            bits |= 1 << self.index(lab)
        return bits

    def singleton(self, label: str) -> FocalSet:
        return 1 << self.index(label)

    def labels_of(self, bits: FocalSet) -> tuple[str, ...]:
        self.check(bits)
        return tuple(lab for i, lab in enumerate(self.labels) if bits >> i & 1)

    def check(self, bits: FocalSet) -> FocalSet:
        if not isinstance(bits, int) or bits < 0 or bits > self.full:
            raise ValueError(f"focal set {bits!r} does not belong to a frame of size {self.n}")
        return bits

    def power_set(self) -> range:
        """All ``2**n`` subsets, the empty set first."""
        return range(1 << self.n)

    def format(self, bits: FocalSet) -> str:
        labs = self.labels_of(bits)
        return "{" + ",".join(labs) + "}" if labs else "{}"

    def same_labels(self, other: "Frame") -> bool:
        return self.labels == other.labels


def make_frame(labels: Iterable[str], world: World | str = World.OPEN) -> Frame:
    return Frame(tuple(labels), World(world))


def cardinality(bits: FocalSet) -> int:
    return bin(bits).count("1")


def is_subset(a: FocalSet, b: FocalSet) -> bool:
    return a & ~b == 0


class MassFunction:
    """Sparse, immutable mass assignment over the subsets of a frame.

    ``masses`` maps bitmasks to values.  Entries below ``1e-12`` are dropped.
    Nothing is renormalized unless ``normalize=True`` is passed, and the
    constructor validates the result against the frame's world mode.

    >>> f = make_frame("abc")
    >>> m = MassFunction(f, {0: 0.2, f.subset("a"): 0.8})
    >>> m[0], m[f.subset("a")], m[f.subset("b")]
    (0.2, 0.8, 0.0)
    """

    __slots__ = ("_frame", "_masses")

    def __init__(self, frame: Frame, masses: Mapping[FocalSet, float], *,
                 normalize: bool = False, validate: bool = True):
        cleaned: dict[int, float] = {}
        for bits, value in masses.items():
            frame.check(bits)
            value = float(value)
            if not math.isfinite(value):
                raise ValueError(f"non-finite mass {value} on {frame.format(bits)}")
            if value < -ZERO_MASS:
                raise ValueError(f"negative mass {value} on {frame.format(bits)}")
            if value > ZERO_MASS:
                cleaned[bits] = cleaned.get(bits, 0.0) + value
        if normalize:
            total = math.fsum(cleaned.values())
            if total <= 0:
                raise ValueError("cannot normalize a mass function with zero total mass")
            cleaned = {b: v / total for b, v in cleaned.items()}
        self._frame = frame
        self._masses = MappingProxyType(dict(sorted(cleaned.items())))
        if validate:
            problems = validate_mass(self)
            if problems:
                raise ValueError("invalid mass function: " + "; ".join(problems))

    @classmethod
    def from_labels(cls, frame: Frame, masses: Mapping[Iterable[str] | str, float], **kw) -> "MassFunction":
        """Build from label collections, e.g. ``{(): 0.1, ("a",): 0.9}``."""
        table: dict[int, float] = {}
        for labels, value in masses.items():
            bits = frame.subset(labels)
            table[bits] = table.get(bits, 0.0) + value
        return cls(frame, table, **kw)

    @classmethod
    def vacuous(cls, frame: Frame) -> "MassFunction":
        return cls(frame, {frame.full: 1.0})

    @property
    def frame(self) -> Frame:
        return self._frame

    @property
    def masses(self) -> Mapping[FocalSet, float]:
        return self._masses

    @property
    def world(self) -> World:
        return self._frame.world

    @property
    def empty_mass(self) -> float:
        return self._masses.get(0, 0.0)

    def __getitem__(self, bits: FocalSet) -> float:
        return self._masses.get(self._frame.check(bits), 0.0)

    def __iter__(self) -> Iterator[FocalSet]:
        return iter(self._masses)

    def __len__(self) -> int:
        return len(self._masses)

    def items(self):
        return self._masses.items()

    def focal_sets(self) -> list[FocalSet]:
        return list(self._masses)

    def total(self) -> float:
        return math.fsum(self._masses.values())

    def is_bayesian(self) -> bool:
        return all(cardinality(b) == 1 for b in self._masses)

    def with_frame(self, frame: Frame) -> "MassFunction":
        if not frame.same_labels(self._frame):
            raise FrameMismatchError(f"{frame.labels} != {self._frame.labels}")
        return MassFunction(frame, self._masses)

    def as_label_dict(self) -> dict[tuple[str, ...], float]:
        return {self._frame.labels_of(b): v for b, v in self._masses.items()}

    def to_vector(self) -> list[float]:
        """Dense list indexed by bitmask."""
        out = [0.0] * (1 << self._frame.n)
        for b, v in self._masses.items():
            out[b] = v
        return out

    def allclose(self, other: "MassFunction", tol: float = 1e-9) -> bool:
        """Entry-wise comparison on the shared label set, ignoring world mode."""
        if not self._frame.same_labels(other.frame):
            return False
        keys = set(self._masses) | set(other.masses)
        return all(abs(self[k] - other[k]) <= tol for k in keys)

    def __eq__(self, other):
        if not isinstance(other, MassFunction):
            return NotImplemented
        return self._frame == other.frame and dict(self._masses) == dict(other.masses)

    def __hash__(self):
        return hash((self._frame, tuple(self._masses.items())))

    def __repr__(self):
        body = ", ".join(f"{self._frame.format(b)}: {v:.6g}" for b, v in self._masses.items())
        return f"MassFunction({self._frame.world.value}, {{{body}}})"

    # -- serialization ---------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "labels": list(self._frame.labels),
            "world": self._frame.world.value,
            "masses": {",".join(self._frame.labels_of(b)): v for b, v in self._masses.items()},
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, data: Mapping) -> "MassFunction":
        frame = make_frame(data["labels"], data.get("world", "open"))
        table: dict[int, float] = {}
        for key, value in data["masses"].items():
            labels = [t.strip() for t in key.split(",")] if key.strip() else []
            bits = frame.subset(labels)
            table[bits] = table.get(bits, 0.0) + float(value)
        return cls(frame, table)

    @classmethod
    def from_json(cls, text: str) -> "MassFunction":
        return cls.from_dict(json.loads(text))


def validate_mass(m: MassFunction) -> list[str]:
    """Names every violated invariant of ``m``; an empty list means valid."""
    problems = []
    frame = m.frame
    for bits, value in m.items():
        if bits < 0 or bits > frame.full:
            problems.append(f"focal set {bits} outside frame")
        if not value > 0:
            problems.append(f"non-positive stored mass {value} on {bits}")
        if value > 1 + SUM_TOLERANCE:
            problems.append(f"mass {value} on {frame.format(bits)} exceeds 1")
    total = m.total()
    if abs(total - 1.0) > SUM_TOLERANCE:
        problems.append(f"masses sum to {total:.12g}, not 1")
    if frame.world is World.CLOSED and m.empty_mass != 0.0:
        problems.append(f"closed world requires m(empty)=0, got {m.empty_mass:.12g}")
    return problems


def gbel(m: MassFunction, a: FocalSet) -> float:
    """Generalized belief: mass of the non-empty subsets of ``a``; ``m(empty)`` for the empty set."""
    m.frame.check(a)
    if a == 0:
        return m.empty_mass
    return math.fsum(v for b, v in m.items() if b and is_subset(b, a))


def gpl(m: MassFunction, a: FocalSet) -> float:
    """Generalized plausibility: mass of every set meeting ``a``; ``m(empty)`` for the empty set."""
    m.frame.check(a)
    if a == 0:
        return m.empty_mass
    return math.fsum(v for b, v in m.items() if b & a)
