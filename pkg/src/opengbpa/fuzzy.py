"""Triangular fuzzy number class models."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .evidence import Frame, World, make_frame

MEMBERSHIP_FLOOR = 0.01


@dataclass(frozen=True)
class TriangularFuzzyNumber:
    lower: float
    mode: float
    upper: float

    def __post_init__(self):
        if not (self.lower <= self.mode <= self.upper):
            raise ValueError(f"need lower <= mode <= upper, got {self.astuple()}")

    def astuple(self) -> tuple[float, float, float]:
        return (self.lower, self.mode, self.upper)

    def contains(self, x: float) -> bool:
        return self.lower <= x <= self.upper

    def __call__(self, x: float) -> float:
        return membership(self, x)

    def __str__(self):
        return f"({self.lower:.4f},{self.mode:.4f},{self.upper:.4f})"


def fit_tfn(samples: Iterable[float]) -> TriangularFuzzyNumber:
    """``(min, mean, max)`` of the samples."""
    values = np.asarray(list(samples), dtype=float)
    if values.size == 0:
        raise ValueError("cannot fit a fuzzy number to no samples")
    if not np.all(np.isfinite(values)):
        raise ValueError("samples must be finite")
    lo, hi = float(values.min()), float(values.max())
    # the float mean can land a hair outside [lo, hi] for constant inputs
    mean = min(max(math.fsum(values) / values.size, lo), hi)
    return TriangularFuzzyNumber(lo, mean, hi)


def raw_membership(tfn: TriangularFuzzyNumber, x: float) -> float:
    """Piecewise-linear triangle without the floor; a vertical edge reads 1."""
    a0, mu, a1 = tfn.astuple()
    if x < a0 or x > a1:
        return 0.0
    if x == mu:
        return 1.0
    if x < mu:
        return (x - a0) / (mu - a0)
    return (a1 - x) / (a1 - mu)


def membership(tfn: TriangularFuzzyNumber, x: float) -> float:
    """Membership degree, floored at 0.01 everywhere on the closed support.

    >>> membership(TriangularFuzzyNumber(2.2, 2.96, 3.8), 3.8)
    0.01
    >>> membership(TriangularFuzzyNumber(2.2, 2.96, 3.8), 3.81)
    0.0
    """
    if not tfn.contains(x):
        return 0.0
    return max(raw_membership(tfn, x), MEMBERSHIP_FLOOR)


class ModelTable:
    """One fuzzy number per (class, attribute) pair.

    Attribute order is the order in which per-attribute evidence gets fused.
    """

    def __init__(self, frame: Frame, attributes: Sequence[str],
                 cells: Mapping[tuple[str, str], TriangularFuzzyNumber]):
        self.frame = frame
        self.attributes = tuple(attributes)
        if len(set(self.attributes)) != len(self.attributes):
            raise ValueError("duplicate attribute names")
        missing = [(c, t) for c in frame.labels for t in self.attributes if (c, t) not in cells]
        if missing:
            raise ValueError(f"model table is missing cells {missing}")
        self.cells = {(c, t): cells[(c, t)] for c in frame.labels for t in self.attributes}

    def __getitem__(self, key: tuple[str, str]) -> TriangularFuzzyNumber:
        return self.cells[key]

    def __eq__(self, other):
        if not isinstance(other, ModelTable):
            return NotImplemented
        return (self.frame.labels, self.attributes, self.cells) == (
            other.frame.labels, other.attributes, other.cells)

    def column(self, attribute: str) -> dict[str, TriangularFuzzyNumber]:
        if attribute not in self.attributes:
            raise KeyError(f"unknown attribute {attribute!r}")
        return {c: self.cells[(c, attribute)] for c in self.frame.labels}

    def to_dict(self) -> dict:
        return {
            "labels": list(self.frame.labels),
            "attributes": list(self.attributes),
            "cells": {c: {t: list(self.cells[(c, t)].astuple()) for t in self.attributes}
                      for c in self.frame.labels},
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, data: Mapping) -> "ModelTable":
        frame = make_frame(data["labels"], World.OPEN)
        cells = {(c, t): TriangularFuzzyNumber(*map(float, v))
                 for c, row in data["cells"].items() for t, v in row.items()}
        return cls(frame, data["attributes"], cells)

    @classmethod
    def from_json(cls, text: str) -> "ModelTable":
        return cls.from_dict(json.loads(text))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["class", *self.attributes])
        for c in self.frame.labels:
            w.writerow([c, *(f"({a0:g},{mu:g},{a1:g})" for a0, mu, a1 in
                             (self.cells[(c, t)].astuple() for t in self.attributes))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "ModelTable":
        rows = list(csv.reader(io.StringIO(text)))
        attributes = rows[0][1:]
        cells = {}
        for row in rows[1:]:
            if not row:
                continue
            for t, cell in zip(attributes, row[1:]):
                cells[(row[0], t)] = TriangularFuzzyNumber(*map(float, cell.strip("() ").split(",")))
        return cls(make_frame([r[0] for r in rows[1:] if r]), attributes, cells)


def fit_models(rows: Iterable[tuple[Sequence[float], str]], frame: Frame,
               attributes: Sequence[str]) -> ModelTable:
    """Fit a fuzzy number for every class of ``frame`` and every attribute.

    ``rows`` are ``(values, label)`` pairs with values in ``attributes`` order.
    Rows whose label is outside the frame are ignored.
    """
    by_class: dict[str, list[Sequence[float]]] = {c: [] for c in frame.labels}
    for values, label in rows:
        if len(values) != len(attributes):
            raise ValueError(f"row has {len(values)} values, expected {len(attributes)}")
        if label in by_class:
            by_class[label].append(values)
    empty = [c for c, vs in by_class.items() if not vs]
    if empty:
        raise ValueError(f"no training samples for classes {empty}")
    cells = {}
    for c, vs in by_class.items():
        arr = np.asarray(vs, dtype=float)
        for j, t in enumerate(attributes):
            cells[(c, t)] = fit_tfn(arr[:, j])
    return ModelTable(frame, attributes, cells)
