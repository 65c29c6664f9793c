"""Nested-set GBPA generation from triangular fuzzy number models."""

from __future__ import annotations

from typing import Mapping, NamedTuple

from .evidence import Frame, MassFunction, World
from .fuzzy import ModelTable, TriangularFuzzyNumber, membership


class Ordinate(NamedTuple):
    label: str
    degree: float


def ordinate_stack(column: Mapping[str, TriangularFuzzyNumber], x: float) -> list[Ordinate]:
    """Positive memberships at ``x``, ascending; ties keep the column's class order."""
    hits = [Ordinate(c, membership(tfn, x)) for c, tfn in column.items()]
    return sorted((o for o in hits if o.degree > 0), key=lambda o: o.degree)


def generate_gbpa(frame: Frame, column: Mapping[str, TriangularFuzzyNumber], x: float) -> MassFunction:
    """Open-world GBPA for one attribute reading.

    With the positive memberships sorted as ``w1 <= ... <= wm``, the set of
    classes reaching at least ``wk`` gets ``wk - w(k-1)`` (``w0 = 0``), so the
    focal sets form a shrinking chain.  The empty set takes ``1 - wm``.
    """
    missing = [c for c in frame.labels if c not in column]
    if missing:
        raise KeyError(f"no model for classes {missing}")
    stack = ordinate_stack({c: column[c] for c in frame.labels}, x)
    masses: dict[int, float] = {}
    level = 0.0
    for i, (_, degree) in enumerate(stack):
        step = degree - level
        if step > 0:
            members = frame.subset(o.label for o in stack[i:])
            masses[members] = masses.get(members, 0.0) + step
        level = degree
    masses[0] = 1.0 - level
    return MassFunction(frame.with_world(World.OPEN), masses)


def generate_for_attribute(models: ModelTable, attribute: str, x: float) -> MassFunction:
    return generate_gbpa(models.frame, models.column(attribute), x)


def to_closed_world(m: MassFunction) -> MassFunction:
    """Share ``m(empty)`` equally over all ``2**N - 1`` non-empty subsets."""
    frame = m.frame
    share = m.empty_mass / ((1 << frame.n) - 1)
    masses = {b: m[b] + share for b in range(1, 1 << frame.n)} if share else dict(m.items())
    return MassFunction(frame.with_world(World.CLOSED), masses)
