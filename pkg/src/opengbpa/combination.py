"""Conjunctive combination rules for (generalized) mass functions."""

from __future__ import annotations

import itertools
import math
from enum import Enum
from functools import reduce
from typing import NamedTuple, Sequence

from .evidence import Frame, FrameMismatchError, MassFunction, World

# 1 - K below this is treated as total conflict.
CONFLICT_EPS = 1e-12


class Rule(str, Enum):
    DEMPSTER = "dempster"
    GCR = "gcr"
    MGCR = "mgcr"


class TotalConflictError(ArithmeticError):
    """Dempster's rule is undefined because the conflict coefficient is 1."""

    def __init__(self, k: float):
        super().__init__(f"total conflict (k={k:.12g}); Dempster's rule is undefined")
        self.k = k


class ConflictReport(NamedTuple):
    k: float
    rule: Rule


class Combination(NamedTuple):
    mass: MassFunction
    conflict: ConflictReport


def _shared_frame(m1: MassFunction, m2: MassFunction) -> None:
    if not m1.frame.same_labels(m2.frame):
        raise FrameMismatchError(f"cannot combine {m1.frame.labels} with {m2.frame.labels}")


def _conjunctive(m1: MassFunction, m2: MassFunction) -> tuple[dict[int, float], float]:
    """Unnormalized products keyed by intersection, and the total landing on the empty set."""
    table: dict[int, list[float]] = {}
    for (b, vb), (c, vc) in itertools.product(m1.items(), m2.items()):
        table.setdefault(b & c, []).append(vb * vc)
    sums = {a: math.fsum(vs) for a, vs in table.items()}
    return sums, sums.pop(0, 0.0)


def dempster_combine(m1: MassFunction, m2: MassFunction) -> Combination:
    """Dempster's rule for two closed-world mass functions.

    Raises :class:`TotalConflictError` when every product lands on the empty set.
    """
    _shared_frame(m1, m2)
    for m in (m1, m2):
        if m.empty_mass > 0:
            raise ValueError("Dempster's rule needs closed-world inputs with m(empty)=0")
    sums, k = _conjunctive(m1, m2)
    k = min(max(k, 0.0), 1.0)
    if 1.0 - k <= CONFLICT_EPS:
        raise TotalConflictError(k)
    frame = m1.frame.with_world(World.CLOSED)
    return Combination(MassFunction(frame, {a: v / (1.0 - k) for a, v in sums.items()}),
                       ConflictReport(k, Rule.DEMPSTER))


def gcr_combine(m1: MassFunction, m2: MassFunction) -> Combination:
    """Generalized combination rule.

    The empty set keeps ``m1(empty) * m2(empty)``; the remaining mass is spread
    over the non-empty intersections in proportion to their products.  ``K``
    counts every pair with an empty intersection, including pairs that
    involve the empty set.
    """
    _shared_frame(m1, m2)
    sums, k = _conjunctive(m1, m2)
    k = min(max(k, 0.0), 1.0)
    frame = m1.frame.with_world(World.OPEN)
    if 1.0 - k <= CONFLICT_EPS:
        return Combination(MassFunction(frame, {0: 1.0}), ConflictReport(k, Rule.GCR))
    empty = m1.empty_mass * m2.empty_mass
    scale = (1.0 - empty) / (1.0 - k)
    out = {a: v * scale for a, v in sums.items()}
    out[0] = empty
    return Combination(MassFunction(frame, out), ConflictReport(k, Rule.GCR))


def mgcr_combine(m1: MassFunction, m2: MassFunction) -> Combination:
    """Modified generalized combination rule.

    ``K`` sums the products of disjoint pairs except the (empty, empty) pair,
    which instead survives as ``m(empty)``.  Everything is divided by ``1 - K``.
    """
    _shared_frame(m1, m2)
    sums, disjoint = _conjunctive(m1, m2)
    both_empty = m1.empty_mass * m2.empty_mass
    k = min(max(disjoint - both_empty, 0.0), 1.0)
    frame = m1.frame.with_world(World.OPEN)
    if 1.0 - k <= CONFLICT_EPS:
        return Combination(MassFunction(frame, {0: 1.0}), ConflictReport(k, Rule.MGCR))
    out = {a: v / (1.0 - k) for a, v in sums.items()}
    out[0] = both_empty / (1.0 - k)
    return Combination(MassFunction(frame, out), ConflictReport(k, Rule.MGCR))


RULES = {
    Rule.DEMPSTER: dempster_combine,
    Rule.GCR: gcr_combine,
    Rule.MGCR: mgcr_combine,
}


def combine(rule: Rule | str, m1: MassFunction, m2: MassFunction) -> Combination:
    return RULES[Rule(rule)](m1, m2)


def combine_all(rule: Rule | str, ms: Sequence[MassFunction]) -> MassFunction:
    """Left fold ``((m1 * m2) * m3) * ...`` in list order."""
    if not ms:
        raise ValueError("need at least one mass function")
    pair = RULES[Rule(rule)]
    return reduce(lambda acc, m: pair(acc, m).mass, ms[1:], ms[0])


def order_spread(rule: Rule | str, ms: Sequence[MassFunction]) -> float:
    """Largest entry-wise difference between folds over every ordering of ``ms``.

    Only lists of up to four mass functions are accepted.
    """
    if len(ms) > 4:
        raise ValueError("order_spread enumerates permutations; at most 4 inputs")
    results = [combine_all(rule, list(p)).to_vector() for p in itertools.permutations(ms)]
    return max((max(col) - min(col) for col in zip(*results)), default=0.0)


def negate_bayesian(m: MassFunction) -> MassFunction:
    """Negation of a Bayesian mass function: ``(1 - m({x})) / (N - 1)`` on each singleton."""
    frame: Frame = m.frame
    if frame.n < 2:
        raise ValueError("negation needs a frame with at least two labels")
    if m.empty_mass > 0 or not m.is_bayesian():
        raise ValueError("negation is only defined for closed-world Bayesian mass functions")
    out = {1 << i: (1.0 - m[1 << i]) / (frame.n - 1) for i in range(frame.n)}
    return MassFunction(frame.with_world(World.CLOSED), out)
