"""Per-sample pipeline: attribute GBPAs, fusion, maximum-mass decision."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .combination import Rule, combine_all
from .evidence import FocalSet, MassFunction, World, cardinality
from .fuzzy import ModelTable
from .generation import generate_gbpa, to_closed_world

# masses closer than this count as tied
TIE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class Decision:
    predicted: FocalSet
    fused: MassFunction
    per_attribute: tuple[MassFunction, ...]

    @property
    def labels(self) -> tuple[str, ...]:
        return self.fused.frame.labels_of(self.predicted)

    @property
    def is_unknown(self) -> bool:
        return self.predicted == 0

    def to_dict(self) -> dict:
        return {
            "predicted": list(self.labels),
            "unknown": self.is_unknown,
            "fused": self.fused.to_dict(),
            "per_attribute": [m.to_dict() for m in self.per_attribute],
        }


def _tie_key(m: MassFunction, bits: FocalSet) -> tuple:
    members = [i for i in range(m.frame.n) if bits >> i & 1]
    return (cardinality(bits), members)


def decide(fused: MassFunction) -> FocalSet:
    """Focal set with the largest mass.

    Ties go to the smaller set, then to the set whose members come first in
    frame order.  The empty set competes like any other focal set.
    """
    if not len(fused):
        raise ValueError("cannot decide on an empty mass function")
    best = max(fused.masses.values())
    tied = [b for b, v in fused.items() if best - v <= TIE_TOLERANCE]
    return min(tied, key=lambda b: _tie_key(fused, b))


def classify_sample(models: ModelTable, sample: Sequence[float] | Mapping[str, float],
                    rule: Rule | str = Rule.MGCR, world: World | str = World.OPEN) -> Decision:
    """Classify one sample.

    ``sample`` is either a sequence in ``models.attributes`` order or a
    mapping from attribute name to value.  In the closed world every
    attribute GBPA is redistributed before fusion.
    """
    rule, world = Rule(rule), World(world)
    if rule is Rule.DEMPSTER and world is World.OPEN:
        raise ValueError("Dempster's rule needs the closed world")
    if isinstance(sample, Mapping):
        values = [sample[t] for t in models.attributes]
    else:
        values = list(sample)
        if len(values) != len(models.attributes):
            raise ValueError(f"sample has {len(values)} values, model has {len(models.attributes)} attributes")
    per_attr = [generate_gbpa(models.frame, models.column(t), float(x))
                for t, x in zip(models.attributes, values)]
    if world is World.CLOSED:
        per_attr = [to_closed_world(m) for m in per_attr]
    fused = combine_all(rule, per_attr)
    return Decision(decide(fused), fused, tuple(per_attr))
