"""Splitting engines, classification experiments and report emission.

All randomness comes from numpy's PCG64 generator.  Repeat ``r`` of a run
with seed ``s`` draws from ``SeedSequence([s, r])``, so repeats are
independent of each other and of execution order.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .classification import classify_sample
from .combination import Rule, TotalConflictError
from .datasets import Dataset
from .evidence import World, make_frame
from .fuzzy import ModelTable, fit_models

log = logging.getLogger(__name__)

# Training fractions of the standard leave-out study.
STANDARD_FRACTIONS = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.72, 0.74, 0.76, 0.78, 0.8,
                   0.82, 0.84, 0.86, 0.88, 0.9, 0.92, 0.94, 0.96, 0.98)


class SplitKind(str, Enum):
    LEAVE_OUT = "leave_out"
    KFOLD = "stratified_kfold"


@dataclass(frozen=True)
class SplitPlan:
    kind: SplitKind
    train_fraction: float | None = None
    k: int | None = None
    seed: int = 0
    repeats: int = 1

    def __post_init__(self):
        object.__setattr__(self, "kind", SplitKind(self.kind))
        if self.repeats < 1:
            raise ValueError("repeats must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")
        if self.kind is SplitKind.LEAVE_OUT:
            if self.train_fraction is None or not 0 < self.train_fraction < 1:
                raise ValueError("leave-out needs 0 < train_fraction < 1")
        elif self.k is None or self.k < 2:
            raise ValueError("k-fold needs k >= 2")

    @classmethod
    def leave_out(cls, fraction: float, seed: int = 0, repeats: int = 1) -> "SplitPlan":
        return cls(SplitKind.LEAVE_OUT, train_fraction=fraction, seed=seed, repeats=repeats)

    @classmethod
    def kfold(cls, k: int, seed: int = 0, repeats: int = 1) -> "SplitPlan":
        return cls(SplitKind.KFOLD, k=k, seed=seed, repeats=repeats)


def substream(seed: int, *path: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, *path])))


def _train_count(fraction: float, size: int) -> int:
    # guard against 0.94 * 50 = 46.99999...
    return math.floor(fraction * size + 1e-9)


def _leave_out_indices(ds: Dataset, fraction: float, rng: np.random.Generator,
                       classes: Sequence[str]) -> tuple[list[int], list[int]]:
    train, test = [], []
    for c in classes:
        idx = ds.indices_of(c)
        n_train = _train_count(fraction, len(idx))
        if n_train == 0 or n_train == len(idx):
            raise ValueError(f"fraction {fraction} leaves class {c!r} ({len(idx)} rows) "
                             f"without {'training' if n_train == 0 else 'test'} rows")
        idx = rng.permutation(idx)
        train.extend(int(i) for i in idx[:n_train])
        test.extend(int(i) for i in idx[n_train:])
    return sorted(train), sorted(test)


def split_leave_out(ds: Dataset, plan: SplitPlan, repeat: int = 0) -> tuple[Dataset, Dataset]:
    """Stratified random split keeping ``floor(fraction * class size)`` rows of each class for training."""
    if plan.kind is not SplitKind.LEAVE_OUT:
        raise ValueError("plan is not a leave-out plan")
    train, test = _leave_out_indices(ds, plan.train_fraction, substream(plan.seed, repeat), ds.classes)
    return ds.subset(train), ds.subset(test)


def stratified_kfold(ds: Dataset, plan: SplitPlan, repeat: int = 0) -> list[tuple[Dataset, Dataset]]:
    """Shuffle each class and deal its rows round-robin over ``k`` folds.

    The dealing position carries over from one class to the next so fold
    sizes differ by at most one row overall as well as per class.
    """
    if plan.kind is not SplitKind.KFOLD:
        raise ValueError("plan is not a k-fold plan")
    k = plan.k
    smallest = min(ds.class_counts().values())
    if k > smallest:
        raise ValueError(f"k={k} exceeds the smallest class size {smallest}")
    rng = substream(plan.seed, repeat)
    folds: list[list[int]] = [[] for _ in range(k)]
    pos = 0
    for c in ds.classes:
        for i in rng.permutation(ds.indices_of(c)):
            folds[pos % k].append(int(i))
            pos += 1
    everything = set(range(len(ds)))
    return [(ds.subset(sorted(everything - set(f))), ds.subset(sorted(f))) for f in folds]


# -- reports ---------------------------------------------------------------

@dataclass
class ReportRow:
    actual: str
    ideal: str
    count: int = 0
    correct: int = 0

    @property
    def accuracy(self) -> float:
        return self.correct / self.count if self.count else 0.0


@dataclass
class ExperimentReport:
    title: str
    rows: list[ReportRow] = field(default_factory=list)
    conflicts: int = 0

    @property
    def total_count(self) -> int:
        return sum(r.count for r in self.rows)

    @property
    def total_correct(self) -> int:
        return sum(r.correct for r in self.rows)

    @property
    def accuracy(self) -> float:
        return self.total_correct / self.total_count if self.total_count else 0.0

    def row(self, actual: str) -> ReportRow:
        return next(r for r in self.rows if r.actual == actual)

    def merge(self, other: "ExperimentReport") -> None:
        for r in other.rows:
            mine = next((m for m in self.rows if m.actual == r.actual), None)
            if mine is None:
                self.rows.append(ReportRow(r.actual, r.ideal, r.count, r.correct))
            else:
                mine.count += r.count
                mine.correct += r.correct
        self.conflicts += other.conflicts

    def table_rows(self) -> list[list[str]]:
        out = [[f"sample{i}", r.actual, r.ideal, str(r.count), str(r.correct), f"{100 * r.accuracy:.2f}%"]
               for i, r in enumerate(self.rows, 1)]
        out.append(["Total", "-", "-", str(self.total_count), str(self.total_correct),
                    f"{100 * self.accuracy:.2f}%"])
        return out

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "rows": [{"actual": r.actual, "ideal": r.ideal, "count": r.count,
                      "correct": r.correct, "accuracy": r.accuracy} for r in self.rows],
            "total": {"count": self.total_count, "correct": self.total_correct,
                      "accuracy": self.accuracy},
            "total_conflicts": self.conflicts,
        }

    def to_csv(self) -> str:
        return _csv([["sample", "actual", "ideal", "count", "correct", "accuracy"], *self.table_rows()])

    def to_table(self) -> str:
        header = ["Sample", "Actual class", "Ideal class", "Sample number", "Correct number", "Accuracy"]
        return self.title + "\n" + _text_table([header, *self.table_rows()])


def _csv(rows: list[list]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _text_table(rows: list[list[str]]) -> str:
    widths = [max(len(str(r[j])) for r in rows) for j in range(len(rows[0]))]
    return "\n".join("  ".join(str(c).rjust(w) for c, w in zip(r, widths)) for r in rows)


# -- evaluation --------------------------------------------------------------

EMPTY = "∅"


def evaluate(models: ModelTable, test: Dataset, rule: Rule | str, world: World | str,
             title: str = "") -> ExperimentReport:
    """Classify every test row.

    A known-class row is correct only when the decision is exactly its
    singleton; a row from a class outside the frame is correct only when the
    decision is the empty set.  A total Dempster conflict counts as a miss.
    """
    frame = models.frame
    report = ExperimentReport(title)
    for c in test.classes:
        report.rows.append(ReportRow(c, c if c in frame.labels else EMPTY))
    for values, label in zip(test.values, test.labels):
        row = report.row(label)
        row.count += 1
        try:
            decision = classify_sample(models, values, rule, world)
        except TotalConflictError:
            report.conflicts += 1
            continue
        expected = frame.singleton(label) if label in frame.labels else 0
        row.correct += decision.predicted == expected
    report.rows.sort(key=lambda r: r.actual)
    return report


def run_open_world(ds: Dataset, frame_labels: Sequence[str], plan: SplitPlan,
                   rule: Rule | str = Rule.MGCR, unknown_per_class: int = 10) -> ExperimentReport:
    """Train on the frame classes and test with injected unknown-class rows.

    Per repeat, the frame classes are split by ``plan`` and
    ``unknown_per_class`` random rows of every excluded class join the test
    set.  Counts accumulate over ``plan.repeats``.
    """
    frame_labels = list(frame_labels)
    unknown = [c for c in ds.classes if c not in frame_labels]
    if not unknown:
        raise ValueError("the frame covers every class; there is no unknown class to inject")
    if any(c not in ds.classes for c in frame_labels):
        raise ValueError(f"frame labels {frame_labels} are not all dataset classes {ds.classes}")
    frame = make_frame(frame_labels, World.OPEN)
    report = ExperimentReport(f"{ds.name}: open world {{{','.join(frame_labels)}}}, {Rule(rule).value}")
    for r in range(plan.repeats):
        train, test = _leave_out_indices(ds, plan.train_fraction, substream(plan.seed, r), frame_labels)
        rng = substream(plan.seed, r, 1)
        for c in unknown:
            idx = ds.indices_of(c)
            test.extend(int(i) for i in rng.choice(idx, size=min(unknown_per_class, len(idx)), replace=False))
        models = fit_models(ds.subset(train).rows, frame, ds.attributes)
        report.merge(evaluate(models, ds.subset(sorted(test)), rule, World.OPEN))
    return report


def leave_out_accuracy(ds: Dataset, plan: SplitPlan, repeat: int, rule: Rule | str,
                       world: World | str) -> float:
    frame = make_frame(ds.classes, world)
    train, test = split_leave_out(ds, plan, repeat)
    models = fit_models(train.rows, frame, ds.attributes)
    return evaluate(models, test, rule, world).accuracy


@dataclass
class RobustnessResult:
    fractions: tuple[float, ...]
    accuracies: np.ndarray  # (len(fractions), repeats)

    @property
    def means(self) -> np.ndarray:
        return self.accuracies.mean(axis=1)

    def mean_at(self, fraction: float) -> float:
        return float(self.means[self.fractions.index(fraction)])

    def to_dict(self) -> dict:
        return {"fractions": list(self.fractions), "accuracies": self.accuracies.tolist(),
                "means": self.means.tolist()}

    def _rows(self) -> list[list[str]]:
        reps = self.accuracies.shape[1]
        header = ["training part", *(f"run{i + 1}" for i in range(reps)), "average"]
        body = [[f"{100 * f:g}%", *(f"{100 * a:.2f}%" for a in row), f"{100 * m:.2f}%"]
                for f, row, m in zip(self.fractions, self.accuracies, self.means)]
        return [header, *body]

    def to_csv(self) -> str:
        return _csv(self._rows())

    def to_table(self) -> str:
        return _text_table(self._rows())


def run_robustness(ds: Dataset, fractions: Sequence[float] = STANDARD_FRACTIONS, repeats: int = 10,
                   rule: Rule | str = Rule.DEMPSTER, world: World | str = World.CLOSED,
                   seed: int = 0) -> RobustnessResult:
    """Repeated leave-out accuracy for each training fraction."""
    fractions = tuple(fractions)
    acc = np.empty((len(fractions), repeats))
    for i, f in enumerate(fractions):
        plan = SplitPlan.leave_out(f, seed=seed, repeats=repeats)
        for r in range(repeats):
            acc[i, r] = leave_out_accuracy(ds, plan, r, rule, world)
        log.debug("fraction %.2f: mean accuracy %.4f", f, acc[i].mean())
    return RobustnessResult(fractions, acc)


@dataclass
class CrossValidationResult:
    k: int
    fold_accuracies: np.ndarray  # (repeats, k)

    @property
    def per_repeat(self) -> np.ndarray:
        return self.fold_accuracies.mean(axis=1)

    @property
    def mean(self) -> float:
        return float(self.fold_accuracies.mean())

    def to_dict(self) -> dict:
        return {"k": self.k, "per_repeat": self.per_repeat.tolist(), "mean": self.mean}

    def _rows(self) -> list[list[str]]:
        n = len(self.per_repeat)
        return [["k", *(f"run{i + 1}" for i in range(n)), "average"],
                [str(self.k), *(f"{100 * a:.2f}%" for a in self.per_repeat), f"{100 * self.mean:.2f}%"]]

    def to_csv(self) -> str:
        return _csv(self._rows())

    def to_table(self) -> str:
        return _text_table(self._rows())


def run_cross_validation(ds: Dataset, k: int, repeats: int = 10, rule: Rule | str = Rule.DEMPSTER,
                         world: World | str = World.CLOSED, seed: int = 0) -> CrossValidationResult:
    """``repeats`` rounds of stratified ``k``-fold evaluation."""
    plan = SplitPlan.kfold(k, seed=seed, repeats=repeats)
    frame = make_frame(ds.classes, world)
    acc = np.empty((repeats, k))
    for r in range(repeats):
        for j, (train, test) in enumerate(stratified_kfold(ds, plan, r)):
            models = fit_models(train.rows, frame, ds.attributes)
            acc[r, j] = evaluate(models, test, rule, world).accuracy
    return CrossValidationResult(k, acc)


def corrected_accuracy(leave_out: float, cross_validation: float) -> float:
    """Average of a leave-out accuracy and a cross-validation accuracy."""
    for v in (leave_out, cross_validation):
        if not 0 <= v <= 1:
            raise ValueError(f"accuracy {v} is outside [0, 1]")
    return (leave_out + cross_validation) / 2


def report_json(obj) -> str:
    return json.dumps(obj.to_dict(), indent=2, ensure_ascii=False)
