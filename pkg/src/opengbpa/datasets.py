"""Dataset loading, including the bundled UCI Iris and Haberman files."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .fuzzy import ModelTable

IRIS_ATTRIBUTES = ("SL", "SW", "PL", "PW")
IRIS_CLASSES = {"Iris-setosa": "a", "Iris-versicolor": "b", "Iris-virginica": "c"}
HABERMAN_ATTRIBUTES = ("age", "year", "nodes")
# a: survived 5 years or longer, b: died within 5 years
HABERMAN_CLASSES = {"1": "a", "2": "b"}


class Schema(str, Enum):
    IRIS = "iris"
    HABERMAN = "haberman"
    GENERIC = "generic-csv"


class DatasetFormatError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Dataset:
    name: str
    attributes: tuple[str, ...]
    values: np.ndarray  # (n_rows, n_attributes)
    labels: tuple[str, ...]

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2 or values.shape[1] != len(self.attributes):
            raise DatasetFormatError(f"values of shape {values.shape} do not match {len(self.attributes)} attributes")
        if values.shape[0] != len(self.labels):
            raise DatasetFormatError("one label per row is required")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "attributes", tuple(self.attributes))

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def rows(self) -> list[tuple[tuple[float, ...], str]]:
        return [(tuple(v), lab) for v, lab in zip(self.values.tolist(), self.labels)]

    def __iter__(self) -> Iterator[tuple[tuple[float, ...], str]]:
        return iter(self.rows)

    @property
    def classes(self) -> tuple[str, ...]:
        """Distinct labels in order of first appearance."""
        return tuple(dict.fromkeys(self.labels))

    def class_counts(self) -> dict[str, int]:
        return {c: self.labels.count(c) for c in self.classes}

    def indices_of(self, label: str) -> np.ndarray:
        return np.flatnonzero(np.asarray(self.labels) == label)

    def subset(self, indices: Sequence[int], name: str | None = None) -> "Dataset":
        idx = np.asarray(indices, dtype=int)
        return Dataset(name or self.name, self.attributes, self.values[idx],
                       tuple(self.labels[i] for i in idx))

    def only(self, classes: Sequence[str]) -> "Dataset":
        keep = set(classes)
        return self.subset([i for i, lab in enumerate(self.labels) if lab in keep])


def _parse(lines: list[list[str]], name: str, attributes: Sequence[str],
           class_map: dict[str, str] | None) -> Dataset:
    values, labels = [], []
    for lineno, row in enumerate(lines, 1):
        row = [cell.strip() for cell in row]
        if not any(row):
            continue
        if len(row) != len(attributes) + 1:
            raise DatasetFormatError(f"{name} line {lineno}: expected {len(attributes) + 1} fields, got {len(row)}")
        try:
            values.append([float(cell) for cell in row[:-1]])
        except ValueError:
            raise DatasetFormatError(f"{name} line {lineno}: non-numeric attribute in {row}") from None
        token = row[-1]
        if class_map is not None:
            if token not in class_map:
                raise DatasetFormatError(f"{name} line {lineno}: unknown class {token!r}")
            token = class_map[token]
        labels.append(token)
    if not labels:
        raise DatasetFormatError(f"{name}: no data rows")
    return Dataset(name, tuple(attributes), np.array(values), tuple(labels))


def load_dataset(path: str | Path, schema: Schema | str = Schema.GENERIC) -> Dataset:
    """Read a comma-separated file.

    ``iris`` and ``haberman`` expect the headerless UCI layout (attributes,
    then the class token) and relabel classes to ``a``, ``b``, ``c``.
    ``generic-csv`` takes attribute names from the header and the class from
    the last column.
    """
    schema = Schema(schema)
    path = Path(path)
    with path.open(newline="") as fh:
        lines = [row for row in csv.reader(fh)]
    if schema is Schema.IRIS:
        return _parse(lines, "iris", IRIS_ATTRIBUTES, IRIS_CLASSES)
    if schema is Schema.HABERMAN:
        return _parse(lines, "haberman", HABERMAN_ATTRIBUTES, HABERMAN_CLASSES)
    if not lines:
        raise DatasetFormatError(f"{path}: empty file")
    header = [h.strip() for h in lines[0]]
    return _parse(lines[1:], path.stem, header[:-1], None)


def data_path(filename: str) -> Path:
    return Path(str(resources.files("opengbpa") / "data" / filename))


def load_iris() -> Dataset:
    """The 150-row Iris data with classes a (setosa), b (versicolor), c (virginica)."""
    return load_dataset(data_path("iris.data"), Schema.IRIS)


def load_haberman() -> Dataset:
    return load_dataset(data_path("haberman.data"), Schema.HABERMAN)


def load_iris_table1_training() -> Dataset:
    """A 40-per-class Iris training split whose fitted models equal the published model table."""
    ds = load_dataset(data_path("iris_train_table1.data"), Schema.IRIS)
    return Dataset("iris-train-40", ds.attributes, ds.values, ds.labels)


def table1_models() -> ModelTable:
    """The published Iris model table, to four decimals."""
    return ModelTable.from_json(data_path("table1_models.json").read_text())


def table2_sample() -> dict[str, float]:
    return json.loads(data_path("table2_sample.json").read_text())


def guess_schema(path: str | Path) -> Schema:
    name = Path(path).name.lower()
    if "iris" in name:
        return Schema.IRIS
    if "haberman" in name:
        return Schema.HABERMAN
    return Schema.GENERIC


def resolve_dataset(spec: str, schema: Schema | str | None = None) -> Dataset:
    """``iris`` / ``haberman`` name the bundled copies; anything else is a path."""
    if schema is None and spec in ("iris", "haberman"):
        return load_iris() if spec == "iris" else load_haberman()
    return load_dataset(spec, schema or guess_schema(spec))
