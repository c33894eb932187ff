"""Categorical dataset container, CSV round-tripping, and one-hot expansion.

Category values are coded internally as zero-based integers per attribute.
String values from CSV files are mapped to codes in first-seen order, which
makes the encoding a deterministic function of the file contents.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

_ARITY_SUFFIX = re.compile(r"^(?P<name>.*)#(?P<arity>\d+)$")


class DatasetParseError(ValueError):
    """A CSV file could not be parsed into a categorical dataset."""


@dataclass(frozen=True)
class AttributeDomain:
    """Value domain of one attribute; categories are coded 0 .. arity-1."""

    arity: int

    def __post_init__(self) -> None:
        if self.arity < 1:
            raise ValueError(f"arity must be >= 1, got {self.arity}")


@dataclass(frozen=True, eq=False)
class CategoricalDataset:
    """An n x d matrix of category codes with optional ground-truth labels.

    Immutable after construction; the backing arrays are marked read-only so
    instances are safe to share across threads.
    """

    values: np.ndarray
    domains: tuple[AttributeDomain, ...]
    labels: Optional[np.ndarray] = None
    category_names: Optional[tuple[tuple[str, ...], ...]] = None
    label_names: Optional[tuple[str, ...]] = None
    column_names: Optional[tuple[str, ...]] = None
    label_column_name: Optional[str] = None

    def __post_init__(self) -> None:
        values = np.ascontiguousarray(self.values, dtype=np.int32)
        if values.ndim != 2:
            raise ValueError(f"values must be 2-D, got shape {values.shape}")
        if len(self.domains) != values.shape[1]:
            raise ValueError(
                f"{len(self.domains)} domains for {values.shape[1]} attribute columns"
            )
        if values.size and values.min() < 0:
            raise ValueError("category codes must be non-negative")
        arities = np.array([dom.arity for dom in self.domains], dtype=np.int64)
        if values.size and (values >= arities[None, :]).any():
            bad = int(np.argmax((values >= arities[None, :]).any(axis=0)))
            raise ValueError(f"column {bad} holds a code >= its arity {arities[bad]}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if self.labels is not None:
            labels = np.ascontiguousarray(self.labels, dtype=np.int32)
            if labels.shape != (values.shape[0],):
                raise ValueError(
                    f"labels must have length n={values.shape[0]}, got {labels.shape}"
                )
            if labels.size and labels.min() < 0:
                raise ValueError("labels must be non-negative cluster ids")
            labels.setflags(write=False)
            object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]

    @property
    def arities(self) -> np.ndarray:
        return np.array([dom.arity for dom in self.domains], dtype=np.int64)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CategoricalDataset):
            return NotImplemented
        if self.domains != other.domains:
            return False
        if not np.array_equal(self.values, other.values):
            return False
        if (self.labels is None) != (other.labels is None):
            return False
        if self.labels is not None and not np.array_equal(self.labels, other.labels):
            return False
        return (
            self.category_names == other.category_names
            and self.label_names == other.label_names
            and self.column_names == other.column_names
            and self.label_column_name == other.label_column_name
        )


@dataclass(frozen=True, eq=False)
class OneHotMatrix:
    """Dense one-hot expansion of a categorical dataset.

    Column block j spans offsets[j]:offsets[j+1] and holds attribute j's
    indicator columns. `codes` keeps the original integer matrix so distance
    kernels can avoid touching the dense expansion.
    """

    matrix: np.ndarray
    offsets: np.ndarray
    codes: np.ndarray

    def __post_init__(self) -> None:
        matrix = np.ascontiguousarray(self.matrix, dtype=np.float64)
        offsets = np.ascontiguousarray(self.offsets, dtype=np.int64)
        codes = np.ascontiguousarray(self.codes, dtype=np.int32)
        matrix.setflags(write=False)
        offsets.setflags(write=False)
        codes.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "offsets", offsets)
        object.__setattr__(self, "codes", codes)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def d(self) -> int:
        return len(self.offsets) - 1

    @property
    def width(self) -> int:
        return self.matrix.shape[1]


def _split_header_cell(cell: str) -> tuple[str, Optional[int]]:
    m = _ARITY_SUFFIX.match(cell)
    if m:
        return m.group("name"), int(m.group("arity"))
    return cell, None


def load_csv(
    path: Union[str, Path],
    label_column: Union[str, int, None] = None,
    has_header: bool = False,
) -> CategoricalDataset:
    """Load a categorical dataset from a comma-separated UTF-8 file.

    Each distinct string per column is mapped to a code in first-seen order.
    `label_column` selects the ground-truth column either by header name
    (requires has_header) or by zero-based index. A header cell of the form
    ``name#arity`` declares the column's arity, which must cover the data.

    Raises DatasetParseError for ragged rows (with the offending line
    number), empty cells, or an undersized declared arity, and ValueError
    for a label column that does not exist.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise DatasetParseError(f"{path}: file is empty")

    header: Optional[list[str]] = None
    declared: list[Optional[int]] = []
    if has_header:
        header = []
        for cell in rows[0]:
            name, arity = _split_header_cell(cell)
            header.append(name)
            declared.append(arity)
        data_rows = rows[1:]
        first_line = 2
    else:
        data_rows = rows
        first_line = 1
    if not data_rows:
        raise DatasetParseError(f"{path}: no data rows")

    width = len(data_rows[0])
    for i, row in enumerate(data_rows):
        if len(row) != width:
            raise DatasetParseError(
                f"{path}: row {first_line + i} has {len(row)} cells, expected {width}"
            )
        for cell in row:
            if cell == "":
                raise DatasetParseError(
                    f"{path}: row {first_line + i} contains an empty cell "
                    "(missing values are not supported)"
                )
    if header is not None and len(header) != width:
        raise DatasetParseError(
            f"{path}: header has {len(header)} cells, data rows have {width}"
        )
    if not declared:
        declared = [None] * width

    label_idx: Optional[int] = None
    if label_column is not None:
        if isinstance(label_column, str):
            if header is None:
                raise ValueError("label column by name requires has_header=True")
            if label_column not in header:
                raise ValueError(f"label column {label_column!r} not found in header")
            label_idx = header.index(label_column)
        else:
            label_idx = int(label_column)
            if not 0 <= label_idx < width:
                raise ValueError(f"label column index {label_idx} out of range 0..{width - 1}")

    feature_idx = [j for j in range(width) if j != label_idx]

    n = len(data_rows)
    codes = np.empty((n, len(feature_idx)), dtype=np.int32)
    names: list[tuple[str, ...]] = []
    domains: list[AttributeDomain] = []
    for out_j, j in enumerate(feature_idx):
        mapping: dict[str, int] = {}
        for i, row in enumerate(data_rows):
            codes[i, out_j] = mapping.setdefault(row[j], len(mapping))
        arity = len(mapping)
        if declared[j] is not None:
            if declared[j] < arity:
                raise DatasetParseError(
                    f"{path}: column {j} declares arity {declared[j]} "
                    f"but {arity} distinct values were observed"
                )
            arity = declared[j]
        domains.append(AttributeDomain(arity))
        names.append(tuple(mapping))

    labels = None
    label_names: Optional[tuple[str, ...]] = None
    label_name = None
    if label_idx is not None:
        mapping = {}
        labels = np.empty(n, dtype=np.int32)
        for i, row in enumerate(data_rows):
            labels[i] = mapping.setdefault(row[label_idx], len(mapping))
        label_names = tuple(mapping)
        label_name = header[label_idx] if header is not None else "label"

    return CategoricalDataset(
        values=codes,
        domains=tuple(domains),
        labels=labels,
        category_names=tuple(names),
        label_names=label_names,
        column_names=tuple(header[j] for j in feature_idx) if header is not None else None,
        label_column_name=label_name,
    )


def save_csv(ds: CategoricalDataset, path: Union[str, Path]) -> None:
    """Write a dataset back to CSV, restoring string names where known.

    A header row is emitted when the dataset carries column names. Labels,
    if present, are appended as the last column.
    """
    path = Path(path)
    with_labels = ds.labels is not None
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        if ds.column_names is not None:
            header = list(ds.column_names)
            if with_labels:
                header.append(ds.label_column_name or "label")
            writer.writerow(header)
        for i in range(ds.n):
            row = []
            for j in range(ds.d):
                code = int(ds.values[i, j])
                if ds.category_names is not None and code < len(ds.category_names[j]):
                    row.append(ds.category_names[j][code])
                else:
                    row.append(str(code))
            if with_labels:
                lab = int(ds.labels[i])
                if ds.label_names is not None and lab < len(ds.label_names):
                    row.append(ds.label_names[lab])
                else:
                    row.append(str(lab))
            writer.writerow(row)


def save_assignments(assignment: Sequence[int], path: Union[str, Path]) -> None:
    """Write one cluster id per line."""
    arr = np.asarray(assignment, dtype=np.int64)
    if arr.ndim != 1:
        raise ValueError(f"assignment must be 1-D, got shape {arr.shape}")
    Path(path).write_text("".join(f"{v}\n" for v in arr), encoding="utf-8")


def load_assignments(path: Union[str, Path]) -> np.ndarray:
    """Read a one-integer-per-line assignment file."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    try:
        return np.array([int(line) for line in lines if line.strip() != ""], dtype=np.int64)
    except ValueError as exc:
        raise DatasetParseError(f"{path}: {exc}") from exc


def one_hot(ds: CategoricalDataset) -> OneHotMatrix:
    """Expand each attribute into indicator columns.

    Row i contributes a single 1 in block j at column offset[j] + code.
    """
    arities = ds.arities
    offsets = np.zeros(ds.d + 1, dtype=np.int64)
    np.cumsum(arities, out=offsets[1:])
    matrix = np.zeros((ds.n, int(offsets[-1])), dtype=np.float64)
    cols = offsets[:-1][None, :] + ds.values
    matrix[np.arange(ds.n)[:, None], cols] = 1.0
    return OneHotMatrix(matrix=matrix, offsets=offsets, codes=ds.values)


def as_dataset(
    X: Union[CategoricalDataset, np.ndarray, Sequence[Sequence[int]]],
    labels: Optional[Sequence[int]] = None,
    arities: Optional[Sequence[int]] = None,
) -> CategoricalDataset:
    """Coerce a plain code matrix into a CategoricalDataset.

    Arities default to (column max + 1). An existing dataset is passed
    through, optionally re-labeled.
    """
    if isinstance(X, CategoricalDataset):
        if labels is None:
            return X
        return CategoricalDataset(
            values=X.values,
            domains=X.domains,
            labels=np.asarray(labels),
            category_names=X.category_names,
            label_names=X.label_names,
            column_names=X.column_names,
            label_column_name=X.label_column_name,
        )
    values = np.asarray(X)
    if values.ndim != 2:
        raise ValueError(f"expected a 2-D code matrix, got shape {values.shape}")
    if not np.issubdtype(values.dtype, np.integer):
        rounded = np.rint(values)
        if not np.array_equal(rounded, values):
            raise ValueError("categorical codes must be integers")
        values = rounded.astype(np.int32)
    if arities is None:
        arities = [int(values[:, j].max()) + 1 if values.size else 1 for j in range(values.shape[1])]
    domains = tuple(AttributeDomain(int(a)) for a in arities)
    lab = None if labels is None else np.asarray(labels)
    return CategoricalDataset(values=values, domains=domains, labels=lab)
