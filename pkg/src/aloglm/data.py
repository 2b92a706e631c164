"""Dataset container and CSV ingestion."""

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, ParseError, RaggedRows
from .families import LossFamily


@dataclass
class Dataset:
    X: np.ndarray
    y: np.ndarray
    family: LossFamily | None = None
    column_means: np.ndarray | None = field(default=None, repr=False)
    column_sds: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.X = np.ascontiguousarray(np.asarray(self.X, dtype=float))
        self.y = np.ascontiguousarray(np.asarray(self.y, dtype=float)).ravel()
        if self.X.ndim != 2:
            raise DimensionMismatch(f"X must be 2-d, got shape {self.X.shape}")
        if self.y.shape[0] != self.X.shape[0]:
            raise DimensionMismatch(
                f"X has {self.X.shape[0]} rows but y has {self.y.shape[0]} entries"
            )

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    def drop_rows(self, idx) -> "Dataset":
        """Copy with the given rows removed (family metadata preserved)."""
        return Dataset(np.delete(self.X, idx, axis=0), np.delete(self.y, idx), self.family)

    def permuted(self, order) -> "Dataset":
        return Dataset(self.X[order], self.y[order], self.family)


def _read_numeric_csv(path) -> np.ndarray:
    rows = []
    width = None
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for r, record in enumerate(reader):
            if not record or (len(record) == 1 and record[0].strip() == ""):
                continue
            if width is None:
                width = len(record)
                # header row detection: any cell that does not parse as float
                try:
                    rows.append([float(c) for c in record])
                except ValueError:
                    continue  # treat as header
                continue
            if len(record) != width:
                raise RaggedRows(
                    f"{path}: row {r + 1} has {len(record)} fields, expected {width}"
                )
            parsed = []
            for c, cell in enumerate(record):
                try:
                    parsed.append(float(cell))
                except ValueError:
                    raise ParseError(
                        f"{path}: non-numeric cell at row {r + 1}, column {c + 1}: {cell!r}"
                    ) from None
            rows.append(parsed)
    if not rows:
        raise ParseError(f"{path}: no data rows")
    return np.asarray(rows, dtype=float)


def ingest_csv(
    path_X,
    path_y,
    standardize: bool = False,
    add_intercept: bool = False,
    family: LossFamily | None = None,
) -> Dataset:
    """Load a design matrix and response from numeric CSV files.

    A leading header row is skipped automatically when any of its cells fails
    to parse as a number.  With ``standardize`` each column of X is centered
    and scaled to unit standard deviation (constant columns are left at zero
    after centering); the parameters are kept on the returned Dataset.  With
    ``add_intercept`` a penalized column of ones is appended after
    standardization.
    """
    X = _read_numeric_csv(path_X)
    y = _read_numeric_csv(path_y)
    if y.ndim == 2:
        if y.shape[1] != 1:
            raise ParseError(f"{path_y}: expected a single response column, got {y.shape[1]}")
        y = y[:, 0]
    if y.shape[0] != X.shape[0]:
        raise DimensionMismatch(
            f"X has {X.shape[0]} rows but y has {y.shape[0]} entries"
        )
    means = sds = None
    if standardize:
        means = X.mean(axis=0)
        sds = X.std(axis=0, ddof=0)
        safe = np.where(sds > 0, sds, 1.0)
        X = (X - means) / safe
    if add_intercept:
        X = np.hstack([X, np.ones((X.shape[0], 1))])
    ds = Dataset(X, y, family)
    ds.column_means = means
    ds.column_sds = sds
    return ds
