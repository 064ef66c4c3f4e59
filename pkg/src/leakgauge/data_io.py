"""CSV ingestion, ordinal encoding, 1-D reduction and synthetic data."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DataError

KINDS = ("numeric", "ordinal", "categorical")

POWER_ITER_TOL = 1e-10
POWER_ITER_MAX = 10_000


@dataclass(frozen=True)
class SymbolicSeries:
    """An ordered, totally ordered sequence of symbols.

    Order is significant: position ``i`` of a randomized series must
    correspond to position ``i`` of the original.
    """

    values: np.ndarray
    name: str = "value"

    def __post_init__(self):
        arr = np.asarray(self.values)
        if arr.ndim != 1:
            raise DataError(f"series must be one-dimensional, got shape {arr.shape}")
        if arr.size < 1:
            raise DataError("series must contain at least one value")
        if arr.dtype.kind not in "iuf":
            raise DataError(f"series values must be numeric ranks or numbers, got dtype {arr.dtype}")
        if arr.dtype.kind == "f" and not np.all(np.isfinite(arr)):
            raise DataError("series contains non-finite values")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @classmethod
    def of(cls, values: Iterable[float], name: str = "value") -> "SymbolicSeries":
        return cls(np.asarray(list(values)), name=name)

    @property
    def N(self) -> int:
        return int(self.values.size)

    def __len__(self) -> int:
        return self.N

    def __iter__(self):
        return iter(self.values.tolist())

    def to_csv(self) -> str:
        """One-column CSV with header ``value``; floats at full precision."""
        out = io.StringIO()
        out.write("value\n")
        for v in self.values.tolist():
            out.write(_format_cell(v))
            out.write("\n")
        return out.getvalue()

    def write_csv(self, path: str | Path) -> None:
        Path(path).write_text(self.to_csv(), encoding="utf-8")


def _format_cell(v) -> str:
    # repr round-trips floats exactly
    return repr(v) if isinstance(v, float) else str(v)


@dataclass(frozen=True)
class Column:
    name: str
    kind: str
    raw: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.raw)


@dataclass(frozen=True)
class Table:
    columns: tuple[Column, ...]
    source: str = "<memory>"
    _index: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise DataError(f"{self.source}: duplicate column names {dupes}")
        lengths = {len(c) for c in self.columns}
        if len(lengths) > 1:
            raise DataError(f"{self.source}: columns have differing row counts {sorted(lengths)}")
        self._index.update({c.name: c for c in self.columns})

    @property
    def m(self) -> int:
        return len(self.columns[0]) if self.columns else 0

    @property
    def names(self) -> list[str]:
        return [c.name for c in self.columns]

    def to_csv(self) -> str:
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(self.names)
        w.writerows(zip(*(c.raw for c in self.columns)))
        return out.getvalue()

    def column(self, name: str) -> Column:
        try:
            return self._index[name]
        except KeyError:
            raise DataError(f"{self.source}: no column named {name!r}; have {self.names}") from None

    @classmethod
    def from_columns(cls, data: Mapping[str, Sequence], kinds: Mapping[str, str] | None = None) -> "Table":
        """Build a table from in-memory columns; kinds are inferred unless given."""
        kinds = dict(kinds or {})
        cols = []
        for name, values in data.items():
            raw = tuple(_format_cell(v) if not isinstance(v, str) else v for v in values)
            cols.append(Column(name, kinds.get(name) or _infer_kind(raw), raw))
        return cls(tuple(cols))


def _parse_float(cell: str) -> float | None:
    try:
        x = float(cell)
    except ValueError:
        return None
    return x if math.isfinite(x) else None


def _infer_kind(cells: Sequence[str]) -> str:
    return "numeric" if all(_parse_float(c) is not None for c in cells) else "categorical"


def read_csv_text(text: str, schema: Mapping[str, str] | None = None, source: str = "<text>") -> Table:
    rows = list(csv.reader(io.StringIO(text)))
    # trailing blank lines are tolerated, blank lines inside the data are not
    while rows and not any(cell.strip() for cell in rows[-1]):
        rows.pop()
    if not rows:
        raise DataError(f"{source}: empty file (no header)")
    header = [h.strip() for h in rows[0]]
    body = rows[1:]
    if not body:
        raise DataError(f"{source}: empty data (header only)")
    if any(not h for h in header):
        raise DataError(f"{source}: header has an empty column name")
    width = len(header)
    for lineno, row in enumerate(body, start=2):
        if len(row) != width:
            raise DataError(f"{source}: row {lineno} has {len(row)} cells, header has {width}")
        for col, cell in zip(header, row):
            if cell.strip() == "":
                raise DataError(f"{source}: row {lineno}, column {col!r}: missing value")

    schema = dict(schema or {})
    unknown = set(schema) - set(header)
    if unknown:
        raise DataError(f"{source}: schema names unknown columns {sorted(unknown)}")
    columns = []
    for j, name in enumerate(header):
        raw = tuple(row[j].strip() for row in body)
        kind = schema.get(name) or _infer_kind(raw)
        if kind not in KINDS:
            raise DataError(f"{source}: column {name!r}: unknown kind {kind!r}")
        if kind == "numeric":
            for lineno, cell in enumerate(raw, start=2):
                if _parse_float(cell) is None:
                    raise DataError(f"{source}: row {lineno}, column {name!r}: {cell!r} is not a finite number")
        columns.append(Column(name, kind, raw))
    return Table(tuple(columns), source=source)


def load_csv(path: str | Path, schema: Mapping[str, str] | None = None) -> Table:
    """Read a comma-separated UTF-8 file with a mandatory header row.

    Column kinds are inferred (numeric when every cell parses as a finite
    number, categorical otherwise) unless overridden by ``schema``.
    Row order is preserved exactly.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8-sig")
    except OSError as exc:
        raise DataError(f"{path}: cannot read file: {exc.strerror or exc}") from exc
    except UnicodeDecodeError as exc:
        raise DataError(f"{path}: not valid UTF-8 ({exc.reason} at byte {exc.start})") from exc
    return read_csv_text(text, schema=schema, source=str(path))


def encode_ordinal(column: Column) -> SymbolicSeries:
    """Map a column onto comparable symbols.

    Numeric columns pass through as floats. Categorical and ordinal
    columns become the rank of each token within the lexicographically
    sorted set of distinct tokens.
    """
    if len(column) == 0:
        raise DataError(f"column {column.name!r} is empty")
    if column.kind == "numeric":
        values = [_parse_float(c) for c in column.raw]
        bad = [i for i, v in enumerate(values) if v is None]
        if bad:
            raise DataError(
                f"column {column.name!r}: mixed content, row {bad[0] + 2} value {column.raw[bad[0]]!r} is not numeric"
            )
        return SymbolicSeries(np.asarray(values, dtype=float), name=column.name)
    ranks = {tok: r for r, tok in enumerate(sorted(set(column.raw)))}
    return SymbolicSeries(np.fromiter((ranks[t] for t in column.raw), dtype=np.int64, count=len(column)), name=column.name)


def _dominant_eigenvector(cov: np.ndarray) -> np.ndarray:
    d = cov.shape[0]
    # start from the covariance column with the largest norm; never orthogonal
    # to the dominant eigenvector unless the matrix is zero
    norms = np.linalg.norm(cov, axis=0)
    v = cov[:, int(np.argmax(norms))].astype(float)
    v /= np.linalg.norm(v)
    for _ in range(POWER_ITER_MAX):
        w = cov @ v
        nw = np.linalg.norm(w)
        if nw == 0.0:
            break
        w /= nw
        # align sign before measuring the step so oscillation is not mistaken for drift
        if w @ v < 0:
            w = -w
        done = np.linalg.norm(w - v) < POWER_ITER_TOL
        v = w
        if done:
            break
    if d and abs(v.min()) > abs(v.max()):
        v = -v
    return v


def reduce_to_1d(table: Table, method: str = "pca", column: str | None = None) -> SymbolicSeries:
    """Project a table onto one value per row.

    ``method="pca"`` projects the centered encoded columns on the first
    principal component (power iteration on the covariance, sign fixed so
    the largest-magnitude loading is positive). ``method="column"`` passes
    a single named column through, which is how externally reduced data
    (e.g. a TSNE embedding) is fed in.
    """
    if method in ("column", "passthrough"):
        if column is None:
            if len(table.columns) != 1:
                raise DataError(f"{table.source}: passthrough needs a column name, table has {table.names}")
            column = table.columns[0].name
        return encode_ordinal(table.column(column))
    if method not in ("pca", "first-principal-component"):
        raise DataError(f"unknown reduction method {method!r}")
    if table.m < 2:
        raise DataError(f"{table.source}: need at least 2 rows to reduce, got {table.m}")
    X = np.column_stack([encode_ordinal(c).values.astype(float) for c in table.columns])
    Xc = X - X.mean(axis=0)
    cov = (Xc.T @ Xc) / (X.shape[0] - 1)
    if not np.any(np.diag(cov) > 0):
        raise DataError(f"{table.source}: zero-variance data, projection undefined")
    v = _dominant_eigenvector(cov)
    return SymbolicSeries(Xc @ v, name="pc1")


def synth_random_ints(count: int, lo: int, hi: int, seed: int) -> SymbolicSeries:
    """Uniform integers on the closed range [lo, hi], deterministic in ``seed``."""
    if count < 1:
        raise DataError(f"count must be positive, got {count}")
    if not lo < hi:
        raise DataError(f"need lo < hi, got lo={lo}, hi={hi}")
    rng = np.random.default_rng(np.uint64(seed))
    return SymbolicSeries(rng.integers(lo, hi, size=count, endpoint=True, dtype=np.int64), name="value")


def series_from_csv(path: str | Path, column: str | None = None, method: str | None = None) -> SymbolicSeries:
    """Load a CSV and reduce it to a single series.

    A one-column file (or an explicit ``column``) passes through; wider
    tables default to the first principal component.
    """
    table = load_csv(path)
    if method is None:
        method = "column" if (column is not None or len(table.columns) == 1) else "pca"
    return reduce_to_1d(table, method=method, column=column)
