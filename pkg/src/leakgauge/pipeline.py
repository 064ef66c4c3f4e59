"""Pattern-length scans, batch evaluation and table rendering."""

from __future__ import annotations

import csv
import io
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Mapping, Sequence

from . import datasets
from .anonymity import DEFAULT_EQ_TOL, Direction, assess_pair
from .data_io import SymbolicSeries, series_from_csv, synth_random_ints
from .errors import DataError, LeakGaugeError
from .perm_entropy import DEFAULT_PLATEAU_TOL, EntropyCurve, optimal_pattern_length
from .randomizers import RandomizerConfig, blatant_ramp, randomize

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

log = logging.getLogger(__name__)

AUTO = "auto"
SCAN_RANGE = (2, 12)


def scan(series: SymbolicSeries, n_min: int = 2, n_max: int = 12, plateau_tol: float = DEFAULT_PLATEAU_TOL) -> EntropyCurve:
    return optimal_pattern_length(series, n_min, n_max, plateau_tol)


@dataclass(frozen=True)
class DatasetSpec:
    """One evaluation entry: where the data comes from and how to randomize it.

    Exactly one of ``path`` (CSV, reduced to 1-D), ``synth`` (keys
    count/lo/hi/seed) or ``standin`` (a known dataset name) is set.
    """

    name: str
    randomizer: RandomizerConfig
    pattern_length: int | str = AUTO
    path: str | None = None
    column: str | None = None
    reduce: str | None = None
    synth: Mapping[str, int] | None = None
    standin: str | None = None
    standin_seed: int = 0

    def load(self) -> SymbolicSeries:
        sources = [s for s in (self.path, self.synth, self.standin) if s is not None]
        if len(sources) != 1:
            raise DataError(f"dataset {self.name!r}: give exactly one of path, synth, standin")
        if self.path is not None:
            return series_from_csv(self.path, column=self.column, method=self.reduce)
        if self.synth is not None:
            s = dict(self.synth)
            try:
                return synth_random_ints(int(s["count"]), int(s.get("lo", 1)), int(s.get("hi", 100)), int(s.get("seed", 0)))
            except KeyError as exc:
                raise DataError(f"dataset {self.name!r}: synth spec lacks {exc}") from None
        return datasets.standin(self.standin, self.standin_seed)


@dataclass(frozen=True)
class AssessmentRow:
    dataset_name: str
    scenario: str
    d1: float
    d2: float
    m: int
    n: int
    gamma: float
    r1: float
    epsilon: float
    direction: Direction
    clamped: bool = False
    flags: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        out = asdict(self)
        out["direction"] = self.direction.value
        out["flags"] = list(self.flags)
        return out


@dataclass
class Evaluation:
    rows: list[AssessmentRow] = field(default_factory=list)
    failures: list[tuple[str, str]] = field(default_factory=list)

    def __iter__(self):
        return iter(self.rows)

    def __len__(self) -> int:
        return len(self.rows)


def _rows_for(spec: DatasetSpec, eq_tol: float, n_range: tuple[int, int], plateau_tol: float) -> list[AssessmentRow]:
    original = spec.load()
    if spec.pattern_length == AUTO:
        hi = min(n_range[1], original.N)
        n = optimal_pattern_length(original, n_range[0], hi, plateau_tol).chosen_n
    else:
        n = int(spec.pattern_length)
    rows = []
    for scenario, out in (("private", randomize(original, spec.randomizer)), ("blatant", blatant_ramp(original))):
        r = assess_pair(original, out, n, eq_tol)
        rows.append(AssessmentRow(spec.name, scenario, r.d1, r.d2, original.N, n, r.gamma, r.r1, r.epsilon,
                                  r.direction, r.clamped, r.flags))
    return rows


def evaluate(
    specs: Sequence[DatasetSpec],
    eq_tol: float = DEFAULT_EQ_TOL,
    n_range: tuple[int, int] = SCAN_RANGE,
    plateau_tol: float = DEFAULT_PLATEAU_TOL,
    workers: int = 1,
) -> Evaluation:
    """Assess each dataset under its randomizer and under the blatant ramp.

    A dataset that fails is recorded in ``failures`` and the batch goes
    on. Rows come back in config order whatever ``workers`` is.
    """

    def one(spec):
        try:
            return spec, _rows_for(spec, eq_tol, n_range, plateau_tol), None
        except LeakGaugeError as exc:
            return spec, [], str(exc)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(one, specs))
    else:
        results = [one(s) for s in specs]
    ev = Evaluation()
    for spec, rows, err in results:
        if err is not None:
            log.warning("dataset %s failed: %s", spec.name, err)
            ev.failures.append((spec.name, err))
        ev.rows.extend(rows)
    return ev


def _spec_from_entry(entry: Mapping[str, Any], base: Path, defaults: Mapping[str, Any]) -> DatasetSpec:
    e = {**defaults, **entry}
    if "name" not in e:
        raise DataError("every [[dataset]] entry needs a name")
    cfg = RandomizerConfig(
        kind=e.get("randomizer", "exponential"),
        epsilon=float(e.get("epsilon", 0.337)),
        delta=e.get("delta", 0.1),
        sensitivity=float(e.get("sensitivity", 1.0)),
        candidate_bins=int(e.get("bins", 100)),
        seed=int(e.get("seed", 0)),
    )
    path = e.get("path")
    if path is not None and not Path(path).is_absolute():
        path = str(base / path)
    pl = e.get("pattern_length", AUTO)
    if pl != AUTO and not isinstance(pl, int):
        raise DataError(f"dataset {e['name']!r}: pattern_length must be an integer or \"auto\", got {pl!r}")
    return DatasetSpec(
        name=e["name"], randomizer=cfg, pattern_length=pl, path=path, column=e.get("column"),
        reduce=e.get("reduce"), synth=e.get("synth"), standin=e.get("standin"),
        standin_seed=int(e.get("standin_seed", 0)),
    )


@dataclass(frozen=True)
class EvaluationConfig:
    specs: tuple[DatasetSpec, ...]
    eq_tol: float = DEFAULT_EQ_TOL
    n_range: tuple[int, int] = SCAN_RANGE
    plateau_tol: float = DEFAULT_PLATEAU_TOL


def parse_config(text: str, base: str | Path = ".") -> EvaluationConfig:
    """Parse a TOML evaluation config.

    Top-level keys ``eq_tol``, ``n_min``, ``n_max``, ``plateau_tol`` are
    optional; a ``[defaults]`` table supplies per-dataset fallbacks.
    """
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise DataError(f"invalid TOML config: {exc}") from exc
    entries = doc.get("dataset", [])
    defaults = doc.get("defaults", {})
    specs = tuple(_spec_from_entry(e, Path(base), defaults) for e in entries)
    return EvaluationConfig(
        specs,
        eq_tol=float(doc.get("eq_tol", DEFAULT_EQ_TOL)),
        n_range=(int(doc.get("n_min", SCAN_RANGE[0])), int(doc.get("n_max", SCAN_RANGE[1]))),
        plateau_tol=float(doc.get("plateau_tol", DEFAULT_PLATEAU_TOL)),
    )


def load_config(path: str | Path) -> EvaluationConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"{path}: cannot read config: {exc.strerror or exc}") from exc
    return parse_config(text, base=path.parent)


# -- rendering -------------------------------------------------------------

COLUMNS = ("#", "dataset", "scenario", "rho1", "rho2", "m", "n", "gamma", "r1", "epsilon", "direction")


def _text_cells(i: int, r: AssessmentRow) -> list[str]:
    return [
        str(i), r.dataset_name, r.scenario, f"{r.d1:.3f}", f"{r.d2:.3f}", str(r.m), str(r.n),
        f"{r.gamma:.4g}", f"{r.r1:.4f}", f"{r.epsilon:.4f}", r.direction.value + (" *" if r.clamped else ""),
    ]


def render_text(rows: Sequence[AssessmentRow]) -> str:
    if not rows:
        return "(no rows)\n"
    body = [_text_cells(i, r) for i, r in enumerate(rows, start=1)]
    widths = [max(len(c) for c in col) for col in zip(COLUMNS, *body)]
    left = {"dataset", "scenario", "direction"}

    def line(cells):
        return "  ".join(c.ljust(w) if h in left else c.rjust(w) for h, c, w in zip(COLUMNS, cells, widths)).rstrip()

    out = [line(COLUMNS), "  ".join("-" * w for w in widths)]
    out += [line(cells) for cells in body]
    if any(r.clamped for r in rows):
        out.append("* a degree hit 0 or 1 and was clamped to compute gamma")
    return "\n".join(out) + "\n"


CSV_FIELDS = ("dataset", "scenario", "rho1", "rho2", "m", "n", "gamma", "r1", "epsilon", "direction", "clamped", "flags")


def render_csv(rows: Sequence[AssessmentRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in rows:
        w.writerow([r.dataset_name, r.scenario, repr(r.d1), repr(r.d2), r.m, r.n, repr(r.gamma), repr(r.r1),
                    repr(r.epsilon), r.direction.value, str(r.clamped).lower(), ";".join(r.flags)])
    return buf.getvalue()


def render_json(rows: Sequence[AssessmentRow], failures: Sequence[tuple[str, str]] = ()) -> str:
    doc = {"rows": [r.to_dict() for r in rows], "failures": [{"dataset": n, "error": e} for n, e in failures]}
    return json.dumps(doc, indent=2) + "\n"


def report(rows: Sequence[AssessmentRow], fmt: str = "text") -> str:
    if fmt == "text":
        return render_text(rows)
    if fmt == "csv":
        return render_csv(rows)
    if fmt == "json":
        return render_json(rows)
    raise DataError(f"unknown report format {fmt!r}")
