"""Monte Carlo power study: rejection rates over a (DGP x n x m) grid.

Each grid cell runs R independent replications.  Replication r of cell c
draws its data from the stream keyed (master_seed, cell_key(c), r, "dgp")
and seeds the test's padding stream from (master_seed, cell_key(c), r,
"test"), so results are independent of execution order and worker count,
and adding cells never perturbs the draws of existing cells.

Also provides the correlation diagnostics (pairwise Pearson, Kendall
tau-b, and Spearman across units, pooled over replications) and the
long-format per-figure data emitter.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.stats import rankdata
from threadpoolctl import threadpool_limits

from .dgp import DgpSpec, generate
from .ebr import EbrConfig, ebr_test
from .meta import DESIGN, __version__, design_fingerprint
from .rngstream import derive_seed, stream
from .svg import line_chart
from .tracy_widom import TwTable

DEFAULT_N_VALUES = (30, 50, 100)
DEFAULT_M_VALUES = (15, 20, 50)

FIGURE_CASES = ("ar1", "linear_csd", "nonmono")


@dataclass(frozen=True)
class ExperimentGrid:
    """Cross product of DGP templates and panel shapes, with run settings."""

    dgp_specs: tuple[DgpSpec, ...]
    master_seed: int
    n_values: tuple[int, ...] = DEFAULT_N_VALUES
    m_values: tuple[int, ...] = DEFAULT_M_VALUES
    replications: int = 1000
    alpha: float = 0.05
    padding_reps: int = 1

    def __post_init__(self) -> None:
        if not self.dgp_specs:
            raise ValueError("grid needs at least one DGP")
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")
        cells = [(s.label(), n, m) for s in self.dgp_specs for n in self.n_values for m in self.m_values]
        if len(set(cells)) != len(cells):
            raise ValueError("grid enumerates some (dgp, n, m) combination more than once")

    def cells(self) -> list[tuple[DgpSpec, int, int]]:
        return [(s, n, m) for s in self.dgp_specs for n in self.n_values for m in self.m_values]


@dataclass(frozen=True)
class PowerRow:
    kind: str
    param_name: str | None
    param_value: float | None
    n: int
    m: int
    rejections: int
    replications: int

    @property
    def power(self) -> float:
        return self.rejections / self.replications

    @property
    def mc_stderr(self) -> float:
        p = self.power
        return float(np.sqrt(p * (1.0 - p) / self.replications))


@dataclass(frozen=True)
class PowerReport:
    rows: tuple[PowerRow, ...]
    metadata: dict = field(hash=False)

    def to_dict(self) -> dict:
        return {
            "metadata": self.metadata,
            "rows": [
                {
                    "kind": r.kind,
                    "param_name": r.param_name,
                    "param_value": r.param_value,
                    "n": r.n,
                    "m": r.m,
                    "rejections": r.rejections,
                    "replications": r.replications,
                    "power": r.power,
                    "mc_stderr": r.mc_stderr,
                }
                for r in self.rows
            ],
        }


def cell_key(spec: DgpSpec, n: int, m: int) -> str:
    return f"{spec.label()}|n={n}|m={m}"


def _run_cell(args) -> tuple[int, int]:
    index, spec, n, m, grid = args
    bound = spec.with_shape(n, m)
    key = cell_key(spec, n, m)
    rejections = 0
    with threadpool_limits(limits=1):
        for r in range(grid.replications):
            try:
                E = generate(bound, stream(grid.master_seed, key, r, "dgp"))
                cfg = EbrConfig(
                    seed=derive_seed(grid.master_seed, key, r, "test"),
                    alpha=grid.alpha,
                    padding_reps=grid.padding_reps,
                )
                result = ebr_test(E, cfg, _run_cell.table)
            except Exception as exc:
                raise RuntimeError(f"replication {r} of cell {key} failed: {exc}") from exc
            rejections += result.reject
    return index, rejections


def _init_worker(table: TwTable) -> None:
    _run_cell.table = table


def run_grid(grid: ExperimentGrid, table: TwTable, workers: int = 1) -> PowerReport:
    """Estimate rejection rates for every cell of the grid.

    The report is a pure function of (grid, table): re-runs are identical,
    regardless of ``workers``.
    """
    cells = grid.cells()
    tasks = [(i, spec, n, m, grid) for i, (spec, n, m) in enumerate(cells)]
    if workers <= 1:
        _init_worker(table)
        outcomes = [_run_cell(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker, initargs=(table,)) as pool:
            outcomes = list(pool.map(_run_cell, tasks))
    rejections = dict(outcomes)
    rows = tuple(
        PowerRow(
            kind=spec.kind,
            param_name=spec.param_name,
            param_value=spec.param_value,
            n=n,
            m=m,
            rejections=rejections[i],
            replications=grid.replications,
        )
        for i, (spec, n, m) in enumerate(cells)
    )
    metadata = {
        "master_seed": grid.master_seed,
        "alpha": grid.alpha,
        "replications": grid.replications,
        "padding_reps": grid.padding_reps,
        "n_values": list(grid.n_values),
        "m_values": list(grid.m_values),
        "cases": [s.label() for s in grid.dgp_specs],
        "version": __version__,
        "design_fingerprint": design_fingerprint(),
        "design": dict(DESIGN),
    }
    return PowerReport(rows=rows, metadata=metadata)


# ---------------------------------------------------------------------------
# Correlation diagnostics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CorrelationSummary:
    """Pooled lower-triangle correlation statistics across unit pairs."""

    pearson_mean: float
    pearson_sd: float
    kendall_mean: float
    kendall_sd: float
    spearman_mean: float
    spearman_sd: float
    excluded_pairs: int
    replications: int

    def to_dict(self) -> dict:
        return {
            "pearson_mean": self.pearson_mean,
            "pearson_sd": self.pearson_sd,
            "kendall_mean": self.kendall_mean,
            "kendall_sd": self.kendall_sd,
            "spearman_mean": self.spearman_mean,
            "spearman_sd": self.spearman_sd,
            "excluded_pairs": self.excluded_pairs,
            "replications": self.replications,
        }


def kendall_tau_b_matrix(X: np.ndarray) -> np.ndarray:
    """All pairwise Kendall tau-b values between rows of X, with ties.

    Uses the sign-matrix identity: with D_u[s, t] = sign(x_u[s] - x_u[t]),
    the concordant-minus-discordant count for a row pair is half the
    Frobenius inner product of their sign matrices, and the tie-corrected
    denominator is the geometric mean of each row's strictly-ordered pair
    counts.  Equivalent to scipy's kendalltau(variant="b") per pair but
    computed for all pairs at once.
    """
    X = np.asarray(X, dtype=float)
    n, m = X.shape
    D = np.sign(X[:, :, None] - X[:, None, :]).reshape(n, m * m)
    pq = D @ D.T / 2.0
    ordered = np.count_nonzero(D, axis=1) / 2.0
    denom = np.sqrt(np.outer(ordered, ordered))
    with np.errstate(invalid="ignore", divide="ignore"):
        return pq / denom


def pairwise_correlation_values(X: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    """Lower-triangle Pearson/Kendall/Spearman values over unit pairs.

    Pairs involving a constant unit series have no defined correlation and
    are excluded; the count of excluded pairs is returned.
    """
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    if n < 2:
        raise ValueError("need at least two units")
    constant = np.array([np.all(row == row[0]) for row in X])
    excluded = 0
    if constant.any():
        kept = int((~constant).sum())
        total_pairs = n * (n - 1) // 2
        excluded = total_pairs - kept * (kept - 1) // 2
        X = X[~constant]
        if X.shape[0] < 2:
            return np.array([]), np.array([]), np.array([]), excluded
    tri = np.tril_indices(X.shape[0], k=-1)
    pearson = np.corrcoef(X)[tri]
    spearman = np.corrcoef(rankdata(X, axis=1))[tri]
    kendall = kendall_tau_b_matrix(X)[tri]
    return pearson, kendall, spearman, excluded


def correlation_summary(spec: DgpSpec, reps: int, master_seed: int) -> CorrelationSummary:
    """Pooled pairwise correlation statistics over ``reps`` panel draws."""
    if spec.n_units is None or spec.m_periods is None:
        raise ValueError("DgpSpec must have n_units and m_periods set; use with_shape()")
    if spec.n_units < 3:
        raise ValueError("need at least 3 units for a nonempty lower triangle")
    key = f"corr|{cell_key(spec, spec.n_units, spec.m_periods)}"
    pearson, kendall, spearman = [], [], []
    excluded = 0
    for r in range(reps):
        E = generate(spec, stream(master_seed, key, r, "dgp"))
        p, k, s, ex = pairwise_correlation_values(E.values)
        pearson.append(p)
        kendall.append(k)
        spearman.append(s)
        excluded += ex
    pearson = np.concatenate(pearson)
    kendall = np.concatenate(kendall)
    spearman = np.concatenate(spearman)
    return CorrelationSummary(
        pearson_mean=float(pearson.mean()),
        pearson_sd=float(pearson.std()),
        kendall_mean=float(kendall.mean()),
        kendall_sd=float(kendall.std()),
        spearman_mean=float(spearman.mean()),
        spearman_sd=float(spearman.std()),
        excluded_pairs=excluded,
        replications=reps,
    )


# ---------------------------------------------------------------------------
# Serialization and figure data
# ---------------------------------------------------------------------------


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_report_csv(report: PowerReport, path: Path | str) -> None:
    path = Path(path)
    lines = [f"# {key}={json.dumps(value, sort_keys=True)}" for key, value in sorted(report.metadata.items())]
    lines.append("kind,param_name,param_value,n,m,rejections,replications,power,mc_stderr")
    for r in report.rows:
        lines.append(
            ",".join(
                _fmt(v)
                for v in (
                    r.kind, r.param_name, r.param_value, r.n, r.m,
                    r.rejections, r.replications, r.power, r.mc_stderr,
                )
            )
        )
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_report_json(report: PowerReport, path: Path | str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")


def emit_figure_data(
    report: PowerReport,
    case: str,
    out_dir: Path | str,
    svg: bool = False,
) -> list[Path]:
    """Write the long-format plot dataset (and optional SVG) for one case.

    Rows are taken verbatim from the report; nothing is recomputed.
    """
    if case not in FIGURE_CASES:
        raise ValueError(f"unknown figure case {case!r}; expected one of {FIGURE_CASES}")
    rows = [r for r in report.rows if r.kind == case]
    if not rows:
        available = sorted({r.kind for r in report.rows})
        raise ValueError(f"report has no {case!r} rows; available cases: {available}")

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"figure_{case}.csv"
    lines = [f"# seed={report.metadata['master_seed']} alpha={report.metadata['alpha']} "
             f"version={report.metadata['version']} fingerprint={report.metadata['design_fingerprint']}"]
    lines.append("param_value,n,m,power,mc_stderr")
    for r in rows:
        lines.append(",".join(_fmt(v) for v in (r.param_value, r.n, r.m, r.power, r.mc_stderr)))
    csv_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    written = [csv_path]

    if svg:
        svg_path = out_dir / f"figure_{case}.svg"
        if case == "nonmono":
            # No parameter: power against n, one series per m.
            series = []
            for m in sorted({r.m for r in rows}):
                pts = sorted((r.n, r.power) for r in rows if r.m == m)
                series.append((f"m={m}", [p[0] for p in pts], [p[1] for p in pts]))
            x_label = "cross-sectional units n"
        else:
            param = rows[0].param_name
            series = []
            for n in sorted({r.n for r in rows}):
                for m in sorted({r.m for r in rows}):
                    pts = sorted((r.param_value, r.power) for r in rows if r.n == n and r.m == m)
                    series.append((f"n={n}, m={m}", [p[0] for p in pts], [p[1] for p in pts]))
            x_label = param
        line_chart(
            series,
            svg_path,
            title=f"rejection rate: {case}",
            x_label=x_label,
            y_label="power",
            y_range=(0.0, 1.0),
        )
        written.append(svg_path)
    return written
