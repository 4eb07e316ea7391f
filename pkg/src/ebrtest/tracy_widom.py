"""Tracy-Widom distribution of order beta = 1 (GOE largest-eigenvalue law).

The distribution function is computed from the Painleve II representation.
Let q be the Hastings-McLeod solution of

    q''(s) = s * q(s) + 2 * q(s)**3,        q(s) ~ Ai(s)  as s -> +inf.

With the accumulated integrals

    V(s) = int_s^inf (x - s) * q(x)**2 dx      (so F2(s) = exp(-V(s)))
    J(s) = int_s^inf q(x) dx                   (so E(s)  = exp(-J(s)/2))

the order-1 CDF is F1(s) = E(s) * sqrt(F2(s)) = exp(-(V(s) + J(s)) / 2) and
its density follows by differentiation: f1(s) = F1(s) * (I(s) + q(s)) / 2
where I(s) = int_s^inf q(x)**2 dx.

A single initial-value sweep from the Airy boundary is numerically
ill-posed here: the linearization of the ODE about q has a mode growing
like exp((2*sqrt(2)/3)*|s|**1.5) to the left, so double-precision shooting
loses the solution near s = -6.  The solver therefore treats the problem
as a two-point boundary value problem: q = Ai at the right end, and the
left end pinned to the large-negative asymptote

    q(s) = sqrt(-s/2) * (1 + (1/8) s^-3 - (73/128) s^-6
                           + (10657/1024) s^-9 - (13912277/32768) s^-12),

with V, I, J carried as extra collocation states.  Both boundary layers
then damp into the interior instead of amplifying.  The converged solution
is sampled onto a dense grid that backs monotone (PCHIP) interpolation for
the CDF, survival function, and quantiles.  Survival values in the far
right tail are interpolated in log space so p-values keep relative
accuracy.

A built table is immutable and can be cached to a small text sidecar file
(versioned header line, then ``s,cdf,pdf`` rows in full precision).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.integrate import quad, solve_bvp
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq
from scipy.special import airy

TABLE_FORMAT_VERSION = 1

DEFAULT_S_MIN = -10.0
DEFAULT_S_MAX = 8.0
DEFAULT_STEP = 0.005

# Switch the survival function to log-space interpolation once the CDF
# exceeds this; the test's p-values live out there.
_SF_LOG_THRESHOLD = 0.99

_Q_BLOWUP = 50.0


class TableConstructionError(RuntimeError):
    """Raised when the Painleve integration or a table invariant fails."""


@dataclass
class PainleveSolution:
    """Hastings-McLeod solution sampled on a descending grid."""

    s_grid: np.ndarray
    q_values: np.ndarray
    q_prime_values: np.ndarray


@dataclass
class TwTable:
    """Dense (s, F1(s), f1(s)) samples backing CDF/quantile interpolation."""

    s_grid: np.ndarray
    cdf_values: np.ndarray
    pdf_values: np.ndarray
    s_min: float
    s_max: float
    _cdf_ip: PchipInterpolator = field(init=False, repr=False)
    _pdf_ip: PchipInterpolator = field(init=False, repr=False)
    _logsf_ip: PchipInterpolator = field(init=False, repr=False)
    _tail_start: float = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self._cdf_ip = PchipInterpolator(self.s_grid, self.cdf_values, extrapolate=False)
        self._pdf_ip = PchipInterpolator(self.s_grid, self.pdf_values, extrapolate=False)
        tail = np.searchsorted(self.cdf_values, _SF_LOG_THRESHOLD)
        tail = min(tail, len(self.s_grid) - 2)
        sf_tail = 1.0 - self.cdf_values[tail:]
        self._logsf_ip = PchipInterpolator(self.s_grid[tail:], np.log(sf_tail), extrapolate=False)
        self._tail_start = float(self.s_grid[tail])

    def cdf(self, s):
        """F1(s); clamps to 0 below s_min and to 1 above s_max."""
        arr = np.asarray(s, dtype=float)
        if arr.ndim == 0:
            return self._cdf_scalar(float(arr))
        return np.array([self._cdf_scalar(v) for v in arr.ravel()]).reshape(arr.shape)

    def _cdf_scalar(self, s: float) -> float:
        if s < self.s_min:
            return 0.0
        if s > self.s_max:
            return 1.0
        return float(np.clip(self._cdf_ip(s), 0.0, 1.0))

    def sf(self, s):
        """P(TW1 > s) = 1 - F1(s), log-interpolated in the right tail."""
        arr = np.asarray(s, dtype=float)
        if arr.ndim == 0:
            return self._sf_scalar(float(arr))
        return np.array([self._sf_scalar(v) for v in arr.ravel()]).reshape(arr.shape)

    def _sf_scalar(self, s: float) -> float:
        if s < self.s_min:
            return 1.0
        if s > self.s_max:
            return 0.0
        if s >= self._tail_start:
            return float(math.exp(self._logsf_ip(s)))
        return 1.0 - float(np.clip(self._cdf_ip(s), 0.0, 1.0))

    def pdf(self, s):
        """f1(s); zero outside the table support."""
        arr = np.asarray(s, dtype=float)
        if arr.ndim == 0:
            return self._pdf_scalar(float(arr))
        return np.array([self._pdf_scalar(v) for v in arr.ravel()]).reshape(arr.shape)

    def _pdf_scalar(self, s: float) -> float:
        if s < self.s_min or s > self.s_max:
            return 0.0
        return max(float(self._pdf_ip(s)), 0.0)

    def quantile(self, p: float) -> float:
        """s with |F1(s) - p| < 1e-6, by bracketed root finding."""
        if not 0.0 < p < 1.0:
            raise ValueError(f"quantile requires p in (0, 1), got {p}")
        lo, hi = float(self.cdf_values[0]), float(self.cdf_values[-1])
        if p <= lo:
            return float(self.s_min)
        if p >= hi:
            return float(self.s_max)
        root = brentq(lambda s: float(self._cdf_ip(s)) - p, self.s_min, self.s_max, xtol=1e-12)
        if abs(self.cdf(root) - p) >= 1e-6:
            raise TableConstructionError(f"quantile root did not converge at p={p}")
        return float(root)

    def moments(self) -> tuple[float, float]:
        """(mean, variance) by trapezoidal quadrature of the table density."""
        m1 = float(np.trapezoid(self.s_grid * self.pdf_values, self.s_grid))
        m2 = float(np.trapezoid(self.s_grid**2 * self.pdf_values, self.s_grid))
        return m1, m2 - m1 * m1


def _grid(s_min: float, s_max: float, step: float) -> np.ndarray:
    n = int(round((s_max - s_min) / step))
    grid = s_min + step * np.arange(n + 1)
    grid[-1] = s_max
    return grid


def _hm_left_asymptote(s: float) -> float:
    """Hastings-McLeod value from the s -> -inf series (s well below -8)."""
    u = s**-3
    return math.sqrt(-s / 2.0) * (
        1.0 + u / 8.0 - 73.0 / 128.0 * u**2 + 10657.0 / 1024.0 * u**3 - 13912277.0 / 32768.0 * u**4
    )


def _airy_tail_integrals(s0: float) -> tuple[float, float, float]:
    """Closed forms for (V, I, J) at the right boundary.

    V = int_s0^inf (x - s0) Ai^2 dx, I = int_s0^inf Ai^2 dx,
    J = int_s0^inf Ai dx; the first two follow from antiderivatives of
    Airy products, the third by adaptive quadrature (scipy's itairy is
    unusable here: its absolute error is ~1e-6 already at x = 4).
    """
    ai, aip, _, _ = airy(s0)
    ai = float(ai)
    aip = float(aip)
    i0 = aip**2 - s0 * ai**2
    v0 = (2.0 / 3.0) * s0**2 * ai**2 - (2.0 / 3.0) * s0 * aip**2 - ai * aip / 3.0
    j0, _ = quad(lambda t: float(airy(t)[0]), s0, s0 + 25.0, epsabs=0.0, epsrel=1e-12)
    return v0, i0, j0


def solve_painleve_ii(
    s_min: float = DEFAULT_S_MIN,
    s_max: float = DEFAULT_S_MAX,
    step: float = DEFAULT_STEP,
    tol: float = 1e-11,
) -> tuple[PainleveSolution, np.ndarray, np.ndarray, np.ndarray]:
    """Solve q'' = s q + 2 q^3 with Airy right / asymptotic left boundaries.

    Returns the solution sampled on the descending grid together with the
    accumulated integrals (V, I, J) defined in the module docstring.  The
    boundary values at s_max use closed forms for the Airy tail integrals,
    so the only truncations are the Airy and left asymptotes themselves.
    """
    ai_right = float(airy(s_max)[0])
    v0, i0, j0 = _airy_tail_integrals(s_max)
    q_left = _hm_left_asymptote(s_min)

    def fun(x, y):
        q, qp, _v, i_acc, _j = y
        return np.vstack((qp, x * q + 2.0 * q**3, -i_acc, -q * q, -q))

    def bc(ya, yb):
        return np.array(
            [
                ya[0] - q_left,
                yb[0] - ai_right,
                yb[2] - v0,
                yb[3] - i0,
                yb[4] - j0,
            ]
        )

    mesh = _grid(s_min, s_max, min(4.0 * step, 0.02))
    guess = np.empty((5, mesh.size))
    ai_mesh, aip_mesh, _, _ = airy(mesh)
    # Smooth positive blend of the two asymptotic regimes.
    q_guess = np.sqrt(ai_mesh**2 + np.maximum(-mesh, 0.0) / 2.0)
    guess[0] = q_guess
    guess[1] = (ai_mesh * aip_mesh - 0.25 * (mesh < 0)) / q_guess
    # Crude right-to-left accumulations are enough to start Newton.
    rev = slice(None, None, -1)
    qr = q_guess[rev]
    xr = mesh[rev]
    guess[3] = (-np.concatenate(([0.0], np.cumsum(np.diff(xr) * (qr[1:] ** 2 + qr[:-1] ** 2) / 2)))
                + i0)[rev]
    guess[4] = (-np.concatenate(([0.0], np.cumsum(np.diff(xr) * (qr[1:] + qr[:-1]) / 2))) + j0)[rev]
    ir = guess[3][rev]
    guess[2] = (-np.concatenate(([0.0], np.cumsum(np.diff(xr) * (ir[1:] + ir[:-1]) / 2))) + v0)[rev]

    sol = solve_bvp(fun, bc, mesh, guess, tol=tol, max_nodes=500_000)
    if sol.status != 0:
        worst = float(sol.x[int(np.argmax(sol.rms_residuals))]) if sol.x.size else s_max
        raise TableConstructionError(
            f"Painleve collocation did not converge (worst residual near s = {worst:.4f}): {sol.message}"
        )

    grid_desc = _grid(s_min, s_max, step)[::-1].copy()
    q, qp, v, i_acc, j = sol.sol(grid_desc)
    if np.any(np.abs(q) > _Q_BLOWUP):
        worst = float(grid_desc[int(np.argmax(np.abs(q)))])
        raise TableConstructionError(f"Painleve solution diverged near s = {worst:.6f}")
    pain = PainleveSolution(s_grid=grid_desc, q_values=q, q_prime_values=qp)
    return pain, v, i_acc, j


def build_tw1_table(
    s_min: float = DEFAULT_S_MIN,
    s_max: float = DEFAULT_S_MAX,
    step: float = DEFAULT_STEP,
) -> TwTable:
    """Build the TW1 table on [s_min, s_max] with the given grid step."""
    if not s_min < -8.0:
        raise ValueError(f"s_min must be < -8, got {s_min}")
    if not s_max > 6.0:
        raise ValueError(f"s_max must be > 6, got {s_max}")
    if not 0.0 < step <= 0.01:
        raise ValueError(f"step must be in (0, 0.01], got {step}")

    pain, v, i_acc, j = solve_painleve_ii(s_min, s_max, step)
    if np.any(pain.q_values <= 0.0):
        worst = float(pain.s_grid[np.argmin(pain.q_values)])
        raise TableConstructionError(f"Hastings-McLeod solution lost positivity near s = {worst:.6f}")

    cdf_desc = np.exp(-(v + j) / 2.0)
    pdf_desc = cdf_desc * (i_acc + pain.q_values) / 2.0

    # Ascending order for interpolation.
    s = pain.s_grid[::-1].copy()
    cdf = cdf_desc[::-1].copy()
    pdf = pdf_desc[::-1].copy()

    table = TwTable(s_grid=s, cdf_values=cdf, pdf_values=pdf, s_min=float(s[0]), s_max=float(s[-1]))
    _validate_table(table)
    return table


def _validate_table(table: TwTable) -> None:
    s, cdf, pdf = table.s_grid, table.cdf_values, table.pdf_values
    if not np.all(np.diff(s) > 0):
        raise TableConstructionError("table grid is not strictly increasing")
    if not np.all(np.diff(cdf) >= 0):
        raise TableConstructionError("table CDF is not non-decreasing")
    if not (cdf[0] < 1e-8 and cdf[-1] > 1.0 - 1e-8):
        raise TableConstructionError(
            f"table CDF tails out of bounds: F({s[0]:g}) = {cdf[0]:.3e}, F({s[-1]:g}) = {cdf[-1]:.17g}"
        )
    if np.any(pdf < 0):
        raise TableConstructionError("table density has negative values")
    mass = float(np.trapezoid(pdf, s))
    if not 0.999 <= mass <= 1.001:
        raise TableConstructionError(f"table density mass {mass:.6f} outside [0.999, 1.001]")


# ---------------------------------------------------------------------------
# Sidecar cache
# ---------------------------------------------------------------------------


def _header(s_min: float, s_max: float, step: float) -> str:
    return (
        f"# ebrtest-tw1-table v{TABLE_FORMAT_VERSION} "
        f"s_min={s_min!r} s_max={s_max!r} step={step!r}"
    )


def save_table(table: TwTable, path: Path | str, step: float) -> None:
    """Write the table as a versioned text sidecar (rows: s,cdf,pdf)."""
    path = Path(path)
    lines = [_header(table.s_min, table.s_max, step)]
    for s, c, p in zip(table.s_grid, table.cdf_values, table.pdf_values):
        lines.append(f"{float(s)!r},{float(c)!r},{float(p)!r}")
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="ascii")


def load_table(path: Path | str, s_min: float, s_max: float, step: float) -> TwTable | None:
    """Load a cached table; None when missing or parameters/version differ."""
    path = Path(path)
    if not path.is_file():
        return None
    with path.open(encoding="ascii") as fh:
        header = fh.readline().rstrip("\n")
        if header != _header(s_min, s_max, step):
            return None
        rows = np.loadtxt(fh, delimiter=",", ndmin=2)
    expected = _grid(s_min, s_max, step)
    if rows.shape != (expected.size, 3) or not np.array_equal(rows[:, 0], expected):
        return None
    table = TwTable(
        s_grid=rows[:, 0],
        cdf_values=rows[:, 1],
        pdf_values=rows[:, 2],
        s_min=float(rows[0, 0]),
        s_max=float(rows[-1, 0]),
    )
    _validate_table(table)
    return table


def default_cache_path(s_min: float, s_max: float, step: float) -> Path:
    base = os.environ.get("EBRTEST_CACHE_DIR")
    root = Path(base) if base else Path.home() / ".cache" / "ebrtest"
    return root / f"tw1_v{TABLE_FORMAT_VERSION}_{s_min!r}_{s_max!r}_{step!r}.csv"


def load_or_build_table(
    s_min: float = DEFAULT_S_MIN,
    s_max: float = DEFAULT_S_MAX,
    step: float = DEFAULT_STEP,
    cache_path: Path | str | None = None,
) -> TwTable:
    """Return the TW1 table, reusing the sidecar cache when it matches."""
    path = Path(cache_path) if cache_path is not None else default_cache_path(s_min, s_max, step)
    table = load_table(path, s_min, s_max, step)
    if table is None:
        table = build_tw1_table(s_min, s_max, step)
        save_table(table, path, step)
    return table
