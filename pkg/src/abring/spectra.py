"""Parameter sweeps and lineshape analysis of the ring conductance.

A sweep varies one parameter on a uniform grid and records transmission,
conductance (units of 2e^2/h, equal to T) and both scattering amplitudes.
Points where a closed form is singular are handed to the linear-system
oracle and flagged.

Lineshape tools operate on the resulting :class:`SpectrumTable`: interior
extrema, a reflection-asymmetry measure and a least-squares fit to the
standard Fano profile ``(e + q)**2 / (e**2 + 1)``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Optional

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from . import closed_form as cf
from .errors import EmptyResult, FitDiverged, SingularPoint, SolveFailure
from .oracle import solve_scattering
from .ring import (
    FERMI_K,
    Momentum,
    RingConfig,
    asymmetric_allocation,
    momentum_from_energy,
    random_allocation,
    symmetric_allocation,
)

__all__ = [
    "SweepSpec",
    "SpectrumTable",
    "Extremum",
    "FanoFit",
    "VARIABLES",
    "ENGINES",
    "ALLOCATIONS",
    "grid",
    "PointResult",
    "evaluate",
    "evaluate_point",
    "run_sweep",
    "find_extrema",
    "refine_minimum",
    "asymmetry_metric",
    "fano_profile",
    "fit_fano",
]

VARIABLES = ("epsilon_common", "omega", "phi", "gamma_u", "gamma_d")
ENGINES = ("closed_form", "oracle", "both")
ALLOCATIONS = ("symmetric", "asymmetric", "random")

# Differences below this (relative to the curve maximum) count as flat.
_FLAT_RTOL = 1e-12
_FLAT_ATOL = 1e-20
# Beyond this |q| a fitted profile is reported as a Lorentzian with q -> -1/q.
Q_FLIP = 1e8


@dataclass(frozen=True)
class SweepSpec:
    """One-dimensional sweep over ``variable`` on ``points`` uniform steps."""

    variable: str
    start: float
    stop: float
    points: int
    config: RingConfig = field(default_factory=RingConfig)
    k: float = FERMI_K
    engine: str = "closed_form"
    allocation: str = "symmetric"
    seed: int = 0

    def __post_init__(self):
        if self.variable not in VARIABLES:
            raise ValueError(f"variable must be one of {VARIABLES}, got {self.variable!r}")
        if self.engine not in ENGINES:
            raise ValueError(f"engine must be one of {ENGINES}, got {self.engine!r}")
        if self.allocation not in ALLOCATIONS:
            raise ValueError(f"allocation must be one of {ALLOCATIONS}, got {self.allocation!r}")
        if isinstance(self.points, bool) or int(self.points) != self.points or self.points < 2:
            raise ValueError(f"points must be an integer >= 2, got {self.points!r}")
        if not (math.isfinite(self.start) and math.isfinite(self.stop) and self.start < self.stop):
            raise ValueError(f"need finite start < stop, got {self.start!r}, {self.stop!r}")
        if self.variable != "omega":
            Momentum(self.k, self.config.t0)


@dataclass
class SpectrumTable:
    """Sweep results in grid order."""

    spec: SweepSpec
    x: np.ndarray
    T: np.ndarray
    tau: np.ndarray
    r: np.ndarray
    singular: np.ndarray
    discrepancy: Optional[np.ndarray] = None

    @property
    def G(self) -> np.ndarray:
        return self.T

    def __len__(self):
        return len(self.x)

    @property
    def max_discrepancy(self) -> float:
        if self.discrepancy is None:
            return float("nan")
        d = self.discrepancy[~self.singular]
        return float(np.max(d)) if d.size else 0.0

    def rows(self):
        for i in range(len(self.x)):
            row = (float(self.x[i]), float(self.T[i]), float(self.T[i]),
                   self.tau[i].real, self.tau[i].imag, self.r[i].real, self.r[i].imag,
                   bool(self.singular[i]))
            if self.discrepancy is not None:
                row += (float(self.discrepancy[i]),)
            yield row


class Extremum(NamedTuple):
    position: float
    value: float
    kind: str
    index: int


@dataclass(frozen=True)
class FanoFit:
    """Best fit of ``background + amplitude * (e + q)**2 / (e**2 + 1)``, ``e = (x - center)/width``.

    ``amplitude`` is positive except for pure Lorentzian peaks, which are
    returned with ``q = 0`` and negative amplitude rather than ``q = inf``.
    ``q_energy = q * width`` is the asymmetry in the units of the swept axis.
    """

    q: float
    center: float
    width: float
    amplitude: float
    background: float
    rms_residual: float

    @property
    def q_energy(self) -> float:
        return self.q * self.width

    def model(self, x):
        return fano_profile(x, self.q, self.center, self.width, self.amplitude, self.background)


def grid(spec: SweepSpec) -> np.ndarray:
    """Uniform grid including both ends; symmetric ranges hit 0 exactly at the midpoint."""
    n = int(spec.points)
    return spec.start + (spec.stop - spec.start) * (np.arange(n) / (n - 1))


def _point_setup(spec: SweepSpec, x: float):
    cfg, k = spec.config, spec.k
    v = spec.variable
    if v == "epsilon_common":
        cfg = replace(cfg, E_u=complex(x, cfg.E_u.imag), E_d=complex(x, cfg.E_d.imag))
    elif v == "phi":
        cfg = replace(cfg, phi=x)
    elif v == "gamma_u":
        cfg = replace(cfg, E_u=complex(cfg.E_u.real, x))
    elif v == "gamma_d":
        cfg = replace(cfg, E_d=complex(cfg.E_d.real, x))
    if v == "omega":
        m = momentum_from_energy(cfg, x)
    else:
        m = Momentum(k, cfg.t0)
    if spec.allocation == "symmetric":
        alloc = symmetric_allocation(cfg)
    elif spec.allocation == "asymmetric":
        alloc = asymmetric_allocation(cfg)
    else:
        alloc = random_allocation(cfg, spec.seed)
    return cfg, alloc, m


_NAN_C = complex(math.nan, math.nan)


class PointResult(NamedTuple):
    T: float
    tau: complex
    r: complex
    singular: bool
    discrepancy: float


def evaluate(cfg: RingConfig, alloc, m: Momentum, engine: str = "closed_form") -> PointResult:
    """Transmission and amplitudes at one parameter point.

    ``closed_form`` falls back to the oracle where a closed form is singular
    and flags the point; ``both`` reports closed-form values plus the
    absolute ``T`` discrepancy against the oracle.

    Raises :class:`SolveFailure` if the oracle is needed and fails.
    """
    closed = None
    if engine != "oracle":
        try:
            closed = (cf.transmission_T(cfg, m).T,
                      cf.tau_general(cfg, alloc, m),
                      cf.r_general(cfg, alloc, m))
        except SingularPoint:
            closed = None
    oracle = None
    if engine != "closed_form" or closed is None:
        oracle = solve_scattering(cfg, alloc, m)
    if closed is None:
        # engine == "oracle", or the closed form refused this point
        return PointResult(oracle.T, oracle.tau_RL, oracle.r_LL,
                           oracle.singular or engine != "oracle", math.nan)
    disc = abs(closed[0] - oracle.T) if oracle is not None else math.nan
    return PointResult(closed[0], closed[1], closed[2], False, disc)


def evaluate_point(spec: SweepSpec, x: float) -> PointResult:
    """:func:`evaluate` at one swept value; solver failures become a NaN, flagged row."""
    cfg, alloc, m = _point_setup(spec, x)
    try:
        return evaluate(cfg, alloc, m, spec.engine)
    except SolveFailure:
        return PointResult(math.nan, _NAN_C, _NAN_C, True, math.nan)


def _default_workers() -> int:
    env = os.environ.get("ABRING_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def run_sweep(spec: SweepSpec, workers: Optional[int] = None) -> SpectrumTable:
    """Evaluate ``spec`` at every grid point.

    Points are independent; with ``workers > 1`` they are evaluated on a
    thread pool (capped by ``ABRING_THREADS`` by default) and reassembled in
    grid order, so the table is identical either way.
    """
    xs = grid(spec)
    workers = _default_workers() if workers is None else max(1, int(workers))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda v: evaluate_point(spec, float(v)), xs))
    else:
        results = [evaluate_point(spec, float(v)) for v in xs]
    T = np.array([r[0] for r in results], dtype=float)
    tau = np.array([r[1] for r in results], dtype=complex)
    rr = np.array([r[2] for r in results], dtype=complex)
    sing = np.array([r[3] for r in results], dtype=bool)
    disc = np.array([r[4] for r in results], dtype=float) if spec.engine == "both" else None
    return SpectrumTable(spec=spec, x=xs, T=T, tau=tau, r=rr, singular=sing, discrepancy=disc)


def _flat_tol(y: np.ndarray) -> float:
    finite = y[np.isfinite(y)]
    top = float(np.max(np.abs(finite))) if finite.size else 0.0
    return _FLAT_RTOL * top + _FLAT_ATOL


def _extrema(x: np.ndarray, y: np.ndarray) -> list[Extremum]:
    if len(y) < 3:
        raise ValueError("need at least 3 rows to look for extrema")
    tol = _flat_tol(y)
    out = []
    for i in range(1, len(y) - 1):
        y0, y1, y2 = y[i - 1], y[i], y[i + 1]
        if not (np.isfinite(y0) and np.isfinite(y1) and np.isfinite(y2)):
            continue
        left, right = y1 - y0, y2 - y1
        if left > tol and right < -tol:
            kind = "max"
        elif left < -tol and right > tol:
            kind = "min"
        else:
            continue
        h = x[i + 1] - x[i]
        curv = y0 - 2 * y1 + y2
        pos = x[i] + 0.5 * h * (y0 - y2) / curv
        val = y1 - (y0 - y2) ** 2 / (8 * curv)
        out.append(Extremum(float(pos), float(val), kind, i))
    return out


def find_extrema(table: SpectrumTable) -> list[Extremum]:
    """Interior extrema of G by three-point comparison, parabolically refined.

    Raises :class:`EmptyResult` for monotone or flat curves.
    """
    out = _extrema(np.asarray(table.x, float), np.asarray(table.G, float))
    if not out:
        raise EmptyResult("no interior extrema (monotone or flat curve)")
    return out


def refine_minimum(spec: SweepSpec, table: SpectrumTable, index: Optional[int] = None):
    """Polish a grid minimum of G with a bounded scalar search between its neighbours.

    Returns ``(position, value)``.  ``index`` defaults to the grid argmin.
    """
    G = np.asarray(table.G, float)
    i = int(np.nanargmin(G)) if index is None else int(index)
    lo = table.x[max(i - 1, 0)]
    hi = table.x[min(i + 1, len(G) - 1)]
    res = minimize_scalar(lambda v: evaluate_point(spec, float(v))[0], bounds=(lo, hi),
                          method="bounded", options={"xatol": 1e-14, "maxiter": 500})
    pos, val = float(res.x), float(res.fun)
    if G[i] < val:
        pos, val = float(table.x[i]), float(G[i])
    return pos, val


def asymmetry_metric(table: SpectrumTable) -> float:
    """Largest mismatch ``|G(x0 + d) - G(x0 - d)| / max G`` about the peak ``x0``.

    ``d`` runs over grid steps inside the table.  When several interior
    maxima share the top height (a symmetric double peak) the reflection
    axis is their midpoint.  Flat curves give 0.
    """
    G = np.asarray(table.G, float)
    gmax = float(np.nanmax(np.abs(G)))
    tol = _flat_tol(G)
    if np.nanmax(G) - np.nanmin(G) <= tol:
        return 0.0
    maxima = [e for e in _extrema(np.asarray(table.x, float), G) if e.kind == "max"]
    if not maxima:
        raise EmptyResult("no interior maximum")
    top = max(G[e.index] for e in maxima)
    tied = [e.index for e in maxima if G[e.index] >= top - 1e-9 * abs(top)]
    s = tied[0] + tied[-1]
    n = len(G)
    if s % 2 == 0:
        lo = hi = s // 2
    else:
        lo, hi = s // 2, s // 2 + 1
    worst = 0.0
    while lo >= 0 and hi < n:
        d = abs(G[hi] - G[lo])
        if np.isfinite(d):
            worst = max(worst, d)
        lo -= 1
        hi += 1
    return worst / gmax


def fano_profile(x, q, center, width, amplitude=1.0, background=0.0):
    """Standard Fano lineshape ``background + amplitude*(e + q)**2/(e**2 + 1)``."""
    e = (np.asarray(x, float) - center) / width
    return background + amplitude * (e + q) ** 2 / (e * e + 1)


def _linear_part(x, y, center, width):
    # Fano model = C + L/(e^2+1) + D e/(e^2+1), linear in (C, L, D)
    e = (x - center) / width
    d = 1.0 / (e * e + 1)
    M = np.column_stack((np.ones_like(x), d, e * d))
    coef, *_ = np.linalg.lstsq(M, y, rcond=None)
    return coef, y - M @ coef


def _to_fano(C, L, D):
    # L + iD = A (q + i)^2.  A > 0 by default, so arg(q + i) is half of arg(L + iD).
    # A pure Lorentzian peak sends q to infinity; past Q_FLIP the same curve is
    # returned in its finite form q' = -1/q with negative amplitude.
    z = complex(L, D)
    if abs(z) == 0.0:
        raise FitDiverged("fit found no resonant component")
    for sign in (1.0, -1.0):
        theta = math.atan2(sign * D, sign * L) % (2 * math.pi)
        s = math.sin(theta / 2)
        if s != 0.0:
            q = math.cos(theta / 2) / s
            if sign < 0 or abs(q) <= Q_FLIP:
                A = sign * abs(z) * s * s
                return q, A, C - A
    return 0.0, -abs(z), C + abs(z)


def fit_fano(table: SpectrumTable, width_scale: Optional[float] = None,
             maxiter: int = 10_000) -> FanoFit:
    """Least-squares fit of the standard Fano profile to G(x).

    The centre and width are found by Nelder-Mead simplex descent; for each
    trial pair the background, amplitude and ``q`` enter linearly and are
    solved exactly.  Up to eight starts are placed at the detected extrema
    with widths ``{Gamma, 4 Gamma}`` and both orientations ``q = +-1``.

    Raises
    ------
    FitDiverged
        If no start converges within ``maxiter`` iterations or the best rms
        residual exceeds 10% of the range of G.
    """
    x = np.asarray(table.x, float)
    y = np.asarray(table.G, float)
    ok = np.isfinite(y)
    x, y = x[ok], y[ok]
    if len(x) < 20:
        raise ValueError("fit_fano needs at least 20 finite rows")
    span = float(np.max(y) - np.min(y))
    if span <= _flat_tol(y):
        raise ValueError("fit_fano needs a non-constant curve")
    if width_scale is None:
        width_scale = table.spec.config.Gamma if table.spec is not None else (x[-1] - x[0]) / 20

    try:
        ext = _extrema(x, y)
    except ValueError:
        ext = []
    med = float(np.median(y))
    ext.sort(key=lambda e: -abs(e.value - med))
    seeds = [(e.position, e.kind) for e in ext]
    seeds += [(float(x[np.argmax(y)]), "max"), (float(x[np.argmin(y)]), "min")]
    uniq = []
    for p, kind in seeds:
        if all(abs(p - u[0]) > 1e-12 or kind != u[1] for u in uniq):
            uniq.append((p, kind))
    starts = []
    for p, kind in uniq[:2]:
        for w in (width_scale, 4 * width_scale):
            for q in (1.0, -1.0):
                # a q-profile peaks at e = 1/q and vanishes at e = -q
                c = p - w / q if kind == "max" else p + w * q
                starts.append((c, w))

    scale = float(np.sum(y * y)) or 1.0

    def objective(p):
        w = math.exp(p[1])
        _, res = _linear_part(x, y, p[0], w)
        return float(res @ res)

    best = None
    for c0, w0 in starts[:8]:
        lw = math.log(w0)
        simplex = np.array([[c0, lw], [c0 + 0.5 * w0, lw], [c0, lw + 0.5]])
        res = minimize(objective, np.array([c0, lw]), method="Nelder-Mead",
                       options={"maxiter": maxiter, "xatol": 1e-12, "fatol": 1e-15 * scale,
                                "initial_simplex": simplex})
        if not res.success:
            continue
        if best is None or res.fun < best.fun:
            best = res
    if best is None:
        raise FitDiverged(f"no start converged within {maxiter} iterations")
    center, width = float(best.x[0]), math.exp(float(best.x[1]))
    (C, L, D), resid = _linear_part(x, y, center, width)
    q, A, bg = _to_fano(C, L, D)
    rms = float(np.sqrt(np.mean(resid ** 2)))
    if rms > 0.1 * span:
        raise FitDiverged(f"rms residual {rms:.3e} exceeds 10% of the G range {span:.3e}")
    return FanoFit(q=q, center=center, width=width, amplitude=float(A), background=float(bg),
                   rms_residual=rms)
