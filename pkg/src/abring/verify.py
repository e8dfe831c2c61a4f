"""Gauge-independence and conductance-spectrum checks shared by the CLI and the tests."""

from __future__ import annotations

import cmath
import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from . import closed_form as cf
from .errors import SingularPoint
from .oracle import solve_scattering
from .ring import (
    FERMI_K,
    Momentum,
    RingConfig,
    asymmetric_allocation,
    random_allocation,
    symmetric_allocation,
)
from .spectra import SweepSpec, asymmetry_metric, run_sweep

SPREAD_TOL = 1e-9
PHASE_TOL = 1e-12
UNITARITY_TOL = 1e-10


def draw_config(rng: np.random.Generator, hermitian: bool = False, Gamma: float = 0.1):
    """One random ring: levels in [-1, 1], gain/loss in [-0.5, 0.5], any flux, k in (0.1, pi-0.1)."""
    eu, ed = rng.uniform(-1.0, 1.0, 2)
    gu, gd = (0.0, 0.0) if hermitian else rng.uniform(-0.5, 0.5, 2)
    phi = rng.uniform(0.0, 2 * math.pi)
    k = rng.uniform(0.1, math.pi - 0.1)
    cfg = RingConfig.from_gamma(Gamma, complex(eu, gu), complex(ed, gd), phi)
    return cfg, Momentum(k, cfg.t0)


@dataclass
class GaugeReport:
    trials: int
    max_spread: float = 0.0
    max_phase_error: float = 0.0
    max_unitarity_defect: Optional[float] = None
    singular_draws: int = 0
    allocations_identical: Optional[bool] = None
    worst_trial: int = -1

    @property
    def passed(self) -> bool:
        ok = self.max_spread <= SPREAD_TOL and self.max_phase_error <= PHASE_TOL
        if self.max_unitarity_defect is not None:
            ok = ok and self.max_unitarity_defect <= UNITARITY_TOL
        return ok

    def to_dict(self):
        d = asdict(self)
        d["passed"] = self.passed
        return d


def gauge_check(trials: int, seed: int, hermitian: bool = False,
                base: Optional[RingConfig] = None, k: float = FERMI_K) -> GaugeReport:
    """Compare T across symmetric, asymmetric and random gauges, oracle and closed forms.

    With ``base`` given, the physical parameters stay fixed and only the random
    gauge changes between trials.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    rep = GaugeReport(trials=trials)
    all_hermitian = True
    zero_flux = True
    identical = True
    unit = 0.0
    for n in range(trials):
        if base is None:
            cfg, m = draw_config(rng, hermitian)
        else:
            cfg, m = base, Momentum(k, base.t0)
        alloc_seed = int(rng.integers(2 ** 32))
        a_sym = symmetric_allocation(cfg)
        a_asym = asymmetric_allocation(cfg)
        a_rnd = random_allocation(cfg, alloc_seed)
        sols = [solve_scattering(cfg, a, m) for a in (a_sym, a_asym, a_rnd)]
        Ts = [s.T for s in sols]
        try:
            tau_s = cf.tau_symmetric(cfg, m)
            tau_a = cf.tau_asymmetric(cfg, m)
            Ts += [cf.transmission_T(cfg, m).T, abs(tau_s) ** 2, abs(tau_a) ** 2,
                   abs(cf.tau_general(cfg, a_rnd, m)) ** 2]
            err = abs(tau_a - cmath.exp(-0.5j * cfg.phi) * tau_s)
            rep.max_phase_error = max(rep.max_phase_error, err)
        except SingularPoint:
            rep.singular_draws += 1
        top = max(Ts)
        spread = (top - min(Ts)) / top if top > 0 else 0.0
        if spread > rep.max_spread:
            rep.max_spread, rep.worst_trial = spread, n
        if cfg.is_hermitian:
            unit = max(unit, abs(sols[0].T + sols[0].R - 1.0))
        else:
            all_hermitian = False
        if cfg.phi == 0.0:
            identical = identical and a_sym == a_asym and sols[0].T == sols[1].T
        else:
            zero_flux = False
    if all_hermitian:
        rep.max_unitarity_defect = unit
    if zero_flux:
        rep.allocations_identical = identical
    return rep


# Representative (gamma_u, gamma_d) per panel, one panel per gain/loss regime.
FIG2_PANELS = {
    "a": (0.0, 0.0),
    "b": (0.02, 0.0),
    "c": (0.05, -0.02),
    "d": (0.05, -0.05),
}
FIG2_PHIS = (("0", 0.0), ("0.5pi", 0.5 * math.pi), ("pi", math.pi))


@dataclass
class Panel:
    name: str
    gamma_u: float
    gamma_d: float
    curves: dict = field(default_factory=dict)  # flux label -> SpectrumTable


@dataclass
class Check:
    name: str
    passed: bool
    value: float
    threshold: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}  value={self.value:.6g}  ({self.threshold})"


def fig2_panels(points: int = 2001, span: float = 1.0, Gamma: float = 0.1,
                engine: str = "closed_form") -> list[Panel]:
    """Conductance vs common dot level at the band centre for each panel and flux."""
    panels = []
    for name, (gu, gd) in FIG2_PANELS.items():
        p = Panel(name, gu, gd)
        for label, phi in FIG2_PHIS:
            cfg = RingConfig.from_gamma(Gamma, complex(0.0, gu), complex(0.0, gd), phi)
            spec = SweepSpec("epsilon_common", -span, span, points, cfg, FERMI_K, engine)
            p.curves[label] = run_sweep(spec)
        panels.append(p)
    return panels


def fig2_checks(panels: list[Panel]) -> list[Check]:
    """Qualitative statements about the conductance spectra, one check each."""
    checks = []
    for p in panels:
        hermitian = p.gamma_u == 0 and p.gamma_d == 0
        if hermitian:
            for label, tb in p.curves.items():
                v = asymmetry_metric(tb)
                checks.append(Check(f"panel {p.name}: symmetric spectrum at phi={label} without gain/loss",
                                    v <= 1e-8, v, "asymmetry <= 1e-8"))
            v = float(np.nanmax(np.abs(p.curves["pi"].G)))
            checks.append(Check(f"panel {p.name}: zero conductance at phi=pi without gain/loss",
                                v <= 1e-12, v, "max G <= 1e-12"))
        elif p.gamma_u != p.gamma_d:
            v = asymmetry_metric(p.curves["0.5pi"])
            checks.append(Check(f"panel {p.name}: asymmetric Fano lineshape at phi=0.5pi",
                                v > 0.1, v, "asymmetry > 0.1"))
        if not hermitian:
            v = asymmetry_metric(p.curves["pi"])
            checks.append(Check(f"panel {p.name}: symmetric Lorentzian at phi=pi",
                                v <= 1e-8, v, "asymmetry <= 1e-8"))
        if p.gamma_u != 0 and p.gamma_u == -p.gamma_d:
            tb = p.curves["0"]
            i = int(np.nanargmin(tb.G))
            v = float(tb.G[i])
            at_zero = abs(tb.x[i]) <= 0.5 * (tb.x[1] - tb.x[0])
            checks.append(Check(f"panel {p.name}: balanced gain/loss, phi=0 dip reaches zero at eps=0",
                                at_zero and v <= 1e-10, v, "min G <= 1e-10 at eps=0"))
            vmax = max(float(np.nanmax(t.G)) for t in p.curves.values())
            checks.append(Check(f"panel {p.name}: conductance exceeds 2e^2/h with gain/loss",
                                vmax > 1.0, vmax, "max G > 1"))
    return checks
