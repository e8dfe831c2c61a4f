"""Ring-lead configuration and gauge allocations of the flux phase.

Two single-level dots (``u`` and ``d``) sit in the two arms of a ring that is
attached to semi-infinite tight-binding leads.  The magnetic flux enters only
through the phases of the four dot-lead tunneling amplitudes; any choice whose
loop product carries the total phase ``phi`` describes the same physics.

All energies are in units of the lead hopping ``t0``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NonPropagatingMode

__all__ = [
    "RingConfig",
    "GaugeAllocation",
    "Momentum",
    "symmetric_allocation",
    "asymmetric_allocation",
    "random_allocation",
    "dispersion",
    "momentum_from_energy",
    "wrap_phase",
    "FERMI_K",
]

# Momentum at the band centre, where omega = 0.
FERMI_K = math.pi / 2


def wrap_phase(x: float) -> float:
    """Reduce an angle to the interval (-pi, pi]."""
    y = math.remainder(x, 2 * math.pi)
    return math.pi if y == -math.pi else y


@dataclass(frozen=True)
class RingConfig:
    """Physical parameters of the ring and its leads.

    Parameters
    ----------
    t0 : float
        Nearest-neighbour hopping in the leads; sets the energy unit.
    t : float
        Modulus of every dot-lead tunneling amplitude.
    E_u, E_d : complex
        Dot levels ``eps + 1j*gamma``; a nonzero imaginary part is gain
        (``gamma > 0``) or loss (``gamma < 0``).
    phi : float
        Total flux phase threading the ring, in radians.  Used as given,
        never reduced modulo 2*pi.
    """

    t0: float = 1.0
    t: float = math.sqrt(0.1)
    E_u: complex = 0j
    E_d: complex = 0j
    phi: float = 0.0

    def __post_init__(self):
        for name in ("t0", "t"):
            v = float(getattr(self, name))
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be finite and > 0, got {v!r}")
            object.__setattr__(self, name, v)
        for name in ("E_u", "E_d"):
            v = complex(getattr(self, name))
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ValueError(f"{name} must be finite, got {v!r}")
            object.__setattr__(self, name, v)
        phi = float(self.phi)
        if not math.isfinite(phi):
            raise ValueError(f"phi must be finite, got {phi!r}")
        object.__setattr__(self, "phi", phi)
        if not (math.isfinite(self.Gamma) and self.Gamma > 0):
            raise ValueError("Gamma = t**2/t0 must be finite and positive")

    @classmethod
    def from_gamma(cls, Gamma: float, E_u: complex = 0j, E_d: complex = 0j,
                   phi: float = 0.0, t0: float = 1.0) -> "RingConfig":
        """Build a configuration from the level broadening ``Gamma = t**2/t0``."""
        if not (math.isfinite(Gamma) and Gamma > 0):
            raise ValueError(f"Gamma must be finite and > 0, got {Gamma!r}")
        return cls(t0=t0, t=math.sqrt(Gamma * t0), E_u=E_u, E_d=E_d, phi=phi)

    @classmethod
    def pt(cls, eps: float, gamma: float, Gamma: float = 0.1, phi: float = 0.0,
           t0: float = 1.0) -> "RingConfig":
        """Balanced gain/loss configuration ``E_u = eps + i gamma``, ``E_d = eps - i gamma``."""
        return cls.from_gamma(Gamma, complex(eps, gamma), complex(eps, -gamma), phi, t0)

    @property
    def Gamma(self) -> float:
        return self.t * self.t / self.t0

    @property
    def eps_u(self) -> float:
        return self.E_u.real

    @property
    def eps_d(self) -> float:
        return self.E_d.real

    @property
    def gamma_u(self) -> float:
        return self.E_u.imag

    @property
    def gamma_d(self) -> float:
        return self.E_d.imag

    @property
    def is_hermitian(self) -> bool:
        return self.E_u.imag == 0 and self.E_d.imag == 0

    def is_pt(self, tol: float = 1e-12) -> bool:
        """True when ``E_u`` and ``E_d`` are complex conjugates of each other."""
        scale = max(1.0, abs(self.E_u), abs(self.E_d))
        return abs(self.E_u - self.E_d.conjugate()) <= tol * scale


@dataclass(frozen=True)
class GaugeAllocation:
    """The four dot-lead tunneling amplitudes for one choice of gauge."""

    t_uL: complex
    t_uR: complex
    t_dL: complex
    t_dR: complex

    def __post_init__(self):
        for name in ("t_uL", "t_uR", "t_dL", "t_dR"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    def loop_product(self) -> complex:
        return self.t_uL * self.t_uR.conjugate() * self.t_dR * self.t_dL.conjugate()

    def loop_phase(self) -> float:
        """Flux enclosed by the allocation, in (-pi, pi]."""
        return wrap_phase(cmath.phase(self.loop_product()))

    def as_tuple(self) -> tuple[complex, complex, complex, complex]:
        return (self.t_uL, self.t_uR, self.t_dL, self.t_dR)


@dataclass(frozen=True)
class Momentum:
    """Propagating lead momentum ``0 < k < pi`` with its band energy."""

    k: float
    t0: float = field(default=1.0)

    def __post_init__(self):
        k = float(self.k)
        if not (0.0 < k < math.pi):
            raise NonPropagatingMode(f"k must lie strictly inside (0, pi), got {k!r}")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "t0", float(self.t0))

    @property
    def omega(self) -> float:
        return -2.0 * self.t0 * math.cos(self.k)


def symmetric_allocation(config: RingConfig) -> GaugeAllocation:
    """Spread the flux evenly, a quarter of ``phi`` on each bond."""
    t, q = config.t, config.phi / 4
    p, m = t * cmath.exp(1j * q), t * cmath.exp(-1j * q)
    return GaugeAllocation(t_uL=p, t_uR=m, t_dL=m, t_dR=p)


def asymmetric_allocation(config: RingConfig) -> GaugeAllocation:
    """Put the whole flux phase on the ``u``-left bond."""
    t = config.t
    return GaugeAllocation(t_uL=t * cmath.exp(1j * config.phi), t_uR=t, t_dL=t, t_dR=t)


def random_allocation(config: RingConfig, seed: int) -> GaugeAllocation:
    """Random gauge: three uniform phases, the fourth fixed by the loop flux."""
    rng = np.random.default_rng(seed)
    th_uL, th_uR, th_dL = (float(x) for x in rng.uniform(0.0, 2 * math.pi, 3))
    th_dR = config.phi - th_uL + th_uR + th_dL
    t = config.t
    return GaugeAllocation(
        t_uL=t * cmath.exp(1j * th_uL),
        t_uR=t * cmath.exp(1j * th_uR),
        t_dL=t * cmath.exp(1j * th_dL),
        t_dR=t * cmath.exp(1j * th_dR),
    )


def dispersion(config: RingConfig, k: float) -> Momentum:
    """Lead momentum ``k`` with band energy ``omega = -2 t0 cos k``."""
    return Momentum(k=k, t0=config.t0)


def momentum_from_energy(config: RingConfig, omega: float) -> Momentum:
    """Inverse of :func:`dispersion` for energies inside the open band."""
    x = -omega / (2.0 * config.t0)
    if not (-1.0 < x < 1.0):
        raise NonPropagatingMode(f"omega={omega!r} lies outside the open band (-2 t0, 2 t0)")
    return Momentum(k=math.acos(x), t0=config.t0)
