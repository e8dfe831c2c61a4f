"""Closed-form scattering amplitudes for the two-dot ring.

Every function evaluates an analytic expression as printed, with no further
simplification, so that agreement with :mod:`abring.oracle` certifies the
transcription.  Where a denominator vanishes the functions raise
:class:`~abring.errors.SingularPoint`; the oracle is the authority there.

Notation: ``w`` is the band energy ``-2 t0 cos k``, ``Gamma = t**2/t0`` and
``A = t_uL t_dR - t_dL t_uR``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

from .errors import InfiniteQ, SingularPoint
from .ring import FERMI_K, GaugeAllocation, Momentum, RingConfig

__all__ = [
    "TransmissionResult",
    "FanoParameters",
    "SINGULAR_TOL",
    "tau_general",
    "r_general",
    "tau_symmetric",
    "tau_asymmetric",
    "transmission_T",
    "transmission_pt",
    "tau_fermi",
    "conductance_fano_form",
    "fano_parameters",
]

SINGULAR_TOL = 1e-12


@dataclass(frozen=True)
class TransmissionResult:
    """Transmission probability; ``G`` is in units of 2e^2/h and equals ``T``."""

    tau: Optional[complex]
    T: float

    @property
    def G(self) -> float:
        return self.T


@dataclass(frozen=True)
class FanoParameters:
    q: float
    alpha: Optional[float] = None


def _checked_div(num, terms, what: str):
    den = sum(terms)
    scale = max([1.0] + [abs(x) for x in terms])
    if abs(den) <= SINGULAR_TOL * scale:
        raise SingularPoint(f"{what}: denominator {abs(den):.3e} vanishes (scale {scale:.3e})")
    return num / den


def _tau_general(config: RingConfig, alloc: GaugeAllocation, m: Momentum) -> complex:
    t0, Eu, Ed = config.t0, config.E_u, config.E_d
    uL, uR, dL, dR = alloc.as_tuple()
    c = complex.conjugate
    w = m.omega
    e1 = cmath.exp(-1j * m.k)
    e2 = cmath.exp(-2j * m.k)
    A = uL * dR - dL * uR
    num = ((w - Eu) * e1 * t0 * c(dL) * dR + (w - Ed) * e1 * t0 * c(uL) * uR) * (e2 - 1)
    terms = (
        A * (c(dL) * c(uR) - c(uL) * c(dR)),
        -(w - Eu) * e1 * t0 * (abs(dL) ** 2 + abs(dR) ** 2),
        -(w - Ed) * e1 * t0 * (abs(uR) ** 2 + abs(uL) ** 2),
        -(w - Eu) * (w - Ed) * e2 * t0 ** 2,
    )
    return _checked_div(num, terms, "tau_general")


def tau_general(config: RingConfig, alloc: GaugeAllocation, m: Momentum) -> complex:
    """Transmission amplitude ``tau_RL`` for an arbitrary gauge allocation."""
    return _tau_general(config, alloc, m)


def r_general(config: RingConfig, alloc: GaugeAllocation, m: Momentum) -> complex:
    """Reflection amplitude ``r_LL``, built on top of :func:`tau_general`."""
    tau = _tau_general(config, alloc, m)
    t0, Eu = config.t0, config.E_u
    uL, uR, dL, dR = alloc.as_tuple()
    c = complex.conjugate
    w = m.omega
    e1 = cmath.exp(-1j * m.k)
    e2 = cmath.exp(-2j * m.k)
    A = uL * dR - dL * uR
    num = -A * c(uL) * e2 - (w - Eu) * e1 * t0 * dR - (A * c(uR) - (w - Eu) * e1 * t0 * dL) * tau
    terms = (A * c(uL), (w - Eu) * e1 * t0 * dR)
    return _checked_div(num, terms, "r_general")


def _b_terms(config: RingConfig, m: Momentum):
    G, Eu, Ed, w = config.Gamma, config.E_u, config.E_d, m.omega
    return (
        (w - Eu) * (w - Ed) * cmath.exp(-1j * m.k),
        2 * G * (w - Eu),
        2 * G * (w - Ed),
        4 * G ** 2 * cmath.exp(1j * m.k) * math.sin(config.phi / 2) ** 2,
    )


def tau_symmetric(config: RingConfig, m: Momentum) -> complex:
    """Transmission amplitude when the flux is split evenly over the four bonds."""
    G, Eu, Ed, w, phi = config.Gamma, config.E_u, config.E_d, m.omega, config.phi
    num = -((w - Eu) * cmath.exp(0.5j * phi) + (w - Ed) * cmath.exp(-0.5j * phi)) \
        * (cmath.exp(-2j * m.k) - 1) * G
    return _checked_div(num, _b_terms(config, m), "tau_symmetric")


def tau_asymmetric(config: RingConfig, m: Momentum) -> complex:
    """Transmission amplitude when the whole flux sits on the ``u``-left bond.

    Differs from :func:`tau_symmetric` only by the phase ``exp(-i phi/2)``.
    """
    G, Eu, Ed, w, phi = config.Gamma, config.E_u, config.E_d, m.omega, config.phi
    num = -((w - Eu) + (w - Ed) * cmath.exp(-1j * phi)) * (cmath.exp(-2j * m.k) - 1) * G
    return _checked_div(num, _b_terms(config, m), "tau_asymmetric")


def transmission_T(config: RingConfig, m: Momentum) -> TransmissionResult:
    """Gauge-independent transmission probability ``T = |tau|**2``.

    The bracket is the four-term interference sum over the two arms; ``T``
    may exceed one when the dot levels are complex.
    """
    G, Eu, Ed, w, phi = config.Gamma, config.E_u, config.E_d, m.omega, config.phi
    c = complex.conjugate
    terms = _b_terms(config, m)
    B = sum(terms)
    scale = max([1.0] + [abs(x) for x in terms])
    if abs(B) <= SINGULAR_TOL * scale:
        raise SingularPoint(f"transmission_T: |B| = {abs(B):.3e} vanishes")
    bracket = ((w - Eu) * (w - c(Eu))
               + (w - Eu) * (w - c(Ed)) * cmath.exp(1j * phi)
               + (w - c(Eu)) * (w - Ed) * cmath.exp(-1j * phi)
               + (w - Ed) * (w - c(Ed)))
    T = 4 * G ** 2 * math.sin(m.k) ** 2 * bracket.real / abs(B) ** 2
    tau = tau_symmetric(config, m)
    return TransmissionResult(tau=tau, T=T)


def transmission_pt(config: RingConfig, m: Momentum, form: str = "symmetric") -> float:
    """Transmission for balanced gain/loss, ``E_u = eps + i gamma = conj(E_d)``.

    ``form`` names the gauge the expression was derived in; both give the same
    result, which is the point.
    """
    if form not in ("symmetric", "asymmetric"):
        raise ValueError(f"form must be 'symmetric' or 'asymmetric', got {form!r}")
    if not config.is_pt():
        raise ValueError("transmission_pt requires E_u = eps + i*gamma and E_d = eps - i*gamma")
    G, phi, w = config.Gamma, config.phi, m.omega
    eps, gamma = config.E_u.real, config.E_u.imag
    x = w - eps
    terms = (
        (x ** 2 + gamma ** 2) * cmath.exp(-1j * m.k),
        4 * G * x,
        4 * G ** 2 * cmath.exp(1j * m.k) * math.sin(phi / 2) ** 2,
    )
    B = sum(terms)
    scale = max([1.0] + [abs(v) for v in terms])
    if abs(B) <= SINGULAR_TOL * scale:
        raise SingularPoint(f"transmission_pt: |B| = {abs(B):.3e} vanishes")
    bracket = (2 * (x ** 2 + gamma ** 2) + 2 * math.cos(phi) * x ** 2
               + 4 * gamma * math.sin(phi) * x - 2 * gamma ** 2 * math.cos(phi))
    return 4 * G ** 2 * math.sin(m.k) ** 2 * bracket / abs(B) ** 2


def tau_fermi(config: RingConfig) -> complex:
    """Transmission amplitude at the band centre (``k = pi/2``, ``omega = 0``)."""
    G, Eu, Ed, phi = config.Gamma, config.E_u, config.E_d, config.phi
    num = -1j * 2 * G * (Eu * cmath.exp(0.5j * phi) + Ed * cmath.exp(-0.5j * phi))
    terms = ((Eu - 2j * G) * (Ed - 2j * G), 4 * G ** 2 * math.cos(phi / 2) ** 2)
    return _checked_div(num, terms, "tau_fermi")


def _alpha(epsilon: float, gamma: float, phi: float, Gamma: float) -> float:
    return (epsilon ** 2 - (4 * Gamma ** 2 * math.sin(phi / 2) ** 2 - gamma ** 2)) / (4 * Gamma)


def conductance_fano_form(epsilon: float, gamma: float, phi: float, Gamma: float) -> float:
    """Band-centre conductance (units of 2e^2/h) for balanced gain/loss.

    Uses ``(eps cos(phi/2) - gamma sin(phi/2))**2 / (eps**2 + alpha**2)``,
    which equals ``cos(phi/2)**2 (eps - gamma tan(phi/2))**2 / (eps**2 + alpha**2)``
    but stays finite at ``phi = pi``.
    """
    alpha = _alpha(epsilon, gamma, phi, Gamma)
    num = (epsilon * math.cos(phi / 2) - gamma * math.sin(phi / 2)) ** 2
    den = epsilon ** 2 + alpha ** 2
    if den == 0.0:
        raise SingularPoint("conductance_fano_form: eps = alpha = 0")
    return num / den


def fano_parameters(gamma: float, phi: float, epsilon: Optional[float] = None,
                    Gamma: Optional[float] = None) -> FanoParameters:
    """Asymmetry ``q = -gamma tan(phi/2)``; ``alpha`` too when ``epsilon`` and ``Gamma`` are given.

    Raises :class:`InfiniteQ` at ``phi = pi (mod 2 pi)``, where the lineshape
    is a plain Lorentzian.
    """
    half = phi / 2
    if abs(math.cos(half)) < 1e-12:
        raise InfiniteQ(f"q diverges at phi = {phi!r} (Lorentzian limit)")
    q = -gamma * math.tan(half)
    alpha = None
    if epsilon is not None and Gamma is not None:
        alpha = _alpha(epsilon, gamma, phi, Gamma)
    return FanoParameters(q=q, alpha=alpha)


def fermi_momentum(config: RingConfig) -> Momentum:
    return Momentum(k=FERMI_K, t0=config.t0)
