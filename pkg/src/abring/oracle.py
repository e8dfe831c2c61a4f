"""Direct solution of the ring's stationary scattering problem.

An electron with momentum ``k`` comes in from the left lead.  Matching the
plane-wave ansatz in the leads to the Schroedinger equation on the two lead
sites next to the ring and on the two dots gives four linear equations in the
unknowns ``(r_LL, tau_RL, a_u, a_d)``.  They are solved here numerically for an
arbitrary gauge allocation, without reference to any closed-form amplitude,
so this module serves as the ground truth for :mod:`abring.closed_form`.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import NonPropagatingMode, SolveFailure
from .ring import GaugeAllocation, Momentum, RingConfig

__all__ = ["ScatteringSolution", "build_system", "solve_scattering", "gauss_solve",
           "PIVOT_TOL", "RESIDUAL_TOL"]

PIVOT_TOL = 1e-12
RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class ScatteringSolution:
    r_LL: complex
    tau_RL: complex
    a_u: complex
    a_d: complex
    residual: float
    singular: bool

    @property
    def T(self) -> float:
        return abs(self.tau_RL) ** 2

    @property
    def R(self) -> float:
        return abs(self.r_LL) ** 2


def build_system(config: RingConfig, alloc: GaugeAllocation, m: Momentum):
    """Coefficient matrix and right-hand side, unknowns ordered (r, tau, a_u, a_d).

    Rows, top to bottom::

        -t0 r            + t_uL a_u + t_dL a_d            = t0
                -t0 tau  + t_uR a_u + t_dR a_d            = 0
        t_uL* r + t_uR* tau + (w - E_u) e^{-ik} a_u       = -t_uL* e^{-2ik}
        t_dL* r + t_dR* tau             + (w - E_d) e^{-ik} a_d = -t_dL* e^{-2ik}
    """
    if not isinstance(m, Momentum):
        raise NonPropagatingMode("momentum must be a validated Momentum")
    t0 = config.t0
    uL, uR, dL, dR = alloc.as_tuple()
    w = m.omega
    e1 = cmath.exp(-1j * m.k)
    e2 = cmath.exp(-2j * m.k)
    M = np.array(
        [
            [-t0, 0, uL, dL],
            [0, -t0, uR, dR],
            [uL.conjugate(), uR.conjugate(), (w - config.E_u) * e1, 0],
            [dL.conjugate(), dR.conjugate(), 0, (w - config.E_d) * e1],
        ],
        dtype=complex,
    )
    b = np.array([t0, 0, -uL.conjugate() * e2, -dL.conjugate() * e2], dtype=complex)
    return M, b


def gauss_solve(M, b, pivot_tol: float = PIVOT_TOL):
    """Gaussian elimination with partial pivoting on a small dense system.

    Returns ``(x, ok)``; ``ok`` is False when a pivot falls below
    ``pivot_tol * max|M_ij|``, in which case ``x`` is None.
    """
    A = [list(map(complex, row)) for row in M]
    x = list(map(complex, b))
    n = len(A)
    scale = max(abs(v) for row in A for v in row)
    if scale == 0.0:
        return None, False
    thresh = pivot_tol * scale
    for c in range(n):
        p = max(range(c, n), key=lambda i: abs(A[i][c]))
        if abs(A[p][c]) < thresh:
            return None, False
        if p != c:
            A[c], A[p] = A[p], A[c]
            x[c], x[p] = x[p], x[c]
        piv = A[c][c]
        for i in range(c + 1, n):
            f = A[i][c] / piv
            if f:
                Ai, Ac = A[i], A[c]
                for j in range(c + 1, n):
                    Ai[j] -= f * Ac[j]
                x[i] -= f * x[c]
    for c in range(n - 1, -1, -1):
        s = x[c]
        for j in range(c + 1, n):
            s -= A[c][j] * x[j]
        x[c] = s / A[c][c]
    return x, True


def solve_scattering(config: RingConfig, alloc: GaugeAllocation, m: Momentum,
                     pivot_tol: float = PIVOT_TOL,
                     residual_tol: float = RESIDUAL_TOL) -> ScatteringSolution:
    """Reflection, transmission and dot amplitudes for left incidence.

    A rank-deficient system (both dots on resonance with zero effective flux)
    still fixes ``r`` and ``tau`` uniquely; only the split between the dot
    amplitudes is free.  There the minimum-norm least-squares solution is
    returned and ``singular`` is set.

    Raises
    ------
    NonPropagatingMode
        If ``m`` is not a propagating momentum.
    SolveFailure
        If the residual exceeds ``residual_tol * max(1, |b|_inf)``.
    """
    M, b = build_system(config, alloc, m)
    x, ok = gauss_solve(M, b, pivot_tol)
    if ok:
        x = np.array(x)
        singular = False
    else:
        x = np.linalg.lstsq(M, b, rcond=pivot_tol)[0]
        singular = True
    residual = float(np.max(np.abs(M @ x - b)))
    bound = residual_tol * max(1.0, float(np.max(np.abs(b))))
    if not np.all(np.isfinite(x)) or residual > bound:
        raise SolveFailure(f"residual {residual:.3e} exceeds {bound:.3e} (singular={singular})")
    r, tau, a_u, a_d = (complex(v) for v in x)
    return ScatteringSolution(r_LL=r, tau_RL=tau, a_u=a_u, a_d=a_d,
                              residual=residual, singular=singular)
