import cmath
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from abring.errors import NonPropagatingMode
from abring.ring import (
    GaugeAllocation,
    Momentum,
    RingConfig,
    asymmetric_allocation,
    dispersion,
    momentum_from_energy,
    random_allocation,
    symmetric_allocation,
    wrap_phase,
)

PHIS = st.floats(min_value=-20, max_value=20, allow_nan=False)
TS = st.floats(min_value=1e-3, max_value=10, allow_nan=False)


def loop_residual(alloc, phi):
    return abs(wrap_phase(alloc.loop_phase() - phi))


def test_config_validation():
    with pytest.raises(ValueError):
        RingConfig(t0=0.0)
    with pytest.raises(ValueError):
        RingConfig(t=-1.0)
    with pytest.raises(ValueError):
        RingConfig(E_u=complex(math.inf, 0))
    with pytest.raises(ValueError):
        RingConfig.from_gamma(0.0)


def test_gamma_derived():
    c = RingConfig(t0=2.0, t=0.5)
    assert c.Gamma == pytest.approx(0.125)
    c = RingConfig.from_gamma(0.1)
    assert c.Gamma == pytest.approx(0.1, rel=1e-15)


def test_pt_constructor():
    c = RingConfig.pt(0.2, 0.05)
    assert c.E_u == complex(0.2, 0.05) and c.E_d == complex(0.2, -0.05)
    assert c.is_pt() and not c.is_hermitian


def test_symmetric_zero_flux():
    a = symmetric_allocation(RingConfig(t=1.0, phi=0.0))
    assert a.as_tuple() == (1, 1, 1, 1)


def test_symmetric_half_flux_quantum():
    a = symmetric_allocation(RingConfig(t=1.0, phi=math.pi))
    q = cmath.exp(1j * math.pi / 4)
    assert a.t_uL == pytest.approx(q)
    assert a.t_dL == pytest.approx(q.conjugate())
    assert a.t_uR == pytest.approx(q.conjugate())
    assert a.t_dR == pytest.approx(q)


def test_symmetric_loop_phase_quarter_turn():
    a = symmetric_allocation(RingConfig(t=0.5, phi=math.pi / 2))
    assert a.loop_phase() == pytest.approx(math.pi / 2, abs=1e-15)


def test_asymmetric_examples():
    assert asymmetric_allocation(RingConfig(t=1.0, phi=0.0)).as_tuple() == (1, 1, 1, 1)
    a = asymmetric_allocation(RingConfig(t=1.0, phi=math.pi))
    assert a.t_uL == pytest.approx(-1.0, abs=1e-15)
    assert (a.t_uR, a.t_dL, a.t_dR) == (1, 1, 1)
    assert asymmetric_allocation(RingConfig(t=1.0, phi=1.3)).loop_phase() == pytest.approx(1.3)


def test_random_allocation_examples():
    c0 = RingConfig(phi=0.0)
    assert loop_residual(random_allocation(c0, 3), 0.0) < 1e-14
    c = RingConfig(phi=math.pi / 2)
    assert loop_residual(random_allocation(c, 42), math.pi / 2) < 1e-14
    assert random_allocation(c, 42) == random_allocation(c, 42)
    assert random_allocation(c, 42) != random_allocation(c, 43)


@given(phi=PHIS, t=TS, seed=st.integers(0, 2 ** 32 - 1))
def test_allocation_invariants(phi, t, seed):
    c = RingConfig(t=t, phi=phi)
    for a in (symmetric_allocation(c), asymmetric_allocation(c), random_allocation(c, seed)):
        assert loop_residual(a, phi) < 1e-12
        for amp in a.as_tuple():
            assert abs(amp) == pytest.approx(t, rel=1e-14)


def test_allocations_coincide_at_zero_flux():
    c = RingConfig(t=0.7, phi=0.0)
    assert symmetric_allocation(c) == asymmetric_allocation(c)


def test_raw_phi_is_not_reduced():
    # quarter phases distinguish phi and phi + 2 pi; the loop flux does not
    a = symmetric_allocation(RingConfig(phi=0.3))
    b = symmetric_allocation(RingConfig(phi=0.3 + 2 * math.pi))
    assert a.t_uL != pytest.approx(b.t_uL)
    assert loop_residual(a, 0.3) < 1e-14 and loop_residual(b, 0.3) < 1e-14


def test_dispersion_examples():
    assert dispersion(RingConfig(t0=1.0), math.pi / 2).omega == pytest.approx(0.0, abs=1e-15)
    assert dispersion(RingConfig(t0=1.0), 1e-9).omega == pytest.approx(-2.0)
    assert dispersion(RingConfig(t0=2.0), math.pi / 3).omega == pytest.approx(-2.0)


@pytest.mark.parametrize("k", [0.0, -0.1, math.pi, 4.0])
def test_dispersion_rejects_band_edges(k):
    with pytest.raises(NonPropagatingMode):
        dispersion(RingConfig(), k)


def test_momentum_from_energy_roundtrip():
    c = RingConfig(t0=1.5)
    m = momentum_from_energy(c, 0.7)
    assert m.omega == pytest.approx(0.7)
    with pytest.raises(NonPropagatingMode):
        momentum_from_energy(c, 3.0)


def test_types_are_immutable():
    c = RingConfig()
    with pytest.raises(AttributeError):
        c.phi = 1.0
    with pytest.raises(AttributeError):
        Momentum(1.0).k = 2.0
    with pytest.raises(AttributeError):
        GaugeAllocation(1, 1, 1, 1).t_uL = 2
