"""Transmission and conductance of a two-dot Aharonov-Bohm ring with complex dot levels."""

from .closed_form import (
    FanoParameters,
    TransmissionResult,
    conductance_fano_form,
    fano_parameters,
    r_general,
    tau_asymmetric,
    tau_fermi,
    tau_general,
    tau_symmetric,
    transmission_pt,
    transmission_T,
)
from .errors import (
    ABRingError,
    EmptyResult,
    FitDiverged,
    InfiniteQ,
    NonPropagatingMode,
    SingularPoint,
    SolveFailure,
)
from .oracle import ScatteringSolution, build_system, solve_scattering
from .ring import (
    FERMI_K,
    GaugeAllocation,
    Momentum,
    RingConfig,
    asymmetric_allocation,
    dispersion,
    random_allocation,
    symmetric_allocation,
)
from .spectra import (
    FanoFit,
    SpectrumTable,
    SweepSpec,
    asymmetry_metric,
    fano_profile,
    find_extrema,
    fit_fano,
    run_sweep,
)

__version__ = "0.1.0"
