"""JSON run configuration.

Example::

    {
      "t0": 1.0, "Gamma": 0.1,
      "E_u": [0.0, 0.05], "E_d": [0.0, -0.05],
      "phi": 1.5707963267948966,
      "k": 1.5707963267948966,
      "allocation": "symmetric", "seed": 0,
      "sweep": {"variable": "epsilon_common", "start": -1, "stop": 1,
                "points": 2001, "engine": "closed_form"},
      "output": {"csv": "out.csv", "svg": "out.svg"}
    }

Physical keys mirror :class:`~abring.ring.RingConfig`; ``Gamma`` may be given
instead of ``t``.  Complex energies are ``[re, im]`` pairs, ``{"re": .., "im": ..}``
objects or plain numbers.  Unknown keys are rejected.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any, Optional

from .errors import NonPropagatingMode
from .ring import FERMI_K, Momentum, RingConfig
from .spectra import ALLOCATIONS, ENGINES, VARIABLES, SweepSpec

TOP_KEYS = {"t0", "t", "Gamma", "E_u", "E_d", "phi", "k", "allocation", "seed", "sweep", "output"}
SWEEP_KEYS = {"variable", "start", "stop", "points", "engine"}
OUTPUT_KEYS = {"csv", "svg"}

ENGINE_ALIASES = {"closed": "closed_form", "closed_form": "closed_form",
                  "oracle": "oracle", "both": "both"}


class ConfigError(ValueError):
    """Schema violation; ``where`` names the offending field or line."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


@dataclass(frozen=True)
class RunConfig:
    ring: RingConfig
    k: float = FERMI_K
    allocation: str = "symmetric"
    seed: int = 0
    sweep: Optional[SweepSpec] = None
    csv: Optional[str] = None
    svg: Optional[str] = None


def _real(obj: Any, where: str) -> float:
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise ConfigError(where, f"expected a number, got {type(obj).__name__}")
    v = float(obj)
    if not math.isfinite(v):
        raise ConfigError(where, "must be finite")
    return v


def _complex(obj: Any, where: str) -> complex:
    if isinstance(obj, list):
        if len(obj) != 2:
            raise ConfigError(where, "complex pair must have exactly two entries [re, im]")
        return complex(_real(obj[0], where + "[0]"), _real(obj[1], where + "[1]"))
    if isinstance(obj, dict):
        extra = set(obj) - {"re", "im"}
        if extra:
            raise ConfigError(f"{where}.{sorted(extra)[0]}", "unknown key")
        return complex(_real(obj.get("re", 0.0), where + ".re"),
                       _real(obj.get("im", 0.0), where + ".im"))
    return complex(_real(obj, where), 0.0)


def _check_keys(d: Any, allowed: set, where: str):
    if not isinstance(d, dict):
        raise ConfigError(where or "<root>", "expected a JSON object")
    for key in d:
        if key not in allowed:
            raise ConfigError(f"{where}.{key}" if where else key, "unknown key")


def parse_config(data: Any) -> RunConfig:
    """Validate a decoded JSON document and build a :class:`RunConfig`."""
    _check_keys(data, TOP_KEYS, "")
    if "t" in data and "Gamma" in data:
        raise ConfigError("Gamma", "give either t or Gamma, not both")
    t0 = _real(data.get("t0", 1.0), "t0")
    E_u = _complex(data.get("E_u", 0.0), "E_u")
    E_d = _complex(data.get("E_d", 0.0), "E_d")
    phi = _real(data.get("phi", 0.0), "phi")
    try:
        if "t" in data:
            ring = RingConfig(t0=t0, t=_real(data["t"], "t"), E_u=E_u, E_d=E_d, phi=phi)
        else:
            ring = RingConfig.from_gamma(_real(data.get("Gamma", 0.1), "Gamma"),
                                         E_u=E_u, E_d=E_d, phi=phi, t0=t0)
    except ValueError as exc:
        raise ConfigError("t0/t/Gamma", str(exc)) from None
    k = _real(data.get("k", FERMI_K), "k")
    try:
        Momentum(k, t0)
    except NonPropagatingMode as exc:
        raise ConfigError("k", str(exc)) from None
    allocation = data.get("allocation", "symmetric")
    if allocation not in ALLOCATIONS:
        raise ConfigError("allocation", f"must be one of {list(ALLOCATIONS)}")
    seed = data.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError("seed", "must be a non-negative integer")

    sweep = None
    if "sweep" in data:
        s = data["sweep"]
        _check_keys(s, SWEEP_KEYS, "sweep")
        for key in ("variable", "start", "stop", "points"):
            if key not in s:
                raise ConfigError(f"sweep.{key}", "missing")
        if s["variable"] not in VARIABLES:
            raise ConfigError("sweep.variable", f"must be one of {list(VARIABLES)}")
        points = s["points"]
        if isinstance(points, bool) or not isinstance(points, int) or points < 2:
            raise ConfigError("sweep.points", "must be an integer >= 2")
        start, stop = _real(s["start"], "sweep.start"), _real(s["stop"], "sweep.stop")
        if not start < stop:
            raise ConfigError("sweep.stop", "must be greater than sweep.start")
        engine = s.get("engine", "closed_form")
        if engine not in ENGINE_ALIASES:
            raise ConfigError("sweep.engine", f"must be one of {list(ENGINES)}")
        sweep = SweepSpec(variable=s["variable"], start=start, stop=stop, points=points,
                          config=ring, k=k, engine=ENGINE_ALIASES[engine],
                          allocation=allocation, seed=seed)

    csv_path = svg_path = None
    if "output" in data:
        o = data["output"]
        _check_keys(o, OUTPUT_KEYS, "output")
        for key, val in o.items():
            if not isinstance(val, str) or not val:
                raise ConfigError(f"output.{key}", "must be a non-empty path string")
        csv_path, svg_path = o.get("csv"), o.get("svg")
    return RunConfig(ring=ring, k=k, allocation=allocation, seed=seed, sweep=sweep,
                     csv=csv_path, svg=svg_path)


def load_config(path: str) -> RunConfig:
    """Read and validate a UTF-8 JSON config file."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(path, exc.strerror or str(exc)) from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno} col {exc.colno}", exc.msg) from None
    return parse_config(data)
