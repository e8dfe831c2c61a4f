"""Command-line interface: ``abring {transmit,sweep,gauge-check,fano,fig2}``.

Exit codes: 0 success, 1 failed check, 2 invalid input, 3 solver failure,
4 Fano fit divergence.  Every non-zero exit writes a single diagnostic line
``abring: error: <kind>: <message>`` to stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Optional, Sequence

from .closed_form import fano_parameters
from .config import ConfigError, RunConfig, load_config
from .errors import FitDiverged, InfiniteQ, NonPropagatingMode, SolveFailure
from .output import columns_to_csv, line_chart_svg, table_to_csv
from .ring import (
    FERMI_K,
    Momentum,
    RingConfig,
    asymmetric_allocation,
    random_allocation,
    symmetric_allocation,
)
from .spectra import evaluate, fit_fano, run_sweep
from .verify import FIG2_PHIS, fig2_checks, fig2_panels, gauge_check


class CLIError(Exception):
    def __init__(self, code: int, kind: str, message: str):
        super().__init__(message)
        self.code, self.kind = code, kind


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CLIError(2, "usage", message)


def _cx(z: complex) -> dict:
    return {"re": z.real, "im": z.imag}


def _num(v: float):
    return v if math.isfinite(v) else None


def _write(path: str, text: str):
    d = os.path.dirname(path)
    if d:
        os.makedirs(d, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _load(path: str) -> RunConfig:
    try:
        return load_config(path)
    except ConfigError as exc:
        raise CLIError(2, "config", str(exc)) from None


def cmd_transmit(args) -> int:
    phi = args.phi * math.pi if args.phi_in_pi else args.phi
    try:
        cfg = RingConfig.from_gamma(args.gamma, complex(args.eu_re, args.eu_im),
                                    complex(args.ed_re, args.ed_im), phi, t0=args.t0)
        m = Momentum(args.k, cfg.t0)
    except (ValueError, NonPropagatingMode) as exc:
        raise CLIError(2, "parameter", str(exc)) from None
    if args.alloc == "symmetric":
        alloc = symmetric_allocation(cfg)
    elif args.alloc == "asymmetric":
        alloc = asymmetric_allocation(cfg)
    else:
        alloc = random_allocation(cfg, args.seed)
    engine = {"closed": "closed_form"}.get(args.engine, args.engine)
    try:
        res = evaluate(cfg, alloc, m, engine)
    except SolveFailure as exc:
        raise CLIError(3, "solve", str(exc)) from None
    out = {
        "tau": _cx(res.tau),
        "r": _cx(res.r),
        "T": res.T,
        "G": res.T,
        "singular": res.singular,
        "engine": args.engine,
        "allocation": args.alloc,
        "omega": m.omega,
    }
    if engine == "both":
        out["discrepancy"] = _num(res.discrepancy)
    print(json.dumps(out, indent=2))
    return 0


def cmd_sweep(args) -> int:
    rc = _load(args.config)
    if rc.sweep is None:
        raise CLIError(2, "config", "sweep: missing (required by the sweep command)")
    table = run_sweep(rc.sweep)
    csv_text = table_to_csv(table)
    csv_path = args.csv or rc.csv
    svg_path = args.svg or rc.svg
    if csv_path:
        _write(csv_path, csv_text)
    else:
        sys.stdout.write(csv_text)
    if svg_path:
        s = rc.sweep
        _write(svg_path, line_chart_svg(table.x, [("G", table.G)], xlabel=s.variable,
                                        title=f"{s.variable} sweep, engine={s.engine}"))
    if table.discrepancy is not None:
        print(json.dumps({"max_discrepancy": _num(table.max_discrepancy)}), file=sys.stderr)
    return 0


def cmd_gauge_check(args) -> int:
    if args.trials < 1:
        raise CLIError(2, "usage", "--trials must be >= 1")
    base, k = None, FERMI_K
    if args.config:
        rc = _load(args.config)
        base, k = rc.ring, rc.k
    rep = gauge_check(args.trials, args.seed, hermitian=args.hermitian, base=base, k=k)
    print(json.dumps(rep.to_dict(), indent=2))
    if not rep.passed:
        print(f"abring: error: gauge: spread {rep.max_spread:.3e}, phase error "
              f"{rep.max_phase_error:.3e} exceed tolerance", file=sys.stderr)
        return 1
    return 0


def cmd_fano(args) -> int:
    rc = _load(args.config)
    s = rc.sweep
    if s is None or s.variable != "epsilon_common":
        raise CLIError(2, "config", "sweep.variable: fano requires an epsilon_common sweep")
    if abs(s.k - FERMI_K) > 1e-12:
        raise CLIError(2, "config", "k: fano requires k = pi/2")
    ring = rc.ring
    gamma = 0.5 * (ring.gamma_u - ring.gamma_d)
    try:
        q_theory = fano_parameters(gamma, ring.phi).q
        shape = "symmetric" if q_theory == 0 else "fano"
    except InfiniteQ:
        q_theory, shape = None, "lorentzian"
    table = run_sweep(s)
    try:
        fit = fit_fano(table)
    except FitDiverged as exc:
        raise CLIError(4, "fit", str(exc)) from None
    except ValueError as exc:
        raise CLIError(4, "fit", str(exc)) from None
    out = {
        "q": fit.q,
        "q_energy": fit.q_energy,
        "center": fit.center,
        "width": fit.width,
        "amplitude": fit.amplitude,
        "background": fit.background,
        "rms_residual": fit.rms_residual,
        "q_theory": q_theory,
        "q_theory_infinite": q_theory is None,
        "lineshape": shape,
    }
    print(json.dumps(out, indent=2))
    return 0


def cmd_fig2(args) -> int:
    panels = fig2_panels(points=args.points)
    for p in panels:
        x = p.curves["0"].x
        labels = [label for label, _ in FIG2_PHIS]
        names = ["x"] + [f"G_phi_{lab}" for lab in labels]
        cols = [x] + [p.curves[lab].G for lab in labels]
        _write(os.path.join(args.out, f"fig2_{p.name}.csv"), columns_to_csv(names, cols))
        series = [(f"phi = {lab}", p.curves[lab].G) for lab in labels]
        title = f"({p.name}) gamma_u = {p.gamma_u:g}, gamma_d = {p.gamma_d:g}, Gamma = 0.1"
        _write(os.path.join(args.out, f"fig2_{p.name}.svg"),
               line_chart_svg(x, series, title=title, xlabel="epsilon / t0"))
    checks = fig2_checks(panels)
    for c in checks:
        print(c.line())
    failed = [c for c in checks if not c.passed]
    if failed:
        print(f"abring: error: fig2: {len(failed)} check(s) failed: {failed[0].name}", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="abring", description="Transport through a non-Hermitian two-dot AB ring.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    t = sub.add_parser("transmit", help="evaluate a single parameter point")
    for flag in ("--eu-re", "--eu-im", "--ed-re", "--ed-im"):
        t.add_argument(flag, type=float, default=0.0)
    t.add_argument("--phi", type=float, default=0.0, help="flux phase in radians")
    t.add_argument("--phi-in-pi", action="store_true", help="read --phi in units of pi")
    t.add_argument("--gamma", type=float, default=0.1, help="level broadening Gamma = t^2/t0")
    t.add_argument("--t0", type=float, default=1.0)
    t.add_argument("--k", type=float, default=FERMI_K, help="lead momentum, default pi/2")
    t.add_argument("--alloc", choices=("symmetric", "asymmetric", "random"), default="symmetric")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--engine", choices=("closed", "oracle", "both"), default="closed")
    t.set_defaults(func=cmd_transmit)

    s = sub.add_parser("sweep", help="run a parameter sweep from a JSON config")
    s.add_argument("config")
    s.add_argument("--csv", help="override output.csv")
    s.add_argument("--svg", help="override output.svg")
    s.set_defaults(func=cmd_sweep)

    g = sub.add_parser("gauge-check", help="verify gauge independence on random draws")
    g.add_argument("--trials", type=int, default=1000)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--config", help="fix the physical parameters from a JSON config")
    g.add_argument("--hermitian", action="store_true", help="draw real dot levels only")
    g.set_defaults(func=cmd_gauge_check)

    f = sub.add_parser("fano", help="fit the standard Fano profile to an epsilon sweep")
    f.add_argument("config")
    f.set_defaults(func=cmd_fano)

    h = sub.add_parser("fig2", help="reproduce the conductance-spectrum figure and check it")
    h.add_argument("--out", default="fig2")
    h.add_argument("--points", type=int, default=2001)
    h.set_defaults(func=cmd_fig2)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except CLIError as exc:
        print(f"abring: error: {exc.kind}: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
