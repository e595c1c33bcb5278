"""Command-line entry point.

Lengths are given in micrometres, energies in peV and cavity lengths in
metres.  Data go to stdout (or ``--output``), diagnostics to stderr.
Exit status: 0 ok, 1 validation error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import eigen, fitmodel, scenario, transmission
from .errors import NumericError
from .files import LENGTH_HEADER, dump_json, load_config, points_csv, read_points_csv
from .physconst import REFERENCE, Energy, PEV
from .potential import PotentialKind, PotentialSpec, sample
from .transmission import TransmissionModel

log = logging.getLogger("ucnbouncer")

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _potential_args(p):
    p.add_argument("--potential", required=True, choices=[k.value for k in PotentialKind])
    p.add_argument("--slit-um", type=float, help="slit / box width [um]")
    p.add_argument("--absorber-pev", type=float, help="absorber step height [peV]")
    p.add_argument("--no-gravity", action="store_true", help="switch gravity off inside the slit")
    p.add_argument("--grid", type=int, default=None, help="grid points")
    p.add_argument("--method", choices=["analytic", "numeric"], default=None)


def _output_arg(p):
    p.add_argument("--output", "-o", help="write data here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="ucnbouncer", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("constants", help="dump physical constants as JSON")
    _output_arg(p)

    p = sub.add_parser("eigen", help="energy spectrum CSV")
    _potential_args(p)
    p.add_argument("--states", type=int, default=4)
    _output_arg(p)

    p = sub.add_parser("wavefunction", help="psi and |psi|^2 CSV for one state")
    _potential_args(p)
    p.add_argument("--n", type=int, default=1)
    _output_arg(p)

    p = sub.add_parser("transmission", help="N(delta_h) curve CSV")
    p.add_argument("--model", required=True, choices=[m.value for m in TransmissionModel])
    p.add_argument("--dh-min-um", type=float, default=2.0)
    p.add_argument("--dh-max-um", type=float, default=60.0)
    p.add_argument("--steps", type=int, default=59)
    p.add_argument("--config", help="scenario config (quantum models)")
    p.add_argument("--kappa", type=float, help="absorption strength [1/m]")
    p.add_argument("--cavity-m", type=float, help="cavity (mirror) length [m]")
    p.add_argument("--a-scale", type=float, default=1.0)
    p.add_argument("--h1-um", type=float, default=15.0)
    p.add_argument("--exponent", type=float, default=1.5)
    _output_arg(p)

    p = sub.add_parser("leakage", help="N(x) versus cavity length CSV")
    p.add_argument("--dh-um", type=float, required=True)
    p.add_argument("--x-max-m", type=float, required=True)
    p.add_argument("--steps", type=int, default=21)
    p.add_argument("--state", type=int, default=1, help="slit state whose leakage is followed")
    p.add_argument("--model", choices=["quantum-gravity", "quantum-box"], default="quantum-gravity")
    p.add_argument("--kappa", type=float)
    p.add_argument("--n0", type=float, default=1.0)
    _output_arg(p)

    p = sub.add_parser("scenario", help="predicted curve for a scenario config")
    p.add_argument("--config", required=True)
    p.add_argument("--orientation", choices=[o.value for o in scenario.Orientation])
    p.add_argument("--kappa", type=float)
    p.add_argument("--dh-min-um", type=float)
    p.add_argument("--dh-max-um", type=float)
    p.add_argument("--steps", type=int)
    _output_arg(p)

    p = sub.add_parser("fit", help="fit one model to a CSV dataset (JSON)")
    p.add_argument("--input", required=True)
    p.add_argument("--model", choices=[m.value for m in TransmissionModel] + [fitmodel.EXPONENTIAL])
    p.add_argument("--fix-exponent", type=float)
    p.add_argument("--config", help="scenario config for quantum models")
    _output_arg(p)

    p = sub.add_parser("compare", help="rank candidate models on a dataset (JSON)")
    p.add_argument("--input", required=True)
    p.add_argument("--candidates", default=",".join(m.value for m in TransmissionModel))
    p.add_argument("--config", help="scenario config for quantum models")
    _output_arg(p)

    p = sub.add_parser("synth", help="noisy synthetic data from a curve config")
    p.add_argument("--config", required=True)
    p.add_argument("--sigma", type=float, required=True, help="relative noise")
    p.add_argument("--seed", type=int, required=True)
    _output_arg(p)
    return ap


def _emit(args, text: str, sidecar: dict | None = None):
    if args.output:
        path = Path(args.output)
        path.write_text(text, encoding="utf-8")
        if sidecar is not None:
            path.with_suffix(path.suffix + ".json").write_text(dump_json(sidecar), encoding="utf-8")
    else:
        sys.stdout.write(text)


def _spec_from_args(args) -> PotentialSpec:
    kind = PotentialKind(args.potential)
    width = None if args.slit_um is None else args.slit_um * 1e-6
    height = None if args.absorber_pev is None else Energy.from_pev(args.absorber_pev).value
    return PotentialSpec(kind, slit_width=width, absorber_height=height, gravity_on=not args.no_gravity)


def _states(args, n_states):
    c = REFERENCE
    spec = _spec_from_args(args)
    method = args.method or ("analytic" if spec.kind in (PotentialKind.GRAVITY_MIRROR, PotentialKind.INFINITE_BOX) else "numeric")
    if method == "analytic":
        if spec.kind is PotentialKind.GRAVITY_MIRROR:
            return eigen.gravity_mirror_spectrum(c, n_states, n_points=args.grid or eigen.DEFAULT_AIRY_POINTS)
        if spec.kind is PotentialKind.INFINITE_BOX:
            return eigen.box_spectrum(c, spec.slit_width, n_states, n_points=args.grid or eigen.DEFAULT_BOX_POINTS)
        raise ValueError(f"no analytic solution for potential {spec.kind.value}; use --method numeric")
    grid = sample(spec, c, args.grid or 8000, n_states_hint=n_states)
    boundary = (eigen.Boundary.DIRICHLET_LEFT_DECAY_RIGHT if spec.kind is PotentialKind.GRAVITY_ABSORBER
                else eigen.Boundary.DIRICHLET_BOTH)
    states = eigen.solve_numeric(grid, c, n_states, boundary)
    if len(states) < n_states:
        log.warning("only %d of %d requested states are bound below the absorber", len(states), n_states)
    return states


def cmd_constants(args):
    _emit(args, dump_json(REFERENCE.to_dict()))


def cmd_eigen(args):
    states = _states(args, args.states)
    lines = ["n,energy_peV,turning_point_um"]
    for s in states:
        lines.append(f"{s.n},{s.energy.pev()!r},{transmission.to_micrometres(s.turning_point(REFERENCE))!r}")
    _emit(args, "\n".join(lines) + "\n")


def cmd_wavefunction(args):
    states = _states(args, args.n)
    if len(states) < args.n:
        raise ValueError(f"state {args.n} is not bound")
    _emit(args, states[args.n - 1].to_csv())


def _sweep(lo_um, hi_um, steps):
    if steps < 1 or not 0 < lo_um <= hi_um:
        raise ValueError("sweep needs 0 < dh-min <= dh-max and steps >= 1")
    return np.linspace(lo_um, hi_um, steps) * 1e-6


def _scenario_from(path, **overrides) -> tuple[scenario.ScenarioConfig, dict]:
    data = load_config(path) if path else {}
    data = dict(data)
    extra = {k: data.pop(k) for k in ("sweep", "model", "classical") if k in data}
    cfg = scenario.ScenarioConfig.from_dict(data)
    changes = {k: v for k, v in overrides.items() if v is not None}
    return cfg.with_(**changes), extra


def cmd_transmission(args):
    dh = _sweep(args.dh_min_um, args.dh_max_um, args.steps)
    model = TransmissionModel(args.model)
    if model.is_quantum:
        cfg, _ = _scenario_from(args.config, kappa=args.kappa)
        if args.cavity_m is not None:
            cfg = cfg.with_(geometry=scenario.GeometryConfig(args.cavity_m, max(args.cavity_m, cfg.geometry.absorber_length)))
        family = scenario.ModelFamily.GRAVITY if model is TransmissionModel.QUANTUM_GRAVITY else scenario.ModelFamily.BOX_ONLY
        curve = scenario.predict_scenario(cfg.with_(model_family=family, orientation=scenario.Orientation.HORIZONTAL), dh)
    else:
        h1 = 0.0 if model is TransmissionModel.CLASSICAL_PURE else args.h1_um * 1e-6
        curve = transmission.classical_curve(args.a_scale, h1, args.exponent, dh)
    _emit(args, curve.to_csv(), {"model": curve.model.value, "params": curve.params})


def cmd_leakage(args):
    cfg, _ = _scenario_from(None, kappa=args.kappa)
    family = scenario.ModelFamily.GRAVITY if args.model == "quantum-gravity" else scenario.ModelFamily.BOX_ONLY
    cfg = cfg.with_(model_family=family)
    dh = args.dh_um * 1e-6
    states = scenario.slit_states(cfg, dh)
    if args.state > len(states):
        raise ValueError(f"state {args.state} is not bound at delta_h = {args.dh_um} um")
    k = transmission.leakage_rate(states[args.state - 1], dh, cfg.kappa)
    model = transmission.LeakageModel(args.n0, k, dh)
    xs = np.linspace(0.0, args.x_max_m, args.steps)
    _emit(args, points_csv(transmission.leakage_curve(model, xs), LENGTH_HEADER),
          {"n0": model.n0, "k_per_m": model.k, "delta_h_m": dh, "state": args.state, "kappa_per_m": cfg.kappa})


def _sweep_from(extra, args):
    sw = extra.get("sweep", {})
    lo = args.dh_min_um if getattr(args, "dh_min_um", None) is not None else sw.get("dh_min_um", 2.0)
    hi = args.dh_max_um if getattr(args, "dh_max_um", None) is not None else sw.get("dh_max_um", 60.0)
    steps = args.steps if getattr(args, "steps", None) is not None else sw.get("steps", 59)
    return _sweep(float(lo), float(hi), int(steps))


def cmd_scenario(args):
    cfg, extra = _scenario_from(args.config, kappa=args.kappa,
                                orientation=args.orientation and scenario.Orientation(args.orientation))
    curve = scenario.predict_scenario(cfg, _sweep_from(extra, args))
    _emit(args, curve.to_csv(), {"model": curve.model.value, "params": curve.params})


def _curve_from_config(path, args):
    cfg, extra = _scenario_from(path)
    dh = _sweep_from(extra, args)
    model = TransmissionModel(extra.get("model", cfg.transmission_model.value))
    if model.is_quantum:
        family = scenario.ModelFamily.GRAVITY if model is TransmissionModel.QUANTUM_GRAVITY else scenario.ModelFamily.BOX_ONLY
        return scenario.predict_scenario(cfg.with_(model_family=family), dh)
    cl = extra.get("classical", {})
    h1 = 0.0 if model is TransmissionModel.CLASSICAL_PURE else float(cl.get("h1_um", 15.0)) * 1e-6
    return transmission.classical_curve(float(cl.get("a_scale", 1.0)), h1, float(cl.get("exponent", 1.5)), dh)


def cmd_synth(args):
    curve = _curve_from_config(args.config, args)
    pts = fitmodel.synthesize_data(curve, args.sigma, args.seed)
    _emit(args, points_csv(pts))


def _candidate(name, base):
    return fitmodel.Candidate.default(TransmissionModel(name), base)


def cmd_fit(args):
    header, points = read_points_csv(args.input)
    if header == LENGTH_HEADER or args.model == fitmodel.EXPONENTIAL:
        if header != LENGTH_HEADER:
            raise ValueError("exponential fit needs an x_m,n_count file")
        result = fitmodel.fit_exponential(points)
    else:
        if args.model is None:
            raise ValueError("--model is required for delta_h_um data")
        base, _ = _scenario_from(args.config)
        cand = _candidate(args.model, base)
        if args.fix_exponent is not None:
            cand = fitmodel.Candidate(cand.model, cand.scenario, args.fix_exponent)
        result = fitmodel.fit_candidate(points, cand)
    _emit(args, dump_json(result.to_dict()))


def cmd_compare(args):
    header, points = read_points_csv(args.input)
    if header == LENGTH_HEADER:
        raise ValueError("compare needs delta_h_um,n_count data")
    base, _ = _scenario_from(args.config)
    names = [n.strip() for n in args.candidates.split(",") if n.strip()]
    cands = [_candidate(n, base) for n in names]
    _emit(args, dump_json(fitmodel.compare_models(points, cands).to_dict()))


COMMANDS = {
    "constants": cmd_constants,
    "eigen": cmd_eigen,
    "wavefunction": cmd_wavefunction,
    "transmission": cmd_transmission,
    "leakage": cmd_leakage,
    "scenario": cmd_scenario,
    "fit": cmd_fit,
    "compare": cmd_compare,
    "synth": cmd_synth,
}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_INVALID
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
    log.addHandler(handler)
    log.setLevel(logging.DEBUG if args.verbose else logging.WARNING)
    try:
        COMMANDS[args.command](args)
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    finally:
        log.removeHandler(handler)
    return EXIT_OK


def main():
    sys.exit(run())
