"""``probe-resonance`` command-line entry point.

Subcommands: simulate, scan, table1, figure, trotter-check, validate-eq5.
Exit codes: 0 success, 1 invalid input or usage, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import experiments
from .analytic3 import ThreeLevelParams, p_analytic, p_numeric3
from .config import load_config_file
from .errors import NumericError, ValidationError
from .evolve import evolve, evolve_trotter, make_rng, sample_probe
from .hamiltonian import ExplicitSpec, ProbeConfig, overlaps_from_explicit
from .io import format_number, load_spec, write_csv
from .qcore import HermitianOperator
from .scan import ScanConfig, run_scan

CLOSED_FORM_D = (0.01, 0.1)
CLOSED_FORM_E_PRIME = (2.0, 20.0)
CLOSED_FORM_ALPHA = (0.0, 1.0)
CLOSED_FORM_POINTS = 401
CLOSED_FORM_TOL = 1e-6


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="JSON file overriding numerical tolerances")
    p.add_argument("--threads", type=_positive_int, default=1)
    p.add_argument("--seed", type=_seed, default=0)


def _add_probe(p: argparse.ArgumentParser) -> None:
    p.add_argument("--spec", type=Path, required=True, help="JSON system spec")
    p.add_argument("--c", type=float, default=0.01, help="coupling strength")
    p.add_argument("--epsilon0", type=float, default=0.0, help="reference-state energy")
    p.add_argument("--representation", choices=("reduced", "full"), default="reduced")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="probe-resonance", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="evolve |Psi_0> and report success / decay probabilities")
    _add_common(p)
    _add_probe(p)
    p.add_argument("--omega", type=float, help="probe frequency (default: resonant with the target level)")
    p.add_argument("--t", type=float, required=True, help="evolution time")
    p.add_argument("--target", type=int, default=0, help="target level index (0 = first/ground)")
    p.add_argument("--trotter-steps", type=_positive_int, help="use the M-step product formula (explicit specs)")
    p.add_argument("--shots", type=int, default=0)
    p.add_argument("--out-dir", type=Path)

    p = sub.add_parser("scan", help="sweep the probe frequency and locate decay peaks")
    _add_common(p)
    _add_probe(p)
    p.add_argument("--omega-ini", type=float, required=True)
    p.add_argument("--omega-fin", type=float, required=True)
    p.add_argument("--q", type=_positive_int, required=True, help="number of frequency intervals")
    p.add_argument("--t", type=float, help="evolution time (default pi*sqrt(N)/(2c))")
    p.add_argument("--shots", type=int, default=0, help="0 = exact probabilities")
    p.add_argument("--threshold", type=float)
    p.add_argument("--min-separation", type=_positive_int, default=2)
    p.add_argument("--out-dir", type=Path, required=True)

    p = sub.add_parser("table1", help="alpha vs d at E'=20, P=0.99")
    _add_common(p)
    p.add_argument("--out-dir", type=Path, required=True)
    p.add_argument("--max-over-t", action="store_true", help="use max of P over [0, t] instead of P(t)")

    p = sub.add_parser("figure", help="write the dataset behind a figure")
    _add_common(p)
    p.add_argument("--id", dest="figure_id", choices=experiments.FIGURES + ("all",), required=True)
    p.add_argument("--out-dir", type=Path, required=True)

    p = sub.add_parser("trotter-check", help="product-formula error vs number of steps")
    _add_common(p)
    p.add_argument("--spec", type=Path, help="explicit JSON spec (default: random n-qubit system)")
    p.add_argument("--n", type=_positive_int, default=2)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--epsilon0", type=float, default=0.0)
    p.add_argument("--c", type=float, default=0.1)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--m-max", type=_positive_int, default=1024)
    p.add_argument("--out-dir", type=Path, required=True)

    p = sub.add_parser("validate-eq5", help="closed-form amplitude vs 3x3 propagation")
    _add_common(p)
    p.add_argument("--grid", choices=("default",), default="default")
    p.add_argument("--out-dir", type=Path, required=True)
    return parser


# ------------------------------------------------------------------ commands


def _resonant_omega(spec, epsilon0: float, target: int) -> float:
    spectral = overlaps_from_explicit(spec) if isinstance(spec, ExplicitSpec) else spec
    if not 0 <= target < spectral.n_levels:
        raise ValidationError(f"target level {target} out of range")
    return float(spectral.energies[target]) - epsilon0


def cmd_simulate(args) -> int:
    if args.shots < 0:
        raise ValidationError("shots must be >= 0")
    if args.t < 0:
        raise ValidationError("t must be >= 0")
    spec = load_spec(args.spec)
    omega = args.omega if args.omega is not None else _resonant_omega(spec, args.epsilon0, args.target)
    probe = ProbeConfig(omega=omega, epsilon0=args.epsilon0, c=args.c)
    if args.trotter_steps:
        result = evolve_trotter(spec, probe, args.t, args.trotter_steps, target=args.target)
    else:
        result = evolve(spec, probe, args.t, args.representation, target=args.target)
    fields = {
        "representation": result.representation,
        "t": result.t,
        "omega": omega,
        "success_prob": result.success_prob,
        "probe_decay_prob": result.probe_decay_prob,
        "leakage": result.leakage,
    }
    if args.shots:
        count0, count1 = sample_probe(result, args.shots, args.seed)
        fields.update(shots=args.shots, count0=count0, count1=count1)
    for k, v in fields.items():
        print(f"{k} = {v if isinstance(v, str) else format_number(v)}")
    if args.out_dir:
        write_csv(args.out_dir / "simulate.csv", list(fields), [list(fields.values())])
    return 0


def cmd_scan(args) -> int:
    spec = load_spec(args.spec)
    template = ProbeConfig(omega=max(args.omega_ini, 1e-12), epsilon0=args.epsilon0, c=args.c)
    cfg = ScanConfig(
        omega_ini=args.omega_ini,
        omega_fin=args.omega_fin,
        q=args.q,
        t_evolve=args.t,
        shots=args.shots,
        seed=args.seed,
        representation=args.representation,
        threshold=args.threshold,
        min_separation=args.min_separation,
    )
    result = run_scan(spec, template, cfg, threads=args.threads)
    result.write(args.out_dir)
    print(f"t_evolve = {format_number(result.t_evolve)}")
    for e in result.spectrum_estimates:
        print(f"energy_estimate = {format_number(e)}")
    return 0


def cmd_table1(args) -> int:
    path = experiments.write_table1(args.out_dir, max_over_t=args.max_over_t, threads=args.threads)
    print(path.read_text(), end="")
    return 0


def cmd_figure(args) -> int:
    ids = experiments.FIGURES if args.figure_id == "all" else (args.figure_id,)
    for fid in ids:
        path = experiments.write_figure(fid, args.out_dir, threads=args.threads)
        print(path)
    return 0


def random_explicit_spec(n: int, seed: int, scale: float = 1.0) -> ExplicitSpec:
    rng = make_rng(seed)
    dim = 2**n
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return ExplicitSpec(HermitianOperator(scale * 0.5 * (x + x.conj().T)))


def trotter_errors(spec: ExplicitSpec, probe: ProbeConfig, t: float, ms) -> list[tuple[int, float]]:
    exact = evolve(spec, probe, t, "full").state.amps
    return [(m, float(np.linalg.norm(evolve_trotter(spec, probe, t, m).state.amps - exact))) for m in ms]


def loglog_slope(ms, errors) -> float:
    return float(np.polyfit(np.log(np.asarray(ms, float)), np.log(np.asarray(errors, float)), 1)[0])


def cmd_trotter_check(args) -> int:
    spec = load_spec(args.spec) if args.spec else random_explicit_spec(args.n, args.seed)
    if not isinstance(spec, ExplicitSpec):
        raise ValidationError("trotter-check needs an explicit spec")
    probe = ProbeConfig(omega=args.omega, epsilon0=args.epsilon0, c=args.c)
    ms = [2**k for k in range(3, int(math.log2(args.m_max)) + 1)]
    rows = trotter_errors(spec, probe, args.t, ms)
    write_csv(args.out_dir / "trotter.csv", ["m_steps", "error"], rows)
    print(f"loglog_slope = {format_number(loglog_slope(*zip(*rows)))}")
    return 0


def closed_form_rows():
    rows = []
    for d in CLOSED_FORM_D:
        for e in CLOSED_FORM_E_PRIME:
            for alpha in CLOSED_FORM_ALPHA:
                params = ThreeLevelParams.from_alpha(d, e, alpha)
                times = np.linspace(0.0, 2 * math.pi / (params.c * params.d), CLOSED_FORM_POINTS)
                num = p_numeric3(params, times)
                ana = p_analytic(params, times, residue="quadratic")
                der = p_analytic(params, times, residue="derivative")
                rows += [
                    (d, e, alpha, t, pn, pa, abs(pa - pn), pd, abs(pd - pn))
                    for t, pn, pa, pd in zip(times, num, ana, der)
                ]
    return rows


def cmd_validate_eq5(args) -> int:
    rows = closed_form_rows()
    header = ["d", "e_prime", "alpha", "t", "p_numeric3", "p_analytic", "abs_diff", "p_derivative", "abs_diff_derivative"]
    write_csv(args.out_dir / "eq5_report.csv", header, rows)
    worst = max(r[6] for r in rows)
    worst_der = max(r[8] for r in rows)
    print(f"max_abs_diff = {format_number(worst)}")
    print(f"max_abs_diff_derivative = {format_number(worst_der)}")
    print(f"verdict = {'agree' if worst < CLOSED_FORM_TOL else 'mismatch'} (tolerance {CLOSED_FORM_TOL:g})")
    return 0


COMMANDS = {
    "simulate": cmd_simulate,
    "scan": cmd_scan,
    "table1": cmd_table1,
    "figure": cmd_figure,
    "trotter-check": cmd_trotter_check,
    "validate-eq5": cmd_validate_eq5,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    logging.captureWarnings(True)
    try:
        if args.config:
            load_config_file(args.config)
        return COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
