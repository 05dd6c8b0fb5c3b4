"""Command line entry point.

Every subcommand exits 0 on success. Failures print one JSON object
``{"error": ..., "message": ...}`` on stderr and exit 1; malformed
arguments exit 2 with a usage message listing the valid ranges.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .. import discretize, lmcore, theory
from ..discretize import DiscretizationSpec
from ..estimators import bandwidth, dfa_curve, dfa_estimate, local_whittle, periodogram, sample_acv
from ..lmcore import ProcessSpec
from ..synth import SeedSpec, simulate_gaussian
from . import io as hio
from .experiment import run_experiment
from .figures import FigureKind, figure_data
from .tables import TABLES, table_config

FIGURES = {"fig1": FigureKind.ACV, "fig2": FigureKind.PERIODOGRAM, "fig4": FigureKind.DFA}


# ---------------------------------------------------------------------------
# argument types with range messages


def _ranged(name, lo=None, hi=None, lo_open=True, hi_open=True, cast=float):
    def check(text):
        try:
            x = cast(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be a number, got {text!r}")
        bad = (lo is not None and (x <= lo if lo_open else x < lo)) or \
              (hi is not None and (x >= hi if hi_open else x > hi))
        if bad:
            left = "(" if lo_open else "["
            right = ")" if hi_open else "]"
            lo_s = "-inf" if lo is None else lo
            hi_s = "inf" if hi is None else hi
            raise argparse.ArgumentTypeError(f"{name} must lie in {left}{lo_s}, {hi_s}{right}, got {x}")
        return x
    return check


hurst_arg = _ranged("hurst", 0.5, 1.0)
positive = _ranged("value", 0.0)
unit_open = _ranged("exponent", 0.0, 1.0)
fraction = _ranged("q", 0.0, 1.0, hi_open=False)
seed_arg = _ranged("seed", 0, 2**64, lo_open=False, cast=int)
count_arg = _ranged("count", 1, None, lo_open=False, cast=int)
length_arg = _ranged("n", 2, None, lo_open=False, cast=int)
lag_arg = _ranged("lag", 0, None, lo_open=False, cast=int)


def _out(text: str, path: str | None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        hio._write_text(path, text)


def _json(value, diagnostics=None) -> str:
    return json.dumps({"value": value, "diagnostics": diagnostics or {}}, sort_keys=True) + "\n"


def _process(args) -> ProcessSpec:
    return ProcessSpec(args.kind, args.hurst, args.variance)


def _add_process(p, hurst_default=None):
    p.add_argument("--kind", choices=["fgn", "farima"], default="fgn")
    p.add_argument("--hurst", type=hurst_arg, required=hurst_default is None,
                   default=hurst_default, help="Hurst exponent in (0.5, 1)")
    p.add_argument("--variance", type=positive, default=1.0, help="variance D > 0")


def _add_transform(p, required=True):
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--delta", type=positive, help="round-off grid step > 0")
    g.add_argument("--chi", type=positive, help="grid fineness D/delta^2 > 0")
    g.add_argument("--sign", action="store_true", help="sign transform")


def _transform_spec(args, variance: float) -> DiscretizationSpec | None:
    if getattr(args, "sign", False):
        return DiscretizationSpec.sign()
    if getattr(args, "delta", None) is not None:
        return DiscretizationSpec.round(args.delta)
    if getattr(args, "chi", None) is not None:
        return DiscretizationSpec.from_chi(args.chi, variance)
    return None


# ---------------------------------------------------------------------------
# subcommands


def cmd_simulate(args):
    s = simulate_gaussian(_process(args), args.n, SeedSpec(args.seed, args.replicate))
    _out(hio.format_series(s), args.out)


def cmd_transform(args):
    s = hio.read_series(args.input)
    variance = s.meta.get("spec", {}).get("variance", 1.0)
    spec = _transform_spec(args, variance)
    _out(hio.format_series(discretize.apply(s, spec)), args.out)


def cmd_estimate(args):
    s = hio.read_series(args.input)
    n = len(s)
    if args.method == "lw":
        if args.m is not None:
            m = args.m
        else:
            m = bandwidth(n, args.exponent)
        value = local_whittle(s, m)
        diag = {"method": "lw", "m": m, "n": n}
    else:
        curve = dfa_curve(s)
        value = dfa_estimate(curve, args.q, args.selection)
        diag = {"method": "dfa", "q": args.q, "selection": args.selection, "n": n,
                "boxes": int(curve.box_sizes.size)}
    _out(_json(value, diag), args.out)


def _theory_coeffs(args):
    spec = _transform_spec(args, args.variance)
    if spec is None:
        raise ValueError("a transform (--chi, --delta or --sign) is required")
    return spec, theory.hermite_coefficients(spec, args.variance, args.max_j)


def cmd_theory(args):
    q = args.quantity
    need = {
        "q0": ["chi"], "g1": ["chi"], "g3": ["chi"], "dd": ["chi"], "kurtosis": ["chi"],
        "hosking": ["lam", "hurst", "n"], "spectral": ["hurst"], "spectral-numeric": ["hurst", "omega"],
        "dfa-exact": ["hurst", "m"], "dfa-asymptote": ["hurst", "amplitude", "m"],
        "acf": ["hurst", "lag"], "zeta": ["s"], "theta2": ["q"],
        "transformed-acv": ["rho"], "sign-acv": ["rho"],
    }
    missing = [k for k in need.get(q, []) if getattr(args, k, None) is None]
    if missing:
        raise ValueError(f"theory {q} needs --{', --'.join(m.replace('_', '-') for m in missing)}")
    diag: dict = {}
    if q == "q0":
        value = discretize.zero_fraction(args.chi)
    elif q == "g1":
        value = theory.g1(args.chi, args.variance)
        diag = {"theta_rel_tol": lmcore.THETA_REL_TOL}
    elif q == "g3":
        value = theory.g3(args.chi, args.variance)
        diag = {"theta_rel_tol": lmcore.THETA_REL_TOL}
    elif q == "dd":
        value = theory.discretized_variance(args.chi, args.variance)
    elif q == "kurtosis":
        value = theory.discretized_kurtosis(args.chi)
    elif q == "hermite":
        _, c = _theory_coeffs(args)
        value = {str(j): g for j, g in c.coeffs}
        diag = {"total_variance": c.total_variance, "missing_power": c.missing_power()}
    elif q == "scaling":
        spec = _transform_spec(args, args.variance)
        cov, corr = theory.scaling_factors(spec, args.variance)
        value = {"covariance": cov, "correlation": corr}
    elif q == "transformed-acv":
        _, c = _theory_coeffs(args)
        value = theory.transformed_acv(args.rho, c)
        diag = {"tail_bound": float(c.tail_bound(args.rho))}
    elif q == "sign-acv":
        value = theory.sign_acv(args.rho)
    elif q == "hosking":
        value = theory.hosking_bias(args.lam, args.hurst, args.n)
    elif q == "spectral":
        spec = _transform_spec(args, args.variance)
        if spec is None:
            raise ValueError("spectral needs a transform (--chi, --delta or --sign)")
        chi = None if spec.is_sign else spec.chi(args.variance)
        b0 = args.hurst * (2 * args.hurst - 1) * args.variance
        e = theory.spectral_expansion(args.hurst, chi, b0, variance=args.variance)
        value = {
            "leading_amplitude": e.leading_amplitude,
            "leading_exponent": e.leading_exponent,
            "second_order": e.second_order.kind.value,
            "coefficient": e.second_order.coefficient,
            "exponent": e.second_order.exponent,
        }
        diag = {k: v for k, v in e.diagnostics.items() if isinstance(v, (int, float))}
        if args.omega is not None:
            value["at_omega"] = float(e(args.omega))
    elif q == "spectral-numeric":
        spec = _transform_spec(args, args.variance)
        if spec is None:
            acv = ProcessSpec("fgn", args.hurst, args.variance).autocovariance
            terms = theory.fgn_power_terms(args.hurst, args.variance)
        else:
            c = theory.hermite_coefficients(spec, args.variance, args.max_j)
            acv = theory.transformed_fgn_acv(args.hurst, c)
            terms = theory.transformed_fgn_power_terms(args.hurst, c)
        r = theory.spectral_density_numeric(acv, args.omega, args.tolerance, terms, full=True)
        value = r.value
        diag = {"lags": r.lags, "tail_bound": r.tail_bound}
    elif q == "dfa-exact":
        p = ProcessSpec(args.kind, args.hurst, args.variance)
        spec = _transform_spec(args, args.variance)
        if spec is None:
            value = theory.expected_dfa_exact(p.autocovariance, p.variance, args.m)
        else:
            c = theory.hermite_coefficients(spec, args.variance, args.max_j)
            acv = lambda k: theory.transformed_acv(p.autocorrelation(k), c)  # noqa: E731
            value = theory.expected_dfa_exact(acv, c.total_variance, args.m)
    elif q == "dfa-asymptote":
        value = theory.dfa_asymptote(args.hurst, args.amplitude, args.m)
    elif q == "acf":
        value = ProcessSpec(args.kind, args.hurst).autocorrelation(args.lag)
    elif q == "zeta":
        value = lmcore.riemann_zeta(args.s)
    elif q == "theta2":
        value = lmcore.elliptic_theta2(args.q)
    else:  # argparse choices make this unreachable
        raise ValueError(f"unknown quantity {q}")
    _out(_json(value, diag), args.out)


THEORY_QUANTITIES = [
    "q0", "g1", "g3", "dd", "kurtosis", "hermite", "scaling", "transformed-acv", "sign-acv",
    "hosking", "spectral", "spectral-numeric", "dfa-exact", "dfa-asymptote", "acf", "zeta", "theta2",
]


def cmd_reproduce(args):
    if args.target in TABLES:
        cfg = table_config(args.target, args.n or [1 << 10], args.replicates, args.seed, args.workers)
        _out(hio.format_table(run_experiment(cfg)), args.out)
        return
    n = args.n[0] if args.n else 1 << 14
    process = ProcessSpec("fgn", args.hurst, 1.0)
    cols = figure_data(FIGURES[args.target], process, SeedSpec(args.seed), n)
    _out(hio.format_columns(cols), args.out)


def cmd_acv(args):
    s = hio.read_series(args.input)
    max_lag = min(args.max_lag, len(s) - 1)
    _out(hio.format_columns({"lag": np.arange(max_lag + 1), "acv": sample_acv(s, max_lag)}), args.out)


def cmd_periodogram(args):
    p = periodogram(hio.read_series(args.input))
    _out(hio.format_columns({"frequency": p.frequencies, "ordinate": p.ordinates}), args.out)


def cmd_run(args):
    overrides = {"replicates": args.replicates, "master_seed": args.seed, "workers": args.workers}
    cfg = hio.load_config(args.config, overrides)
    _out(hio.format_table(run_experiment(cfg)), args.out)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lmround", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--out", "-o", default=None, help="output path (default stdout)")
        return p

    p = add("simulate", cmd_simulate, "simulate a Gaussian long-memory path")
    _add_process(p)
    p.add_argument("--n", type=length_arg, required=True, help="length n >= 2")
    p.add_argument("--seed", type=seed_arg, default=42, help="master seed in [0, 2^64)")
    p.add_argument("--replicate", type=lag_arg, default=0, help="replicate index >= 0")

    p = add("transform", cmd_transform, "round or sign-transform a series file")
    p.add_argument("input")
    _add_transform(p)

    p = add("estimate", cmd_estimate, "estimate H from a series file")
    p.add_argument("input")
    p.add_argument("--method", choices=["lw", "dfa"], required=True)
    p.add_argument("--exponent", type=unit_open, default=0.5, help="lw bandwidth m = floor(n^exponent), in (0, 1)")
    p.add_argument("--m", type=count_arg, default=None, help="explicit lw bandwidth, 2 <= m <= n/2")
    p.add_argument("--q", type=fraction, default=1.0, help="dfa fit fraction in (0, 1]")
    p.add_argument("--selection", choices=["range", "count"], default="range")

    p = add("theory", cmd_theory, "evaluate a closed-form quantity")
    p.add_argument("quantity", choices=THEORY_QUANTITIES)
    _add_transform(p, required=False)
    p.add_argument("--kind", choices=["fgn", "farima"], default="fgn")
    p.add_argument("--hurst", type=hurst_arg, help="Hurst exponent in (0.5, 1)")
    p.add_argument("--variance", type=positive, default=1.0, help="variance D > 0")
    p.add_argument("--max-j", type=count_arg, default=theory.DEFAULT_MAX_J, help="largest odd Hermite index")
    p.add_argument("--rho", type=_ranged("rho", -1.0, 1.0, False, False), default=None, help="correlation in [-1, 1]")
    p.add_argument("--lambda", dest="lam", type=positive, default=None, help="covariance amplitude > 0")
    p.add_argument("--amplitude", type=positive, default=None, help="covariance amplitude A > 0")
    p.add_argument("--n", type=length_arg, default=None, help="series length n >= 2")
    p.add_argument("--m", type=_ranged("m", 4, None, lo_open=False, cast=int), default=None, help="box size m >= 4")
    p.add_argument("--lag", type=lag_arg, default=None, help="lag k >= 0")
    p.add_argument("--omega", type=_ranged("omega", 0.0, math.pi, hi_open=False), default=None, help="frequency in (0, pi]")
    p.add_argument("--tolerance", type=positive, default=1e-10)
    p.add_argument("--s", type=float, default=None, help="zeta argument, s != 1")
    p.add_argument("--q", type=_ranged("q", 0.0, 1.0, lo_open=False), default=None, help="theta nome in [0, 1)")

    p = add("reproduce", cmd_reproduce, "rerun a table or regenerate figure data")
    p.add_argument("target", choices=sorted(TABLES) + sorted(FIGURES))
    p.add_argument("--replicates", type=count_arg, default=1000, help="Monte Carlo replicates L >= 1")
    p.add_argument("--seed", type=seed_arg, default=42, help="master seed in [0, 2^64)")
    p.add_argument("--workers", type=count_arg, default=None, help="worker processes >= 1")
    p.add_argument("--n", type=_ranged("n", 16, None, lo_open=False, cast=int), nargs="+", default=None,
                   help="series length(s) n >= 16 (tables default 1024, figures 16384)")
    p.add_argument("--hurst", type=hurst_arg, default=0.7, help="figure Hurst exponent in (0.5, 1)")

    p = add("acv", cmd_acv, "sample autocovariance of a series file")
    p.add_argument("input")
    p.add_argument("--max-lag", type=lag_arg, default=100, help="largest lag >= 0")

    p = add("periodogram", cmd_periodogram, "periodogram of a series file")
    p.add_argument("input")

    p = add("run", cmd_run, "run an experiment from a YAML config")
    p.add_argument("config")
    p.add_argument("--replicates", type=count_arg, default=None)
    p.add_argument("--seed", type=seed_arg, default=None)
    p.add_argument("--workers", type=count_arg, default=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except Exception as exc:  # surfaced as one machine-readable line
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
