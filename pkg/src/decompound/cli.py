"""Command-line interface.

Subcommands: simulate, estimate, cov, test, power, diagnose, reproduce.
Bin series travel as JSON objects {"h": <seconds>, "counts": [<ints>]}
(or whitespace-separated integers in text mode with an explicit --h);
result tables are CSV with a header line and 9-significant-digit floats.
Exit codes: 0 on success, 2 on validation/input errors, 3 on numeric or
correction failures.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from .covariance import KernelSpec, cov_rates, cov_tails, plug_in_spec
from .ecf import continuous_log, default_grid_size, ecf_eval, histogram, shrink
from .errors import EstimationError
from .estimate import EstimationOptions, estimate_rates_fourier
from .inference import max_v_test, power_profile, screening_report, wald_test
from .model import RateProfile, asymptotics_report, cf_theoretical
from .simulate import BinSeries, simulate_bins, simulate_raster

__all__ = ["main", "read_bins", "write_bins"]

_FLOAT_FMT = "{:.9g}"


def _fmt(x) -> str:
    return _FLOAT_FMT.format(float(x))


def write_bins(path, bins: BinSeries) -> None:
    payload = {"h": bins.h, "counts": [int(c) for c in bins.counts]}
    Path(path).write_text(json.dumps(payload, allow_nan=False) + "\n", encoding="utf-8")


def read_bins(path, fmt: str = "json", h: float | None = None) -> BinSeries:
    """Load a bin series from JSON (default) or whitespace-separated text."""
    text = Path(path).read_text(encoding="utf-8")
    if fmt == "text":
        if h is None:
            raise ValueError("text format requires an explicit --h")
        try:
            counts = [int(tok) for tok in text.split()]
        except ValueError as exc:
            raise ValueError(f"{path}: {exc}") from exc
        return BinSeries(h, counts)
    if fmt != "json":
        raise ValueError(f"unknown bins format {fmt!r}")
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: malformed JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(payload, dict) or "h" not in payload or "counts" not in payload:
        raise ValueError(f'{path}: expected an object with "h" and "counts"')
    return BinSeries(payload["h"], payload["counts"])


def _parse_rates(text: str) -> RateProfile:
    try:
        rates = [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise ValueError(f"bad --rates value: {exc}") from exc
    return RateProfile(rates)


def _write_csv(path, header, rows) -> None:
    out = sys.stdout if path in (None, "-") else open(path, "w", newline="", encoding="utf-8")
    try:
        writer = csv.writer(out)
        writer.writerow(header)
        for row in rows:
            writer.writerow(
                [_fmt(x) if isinstance(x, float) else x for x in row]
            )
    finally:
        if out is not sys.stdout:
            out.close()


def _write_json(path, payload) -> None:
    text = json.dumps(payload, indent=2, allow_nan=False) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _options_from(args) -> EstimationOptions:
    return EstimationOptions(
        nmax=args.nmax,
        grid_size=args.grid_size,
        correction=args.correction,
        delta=args.delta,
        eps=args.eps,
    )


def _add_bins_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("-i", "--input", required=True, help="bin series file")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--h", type=float, default=None, help="bin width for text input")


def _add_estimation_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--nmax", type=int, default=12)
    p.add_argument("--grid-size", type=int, default=None, dest="grid_size")
    p.add_argument(
        "--correction",
        choices=("none", "auto-shrink", "auto-edit"),
        default="auto-edit",
    )
    p.add_argument("--delta", type=float, default=None, help="fixed shrinking parameter")
    p.add_argument("--eps", type=float, default=0.075, help="zero-editing radius excess")
    p.add_argument("--K", type=int, default=None, help="plug-in covariance truncation")


def _cmd_simulate(args) -> int:
    profile = _parse_rates(args.rates)
    bins = simulate_bins(profile, args.h, args.L, args.seed)
    write_bins(args.output, bins)
    if args.raster_out is not None:
        if args.neurons is None:
            raise ValueError("--raster-out requires --neurons")
        events = simulate_raster(
            profile, args.neurons, bins.T, np.random.SeedSequence(args.seed, spawn_key=(1,))
        )
        _write_csv(
            args.raster_out,
            ["neuron", "time"],
            [(ev.neuron, float(ev.time)) for ev in events],
        )
    return 0


def _cmd_estimate(args) -> int:
    bins = read_bins(args.input, args.format, args.h)
    opts = _options_from(args)
    table = screening_report(bins, args.nmax, opts, args.K)
    _write_csv(
        args.output,
        ["n", "nu_hat", "rho_hat", "V", "p"],
        [(int(n), float(nu), float(rho), float(v), float(p)) for n, nu, rho, v, p in table.rows()],
    )
    if args.summary is not None:
        result = estimate_rates_fourier(bins, opts)
        _write_json(
            args.summary,
            {
                "nu_plus_hat": result.nu_plus_hat,
                "winding_before": result.winding_before,
                "correction": result.correction,
                "correction_parameter": result.correction_parameter,
                "h": result.h,
                "T": result.T,
                "grid_size": result.grid_size,
            },
        )
    return 0


def _cmd_cov(args) -> int:
    if args.rates is not None:
        if args.h is None:
            raise ValueError("cov --rates requires --h")
        spec = KernelSpec.from_profile(_parse_rates(args.rates), args.h)
        T = args.T if args.T is not None else 1.0
    else:
        if args.input is None:
            raise ValueError("cov needs either --rates or -i/--input")
        bins = read_bins(args.input, args.format, args.h)
        est = estimate_rates_fourier(bins, _options_from(args))
        spec = plug_in_spec(est.rates, bins.h, args.K or args.nmax)
        T = bins.T
    matrix = (
        cov_rates(spec, T, args.nmax)
        if args.kind == "rates"
        else cov_tails(spec, T, args.nmax)
    )
    orders = list(range(1, args.nmax + 1))
    rows = [
        [m] + [float(x) for x in matrix.entries[i]] for i, m in enumerate(orders)
    ]
    _write_csv(args.output, ["order"] + orders, rows)
    return 0


def _cmd_test(args) -> int:
    bins = read_bins(args.input, args.format, args.h)
    opts = _options_from(args)
    if args.kind == "wald":
        if not args.zero_orders:
            raise ValueError("wald test needs --zero-orders, e.g. --zero-orders 2,3")
        orders = [int(tok) for tok in args.zero_orders.split(",")]
        if any(n < 1 or n > args.nmax for n in orders):
            raise ValueError(f"--zero-orders entries must lie in 1..{args.nmax}")
        est = estimate_rates_fourier(bins, opts)
        spec = plug_in_spec(est.rates, bins.h, args.K or args.nmax)
        omega = cov_rates(spec, bins.T, args.nmax)
        A = np.zeros((len(orders), args.nmax))
        for row, n in enumerate(orders):
            A[row, n - 1] = 1.0
        result = wald_test(est.rates, omega, A, bins.T)
    else:
        result = max_v_test(
            bins, args.m1, args.m2, args.B, args.seed, opts, args.K, args.threads
        )
    _write_json(
        args.output,
        {
            "kind": result.kind,
            "statistic": result.statistic,
            "df": result.df,
            "p_value": result.p_value,
        },
    )
    return 0


def _cmd_power(args) -> int:
    profile = _parse_rates(args.rates)
    prof = power_profile(
        profile,
        args.h,
        args.L,
        args.reps,
        args.threshold,
        args.nmax,
        args.seed,
        threads=args.threads,
    )
    _write_csv(
        args.output,
        ["n", "beta"],
        [(n + 1, float(b)) for n, b in enumerate(prof.beta)],
    )
    return 0


def _cmd_diagnose(args) -> int:
    if args.input is not None:
        bins = read_bins(args.input, args.format, args.h)
        p0 = histogram(bins).coeffs[0]
        if p0 <= 0:
            raise EstimationError("no empty bins observed; cannot estimate nu_plus")
        nu_plus = -math.log(p0) / bins.h
        h, T = bins.h, bins.T
    else:
        if args.nu_plus is None or args.h is None or args.T is None:
            raise ValueError("diagnose needs either -i/--input or --nu-plus, --h and --T")
        nu_plus, h, T = args.nu_plus, args.h, args.T
    _write_json(args.output, asymptotics_report(nu_plus, h, T).to_dict())
    return 0


_SCENARIOS = {
    "example1": {
        "rates": (40.0, 10.0, 4.0, 3.0, 1.0),
        "h": 0.02,
        "T": 30.0,
        "neurons": 30,
    },
    "example2": {
        "rates": (150.0, 0.0, 0.0, 0.0, 0.0, 0.0, 7.0),
        "h": 0.005,
        "T": 60.0,
        "neurons": 20,
    },
    "clustered": {
        "rates": (17.0, 11.0, 14.0, 6.0),
        "h": 0.05,
        "T": 60.0,
        "neurons": 25,
    },
}


def _raw_rates_from_poly(poly, nmax: int, h: float) -> np.ndarray:
    """Fourier rates straight from a coefficient polynomial, no correction."""
    log = continuous_log(ecf_eval(poly, default_grid_size(poly.degree)))
    coef = np.fft.fft(log.log_values)[1 : nmax + 1] / log.grid_size
    return coef.real / h


def _cmd_reproduce(args) -> int:
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    if args.figure == 1:
        _reproduce_figure1(outdir, args.seed)
    elif args.figure == 2:
        _reproduce_figure2(outdir, args.seed, args.threads)
    else:
        _reproduce_figure3(outdir, args.seed)
    return 0


def _reproduce_figure1(outdir: Path, seed: int) -> None:
    for idx, name in enumerate(("example1", "example2")):
        sc = _SCENARIOS[name]
        profile = RateProfile(sc["rates"])
        L = int(round(sc["T"] / sc["h"]))
        bins = simulate_bins(
            profile, sc["h"], L, np.random.SeedSequence(seed, spawn_key=(idx,))
        )
        write_bins(outdir / f"{name}_bins.json", bins)
        freq = histogram(bins).coeffs
        _write_csv(
            outdir / f"{name}_histogram.csv",
            ["count", "frequency"],
            [(k, float(f)) for k, f in enumerate(freq)],
        )
        events = simulate_raster(
            profile, sc["neurons"], sc["T"], np.random.SeedSequence(seed, spawn_key=(100 + idx,))
        )
        _write_csv(
            outdir / f"{name}_raster.csv",
            ["neuron", "time"],
            [(ev.neuron, float(ev.time)) for ev in events],
        )


def _reproduce_figure2(outdir: Path, seed: int, threads: int) -> None:
    reps, nmax, threshold = 50, 12, 2.0
    for name in ("example1", "example2"):
        sc = _SCENARIOS[name]
        profile = RateProfile(sc["rates"])
        L = int(round(sc["T"] / sc["h"]))
        rows = []
        for r in range(reps):
            bins = simulate_bins(
                profile, sc["h"], L, np.random.SeedSequence(seed, spawn_key=(r,))
            )
            est = estimate_rates_fourier(bins, EstimationOptions(nmax=nmax))
            true = np.zeros(nmax)
            true[: profile.max_jump] = profile.rates
            rows.extend(
                (r, n + 1, float(true[n]), float(est.rates.rates[n]))
                for n in range(nmax)
            )
        _write_csv(outdir / f"{name}_rates.csv", ["replicate", "n", "nu_true", "nu_hat"], rows)
        prof = power_profile(
            profile, sc["h"], L, reps, threshold, nmax, seed, threads=threads
        )
        _write_csv(
            outdir / f"{name}_power.csv",
            ["n", "beta"],
            [(n + 1, float(b)) for n, b in enumerate(prof.beta)],
        )


def _reproduce_figure3(outdir: Path, seed: int) -> None:
    sc = _SCENARIOS["clustered"]
    profile = RateProfile(sc["rates"])
    L = int(round(sc["T"] / sc["h"]))
    reps, nmax = 50, 12
    delta, eps = 0.02, 0.075
    profile_rows, imlog_rows, winding_rows = [], [], []
    grid = 256
    theta = 2.0 * np.pi * np.arange(grid) / grid
    true_log = np.log(cf_theoretical(profile, sc["h"], theta))
    imlog_rows.extend(
        ("true", float(t), float(v)) for t, v in zip(theta, true_log.imag)
    )
    for r in range(reps):
        bins = simulate_bins(
            profile, sc["h"], L, np.random.SeedSequence(seed, spawn_key=(r,))
        )
        poly = histogram(bins)
        try:
            log = continuous_log(ecf_eval(poly, default_grid_size(poly.degree)))
        except EstimationError:
            # the loop passes through the origin; the plain log is undefined
            winding_rows.append((r, "undefined"))
            log = None
        else:
            winding_rows.append((r, log.winding))
            step = log.grid_size // grid
            imlog_rows.extend(
                (str(r), float(t), float(v))
                for t, v in zip(theta, log.log_values[::step].imag[:grid])
            )
        for method in ("plain", "shrink", "edit"):
            if method == "plain":
                if log is None:
                    continue
                rates = _raw_rates_from_poly(poly, nmax, sc["h"])
            elif method == "shrink":
                rates = _raw_rates_from_poly(shrink(poly, delta), nmax, sc["h"])
            else:
                est = estimate_rates_fourier(
                    bins, EstimationOptions(nmax=nmax, correction="auto-edit", eps=eps)
                )
                rates = est.rates.rates
            profile_rows.extend(
                (r, method, n + 1, float(rates[n])) for n in range(nmax)
            )
    _write_csv(outdir / "clustered_windings.csv", ["replicate", "winding"], winding_rows)
    _write_csv(
        outdir / "clustered_rates.csv",
        ["replicate", "method", "n", "nu_hat"],
        profile_rows,
    )
    _write_csv(
        outdir / "clustered_imlog.csv",
        ["replicate", "theta", "im_log"],
        imlog_rows,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="decompound",
        description="Recover jump-rate profiles of compound Poisson count data.",
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=os.cpu_count() or 1,
        help="worker threads for replicate loops",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="draw bin counts from a rate profile")
    p.add_argument("--rates", required=True, help="comma-separated nu_1,nu_2,...")
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--neurons", type=int, default=None)
    p.add_argument("--raster-out", default=None, dest="raster_out")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("estimate", help="estimate rates and write a screening table")
    _add_bins_input(p)
    _add_estimation_options(p)
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--summary", default=None, help="also write a JSON run summary")
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("cov", help="covariance matrix of rate or tail estimates")
    p.add_argument("-i", "--input", default=None)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--rates", default=None, help="evaluate at a true profile instead")
    p.add_argument("--h", type=float, default=None)
    p.add_argument("--T", type=float, default=None)
    p.add_argument("--kind", choices=("rates", "tails"), default="rates")
    _add_estimation_options(p)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=_cmd_cov)

    p = sub.add_parser("test", help="Wald or bootstrap max-V hypothesis test")
    _add_bins_input(p)
    _add_estimation_options(p)
    p.add_argument("--kind", choices=("wald", "maxv"), required=True)
    p.add_argument("--zero-orders", default=None, dest="zero_orders")
    p.add_argument("--m1", type=int, default=2)
    p.add_argument("--m2", type=int, default=7)
    p.add_argument("--B", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=_cmd_test)

    p = sub.add_parser("power", help="Monte Carlo power profile of the V_n tests")
    p.add_argument("--rates", required=True)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--reps", type=int, default=50)
    p.add_argument("--threshold", type=float, default=2.0)
    p.add_argument("--nmax", type=int, default=12)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=_cmd_power)

    p = sub.add_parser("diagnose", help="asymptotics validity report")
    p.add_argument("-i", "--input", default=None)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--nu-plus", type=float, default=None, dest="nu_plus")
    p.add_argument("--h", type=float, default=None)
    p.add_argument("--T", type=float, default=None)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=_cmd_diagnose)

    p = sub.add_parser("reproduce", help="emit the simulation-study datasets (1, 2, 3)")
    p.add_argument("--figure", type=int, choices=(1, 2, 3), required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_reproduce)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EstimationError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
