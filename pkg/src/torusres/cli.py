"""Command-line interface.

Subcommands: count, gowers, l4, kernel, coprime, resonance, simulate, verify.
Global flags: --seed, --format {json,csv}, --svg PATH, --config PATH (JSON
parameter map merged into the subcommand arguments).

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numerical
failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Optional

import numpy as np

from . import acceptance as acc
from . import gowers as gw
from . import lattice as lat
from . import parallelograms as par
from . import resonance as res
from . import schrodinger as sch
from . import solver as sol
from .errors import DomainError, NumericalBlowupError, PreconditionError, ResourceLimitError
from .svgplot import write_svg_plot


def _emit(args, payload: dict, csv_rows: Optional[tuple[str, list]] = None) -> None:
    if args.format == "csv" and csv_rows is not None:
        header, rows = csv_rows
        print(header)
        for row in rows:
            print(",".join(repr(float(v)) if isinstance(v, (float, np.floating))
                           else str(v) for v in row))
    else:
        print(json.dumps(payload, indent=2, default=_json_default))


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    raise TypeError(f"not JSON-serializable: {type(obj)}")


# --- subcommand handlers -------------------------------------------------

def cmd_count(args) -> int:
    s = par.PointSet.from_text(args.input)
    hist = par.resonance_histogram(s, size_bound=args.size_bound)
    rows = hist.to_rows()
    if args.max_tau is not None:
        rows = [r for r in rows if abs(r[0]) <= args.max_tau]
    payload = {
        "points": len(s),
        "energy": int(hist.total.real),
        "histogram": [{"tau": t, "count": c} for t, c, _ in rows],
    }
    if args.max_tau is not None:
        payload["cumulative"] = {
            "max_tau": args.max_tau,
            "with_zero": int(hist.cumulative(args.max_tau, True).real),
            "without_zero": int(hist.cumulative(args.max_tau, False).real),
        }
    _emit(args, payload, ("tau,count_or_real,imag", rows))
    if args.svg:
        xs = [r[0] for r in rows]
        write_svg_plot(args.svg, xs, {"count": [r[1] for r in rows]},
                       title="resonance-level histogram", xlabel="tau",
                       ylabel="count", scatter=True)
    return 0


def _load_box_function(path) -> gw.BoxFunction:
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#") or line[0].isalpha():
                continue
            rows.append([float(v) for v in line.split(",")])
    width = len(rows[0])
    if width == 3:
        n = int(max(abs(r[0]) for r in rows))
        vals = np.zeros(2 * n + 1, dtype=np.complex128)
        for x, re, im in rows:
            vals[int(x) + n] = complex(re, im)
        return gw.BoxFunction(1, n, vals)
    if width == 4:
        n = int(max(max(abs(r[0]), abs(r[1])) for r in rows))
        vals = np.zeros((2 * n + 1, 2 * n + 1), dtype=np.complex128)
        for x, y, re, im in rows:
            vals[int(x) + n, int(y) + n] = complex(re, im)
        return gw.BoxFunction(2, n, vals)
    raise DomainError("box CSV must have 3 (1D) or 4 (2D) columns")


def cmd_gowers(args) -> int:
    if args.input:
        f = _load_box_function(args.input)
    else:
        rng = np.random.default_rng(args.seed)
        n = args.random
        if args.dimension == 1:
            vals = np.exp(1j * rng.uniform(0, 2 * math.pi, 2 * n + 1))
        else:
            vals = np.exp(1j * rng.uniform(0, 2 * math.pi, (2 * n + 1, 2 * n + 1)))
        f = gw.BoxFunction(args.dimension, n, vals)
    out = {"k": args.k, "N": f.halfwidth, "d": f.dimension, "method": args.method}
    if args.method in ("explicit", "both"):
        out["norm"] = gw.gowers_norm_explicit(f, args.k)
    if args.method in ("recursive", "both"):
        out["norm_recursive"] = gw.gowers_norm_recursive(f, args.k)
        if args.method == "recursive":
            out["norm"] = out.pop("norm_recursive")
    _emit(args, out)
    return 0


def cmd_l4(args) -> int:
    state = sch.FourierState.read_csv(args.state)
    hist = sch.state_histogram(state, size_bound=args.size_bound)
    rep = sch.spacetime_l4(state, args.t0, args.t1, cross_check=args.cross_check,
                           histogram=hist)
    payload = {
        "t0": args.t0, "t1": args.t1, "modes": len(state.coefficients),
        "l2_norm": state.l2_norm(),
        "l4_spacetime": rep.value_combinatorial,
    }
    if rep.value_quadrature is not None:
        payload["l4_spacetime_quadrature"] = rep.value_quadrature
    if args.fejer is not None:
        payload["fejer_norm"] = {
            "M": args.fejer, "N": args.norm_n,
            "sum_form": sch.fejer_l4_norm(state, args.fejer, args.norm_n, "sum", histogram=hist),
            "integral_form": sch.fejer_l4_norm(state, args.fejer, args.norm_n, "integral"),
        }
    _emit(args, payload)
    if args.svg:
        ts = np.linspace(args.t0, args.t1, 400)
        gs = sch.density_series(hist, ts)
        write_svg_plot(args.svg, list(ts), {"g(t)": list(gs)},
                       title="quartic density", xlabel="t", ylabel="g")
    return 0


def cmd_kernel(args) -> int:
    n_list = [int(v) for v in args.n_list.split(",")]
    if args.extinction:
        rows = sch.extinction_scan(n_list, big_t=args.big_t, eps=args.eps)
        payload = {"extinction": rows, "T": args.big_t, "eps": args.eps}
        csv_rows = ("N,t_lo,t_hi,value",
                    [(r["N"], r["t_lo"], r["t_hi"], r["value"]) for r in rows])
        _emit(args, payload, csv_rows)
        if args.svg:
            write_svg_plot(args.svg, [r["N"] for r in rows],
                           {"value": [r["value"] for r in rows]},
                           title="extinction scan", xlabel="N", ylabel="normalized L4",
                           scatter=True)
        return 0
    rng = np.random.default_rng(args.seed)
    thetas = list(rng.uniform(0, 1, args.samples)) + [0.0, 0.5, 1 / 3, 2 / 5]
    rows = sch.kernel_bound_scan(n_list, thetas)
    payload = {"rows": rows, "max_ratio": max(r["ratio"] for r in rows)}
    csv_rows = ("N,theta,a,q,sup,bound,ratio",
                [(r["N"], r["theta"], r["a"], r["q"], r["sup"], r["bound"], r["ratio"])
                 for r in rows])
    _emit(args, payload, csv_rows)
    if args.svg:
        write_svg_plot(args.svg, [r["theta"] for r in rows],
                       {"ratio": [r["ratio"] for r in rows]},
                       title="kernel peak / rational-time bound", xlabel="theta",
                       ylabel="ratio", scatter=True)
    return 0


def cmd_coprime(args) -> int:
    count = lat.coprime_count(args.radius)
    payload = {
        "radius": args.radius,
        "count": count,
        "ratio": count / (math.pi * args.radius ** 2),
        "target": 0.607927,
    }
    if args.inverse_square:
        radii = [2.0 ** k for k in range(8, 15)]
        vals = lat.coprime_inverse_square_ladder(radii)
        slope, intercept = lat.fit_log_slope(radii, vals)
        payload["inverse_square"] = {
            "radii": radii, "values": vals,
            "slope": slope, "intercept": intercept, "slope_target": 12 / math.pi,
        }
    _emit(args, payload)
    return 0


def cmd_resonance(args) -> int:
    if args.rates:
        data = res.SparseGaussianData(spacing=args.spacing, width=args.width,
                                      amplitude=args.amplitude)
        rep = res.predicted_mode_rates(data, mu=args.mu)
        payload = {
            "spacing": data.spacing, "width": data.width,
            "weighted_mean_rate": rep.weighted_mean_rate,
            "reference_rate": 3 * args.amplitude ** 2 * math.log(data.sigma),
            "modes": len(rep.per_xi),
        }
        rows = [(x, y, r, rate) for (x, y), r, rate in rep.per_xi]
        _emit(args, payload, ("xi1,xi2,R,rate", rows))
        return 0
    ws = [float(v) for v in args.widths.split(",")]
    rows = res.resonant_ladder(ws, truncation_factor=args.truncation_factor)
    alpha, beta = lat.fit_log_slope([r["W"] for r in rows],
                                    [r["R_over_W2"] for r in rows])
    payload = {"ladder": rows, "alpha": alpha, "beta": beta, "alpha_target": 3.0}
    csv_rows = ("W,R,fit_residual", [(r["W"], r["R"], r["fit_residual"]) for r in rows])
    _emit(args, payload, csv_rows)
    if args.svg:
        write_svg_plot(args.svg, [math.log(r["W"]) for r in rows],
                       {"R/W^2": [r["R_over_W2"] for r in rows]},
                       title="resonant sum growth", xlabel="ln W", ylabel="R/W^2")
    return 0


def cmd_simulate(args) -> int:
    if args.experiment == "approx":
        data = res.SparseGaussianData(spacing=args.spacing, width=args.width,
                                      amplitude=args.amplitude)
        horizon = args.horizon if args.horizon else \
            res.HORIZON_CONSTANT / sch.log_plus(data.sigma)
        cfg = sol.NlsConfig(cutoff=int(data.cutoff_radius), grid=args.grid,
                            dt=args.dt, mu=args.mu, t_end=horizon,
                            sample_every=args.sample_every)
        rep = res.approx_solution_experiment(data, cfg, horizon,
                                             n_samples=args.n_samples)
        payload = {
            "horizon": rep.horizon, "fitted_rate": rep.fitted_rate,
            "oracle_rate": rep.oracle_rate, "mass_drift": rep.mass_drift,
            "lam_eff": rep.lam_eff,
            "error_plain_at_horizon": float(rep.error_plain[-1]),
            "error_corrected_at_horizon": float(rep.error_corrected[-1]),
        }
        rows = rep.rows()
        _emit(args, payload, ("t,error_plain,error_corrected,fitted_phase", rows))
        if args.svg:
            write_svg_plot(args.svg, [r[0] for r in rows],
                           {"plain": [r[1] for r in rows],
                            "corrected": [r[2] for r in rows]},
                           title="nonlinear vs phase-corrected free flow",
                           xlabel="t", ylabel="L2 error")
        return 0
    state = sch.FourierState.read_csv(args.state)
    cfg = sol.NlsConfig(cutoff=args.cutoff, grid=args.grid, dt=args.dt,
                        mu=args.mu, t_end=args.t_end, sample_every=args.sample_every)
    traj = sol.evolve(state, cfg)
    payload = {
        "t_end": args.t_end, "steps": int(round(args.t_end / args.dt)),
        "mass_drift": traj.mass_drift(),
        "final_energy": float(traj.energy[-1]),
    }
    rows = [(float(t), float(m), float(e), float(l4))
            for t, m, e, l4 in zip(traj.times, traj.mass, traj.energy, traj.l4_slice)]
    _emit(args, payload, ("t,mass,energy,l4_slice", rows))
    if args.svg:
        write_svg_plot(args.svg, [r[0] for r in rows],
                       {"mass": [r[1] for r in rows], "energy": [r[2] for r in rows]},
                       title="trajectory diagnostics", xlabel="t", ylabel="value")
    return 0


def cmd_verify(args) -> int:
    subset = [int(v) for v in args.criteria.split(",")] if args.criteria else None
    failures = 0
    print(f"{'':3}{'criterion':42}{'status':8}{'time':>8}  detail")

    def report(r):
        nonlocal failures
        status = "PASS" if r.passed else "FAIL"
        if not r.passed:
            failures += 1
        print(f"{r.index:>2} {r.name:42}{status:8}{r.seconds:7.1f}s  {r.detail}")

    acc.run_suite(quick=args.quick, seed=args.seed, subset=subset, report=report)
    print("verification:", "OK" if failures == 0 else f"{failures} FAILED")
    return 0 if failures == 0 else 1


# --- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="torusres",
                                description="rectangle-resonance counting and dispersive "
                                            "L4 verification on the 2-torus")
    p.add_argument("--config", help="JSON file whose keys override subcommand defaults")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--svg", help="write a plot to this path")

    sp = sub.add_parser("count", help="resonance-level histogram of a point set")
    sp.add_argument("--input", required=True, help="text file: 'x y' per line")
    sp.add_argument("--max-tau", type=int, default=None)
    sp.add_argument("--size-bound", type=int, default=par.DEFAULT_SIZE_BOUND)
    common(sp)
    sp.set_defaults(func=cmd_count)

    sp = sub.add_parser("gowers", help="Gowers U^k norm of a box function")
    sp.add_argument("--input", help="CSV x,re,im (1D) or x,y,re,im (2D)")
    sp.add_argument("--random", type=int, default=8, help="halfwidth of a random function")
    sp.add_argument("--dimension", type=int, choices=(1, 2), default=1)
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--method", choices=("explicit", "recursive", "both"), default="both")
    common(sp)
    sp.set_defaults(func=cmd_gowers)

    sp = sub.add_parser("l4", help="spacetime L4 norms of a Fourier state")
    sp.add_argument("--state", required=True, help="CSV xi1,xi2,re,im")
    sp.add_argument("--t0", type=float, default=0.0)
    sp.add_argument("--t1", type=float, default=1.0)
    sp.add_argument("--fejer", type=int, default=None, help="Fejer weight M")
    sp.add_argument("--norm-n", type=int, default=1)
    sp.add_argument("--cross-check", action="store_true")
    sp.add_argument("--size-bound", type=int, default=par.DEFAULT_SIZE_BOUND)
    common(sp)
    sp.set_defaults(func=cmd_l4)

    sp = sub.add_parser("kernel", help="band-limited Dirac kernel scans")
    sp.add_argument("--n-list", default="8,16,32")
    sp.add_argument("--samples", type=int, default=12)
    sp.add_argument("--extinction", action="store_true")
    sp.add_argument("--big-t", type=float, default=1.0)
    sp.add_argument("--eps", type=float, default=0.5)
    common(sp)
    sp.set_defaults(func=cmd_kernel)

    sp = sub.add_parser("coprime", help="irreducible lattice point counts")
    sp.add_argument("--radius", type=float, default=10_000.0)
    sp.add_argument("--inverse-square", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_coprime)

    sp = sub.add_parser("resonance", help="resonant rectangle sums and mode rates")
    sp.add_argument("--widths", default="64,128,256,512,1024,2048,4096")
    sp.add_argument("--truncation-factor", type=float, default=6.0)
    sp.add_argument("--rates", action="store_true",
                    help="per-mode rates of sparse Gaussian data")
    sp.add_argument("--spacing", type=int, default=8)
    sp.add_argument("--width", type=float, default=32.0)
    sp.add_argument("--amplitude", type=float, default=0.1)
    sp.add_argument("--mu", type=int, choices=(-1, 1), default=1)
    common(sp)
    sp.set_defaults(func=cmd_resonance)

    sp = sub.add_parser("simulate", help="split-step evolution / approx experiment")
    sp.add_argument("--experiment", choices=("none", "approx"), default="none")
    sp.add_argument("--state", help="CSV xi1,xi2,re,im (plain evolution)")
    sp.add_argument("--cutoff", type=int, default=16)
    sp.add_argument("--grid", type=int, default=66)
    sp.add_argument("--dt", type=float, default=1e-3)
    sp.add_argument("--mu", type=int, choices=(-1, 1), default=1)
    sp.add_argument("--t-end", type=float, default=1.0)
    sp.add_argument("--sample-every", type=int, default=100)
    sp.add_argument("--spacing", type=int, default=8)
    sp.add_argument("--width", type=float, default=32.0)
    sp.add_argument("--amplitude", type=float, default=0.1)
    sp.add_argument("--horizon", type=float, default=None)
    sp.add_argument("--n-samples", type=int, default=12)
    common(sp)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("verify", help="run the acceptance suite")
    sp.add_argument("--quick", action="store_true", help="reduced-scale variants (< 5 min)")
    sp.add_argument("--criteria", help="comma-separated criterion numbers")
    common(sp)
    sp.set_defaults(func=cmd_verify)
    return p


def _apply_config(args, parser) -> None:
    if not getattr(args, "config", None):
        return
    with open(args.config, "r", encoding="utf-8") as fh:
        overrides = json.load(fh)
    for key, val in overrides.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            parser.error(f"unknown config key {key!r}")
        setattr(args, attr, val)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args, parser)
        return args.func(args)
    except (DomainError, PreconditionError, ResourceLimitError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalBlowupError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
