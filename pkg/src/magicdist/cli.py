"""Command-line front end.

Every command that consumes randomness takes a --seed and is
bit-reproducible: identical CSV/JSON bytes across runs and thread counts.
CSV uses RFC-4180 CRLF records with 17 significant digits; metadata rides
in leading '#' comment lines.  JSON payloads carry the schema marker
"magicdist/1".  Exit codes: 0 ok, 2 bad input, 3 unsupported parameter,
4 resource guard, 5 statistical insufficiency.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys

import numpy as np

from . import exact_pdf, montecarlo, svgplot
from .errors import (
    InsufficientData,
    InvalidBlochVector,
    InvalidDimension,
    InvalidEdges,
    InvalidObservable,
    InvalidOrder,
    InvalidSpectrum,
    ResourceLimit,
    SingularPoint,
    SupportMismatch,
)
from .pauli_spectrum import magic_report, pauli_spectrum_fast, weyl_spectrum
from .statevec import BlochVector, SeededRng, from_bloch, haar_sample, state_from_amplitudes

SCHEMA = "magicdist/1"

EXIT_INPUT = 2
EXIT_UNSUPPORTED = 3
EXIT_RESOURCE = 4
EXIT_STATISTICS = 5

_INPUT_ERRORS = (
    InvalidDimension,
    InvalidBlochVector,
    InvalidObservable,
    InvalidSpectrum,
    InvalidEdges,
    SupportMismatch,
    ValueError,
)


def _g17(v: float) -> str:
    return format(float(v), ".17g")


def _csv_bytes(comments, header, rows) -> bytes:
    lines = [f"# {c}" for c in comments]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_g17(v) if isinstance(v, float) else str(v) for v in row))
    return ("\r\n".join(lines) + "\r\n").encode()


def _emit(data: bytes, path: str | None):
    if path is None or path == "-":
        sys.stdout.write(data.decode())
    else:
        with open(path, "wb") as fh:
            fh.write(data)


def _json_out(payload: dict, path: str | None):
    doc = {"schema": SCHEMA}
    doc.update(payload)
    _emit((json.dumps(doc, indent=2) + "\n").encode(), path)


def _default_threads(value):
    if value is not None:
        return value
    env = os.environ.get("MAGICDIST_THREADS")
    return int(env) if env else 1


def _parse_state(args):
    if args.bloch:
        parts = [float(p) for p in args.bloch.split(",")]
        if len(parts) != 3:
            raise ValueError("--bloch needs three comma-separated components")
        return from_bloch(BlochVector(*parts))
    if args.amplitudes:
        parts = [float(p) for p in args.amplitudes.split(",")]
        if len(parts) % 2:
            raise ValueError("--amplitudes needs re,im pairs")
        amps = np.array(parts[0::2]) + 1j * np.array(parts[1::2])
        amps = amps / np.linalg.norm(amps)
        return state_from_amplitudes(amps, local_dim=args.local_dim)
    if args.haar:
        return haar_sample(args.dim, SeededRng(args.seed), local_dim=args.local_dim or None)
    raise ValueError("state required: --bloch, --amplitudes or --haar")


def cmd_measure(args) -> int:
    state = _parse_state(args)
    spec = weyl_spectrum(state) if state.local_dim != 2 else pauli_spectrum_fast(state)
    report = magic_report(spec, args.alpha, state=state)
    m_val = report.m_alpha / math.log(2.0) if args.bits else report.m_alpha
    payload = {
        "alpha": report.alpha,
        "n_alpha": report.n_alpha,
        "xi_alpha": report.xi_alpha,
        "m_alpha": m_val,
        "m_alpha_units": "bits" if args.bits else "nats",
        "m_lin": report.m_lin,
        "gamma_alpha": report.gamma_alpha,
        "coherence": report.coherence,
        "dim": state.dim,
    }
    _json_out(payload, args.output)
    return 0


def _curve_csv(curve, tol) -> bytes:
    comments = [
        f"variable={curve.variable} alpha={curve.alpha:g} tol={tol:g}",
        f"support=[{_g17(curve.support[0])},{_g17(curve.support[1])}]",
        "singular=" + ",".join(_g17(c) for c in curve.singular_points),
        f"integral={curve.integral():.6f}",
    ]
    rows = list(zip(curve.abscissas.tolist(), curve.densities.tolist()))
    return _csv_bytes(comments, ["abscissa", "density"], rows)


def cmd_exact_pdf(args) -> int:
    curve = exact_pdf.tabulate_pdf(
        args.variable, alpha=args.alpha, num_points=args.points, tol=args.tol
    )
    csv_payload = _curve_csv(curve, args.tol)
    if args.format == "csv":
        _emit(csv_payload, args.output)
    else:
        svg = svgplot.plot_svg(
            [(curve.abscissas, curve.densities, "#b03030", "line")],
            title=f"exact density of {curve.variable.upper()} (alpha={curve.alpha:g})",
            xlabel=curve.variable,
            marks=curve.singular_points,
            log_y=args.log_y,
            data_table=csv_payload.decode(),
        )
        _emit(svg.encode(), args.output)
    return 0


def _measure_tag(args) -> str:
    return f"{args.measure}/alpha={args.alpha:g}/q={args.q}/n={args.sites}"


def cmd_sample(args) -> int:
    measure = montecarlo.canonical_measure(args.measure)
    if args.window:
        lo, hi = (float(p) for p in args.window.split(","))
    elif measure in ("n", "xi", "m") and args.q == 2 and args.sites == 1:
        lo, hi = exact_pdf.support_for(measure, args.alpha)
    elif measure == "coherence":
        lo, hi = 0.0, 1.0
    elif measure == "observable":
        lo, hi = -1.0, 1.0
    else:
        probe = montecarlo.sample_array(measure, args.alpha, args.q, args.sites,
                                        min(args.samples, 20000), args.seed)
        span = probe.max() - probe.min()
        lo, hi = probe.min() - 0.05 * span, probe.max() + 0.05 * span
    edges = np.linspace(lo, hi, args.bins + 1)
    hist = montecarlo.histogram_measure(
        measure, args.alpha, args.q, args.sites, args.samples, args.seed, edges,
        threads=_default_threads(args.threads),
    )
    overlay = None
    if args.overlay_exact:
        if not (args.q == 2 and args.sites == 1 and args.alpha == 2 and measure in ("n", "xi", "m")):
            raise InvalidOrder("exact overlay available for q=2, n=1, alpha=2, measures N/Xi/M")
        overlay = exact_pdf.tabulate_pdf(measure, alpha=2.0)

    dens = hist.density()
    comments = [
        f"measure={measure} alpha={args.alpha:g} q={args.q} n_sites={args.sites}",
        f"n_samples={args.samples} seed={args.seed} out_of_range={hist.n_below + hist.n_above}",
    ]
    rows = [
        (float(hist.edges[i]), float(hist.edges[i + 1]), int(hist.counts[i]), float(dens[i]))
        for i in range(hist.counts.size)
    ]
    csv_payload = _csv_bytes(comments, ["bin_left", "bin_right", "count", "density"], rows)
    if args.format == "csv":
        _emit(csv_payload, args.output)
    else:
        series = [(hist.edges, dens, "#3050b0", "step")]
        marks = ()
        if overlay is not None:
            series.append((overlay.abscissas, overlay.densities, "#b03030", "line"))
            marks = overlay.singular_points
        svg = svgplot.plot_svg(
            series,
            title=_measure_tag(args),
            xlabel=measure,
            marks=marks,
            log_y=args.log_y,
            data_table=csv_payload.decode(),
        )
        _emit(svg.encode(), args.output)
    return 0


def cmd_fit_divergence(args) -> int:
    window = tuple(float(p) for p in args.window.split(","))
    center = args.center if args.center is not None else exact_pdf.n_critical(args.alpha)
    if args.exact:
        if args.alpha != 2:
            raise InvalidOrder("exact-curve mode needs alpha = 2")
        curve = exact_pdf.tabulate_pdf("n", alpha=2.0, num_points=800, guard=window[0] / 10)
        fit = montecarlo.fit_log_divergence(curve, center, window, side=args.side)
        payload = {
            "mode": "exact",
            "center": fit.center,
            "slope": fit.slope,
            "intercept": fit.intercept,
            "window": list(fit.window),
            "side": fit.side,
            "r_squared": fit.r_squared,
            "n_points": fit.n_points,
        }
        _json_out(payload, args.output)
        return 0

    # geometric bins around the center keep the ln regressor well conditioned
    wings = np.geomspace(window[0] / 2, window[1] * 2, args.bins_per_side + 1)
    edges = np.unique(np.concatenate([center - wings, center + wings]))
    hist = montecarlo.histogram_measure(
        "n", args.alpha, 2, 1, args.samples, args.seed, edges,
        threads=_default_threads(args.threads), strict_support=False,
    )
    if args.scan:
        candidates = center + np.linspace(-args.scan, args.scan, 41)
        best_center, fit, _ = montecarlo.scan_divergence_center(hist, candidates, window, args.side)
    else:
        best_center = center
        fit = montecarlo.fit_log_divergence(hist, center, window, side=args.side)
    ci = montecarlo.bootstrap_slope_ci(hist, best_center, window, side=args.side,
                                       n_boot=args.bootstrap, seed=args.seed + 1)
    payload = {
        "mode": "monte-carlo",
        "center": fit.center,
        "slope": fit.slope,
        "intercept": fit.intercept,
        "window": list(fit.window),
        "side": fit.side,
        "r_squared": fit.r_squared,
        "n_points": fit.n_points,
        "n_samples": args.samples,
        "seed": args.seed,
        "bootstrap_ci_95": list(ci),
    }
    _json_out(payload, args.output)
    return 0


def cmd_critical_points(args) -> int:
    points = exact_pdf.critical_points(args.alpha)
    payload = {
        "alpha": args.alpha,
        "points": [
            {
                "bloch": [p.bloch.n1, p.bloch.n2, p.bloch.n3],
                "class": p.class_label,
                "value": p.value,
                "multiplicity": p.multiplicity,
                "projected_gradient_norm": p.grad_norm,
            }
            for p in points
        ],
    }
    _json_out(payload, args.output)
    return 0


def cmd_mean_sre(args) -> int:
    value = exact_pdf.mean_sre_exact(tol=args.tol)
    ln2 = math.log(2.0)
    payload = {"mean_m2_nats": value, "mean_m2_bits": value / ln2, "tol": args.tol}
    if args.mc:
        mean, se = montecarlo.measure_mean("m", 2.0, 2, 1, args.mc, args.seed)
        payload.update({
            "mc_mean_nats": mean, "mc_standard_error_nats": se,
            "mc_mean_bits": mean / ln2, "mc_standard_error_bits": se / ln2,
            "mc_samples": args.mc, "mc_seed": args.seed,
        })
    _json_out(payload, args.output)
    return 0


_FIGURES = {
    "fig1_m2_density": dict(measure="m", q=2, sites=1, samples=10_000_000, bins=400,
                            overlay=True),
    "fig2_n2_density": dict(measure="n", q=2, sites=1, samples=10_000_000, bins=400,
                            overlay=True),
    "fig4_two_qubits": dict(measure="n", q=2, sites=2, samples=200_000, bins=200,
                            overlay=False),
    "fig4_six_qubits": dict(measure="n", q=2, sites=6, samples=200_000, bins=200,
                            overlay=False),
    "fig5_qutrit": dict(measure="n", q=3, sites=1, samples=400_000, bins=200,
                        overlay=False),
    "fig5_ququart": dict(measure="n", q=4, sites=1, samples=400_000, bins=200,
                         overlay=False),
}


def cmd_reproduce_figures(args) -> int:
    os.makedirs(args.outdir, exist_ok=True)
    manifest = {"seed": args.seed, "scale": args.scale, "outputs": {}}
    threads = _default_threads(args.threads)
    for name, cfg in _FIGURES.items():
        if args.only and name not in args.only:
            continue
        n_samples = max(int(cfg["samples"] * args.scale), 1000)
        ns = argparse.Namespace(
            measure=cfg["measure"], alpha=2.0, q=cfg["q"], sites=cfg["sites"],
            samples=n_samples, seed=args.seed, bins=cfg["bins"], window=None,
            overlay_exact=cfg["overlay"], format="csv",
            output=os.path.join(args.outdir, f"{name}.csv"),
            threads=threads, log_y=False,
        )
        cmd_sample(ns)
        ns.format = "svg"
        ns.output = os.path.join(args.outdir, f"{name}.svg")
        cmd_sample(ns)
        digest = hashlib.sha256(
            open(os.path.join(args.outdir, f"{name}.csv"), "rb").read()
        ).hexdigest()
        manifest["outputs"][name] = {
            "n_samples": n_samples,
            "csv": f"{name}.csv",
            "svg": f"{name}.svg",
            "csv_sha256": digest,
        }
    _json_out(manifest, os.path.join(args.outdir, "manifest.json"))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="magicdist",
                                description="Haar distributions of stabilizer entropies")
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp, seeded=True):
        sp.add_argument("--output", "-o", default=None, help="file path, default stdout")
        if seeded:
            sp.add_argument("--seed", type=int, default=2024)
            sp.add_argument("--threads", type=int, default=None,
                            help="worker cap, default $MAGICDIST_THREADS or 1")

    sp = sub.add_parser("measure", help="magic measures of one state")
    sp.add_argument("--bloch", help="n1,n2,n3")
    sp.add_argument("--amplitudes", help="re,im,re,im,...")
    sp.add_argument("--haar", action="store_true")
    sp.add_argument("--dim", type=int, default=2)
    sp.add_argument("--local-dim", type=int, default=2)
    sp.add_argument("--alpha", type=float, default=2.0)
    sp.add_argument("--bits", action="store_true", help="report the entropy in bits")
    add_common(sp)
    sp.set_defaults(func=cmd_measure)

    sp = sub.add_parser("exact-pdf", help="tabulate a closed-form density")
    sp.add_argument("--variable", choices=["N", "Xi", "M", "n", "xi", "m"], required=True)
    sp.add_argument("--alpha", type=float, default=2.0)
    sp.add_argument("--points", type=int, default=600)
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.add_argument("--format", choices=["csv", "svg"], default="csv")
    sp.add_argument("--log-y", action="store_true")
    add_common(sp, seeded=False)
    sp.set_defaults(func=cmd_exact_pdf)

    sp = sub.add_parser("sample", help="histogram of a sampled measure")
    sp.add_argument("--measure", default="n",
                    help="n, xi, m, mlin, coherence or observable")
    sp.add_argument("--alpha", type=float, default=2.0)
    sp.add_argument("--q", type=int, default=2)
    sp.add_argument("--sites", type=int, default=1)
    sp.add_argument("--samples", type=int, default=1_000_000)
    sp.add_argument("--bins", type=int, default=400)
    sp.add_argument("--window", help="lo,hi histogram range")
    sp.add_argument("--overlay-exact", action="store_true")
    sp.add_argument("--format", choices=["csv", "svg"], default="csv")
    sp.add_argument("--log-y", action="store_true")
    add_common(sp)
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("fit-divergence", help="logarithmic divergence fit")
    sp.add_argument("--alpha", type=float, default=2.0)
    sp.add_argument("--exact", action="store_true", help="fit the exact curve")
    sp.add_argument("--center", type=float, default=None)
    sp.add_argument("--window", default="1e-5,1e-3", help="eps_min,eps_max")
    sp.add_argument("--side", choices=["left", "right", "both"], default="both")
    sp.add_argument("--samples", type=int, default=10_000_000)
    sp.add_argument("--bins-per-side", type=int, default=48)
    sp.add_argument("--bootstrap", type=int, default=100)
    sp.add_argument("--scan", type=float, default=None,
                    help="scan centers within +-SCAN for max r^2")
    add_common(sp)
    sp.set_defaults(func=cmd_fit_divergence)

    sp = sub.add_parser("critical-points", help="the 26 critical Bloch vectors")
    sp.add_argument("--alpha", type=float, default=2.0)
    add_common(sp, seeded=False)
    sp.set_defaults(func=cmd_critical_points)

    sp = sub.add_parser("mean-sre", help="exact Haar mean of the order-2 entropy")
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("--mc", type=int, default=0, help="cross-check sample count")
    add_common(sp)
    sp.set_defaults(func=cmd_mean_sre)

    sp = sub.add_parser("reproduce-figures", help="standard density pipelines")
    sp.add_argument("--outdir", required=True)
    sp.add_argument("--scale", type=float, default=1.0,
                    help="multiply the standard sample counts")
    sp.add_argument("--only", nargs="*", help="subset of figure names")
    add_common(sp)
    sp.set_defaults(func=cmd_reproduce_figures)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (NotImplementedError, InvalidOrder) as exc:
        print(f"unsupported parameter: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except ResourceLimit as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (InsufficientData, SingularPoint) as exc:
        print(f"statistical insufficiency: {exc}", file=sys.stderr)
        return EXIT_STATISTICS
    except _INPUT_ERRORS as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
