"""Command-line interface: `riskbounds <command> ...`.

Exit codes: 0 success (warnings allowed), 1 usage error, 2 data error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from pathlib import Path

from . import __version__
from . import distributions as dist
from .bootstrap import DEFAULT_REPLICATES, BootstrapConfig
from .concentration import Method, parse_methods
from .errors import DataError, DomainError, NumericalError, UsageError
from .io import load_measurements, measurement_warnings, sample_digest
from .plotdata import emit_plot_data
from .report import FORMATS, SCHEMA_VERSION, ReportDocument, emit_report, run_bound_command
from .simulation import (BOOTSTRAP_METHODS, PLUGIN_METHODS, STUDY_BOOTSTRAP_REPLICATES,
                         StudyConfig, known_moments_study, sampling_study)
from .tolerance import alpha_from_kfactor, k_factor
from .wilks import wilks_assess, wilks_min_n, wilks_plan

SEED_ENV = "RISKBOUNDS_SEED"
EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERICAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    """Raises UsageError instead of exiting, so main() controls the exit code."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _default_seed() -> int:
    text = os.environ.get(SEED_ENV)
    if text is None or not text.strip():
        return 0
    try:
        return int(text, 0)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {text!r}") from None


def _write(out, data: bytes, path=None) -> None:
    if path is not None:
        Path(path).write_bytes(data)
    else:
        out.write(data.decode())
        out.flush()


def _csv_rows(header, rows) -> bytes:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue().encode()


def _add_format(p) -> None:
    p.add_argument("--format", choices=FORMATS, default="json")
    p.add_argument("--output", "-o", help="write the report to this file instead of stdout")


def cmd_bound(args, out) -> int:
    methods = parse_methods(args.methods)
    have_moments = args.mean is not None or args.sd is not None
    if args.data is None and not have_moments:
        raise UsageError("bound needs --data or --mean/--sd")
    if args.data is not None and have_moments:
        raise UsageError("give --data or --mean/--sd, not both")
    bootstrap = None
    if args.bootstrap is not None:
        bootstrap = BootstrapConfig(args.bootstrap, args.confidence, args.seed)
    inputs = {"thresholds": args.threshold, "methods": [m.value for m in methods],
              "confidence": args.confidence, "bootstrap": args.bootstrap,
              "wilks_orders": args.wilks}
    sample = moments = None
    warnings = []
    if args.data is not None:
        sample = load_measurements(args.data, args.column)
        inputs["data_digest"] = sample_digest(sample)
        inputs["unit"] = sample.unit_label
        warnings = measurement_warnings(sample)
    else:
        if args.mean is None or args.sd is None:
            raise UsageError("--mean and --sd go together")
        moments = {"mean": args.mean, "sd": args.sd, "n": args.n}
    doc = run_bound_command(args.threshold, methods, sample=sample, moments=moments,
                            bootstrap=bootstrap, confidence=args.confidence,
                            wilks_orders=args.wilks, inputs=inputs)
    doc.warnings = warnings + doc.warnings
    for w in doc.warnings:
        print(f"warning: {w}", file=sys.stderr)
    _write(out, emit_report(doc, args.format), args.output)
    return EXIT_OK


def cmd_tolerance(args, out) -> int:
    doc = ReportDocument("tolerance", inputs={"n": args.n, "confidence": args.confidence})
    if (args.alpha is None) == (args.k is None):
        raise UsageError("tolerance needs exactly one of --alpha or --k")
    if args.alpha is not None:
        k = k_factor(args.n, args.alpha, args.confidence)
        doc.inputs["alpha"] = args.alpha
        doc.results.append({"kind": "kfactor", "n": args.n, "alpha": args.alpha,
                            "confidence": args.confidence, "k": k})
    else:
        a = alpha_from_kfactor(args.n, args.k, args.confidence)
        doc.inputs["k"] = args.k
        doc.results.append({"kind": "kfactor", "n": args.n, "alpha": a,
                            "confidence": args.confidence, "k": args.k})
    _write(out, emit_report(doc, args.format), args.output)
    return EXIT_OK


def cmd_wilks_plan(args, out) -> int:
    doc = ReportDocument("wilks plan", inputs={"gamma": args.gamma, "beta": args.beta,
                                               "order": args.order, "n": args.n})
    if args.n is None:
        if args.gamma is None:
            raise UsageError("wilks plan needs --gamma (minimum n) or --n (achieved gamma)")
        n = wilks_min_n(args.gamma, args.beta, args.order)
    else:
        n = args.n
    plan = wilks_plan(n, args.order, args.beta)
    doc.results.append({"kind": "wilks_plan", "n": plan.n, "order": plan.order,
                        "rank": plan.rank, "gamma": plan.gamma, "alpha": plan.alpha,
                        "confidence": plan.beta})
    _write(out, emit_report(doc, args.format), args.output)
    return EXIT_OK


def cmd_wilks_assess(args, out) -> int:
    sample = load_measurements(args.data, args.column)
    wa = wilks_assess(sample, args.order, args.beta)
    doc = ReportDocument("wilks assess",
                         inputs={"data_digest": sample_digest(sample), "order": args.order,
                                 "beta": args.beta, "unit": sample.unit_label},
                         warnings=measurement_warnings(sample))
    p = wa.plan
    doc.results.append({"kind": "wilks", "method": "wilks", "threshold": wa.threshold,
                        "alpha": wa.alpha, "provenance": "order_statistic",
                        "confidence": p.beta, "vacuous": False, "n": p.n,
                        "order": p.order, "rank": p.rank, "gamma": p.gamma})
    _write(out, emit_report(doc, args.format), args.output)
    return EXIT_OK


def _study_spec(args) -> dist.DistributionSpec:
    if (args.dist is None) == (args.mode is None):
        raise UsageError("simulate needs exactly one of --dist or --mode")
    if args.dist is not None:
        try:
            return dist.DistributionSpec.parse(args.dist)
        except (ValueError, DomainError) as exc:
            raise UsageError(str(exc)) from None
    if args.sd is None:
        raise UsageError("--mode needs --sd")
    return dist.lognormal_with_mode(args.mode, args.sd)


def cmd_simulate(args, out) -> int:
    spec = _study_spec(args)
    if args.penalization == "plugin":
        methods = PLUGIN_METHODS
        boot = None
    else:
        methods = BOOTSTRAP_METHODS
        boot = BootstrapConfig(args.bootstrap, args.confidence, 0)
    cfg = StudyConfig(spec, args.n, args.reps, args.quantile, methods, boot, args.seed,
                      args.confidence)
    res = sampling_study(cfg, workers=args.workers)
    props = res.proportion_nonconservative
    doc = ReportDocument("simulate", seed=args.seed,
                         inputs={"dist": str(spec), "n": args.n, "reps": args.reps,
                                 "quantile": args.quantile,
                                 "penalization": args.penalization,
                                 "bootstrap": args.bootstrap if boot else None,
                                 "confidence": args.confidence})
    doc.moments = {"threshold": res.threshold, "true_alpha": res.true_alpha}
    for m in methods:
        doc.results.append({"kind": "proportion", "method": m.value,
                            "proportion_nonconservative": props[m],
                            "standard_error": res.standard_error(m)})
    _write(out, emit_report(doc, args.format), args.output)
    if args.estimates is not None:
        table = zip(range(args.reps), *(res.estimates[m] for m in methods))
        rows = [[r] + [float(a) for a in vals] for r, *vals in table]
        _write(out, _csv_rows(["replication"] + [m.value for m in methods], rows),
               args.estimates)
    return EXIT_OK


def cmd_table2(args, out) -> int:
    doc = ReportDocument("table2", inputs={"quantile": args.quantile})
    for row in known_moments_study(quantile_order=args.quantile):
        rec = {"kind": "known_moments", "distribution": str(row.spec),
               "mode": dist.mode(row.spec), "threshold": row.threshold,
               "true_alpha": row.true_alpha}
        rec.update({m.value: a for m, a in row.alphas.items()})
        doc.results.append(rec)
    _write(out, emit_report(doc, args.format), args.output)
    return EXIT_OK


def cmd_plotdata(args, out) -> int:
    sample = load_measurements(args.data, args.column)
    _write(out, emit_plot_data(sample), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="riskbounds",
                description="Conservative exceedance-risk bounds from small samples.")
    p.add_argument("--version", action="version",
                   version=f"riskbounds {__version__} (report schema {SCHEMA_VERSION})")
    sub = p.add_subparsers(dest="command", parser_class=_Parser, required=True)
    seed = _default_seed()

    b = sub.add_parser("bound", help="risk of exceeding thresholds")
    b.add_argument("--data", help="CSV file with one numeric column")
    b.add_argument("--column", help="column name or 0-based index")
    b.add_argument("--mean", type=float)
    b.add_argument("--sd", type=float)
    b.add_argument("--n", type=int, help="sample size behind --mean/--sd (k-factor only)")
    b.add_argument("--threshold", "-s", type=float, action="append", required=True)
    b.add_argument("--methods", default="bc,cm,vd",
                   help="comma list of gauss,bc,cm,vd,kfactor or 'all'")
    b.add_argument("--bootstrap", type=int, nargs="?", const=DEFAULT_REPLICATES,
                   metavar="B", help=f"add bootstrap rows (default B={DEFAULT_REPLICATES})")
    b.add_argument("--confidence", type=float, default=0.95)
    b.add_argument("--wilks", type=int, action="append", default=[], metavar="ORDER",
                   help="add the Wilks limit of this order")
    b.add_argument("--seed", type=int, default=seed)
    _add_format(b)
    b.set_defaults(func=cmd_bound)

    t = sub.add_parser("tolerance", help="one-sided normal tolerance k-factor")
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--alpha", type=float)
    t.add_argument("--k", type=float, help="observed (s - mean) / sd; solve for alpha")
    t.add_argument("--confidence", type=float, default=0.95)
    _add_format(t)
    t.set_defaults(func=cmd_tolerance)

    w = sub.add_parser("wilks", help="order-statistic tolerance limits")
    wsub = w.add_subparsers(dest="wilks_command", parser_class=_Parser, required=True)
    wp = wsub.add_parser("plan", help="sample size or achieved quantile")
    wp.add_argument("--gamma", type=float)
    wp.add_argument("--beta", type=float, default=0.95)
    wp.add_argument("--order", type=int, default=1)
    wp.add_argument("--n", type=int)
    _add_format(wp)
    wp.set_defaults(func=cmd_wilks_plan)
    wa = wsub.add_parser("assess", help="limit and risk from measurements")
    wa.add_argument("--data", required=True)
    wa.add_argument("--column")
    wa.add_argument("--order", type=int, default=1)
    wa.add_argument("--beta", type=float, default=0.95)
    _add_format(wa)
    wa.set_defaults(func=cmd_wilks_assess)

    s = sub.add_parser("simulate", help="Monte Carlo conservatism study")
    s.add_argument("--dist", help="family:mean:sd, e.g. lognormal:237.86:70")
    s.add_argument("--mode", type=float, help="log-normal with this mode (needs --sd)")
    s.add_argument("--sd", type=float)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--reps", type=int, default=5000)
    s.add_argument("--quantile", type=float, default=0.95,
                   help="threshold = true quantile of this order")
    s.add_argument("--penalization", choices=("plugin", "bootstrap"), default="plugin")
    s.add_argument("--bootstrap", type=int, default=STUDY_BOOTSTRAP_REPLICATES, metavar="B")
    s.add_argument("--confidence", type=float, default=0.95)
    s.add_argument("--seed", type=int, default=seed)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--estimates", help="write the per-replication alphas to this CSV file")
    _add_format(s)
    s.set_defaults(func=cmd_simulate)

    t2 = sub.add_parser("table2", help="exact-moment bounds for the reference laws")
    t2.add_argument("--quantile", type=float, default=0.95)
    _add_format(t2)
    t2.set_defaults(func=cmd_table2)

    pd = sub.add_parser("plotdata", help="histogram and kernel density CSV")
    pd.add_argument("--data", required=True)
    pd.add_argument("--column")
    pd.add_argument("--output", "-o")
    pd.set_defaults(func=cmd_plotdata)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
