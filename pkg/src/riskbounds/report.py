"""Report documents and their json / markdown / csv renderings.

json is the canonical form: keys appear in a fixed order and floats are
written with repr, so every number survives a round trip exactly. Markdown
rounds bounds to three decimals.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from typing import Optional

from . import __version__
from .bootstrap import BootstrapConfig, bootstrap_bounds
from .concentration import (Method, Provenance, RiskBound, closed_form_bound)
from .errors import UsageError
from .estimation import MomentEstimates, Sample, summarize
from .tolerance import kfactor_bound
from .wilks import WilksAssessment, wilks_assess

SCHEMA_VERSION = 1
FORMATS = ("json", "markdown", "csv")


@dataclass
class ReportDocument:
    command: str
    inputs: dict = field(default_factory=dict)
    moments: Optional[dict] = None
    results: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    seed: Optional[int] = None
    tool: str = "riskbounds"
    version: str = __version__
    schema: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return {
            "tool": self.tool,
            "version": self.version,
            "schema": self.schema,
            "command": self.command,
            "seed": self.seed,
            "inputs": self.inputs,
            "moments": self.moments,
            "results": self.results,
            "warnings": self.warnings,
            "notes": self.notes,
        }


def risk_bound_record(rb: RiskBound) -> dict:
    return {
        "kind": "risk_bound",
        "method": rb.method.value,
        "threshold": rb.threshold,
        "alpha": rb.alpha,
        "provenance": rb.provenance.value,
        "confidence": rb.confidence,
        "vacuous": rb.vacuous,
    }


def wilks_record(wa: WilksAssessment) -> dict:
    p = wa.plan
    return {
        "kind": "wilks",
        "method": "wilks",
        "threshold": wa.threshold,
        "alpha": wa.alpha,
        "provenance": "order_statistic",
        "confidence": p.beta,
        "vacuous": False,
        "n": p.n,
        "order": p.order,
        "rank": p.rank,
        "gamma": p.gamma,
    }


def moments_record(m: MomentEstimates) -> dict:
    return asdict(m)


def run_bound_command(thresholds, methods, sample: Sample = None, moments: dict = None,
                      bootstrap: BootstrapConfig = None, confidence: float = 0.95,
                      wilks_orders=(), inputs: dict = None) -> ReportDocument:
    """Plug-in bounds (and optional bootstrap rows and Wilks limits) per threshold.

    Either `sample` or `moments` (keys mean, sd and optionally n) is required.
    `confidence` is the k-factor and Wilks confidence level; the bootstrap
    quantile order comes from `bootstrap.confidence`.
    """
    if (sample is None) == (moments is None):
        raise UsageError("give either a sample or explicit moments")
    if sample is None and (bootstrap is not None or wilks_orders):
        raise UsageError("bootstrap and Wilks limits need the measurements, not bare moments")
    methods = [Method(m) for m in methods]
    doc = ReportDocument("bound", inputs=dict(inputs or {}))

    if sample is not None:
        est = summarize(sample)
        mean, sd, n = est.mean, est.sd, est.n
        doc.moments = moments_record(est)
    else:
        mean, sd = float(moments["mean"]), float(moments["sd"])
        n = moments.get("n")
        doc.moments = {"n": n, "mean": mean, "sd": sd}
    if Method.KFACTOR in methods and n is None:
        raise UsageError("the k-factor method needs the sample size n")
    if bootstrap is not None:
        doc.seed = bootstrap.seed

    thresholds = [float(s) for s in thresholds]
    wilks = []
    if sample is not None:
        for order in wilks_orders:
            wa = wilks_assess(sample, order, confidence)
            wilks.append(wa)
            if wa.threshold not in thresholds:
                thresholds.append(wa.threshold)

    for s in thresholds:
        for m in methods:
            if m is Method.KFACTOR:
                rb = kfactor_bound(mean, sd, n, s, confidence)
            else:
                rb = closed_form_bound(m, mean, sd, s, Provenance.PLUGIN_MOMENTS)
            doc.results.append(risk_bound_record(rb))
        if bootstrap is not None:
            for rb in bootstrap_bounds(sample, methods, s, bootstrap, confidence):
                doc.results.append(risk_bound_record(rb))
        for wa in wilks:
            if wa.threshold == s:
                doc.results.append(wilks_record(wa))
        if s <= mean:
            doc.warnings.append(f"threshold {s:g} does not exceed the mean {mean:g}: "
                                "bounds are vacuous (alpha = 1)")
    for m in methods:
        if m is Method.BC:
            doc.notes.append("BC hypothesis: none beyond finite variance")
        else:
            doc.notes.append(f"{m.label} hypothesis: {m.hypothesis}")
    return doc


def _fmt3(x) -> str:
    return f"{x:.3f}"


def _row_label(rec: dict) -> str:
    label = f"{rec['threshold']:g}"
    if rec["provenance"] in ("bootstrap", "order_statistic") or rec["method"] == "kfactor":
        return f"{label} (β={rec['confidence']:g})"
    return label


def _bounds_markdown(doc: ReportDocument) -> list:
    records = [r for r in doc.results if r.get("kind") in ("risk_bound", "wilks")]
    columns = []
    rows = {}
    for r in records:
        col = "Wilks" if r["kind"] == "wilks" else Method(r["method"]).label
        if col not in columns:
            columns.append(col)
        # plug-in rows keyed by threshold; penalized rows also by confidence
        key = (r["threshold"], r["provenance"] == "bootstrap" or r["kind"] == "wilks",
               r["confidence"] if r["provenance"] in ("bootstrap", "order_statistic") else None)
        row = rows.setdefault(key, {"label": None, "cells": {}})
        if r["kind"] == "wilks" or r["provenance"] == "bootstrap" or row["label"] is None:
            row["label"] = _row_label(r) if key[1] else f"{r['threshold']:g}"
        cell = _fmt3(r["alpha"]) + (" (vacuous)" if r["vacuous"] else "")
        row["cells"][col] = cell
    lines = ["| s | " + " | ".join(columns) + " |",
             "|---|" + "---|" * len(columns)]
    for row in rows.values():
        cells = [row["cells"].get(c, "-") for c in columns]
        lines.append("| " + row["label"] + " | " + " | ".join(cells) + " |")
    return lines


def _generic_markdown(records: list) -> list:
    keys = []
    for r in records:
        for k in r:
            if k not in keys:
                keys.append(k)
    lines = ["| " + " | ".join(keys) + " |", "|" + "---|" * len(keys)]
    for r in records:
        cells = []
        for k in keys:
            v = r.get(k, "")
            cells.append(f"{v:.6g}" if isinstance(v, float) else str(v))
        lines.append("| " + " | ".join(cells) + " |")
    return lines


def to_markdown(doc: ReportDocument) -> str:
    lines = [f"# riskbounds {doc.command}", ""]
    if doc.moments:
        m = doc.moments
        parts = [f"{k} = {v:.6g}" if isinstance(v, float) else f"{k} = {v}"
                 for k, v in m.items() if v is not None]
        lines += ["Summary: " + ", ".join(parts), ""]
    if doc.results:
        if all(r.get("kind") in ("risk_bound", "wilks") for r in doc.results):
            lines += _bounds_markdown(doc)
        else:
            lines += _generic_markdown(doc.results)
        lines.append("")
    if doc.warnings:
        lines += ["Warnings:"] + [f"- {w}" for w in doc.warnings] + [""]
    if doc.notes:
        lines += ["Notes:"] + [f"- {n}" for n in doc.notes] + [""]
    if doc.seed is not None:
        lines += [f"Seed: {doc.seed}", ""]
    return "\n".join(lines)


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def to_csv(doc: ReportDocument) -> str:
    keys = []
    for r in doc.results:
        for k in r:
            if k not in keys:
                keys.append(k)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(keys)
    for r in doc.results:
        w.writerow([_csv_cell(r.get(k)) for k in keys])
    return buf.getvalue()


def emit_report(doc: ReportDocument, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (json.dumps(doc.to_dict(), indent=2, ensure_ascii=False) + "\n").encode()
    if fmt == "markdown":
        return to_markdown(doc).encode()
    if fmt == "csv":
        return to_csv(doc).encode()
    raise UsageError(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}")
