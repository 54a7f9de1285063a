"""Side-by-side comparison of metric reports."""

import csv
import os

import numpy as np

from .metrics import DISTRIBUTIONS, ReportFormatError, SCHEMA_VERSION


def _labels(reports):
    seen = {}
    out = []
    for r in reports:
        base = r.name
        k = seen.get(base, 0)
        seen[base] = k + 1
        out.append(base if k == 0 else f"{base}#{k}")
    return out


def _values(report, name):
    table = getattr(report, name, None)
    if table is None:
        raise ReportFormatError(f"report {report.name!r} has no {name!r}")
    if name == "cc_by_degree":
        return {k: v["mean"] for k, v in table.items()}
    return dict(table)


def divergence(a, b, name):
    """Distance between two reports' versions of one distribution.

    Histograms are normalised and compared by total variation distance;
    ``cc_by_degree`` by the mean absolute gap over the union of degrees.
    """
    va, vb = _values(a, name), _values(b, name)
    keys = sorted(set(va) | set(vb))
    if not keys:
        return 0.0
    x = np.array([va.get(k, 0.0) for k in keys], dtype=float)
    y = np.array([vb.get(k, 0.0) for k in keys], dtype=float)
    if name == "cc_by_degree":
        return float(np.abs(x - y).mean())
    sx, sy = x.sum(), y.sum()
    if sx == 0 or sy == 0:
        return 0.0 if sx == sy else 1.0
    return float(0.5 * np.abs(x / sx - y / sy).sum())


def compare(real, synths):
    """Align every distribution of ``real`` and ``synths`` by key.

    Returns
    -------
    tables : dict
        ``distribution -> (header, rows)``; one value column per topology.
    summary : (header, rows)
        Bridge count and clustering of each topology, one row.
    divergences : (header, rows)
        ``(topology, distribution, distance to real)``.
    """
    reports = [real] + list(synths)
    for r in reports:
        for name in DISTRIBUTIONS:
            if getattr(r, name, None) is None:
                raise ReportFormatError(f"report {r.name!r} is missing {name!r}")
    labels = _labels(reports)
    tables = {}
    for name in DISTRIBUTIONS:
        vals = [_values(r, name) for r in reports]
        keys = sorted(set().union(*vals))
        rows = [[k] + [v.get(k, "") for v in vals] for k in keys]
        tables[name] = (["key"] + labels, rows)

    header = ["topology", "eb_count", "cf_real"] + [f"cf_{l}" for l in labels[1:]]
    header += ["avgcc_real"] + [f"avgcc_{l}" for l in labels[1:]]
    row = [real.name, real.bridge_count, real.global_cc]
    row += [s.global_cc for s in synths]
    row += [real.avg_cc] + [s.avg_cc for s in synths]
    summary = (header, [row])

    div_rows = [[l, name, divergence(real, s, name)]
                for l, s in zip(labels[1:], synths) for name in DISTRIBUTIONS]
    return tables, summary, (["topology", "distribution", "divergence"], div_rows)


def write_comparison(real, synths, directory):
    tables, summary, divs = compare(real, synths)
    os.makedirs(directory, exist_ok=True)
    paths = []

    def dump(fname, header, rows):
        path = os.path.join(directory, fname)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            w.writerows(rows)
        paths.append(path)

    for name, (header, rows) in tables.items():
        dump(f"{name}.csv", header, rows)
    dump("summary.csv", *summary)
    dump("divergence.csv", *divs)
    return paths


__all__ = ["compare", "divergence", "write_comparison", "SCHEMA_VERSION"]
