"""Deterministic CSV emission."""

import csv
import io
import math
import sys

DENSITIES_SCHEMA = ("profile", "j", "segment_start_m", "segment_end_m", "density_per_m2", "prefactor")
COVERAGE_SCHEMA = ("threshold_db", "p_los", "p_nlos_inner", "p_nlos_outer", "p_cov", "method")
MC_SCHEMA = ("threshold_db", "kind", "mean", "std_error", "trials", "outage_trials")
OPT_SCHEMA = ("threshold_db", "beamwidth_deg", "p_cov", "method", "boundary")
VALIDATE_SCHEMA = ("threshold_db", "analytic_rigorous", "mc_mean", "mc_std_error", "z_score", "within_3se")


def format_cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return format(value, ".9g")
    return str(value)


def render_csv(rows, schema):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(schema)
    for row in rows:
        if len(row) != len(schema):
            raise ValueError(f"row has {len(row)} cells, schema has {len(schema)}")
        writer.writerow([format_cell(v) for v in row])
    return buf.getvalue()


def emit_csv(rows, schema, path="-"):
    """Write ``rows`` under a header ``schema``; ``"-"`` writes to stdout."""
    text = render_csv(rows, schema)
    if path in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
