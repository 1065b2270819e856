"""Delimited output writers and figure rendering for the batch CLI.

CSV is the primary output; JSON mirrors it row for row.  Figures are rendered
to PNG files next to the delimited output on request and always draw the same
data the rows carry, never the graph itself.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np


def format_cell(v) -> str:
    """Stable text for one CSV cell: shortest round-trip floats, lowercase
    booleans, empty string for None."""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        f = float(v)
        return "nan" if math.isnan(f) else repr(f)
    if v is None:
        return ""
    return str(v)


def _native(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    return v


def write_csv(path: str | Path, header: list[str], rows: list[dict]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_cell(row.get(col)) for col in header))
    Path(path).write_text("\n".join(lines) + "\n")


def write_json(path: str | Path, header: list[str], rows: list[dict]) -> None:
    data = [{col: _native(row.get(col)) for col in header} for row in rows]
    Path(path).write_text(json.dumps(data, indent=2) + "\n")


def rows_to_stdout(header: list[str], rows: list[dict]) -> str:
    out = [",".join(header)]
    out += [",".join(format_cell(row.get(col)) for col in header) for row in rows]
    return "\n".join(out)


def render_figure(kind: str, rows: list[dict], path: str | Path, title: str = "") -> None:
    """Render the rows as a line/scatter figure saved to ``path``.

    ``kind`` picks the layout: curve (step vs. measured value), epidemic
    (per-step compartment counts), cascade (failure fraction), approx_error
    (error vs. k), sweep (summary vs. swept parameter), scalability (runtime
    vs. size, timeouts dropped).
    """
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4.5))
    if kind == "curve":
        ax.plot([r["step"] for r in rows], [r["measure_value"] for r in rows], marker=".")
        ax.set_xlabel("step")
        ax.set_ylabel("measure value")
    elif kind == "epidemic":
        steps = [r["step"] for r in rows]
        ax.plot(steps, [r["infected"] for r in rows], label="infected")
        ax.plot(steps, [r["susceptible"] for r in rows], label="susceptible")
        if any(r.get("recovered") for r in rows):
            ax.plot(steps, [r["recovered"] for r in rows], label="recovered")
        ax.set_xlabel("step")
        ax.set_ylabel("nodes")
        ax.legend()
    elif kind == "cascade":
        ax.plot([r["step"] for r in rows], [r["failed_fraction"] for r in rows], marker=".")
        ax.set_xlabel("step")
        ax.set_ylabel("failed fraction")
    elif kind == "approx_error":
        ax.plot([r["k"] for r in rows], [r["mean_abs_error"] for r in rows], marker="o")
        ax.set_xlabel("k")
        ax.set_ylabel("mean absolute error")
    elif kind == "sweep":
        param = "s" if "s" in rows[0] else "r"
        ycol = ("mean_tail_infected_fraction" if "mean_tail_infected_fraction" in rows[0]
                else "final_failed_fraction")
        ax.scatter([r[param] for r in rows], [r[ycol] for r in rows], s=12, alpha=0.5)
        grid = sorted({r[param] for r in rows})
        means = [float(np.mean([r[ycol] for r in rows if r[param] == p])) for p in grid]
        ax.plot(grid, means, color="black", marker="o", label="ensemble mean")
        ax.set_xlabel(param)
        ax.set_ylabel(ycol)
        ax.legend()
    elif kind == "scalability":
        measures = sorted({r["measure_id"] for r in rows})
        for mid in measures:
            pts = [(r["n"], r["seconds"]) for r in rows
                   if r["measure_id"] == mid and r["seconds"] != "TIMEOUT"]
            if pts:
                ax.plot([p[0] for p in pts], [float(p[1]) for p in pts], marker="o", label=mid)
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel("nodes")
        ax.set_ylabel("seconds")
        ax.legend(fontsize=7)
    else:
        plt.close(fig)
        raise ValueError(f"unknown figure kind {kind!r}")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
