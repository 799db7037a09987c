"""Render a FigureSpec to an image file.

Pure plotting: every number on a figure is read from the input CSV.
Comparison tables draw the oracle as closed circles joined by lines and
the GAIA values as open circles, one color per observable. Sweep
figures shade the parameter region the primary flagged RED, or the
region below an explicit margin boundary when the spec carries one.
"""

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .spec import FigureSpec

GAIA_STYLE = {"marker": "o", "markerfacecolor": "none", "linestyle": ""}
ORACLE_STYLE = {"marker": "o", "linestyle": "-", "linewidth": 1.0}

# savefig metadata keys that would otherwise embed a wall-clock time
_VOLATILE_METADATA = {
    ".svg": {"Date": None},
    ".pdf": {"CreationDate": None},
    ".eps": {"CreationDate": None},
}


def _draw_compare(ax, table):
    xs = table.floats("parameter")
    observables = table.column("observable")
    gaia = table.floats("P_gaia")
    exact = table.floats("P_exact")
    for name in dict.fromkeys(observables):
        sel = [k for k, obs in enumerate(observables) if obs == name]
        (line,) = ax.plot(
            [xs[k] for k in sel],
            [exact[k] for k in sel],
            label=f"{name} oracle",
            **ORACLE_STYLE,
        )
        ax.plot(
            [xs[k] for k in sel],
            [gaia[k] for k in sel],
            label=f"{name} GAIA",
            color=line.get_color(),
            **GAIA_STYLE,
        )


def _draw_trace(ax, table):
    times = table.floats("time")
    for name in table.probability_columns():
        ax.plot(times, table.floats(name), marker=".", markersize=3, label=name)


def _draw_zero_lines(ax, table):
    for idx, value in enumerate(table.floats("value")):
        ax.axvline(
            value,
            color="black",
            linestyle=":",
            linewidth=1.0,
            label="predicted zero" if idx == 0 else None,
        )


def _flagged_points(table, boundary):
    """Distinct sweep values in file order with their red flags."""
    if boundary is None:
        flags = [status == "RED" for status in table.column("status")]
    else:
        flags = [margin < boundary for margin in table.floats("margin")]
    points = []
    for x, flagged in zip(table.floats("parameter"), flags):
        if math.isnan(x):
            continue
        if points and points[-1][0] == x:
            points[-1] = (x, points[-1][1] or flagged)
        else:
            points.append((x, flagged))
    return points


def _shade_red(ax, table, boundary):
    points = _flagged_points(table, boundary)
    xs = [x for x, _ in points]
    spans = []
    run = None
    for idx, (x, flagged) in enumerate(points):
        if flagged:
            run = (run[0], idx) if run else (idx, idx)
        elif run:
            spans.append(run)
            run = None
    if run:
        spans.append(run)
    for first, (lo, hi) in enumerate(spans):
        left, right = xs[lo], xs[hi]
        if left == right:
            gaps = [abs(b - a) for a, b in zip(xs, xs[1:])]
            pad = min(gaps) / 2 if gaps else 0.5
            left, right = left - pad, right + pad
        ax.axvspan(
            left,
            right,
            color="red",
            alpha=0.15,
            zorder=0,
            label="red region" if first == 0 else None,
        )


def build_figure(spec: FigureSpec):
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    if spec.kind == "sweep":
        _draw_compare(ax, spec.tables[0])
        _shade_red(ax, spec.tables[0], spec.red_boundary)
        if len(spec.tables) == 2:
            _draw_zero_lines(ax, spec.tables[1])
        default_xlabel = "parameter"
    elif spec.kind == "trace":
        _draw_trace(ax, spec.tables[0])
        default_xlabel = "time"
    else:
        for table, role in zip(spec.tables, spec.roles):
            if role == "trace":
                _draw_trace(ax, table)
            else:
                _draw_compare(ax, table)
        default_xlabel = "time"
    ax.set_xlabel(spec.xlabel or default_xlabel)
    ax.set_ylabel(spec.ylabel or "probability")
    entries = len(ax.get_legend_handles_labels()[1])
    ax.legend(loc="best", fontsize="small", ncols=2 if entries > 8 else 1)
    fig.tight_layout()
    return fig


def render(spec: FigureSpec):
    """Write the figure and hand back its output path."""
    with matplotlib.rc_context({"svg.hashsalt": "figures"}):
        fig = build_figure(spec)
        try:
            fig.savefig(
                spec.out_path,
                dpi=150,
                metadata=_VOLATILE_METADATA.get(spec.out_path.suffix.lower()),
            )
        finally:
            plt.close(fig)
    return spec.out_path
