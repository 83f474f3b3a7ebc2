"""Rendering: one mean line plus a +/-1 std band per series, vector output."""

import csv
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

AGGREGATE_HEADER = ["t", "mean", "std", "trials"]

# fixed palette, assigned by series order so re-renders match
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
           "#8c564b", "#e377c2", "#7f7f7f")


class CsvContractError(Exception):
    """An aggregate CSV is missing or does not follow the contract."""


def read_aggregate_csv(path):
    """Load one t,mean,std,trials file; returns (ts, means, stds) arrays."""
    if not os.path.isfile(path):
        raise CsvContractError("%s: no such file" % path)
    ts, means, stds = [], [], []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != AGGREGATE_HEADER:
            raise CsvContractError("%s: header %r, want %r"
                                   % (path, header, AGGREGATE_HEADER))
        for lineno, row in enumerate(reader, 2):
            if len(row) != 4:
                raise CsvContractError("%s: line %d has %d fields, want 4"
                                       % (path, lineno, len(row)))
            try:
                ts.append(int(row[0]))
                means.append(float(row[1]))
                stds.append(float(row[2]))
                int(row[3])
            except ValueError:
                raise CsvContractError("%s: line %d: bad number in %r"
                                       % (path, lineno, row))
    if not ts:
        raise CsvContractError("%s: no data rows" % path)
    return np.array(ts), np.array(means), np.array(stds)


def render_regret_figure(spec, out_dir):
    """Draw the figure a spec describes; returns the written path.

    The same inputs give a byte-identical file: date metadata is dropped
    and the SVG hash salt pinned, everything else matplotlib emits is a
    pure function of the data.
    """
    curves = []
    grid = None
    grid_src = None
    for path, label in spec.series:
        ts, means, stds = read_aggregate_csv(path)
        if grid is None:
            grid, grid_src = ts, path
        elif len(ts) != len(grid) or (ts != grid).any():
            raise CsvContractError("%s: checkpoint grid differs from %s"
                                   % (path, grid_src))
        curves.append((label, ts, means, stds))

    with matplotlib.rc_context({"svg.hashsalt": "banditplots"}):
        fig, ax = plt.subplots(figsize=(5.0, 3.4))
        for i, (label, ts, means, stds) in enumerate(curves):
            color = PALETTE[i % len(PALETTE)]
            ax.plot(ts, means, label=label, color=color, linewidth=1.5)
            ax.fill_between(ts, means - stds, means + stds, color=color,
                            alpha=0.2, linewidth=0)
        ax.set_xlabel(spec.xlabel)
        ax.set_ylabel(spec.ylabel)
        if spec.title:
            ax.set_title(spec.title)
        ax.legend(loc="upper left", frameon=False)
        fig.tight_layout()
        out_path = os.path.join(out_dir, spec.out)
        kind = spec.out.lower().rsplit(".", 1)[1]
        metadata = {"Date": None} if kind == "svg" else {"CreationDate": None}
        fig.savefig(out_path, format=kind, metadata=metadata)
        plt.close(fig)
    return out_path
