"""Figure description files: flat text naming the CSVs to draw.

One file describes one figure:

    title  = Regret at K=12, C=2000
    xlabel = round
    ylabel = cumulative regret
    out    = k12_c2000.pdf
    series = runs/ma/aggregate.csv | MA-BARBAT
    series = runs/barbar/aggregate.csv | IND-BARBAR

series lines repeat, one per curve; their order fixes the colors.
"""

from dataclasses import dataclass


@dataclass
class FigureSpec:
    series: list  # (aggregate csv path, label) in draw order
    title: str
    out: str      # output file name, .pdf or .svg
    xlabel: str
    ylabel: str


def parse_figure_spec(text):
    """Parse one spec; returns (FigureSpec, []) or (None, errors)."""
    series = []
    scalars = {}
    errors = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            errors.append("line %d: not key = value: %r" % (lineno, raw))
            continue
        key, value = (part.strip() for part in line.split("=", 1))
        if key == "series":
            if "|" not in value:
                errors.append("line %d: series needs 'csv | label'" % lineno)
                continue
            path, label = (part.strip() for part in value.split("|", 1))
            if not path or not label:
                errors.append("line %d: empty series path or label" % lineno)
                continue
            series.append((path, label))
        elif key in ("title", "out", "xlabel", "ylabel"):
            if key in scalars:
                errors.append("line %d: duplicate key %r" % (lineno, key))
            else:
                scalars[key] = value
        else:
            errors.append("line %d: unknown key %r" % (lineno, key))
    if not series:
        errors.append("no series lines")
    if "out" not in scalars:
        errors.append("missing out = <file.pdf|file.svg>")
    elif not scalars["out"].lower().endswith((".pdf", ".svg")):
        errors.append("out must end in .pdf or .svg, got %r" % scalars["out"])
    if errors:
        return None, errors
    return FigureSpec(series=series, title=scalars.get("title", ""),
                      out=scalars["out"],
                      xlabel=scalars.get("xlabel", "round"),
                      ylabel=scalars.get("ylabel", "cumulative regret")), []
