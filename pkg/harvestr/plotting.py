"""
SVG line charts drawn from result CSV text.

Plots are derived from the CSV that was written, never from in-memory
results, so a chart always shows exactly what the table holds.
"""

import io
import logging

import pandas as pd

from harvestr.errors import ValidationError

logger = logging.getLogger(__name__)


def _label(name, value):
    if isinstance(value, float):
        return f"{name}={value:g}"
    return str(value)


def plot_csv(csv_text, x, y, path, group=None, title="", logy=False, query=None):
    """
    Draw ``y`` against ``x`` from CSV text and save it as SVG.

    Args:
        csv_text (str): Table as written by the CLI
        x (str): Column on the horizontal axis
        y (str): Column on the vertical axis
        path (str or Path): Output SVG file
        group (list, optional): Columns whose combinations get separate lines
        title (str): Chart title
        logy (bool): Logarithmic vertical axis
        query (str, optional): Row filter in DataFrame.query syntax
    """
    try:
        import matplotlib
    except ImportError:
        raise ValidationError(
            "Plotting needs matplotlib; install with 'pip install harvestr[plot]'"
        ) from None

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    df = pd.read_csv(io.StringIO(csv_text), float_precision="round_trip")
    for column in [x, y, *(group or [])]:
        if column not in df.columns:
            raise ValidationError(f"Cannot plot: no column '{column}' in table")
    if query:
        df = df.query(query)

    fig, ax = plt.subplots(figsize=(7, 4.5))
    if group and not df.empty:
        for key, part in df.groupby(group, sort=True):
            key = key if isinstance(key, tuple) else (key,)
            label = ", ".join(_label(name, value) for name, value in zip(group, key))
            ax.plot(part[x], part[y], marker="o", label=label)
        ax.legend()
    else:
        ax.plot(df[x], df[y], marker="o")
    if logy and (df[y] > 0).all():
        ax.set_yscale("log")
    ax.set_xlabel(x)
    ax.set_ylabel(y)
    if title:
        ax.set_title(title)
    ax.grid(True)
    fig.tight_layout()

    # fixed metadata and element ids keep the SVG byte-stable
    with matplotlib.rc_context({"svg.hashsalt": "harvestr"}):
        fig.savefig(path, format="svg", metadata={"Date": None, "Creator": "harvestr"})
    plt.close(fig)
    logger.info("Saved plot to %s", path)
