"""Histogram and kernel density data behind the sample plots."""

from __future__ import annotations

import csv
import io
import math

import numpy as np

from .errors import DataError
from .estimation import Sample

GRID_POINTS = 256


def silverman_bandwidth(values: np.ndarray) -> float:
    """0.9 * min(sd, IQR / 1.34) * n^(-1/5); falls back to sd when the IQR is 0."""
    n = values.size
    sd = float(np.std(values, ddof=1))
    q75, q25 = np.percentile(values, [75, 25])
    spread = min(sd, (q75 - q25) / 1.34) if q75 > q25 else sd
    return 0.9 * spread * n ** -0.2


def plot_data(sample: Sample):
    """Sturges histogram and Gaussian KDE.

    Returns (edges, counts, grid, density); the grid spans four bandwidths
    beyond the data on each side.
    """
    values = sample.as_array()
    n = values.size
    if n < 2:
        raise DataError("plot data needs at least 2 values")
    if np.all(values == values[0]):
        raise DataError("plot data needs a sample with nonzero variance")
    bins = int(math.ceil(math.log2(n))) + 1
    counts, edges = np.histogram(values, bins=bins)
    h = silverman_bandwidth(values)
    grid = np.linspace(values.min() - 4 * h, values.max() + 4 * h, GRID_POINTS)
    u = (grid[:, None] - values[None, :]) / h
    density = np.exp(-0.5 * u * u).sum(axis=1) / (n * h * math.sqrt(2 * math.pi))
    return edges, counts, grid, density


def emit_plot_data(sample: Sample) -> bytes:
    """CSV with columns series,x,x_right,value.

    `histogram` rows carry a bin's left/right edges and its count; `density`
    rows carry a grid point and the estimated density there.
    """
    edges, counts, grid, density = plot_data(sample)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["series", "x", "x_right", "value"])
    for left, right, c in zip(edges[:-1], edges[1:], counts):
        w.writerow(["histogram", repr(float(left)), repr(float(right)), int(c)])
    for x, d in zip(grid, density):
        w.writerow(["density", repr(float(x)), "", repr(float(d))])
    return buf.getvalue().encode()
