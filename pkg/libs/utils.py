import numpy as np


class HSError(Exception):
    """Base class of every error raised by the solver."""
    pass


def merge_close(values, tol):
    """Group sorted values whose consecutive gaps are at most tol.

    Returns the representative (largest member) of every group and, for each
    input value, the index of its group.
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return values.copy(), np.zeros(0, dtype=np.intp)
    order = np.argsort(values, kind='stable')
    ordered = values[order]
    starts = np.concatenate(([True], np.diff(ordered) > tol))
    group_sorted = np.cumsum(starts) - 1
    ends = np.concatenate((starts[1:], [True]))
    representatives = ordered[ends]
    groups = np.empty_like(group_sorted)
    groups[order] = group_sorted
    return representatives, groups


def thin_evenly(values, limit):
    values = np.asarray(values, dtype=float)
    if limit <= 0:
        return values[:0]
    if values.size <= limit:
        return values
    picks = np.unique(np.linspace(0, values.size - 1, limit).round().astype(np.intp))
    return values[picks]


def least_squares_line(x, y):
    """Ordinary least squares fit y = slope * x + intercept."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 2:
        return float('nan'), float('nan')
    slope, intercept = np.polyfit(x, y, 1)
    return float(slope), float(intercept)


def as_float_array(values):
    return np.atleast_1d(np.asarray(values, dtype=float))


def parse_times(text):
    if not text:
        return []
    return [float(t) for t in text.split(',') if t.strip()]
