import logging
import time
from contextlib import contextmanager

import numpy as np

DEFAULT_MAX_ORDER = 2_000_000
ORACLE_MAX_ORDER = 2000

DEFAULT_ANALYSIS_SETTINGS = {
    "max_order": DEFAULT_MAX_ORDER,
    "workers": 1,
    "timing": True,
}

NON_NEGATIVE_SETTINGS = ["max_order", "workers"]

logger = logging.getLogger(__name__)


def resolve_settings(settings=None, defaults=DEFAULT_ANALYSIS_SETTINGS):
    """Clean up user-provided analysis settings.

    Validates that the settings consist of acceptable keys and returns a
    copy of `defaults` updated with them.

    :param settings: User-provided settings, or None.
    :returns: A resolved settings dict.
    :raises ValueError: When an unrecognised key or a negative value is given.
    """
    settings = settings or {}
    for k in settings.keys():
        if k not in defaults:
            raise ValueError(f"Unrecognized setting: '{k}'")

    for setting in NON_NEGATIVE_SETTINGS:
        if (settings.get(setting) or 0) < 0:
            raise ValueError(f"Setting '{setting}' cannot be negative")

    resolved = dict(defaults)
    resolved.update({k: v for k, v in settings.items() if v is not None})
    if resolved["workers"] == 0:
        resolved["workers"] = 1
    return resolved


def image_dtype(degree):
    """Smallest unsigned dtype that can hold the points 0..degree-1."""
    if degree <= np.iinfo(np.uint8).max + 1:
        return np.uint8
    if degree <= np.iinfo(np.uint16).max + 1:
        return np.uint16
    return np.uint32


def lexicographic_order(rows):
    """
    Indices that sort the rows of a 2d array lexicographically
    (first column most significant).
    """
    if rows.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    return np.lexsort(rows.T[::-1])


def inverse_images(rows):
    """Row-wise inverse of a stack of permutation image arrays."""
    inv = np.empty_like(rows)
    points = np.broadcast_to(np.arange(rows.shape[1], dtype=rows.dtype), rows.shape)
    np.put_along_axis(inv, rows.astype(np.intp), points, axis=1)
    return inv


def v2_int(n):
    """Exponent of 2 in a nonzero Python integer."""
    return (n & -n).bit_length() - 1


def rng(seed):
    """
    The deterministic generator used everywhere randomness is needed:
    numpy's PCG64 bit generator seeded with `seed`.
    """
    return np.random.Generator(np.random.PCG64(seed))


@contextmanager
def stopwatch(record):
    """Store the elapsed wall time of the block in `record["millis"]`."""
    start = time.perf_counter()
    try:
        yield record
    finally:
        record["millis"] = int(round((time.perf_counter() - start) * 1000))
