"""Hot-kernel dispatch.

The selection-probability recursion dominates the runtime of the
stochastic model and the reachability explorer, so it exists twice: a
Cython extension (built at install time when a compiler is present) and
a pure-Python twin with identical semantics. Whichever is available is
picked here at import time; set LEXISCAPE_NO_NATIVE=1 to force the pure
backend. The native kernel uses 64-bit masks, so pools with more than 64
distinct profiles or objectives silently fall through to the pure one.
"""

from __future__ import annotations

import os

import numpy as np

from . import _plex_pure

if os.environ.get("LEXISCAPE_NO_NATIVE"):
    _native = None
else:
    try:
        from . import _plex_native as _native
    except ImportError:
        _native = None

HAVE_NATIVE = _native is not None
NATIVE_LIMIT = 64


def active_backend() -> str:
    return "native" if HAVE_NATIVE else "pure"


def plex_groups(scores, mults, eps) -> np.ndarray:
    """Per-instance lexicase win probabilities for distinct score profiles.

    Args:
        scores: (n, d) integer matrix, one row per distinct profile.
        mults: length-n positive multiplicities (instances per profile).
        eps: scalar or length-d non-negative retention thresholds.

    Returns:
        Length-n float array p with sum(p * mults) == 1: the probability
        that one particular individual carrying each profile wins a
        single selection event.
    """
    scores_arr = np.ascontiguousarray(scores, dtype=np.int64)
    if scores_arr.ndim != 2 or scores_arr.shape[0] < 1 or scores_arr.shape[1] < 1:
        raise ValueError("scores must be a non-empty 2-D matrix")
    n, d = scores_arr.shape
    mults_arr = np.ascontiguousarray(mults, dtype=np.int64)
    if mults_arr.shape != (n,) or np.any(mults_arr < 1):
        raise ValueError("mults must hold one positive count per profile")
    eps_arr = np.broadcast_to(eps, (d,)).astype(np.float64)  # astype: writable copy
    if np.any(eps_arr < 0):
        raise ValueError("epsilon thresholds must be non-negative")
    if HAVE_NATIVE and n <= NATIVE_LIMIT and d <= NATIVE_LIMIT:
        return _native.plex_groups(scores_arr, mults_arr, eps_arr)
    return _plex_pure.plex_groups(scores_arr, mults_arr, eps_arr)
