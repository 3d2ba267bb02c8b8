"""Numerical hot loops with an optional numba backend.

The moment of an atomic measure is a weighted sum of complex exponentials.
Both backends run the same sequential Kahan-compensated loop in fixed atom
order, so each backend is deterministic across runs and thread counts.

Set the environment variable ``BITORUS_NO_NUMBA=1`` to force the pure
numpy/Python fallback (also used automatically when numba is missing).
"""
from __future__ import annotations

import math
import os

import numpy as np

__all__ = ["atomic_moment_sum", "compensated_complex_sum", "BACKEND"]


def _atomic_moment_sum_py(thetas: np.ndarray, weights: np.ndarray, p: np.ndarray) -> complex:
    """Kahan-compensated sum of w_k * exp(i <p, theta_k>) in atom order."""
    n, d = thetas.shape
    re = 0.0
    im = 0.0
    cre = 0.0
    cim = 0.0
    for k in range(n):
        phase = 0.0
        for j in range(d):
            phase += p[j] * thetas[k, j]
        w = weights[k]
        tre = w * math.cos(phase)
        tim = w * math.sin(phase)
        y = tre - cre
        t = re + y
        cre = (t - re) - y
        re = t
        y = tim - cim
        t = im + y
        cim = (t - im) - y
        im = t
    return complex(re, im)


def _compensated_complex_sum_py(re_terms: np.ndarray, im_terms: np.ndarray) -> complex:
    """Kahan-compensated sum of a complex sequence given as two real arrays."""
    re = 0.0
    im = 0.0
    cre = 0.0
    cim = 0.0
    for k in range(re_terms.shape[0]):
        y = re_terms[k] - cre
        t = re + y
        cre = (t - re) - y
        re = t
        y = im_terms[k] - cim
        t = im + y
        cim = (t - im) - y
        im = t
    return complex(re, im)


_want_numba = os.environ.get("BITORUS_NO_NUMBA", "").strip() not in ("1", "true", "yes")

if _want_numba:
    try:
        from numba import njit

        _atomic_moment_sum_nb = njit(cache=True)(_atomic_moment_sum_py)
        _compensated_complex_sum_nb = njit(cache=True)(_compensated_complex_sum_py)
        BACKEND = "numba"
    except ImportError:  # pragma: no cover - depends on environment
        BACKEND = "numpy"
else:
    BACKEND = "numpy"


def atomic_moment_sum(thetas: np.ndarray, weights: np.ndarray, p) -> complex:
    """Sum w_k * exp(i <p, theta_k>) over atoms, deterministically."""
    thetas = np.ascontiguousarray(thetas, dtype=np.float64)
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    pvec = np.ascontiguousarray(p, dtype=np.float64)
    if thetas.shape[0] == 0:
        return 0j
    if BACKEND == "numba":
        return _atomic_moment_sum_nb(thetas, weights, pvec)
    return _atomic_moment_sum_py(thetas, weights, pvec)


def compensated_complex_sum(terms) -> complex:
    """Kahan-compensated sum of an iterable of complex numbers, in order."""
    arr = np.fromiter((complex(t) for t in terms), dtype=np.complex128, count=-1)
    if arr.shape[0] == 0:
        return 0j
    re = np.ascontiguousarray(arr.real)
    im = np.ascontiguousarray(arr.imag)
    if BACKEND == "numba":
        return _compensated_complex_sum_nb(re, im)
    return _compensated_complex_sum_py(re, im)
