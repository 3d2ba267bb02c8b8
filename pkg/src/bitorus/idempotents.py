"""Classification of idempotent bi-torus measures and idempotent factors.

All checks match moments against closed-form patterns up to a finite cutoff
K (default 10); moment determinacy on the torus justifies raising K when a
stronger certificate is wanted.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .measures import DimensionMismatch, MomentMeasure, kappa_moment

DEFAULT_K = 10
PATTERN_TOL = 1e-12

__all__ = [
    "IdempotentKind",
    "ExceptionClass",
    "classify_idempotent",
    "has_P_factor",
    "in_P_times",
    "id_moment_check",
    "classify_id_exception",
]


class IdempotentKind(enum.Enum):
    """The five idempotent types (plus the flip variant and a non-match)."""

    TrivialDirac = "TrivialDirac"
    HaarLeft = "HaarLeft"
    HaarRight = "HaarRight"
    HaarBoth = "HaarBoth"
    BiHaarP = "BiHaarP"
    BiHaarPStar = "BiHaarPStar"
    NONE = "None"


class ExceptionClass(enum.Enum):
    """Structure of ID laws whose coordinate means are not both nonzero."""

    HaarLeftForm = "HaarLeftForm"
    HaarRightForm = "HaarRightForm"
    HaarBothForm = "HaarBothForm"
    PKappaForm = "PKappaForm"
    NotClassified = "NotClassified"


def _require_bitorus(m: MomentMeasure) -> None:
    if m.dim != 2:
        raise DimensionMismatch("classification requires a bi-torus measure")


def _matches(m: MomentMeasure, K: int, tol: float, pattern) -> bool:
    for p in range(-K, K + 1):
        for q in range(-K, K + 1):
            if abs(m.moment((p, q)) - pattern(p, q)) > tol:
                return False
    return True


def classify_idempotent(
    m: MomentMeasure, K: int = DEFAULT_K, tol: float = PATTERN_TOL
) -> IdempotentKind:
    """Match the moments of m against the canonical idempotent patterns."""
    _require_bitorus(m)
    patterns = [
        (IdempotentKind.TrivialDirac, lambda p, q: 1.0),
        (IdempotentKind.HaarBoth, lambda p, q: 1.0 if p == 0 and q == 0 else 0.0),
        (IdempotentKind.HaarLeft, lambda p, q: 1.0 if p == 0 else 0.0),
        (IdempotentKind.HaarRight, lambda p, q: 1.0 if q == 0 else 0.0),
        (IdempotentKind.BiHaarP, lambda p, q: 1.0 if p == q else 0.0),
        (IdempotentKind.BiHaarPStar, lambda p, q: 1.0 if p == -q else 0.0),
    ]
    for kind, pattern in patterns:
        if _matches(m, K, tol, pattern):
            return kind
    return IdempotentKind.NONE


def has_P_factor(
    m: MomentMeasure, K: int = DEFAULT_K, tol: float = PATTERN_TOL
) -> tuple[bool, complex]:
    """Detect a bi-Haar factor via the Kronecker mixed-moment pattern.

    Returns (True, c) with c = m_{1,1} when m_{p,q} = [p = q] c^p on the
    strip (p, q) in [-K, K] x [0, K] (convention 0^0 = 1); such a measure is
    P convolved with (kappa_c x delta_1).
    """
    _require_bitorus(m)
    c = m.moment((1, 1))
    for p in range(-K, K + 1):
        for q in range(0, K + 1):
            expected = kappa_moment(c, p) if p == q else 0.0
            if abs(m.moment((p, q)) - expected) > tol:
                return False, c
    return True, c


def in_P_times(m: MomentMeasure, tol: float = PATTERN_TOL) -> bool:
    """True iff both coordinate means are nonzero (the no-idempotent-factor
    criterion for ID laws on the bi-torus)."""
    _require_bitorus(m)
    return abs(m.moment((1, 0))) > tol and abs(m.moment((0, 1))) > tol


@dataclass(frozen=True)
class IdMomentReport:
    in_p_times: bool
    m11: complex
    m11_nonzero: bool
    consistent: bool


def id_moment_check(m: MomentMeasure, tol: float = PATTERN_TOL) -> IdMomentReport:
    """For a measure asserted to be ID: when both coordinate means are
    nonzero, m_{1,1} must also be nonzero; report whether it is."""
    inp = in_P_times(m, tol)
    m11 = m.moment((1, 1))
    nonzero = abs(m11) > tol
    return IdMomentReport(
        in_p_times=inp, m11=m11, m11_nonzero=nonzero,
        consistent=(not inp) or nonzero,
    )


def classify_id_exception(
    m: MomentMeasure, K: int = DEFAULT_K, tol: float = PATTERN_TOL
):
    """Classify an ID law outside the nonzero-means class by moment pattern.

    Returns an ``ExceptionClass`` member; ``PKappaForm`` carries the
    parameter c in the second slot of the returned tuple.
    """
    _require_bitorus(m)
    first_marginal_trivial = all(
        abs(m.moment((p, q))) <= tol
        for p in range(-K, K + 1)
        if p != 0
        for q in range(-K, K + 1)
    )
    second_marginal_trivial = all(
        abs(m.moment((p, q))) <= tol
        for q in range(-K, K + 1)
        if q != 0
        for p in range(-K, K + 1)
    )
    if first_marginal_trivial and second_marginal_trivial:
        return ExceptionClass.HaarBothForm, None
    if first_marginal_trivial:
        return ExceptionClass.HaarLeftForm, None
    if second_marginal_trivial:
        return ExceptionClass.HaarRightForm, None
    is_p, c = has_P_factor(m, K, tol)
    if is_p and abs(c) > tol:
        return ExceptionClass.PKappaForm, c
    return ExceptionClass.NotClassified, None
