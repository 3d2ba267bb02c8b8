"""Exact-arithmetic uniqueness decisions for circle Levy measures.

The Levy measure of an infinitely divisible law on the circle need not be
unique.  For a symmetric atom pair c*delta_{e^{i phi}} + d*delta_{e^{-i phi}}
the decision is driven by Chebyshev polynomials of the second kind evaluated
exactly over rationals: a non-dyadic cos(phi) forces uniqueness, the three
exceptional angles pi/3, pi/2, 2pi/3 admit an explicit finite enumeration,
and the remaining dyadic values are reported as open.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

Rational = Fraction

EXCEPTIONAL_COS = {
    Fraction(1, 2): math.pi / 3.0,
    Fraction(0): math.pi / 2.0,
    Fraction(-1, 2): 2.0 * math.pi / 3.0,
}

__all__ = [
    "Rational",
    "AtomPair",
    "SymmetricAtomPairMeasure",
    "UniquenessVerdict",
    "chebyshev_u",
    "is_dyadic",
    "l_unique_decide",
    "levy_class_enumerate",
    "exceptional_kappa",
    "triplet_equiv",
    "EquivalenceResult",
    "strict_unique_check",
    "det_identity_check",
    "alt_compensator_demo",
    "AltCompensatorReport",
]


@dataclass(frozen=True)
class AtomPair:
    """Weights c at e^{i phi} and d at e^{-i phi}, phi in (0, pi]."""

    phi: float
    c: float
    d: float
    cos_exact: Fraction | None = None

    def __post_init__(self) -> None:
        if not 0.0 < self.phi <= math.pi:
            raise ValueError("phi must lie in (0, pi]")
        if self.c < 0 or self.d < 0:
            raise ValueError("weights must be nonnegative")


@dataclass(frozen=True)
class SymmetricAtomPairMeasure:
    """A finite sum of symmetric atom pairs with distinct angles."""

    pairs: tuple[AtomPair, ...]

    def __init__(self, pairs: Sequence[AtomPair]) -> None:
        pairs = tuple(pairs)
        phis = [p.phi for p in pairs]
        if len(set(phis)) != len(phis):
            raise ValueError("pair angles must be distinct")
        object.__setattr__(self, "pairs", pairs)

    def total_mass(self) -> float:
        return math.fsum(p.c + p.d for p in self.pairs)


@dataclass(frozen=True)
class UniquenessVerdict:
    """verdict is 'Unique', 'Enumerated' or 'Unknown'."""

    verdict: str
    members: tuple[SymmetricAtomPairMeasure, ...] = ()
    reason: str = ""


def chebyshev_u(n: int, x):
    """Chebyshev polynomial of the second kind, U_n(x); exact over Fraction."""
    if n < 0:
        raise ValueError("the degree must be nonnegative")
    two = 2 * x
    prev = x - x + 1  # one, in the arithmetic of x
    if n == 0:
        return prev
    cur = two
    for _ in range(1, n):
        prev, cur = cur, two * cur - prev
    return cur


def is_dyadic(q: Fraction) -> bool:
    """True iff the reduced denominator of q is a power of two."""
    den = Fraction(q).denominator
    return den & (den - 1) == 0


def exceptional_kappa(phi: float) -> float:
    """The mass-transfer step for the exceptional angles."""
    if math.isclose(phi, math.pi / 3.0, rel_tol=0.0, abs_tol=1e-12):
        return 2.0 * math.pi / math.sqrt(3.0)
    if math.isclose(phi, math.pi / 2.0, rel_tol=0.0, abs_tol=1e-12):
        return math.pi / 2.0
    if math.isclose(phi, 2.0 * math.pi / 3.0, rel_tol=0.0, abs_tol=1e-12):
        return 2.0 * math.pi / (3.0 * math.sqrt(3.0))
    raise ValueError("unsupported angle: expected pi/3, pi/2 or 2*pi/3")


def _floor_guarded(x: float) -> int:
    """floor with a tiny guard so that float noise on exact integers is benign."""
    return int(math.floor(x + 1e-9))


def levy_class_enumerate(
    phi: float, c: float, d: float, cos_exact: Fraction | None = None
) -> list[SymmetricAtomPairMeasure]:
    """All Levy measures of the same ID law supported on {e^{i phi}, e^{-i phi}}
    for an exceptional angle: (c - kappa*l, d + kappa*l) over the integer
    range -floor(d/kappa) <= l <= floor(c/kappa)."""
    if c < 0 or d < 0:
        raise ValueError("weights must be nonnegative")
    kappa = exceptional_kappa(phi)
    lo = -_floor_guarded(d / kappa)
    hi = _floor_guarded(c / kappa)
    out = []
    for ell in range(lo, hi + 1):
        c2 = max(0.0, c - kappa * ell)
        d2 = max(0.0, d + kappa * ell)
        out.append(
            SymmetricAtomPairMeasure([AtomPair(phi, c2, d2, cos_exact=cos_exact)])
        )
    return out


def l_unique_decide(rho: SymmetricAtomPairMeasure) -> UniquenessVerdict:
    """Decide uniqueness of a single symmetric atom pair as a Levy measure."""
    if len(rho.pairs) != 1:
        raise ValueError("the decision procedure handles a single atom pair")
    pair = rho.pairs[0]
    phi, cos_exact = pair.phi, pair.cos_exact
    if phi == math.pi or cos_exact == Fraction(-1):
        return UniquenessVerdict("Unique")
    promoted = None
    if cos_exact is not None and cos_exact in EXCEPTIONAL_COS:
        promoted = EXCEPTIONAL_COS[cos_exact]
    elif cos_exact is None:
        for frac, angle in EXCEPTIONAL_COS.items():
            if abs(math.cos(phi) - float(frac)) <= 1e-12:
                warnings.warn(
                    "floating-point cos(phi) is within 1e-12 of the exceptional "
                    f"value {frac}; promoting to the exact exceptional angle",
                    UserWarning,
                    stacklevel=2,
                )
                promoted = angle
                break
    if promoted is not None:
        members = levy_class_enumerate(promoted, pair.c, pair.d, cos_exact)
        return UniquenessVerdict("Enumerated", members=tuple(members))
    if cos_exact is not None:
        if not is_dyadic(cos_exact):
            return UniquenessVerdict("Unique")
        return UniquenessVerdict(
            "Unknown",
            reason="no decision is available for dyadic cos(phi) outside the "
            "exceptional angles",
        )
    return UniquenessVerdict(
        "Unknown",
        reason="an exact rational cos(phi) is required for the dyadic test",
    )


_EPS = math.ulp(1.0)


@dataclass(frozen=True)
class EquivalenceResult:
    verdict: str  # "Equivalent" or "NotEquivalent"
    witness: tuple | None = None


def _atoms_1d(rho) -> list[tuple[float, float]]:
    """(angle, weight) pairs of a 1-d atomic Levy measure."""
    if rho.dim != 1:
        raise ValueError("triplet equivalence is implemented for d = 1")
    return [(t[0], w) for t, w in zip(rho.thetas, rho.weights)]


def _even_pair_masses(atoms: list[tuple[float, float]], tol: float):
    """Group masses by |angle| (angles are grouped within tol)."""
    keys: list[float] = []
    masses: list[float] = []
    for phi, w in atoms:
        a = abs(phi)
        for i, k in enumerate(keys):
            if abs(k - a) <= tol:
                masses[i] += w
                break
        else:
            keys.append(a)
            masses.append(w)
    return list(zip(keys, masses))


def _im_exponent(atoms: list[tuple[float, float]], n: int) -> float:
    """Integral of Im(s^n - n s) over the atoms."""
    return math.fsum(w * (math.sin(n * phi) - n * math.sin(phi)) for phi, w in atoms)


def triplet_equiv(t1, t2, N: int = 50, tol: float = 1e-9) -> EquivalenceResult:
    """Test whether two 1-d atomic triplets define the same ID law.

    Checks the drift mod 2*pi, the Gaussian part, the paired masses at
    symmetric angles, and the imaginary-part exponent congruence mod 2*pi
    for n = 1..N.
    """
    if t1.d != 1 or t2.d != 1:
        raise ValueError("triplet equivalence is implemented for d = 1")
    dg = math.remainder(t1.gamma_arg[0] - t2.gamma_arg[0], 2.0 * math.pi)
    if abs(dg) > tol:
        return EquivalenceResult("NotEquivalent", ("gamma", dg))
    dA = abs(t1.A_array()[0, 0] - t2.A_array()[0, 0])
    if dA > tol:
        return EquivalenceResult("NotEquivalent", ("A", dA))
    a1 = _atoms_1d(t1.rho)
    a2 = _atoms_1d(t2.rho)
    pairs1 = _even_pair_masses(a1, tol)
    pairs2 = _even_pair_masses(a2, tol)
    angles = sorted({k for k, _ in pairs1} | {k for k, _ in pairs2})
    merged: list[float] = []
    for a in angles:
        if merged and abs(merged[-1] - a) <= tol:
            continue
        merged.append(a)
    for a in merged:
        m1 = math.fsum(w for k, w in pairs1 if abs(k - a) <= tol)
        m2 = math.fsum(w for k, w in pairs2 if abs(k - a) <= tol)
        if abs(m1 - m2) > tol:
            return EquivalenceResult("NotEquivalent", ("even_mass", a))
    for n in range(1, N + 1):
        v1 = _im_exponent(a1, n)
        v2 = _im_exponent(a2, n)
        dist = abs(math.remainder(v1 - v2, 2.0 * math.pi))
        # guard scales with n: the exponents grow ~ n and lose ulps accordingly
        guard = tol + n * 64.0 * _EPS * max(1.0, abs(v1), abs(v2))
        if dist > guard:
            return EquivalenceResult("NotEquivalent", ("im_congruence", n))
    return EquivalenceResult("Equivalent")


def strict_unique_check(rho1, rho2, N: int = 50, tol: float = 1e-9) -> bool:
    """True iff the full jump exponents agree (no mod 2*pi) for |n| <= N."""
    a1 = _atoms_1d(rho1)
    a2 = _atoms_1d(rho2)

    def full(atoms, n):
        return complex(
            math.fsum(w * (math.cos(n * phi) - 1.0) for phi, w in atoms),
            math.fsum(
                w * (math.sin(n * phi) - n * math.sin(phi)) for phi, w in atoms
            ),
        )

    for n in range(-N, N + 1):
        if abs(full(a1, n) - full(a2, n)) > tol:
            return False
    return True


def _det_fraction(mat: list[list[Fraction]]) -> Fraction:
    """Exact determinant by fraction-free-ish Gaussian elimination."""
    m = [row[:] for row in mat]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if m[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            factor = m[r][col] * inv
            if factor:
                for cc in range(col, n):
                    m[r][cc] -= factor * m[col][cc]
    return det


def det_identity_check(m: int, xs: Sequence[Fraction]) -> bool:
    """Verify both closed-form determinant identities exactly over rationals.

    The first matrix has rows U_i(x_j) - (i+1) for i = 1..m and determinant
    2^{m(m+1)/2} prod_{i>j}(x_i - x_j) prod_i (x_i - 1).  The second replaces
    the last row with U_{m+1}(x_j) - (m+2) and has determinant
    2 * 2^{m(m+1)/2} (x_1 + ... + x_m + 1) times the same products.
    """
    if not 2 <= m <= 4:
        raise ValueError("m must be 2, 3, or 4")
    xs = [Fraction(x) for x in xs]
    if len(xs) != m:
        raise ValueError("need exactly m values")
    if any(x == 1 for x in xs):
        raise ValueError("values must differ from 1")
    if len(set(xs)) != m:
        raise ValueError("values must be distinct")
    u = {i: [chebyshev_u(i, x) for x in xs] for i in range(1, m + 2)}
    mat_a = [[u[i][j] - (i + 1) for j in range(m)] for i in range(1, m + 1)]
    mat_b = [[u[i][j] - (i + 1) for j in range(m)] for i in range(1, m)]
    mat_b.append([u[m + 1][j] - (m + 2) for j in range(m)])
    c_m = Fraction(2) ** (m * (m + 1) // 2)
    vandermonde = Fraction(1)
    for i in range(m):
        for j in range(i):
            vandermonde *= xs[i] - xs[j]
    shift = Fraction(1)
    for x in xs:
        shift *= x - 1
    expected_a = c_m * vandermonde * shift
    expected_b = 2 * c_m * (sum(xs) + 1) * vandermonde * shift
    return _det_fraction(mat_a) == expected_a and _det_fraction(mat_b) == expected_b


@dataclass(frozen=True)
class AltCompensatorReport:
    N: int
    max_discrepancy: float
    passed: bool


def _alt_char(gamma: complex, a: float, atoms, n: int) -> complex:
    """Characteristic function under the cubic-compensator representation:
    gamma^n exp(-a n^2 / 2 + integral of s^n - 1 - i n (Im s + (Im s)^3 / 2))."""
    jump = complex(
        math.fsum(w * (math.cos(n * phi) - 1.0) for phi, w in atoms),
        math.fsum(
            w
            * (
                math.sin(n * phi)
                - n * (math.sin(phi) + 0.5 * math.sin(phi) ** 3)
            )
            for phi, w in atoms
        ),
    )
    return gamma ** n * cmath.exp(-0.5 * a * n * n + jump)


def alt_compensator_demo(N: int = 50) -> AltCompensatorReport:
    """Two distinct triplets under the cubic compensator produce the same law.

    Compares (1, 0, pi*delta_i) against (-1, 0, pi*delta_{-i}) over |n| <= N.
    """
    atoms_i = [(math.pi / 2.0, math.pi)]
    atoms_mi = [(-math.pi / 2.0, math.pi)]
    worst = 0.0
    for n in range(-N, N + 1):
        lhs = _alt_char(1.0 + 0j, 0.0, atoms_i, n)
        rhs = _alt_char(-1.0 + 0j, 0.0, atoms_mi, n)
        worst = max(worst, abs(lhs - rhs))
    return AltCompensatorReport(N=N, max_discrepancy=worst, passed=worst < 1e-9)
