"""Levy triplets on the plane and the torus.

Implements exact Levy-Khintchine exponent evaluation for both additive
(planar) and multiplicative (torus) infinitely divisible laws, the wrapping
of additive triplets to multiplicative ones, triplet convolution, the
Poisson-kernel triplet, and the commuting-square check connecting the
additive and multiplicative pictures.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .measures import (
    AtomicTorusMeasure,
    BiHaarP,
    CircConv,
    DimensionMismatch,
    Haar,
    Kappa,
    MomentMeasure,
    PlanarAtomicMeasure,
    Product,
    UnsupportedOperation,
    canonicalize_angle,
    wrap_pushforward,
)

PSD_TOL = 1e-12
QUADRATURE_POINTS = 4096

__all__ = [
    "HaarKernelDensity",
    "MulLevyTriplet",
    "AddLevyTriplet",
    "GammaDomainElement",
    "TripletLaw",
    "levy_jump_integral",
    "mul_lk_exponent",
    "mul_lk_char",
    "add_lk_exponent",
    "add_lk_char",
    "haar_kernel_values",
    "haar_kernel_integral_quadrature",
    "wrap_triplet",
    "triplet_convolve",
    "kappa_triplet",
    "gamma_map",
    "diagram_check",
    "DiagramReport",
]


@dataclass(frozen=True)
class HaarKernelDensity:
    """The circle Levy measure scale/(1 - Re s) dm(s) (normalized Haar m)."""

    scale: float

    def __post_init__(self) -> None:
        if self.scale < 0:
            raise ValueError("scale must be nonnegative")


def _empty_levy(d: int) -> AtomicTorusMeasure:
    return AtomicTorusMeasure(d, [], mode="levy")


def _validate_psd(A: np.ndarray, d: int) -> np.ndarray:
    A = np.asarray(A, dtype=float).reshape(d, d)
    if not np.allclose(A, A.T, atol=1e-12, rtol=0.0):
        raise ValueError("the Gaussian matrix must be symmetric")
    A = 0.5 * (A + A.T)
    if np.linalg.eigvalsh(A).min() < -PSD_TOL:
        raise ValueError("the Gaussian matrix must be positive semi-definite")
    return A


@dataclass(frozen=True)
class MulLevyTriplet:
    """Multiplicative Levy triplet (gamma, A, rho) on the d-torus, d in {1,2}."""

    d: int
    gamma_arg: tuple[float, ...]
    A: tuple[tuple[float, ...], ...]
    rho: AtomicTorusMeasure | HaarKernelDensity

    def __init__(self, d: int, gamma_arg: Sequence[float], A, rho=None) -> None:
        if d not in (1, 2):
            raise ValueError("multiplicative triplets support d = 1 or 2")
        gamma = tuple(canonicalize_angle(g) for g in gamma_arg)
        if len(gamma) != d:
            raise DimensionMismatch("drift vector has wrong dimension")
        Aarr = _validate_psd(A, d)
        if rho is None:
            rho = _empty_levy(d)
        if isinstance(rho, HaarKernelDensity):
            if d != 1:
                raise ValueError("the Haar-kernel density form is only for d = 1")
        elif isinstance(rho, AtomicTorusMeasure):
            if rho.dim != d:
                raise DimensionMismatch("Levy measure has wrong dimension")
            if rho.mode != "levy":
                rho = AtomicTorusMeasure(
                    d, list(zip(rho.thetas, rho.weights)), mode="levy"
                )
        else:
            raise TypeError("rho must be an AtomicTorusMeasure or HaarKernelDensity")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "gamma_arg", gamma)
        object.__setattr__(self, "A", tuple(tuple(row) for row in Aarr))
        object.__setattr__(self, "rho", rho)

    def A_array(self) -> np.ndarray:
        return np.asarray(self.A, dtype=float)


@dataclass(frozen=True)
class AddLevyTriplet:
    """Additive Levy triplet (v, A, tau) on R^d."""

    d: int
    v: tuple[float, ...]
    A: tuple[tuple[float, ...], ...]
    tau: PlanarAtomicMeasure

    def __init__(self, d: int, v: Sequence[float], A, tau=None) -> None:
        v = tuple(float(x) for x in v)
        if len(v) != d:
            raise DimensionMismatch("drift vector has wrong dimension")
        Aarr = _validate_psd(A, d)
        if tau is None:
            tau = PlanarAtomicMeasure(d, [], mode="levy")
        if tau.dim != d:
            raise DimensionMismatch("Levy measure has wrong dimension")
        if tau.mode != "levy":
            tau = PlanarAtomicMeasure(d, list(zip(tau.xs, tau.weights)), mode="levy")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "A", tuple(tuple(row) for row in Aarr))
        object.__setattr__(self, "tau", tau)

    def A_array(self) -> np.ndarray:
        return np.asarray(self.A, dtype=float)


def levy_jump_integral(rho, p: Sequence[int]) -> complex:
    """The jump integral of (s^p - 1 - i <p, Im s>) against a Levy measure."""
    if isinstance(rho, HaarKernelDensity):
        (p0,) = (int(v) for v in p)
        return complex(-rho.scale * abs(p0))
    p = tuple(int(v) for v in p)
    if len(p) != rho.dim:
        raise DimensionMismatch("moment index has wrong dimension")
    terms = []
    for theta, w in zip(rho.thetas, rho.weights):
        phase = math.fsum(pj * tj for pj, tj in zip(p, theta))
        lin = math.fsum(pj * math.sin(tj) for pj, tj in zip(p, theta))
        terms.append(w * (cmath.exp(1j * phase) - 1.0 - 1j * lin))
    return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))


def mul_lk_exponent(t: MulLevyTriplet, p: Sequence[int]) -> complex:
    """Levy-Khintchine exponent of a multiplicative triplet at frequency p."""
    p = tuple(int(v) for v in p)
    if len(p) != t.d:
        raise DimensionMismatch("frequency vector has wrong dimension")
    drift = 1j * math.fsum(pj * gj for pj, gj in zip(p, t.gamma_arg))
    pa = np.asarray(p, dtype=float)
    gauss = -0.5 * float(pa @ t.A_array() @ pa)
    return drift + gauss + levy_jump_integral(t.rho, p)


def mul_lk_char(t: MulLevyTriplet, p: Sequence[int]) -> complex:
    """Characteristic function (moment) of the triplet's ID law at p."""
    return cmath.exp(mul_lk_exponent(t, p))


def add_lk_exponent(t: AddLevyTriplet, u: Sequence[float]) -> complex:
    """Levy-Khintchine exponent of an additive triplet at frequency u."""
    u = np.asarray(u, dtype=float)
    if u.shape != (t.d,):
        raise DimensionMismatch("frequency vector has wrong dimension")
    drift = 1j * float(u @ np.asarray(t.v))
    gauss = -0.5 * float(u @ t.A_array() @ u)
    terms = []
    for x, w in zip(t.tau.xs, t.tau.weights):
        xv = np.asarray(x)
        ux = float(u @ xv)
        comp = ux / (1.0 + float(xv @ xv))
        terms.append(w * (cmath.exp(1j * ux) - 1.0 - 1j * comp))
    jump = complex(
        math.fsum(z.real for z in terms), math.fsum(z.imag for z in terms)
    )
    return drift + gauss + jump


def add_lk_char(t: AddLevyTriplet, u: Sequence[float]) -> complex:
    return cmath.exp(add_lk_exponent(t, u))


def haar_kernel_values(p: int, thetas: np.ndarray) -> np.ndarray:
    """The continuous kernel (s^p - 1 - i p sin t)/(1 - cos t) at angles t.

    The removable singularity at t = 0 is filled with the value -p^2.
    """
    p = int(p)
    thetas = np.asarray(thetas, dtype=float)
    out = np.empty(thetas.shape, dtype=np.complex128)
    small = np.isclose(np.cos(thetas), 1.0, rtol=0.0, atol=1e-15)
    safe = ~small
    ts = thetas[safe]
    out[safe] = (np.exp(1j * p * ts) - 1.0 - 1j * p * np.sin(ts)) / (1.0 - np.cos(ts))
    out[small] = -float(p) ** 2
    return out


def haar_kernel_integral_quadrature(p: int, n_points: int = QUADRATURE_POINTS) -> complex:
    """Periodic-trapezoid quadrature of the kernel over (-pi, pi]."""
    grid = -math.pi + 2.0 * math.pi * np.arange(n_points) / n_points
    vals = haar_kernel_values(p, grid)
    return complex(vals.mean() * 2.0 * math.pi)


def haar_kernel_exponent_quadrature(
    scale: float, p: int, n_points: int = QUADRATURE_POINTS
) -> complex:
    """Quadrature cross-check of the closed-form jump integral -scale*|p|."""
    return scale * haar_kernel_integral_quadrature(p, n_points) / (2.0 * math.pi)


def wrap_triplet(t: AddLevyTriplet) -> MulLevyTriplet:
    """Wrap an additive triplet to a multiplicative one on the torus.

    The Levy measure is pushed forward under x -> e^{ix} (dropping mass at
    the identity) and the drift picks up sin(x) - x/(1+||x||^2) corrections.
    """
    rho = wrap_pushforward(t.tau, mode="levy")
    gamma = []
    for j in range(t.d):
        corr = math.fsum(
            w
            * (
                math.sin(x[j])
                - x[j] / (1.0 + math.fsum(v * v for v in x))
            )
            for x, w in zip(t.tau.xs, t.tau.weights)
        )
        gamma.append(canonicalize_angle(t.v[j] + corr))
    return MulLevyTriplet(t.d, gamma, t.A_array(), rho)


def triplet_convolve(a: MulLevyTriplet, b: MulLevyTriplet) -> MulLevyTriplet:
    """Convolution of ID laws at the triplet level: all parts add."""
    if a.d != b.d:
        raise DimensionMismatch("triplets must share a dimension")
    gamma = [canonicalize_angle(x + y) for x, y in zip(a.gamma_arg, b.gamma_arg)]
    A = a.A_array() + b.A_array()
    ra, rb = a.rho, b.rho
    if isinstance(ra, HaarKernelDensity) and isinstance(rb, HaarKernelDensity):
        rho = HaarKernelDensity(ra.scale + rb.scale)
    elif isinstance(ra, AtomicTorusMeasure) and isinstance(rb, AtomicTorusMeasure):
        rho = ra.plus(rb, mode="levy")
    elif isinstance(ra, HaarKernelDensity) and rb.n_atoms == 0:
        rho = ra
    elif isinstance(rb, HaarKernelDensity) and ra.n_atoms == 0:
        rho = rb
    else:
        raise UnsupportedOperation(
            "cannot combine an atomic Levy measure with a density-form one"
        )
    return MulLevyTriplet(a.d, gamma, A, rho)


def kappa_triplet(c: complex) -> MulLevyTriplet:
    """The multiplicative Levy triplet of the Poisson-kernel measure."""
    c = complex(c)
    r = abs(c)
    if r == 0:
        raise ValueError(
            "the Haar measure (c = 0) has zero mean and admits no triplet"
        )
    if r > 1.0 + 1e-12:
        raise ValueError("the parameter must satisfy 0 < |c| <= 1")
    return MulLevyTriplet(
        1, [cmath.phase(c)], [[0.0]], HaarKernelDensity(-math.log(min(r, 1.0)))
    )


@dataclass(frozen=True)
class TripletLaw(MomentMeasure):
    """The ID probability law of a multiplicative triplet, as a moment oracle."""

    triplet: MulLevyTriplet

    def __post_init__(self) -> None:
        object.__setattr__(self, "dim", self.triplet.d)

    def moment(self, p: Sequence[int]) -> complex:
        return mul_lk_char(self.triplet, p)


@dataclass(frozen=True)
class GammaDomainElement:
    """An element of the domain of the idempotent-factor classification map.

    ``kind`` is one of ``triplet`` (payload: 2-d MulLevyTriplet),
    ``haar_left``/``haar_right`` (payload: 1-d MulLevyTriplet for the
    non-Haar marginal), ``haar_both`` (no payload), or ``p_kappa``
    (payload: nonzero complex c).
    """

    kind: str
    triplet: MulLevyTriplet | None = None
    c: complex | None = None

    def __post_init__(self) -> None:
        if self.kind == "triplet":
            if not isinstance(self.triplet, MulLevyTriplet) or self.triplet.d != 2:
                raise ValueError("the triplet branch requires a 2-d triplet")
        elif self.kind in ("haar_left", "haar_right"):
            if not isinstance(self.triplet, MulLevyTriplet) or self.triplet.d != 1:
                raise ValueError("Haar branches require a 1-d marginal triplet")
        elif self.kind == "haar_both":
            pass
        elif self.kind == "p_kappa":
            if self.c is None or self.c == 0:
                raise ValueError("the P-factor branch requires a nonzero c")
        else:
            raise ValueError(f"unknown kind {self.kind!r}")


def gamma_map(x: GammaDomainElement):
    """Map a bi-free ID law to its classical counterpart.

    On triplet-parameterized laws the map is the identity on triplets; the
    fixed-point branch returns P convolved with (kappa_c x delta_1); Haar
    branches return the product of Haar with the image of the marginal.
    """
    if x.kind == "triplet":
        return x.triplet
    if x.kind == "p_kappa":
        return CircConv(BiHaarP(), Product(Kappa(x.c), Kappa(1.0)))
    if x.kind == "haar_left":
        return Product(Haar(), TripletLaw(x.triplet))
    if x.kind == "haar_right":
        return Product(TripletLaw(x.triplet), Haar())
    if x.kind == "haar_both":
        return Product(Haar(), Haar())
    raise ValueError(f"unknown kind {x.kind!r}")


@dataclass(frozen=True)
class DiagramReport:
    pmax: int
    max_discrepancy: float
    passed: bool


def diagram_check(t: AddLevyTriplet, pmax: int = 20, tol: float = 1e-10) -> DiagramReport:
    """Verify the additive and multiplicative evaluation paths agree.

    Compares the multiplicative characteristic function of the wrapped
    triplet with the additive characteristic function at integer
    frequencies over the box ||p||_inf <= pmax.
    """
    if t.d != 2:
        raise DimensionMismatch("the commuting-square check requires d = 2")
    wrapped = wrap_triplet(t)
    worst = 0.0
    for p1 in range(-pmax, pmax + 1):
        for p2 in range(-pmax, pmax + 1):
            lhs = mul_lk_char(wrapped, (p1, p2))
            rhs = add_lk_char(t, (float(p1), float(p2)))
            worst = max(worst, abs(lhs - rhs))
    return DiagramReport(pmax=pmax, max_discrepancy=worst, passed=worst < tol)
