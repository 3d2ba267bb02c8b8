"""Measures on the circle, bi-torus and plane with closed-form moments.

Atomic measures store canonical angles in (-pi, pi] and evaluate moments by
compensated summation in fixed atom order.  ``MomentMeasure`` is a small
structural algebra of measures given by closed-form moment oracles: atomic
measures, Dirac points, Haar measure, the bi-Haar measures P and its
coordinate flip, Poisson-kernel measures, products, rotations, flips and
classical convolutions.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ._kernels import atomic_moment_sum

TWO_PI = 2.0 * math.pi
MASS_TOL = 1e-12

__all__ = [
    "Angle",
    "canonicalize_angle",
    "AtomicTorusMeasure",
    "PlanarAtomicMeasure",
    "MomentMeasure",
    "Atomic",
    "Dirac",
    "Haar",
    "BiHaarP",
    "BiHaarPStar",
    "Kappa",
    "Product",
    "Rotate",
    "Flip",
    "CircConv",
    "moment",
    "circ_convolve",
    "bifree_convolve_special",
    "wrap_pushforward",
    "rotate",
    "flip_star",
    "kappa_moment",
    "UnsupportedOperation",
    "DimensionMismatch",
]


class UnsupportedOperation(Exception):
    """Raised when an operation has no closed form in this library."""


class DimensionMismatch(ValueError):
    """Raised when operands live on tori of different dimensions."""


def canonicalize_angle(x: float) -> float:
    """Reduce an angle to the canonical range (-pi, pi]; -pi maps to +pi."""
    y = math.remainder(float(x), TWO_PI)
    if y <= -math.pi:
        y += TWO_PI
    # normalize -0.0 so canonical angles compare and hash consistently
    return y + 0.0


@dataclass(frozen=True)
class Angle:
    """An angle stored in the canonical range (-pi, pi]."""

    value: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", canonicalize_angle(self.value))

    def __float__(self) -> float:
        return self.value


def _canonical_theta(theta: Sequence[float]) -> tuple[float, ...]:
    return tuple(canonicalize_angle(t) for t in theta)


@dataclass(frozen=True)
class AtomicTorusMeasure:
    """Finite positive atomic measure on the d-torus.

    ``mode`` is one of:
      * ``"probability"`` - weights sum to 1 (within ``mass_tol``);
      * ``"levy"`` - no atom at the identity (angle vector 0);
      * ``"mass"`` - any finite positive measure.
    Atoms with equal canonical angle vectors are merged; atom order is the
    first-occurrence order of the input, which fixes the summation order.
    """

    dim: int
    thetas: tuple[tuple[float, ...], ...]
    weights: tuple[float, ...]
    mode: str = "probability"

    def __init__(
        self,
        dim: int,
        atoms: Iterable[tuple[Sequence[float], float]],
        mode: str = "probability",
        mass_tol: float = MASS_TOL,
    ) -> None:
        if dim < 1:
            raise ValueError("dimension must be a positive integer")
        if mode not in ("probability", "levy", "mass"):
            raise ValueError(f"unknown mode {mode!r}")
        merged: dict[tuple[float, ...], float] = {}
        for theta, w in atoms:
            theta = _canonical_theta(theta)
            if len(theta) != dim:
                raise DimensionMismatch(
                    f"atom has {len(theta)} coordinates, expected {dim}"
                )
            w = float(w)
            if w < 0.0:
                raise ValueError("atom weights must be nonnegative")
            merged[theta] = merged.get(theta, 0.0) + w
        thetas = tuple(merged.keys())
        weights = tuple(merged.values())
        if mode == "probability":
            total = math.fsum(weights)
            if abs(total - 1.0) > mass_tol:
                raise ValueError(
                    f"probability measure has total mass {total!r}, not 1"
                )
        elif mode == "levy":
            for theta in thetas:
                if all(t == 0.0 for t in theta):
                    raise ValueError("Levy measure must not charge the identity")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "thetas", thetas)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "mode", mode)

    @property
    def n_atoms(self) -> int:
        return len(self.weights)

    def total_mass(self) -> float:
        return math.fsum(self.weights)

    def theta_array(self) -> np.ndarray:
        return np.asarray(self.thetas, dtype=np.float64).reshape(self.n_atoms, self.dim)

    def weight_array(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=np.float64)

    def moment(self, p: Sequence[int]) -> complex:
        p = _check_p(p, self.dim)
        return atomic_moment_sum(self.theta_array(), self.weight_array(), p)

    def scaled(self, factor: float) -> "AtomicTorusMeasure":
        """The same atoms with every weight multiplied by ``factor``."""
        return AtomicTorusMeasure(
            self.dim,
            [(t, w * factor) for t, w in zip(self.thetas, self.weights)],
            mode="mass" if self.mode == "probability" and factor != 1.0 else self.mode,
        )

    def rotated(self, beta_arg: Sequence[float]) -> "AtomicTorusMeasure":
        """Push-forward under s -> e^{i beta} s (atoms shift by beta)."""
        beta = _canonical_theta(beta_arg)
        if len(beta) != self.dim:
            raise DimensionMismatch("rotation angle has wrong dimension")
        return AtomicTorusMeasure(
            self.dim,
            [
                (tuple(t[j] + beta[j] for j in range(self.dim)), w)
                for t, w in zip(self.thetas, self.weights)
            ],
            mode="mass" if self.mode == "levy" else self.mode,
        )

    def flipped(self) -> "AtomicTorusMeasure":
        """Push-forward under the coordinate flip (s1, s2) -> (s1, 1/s2)."""
        if self.dim != 2:
            raise DimensionMismatch("coordinate flip requires dimension 2")
        return AtomicTorusMeasure(
            self.dim,
            [((t[0], -t[1]), w) for t, w in zip(self.thetas, self.weights)],
            mode=self.mode,
        )

    def plus(self, other: "AtomicTorusMeasure", mode: str = "mass") -> "AtomicTorusMeasure":
        if self.dim != other.dim:
            raise DimensionMismatch("cannot add measures of different dimensions")
        atoms = list(zip(self.thetas, self.weights)) + list(
            zip(other.thetas, other.weights)
        )
        return AtomicTorusMeasure(self.dim, atoms, mode=mode)


@dataclass(frozen=True)
class PlanarAtomicMeasure:
    """Finite positive atomic measure on R^d (probability, Levy or mass mode)."""

    dim: int
    xs: tuple[tuple[float, ...], ...]
    weights: tuple[float, ...]
    mode: str = "probability"

    def __init__(
        self,
        dim: int,
        atoms: Iterable[tuple[Sequence[float], float]],
        mode: str = "probability",
        mass_tol: float = MASS_TOL,
    ) -> None:
        if dim < 1:
            raise ValueError("dimension must be a positive integer")
        if mode not in ("probability", "levy", "mass"):
            raise ValueError(f"unknown mode {mode!r}")
        merged: dict[tuple[float, ...], float] = {}
        for x, w in atoms:
            x = tuple(float(v) for v in x)
            if len(x) != dim:
                raise DimensionMismatch(
                    f"atom has {len(x)} coordinates, expected {dim}"
                )
            w = float(w)
            if w < 0.0:
                raise ValueError("atom weights must be nonnegative")
            merged[x] = merged.get(x, 0.0) + w
        xs = tuple(merged.keys())
        weights = tuple(merged.values())
        if mode == "probability":
            total = math.fsum(weights)
            if abs(total - 1.0) > mass_tol:
                raise ValueError(
                    f"probability measure has total mass {total!r}, not 1"
                )
        elif mode == "levy":
            for x in xs:
                if all(v == 0.0 for v in x):
                    raise ValueError("Levy measure must not charge the origin")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "mode", mode)

    @property
    def n_atoms(self) -> int:
        return len(self.weights)

    def total_mass(self) -> float:
        return math.fsum(self.weights)

    def x_array(self) -> np.ndarray:
        return np.asarray(self.xs, dtype=np.float64).reshape(self.n_atoms, self.dim)

    def weight_array(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=np.float64)

    def char(self, u: Sequence[float]) -> complex:
        """The additive characteristic function sum_k w_k e^{i <u, x_k>}."""
        u = np.asarray(u, dtype=np.float64)
        if u.shape != (self.dim,):
            raise DimensionMismatch("frequency vector has wrong dimension")
        return atomic_moment_sum(self.x_array(), self.weight_array(), u)


def _check_p(p: Sequence[int], dim: int) -> tuple[int, ...]:
    p = tuple(int(v) for v in p)
    if len(p) != dim:
        raise DimensionMismatch(f"moment index has length {len(p)}, expected {dim}")
    return p


def kappa_moment(c: complex, p: int) -> complex:
    """Moment of order p of the Poisson-kernel measure with parameter c."""
    p = int(p)
    if p == 0:
        return 1.0 + 0j
    if p > 0:
        return complex(c) ** p
    return complex(c).conjugate() ** (-p)


class MomentMeasure:
    """A probability measure given by a closed-form moment oracle."""

    dim: int

    def moment(self, p: Sequence[int]) -> complex:
        raise NotImplementedError


@dataclass(frozen=True)
class Atomic(MomentMeasure):
    measure: AtomicTorusMeasure

    def __post_init__(self) -> None:
        if self.measure.mode != "probability":
            raise ValueError("Atomic moment measures must be probability measures")
        object.__setattr__(self, "dim", self.measure.dim)

    def moment(self, p: Sequence[int]) -> complex:
        return self.measure.moment(p)


@dataclass(frozen=True)
class Dirac(MomentMeasure):
    """Point mass at e^{i theta} on the d-torus."""

    theta: tuple[float, ...]

    def __init__(self, theta: Sequence[float]) -> None:
        object.__setattr__(self, "theta", _canonical_theta(theta))
        object.__setattr__(self, "dim", len(self.theta))

    def moment(self, p: Sequence[int]) -> complex:
        p = _check_p(p, self.dim)
        return cmath.exp(1j * math.fsum(pj * tj for pj, tj in zip(p, self.theta)))


@dataclass(frozen=True)
class Haar(MomentMeasure):
    """Normalized Haar measure on the circle."""

    def __post_init__(self) -> None:
        object.__setattr__(self, "dim", 1)

    def moment(self, p: Sequence[int]) -> complex:
        (p0,) = _check_p(p, 1)
        return 1.0 + 0j if p0 == 0 else 0j


@dataclass(frozen=True)
class BiHaarP(MomentMeasure):
    """The bi-Haar measure on the bi-torus: moments are 1 on p = q, else 0."""

    def __post_init__(self) -> None:
        object.__setattr__(self, "dim", 2)

    def moment(self, p: Sequence[int]) -> complex:
        p0, p1 = _check_p(p, 2)
        return 1.0 + 0j if p0 == p1 else 0j


@dataclass(frozen=True)
class BiHaarPStar(MomentMeasure):
    """Coordinate flip of the bi-Haar measure: moments are 1 on p = -q."""

    def __post_init__(self) -> None:
        object.__setattr__(self, "dim", 2)

    def moment(self, p: Sequence[int]) -> complex:
        p0, p1 = _check_p(p, 2)
        return 1.0 + 0j if p0 == -p1 else 0j


@dataclass(frozen=True)
class Kappa(MomentMeasure):
    """Poisson-kernel measure on the circle with parameter c, |c| <= 1."""

    c: complex

    def __init__(self, c: complex) -> None:
        c = complex(c)
        if abs(c) > 1.0 + 1e-12:
            raise ValueError("Poisson-kernel parameter must satisfy |c| <= 1")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "dim", 1)

    def moment(self, p: Sequence[int]) -> complex:
        (p0,) = _check_p(p, 1)
        return kappa_moment(self.c, p0)


@dataclass(frozen=True)
class Product(MomentMeasure):
    """Independent product measure on the product of two tori."""

    a: MomentMeasure
    b: MomentMeasure

    def __post_init__(self) -> None:
        object.__setattr__(self, "dim", self.a.dim + self.b.dim)

    def moment(self, p: Sequence[int]) -> complex:
        p = _check_p(p, self.dim)
        return self.a.moment(p[: self.a.dim]) * self.b.moment(p[self.a.dim :])


@dataclass(frozen=True)
class Rotate(MomentMeasure):
    """Push-forward of a measure under s -> e^{i beta} s."""

    base: MomentMeasure
    beta: tuple[float, ...]

    def __init__(self, base: MomentMeasure, beta: Sequence[float]) -> None:
        beta = _canonical_theta(beta)
        if len(beta) != base.dim:
            raise DimensionMismatch("rotation angle has wrong dimension")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "dim", base.dim)

    def moment(self, p: Sequence[int]) -> complex:
        p = _check_p(p, self.dim)
        phase = cmath.exp(1j * math.fsum(pj * bj for pj, bj in zip(p, self.beta)))
        return phase * self.base.moment(p)


@dataclass(frozen=True)
class Flip(MomentMeasure):
    """Push-forward under the coordinate flip (s1, s2) -> (s1, 1/s2)."""

    base: MomentMeasure

    def __post_init__(self) -> None:
        if self.base.dim != 2:
            raise DimensionMismatch("coordinate flip requires dimension 2")
        object.__setattr__(self, "dim", 2)

    def moment(self, p: Sequence[int]) -> complex:
        p0, p1 = _check_p(p, 2)
        return self.base.moment((p0, -p1))


@dataclass(frozen=True)
class CircConv(MomentMeasure):
    """Classical multiplicative convolution: moments multiply pointwise."""

    a: MomentMeasure
    b: MomentMeasure

    def __post_init__(self) -> None:
        if self.a.dim != self.b.dim:
            raise DimensionMismatch("convolution factors must share a dimension")
        object.__setattr__(self, "dim", self.a.dim)

    def moment(self, p: Sequence[int]) -> complex:
        p = _check_p(p, self.dim)
        return self.a.moment(p) * self.b.moment(p)


def moment(m: MomentMeasure, p: Sequence[int]) -> complex:
    """Moment of order p of a moment measure."""
    return m.moment(p)


def circ_convolve(a: MomentMeasure, b: MomentMeasure) -> MomentMeasure:
    """Classical multiplicative convolution of two torus measures."""
    if a.dim != b.dim:
        raise DimensionMismatch("convolution factors must share a dimension")
    return CircConv(a, b)


def rotate(m: MomentMeasure, beta: Sequence[float]) -> MomentMeasure:
    """Rotate a measure by the torus point e^{i beta}."""
    return Rotate(m, beta)


def flip_star(m: MomentMeasure) -> MomentMeasure:
    """Coordinate flip on the bi-torus; an involution at the moment level."""
    if isinstance(m, Flip):
        return m.base
    return Flip(m)


def _kappa_factors(m: MomentMeasure) -> list[complex] | None:
    """Coordinatewise Poisson-kernel parameters if m is a product of
    Poisson-kernel-type factors (Kappa, Haar = kappa_0, Dirac = kappa on the
    boundary), else None."""
    if isinstance(m, Kappa):
        return [m.c]
    if isinstance(m, Haar):
        return [0j]
    if isinstance(m, Dirac):
        return [cmath.exp(1j * t) for t in m.theta]
    if isinstance(m, Product):
        fa = _kappa_factors(m.a)
        fb = _kappa_factors(m.b)
        if fa is not None and fb is not None:
            return fa + fb
        return None
    if isinstance(m, Rotate):
        base = _kappa_factors(m.base)
        if base is not None:
            return [c * cmath.exp(1j * b) for c, b in zip(base, m.beta)]
        return None
    if isinstance(m, CircConv):
        fa = _kappa_factors(m.a)
        fb = _kappa_factors(m.b)
        if fa is not None and fb is not None:
            return [x * y for x, y in zip(fa, fb)]
        return None
    if isinstance(m, Atomic) and m.measure.n_atoms == 1:
        return [cmath.exp(1j * t) for t in m.measure.thetas[0]]
    return None


def bifree_convolve_special(a: MomentMeasure, b: MomentMeasure) -> MomentMeasure:
    """Bi-free multiplicative convolution on the computable classes.

    Supported cases: one factor is a (product of) Poisson-kernel-type
    measures, in which case the bi-free and classical convolutions agree; or
    one factor is the bi-Haar measure P, which absorbs the other factor into
    P convolved with (kappa_{m_{1,1}} x delta_1).  Anything else raises
    ``UnsupportedOperation``.
    """
    if a.dim != b.dim:
        raise DimensionMismatch("convolution factors must share a dimension")
    for x, y in ((a, b), (b, a)):
        if _kappa_factors(y) is not None:
            return circ_convolve(x, y)
    if a.dim == 2:
        for x, y in ((a, b), (b, a)):
            if isinstance(x, BiHaarP):
                c = y.moment((1, 1))
                return circ_convolve(BiHaarP(), Product(Kappa(c), Kappa(1.0)))
    raise UnsupportedOperation(
        "bi-free multiplicative convolution is only computable when one "
        "factor is a Poisson-kernel-type product or the bi-Haar measure"
    )


def wrap_pushforward(
    mu: PlanarAtomicMeasure,
    opposite_second: bool = False,
    mode: str | None = None,
) -> AtomicTorusMeasure:
    """Push a planar atomic measure forward under x -> e^{ix}.

    With ``opposite_second`` the second coordinate is negated before
    wrapping.  In Levy mode, atoms landing at the identity are dropped; in
    probability/mass mode they are retained.
    """
    if mode is None:
        mode = mu.mode
    if opposite_second and mu.dim != 2:
        raise DimensionMismatch("opposite wrapping requires dimension 2")
    atoms = []
    for x, w in zip(mu.xs, mu.weights):
        if opposite_second:
            x = (x[0], -x[1])
        theta = _canonical_theta(x)
        if mode == "levy" and all(t == 0.0 for t in theta):
            continue
        atoms.append((theta, w))
    return AtomicTorusMeasure(mu.dim, atoms, mode=mode)
