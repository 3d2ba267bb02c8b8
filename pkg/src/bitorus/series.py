"""Truncated formal power series in one and two variables.

Provides exact truncated ring arithmetic, composition and reversion,
exp/log, the Sigma-transform of circle measures at the moment level, free
multiplicative convolution through a fixed degree, and the bi-free
generating series of a multiplicative Levy triplet.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

DEFAULT_K = 16

__all__ = [
    "TruncSeries1",
    "TruncSeries2",
    "ZeroMean",
    "geometric1",
    "compose",
    "revert",
    "sigma_from_moments",
    "moments_from_sigma",
    "free_mul_convolve",
    "u_series",
]


class ZeroMean(ValueError):
    """Raised when a first moment required to be nonzero vanishes."""


def _as_coeffs1(coeffs, K: int) -> np.ndarray:
    arr = np.zeros(K + 1, dtype=np.complex128)
    src = np.asarray(coeffs, dtype=np.complex128)
    n = min(len(src), K + 1)
    arr[:n] = src[:n]
    return arr


@dataclass(frozen=True)
class TruncSeries1:
    """A complex power series truncated at degree K (inclusive)."""

    K: int
    coeffs: np.ndarray

    def __init__(self, coeffs, K: int | None = None) -> None:
        if K is None:
            K = len(coeffs) - 1
        arr = _as_coeffs1(coeffs, K)
        arr.setflags(write=False)
        object.__setattr__(self, "K", int(K))
        object.__setattr__(self, "coeffs", arr)

    def __getitem__(self, k: int) -> complex:
        return complex(self.coeffs[k])

    def __add__(self, other: "TruncSeries1") -> "TruncSeries1":
        K = min(self.K, other.K)
        return TruncSeries1(self.coeffs[: K + 1] + other.coeffs[: K + 1], K)

    def __sub__(self, other: "TruncSeries1") -> "TruncSeries1":
        K = min(self.K, other.K)
        return TruncSeries1(self.coeffs[: K + 1] - other.coeffs[: K + 1], K)

    def __mul__(self, other) -> "TruncSeries1":
        if isinstance(other, TruncSeries1):
            K = min(self.K, other.K)
            out = np.convolve(self.coeffs[: K + 1], other.coeffs[: K + 1])[: K + 1]
            return TruncSeries1(out, K)
        return TruncSeries1(self.coeffs * complex(other), self.K)

    __rmul__ = __mul__

    def __truediv__(self, other: "TruncSeries1") -> "TruncSeries1":
        if not isinstance(other, TruncSeries1):
            return TruncSeries1(self.coeffs / complex(other), self.K)
        K = min(self.K, other.K)
        b0 = complex(other.coeffs[0])
        if b0 == 0:
            raise ZeroDivisionError("division by a series with zero constant term")
        out = np.zeros(K + 1, dtype=np.complex128)
        for k in range(K + 1):
            acc = complex(self.coeffs[k])
            for j in range(k):
                acc -= out[j] * complex(other.coeffs[k - j])
            out[k] = acc / b0
        return TruncSeries1(out, K)

    def shift_down(self) -> "TruncSeries1":
        """Divide by z, requiring a zero constant term."""
        if self.coeffs[0] != 0:
            raise ValueError("cannot divide by z: nonzero constant term")
        return TruncSeries1(np.append(self.coeffs[1:], 0.0), self.K)

    def shift_up(self) -> "TruncSeries1":
        """Multiply by z."""
        return TruncSeries1(np.concatenate(([0.0], self.coeffs[:-1])), self.K)

    def truncate(self, K: int) -> "TruncSeries1":
        return TruncSeries1(self.coeffs[: K + 1], K)

    def derivative(self) -> "TruncSeries1":
        out = self.coeffs[1:] * np.arange(1, self.K + 1)
        return TruncSeries1(np.append(out, 0.0), self.K)

    def exp(self) -> "TruncSeries1":
        c0 = complex(self.coeffs[0])
        u = TruncSeries1(np.concatenate(([0.0], self.coeffs[1:])), self.K)
        term = TruncSeries1([1.0], self.K)
        acc = TruncSeries1([1.0], self.K)
        for k in range(1, self.K + 1):
            term = term * u * (1.0 / k)
            acc = acc + term
        return cmath.exp(c0) * acc

    def log(self) -> "TruncSeries1":
        c0 = complex(self.coeffs[0])
        if c0 == 0:
            raise ZeroDivisionError("log of a series with zero constant term")
        u = TruncSeries1(np.concatenate(([0.0], self.coeffs[1:] / c0)), self.K)
        term = TruncSeries1([1.0], self.K)
        acc = TruncSeries1([cmath.log(c0)], self.K)
        for k in range(1, self.K + 1):
            term = term * u
            acc = acc + term * ((-1.0) ** (k + 1) / k)
        return acc


def geometric1(K: int) -> TruncSeries1:
    """The series 1/(1-z) truncated at degree K."""
    return TruncSeries1(np.ones(K + 1), K)


def compose(g: TruncSeries1, f: TruncSeries1) -> TruncSeries1:
    """g(f(z)) for f with zero constant term (Horner evaluation)."""
    if f.coeffs[0] != 0:
        raise ValueError("composition requires the inner series to vanish at 0")
    K = min(g.K, f.K)
    f = f.truncate(K)
    acc = TruncSeries1([g.coeffs[K]], K)
    for k in range(K - 1, -1, -1):
        acc = acc * f + TruncSeries1([g.coeffs[k]], K)
    return acc


def revert(f: TruncSeries1) -> TruncSeries1:
    """Compositional inverse of f (f(0)=0, f'(0) != 0) via Newton iteration."""
    if f.coeffs[0] != 0:
        raise ValueError("reversion requires a zero constant term")
    f1 = complex(f.coeffs[1])
    if f1 == 0:
        raise ValueError("reversion requires a nonzero linear coefficient")
    K = f.K
    z = TruncSeries1(np.concatenate(([0.0, 1.0], np.zeros(max(0, K - 1)))), K)
    g = TruncSeries1([0.0, 1.0 / f1], K)
    fprime = f.derivative()
    # Newton: g <- g - (f(g) - z) / f'(g); doubles correct degrees per step
    for _ in range(max(1, math.ceil(math.log2(K + 1)) + 1)):
        residual = compose(f, g) - z
        g = g - residual / compose(fprime, g)
    return g


def _as_coeffs2(coeffs, K: int) -> np.ndarray:
    arr = np.zeros((K + 1, K + 1), dtype=np.complex128)
    src = np.asarray(coeffs, dtype=np.complex128)
    n0 = min(src.shape[0], K + 1)
    n1 = min(src.shape[1], K + 1)
    arr[:n0, :n1] = src[:n0, :n1]
    return arr


@dataclass(frozen=True)
class TruncSeries2:
    """A complex power series in (z, w), bidegree-truncated at K per variable."""

    K: int
    coeffs: np.ndarray

    def __init__(self, coeffs, K: int | None = None) -> None:
        src = np.asarray(coeffs, dtype=np.complex128)
        if K is None:
            K = src.shape[0] - 1
        arr = _as_coeffs2(src, K)
        arr.setflags(write=False)
        object.__setattr__(self, "K", int(K))
        object.__setattr__(self, "coeffs", arr)

    @classmethod
    def zero(cls, K: int) -> "TruncSeries2":
        return cls(np.zeros((K + 1, K + 1)), K)

    @classmethod
    def constant(cls, value: complex, K: int) -> "TruncSeries2":
        arr = np.zeros((K + 1, K + 1), dtype=np.complex128)
        arr[0, 0] = value
        return cls(arr, K)

    def __getitem__(self, idx: tuple[int, int]) -> complex:
        return complex(self.coeffs[idx])

    def __add__(self, other: "TruncSeries2") -> "TruncSeries2":
        K = min(self.K, other.K)
        return TruncSeries2(self.coeffs[: K + 1, : K + 1] + other.coeffs[: K + 1, : K + 1], K)

    def __sub__(self, other: "TruncSeries2") -> "TruncSeries2":
        K = min(self.K, other.K)
        return TruncSeries2(self.coeffs[: K + 1, : K + 1] - other.coeffs[: K + 1, : K + 1], K)

    def __mul__(self, other) -> "TruncSeries2":
        if isinstance(other, TruncSeries2):
            K = min(self.K, other.K)
            a = self.coeffs[: K + 1, : K + 1]
            b = other.coeffs[: K + 1, : K + 1]
            out = np.zeros((K + 1, K + 1), dtype=np.complex128)
            for i in range(K + 1):
                for j in range(K + 1):
                    c = a[i, j]
                    if c != 0:
                        out[i:, j:] += c * b[: K + 1 - i, : K + 1 - j]
            return TruncSeries2(out, K)
        return TruncSeries2(self.coeffs * complex(other), self.K)

    __rmul__ = __mul__

    def __truediv__(self, other: "TruncSeries2") -> "TruncSeries2":
        K = min(self.K, other.K)
        b = other.coeffs
        b00 = complex(b[0, 0])
        if b00 == 0:
            raise ZeroDivisionError("division by a series with zero constant term")
        a = self.coeffs
        out = np.zeros((K + 1, K + 1), dtype=np.complex128)
        for i in range(K + 1):
            for j in range(K + 1):
                acc = complex(a[i, j])
                for k in range(i + 1):
                    for l in range(j + 1):
                        if (k, l) != (i, j):
                            acc -= out[k, l] * complex(b[i - k, j - l])
                out[i, j] = acc / b00
        return TruncSeries2(out, K)

    def exp(self) -> "TruncSeries2":
        c0 = complex(self.coeffs[0, 0])
        u = TruncSeries2(self.coeffs.copy(), self.K)
        umat = u.coeffs.copy()
        umat[0, 0] = 0.0
        u = TruncSeries2(umat, self.K)
        term = TruncSeries2.constant(1.0, self.K)
        acc = TruncSeries2.constant(1.0, self.K)
        for k in range(1, 2 * self.K + 1):
            term = term * u * (1.0 / k)
            acc = acc + term
        return cmath.exp(c0) * acc

    def log(self) -> "TruncSeries2":
        c0 = complex(self.coeffs[0, 0])
        if c0 == 0:
            raise ZeroDivisionError("log of a series with zero constant term")
        umat = self.coeffs / c0
        umat = umat.copy()
        umat[0, 0] = 0.0
        u = TruncSeries2(umat, self.K)
        term = TruncSeries2.constant(1.0, self.K)
        acc = TruncSeries2.constant(cmath.log(c0), self.K)
        for k in range(1, 2 * self.K + 1):
            term = term * u
            acc = acc + term * ((-1.0) ** (k + 1) / k)
        return acc


def sigma_from_moments(m: Sequence[complex], K: int | None = None) -> TruncSeries1:
    """Sigma transform of a circle measure from its moments m_1..m_K.

    psi(z) = sum m_k z^k, eta = psi/(1+psi), Sigma(z) = revert(eta)(z)/z.
    """
    m = [complex(v) for v in m]
    if K is None:
        K = len(m)
    if len(m) == 0 or m[0] == 0:
        raise ZeroMean("the first moment must be nonzero")
    psi = TruncSeries1(np.concatenate(([0.0], m)), K)
    one = TruncSeries1([1.0], K)
    eta = psi / (one + psi)
    return revert(eta).shift_down()


def moments_from_sigma(sigma: TruncSeries1, K: int | None = None) -> list[complex]:
    """Invert ``sigma_from_moments``: recover moments m_1..m_K."""
    if K is None:
        K = sigma.K
    sigma = sigma.truncate(K)
    if sigma.coeffs[0] == 0:
        raise ZeroMean("Sigma(0) must be nonzero")
    eta = revert(sigma.shift_up())
    one = TruncSeries1([1.0], K)
    psi = eta / (one - eta)
    return [complex(psi.coeffs[k]) for k in range(1, K + 1)]


def free_mul_convolve(
    mA: Sequence[complex], mB: Sequence[complex], K: int | None = None
) -> list[complex]:
    """Moments of the free multiplicative convolution through degree K."""
    if K is None:
        K = min(len(mA), len(mB))
    sa = sigma_from_moments(list(mA)[:K], K)
    sb = sigma_from_moments(list(mB)[:K], K)
    return moments_from_sigma(sa * sb, K)


def u_series(triplet, K: int = DEFAULT_K):
    """Generating series of a 2-d multiplicative Levy triplet.

    Returns ``(N, P, divided)`` where N is the Gaussian part, P the Levy-jump
    part, and ``divided`` = (drift - N + P) / ((1-z)(1-w)) whose (p1, p2)
    coefficient equals i<p, arg gamma> - <A p, p>/2 + I(p), the per-p
    classical exponent of the triplet.
    """
    from .levy import HaarKernelDensity, levy_jump_integral
    from .measures import UnsupportedOperation

    if triplet.d != 2:
        raise ValueError("the generating series requires a 2-d triplet")
    if isinstance(triplet.rho, HaarKernelDensity):
        raise UnsupportedOperation("density-form Levy measures are unsupported here")
    A = np.asarray(triplet.A, dtype=float)
    g1, g2 = triplet.gamma_arg

    # N: (a11/2) z(1+z)/(1-z)^2 + a12 zw/((1-z)(1-w)) + (a22/2) w(1+w)/(1-w)^2
    idx = np.arange(K + 1, dtype=float)
    n_z = np.zeros((K + 1, K + 1), dtype=np.complex128)
    # z(1+z)/(1-z)^2 = sum_{k>=1} (2k-1) z^k
    n_z[1:, 0] = 2.0 * idx[1:] - 1.0
    n_w = np.zeros((K + 1, K + 1), dtype=np.complex128)
    n_w[0, 1:] = 2.0 * idx[1:] - 1.0
    n_zw = np.zeros((K + 1, K + 1), dtype=np.complex128)
    n_zw[1:, 1:] = 1.0  # zw/((1-z)(1-w))
    N = TruncSeries2(
        0.5 * A[0, 0] * n_z + A[0, 1] * n_zw + 0.5 * A[1, 1] * n_w, K
    )

    # drift: i arg(gamma_1) z/(1-z) + i arg(gamma_2) w/(1-w)
    d_arr = np.zeros((K + 1, K + 1), dtype=np.complex128)
    d_arr[1:, 0] += 1j * g1
    d_arr[0, 1:] += 1j * g2
    drift = TruncSeries2(d_arr, K)

    # P: (1-z)(1-w) * E, where E's (p1,p2) coefficient is the jump integral
    e_arr = np.zeros((K + 1, K + 1), dtype=np.complex128)
    for p1 in range(K + 1):
        for p2 in range(K + 1):
            e_arr[p1, p2] = levy_jump_integral(triplet.rho, (p1, p2))
    E = TruncSeries2(e_arr, K)
    onemz = np.zeros((K + 1, K + 1), dtype=np.complex128)
    onemz[0, 0] = 1.0
    if K >= 1:
        onemz[1, 0] = -1.0
        onemz[0, 1] = -1.0
        onemz[1, 1] = 1.0
    factor = TruncSeries2(onemz, K)
    P = factor * E

    U = drift - N + P
    divided = U / factor
    return N, P, divided
