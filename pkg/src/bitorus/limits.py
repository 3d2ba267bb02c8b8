"""Triangular-array machinery for multiplicative limit theorems.

Rows are stored compressed as (measure, count) pairs so that rows made of
many identical factors stay cheap: characteristic-function products become
powers and log-sums become count-weighted logs.  All row summations follow
a fixed entry order for determinism.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .levy import MulLevyTriplet, mul_lk_char
from .measures import (
    AtomicTorusMeasure,
    DimensionMismatch,
    PlanarAtomicMeasure,
    canonicalize_angle,
    wrap_pushforward,
)

DEFAULT_EPS_GRID = (0.05, 0.1, 0.2, 0.5)

__all__ = [
    "Row",
    "TriangularArray",
    "CenteredRow",
    "ConditionReport",
    "LimitReport",
    "center_row",
    "condition_report",
    "classical_product_char",
    "limit_check",
    "perturb_array",
    "perturbation_size",
    "flip_array",
    "iid_array",
    "additive_center_row",
    "wrap_array",
    "re_im_bound_constant",
    "re_im_bound_check",
    "gaussian_planar_array",
    "gaussian_array",
    "poisson_planar_array",
    "poisson_array",
]


@dataclass(frozen=True)
class Row:
    """One level of a triangular array: a shift and (measure, count) entries."""

    shift: tuple[float, ...]
    entries: tuple[tuple[object, int], ...]

    def __init__(self, shift: Sequence[float], entries) -> None:
        object.__setattr__(self, "shift", tuple(float(s) for s in shift))
        object.__setattr__(
            self, "entries", tuple((m, int(c)) for m, c in entries)
        )

    @property
    def k(self) -> int:
        return sum(c for _, c in self.entries)


@dataclass(frozen=True)
class TriangularArray:
    """A triangular array of atomic measures on the torus or the plane."""

    kind: str  # "torus" or "planar"
    dim: int
    generator: Callable[[int], Row]
    theta: float = 0.5

    def __post_init__(self) -> None:
        if self.kind not in ("torus", "planar"):
            raise ValueError("kind must be 'torus' or 'planar'")
        if not 0.0 < self.theta < 1.0:
            raise ValueError("the centering cutoff must lie in (0, 1)")

    def row(self, n: int) -> Row:
        return self.generator(n)


@dataclass(frozen=True)
class IIDTriangularArray(TriangularArray):
    """An identically-distributed torus array, optionally mean-rotated."""

    nu_of_n: Callable[[int], AtomicTorusMeasure] = None
    k_of_n: Callable[[int], int] = None
    rotated: bool = False

    def omega_arg(self, n: int) -> tuple[float, ...]:
        """Arguments of the coordinate mean directions of nu_n."""
        nu = self.nu_of_n(n)
        out = []
        for j in range(self.dim):
            p = [0] * self.dim
            p[j] = 1
            m = nu.moment(p)
            if abs(m) < 1e-15:
                raise ValueError("rotated mode requires nonzero coordinate means")
            out.append(cmath.phase(m))
        return tuple(out)

    def omega_pow_arg(self, n: int) -> tuple[float, ...]:
        """Argument vector of omega_n^{k_n} (the drift accumulated by rotation)."""
        w = self.omega_arg(n)
        k = self.k_of_n(n)
        return tuple(canonicalize_angle(k * wj) for wj in w)


@dataclass(frozen=True)
class CenteredRow:
    """Output of the row-centering step at one level n."""

    n: int
    shift: tuple[float, ...]
    b_args: tuple[tuple[tuple[float, ...], int], ...]
    centered: tuple[tuple[AtomicTorusMeasure, int], ...]
    rho_n: AtomicTorusMeasure
    gamma_arg: tuple[float, ...]


def _center_measure(nu: AtomicTorusMeasure, theta: float):
    """The centering rotation argument and the rotated measure for one entry."""
    T = nu.theta_array()
    W = nu.weight_array()
    if nu.n_atoms:
        radii = np.sqrt((T * T).sum(axis=1))
        mask = radii < theta
        barg = (W[mask, None] * T[mask]).sum(axis=0)
    else:
        barg = np.zeros(nu.dim)
    centered = nu.rotated(tuple(-b for b in barg))
    return tuple(float(b) for b in barg), centered


def center_row(array: TriangularArray, n: int) -> CenteredRow:
    """Center one row: rotation factors, rotated measures, rho_n and gamma_n."""
    if array.kind != "torus":
        raise ValueError("row centering applies to torus arrays")
    row = array.row(n)
    b_args = []
    centered = []
    rho_atoms = []
    gamma_terms = [[] for _ in range(array.dim)]
    for nu, count in row.entries:
        barg, cm = _center_measure(nu, array.theta)
        b_args.append((barg, count))
        centered.append((cm, count))
        for t, w in zip(cm.thetas, cm.weights):
            rho_atoms.append((t, count * w))
        for j in range(array.dim):
            im_int = math.fsum(
                w * math.sin(t[j]) for t, w in zip(cm.thetas, cm.weights)
            )
            gamma_terms[j].append(count * (barg[j] + im_int))
    rho_n = AtomicTorusMeasure(array.dim, rho_atoms, mode="mass")
    gamma = tuple(
        canonicalize_angle(row.shift[j] + math.fsum(gamma_terms[j]))
        for j in range(array.dim)
    )
    return CenteredRow(
        n=n,
        shift=row.shift,
        b_args=tuple(b_args),
        centered=tuple(centered),
        rho_n=rho_n,
        gamma_arg=gamma,
    )


def _nudge_eps(eps: float, radii: np.ndarray, gap: float = 1e-9) -> float:
    """Move eps off atom radii so boundary mass is never ambiguous."""
    while radii.size and np.any(np.abs(radii - eps) < gap):
        eps += 1e-6
    return eps


@dataclass(frozen=True)
class ConditionReport:
    """Finite-n diagnostics for the limit-theorem convergence conditions."""

    n: int
    kind: str
    lambda_nj: tuple
    L: np.ndarray
    tails: dict
    Qeps: dict
    infinitesimality: dict


def condition_report(
    array: TriangularArray,
    n: int,
    eps_list: Sequence[float] = DEFAULT_EPS_GRID,
    p_list: Sequence[Sequence[float]] | None = None,
) -> ConditionReport:
    """Compute the per-level convergence-condition diagnostics."""
    d = array.dim
    if p_list is None:
        p_list = [tuple(1.0 if i == j else 0.0 for i in range(d)) for j in range(d)]
    if array.kind == "torus":
        cr = center_row(array, n)
        T = cr.rho_n.theta_array()
        W = cr.rho_n.weight_array()
        radii = np.sqrt((T * T).sum(axis=1)) if W.size else np.zeros(0)
        lam = tuple(
            AtomicTorusMeasure(
                d,
                [
                    (t, w * (1.0 - math.cos(t[j])))
                    for t, w in zip(cr.rho_n.thetas, cr.rho_n.weights)
                ],
                mode="mass",
            )
            for j in range(d)
        )
        S = np.sin(T) if W.size else np.zeros((0, d))
        L = np.zeros((d, d))
        for j in range(d):
            for l in range(d):
                L[j, l] = float((W * S[:, j] * S[:, l]).sum()) if W.size else 0.0
        tails = {}
        Qeps = {}
        infin = {}
        row = array.row(n)
        for eps in eps_list:
            e = _nudge_eps(float(eps), radii)
            tails[eps] = float(W[radii >= e].sum()) if W.size else 0.0
            for p in p_list:
                pv = np.asarray(p, dtype=float)
                inside = radii < e
                Qeps[(eps, tuple(p))] = (
                    float((W[inside] * (S[inside] @ pv) ** 2).sum()) if W.size else 0.0
                )
            worst = 0.0
            for nu, _count in row.entries:
                Tn = nu.theta_array()
                Wn = nu.weight_array()
                if Wn.size:
                    rn = np.sqrt((Tn * Tn).sum(axis=1))
                    worst = max(worst, float(Wn[rn >= e].sum()))
            infin[eps] = worst
        return ConditionReport(
            n=n, kind="torus", lambda_nj=lam, L=L, tails=tails, Qeps=Qeps,
            infinitesimality=infin,
        )
    # planar
    acr = additive_center_row(array, n)
    tau = acr.tau_n
    X = tau.x_array()
    W = tau.weight_array()
    radii = np.sqrt((X * X).sum(axis=1)) if W.size else np.zeros(0)
    sigma = tuple(
        PlanarAtomicMeasure(
            d,
            [
                (x, w * x[j] ** 2 / (1.0 + x[j] ** 2))
                for x, w in zip(tau.xs, tau.weights)
            ],
            mode="mass",
        )
        for j in range(d)
    )
    L = np.zeros((d, d))
    if W.size:
        denom = 1.0 + X * X
        for j in range(d):
            for l in range(d):
                L[j, l] = float(
                    (W * X[:, j] * X[:, l] / (denom[:, j] * denom[:, l])).sum()
                )
    tails = {}
    Qeps = {}
    infin = {}
    row = array.row(n)
    for eps in eps_list:
        e = _nudge_eps(float(eps), radii)
        tails[eps] = float(W[radii >= e].sum()) if W.size else 0.0
        for p in p_list:
            pv = np.asarray(p, dtype=float)
            inside = radii < e
            Qeps[(eps, tuple(p))] = (
                float((W[inside] * (X[inside] @ pv) ** 2).sum()) if W.size else 0.0
            )
        worst = 0.0
        for mu, _count in row.entries:
            Xn = mu.x_array()
            Wn = mu.weight_array()
            if Wn.size:
                rn = np.sqrt((Xn * Xn).sum(axis=1))
                worst = max(worst, float(Wn[rn >= e].sum()))
        infin[eps] = worst
    return ConditionReport(
        n=n, kind="planar", lambda_nj=sigma, L=L, tails=tails, Qeps=Qeps,
        infinitesimality=infin,
    )


def classical_product_char(array: TriangularArray, n: int, p: Sequence[int]) -> complex:
    """The level-n characteristic function of the row's convolution product.

    Evaluated through the centered factorization: the shift, the centering
    rotations, and the centered-measure moments.  Logarithms are summed only
    when every centered factor is in the principal-branch safe zone.
    """
    if array.kind != "torus":
        raise ValueError("the product characteristic function is for torus arrays")
    p = tuple(int(v) for v in p)
    if len(p) != array.dim:
        raise DimensionMismatch("frequency vector has wrong dimension")
    cr = center_row(array, n)
    xi_phase = math.fsum(pj * sj for pj, sj in zip(p, cr.shift))
    factors = []
    for (barg, count), (cm, _count) in zip(cr.b_args, cr.centered):
        mhat = cm.moment(p)
        bphase = math.fsum(pj * bj for pj, bj in zip(p, barg))
        factors.append((bphase, mhat, count))
    if any(mhat == 0 for _, mhat, _ in factors):
        return 0j
    if all(abs(mhat - 1.0) < 0.5 for _, mhat, _ in factors):
        log_sum = complex(
            math.fsum(count * cmath.log(mhat).real for _, mhat, count in factors),
            math.fsum(
                count * (bphase + cmath.log(mhat).imag)
                for bphase, mhat, count in factors
            ),
        )
        return cmath.exp(1j * xi_phase + log_sum)
    out = cmath.exp(1j * xi_phase)
    for bphase, mhat, count in factors:
        out *= (cmath.exp(1j * bphase) * mhat) ** count
    return out


@dataclass(frozen=True)
class LimitReport:
    """Desk-scale comparison of a triangular array against a target triplet."""

    n_list: tuple[int, ...]
    pmax: int
    tol: float
    errors: dict
    max_error: dict
    gamma_drift: dict
    condition_reports: dict
    passed: bool


def _p_box(pmax: int, d: int):
    if d == 1:
        return [(p,) for p in range(-pmax, pmax + 1)]
    return [
        (p1, p2) for p1 in range(-pmax, pmax + 1) for p2 in range(-pmax, pmax + 1)
    ]


def limit_check(
    array: TriangularArray,
    target: MulLevyTriplet,
    n_list: Sequence[int],
    pmax: int = 3,
    tol: float = 1e-2,
    p_list: Sequence[Sequence[int]] | None = None,
    with_conditions: bool = True,
) -> LimitReport:
    """Compare row products against a target ID law on a finite n-grid.

    Pass/fail is decided by the characteristic-function errors at the
    largest n; the condition diagnostics are advisory.
    """
    if array.kind != "torus":
        raise ValueError("limit_check applies to torus arrays")
    n_list = tuple(int(n) for n in n_list)
    ps = [tuple(p) for p in (p_list if p_list is not None else _p_box(pmax, array.dim))]
    errors = {}
    max_error = {}
    gamma_drift = {}
    cond = {}
    for n in n_list:
        errs = {}
        for p in ps:
            errs[p] = abs(classical_product_char(array, n, p) - mul_lk_char(target, p))
        errors[n] = errs
        max_error[n] = max(errs.values()) if errs else 0.0
        cr = center_row(array, n)
        gamma_drift[n] = max(
            abs(math.remainder(g_n - g_t, 2.0 * math.pi))
            for g_n, g_t in zip(cr.gamma_arg, target.gamma_arg)
        )
        if with_conditions:
            cond[n] = condition_report(array, n)
    n_largest = max(n_list)
    return LimitReport(
        n_list=n_list,
        pmax=pmax,
        tol=tol,
        errors=errors,
        max_error=max_error,
        gamma_drift=gamma_drift,
        condition_reports=cond,
        passed=max_error[n_largest] < tol,
    )


def _expand_entries(entries):
    for m, count in entries:
        for _ in range(count):
            yield m


def perturb_array(
    array: TriangularArray, theta_gen: Callable[[int, int], float]
) -> TriangularArray:
    """Rotate row k of level n by e^{i theta_gen(n, k)} (all coordinates).

    The smallness condition on the rotations is the caller's responsibility;
    use ``perturbation_size`` to inspect it.
    """
    if array.kind != "torus":
        raise ValueError("perturbation applies to torus arrays")
    d = array.dim

    def gen(n: int) -> Row:
        row = array.row(n)
        entries = []
        for k, nu in enumerate(_expand_entries(row.entries), start=1):
            t = theta_gen(n, k)
            beta = tuple(t for _ in range(d)) if np.isscalar(t) else tuple(t)
            entries.append((nu.rotated(beta), 1))
        return Row(row.shift, entries)

    return TriangularArray("torus", d, gen, array.theta)


def perturbation_size(
    array: TriangularArray, theta_gen: Callable[[int, int], float], n: int
) -> float:
    """sum_k (1 - cos theta_{nk}), maximized over coordinates."""
    row = array.row(n)
    total = 0.0
    for k in range(1, row.k + 1):
        t = theta_gen(n, k)
        ts = (t,) if np.isscalar(t) else tuple(t)
        total = max(total, math.fsum(1.0 - math.cos(v) for v in ts))
    return total


def flip_array(array: TriangularArray) -> TriangularArray:
    """Apply the coordinate flip to every row measure and shift (d = 2)."""
    if array.dim != 2:
        raise DimensionMismatch("the coordinate flip requires dimension 2")

    if array.kind == "torus":

        def gen(n: int) -> Row:
            row = array.row(n)
            shift = (row.shift[0], canonicalize_angle(-row.shift[1]))
            return Row(shift, [(m.flipped(), c) for m, c in row.entries])

        return TriangularArray("torus", 2, gen, array.theta)

    def gen(n: int) -> Row:
        row = array.row(n)
        shift = (row.shift[0], -row.shift[1])
        entries = []
        for m, c in row.entries:
            flipped = PlanarAtomicMeasure(
                2,
                [((x[0], -x[1]), w) for x, w in zip(m.xs, m.weights)],
                mode=m.mode,
            )
            entries.append((flipped, c))
        return Row(shift, entries)

    return TriangularArray("planar", 2, gen, array.theta)


def iid_array(
    nu,
    k_gen: Callable[[int], int],
    rotated: bool = False,
    theta: float = 0.5,
) -> IIDTriangularArray:
    """Identically-distributed rows: level n holds k_gen(n) copies of nu.

    ``nu`` may be a measure or a map n -> measure.  In rotated mode each row
    measure is rotated by the inverse of its coordinate mean directions.
    """
    nu_of_n = nu if callable(nu) else (lambda n: nu)
    sample = nu_of_n(1)
    d = sample.dim

    def gen(n: int) -> Row:
        m = nu_of_n(n)
        if rotated:
            out = []
            for j in range(d):
                p = [0] * d
                p[j] = 1
                mj = m.moment(p)
                if abs(mj) < 1e-15:
                    raise ValueError(
                        "rotated mode requires nonzero coordinate means"
                    )
                out.append(cmath.phase(mj))
            m = m.rotated(tuple(-w for w in out))
        return Row((0.0,) * d, [(m, k_gen(n))])

    return IIDTriangularArray(
        "torus", d, gen, theta, nu_of_n=nu_of_n, k_of_n=k_gen, rotated=rotated
    )


@dataclass(frozen=True)
class AdditiveCenteredRow:
    n: int
    v_args: tuple[tuple[tuple[float, ...], int], ...]
    centered: tuple[tuple[PlanarAtomicMeasure, int], ...]
    tau_n: PlanarAtomicMeasure
    drift: tuple[float, ...]


def additive_center_row(array: TriangularArray, n: int) -> AdditiveCenteredRow:
    """Center a planar row: truncated means, tau_n, and the drift partial sum."""
    if array.kind != "planar":
        raise ValueError("additive centering applies to planar arrays")
    d = array.dim
    row = array.row(n)
    v_args = []
    centered = []
    tau_atoms = []
    drift_terms = [[] for _ in range(d)]
    for mu, count in row.entries:
        X = mu.x_array()
        W = mu.weight_array()
        if W.size:
            radii = np.sqrt((X * X).sum(axis=1))
            mask = radii < array.theta
            v = (W[mask, None] * X[mask]).sum(axis=0)
        else:
            v = np.zeros(d)
        cm = PlanarAtomicMeasure(
            d,
            [(tuple(np.asarray(x) - v), w) for x, w in zip(mu.xs, mu.weights)],
            mode=mu.mode,
        )
        v_args.append((tuple(float(x) for x in v), count))
        centered.append((cm, count))
        for x, w in zip(cm.xs, cm.weights):
            tau_atoms.append((x, count * w))
        for j in range(d):
            comp = math.fsum(
                w * x[j] / (1.0 + math.fsum(v2 * v2 for v2 in x))
                for x, w in zip(cm.xs, cm.weights)
            )
            drift_terms[j].append(count * (v[j] + comp))
    tau_n = PlanarAtomicMeasure(d, tau_atoms, mode="mass")
    drift = tuple(
        row.shift[j] + math.fsum(drift_terms[j]) for j in range(d)
    )
    return AdditiveCenteredRow(
        n=n, v_args=tuple(v_args), centered=tuple(centered), tau_n=tau_n, drift=drift
    )


def wrap_array(array: TriangularArray) -> TriangularArray:
    """Wrap a planar array to the torus: rows push forward, shifts become e^{iv}."""
    if array.kind != "planar":
        raise ValueError("only planar arrays can be wrapped")
    d = array.dim

    def gen(n: int) -> Row:
        row = array.row(n)
        shift = tuple(canonicalize_angle(v) for v in row.shift)
        return Row(shift, [(wrap_pushforward(m), c) for m, c in row.entries])

    return TriangularArray("torus", d, gen, array.theta)


def re_im_bound_constant(theta: float, d: int) -> float:
    """The constant C(theta, d) = 3 + 3/(1 - cos(theta/(4 sqrt(d))))."""
    return 3.0 + 3.0 / (1.0 - math.cos(theta / (4.0 * math.sqrt(d))))


@dataclass(frozen=True)
class ReImBoundReport:
    n: int
    p: tuple[int, ...]
    C: float
    worst_margin: float
    holds: bool


def re_im_bound_check(array: TriangularArray, n: int, p: Sequence[int]) -> ReImBoundReport:
    """Check |Im z| <= |Re z| + C ||p|| sum_j |Re z(e_j)| on the centered row,
    where z(p) = moment(p) - 1 of each centered row measure."""
    p = tuple(int(v) for v in p)
    d = array.dim
    cr = center_row(array, n)
    C = re_im_bound_constant(array.theta, d)
    pnorm = math.sqrt(sum(v * v for v in p))
    min_margin = math.inf
    for cm, _count in cr.centered:
        z = cm.moment(p) - 1.0
        basis_sum = 0.0
        for j in range(d):
            e = [0] * d
            e[j] = 1
            basis_sum += abs((cm.moment(e) - 1.0).real)
        margin = abs(z.real) + C * pnorm * basis_sum - abs(z.imag)
        min_margin = min(min_margin, margin)
    holds = min_margin >= -1e-12
    return ReImBoundReport(n=n, p=p, C=C, worst_margin=min_margin, holds=holds)


def gaussian_planar_array(A, theta: float = 0.5) -> TriangularArray:
    """The planar four-point rows whose wrapped products approach the
    centered Gaussian law with covariance A (symmetric PSD, a22 > 0)."""
    A = np.asarray(A, dtype=float)
    a11, a12, a22 = A[0, 0], A[0, 1], A[1, 1]
    det = a11 * a22 - a12 * a12
    if a22 <= 0 or det < 0:
        raise ValueError("need a22 > 0 and det(A) >= 0")

    def gen(n: int) -> Row:
        scale = math.sqrt(n * a22)
        alpha = (math.sqrt(2.0 * det) / scale, 0.0)
        beta = (math.sqrt(2.0) * a12 / scale, math.sqrt(2.0) * a22 / scale)
        mu = PlanarAtomicMeasure(
            2,
            [
                (alpha, 0.25),
                ((-alpha[0], -alpha[1]), 0.25),
                (beta, 0.25),
                ((-beta[0], -beta[1]), 0.25),
            ],
            mode="probability",
        )
        return Row((0.0, 0.0), [(mu, n)])

    return TriangularArray("planar", 2, gen, theta)


def gaussian_array(A, theta: float = 0.5) -> TriangularArray:
    """Torus rows: the wrapped Gaussian example with covariance A."""
    return wrap_array(gaussian_planar_array(A, theta))


def poisson_planar_array(
    r: float, jump: PlanarAtomicMeasure, theta: float = 0.5
) -> TriangularArray:
    """Planar compound-Poisson rows (1 - r/n) delta_0 + (r/n) jump."""
    d = jump.dim

    def gen(n: int) -> Row:
        w = r / n
        atoms = [((0.0,) * d, 1.0 - w)]
        atoms += [(x, w * wt) for x, wt in zip(jump.xs, jump.weights)]
        mu = PlanarAtomicMeasure(d, atoms, mode="probability")
        return Row((0.0,) * d, [(mu, n)])

    return TriangularArray("planar", d, gen, theta)


def poisson_array(r: float, jump: PlanarAtomicMeasure, theta: float = 0.5) -> TriangularArray:
    """Torus compound-Poisson rows: the wrapped planar rows."""
    return wrap_array(poisson_planar_array(r, jump, theta))
