"""Acceptance suite: thirteen numbered criteria, one pass/fail line each.

Each test prints "[PASS] criterion NN: ..." (or FAIL) before asserting, so a
verbose run shows one line per criterion.  Tolerances are pinned in-line.
"""
import cmath
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from bitorus import (
    Atomic,
    AtomicTorusMeasure,
    AtomPair,
    BiHaarP,
    CircConv,
    Kappa,
    MulLevyTriplet,
    PlanarAtomicMeasure,
    Product,
    SymmetricAtomPairMeasure,
    alt_compensator_demo,
    bifree_convolve_special,
    classical_product_char,
    classify_idempotent,
    det_identity_check,
    diagram_check,
    free_mul_convolve,
    gaussian_array,
    has_P_factor,
    id_moment_check,
    kappa_moment,
    l_unique_decide,
    levy_class_enumerate,
    moments_from_sigma,
    mul_lk_char,
    poisson_array,
    sigma_from_moments,
    strict_unique_check,
    triplet_equiv,
    u_series,
    wrap_pushforward,
)
from bitorus.idempotents import IdempotentKind
from bitorus.levy import (
    AddLevyTriplet,
    haar_kernel_integral_quadrature,
    haar_kernel_values,
    levy_jump_integral,
)
from bitorus.measures import Dirac, Haar

RNG = np.random.default_rng(13579)


def report(num: int, name: str, ok: bool) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {num:02d}: {name}")
    assert ok, f"criterion {num:02d} ({name}) failed"


def _random_prob(dim=2, n_atoms=4):
    thetas = RNG.uniform(-math.pi, math.pi, size=(n_atoms, dim))
    w = RNG.uniform(0.1, 1.0, size=n_atoms)
    w = w / w.sum()
    return AtomicTorusMeasure(dim, list(zip(map(tuple, thetas), w)))


def _random_disc():
    r = math.sqrt(RNG.uniform(0.0, 1.0))
    a = RNG.uniform(-math.pi, math.pi)
    return r * cmath.exp(1j * a)


def test_criterion_01_kappa_convolution_identity():
    t0 = time.perf_counter()
    ok = True
    for _ in range(20):
        nu = Atomic(_random_prob())
        c, d = _random_disc(), _random_disc()
        conv = bifree_convolve_special(nu, Product(Kappa(c), Kappa(d)))
        for p in range(-5, 6):
            for q in range(-5, 6):
                expected = nu.moment((p, q)) * kappa_moment(c, p) * kappa_moment(d, q)
                if abs(conv.moment((p, q)) - expected) > 1e-12:
                    ok = False
    ok = ok and (time.perf_counter() - t0) < 1.0
    report(1, "convolution with a Poisson-kernel pair multiplies moments", ok)


def test_criterion_02_kernel_integral_and_imaginary_bound():
    t0 = time.perf_counter()
    ok = True
    thetas = np.linspace(-math.pi, math.pi, 2001)
    for p in range(1, 11):
        integral = haar_kernel_integral_quadrature(p, n_points=4096)
        if abs(integral - (-2.0 * math.pi * p)) > 1e-8:
            ok = False
        vals = haar_kernel_values(p, thetas)
        if np.max(np.abs(vals.imag)) > p**3:
            ok = False
    ok = ok and (time.perf_counter() - t0) < 1.0
    report(2, "kernel quadrature totals -2 pi p; sampled imaginary part <= p^3", ok)


def _witness_triplets():
    rho1 = AtomicTorusMeasure(1, [((math.pi / 2,), math.pi)], mode="levy")
    rho2 = AtomicTorusMeasure(1, [((-math.pi / 2,), math.pi)], mode="levy")
    t1 = MulLevyTriplet(1, [0.0], [[0.0]], rho1)
    t2 = MulLevyTriplet(1, [0.0], [[0.0]], rho2)
    return t1, t2


def test_criterion_03_nonuniqueness_witness():
    t1, t2 = _witness_triplets()
    ok = all(
        abs(mul_lk_char(t1, (n,)) - mul_lk_char(t2, (n,))) <= 1e-12
        for n in range(-50, 51)
    )
    ok = ok and triplet_equiv(t1, t2).verdict == "Equivalent"
    ok = ok and not strict_unique_check(t1.rho, t2.rho)
    report(3, "two distinct atomic jump measures give the same law", ok)


def test_criterion_04_exceptional_enumeration():
    members = levy_class_enumerate(math.pi / 2, math.pi, 0.0)
    pairs = sorted((m.pairs[0].c, m.pairs[0].d) for m in members)
    expected = sorted([(math.pi, 0.0), (math.pi / 2, math.pi / 2), (0.0, math.pi)])
    ok = len(members) == 3 and all(
        abs(a - c) <= 1e-12 and abs(b - d) <= 1e-12
        for (a, b), (c, d) in zip(pairs, expected)
    )
    triplets = [
        MulLevyTriplet(
            1,
            [0.0],
            [[0.0]],
            AtomicTorusMeasure(
                1,
                [((math.pi / 2,), m.pairs[0].c), ((-math.pi / 2,), m.pairs[0].d)],
                mode="levy",
            ),
        )
        for m in members
    ]
    for i in range(3):
        for j in range(i + 1, 3):
            if triplet_equiv(triplets[i], triplets[j], N=100).verdict != "Equivalent":
                ok = False
    report(4, "the half-pi atom pair enumerates exactly three equivalent measures", ok)


def test_criterion_05_uniqueness_decisions():
    t0 = time.perf_counter()

    def decide(phi, cos_exact, c=1.0, d=1.0):
        return l_unique_decide(
            SymmetricAtomPairMeasure([AtomPair(phi, c, d, cos_exact=cos_exact)])
        ).verdict

    ok = decide(math.acos(1.0 / 3.0), Fraction(1, 3)) == "Unique"
    ok = ok and decide(math.pi / 3, Fraction(1, 2)) == "Enumerated"
    ok = ok and decide(math.acos(0.75), Fraction(3, 4)) == "Unknown"
    ok = ok and decide(math.pi, Fraction(-1)) == "Unique"
    ok = ok and (time.perf_counter() - t0) < 0.1
    report(5, "uniqueness verdicts for the four reference angles", ok)


def test_criterion_06_torus_clt():
    t0 = time.perf_counter()
    arr = gaussian_array(np.eye(2))
    target = MulLevyTriplet(2, (0.0, 0.0), np.eye(2))
    ps = [(1, 0), (0, 1), (1, 1), (2, -1)]
    errs = {}
    for n in (100, 1000, 10000):
        errs[n] = max(
            abs(
                classical_product_char(arr, n, p)
                - cmath.exp(-0.5 * (p[0] ** 2 + p[1] ** 2))
            )
            for p in ps
        )
    ok = errs[10000] < 1e-3 and errs[100] > errs[1000] > errs[10000]
    ok = ok and (time.perf_counter() - t0) < 5.0
    report(6, "identity-covariance central limit on the bi-torus", ok)


def test_criterion_07_compound_poisson():
    t0 = time.perf_counter()
    jump = PlanarAtomicMeasure(2, [((1.0, 0.0), 0.5), ((0.0, 1.0), 0.5)])
    arr = poisson_array(1.0, jump)
    wrapped = wrap_pushforward(jump)
    n = 10000
    ok = True
    for p1 in range(-3, 4):
        for p2 in range(-3, 4):
            p = (p1, p2)
            target = cmath.exp(wrapped.moment(p) - 1.0)
            if abs(classical_product_char(arr, n, p) - target) > 1e-3:
                ok = False
    ok = ok and (time.perf_counter() - t0) < 5.0
    report(7, "compound-Poisson rows approach the exponential-formula law", ok)


def test_criterion_08_series_oracle():
    ok = True
    count = 0
    while count < 10:
        c1, c2 = _random_disc(), _random_disc()
        if abs(c1) < 0.1 or abs(c2) < 0.1:
            continue
        count += 1
        m1 = [kappa_moment(c1, k) for k in range(1, 7)]
        m2 = [kappa_moment(c2, k) for k in range(1, 7)]
        out = free_mul_convolve(m1, m2, K=6)
        for k in range(1, 7):
            if abs(out[k - 1] - kappa_moment(c1 * c2, k)) > 1e-10:
                ok = False
        ms = [kappa_moment(0.3 * c1 + 0.5, k) for k in range(1, 13)]
        back = moments_from_sigma(sigma_from_moments(ms, K=12), K=12)
        if any(abs(a - b) > 1e-12 for a, b in zip(ms, back)):
            ok = False
    report(8, "free multiplicative convolution and transform round-trip", ok)


def test_criterion_09_generating_series_identity():
    ok = True
    for _ in range(5):
        thetas = RNG.uniform(0.2, 3.0, size=(3, 2))
        w = RNG.uniform(0.1, 1.0, size=3)
        rho = AtomicTorusMeasure(2, list(zip(map(tuple, thetas), w)), mode="levy")
        gamma = tuple(RNG.uniform(-math.pi, math.pi, 2))
        B = RNG.uniform(-0.5, 0.5, size=(2, 2))
        A = B @ B.T
        t = MulLevyTriplet(2, gamma, A, rho)
        _, _, divided = u_series(t, K=8)
        for p1 in range(9):
            for p2 in range(9):
                pvec = np.array([p1, p2])
                expected = (
                    1j * (p1 * t.gamma_arg[0] + p2 * t.gamma_arg[1])
                    - 0.5 * float(pvec @ A @ pvec)
                    + levy_jump_integral(rho, (p1, p2))
                )
                if abs(divided[p1, p2] - expected) > 1e-10:
                    ok = False
    report(9, "divided generating series carries the per-frequency exponents", ok)


def test_criterion_10_diagram_commutativity():
    ok = True
    for _ in range(10):
        xs = RNG.uniform(-3.0, 3.0, size=(5, 2))
        xs[np.all(np.abs(xs) < 1e-9, axis=1)] += 0.5
        w = RNG.uniform(0.1, 1.0, size=5)
        tau = PlanarAtomicMeasure(2, list(zip(map(tuple, xs), w)), mode="levy")
        v = tuple(RNG.uniform(-2.0, 2.0, 2))
        B = RNG.uniform(-0.7, 0.7, size=(2, 2))
        t = AddLevyTriplet(2, v, B @ B.T, tau)
        rep = diagram_check(t, pmax=20, tol=1e-10)
        if not rep.passed or rep.max_discrepancy >= 1e-10:
            ok = False
    report(10, "wrapping a triplet commutes with evaluating its law", ok)


def test_criterion_11_idempotent_suite():
    ok = classify_idempotent(Dirac((0.0, 0.0))) is IdempotentKind.TrivialDirac
    ok = ok and classify_idempotent(Product(Haar(), Haar())) is IdempotentKind.HaarBoth
    ok = ok and classify_idempotent(Product(Haar(), Dirac((0.0,)))) is IdempotentKind.HaarLeft
    ok = ok and classify_idempotent(Product(Dirac((0.0,)), Haar())) is IdempotentKind.HaarRight
    ok = ok and classify_idempotent(BiHaarP()) is IdempotentKind.BiHaarP
    for c in (0.3, 0.8j, 1.0):
        m = CircConv(BiHaarP(), Product(Kappa(c), Kappa(1.0)))
        found, got = has_P_factor(m)
        ok = ok and found and abs(got - c) <= 1e-12
    for c1, c2 in ((0.5, 0.7), (0.3 + 0.2j, -0.4)):
        rep = id_moment_check(Product(Kappa(c1), Kappa(c2)))
        ok = ok and rep.in_p_times and rep.m11_nonzero
    report(11, "idempotent kinds, P factors, and mean-based membership", ok)


def test_criterion_12_determinant_identities():
    ok = True
    for m in (2, 3, 4):
        for _ in range(20):
            xs = set()
            while len(xs) < m:
                x = Fraction(int(RNG.integers(-12, 13)), int(RNG.integers(1, 10)))
                if x != 1:
                    xs.add(x)
            if not det_identity_check(m, sorted(xs)):
                ok = False
    report(12, "both determinant identities hold exactly on random rationals", ok)


def test_criterion_13_alternative_compensator():
    rep = alt_compensator_demo(N=50)
    ok = rep.passed and rep.max_discrepancy < 1e-9
    report(13, "two triplets agree under the cubic compensator", ok)
