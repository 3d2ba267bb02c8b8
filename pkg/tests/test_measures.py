import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bitorus import (
    Atomic,
    AtomicTorusMeasure,
    BiHaarP,
    BiHaarPStar,
    DimensionMismatch,
    Dirac,
    Haar,
    Kappa,
    PlanarAtomicMeasure,
    Product,
    UnsupportedOperation,
    bifree_convolve_special,
    canonicalize_angle,
    circ_convolve,
    flip_star,
    kappa_moment,
    rotate,
    wrap_pushforward,
)
from bitorus._kernels import _atomic_moment_sum_py

from conftest import random_torus_prob

angles = st.floats(
    min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False
)


@given(angles)
def test_canonicalize_angle_range(x):
    y = canonicalize_angle(x)
    assert -math.pi < y <= math.pi


@given(angles)
def test_canonicalize_angle_idempotent(x):
    y = canonicalize_angle(x)
    assert canonicalize_angle(y) == y


@given(angles)
def test_canonicalize_angle_congruent(x):
    y = canonicalize_angle(x)
    assert math.isclose(
        math.remainder(x - y, 2.0 * math.pi), 0.0, abs_tol=1e-6
    )


def test_atom_merging_and_order():
    m = AtomicTorusMeasure(
        1,
        [((0.5,), 0.25), ((1.0,), 0.25), ((0.5 - 2 * math.pi + 2 * math.pi,), 0.5)],
    )
    assert m.n_atoms == 2
    assert m.thetas[0] == (0.5,)
    assert m.weights == (0.75, 0.25)


def test_probability_mass_validation():
    with pytest.raises(ValueError):
        AtomicTorusMeasure(1, [((0.0,), 0.9)])
    with pytest.raises(ValueError):
        AtomicTorusMeasure(1, [((0.0,), -0.5), ((1.0,), 1.5)])


def test_levy_mode_rejects_identity_atom():
    with pytest.raises(ValueError):
        AtomicTorusMeasure(2, [((0.0, 0.0), 1.0)], mode="levy")
    # but an identity atom is fine in probability mode
    AtomicTorusMeasure(2, [((0.0, 0.0), 1.0)])


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        AtomicTorusMeasure(2, [((0.0,), 1.0)])
    m = AtomicTorusMeasure(2, [((0.1, 0.2), 1.0)])
    with pytest.raises(DimensionMismatch):
        m.moment((1,))


def test_moment_against_direct_sum(rng):
    m = random_torus_prob(rng, dim=2, n_atoms=7)
    for p in [(0, 0), (1, 0), (2, -3), (-5, 4)]:
        direct = sum(
            w * cmath.exp(1j * (p[0] * t[0] + p[1] * t[1]))
            for t, w in zip(m.thetas, m.weights)
        )
        assert abs(m.moment(p) - direct) < 1e-12


def test_moment_conjugate_symmetry(rng):
    m = random_torus_prob(rng, dim=2, n_atoms=5)
    for p in [(1, 0), (2, 3), (-1, 4)]:
        pm = tuple(-v for v in p)
        assert abs(m.moment(p) - m.moment(pm).conjugate()) < 1e-12


def test_kernel_backends_agree(rng):
    thetas = rng.uniform(-math.pi, math.pi, size=(64, 2))
    w = rng.uniform(0.0, 1.0, size=64)
    p = np.array([3.0, -2.0])
    ref = _atomic_moment_sum_py(thetas, w, p)
    from bitorus import _kernels

    assert abs(_kernels.atomic_moment_sum(thetas, w, p) - ref) < 1e-14


def test_rotated_flipped_scaled(rng):
    m = random_torus_prob(rng, dim=2, n_atoms=4)
    beta = (0.7, -1.2)
    p = (2, -1)
    phase = cmath.exp(1j * (p[0] * beta[0] + p[1] * beta[1]))
    assert abs(m.rotated(beta).moment(p) - phase * m.moment(p)) < 1e-12
    assert abs(m.flipped().moment(p) - m.moment((p[0], -p[1]))) < 1e-12
    assert abs(m.scaled(2.0).total_mass() - 2.0) < 1e-12


def test_circ_convolve_moments_multiply(rng):
    a = random_torus_prob(rng, dim=2, n_atoms=3)
    b = random_torus_prob(rng, dim=2, n_atoms=4)
    conv = circ_convolve(Atomic(a), Atomic(b))
    for p in [(0, 0), (1, 2), (-3, 1)]:
        assert abs(conv.moment(p) - a.moment(p) * b.moment(p)) < 1e-12


@given(st.integers(-8, 8), st.complex_numbers(max_magnitude=1.0, allow_nan=False))
def test_kappa_moment_values(p, c):
    v = kappa_moment(c, p)
    if p == 0:
        assert v == 1
    elif p > 0:
        assert abs(v - c**p) < 1e-9
    else:
        assert abs(v - c.conjugate() ** (-p)) < 1e-9


def test_symbolic_measures():
    assert Haar().moment((0,)) == 1
    assert Haar().moment((3,)) == 0
    d = Dirac((0.5, -0.3))
    assert abs(d.moment((2, 1)) - cmath.exp(1j * (1.0 - 0.3))) < 1e-12
    assert BiHaarP().moment((2, 2)) == 1
    assert BiHaarP().moment((2, 1)) == 0
    assert BiHaarPStar().moment((2, -2)) == 1
    assert BiHaarPStar().moment((2, 2)) == 0
    pr = Product(Kappa(0.5), Haar())
    assert pr.dim == 2
    assert abs(pr.moment((2, 0)) - 0.25) < 1e-12
    assert pr.moment((2, 1)) == 0


def test_rotate_flip_wrappers():
    m = Kappa(0.5)
    r = rotate(m, (0.3,))
    assert abs(r.moment((1,)) - 0.5 * cmath.exp(0.3j)) < 1e-12
    f = flip_star(Product(Kappa(0.5), Kappa(0.25)))
    assert abs(f.moment((1, 1)) - 0.5 * 0.25) < 1e-12
    assert flip_star(f).moment((1, 1)) == Product(Kappa(0.5), Kappa(0.25)).moment((1, 1))


def test_bifree_convolve_kappa_route(rng):
    nu = Atomic(random_torus_prob(rng, dim=2, n_atoms=3))
    kk = Product(Kappa(0.4 + 0.1j), Kappa(-0.2 + 0.5j))
    out = bifree_convolve_special(nu, kk)
    for p in [(1, 1), (2, -1), (0, 3)]:
        expected = nu.moment(p) * kk.moment(p)
        assert abs(out.moment(p) - expected) < 1e-12


def test_bifree_convolve_biP_route():
    m = Product(Kappa(0.5), Kappa(0.7))
    out = bifree_convolve_special(BiHaarP(), m)
    # the result only sees the diagonal moments through m_{1,1}
    c = m.moment((1, 1))
    for p in range(-3, 4):
        assert abs(out.moment((p, p)) - kappa_moment(c, p)) < 1e-12
        assert abs(out.moment((p, p + 1))) < 1e-12


def test_bifree_convolve_unsupported(rng):
    a = Atomic(random_torus_prob(rng, dim=2, n_atoms=3))
    b = Atomic(random_torus_prob(rng, dim=2, n_atoms=3))
    with pytest.raises(UnsupportedOperation):
        bifree_convolve_special(a, b)


def test_wrap_pushforward_matches_planar_char(rng):
    xs = rng.uniform(-4.0, 4.0, size=(5, 2))
    w = rng.uniform(0.1, 1.0, size=5)
    w = w / w.sum()
    mu = PlanarAtomicMeasure(2, list(zip(map(tuple, xs), w)))
    nu = wrap_pushforward(mu)
    for p in [(1, 0), (2, 3), (-1, 2)]:
        assert abs(nu.moment(p) - mu.char([float(v) for v in p])) < 1e-12


def test_wrap_pushforward_opposite(rng):
    xs = rng.uniform(-2.0, 2.0, size=(4, 2))
    w = rng.uniform(0.1, 1.0, size=4)
    w = w / w.sum()
    mu = PlanarAtomicMeasure(2, list(zip(map(tuple, xs), w)))
    nu = wrap_pushforward(mu, opposite_second=True)
    plain = wrap_pushforward(mu)
    for p in [(1, 1), (2, -1)]:
        assert abs(nu.moment(p) - plain.moment((p[0], -p[1]))) < 1e-12
