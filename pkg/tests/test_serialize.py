import json
import math

import pytest

from bitorus import (
    AddLevyTriplet,
    AtomicTorusMeasure,
    HaarKernelDensity,
    MulLevyTriplet,
    PlanarAtomicMeasure,
    SchemaError,
    add_triplet_from_json,
    add_triplet_to_json,
    measure_from_json,
    measure_to_json,
    moment_measure_from_json,
    triplet_from_json,
    triplet_to_json,
)
from bitorus.measures import BiHaarP, CircConv, Dirac, Flip, Haar, Kappa, Product, Rotate
from bitorus.serialize import dumps, fmt_float

from conftest import random_torus_levy, random_torus_prob


def test_fmt_float_15_digits():
    assert fmt_float(math.pi) == float(f"{math.pi:.15g}")
    assert fmt_float(1.0) == 1.0


def test_atomic_roundtrip(rng):
    m = random_torus_prob(rng, dim=2, n_atoms=4)
    doc = measure_to_json(m)
    back = measure_from_json(json.loads(dumps(doc)))
    assert isinstance(back, AtomicTorusMeasure)
    assert back.dim == 2
    for p in [(1, 0), (2, -3)]:
        assert abs(back.moment(p) - m.moment(p)) < 1e-12


def test_planar_roundtrip():
    mu = PlanarAtomicMeasure(2, [((1.0, 0.0), 0.5), ((0.0, 1.0), 0.5)])
    back = measure_from_json(measure_to_json(mu))
    assert isinstance(back, PlanarAtomicMeasure)
    assert back.xs == mu.xs


def test_symbolic_roundtrips():
    cases = [
        Dirac((0.5, -0.25)),
        Haar(),
        BiHaarP(),
        Kappa(0.25 - 0.5j),
        Product(Kappa(0.5), Haar()),
        Rotate(BiHaarP(), (0.1, 0.2)),
        Flip(BiHaarP()),
        CircConv(BiHaarP(), Product(Kappa(0.3), Kappa(1.0))),
    ]
    for m in cases:
        back = moment_measure_from_json(measure_to_json(m))
        assert back.dim == m.dim
        p = (1,) * m.dim
        assert abs(back.moment(p) - m.moment(p)) < 1e-12


def test_triplet_roundtrip(rng):
    t = MulLevyTriplet(
        2, (0.3, -0.7), [[0.5, 0.1], [0.1, 0.2]], random_torus_levy(rng)
    )
    back = triplet_from_json(triplet_to_json(t))
    # serialization canonicalizes floats to 15 significant digits
    for a, b in zip(back.gamma_arg, t.gamma_arg):
        assert a == pytest.approx(b, abs=1e-13)
    for ra, rb in zip(back.A, t.A):
        for a, b in zip(ra, rb):
            assert a == pytest.approx(b, abs=1e-13)
    for ta, tb in zip(back.rho.thetas, t.rho.thetas):
        for a, b in zip(ta, tb):
            assert a == pytest.approx(b, abs=1e-13)


def test_triplet_density_roundtrip():
    t = MulLevyTriplet(1, [0.5], [[0.0]], HaarKernelDensity(0.7))
    back = triplet_from_json(triplet_to_json(t))
    assert isinstance(back.rho, HaarKernelDensity)
    assert back.rho.scale == 0.7


def test_add_triplet_roundtrip():
    tau = PlanarAtomicMeasure(2, [((1.0, 2.0), 0.5)], mode="levy")
    t = AddLevyTriplet(2, (0.1, 0.2), [[1.0, 0.0], [0.0, 1.0]], tau)
    back = add_triplet_from_json(add_triplet_to_json(t))
    assert back.v == t.v
    assert back.tau.xs == t.tau.xs


def test_schema_errors_carry_paths():
    with pytest.raises(SchemaError) as exc:
        measure_from_json({"kind": "nope"})
    assert "kind" in str(exc.value)
    with pytest.raises(SchemaError):
        measure_from_json({"kind": "atomic", "dim": 1})  # missing atoms
    with pytest.raises(SchemaError):
        triplet_from_json({"d": 1, "gamma_arg": [0.0]})  # missing A
    with pytest.raises(SchemaError):
        measure_from_json({"kind": "kappa", "c": "not-a-pair"})
