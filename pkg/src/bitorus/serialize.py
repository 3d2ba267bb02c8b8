"""JSON (de)serialization for measures and Levy triplets.

Floats are emitted with 15 significant digits; complex numbers as
[re, im] pairs; angles in radians.  Serialization is canonical: an emitted
document re-parses to an equal object.
"""
from __future__ import annotations

import json
from typing import Any

from .levy import AddLevyTriplet, HaarKernelDensity, MulLevyTriplet
from .measures import (
    Atomic,
    AtomicTorusMeasure,
    BiHaarP,
    BiHaarPStar,
    CircConv,
    Dirac,
    Flip,
    Haar,
    Kappa,
    MomentMeasure,
    PlanarAtomicMeasure,
    Product,
    Rotate,
)

__all__ = [
    "SchemaError",
    "fmt_float",
    "measure_to_json",
    "measure_from_json",
    "triplet_to_json",
    "triplet_from_json",
    "add_triplet_to_json",
    "add_triplet_from_json",
    "dumps",
]


class SchemaError(ValueError):
    """Raised when a JSON document does not match the expected schema."""

    def __init__(self, path: str, message: str) -> None:
        super().__init__(f"{path}: {message}")
        self.path = path


def fmt_float(x: float) -> float:
    """Round a float to 15 significant digits for canonical emission."""
    return float(f"{float(x):.15g}")


def _complex_pair(c: complex) -> list[float]:
    c = complex(c)
    return [fmt_float(c.real), fmt_float(c.imag)]


def dumps(obj: Any) -> str:
    return json.dumps(obj, separators=(", ", ": "), indent=None)


def measure_to_json(m) -> dict:
    if isinstance(m, AtomicTorusMeasure):
        out: dict[str, Any] = {
            "kind": "atomic",
            "dim": m.dim,
            "atoms": [
                {"theta": [fmt_float(t) for t in theta], "w": fmt_float(w)}
                for theta, w in zip(m.thetas, m.weights)
            ],
        }
        if m.mode != "probability":
            out["mode"] = m.mode
        return out
    if isinstance(m, PlanarAtomicMeasure):
        out = {
            "kind": "planar_atomic",
            "dim": m.dim,
            "atoms": [
                {"x": [fmt_float(v) for v in x], "w": fmt_float(w)}
                for x, w in zip(m.xs, m.weights)
            ],
        }
        if m.mode != "probability":
            out["mode"] = m.mode
        return out
    if isinstance(m, Atomic):
        return measure_to_json(m.measure)
    if isinstance(m, Dirac):
        return {"kind": "dirac", "dim": m.dim, "beta": [fmt_float(t) for t in m.theta]}
    if isinstance(m, Haar):
        return {"kind": "haar"}
    if isinstance(m, BiHaarP):
        return {"kind": "biP"}
    if isinstance(m, BiHaarPStar):
        return {"kind": "biPstar"}
    if isinstance(m, Kappa):
        return {"kind": "kappa", "c": _complex_pair(m.c)}
    if isinstance(m, Product):
        return {
            "kind": "product",
            "factors": [measure_to_json(m.a), measure_to_json(m.b)],
        }
    if isinstance(m, Rotate):
        return {
            "kind": "rotate",
            "beta": [fmt_float(b) for b in m.beta],
            "factors": [measure_to_json(m.base)],
        }
    if isinstance(m, Flip):
        return {"kind": "flip", "factors": [measure_to_json(m.base)]}
    if isinstance(m, CircConv):
        return {
            "kind": "circconv",
            "factors": [measure_to_json(m.a), measure_to_json(m.b)],
        }
    raise SchemaError("$", f"cannot serialize measure of type {type(m).__name__}")


def _expect(doc, key, path, types=None):
    if not isinstance(doc, dict) or key not in doc:
        raise SchemaError(path, f"missing required key {key!r}")
    value = doc[key]
    if types is not None and not isinstance(value, types):
        raise SchemaError(f"{path}.{key}", f"expected {types}, got {type(value).__name__}")
    return value


def measure_from_json(doc, path: str = "$"):
    kind = _expect(doc, "kind", path, str)
    try:
        if kind == "atomic":
            dim = int(_expect(doc, "dim", path, int))
            atoms = [
                (atom["theta"], atom["w"])
                for atom in _expect(doc, "atoms", path, list)
            ]
            return AtomicTorusMeasure(dim, atoms, mode=doc.get("mode", "probability"))
        if kind == "planar_atomic":
            dim = int(_expect(doc, "dim", path, int))
            atoms = [
                (atom["x"], atom["w"]) for atom in _expect(doc, "atoms", path, list)
            ]
            return PlanarAtomicMeasure(dim, atoms, mode=doc.get("mode", "probability"))
        if kind == "dirac":
            return Dirac(_expect(doc, "beta", path, list))
        if kind == "haar":
            return Haar()
        if kind == "biP":
            return BiHaarP()
        if kind == "biPstar":
            return BiHaarPStar()
        if kind == "kappa":
            re, im = _expect(doc, "c", path, list)
            return Kappa(complex(re, im))
        if kind == "product":
            factors = _expect(doc, "factors", path, list)
            if len(factors) != 2:
                raise SchemaError(path, "product requires exactly two factors")
            return Product(
                _as_moment(measure_from_json(factors[0], f"{path}.factors[0]")),
                _as_moment(measure_from_json(factors[1], f"{path}.factors[1]")),
            )
        if kind == "rotate":
            factors = _expect(doc, "factors", path, list)
            base = _as_moment(measure_from_json(factors[0], f"{path}.factors[0]"))
            return Rotate(base, _expect(doc, "beta", path, list))
        if kind == "flip":
            factors = _expect(doc, "factors", path, list)
            return Flip(_as_moment(measure_from_json(factors[0], f"{path}.factors[0]")))
        if kind == "circconv":
            factors = _expect(doc, "factors", path, list)
            if len(factors) != 2:
                raise SchemaError(path, "circconv requires exactly two factors")
            return CircConv(
                _as_moment(measure_from_json(factors[0], f"{path}.factors[0]")),
                _as_moment(measure_from_json(factors[1], f"{path}.factors[1]")),
            )
    except SchemaError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(path, str(exc)) from exc
    raise SchemaError(path, f"unknown measure kind {kind!r}")


def _as_moment(m) -> MomentMeasure:
    """Lift parsed measures to the moment-oracle interface when needed."""
    if isinstance(m, AtomicTorusMeasure):
        return Atomic(m)
    if isinstance(m, PlanarAtomicMeasure):
        raise SchemaError("$", "planar measures have no torus moments")
    return m


def moment_measure_from_json(doc, path: str = "$") -> MomentMeasure:
    return _as_moment(measure_from_json(doc, path))


def triplet_to_json(t: MulLevyTriplet) -> dict:
    if isinstance(t.rho, HaarKernelDensity):
        rho = {"kind": "haar_kernel", "scale": fmt_float(t.rho.scale)}
    else:
        rho = measure_to_json(t.rho)
    return {
        "d": t.d,
        "gamma_arg": [fmt_float(g) for g in t.gamma_arg],
        "A": [[fmt_float(v) for v in row] for row in t.A],
        "rho": rho,
    }


def triplet_from_json(doc, path: str = "$") -> MulLevyTriplet:
    d = int(_expect(doc, "d", path, int))
    gamma = _expect(doc, "gamma_arg", path, list)
    A = _expect(doc, "A", path, list)
    rho_doc = doc.get("rho")
    try:
        if rho_doc is None:
            rho = None
        elif isinstance(rho_doc, dict) and rho_doc.get("kind") == "haar_kernel":
            rho = HaarKernelDensity(float(rho_doc["scale"]))
        else:
            rho = measure_from_json(rho_doc, f"{path}.rho")
            if not isinstance(rho, AtomicTorusMeasure):
                raise SchemaError(f"{path}.rho", "Levy measures must be atomic")
        return MulLevyTriplet(d, gamma, A, rho)
    except SchemaError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(path, str(exc)) from exc


def add_triplet_to_json(t: AddLevyTriplet) -> dict:
    return {
        "d": t.d,
        "v": [fmt_float(v) for v in t.v],
        "A": [[fmt_float(v) for v in row] for row in t.A],
        "tau": measure_to_json(t.tau),
    }


def add_triplet_from_json(doc, path: str = "$") -> AddLevyTriplet:
    d = int(_expect(doc, "d", path, int))
    v = _expect(doc, "v", path, list)
    A = _expect(doc, "A", path, list)
    tau_doc = doc.get("tau")
    try:
        tau = None
        if tau_doc is not None:
            tau = measure_from_json(tau_doc, f"{path}.tau")
            if not isinstance(tau, PlanarAtomicMeasure):
                raise SchemaError(f"{path}.tau", "the Levy measure must be planar atomic")
        return AddLevyTriplet(d, v, A, tau)
    except SchemaError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(path, str(exc)) from exc
