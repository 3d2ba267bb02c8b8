"""Command-line interface.

JSON in (inline or by path), JSON or CSV out.  Exit codes: 0 on success,
2 on validation errors (malformed JSON, bad flags, violated preconditions),
3 when the requested operation has no closed form in this library.
"""
from __future__ import annotations

import functools
import json
import math
import sys
from fractions import Fraction

import click

from . import idempotents, limits, series, uniqueness
from .levy import (
    AddLevyTriplet,
    MulLevyTriplet,
    diagram_check,
    mul_lk_char,
    wrap_triplet,
)
from .measures import (
    AtomicTorusMeasure,
    DimensionMismatch,
    PlanarAtomicMeasure,
    UnsupportedOperation,
    bifree_convolve_special,
    circ_convolve,
    wrap_pushforward,
)
from .serialize import (
    SchemaError,
    add_triplet_from_json,
    dumps,
    measure_from_json,
    measure_to_json,
    moment_measure_from_json,
    triplet_from_json,
    triplet_to_json,
)

EXIT_VALIDATION = 2
EXIT_UNSUPPORTED = 3


def _fmt(x: float) -> str:
    return f"{float(x):.15g}"


def _load_json(arg: str, what: str):
    """Parse an inline JSON document or read one from a file path."""
    text = arg
    stripped = arg.lstrip()
    if not (stripped.startswith("{") or stripped.startswith("[")):
        try:
            with open(arg, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise SchemaError(what, f"cannot read file: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(what, f"malformed JSON: {exc}") from exc


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _handled(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except UnsupportedOperation as exc:
            click.echo(f"unsupported: {exc}", err=True)
            sys.exit(EXIT_UNSUPPORTED)
        except (SchemaError, DimensionMismatch, ValueError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_VALIDATION)

    return wrapper


@click.group()
def cli() -> None:
    """Measures, convolutions and Levy triplets on the circle and bi-torus."""


def _p_rows(d: int, pmax: int):
    if d == 1:
        for p in range(-pmax, pmax + 1):
            yield (p,)
    else:
        for p1 in range(-pmax, pmax + 1):
            for p2 in range(-pmax, pmax + 1):
                yield (p1, p2)


def _moment_csv(m, pmax: int) -> str:
    d = m.dim
    header = ("p,re,im" if d == 1 else "p1,p2,re,im") + "\n"
    lines = [header]
    for p in _p_rows(d, pmax):
        value = m.moment(p)
        cells = [str(v) for v in p] + [_fmt(value.real), _fmt(value.imag)]
        lines.append(",".join(cells) + "\n")
    return "".join(lines)


@cli.command()
@click.option("--measure", required=True, help="measure JSON (inline or path)")
@click.option("--pmax", type=int, default=5, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
@click.option("--out", default=None, help="output path (default: stdout)")
@_handled
def moments(measure, pmax, fmt, out) -> None:
    """Tabulate moments over the box ||p||_inf <= pmax."""
    if pmax < 0:
        raise SchemaError("--pmax", "must be nonnegative")
    m = moment_measure_from_json(_load_json(measure, "--measure"))
    if fmt == "csv":
        _emit(_moment_csv(m, pmax), out)
    else:
        rows = [
            {"p": list(p), "value": _fmt_float_pair(m.moment(p))}
            for p in _p_rows(m.dim, pmax)
        ]
        _emit(dumps(rows) + "\n", out)


def _fmt_float_pair(c: complex) -> list[float]:
    return [float(_fmt(c.real)), float(_fmt(c.imag))]


@cli.command()
@click.option("--a", "a_doc", required=True, help="first measure JSON")
@click.option("--b", "b_doc", required=True, help="second measure JSON")
@click.option("--op", type=click.Choice(["circ", "bifree"]), default="circ")
@click.option("--out", default=None)
@_handled
def convolve(a_doc, b_doc, op, out) -> None:
    """Convolve two measures (classical or bi-free special cases)."""
    a = moment_measure_from_json(_load_json(a_doc, "--a"))
    b = moment_measure_from_json(_load_json(b_doc, "--b"))
    result = circ_convolve(a, b) if op == "circ" else bifree_convolve_special(a, b)
    _emit(dumps(measure_to_json(result)) + "\n", out)


@cli.command()
@click.option("--measure", default=None, help="planar atomic measure JSON")
@click.option("--triplet", default=None, help="additive Levy triplet JSON")
@click.option("--opposite", is_flag=True, help="negate the second coordinate")
@click.option("--out", default=None)
@_handled
def wrap(measure, triplet, opposite, out) -> None:
    """Wrap a planar measure (or an additive triplet) onto the torus."""
    if (measure is None) == (triplet is None):
        raise SchemaError("wrap", "provide exactly one of --measure or --triplet")
    if measure is not None:
        mu = measure_from_json(_load_json(measure, "--measure"))
        if not isinstance(mu, PlanarAtomicMeasure):
            raise SchemaError("--measure", "expected a planar atomic measure")
        wrapped = wrap_pushforward(mu, opposite_second=opposite)
        _emit(dumps(measure_to_json(wrapped)) + "\n", out)
    else:
        t = add_triplet_from_json(_load_json(triplet, "--triplet"))
        _emit(dumps(triplet_to_json(wrap_triplet(t))) + "\n", out)


@cli.command("lk-eval")
@click.option("--triplet", required=True, help="multiplicative triplet JSON")
@click.option("--pmax", type=int, default=5, show_default=True)
@click.option("--out", default=None)
@_handled
def lk_eval(triplet, pmax, out) -> None:
    """Evaluate the triplet's characteristic function on a frequency box."""
    t = triplet_from_json(_load_json(triplet, "--triplet"))
    header = ("p,re,im" if t.d == 1 else "p1,p2,re,im") + "\n"
    lines = [header]
    for p in _p_rows(t.d, pmax):
        value = mul_lk_char(t, p)
        cells = [str(v) for v in p] + [_fmt(value.real), _fmt(value.imag)]
        lines.append(",".join(cells) + "\n")
    _emit("".join(lines), out)


@cli.command("u-series")
@click.option("--triplet", required=True, help="2-d multiplicative triplet JSON")
@click.option("--K", "k_trunc", type=int, default=series.DEFAULT_K, show_default=True)
@click.option(
    "--series",
    "which",
    type=click.Choice(["divided", "gauss", "jump"]),
    default="divided",
    show_default=True,
)
@click.option("--out", default=None)
@_handled
def u_series_cmd(triplet, k_trunc, which, out) -> None:
    """Dump generating-series coefficients as CSV (p1, p2, re, im)."""
    t = triplet_from_json(_load_json(triplet, "--triplet"))
    N, P, divided = series.u_series(t, k_trunc)
    chosen = {"divided": divided, "gauss": N, "jump": P}[which]
    lines = ["p1,p2,re,im\n"]
    for p1 in range(k_trunc + 1):
        for p2 in range(k_trunc + 1):
            value = chosen[p1, p2]
            lines.append(
                f"{p1},{p2},{_fmt(value.real)},{_fmt(value.imag)}\n"
            )
    _emit("".join(lines), out)


def _array_from_spec(doc):
    """Build (array, target) from an array-spec document."""
    if "builtin" in doc:
        name = doc["builtin"]
        if name == "gaussian":
            A = doc.get("A", [[1.0, 0.0], [0.0, 1.0]])
            array = limits.gaussian_array(A)
            target = MulLevyTriplet(2, (0.0, 0.0), A, None)
            return array, target
        if name == "poisson":
            r = float(doc.get("r", 1.0))
            jump_doc = doc.get("jump")
            if jump_doc is None:
                raise SchemaError("$.jump", "the poisson builtin requires a jump measure")
            jump = measure_from_json(jump_doc, "$.jump")
            if not isinstance(jump, PlanarAtomicMeasure):
                raise SchemaError("$.jump", "expected a planar atomic measure")
            array = limits.poisson_array(r, jump)
            d = jump.dim
            u = [
                r * math.fsum(w * math.sin(x[j]) for x, w in zip(jump.xs, jump.weights))
                for j in range(d)
            ]
            rho = wrap_pushforward(jump, mode="levy")
            target = MulLevyTriplet(
                d, u, [[0.0] * d for _ in range(d)],
                rho.scaled(r) if rho.n_atoms else None,
            )
            return array, target
        raise SchemaError("$.builtin", f"unknown builtin {name!r}")
    if "custom" in doc:
        spec = doc["custom"]
        theta = float(spec.get("theta", 0.5))
        levels = {}
        for level in spec.get("levels", []):
            entries = []
            for entry in level["entries"]:
                m = measure_from_json(entry["measure"], "$.custom")
                if not isinstance(m, AtomicTorusMeasure):
                    raise SchemaError("$.custom", "rows must be atomic torus measures")
                entries.append((m, int(entry.get("count", 1))))
            n = int(level["n"])
            d = entries[0][0].dim
            shift = tuple(level.get("shift", [0.0] * d))
            levels[n] = limits.Row(shift, entries)
        if not levels:
            raise SchemaError("$.custom", "no levels given")
        d = next(iter(levels.values())).entries[0][0].dim

        def gen(n: int) -> limits.Row:
            if n not in levels:
                raise SchemaError("$.custom", f"level n={n} not provided")
            return levels[n]

        target_doc = spec.get("target")
        target = (
            triplet_from_json(target_doc, "$.custom.target")
            if target_doc is not None
            else None
        )
        return limits.TriangularArray("torus", d, gen, theta), target
    raise SchemaError("$", "array spec requires 'builtin' or 'custom'")


@cli.command("limit-run")
@click.option("--array", "array_doc", required=True, help="array spec JSON")
@click.option("--n", "n_csv", default="100,1000,10000", show_default=True)
@click.option("--pmax", type=int, default=2, show_default=True)
@click.option("--triplet", default=None, help="target triplet JSON (custom arrays)")
@click.option("--out", default=None)
@_handled
def limit_run(array_doc, n_csv, pmax, triplet, out) -> None:
    """Compare row products against the target law; CSV (n, p1, p2, error)."""
    array, target = _array_from_spec(_load_json(array_doc, "--array"))
    if triplet is not None:
        target = triplet_from_json(_load_json(triplet, "--triplet"))
    if target is None:
        raise SchemaError("--triplet", "a target triplet is required for this array")
    try:
        n_list = [int(v) for v in n_csv.split(",") if v.strip()]
    except ValueError as exc:
        raise SchemaError("--n", "expected a comma-separated list of integers") from exc
    report = limits.limit_check(
        array, target, n_list, pmax=pmax, with_conditions=False
    )
    header = ("n,p,error" if array.dim == 1 else "n,p1,p2,error") + "\n"
    lines = [header]
    for n in report.n_list:
        for p, err in report.errors[n].items():
            cells = [str(n)] + [str(v) for v in p] + [_fmt(err)]
            lines.append(",".join(cells) + "\n")
    _emit("".join(lines), out)


@cli.command()
@click.option("--measure", required=True, help="bi-torus measure JSON")
@click.option("--K", "k_cut", type=int, default=idempotents.DEFAULT_K, show_default=True)
@click.option("--out", default=None)
@_handled
def classify(measure, k_cut, out) -> None:
    """Classify idempotency, P factors and idempotent-factor structure."""
    m = moment_measure_from_json(_load_json(measure, "--measure"))
    kind = idempotents.classify_idempotent(m, k_cut)
    p_factor, c = idempotents.has_P_factor(m, k_cut)
    report = idempotents.id_moment_check(m)
    doc = {
        "idempotent": kind.value,
        "P_factor": p_factor,
        "c": _fmt_float_pair(c),
        "in_P_times": report.in_p_times,
        "m11_nonzero": report.m11_nonzero,
    }
    if not report.in_p_times:
        exc_class, exc_c = idempotents.classify_id_exception(m, k_cut)
        doc["exception_class"] = exc_class.value
        if exc_c is not None:
            doc["exception_c"] = _fmt_float_pair(exc_c)
    else:
        doc["exception_class"] = None
    _emit(dumps(doc) + "\n", out)


@cli.command("l-unique")
@click.option("--cos", "cos_str", default=None, help="exact cos(phi) as a fraction a/b")
@click.option("--phi", type=float, default=None, help="angle in radians")
@click.option("--c", "c_w", type=float, required=True, help="weight at e^{i phi}")
@click.option("--d", "d_w", type=float, required=True, help="weight at e^{-i phi}")
@click.option("--out", default=None)
@_handled
def l_unique(cos_str, phi, c_w, d_w, out) -> None:
    """Decide Levy-measure uniqueness for a symmetric atom pair."""
    cos_exact = None
    if cos_str is not None:
        try:
            cos_exact = Fraction(cos_str)
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError("--cos", "expected a rational like 1/3") from exc
        if not -1 <= cos_exact <= 1:
            raise SchemaError("--cos", "cos(phi) must lie in [-1, 1]")
        if phi is None:
            phi = math.acos(float(cos_exact))
    if phi is None:
        raise SchemaError("--phi", "provide --phi and/or --cos")
    rho = uniqueness.SymmetricAtomPairMeasure(
        [uniqueness.AtomPair(phi, c_w, d_w, cos_exact=cos_exact)]
    )
    verdict = uniqueness.l_unique_decide(rho)
    doc = {"verdict": verdict.verdict}
    if verdict.verdict == "Enumerated":
        doc["members"] = [
            {
                "phi": float(_fmt(member.pairs[0].phi)),
                "c": float(_fmt(member.pairs[0].c)),
                "d": float(_fmt(member.pairs[0].d)),
            }
            for member in verdict.members
        ]
    if verdict.reason:
        doc["reason"] = verdict.reason
    _emit(dumps(doc) + "\n", out)


@cli.command("triplet-equiv")
@click.option("--a", "a_doc", required=True, help="first 1-d triplet JSON")
@click.option("--b", "b_doc", required=True, help="second 1-d triplet JSON")
@click.option("--N", "n_max", type=int, default=50, show_default=True)
@click.option("--tol", type=float, default=1e-9, show_default=True)
@click.option("--out", default=None)
@_handled
def triplet_equiv_cmd(a_doc, b_doc, n_max, tol, out) -> None:
    """Test whether two 1-d atomic triplets define the same ID law."""
    t1 = triplet_from_json(_load_json(a_doc, "--a"))
    t2 = triplet_from_json(_load_json(b_doc, "--b"))
    result = uniqueness.triplet_equiv(t1, t2, N=n_max, tol=tol)
    doc = {"verdict": result.verdict}
    if result.witness is not None:
        doc["witness"] = list(result.witness)
    _emit(dumps(doc) + "\n", out)


@cli.command("diagram-check")
@click.option("--triplet", required=True, help="additive 2-d triplet JSON")
@click.option("--pmax", type=int, default=20, show_default=True)
@click.option("--tol", type=float, default=1e-10, show_default=True)
@click.option("--out", default=None)
@_handled
def diagram_check_cmd(triplet, pmax, tol, out) -> None:
    """Verify the additive and multiplicative evaluation paths commute."""
    t = add_triplet_from_json(_load_json(triplet, "--triplet"))
    report = diagram_check(t, pmax=pmax, tol=tol)
    doc = {
        "pmax": report.pmax,
        "max_discrepancy": float(_fmt(report.max_discrepancy)),
        "passed": report.passed,
    }
    _emit(dumps(doc) + "\n", out)


def main() -> None:
    cli(prog_name="bitorus")


if __name__ == "__main__":
    main()
