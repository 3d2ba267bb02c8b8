import json
import math

import pytest
from click.testing import CliRunner

from bitorus.cli import cli

runner = CliRunner()

ATOMIC_1D = json.dumps(
    {
        "kind": "atomic",
        "dim": 1,
        "atoms": [
            {"theta": [0.0], "w": 0.5},
            {"theta": [math.pi / 2], "w": 0.5},
        ],
    }
)

TRIPLET_1D = json.dumps(
    {
        "d": 1,
        "gamma_arg": [0.0],
        "A": [[0.0]],
        "rho": {
            "kind": "atomic",
            "dim": 1,
            "mode": "levy",
            "atoms": [{"theta": [math.pi / 2], "w": math.pi}],
        },
    }
)

TRIPLET_1D_CONJ = TRIPLET_1D.replace(str(math.pi / 2), str(-math.pi / 2), 1)


def test_moments_csv():
    result = runner.invoke(cli, ["moments", "--measure", ATOMIC_1D, "--pmax", "2"])
    assert result.exit_code == 0
    lines = result.output.strip().splitlines()
    assert lines[0] == "p,re,im"
    assert len(lines) == 6  # header + p in -2..2


def test_moments_json_and_out(tmp_path):
    out = tmp_path / "m.json"
    result = runner.invoke(
        cli,
        ["moments", "--measure", ATOMIC_1D, "--pmax", "1", "--format", "json", "--out", str(out)],
    )
    assert result.exit_code == 0
    rows = json.loads(out.read_text())
    assert len(rows) == 3
    assert rows[1]["p"] == [0]
    assert rows[1]["value"] == [1.0, 0.0]


def test_moments_from_file(tmp_path):
    path = tmp_path / "measure.json"
    path.write_text(ATOMIC_1D)
    result = runner.invoke(cli, ["moments", "--measure", str(path), "--pmax", "0"])
    assert result.exit_code == 0


def test_moments_validation_exit_2():
    result = runner.invoke(cli, ["moments", "--measure", '{"kind": "bogus"}'])
    assert result.exit_code == 2
    result = runner.invoke(cli, ["moments", "--measure", "not json at all {"])
    assert result.exit_code == 2


def test_convolve_bifree_unsupported_exit_3():
    result = runner.invoke(
        cli, ["convolve", "--a", ATOMIC_1D, "--b", ATOMIC_1D, "--op", "bifree"]
    )
    assert result.exit_code == 3


def test_convolve_circ():
    result = runner.invoke(
        cli, ["convolve", "--a", ATOMIC_1D, "--b", '{"kind": "haar"}', "--op", "circ"]
    )
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc["kind"] == "circconv"


def test_wrap_measure():
    mu = json.dumps(
        {
            "kind": "planar_atomic",
            "dim": 1,
            "atoms": [{"x": [0.5], "w": 1.0}],
        }
    )
    result = runner.invoke(cli, ["wrap", "--measure", mu])
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc["kind"] == "atomic"
    assert doc["atoms"][0]["theta"] == [0.5]


def test_wrap_requires_exactly_one_input():
    result = runner.invoke(cli, ["wrap"])
    assert result.exit_code == 2


def test_wrap_triplet():
    t = json.dumps(
        {
            "d": 1,
            "v": [0.1],
            "A": [[0.2]],
            "tau": {
                "kind": "planar_atomic",
                "dim": 1,
                "mode": "levy",
                "atoms": [{"x": [1.0], "w": 0.5}],
            },
        }
    )
    result = runner.invoke(cli, ["wrap", "--triplet", t])
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc["d"] == 1
    assert doc["rho"]["atoms"][0]["theta"] == [1.0]


def test_lk_eval():
    result = runner.invoke(cli, ["lk-eval", "--triplet", TRIPLET_1D, "--pmax", "1"])
    assert result.exit_code == 0
    lines = result.output.strip().splitlines()
    assert lines[0] == "p,re,im"
    row = dict(zip(("p", "re", "im"), lines[3].split(",")))
    assert float(row["re"]) == pytest.approx(math.exp(-math.pi), abs=1e-12)


def test_u_series():
    t = json.dumps({"d": 2, "gamma_arg": [0.1, 0.2], "A": [[0.3, 0.0], [0.0, 0.4]], "rho": None})
    result = runner.invoke(cli, ["u-series", "--triplet", t, "--K", "3"])
    assert result.exit_code == 0
    lines = result.output.strip().splitlines()
    assert lines[0] == "p1,p2,re,im"
    assert len(lines) == 1 + 16
    # the (1, 0) coefficient of the divided series is i*gamma_1 - a11/2
    row = [ln for ln in lines[1:] if ln.startswith("1,0,")][0]
    _, _, re, im = row.split(",")
    assert float(re) == pytest.approx(-0.15, abs=1e-12)
    assert float(im) == pytest.approx(0.1, abs=1e-12)


def test_u_series_rejects_1d_triplet():
    result = runner.invoke(cli, ["u-series", "--triplet", TRIPLET_1D, "--K", "3"])
    assert result.exit_code == 2


def test_limit_run_gaussian():
    spec = json.dumps({"builtin": "gaussian", "A": [[1.0, 0.0], [0.0, 1.0]]})
    result = runner.invoke(
        cli, ["limit-run", "--array", spec, "--n", "100,400", "--pmax", "1"]
    )
    assert result.exit_code == 0
    lines = result.output.strip().splitlines()
    assert lines[0] == "n,p1,p2,error"
    errs_400 = [float(ln.split(",")[3]) for ln in lines[1:] if ln.startswith("400,")]
    assert max(errs_400) < 0.05


def test_limit_run_poisson():
    spec = json.dumps(
        {
            "builtin": "poisson",
            "r": 1.0,
            "jump": {
                "kind": "planar_atomic",
                "dim": 2,
                "atoms": [{"x": [1.0, 0.0], "w": 0.5}, {"x": [0.0, 1.0], "w": 0.5}],
            },
        }
    )
    result = runner.invoke(
        cli, ["limit-run", "--array", spec, "--n", "200,1000", "--pmax", "1"]
    )
    assert result.exit_code == 0
    lines = result.output.strip().splitlines()
    errs = [float(ln.split(",")[3]) for ln in lines[1:] if ln.startswith("1000,")]
    assert max(errs) < 0.05


def test_limit_run_custom_requires_target():
    spec = json.dumps(
        {
            "custom": {
                "theta": 0.5,
                "levels": [
                    {
                        "n": 10,
                        "entries": [
                            {
                                "measure": {
                                    "kind": "atomic",
                                    "dim": 1,
                                    "atoms": [
                                        {"theta": [0.1], "w": 0.5},
                                        {"theta": [-0.1], "w": 0.5},
                                    ],
                                },
                                "count": 10,
                            }
                        ],
                    }
                ],
            }
        }
    )
    result = runner.invoke(cli, ["limit-run", "--array", spec, "--n", "10"])
    assert result.exit_code == 2
    result = runner.invoke(
        cli,
        [
            "limit-run",
            "--array",
            spec,
            "--n",
            "10",
            "--pmax",
            "1",
            "--triplet",
            '{"d": 1, "gamma_arg": [0.0], "A": [[0.01]], "rho": null}',
        ],
    )
    assert result.exit_code == 0


def test_classify():
    result = runner.invoke(cli, ["classify", "--measure", '{"kind": "biP"}'])
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc["idempotent"] == "BiHaarP"
    assert doc["P_factor"] is True


def test_l_unique_cli():
    result = runner.invoke(cli, ["l-unique", "--cos", "1/3", "--c", "1", "--d", "1"])
    assert result.exit_code == 0
    assert json.loads(result.output)["verdict"] == "Unique"
    result = runner.invoke(cli, ["l-unique", "--cos", "0", "--c", str(math.pi), "--d", "0"])
    doc = json.loads(result.output)
    assert doc["verdict"] == "Enumerated"
    assert len(doc["members"]) == 3
    result = runner.invoke(cli, ["l-unique", "--c", "1", "--d", "1"])
    assert result.exit_code == 2
    result = runner.invoke(cli, ["l-unique", "--cos", "7/2", "--c", "1", "--d", "1"])
    assert result.exit_code == 2


def test_triplet_equiv_cli():
    result = runner.invoke(
        cli, ["triplet-equiv", "--a", TRIPLET_1D, "--b", TRIPLET_1D_CONJ]
    )
    assert result.exit_code == 0
    assert json.loads(result.output)["verdict"] == "Equivalent"


def test_diagram_check_cli():
    t = json.dumps(
        {
            "d": 2,
            "v": [0.1, -0.2],
            "A": [[0.5, 0.1], [0.1, 0.3]],
            "tau": {
                "kind": "planar_atomic",
                "dim": 2,
                "mode": "levy",
                "atoms": [{"x": [1.0, 0.5], "w": 0.4}, {"x": [-0.3, 2.0], "w": 0.6}],
            },
        }
    )
    result = runner.invoke(cli, ["diagram-check", "--triplet", t, "--pmax", "8"])
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc["passed"] is True
    assert doc["max_discrepancy"] < 1e-10
