import json
import os

import numpy as np
import pytest

from sspdo import registry
from sspdo.cli import main
from sspdo.errors import ParseError
from sspdo.tableau_io import (
    dumps_tableau,
    load_tableau_file,
    loads_tableau,
    save_tableau_file,
)

# --------------------------------------------------------------------- files

def test_round_trip_is_bit_exact(tmp_path):
    entry = registry.get("ssp322")
    path = tmp_path / "ssp322.json"
    save_tableau_file(path, entry.tableau, entry.dense_weights)
    tab, weights = load_tableau_file(path)
    assert np.array_equal(tab.A, entry.tableau.A)
    assert np.array_equal(tab.b, entry.tableau.b)
    assert np.array_equal(weights.coeffs, entry.dense_weights.coeffs)
    assert tab.name == entry.tableau.name


def test_rational_string_input():
    text = json.dumps(
        {
            "A": [[0, 0, 0], ["1/2", 0, 0], ["1/2", "1/2", 0]],
            "b": ["1/3", "1/3", "1/3"],
        }
    )
    tab, weights = loads_tableau(text)
    assert weights is None
    assert abs(tab.b.sum() - 1.0) < 1e-16
    assert tab.b[0] == 1.0 / 3.0


def test_bbar_block():
    text = json.dumps(
        {
            "A": [[0, 0], [1, 0]],
            "b": ["1/2", "1/2"],
            "bbar": [[0, 1, "-1/2"], [0, 0, "1/2"]],
        }
    )
    tab, weights = loads_tableau(text)
    assert weights.degree == 2
    assert weights.coeffs[0, 2] == -0.5


def test_ragged_rows_rejected():
    with pytest.raises(ParseError, match="ragged"):
        loads_tableau(json.dumps({"A": [[0, 0], [1]], "b": [0.5, 0.5]}))


def test_missing_field_rejected():
    with pytest.raises(ParseError, match="'b'"):
        loads_tableau(json.dumps({"A": [[0]]}))


def test_malformed_json_has_line_context():
    with pytest.raises(ParseError, match=":2:"):
        loads_tableau('{\n"A" [[0]]\n}')


def test_zero_row_violation_surfaces_as_parse_error():
    with pytest.raises(ParseError):
        loads_tableau(json.dumps({"A": [[0, 0], [0, 0]], "b": [0.5, 0.5]}))


def test_mismatched_c_rejected():
    with pytest.raises(ParseError):
        loads_tableau(
            json.dumps({"A": [[0, 0], [1, 0]], "b": [0.5, 0.5], "c": [0, 0.25]})
        )


def test_bbar_row_count_checked():
    with pytest.raises(ParseError, match="bbar"):
        loads_tableau(
            json.dumps({"A": [[0, 0], [1, 0]], "b": [0.5, 0.5], "bbar": [[0, 1]]})
        )


# ----------------------------------------------------------------------- cli

def test_certify_record(capsys):
    assert main(["certify", "--method", "ssp322", "--format", "record"]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record["r_method"] == pytest.approx(2.0, abs=1e-8)
    assert record["r_dense"] is None


def test_certify_dense_from_file(tmp_path, capsys):
    entry = registry.get("ssp222")
    path = tmp_path / "m.json"
    save_tableau_file(path, entry.tableau, entry.dense_weights)
    assert main(["certify", "--tableau", str(path), "--dense", "--format", "record"]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record["r_combined"] == pytest.approx(1.0, abs=1e-8)


def test_certify_tol_env(monkeypatch, capsys):
    monkeypatch.setenv("SSPDO_TOL", "1e-6")
    from sspdo.cli import build_parser

    args = build_parser().parse_args(["certify", "--method", "ssp222"])
    assert args.tol == 1e-6


def test_construct_emits_bbar_block(capsys):
    assert main(["construct", "--method", "ssp222", "--order", "2"]) == 0
    block = json.loads(capsys.readouterr().out)
    assert block["bbar"] == [[0.0, 1.0, -0.5], [0.0, 0.0, 0.5]]


def test_search_record(capsys):
    code = main(
        [
            "search", "--stages", "6", "--order", "2", "--degree", "2",
            "--r", "5", "--format", "record",
        ]
    )
    assert code == 0
    record = json.loads(capsys.readouterr().out)
    assert record["status"] == "infeasible"
    assert record["violated_necessary"]["condition"] == "family-quadratic-peak"


def test_shu_osher_command(tmp_path, capsys):
    entry = registry.get("ssp322")
    path = tmp_path / "m.json"
    save_tableau_file(path, entry.tableau, entry.dense_weights)
    assert main(["shu-osher", "--tableau", str(path), "--C", "2", "--format", "record"]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record["beta_bar"][0][1] == pytest.approx(2.0, abs=1e-13)


def test_integrate_csv(capsys):
    assert main(
        [
            "integrate", "--method", "ssp222", "--problem", "sinode",
            "--u0", "0.3", "--h", "0.5", "--steps", "3", "--dense", "4",
        ]
    ) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "t,theta_global,u,is_step_point"
    rows = [line.split(",") for line in lines[1:]]
    assert len(rows) == 3 * 4 + 1
    values = [float(r[2]) for r in rows]
    assert all(0.0 <= v <= 1.0 for v in values)
    assert {r[3] for r in rows} == {"0", "1"}


def test_unknown_method_exit_code(capsys):
    assert main(["certify", "--method", "nope"]) == 2


def test_missing_method_source_exit_code(capsys):
    with pytest.raises(SystemExit) as info:
        main(["certify"])
    assert info.value.code == 2


def test_missing_file_exit_code(capsys):
    assert main(["certify", "--tableau", "/nonexistent.json"]) == 2


def test_figure1_record_and_determinism(tmp_path, capsys):
    out1 = tmp_path / "a"
    out2 = tmp_path / "b"
    assert main(
        ["experiment", "figure1", "--h", "1.6", "--out", str(out1), "--format", "record"]
    ) == 0
    record = json.loads(capsys.readouterr().out)
    assert record["ssp_contained"] is True
    assert record["nonssp"]["min"] < 0.0
    assert main(
        ["experiment", "figure1", "--h", "1.6", "--out", str(out2), "--format", "record"]
    ) == 0
    capsys.readouterr()
    for name in ("ssp.csv", "nonssp.csv"):
        with open(out1 / name, "rb") as f1, open(out2 / name, "rb") as f2:
            assert f1.read() == f2.read()
    header = open(out1 / "ssp.csv").readline().strip()
    assert header == "u0,t,theta,u,formula"


def test_figure1_rejects_zero_step(capsys):
    assert main(["experiment", "figure1", "--h", "0"]) == 2


def test_sweep_record(capsys):
    assert main(["experiment", "sweep", "--smax", "5", "--format", "record"]) == 0
    record = json.loads(capsys.readouterr().out)
    rows = {row["s"]: row for row in record["rows"]}
    assert rows[3]["xineq_holds"] is True
    assert rows[5]["xineq_holds"] is False
    assert rows[5]["c_dense"] < 4.0
