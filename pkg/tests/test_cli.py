import json

import pytest

from roughbound.cli import main


def test_phi_direct(capsys):
    assert main(["phi", "--x", "10", "--y", "2"]) == 0
    assert capsys.readouterr().out.strip() == "5"


def test_phi_degenerate(capsys):
    assert main(["phi", "--x", "10", "--y", "1"]) == 0
    assert capsys.readouterr().out.strip() == "10"


def test_phi_all_methods_agree(capsys):
    assert main(["phi", "--x", "613", "--y", "11", "--method", "all"]) == 0
    assert capsys.readouterr().out.strip() == "128"


def test_phi_resource_exit(capsys):
    assert main(["phi", "--x", "10000", "--y", "3", "--cap", "100"]) == 3
    assert "resource" in capsys.readouterr().err


def test_usage_error_exit():
    with pytest.raises(SystemExit) as exc:
        main(["phi", "--x", "10"])  # missing --y
    assert exc.value.code == 2


def test_unknown_flag_rejected():
    with pytest.raises(SystemExit) as exc:
        main(["phi", "--x", "10", "--y", "2", "--frobnicate"])
    assert exc.value.code == 2


def test_omega_value(capsys):
    assert main(["omega", "--u", "2", "--u-max", "4"]) == 0
    assert float(capsys.readouterr().out.strip()) == 0.5


def test_omega_extremum(capsys):
    assert main(["omega", "--u", "3", "--extremum"]) == 0
    out = capsys.readouterr().out
    assert "0.5671432904" in out


def test_plot_data_omega_header(capsys):
    assert main(["plot-data", "--kind", "omega", "--u-hi", "2.0", "--step", "0.5"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "u,omega"
    u, w = lines[-1].split(",")
    assert float(u) == 2.0
    assert float(w) == pytest.approx(0.5, abs=1e-9)


def test_plot_data_ratio_map(capsys):
    assert main(["plot-data", "--kind", "ratio-map", "--y-set", "3,5", "--u-step", "0.5"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "y,u,ratio"
    assert len(lines) > 4


def test_bound_elementary(capsys):
    assert main(["bound", "--kind", "elementary", "--x", "613", "--y", "11"]) == 0
    out = capsys.readouterr().out
    assert "x_bound 613" in out


def test_bound_large_y(capsys):
    assert main(["bound", "--kind", "large-y", "--y", "500000"]) == 0
    out = capsys.readouterr().out
    assert "factor 1.056" in out


def test_bound_sweep_csv(capsys):
    assert main(["bound", "--kind", "selberg-sweep", "--y-lo", "241", "--y-hi", "300"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "y,epsilon,f_value,coefficient,margin"
    assert lines[1].startswith("241,")


def test_verify_iteration_json(capsys):
    assert main(["verify", "--region", "iteration", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["verdict"] is True
    cert = data["certificates"][0]
    assert cert["region"] == "iteration"
    assert cert["margin"] > 0


def test_verify_failure_exit(capsys):
    # an impossible target: every region must fail
    code = main(["verify", "--region", "iteration", "--target", "0.5", "--format", "json"])
    assert code == 1
    data = json.loads(capsys.readouterr().out)
    assert data["verdict"] is False
    assert data["certificates"][0]["failures"]


def test_table1_csv(capsys, monkeypatch):
    # limit the run to a cheap subset by patching the reference rows
    import roughbound.pipeline as pl
    monkeypatch.setattr(pl, "REFERENCE_SMALL_Y_ROWS", pl.REFERENCE_SMALL_Y_ROWS[:4])
    assert main(["table1", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "y_lo,y_hi,x_bound,max"
    assert lines[1] == "2,3,22,0.61034"
    assert lines[4].startswith("7,11,370,")
