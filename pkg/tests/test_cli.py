import json

import pytest

from atlascover.cli import main
from atlascover.jsonio import (
    covering_from_dict,
    covering_to_dict,
    read_achart_atlas,
    read_covering,
    write_covering,
)
from atlascover.annulus import cover_annulus
from atlascover.levelset import cover_monomial_level_set
from atlascover.polydisc import cover_punctured_polydisc
from atlascover.real_acharts import MonomialData, cover_monomial_graph


def test_cover_then_verify_roundtrip(tmp_path, capsys):
    out = tmp_path / "annulus.json"
    assert main(["cover", "annulus", "--delta", "0.01", "--zeta", "2",
                 "--out", str(out)]) == 0
    assert main(["verify", "coverage", "--covering", str(out),
                 "--samples", "10000", "--seed", "1"]) == 0
    assert main(["verify", "doubling", "--covering", str(out)]) == 0
    text = capsys.readouterr().out
    assert "pass=True" in text


def test_count_only_prints_plan(capsys):
    assert main(["cover", "polydisc", "--dim", "2", "--eta", "0.1",
                 "--gamma", "2", "--count-only"]) == 0
    plan = json.loads(capsys.readouterr().out.strip())
    assert plan["kappa"] == plan["levels"][-1]["kappa"]
    assert len(plan["levels"]) == 2


def test_missing_flag_usage_error(capsys):
    assert main(["cover", "annulus", "--delta", "0.01"]) == 2
    assert "usage" in capsys.readouterr().err


def test_unknown_command_usage_error():
    assert main(["conquer"]) == 2


def test_eta_prints_value(capsys):
    assert main(["eta", "--delta", "0.1", "--c-lower", "0.5", "--c-unit", "2",
                 "--d", "2", "--alpha0", "2"]) == 0
    assert float(capsys.readouterr().out.strip()) == pytest.approx(0.05, rel=1e-15)


def test_byte_identical_runs(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["cover", "annulus", "--delta", "0.02", "--zeta", "4",
                     "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_json_round_trip_field_for_field(tmp_path):
    for cov in (cover_annulus(0.05, 2.0),
                cover_monomial_level_set((2, 1), 0.04),
                cover_punctured_polydisc(2, 0.75, 2.0)[0]):
        d = covering_to_dict(cov)
        back = covering_from_dict(d)
        assert back == cov
        assert covering_to_dict(back) == d


def test_levelset_cli_flow(tmp_path):
    out = tmp_path / "level.json"
    assert main(["cover", "levelset", "--alpha", "2,1", "--c", "0.04,0",
                 "--gamma", "2", "--out", str(out)]) == 0
    cov = read_covering(out)
    assert cov.kappa == 700
    assert main(["verify", "coverage", "--covering", str(out),
                 "--samples", "2000", "--seed", "0"]) == 0
    assert main(["verify", "doubling", "--covering", str(out)]) == 0


def test_graph_cli_flow(tmp_path, capsys):
    out = tmp_path / "graph.json"
    assert main(["cover", "graph", "--mu", "1", "--coeff", "1",
                 "--eps", "0.01", "--out", str(out)]) == 0
    charts, data, eps = read_achart_atlas(out)
    assert charts == cover_monomial_graph(MonomialData(1.0, (1.0,)), 0.01)
    assert main(["verify", "achart", "--charts", str(out), "--grid", "12"]) == 0
    assert "pass=True" in capsys.readouterr().out


def test_chain_cli(tmp_path, capsys):
    out = tmp_path / "c.json"
    main(["cover", "annulus", "--delta", "0.1", "--zeta", "2", "--out", str(out)])
    assert main(["chain", "--covering", str(out),
                 "--from=0.1,0", "--to=-0.1,0"]) == 0
    assert "length=" in capsys.readouterr().out


def test_scaling_csv_columns(tmp_path):
    out = tmp_path / "rows.csv"
    assert main(["scaling", "--experiment", "annulus",
                 "--grid", "0.1,0.01,0.001", "--zeta", "2",
                 "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "param,kappa,paper_bound,ratio,log_inv_param"
    assert len(lines) == 4
    first = lines[1].split(",")
    assert float(first[0]) == 0.1
    assert int(first[1]) == cover_annulus(0.1, 2.0).kappa


def test_polydisc_cli_writes_and_verifies(tmp_path, capsys):
    out = tmp_path / "poly.json"
    assert main(["cover", "polydisc", "--dim", "2", "--eta", "0.75",
                 "--gamma", "2", "--out", str(out)]) == 0
    cov = read_covering(out)
    assert cov == cover_punctured_polydisc(2, 0.75, 2.0)[0]
    assert main(["verify", "doubling", "--covering", str(out)]) == 0
    assert main(["verify", "coverage", "--covering", str(out),
                 "--samples", "1000", "--seed", "3"]) == 0


def test_version_flag(capsys):
    assert main(["--version"]) == 0
    assert "schema" in capsys.readouterr().out


def test_coverage_failure_exits_one(tmp_path):
    cov = cover_annulus(0.1, 2.0)
    from atlascover.core import Covering
    pruned = Covering(ambient=cov.ambient, gamma=cov.gamma,
                      charts=list(cov.charts)[1:], meta=cov.meta)
    path = tmp_path / "pruned.json"
    write_covering(pruned, path)
    assert main(["verify", "coverage", "--covering", str(path),
                 "--samples", "8000", "--seed", "0"]) == 1


def test_domain_error_exits_two(capsys):
    assert main(["cover", "levelset", "--alpha", "2,1", "--c", "0,0",
                 "--gamma", "2", "--out", "/tmp/never.json"]) == 2
    assert "NotARegularValue" in capsys.readouterr().err
