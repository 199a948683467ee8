import json
from fractions import Fraction

import pytest

from toricqh import examples
from toricqh.cli import (
    main,
    polytope_from_json,
    polytope_to_json,
    qclass_from_json,
    qclass_to_json,
    lift_expression,
)
from toricqh.errors import ExprSyntaxError
from toricqh.exprparse import parse_expression
from toricqh.quantum import fano_presentation, qprod, qsub

F = Fraction


@pytest.fixture()
def blow_file(tmp_path):
    path = tmp_path / "blowup.json"
    assert main(["example", "blowup_cp2", "--mu", "1/2",
                 "-o", str(path)]) == 0
    return str(path)


def test_example_round_trip(tmp_path):
    for name in ("s2", "cp2", "blowup_cp2", "s2xs2", "hirzebruch2"):
        path = tmp_path / f"{name}.json"
        assert main(["example", name, "-o", str(path)]) == 0
        data = json.loads(path.read_text())
        poly = polytope_from_json(data)
        assert polytope_to_json(poly) == data
        assert main(["validate", str(path)]) == 0


def test_example_blowup_epsilon(blow_file):
    data = json.loads(open(blow_file).read())
    assert data["facets"][0]["support"] == "7/20"


def test_validate_reports_error(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({
        "name": "bad", "dim": 2,
        "facets": [{"normal": [-1, 0], "support": "1"},
                   {"normal": [0, -1], "support": "1"},
                   {"normal": [2, 1], "support": "1"}]}))
    assert main(["validate", str(path)]) == 1
    err = capsys.readouterr().err
    assert "NotSmooth" in err


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["product"])  # missing arguments
    assert exc.value.code == 2


def test_expression_parser():
    value = parse_expression("x1*x2 - x4*q*t^{1/4}", 4)
    assert value[((1, 1, 0, 0), 0, F(0))] == 1
    assert value[((0, 0, 0, 1), 1, F(1, 4))] == -1
    value = parse_expression("2*q^-2*t^{-3/4} + (x3 - x4)^2", 4)
    assert value[((0, 0, 0, 0), -2, F(-3, 4))] == 2
    assert value[((0, 0, 1, 1), 0, F(0))] == -2
    with pytest.raises(ExprSyntaxError):
        parse_expression("x9", 4)
    with pytest.raises(ExprSyntaxError):
        parse_expression("x1 +", 4)
    with pytest.raises(ExprSyntaxError):
        parse_expression("t^{1/0}", 4)


def test_product_command_paper_table(blow_file, capsys):
    assert main(["product", blow_file, "x1", "x3"]) == 0
    out = capsys.readouterr().out
    assert "homology: B * L = p" in out
    assert main(["product", blow_file, "x4", "x1*x3"]) == 0
    out = capsys.readouterr().out
    assert "B (x) q^{-2} t^{-3/4}" in out


def test_product_structured_round_trip(blow_file, capsys):
    assert main(["product", blow_file, "x1", "x3",
                 "--format", "structured"]) == 0
    payload = json.loads(capsys.readouterr().out)
    qp = fano_presentation(examples.blowup_cp2(F(1, 2)))
    restored = qclass_from_json(payload["product"], qp)
    direct = qprod(lift_expression(qp, "x1"), lift_expression(qp, "x3"), qp)
    assert qsub(restored, direct).is_zero()
    assert qclass_to_json(restored, qp.ring) == payload["product"]


def test_seidel_command(blow_file, capsys):
    assert main(["seidel", blow_file, "--xi=-1,0"]) == 0
    out = capsys.readouterr().out
    assert "B (x) q t^{7/20}" in out
    assert "leading term check: ok" in out
    assert "exactness (fano facet maximum): ok" in out


def test_seidel_structured(blow_file, capsys):
    assert main(["seidel", blow_file, "--xi=-2,-1",
                 "--format", "structured"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["leading"]["leading_ok"]
    assert payload["leading"]["f_max"] == [1, 4]
    qp = fano_presentation(examples.blowup_cp2(F(1, 2)))
    restored = qclass_from_json(payload["element"], qp)
    from toricqh.seidel import seidel_element
    assert qsub(restored, seidel_element(qp, (-2, -1)).qclass).is_zero()


def test_fixed_command(blow_file, capsys):
    assert main(["fixed", blow_file, "--xi", "1,-1"]) == 0
    out = capsys.readouterr().out
    assert "Z/2" in out
    assert "global isotropy bound: 2" in out


def test_analyze_command(tmp_path, capsys):
    path = tmp_path / "square.json"
    main(["example", "s2xs2", "--mu", "2", "-o", str(path)])
    capsys.readouterr()
    assert main(["analyze", str(path), "--xi", "1,1"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("ESSENTIAL [")
    assert "T1" in out and "SD" in out


def test_analyze_structured(blow_file, capsys):
    assert main(["analyze", blow_file, "--xi=-2,-1",
                 "--format", "structured"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["verdict"] == "essential"
    assert "T2" in payload["triggered"]


def test_quantum_command(blow_file, capsys):
    assert main(["quantum", blow_file]) == 0
    out = capsys.readouterr().out
    assert "x3*x4 = q^2 t^{3/4}" in out
    assert "x1*x2 = x4 (x) q t^{1/4}" in out


def test_verify_command(tmp_path, capsys):
    path = tmp_path / "cp2.json"
    main(["example", "cp2", "-o", str(path)])
    capsys.readouterr()
    assert main(["verify", str(path), "--trials", "4"]) == 0
    out = capsys.readouterr().out
    assert "all checks passed" in out


def test_expression_lift_matches_relations(blow_file):
    qp = fano_presentation(examples.blowup_cp2(F(1, 2)))
    lhs = lift_expression(qp, "x3*x4")
    rhs = lift_expression(qp, "q^2*t^{3/4}")
    assert qsub(lhs, rhs).is_zero()


def _hirz_y_table_json():
    # corrections for the projectivized degree-2 bundle at mu = 2, written
    # as explicit series terms up to the default cutoff 4
    terms2 = [{"m": [0, 1, 0, 0], "q": 0, "t": str(k), "c": "1"}
              for k in range(1, 5)]
    terms3 = [{"m": [0, 0, 1, 0], "q": 0, "t": "0", "c": "1"},
              {"m": [0, 0, 0, 1], "q": 0, "t": "0", "c": "-1"}] + \
             [{"m": [0, 1, 0, 0], "q": 0, "t": str(k), "c": "-1"}
              for k in range(1, 5)]
    return {"1": [], "2": terms2, "3": terms3, "4": terms3}


def test_nef_cli_with_y_table_file(tmp_path, capsys):
    poly_path = tmp_path / "hirz.json"
    main(["example", "hirzebruch2", "--mu", "2", "-o", str(poly_path)])
    table_path = tmp_path / "ytable.json"
    table_path.write_text(json.dumps(_hirz_y_table_json()))
    capsys.readouterr()
    assert main(["seidel", str(poly_path), "--xi", "0,1",
                 "--mode", "nef", "--y-table", str(table_path)]) == 0
    out = capsys.readouterr().out
    assert "A+B (x) q t^{5/12}" in out
    assert main(["seidel", str(poly_path), "--xi=0,-1",
                 "--mode", "nef", "--y-table", str(table_path)]) == 0
    out = capsys.readouterr().out
    assert "O(t^{4})" in out  # truncated series marked
    assert main(["quantum", str(poly_path),
                 "--mode", "nef", "--y-table", str(table_path)]) == 0
