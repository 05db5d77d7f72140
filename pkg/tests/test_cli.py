import json

import pytest

from gorenstein import main

QUADRIC_CONE_F = "y1^4 + y1*y2^2 + y1*y3^2 + y1*y4^2"


def test_hilbert_of_dual(capsys):
    assert main(["hilbert", "--dual", "y1^4", "--n", "1"]) == 0
    assert "(1,1,1,1,1), dim 5" in capsys.readouterr().out


def test_hilbert_of_ideal(capsys):
    assert main(["hilbert", "--ideal", "x1^2, x2^2", "--n", "2"]) == 0
    assert "(1,2,1), dim 4" in capsys.readouterr().out


def test_ann(capsys):
    assert main(["ann", "--dual", "y1^5 + y1^3*y2", "--n", "2"]) == 0
    out = capsys.readouterr().out
    assert "20*x1^2*x2" in out
    assert "x2^2" in out


def test_ann_groebner(capsys):
    assert main(["ann", "--dual", "y1^5 + y1^3*y2", "--n", "2", "--groebner", "--order", "degrevlex"]) == 0
    assert "Базис Грёбнера" in capsys.readouterr().out


def test_tangent_quadric_cone(capsys):
    assert main(["tangent", "--dual", QUADRIC_CONE_F, "--n", "4"]) == 0
    assert "N = 49, obstructed" in capsys.readouterr().out


def test_verify_published(capsys):
    assert main(["verify-gens", "--case", "zero"]) == 0
    assert capsys.readouterr().out.strip() == "true"


def test_reproduce_writes_json(tmp_path, capsys):
    target = tmp_path / "zero.json"
    code = main(["reproduce", "--case", "zero", "--samples", "1", "--seed", "7", "--json", str(target)])
    assert code == 0
    records = json.loads(target.read_text(encoding="utf-8"))
    assert records[0]["case"] == "zero"
    assert records[0]["agree"] is True
    assert str(target) in capsys.readouterr().out


def test_reproduce_default_report_dir(report_dir):
    assert main(["reproduce", "--case", "triple_line", "--samples", "1"]) == 0
    assert (report_dir / "triple_line" / "results" / "report.json").exists()
    assert (report_dir / "triple_line" / "results" / "report.txt").exists()


def test_parse_error_exit_code(capsys):
    assert main(["hilbert", "--dual", "y1 $ y2", "--n", "2"]) == 2
    assert "позиция 3" in capsys.readouterr().err


def test_normalize_rejects_cubic_socle(capsys):
    assert main(["normalize", "--dual", "y1^3 + y2^3", "--n", "2"]) == 1
    assert "Ошибка" in capsys.readouterr().err


def test_normalize_prints_certificate(capsys):
    assert main(["normalize", "--dual", "y1^5 + y1^3*y2", "--n", "2"]) == 0
    out = capsys.readouterr().out
    assert "H = (1,2,2,1,1,1)" in out
    assert "F_simple = y1^5 - 3/20*y1*y2^2" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["hilbert", "--n", "2"],
        ["hilbert", "--dual", "y1^2", "--ideal", "x1", "--n", "1"],
        ["reproduce", "--case", "zero", "--samples", "0"],
        ["reproduce", "--case", "nodal"],
        ["verify-gens", "--case", "zero", "--t", "1/0"],
    ],
)
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2
