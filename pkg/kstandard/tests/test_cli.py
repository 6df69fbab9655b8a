import json
import os

from kstandard.scripts import homotopy
from kstandard.scripts.kstandard_cli import main
from kstandard.scripts.pathalg import PathAlgebra, make_arn
from kstandard.scripts.pseudofunctor import all_ones

A12 = ["--r", "1", "--N", "2"]


def test_object_prints_the_complex(capsys):
    assert main(["object", "X[0,2]", *A12]) == 0
    out = capsys.readouterr().out
    assert "degree 2: P0" in out, f"Unexpected output: {out}"


def test_object_json(capsys):
    assert main(["object", "L[0,1;a=1]", *A12, "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["schema"] == "kstandard.complex/1"
    assert payload["complex"]["terms"] == [[1], [0]]


def test_malformed_id_is_a_usage_error(capsys):
    assert main(["object", "Z[0;a=2,b=1]", *A12]) == 64
    assert "✗ Error:" in capsys.readouterr().err


def test_unknown_command_is_a_usage_error():
    assert main(["bogus"]) == 64
    assert main(["check", "nothing", *A12]) == 64


def test_algebra_summary(capsys):
    assert main(["algebra", "--r", "2", "--N", "3", "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["dim"] == 7
    assert len(payload["center"]) == 1


def test_hom_is_cached(tmp_path, capsys):
    args = ["hom", "X[0,1]", "X[0,1]", *A12, "--format", "json", "--cache-dir", str(tmp_path)]
    assert main(args) == 0
    first = json.loads(capsys.readouterr().out)
    assert first["dim"] == 2
    assert len(os.listdir(tmp_path / "hom")) == 1
    assert main(args) == 0
    assert json.loads(capsys.readouterr().out) == first


def test_cached_hom_skips_the_computation(tmp_path, capsys, monkeypatch):
    args = ["hom", "X[0,1]", "X[0,1]", *A12, "--cache-dir", str(tmp_path)]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert "dim 2" in first, f"Unexpected output: {first}"

    def fail(*_):
        raise AssertionError("hom_kb called on a cache hit")

    monkeypatch.setattr(homotopy, "hom_kb", fail)
    assert main(args) == 0
    assert capsys.readouterr().out == first


def test_reports_identical_with_and_without_cache(tmp_path, capsys):
    args = ["check", "homdim", *A12, "--window", "0", "1", "--format", "json"]
    outputs = []
    for extra in ([], ["--cache-dir", str(tmp_path)], ["--cache-dir", str(tmp_path)]):
        assert main([*args, *extra]) == 0
        outputs.append(capsys.readouterr().out)
    assert outputs[0] == outputs[1] == outputs[2]


def test_check_exit_codes(capsys):
    assert main(["check", "homdim", *A12, "--window", "0", "1"]) == 0
    assert "homdim" in capsys.readouterr().out
    assert main(["check", "end", "--r", "1", "--N", "1", "--window", "0", "1"]) == 64


def test_check_json_report(capsys):
    assert main(["check", "end", "--r", "2", "--N", "3", "--window", "0", "1", "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["check"] == "end" and payload["verdict"] == "pass"


def test_trivialize_template_and_file(tmp_path, capsys):
    window = ["--window", "0", "1"]
    assert main(["trivialize", "--template", *A12, *window]) == 0
    template = json.loads(capsys.readouterr().out)
    assert template["schema"] == "kstandard.scalars/1"

    path = tmp_path / "system.json"
    path.write_text(json.dumps(template), encoding="utf-8")
    assert main(["trivialize", str(path), *A12, *window, "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert set(payload["objects"].values()) == {1}


def test_trivialize_needs_a_file(capsys):
    assert main(["trivialize", *A12]) == 64
    assert "needs a scalar-system file" in capsys.readouterr().err


def test_trivialize_rejects_bad_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json", encoding="utf-8")
    assert main(["trivialize", str(path), *A12]) == 64


def test_template_matches_library(capsys):
    assert main(["trivialize", "--template", *A12, "--window", "0", "1"]) == 0
    expected = all_ones(PathAlgebra(make_arn(1, 2), 32003), 0, 1).to_json()
    assert json.loads(capsys.readouterr().out) == expected
