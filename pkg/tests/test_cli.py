"""End-to-end command line behavior: documents, exit codes, determinism."""

import json
from pathlib import Path

import pytest

from avcyclic import cli

FIXTURE = Path(__file__).parent / "fixtures" / "external_records.jsonl"


def run(capsys, argv):
    code = cli.main(argv)
    return code, capsys.readouterr().out


def assert_no_bare_ints(value, path="$"):
    if isinstance(value, bool):
        return
    assert not isinstance(value, (int, float)), f"bare number at {path}: {value!r}"
    if isinstance(value, list):
        for i, v in enumerate(value):
            assert_no_bare_ints(v, f"{path}[{i}]")
    elif isinstance(value, dict):
        for k, v in value.items():
            assert_no_bare_ints(v, f"{path}.{k}")


def test_validate_accepts_good_context(capsys):
    code, out = run(capsys, ["validate", "--p", "2", "--r", "1", "--g", "1",
                             "--poly", "1,-1,2"])
    assert code == 0
    doc = json.loads(out)
    assert doc["schema_version"] == "1"
    assert doc["is_weil"] is True and doc["weil_reason"] is None
    assert doc["is_ordinary"] is True and doc["is_irreducible"] is True
    assert doc["point_count"] == "2"
    assert doc["context"] == {"p": "2", "r": "1", "q": "2", "g": "1", "f": ["1", "-1", "2"]}
    assert_no_bare_ints(doc)


def test_validate_flags_failures_with_exit_1(capsys):
    code, out = run(capsys, ["validate", "--p", "2", "--r", "2", "--g", "1",
                             "--poly", "1,-4,4"])
    assert code == 1
    doc = json.loads(out)
    assert doc["is_weil"] is True and doc["is_ordinary"] is False
    code, out = run(capsys, ["validate", "--p", "2", "--r", "1", "--g", "1",
                             "--poly", "1,-5,2"])
    assert code == 1
    assert json.loads(out)["weil_reason"] == "root_location"


def test_validate_usage_errors_exit_2(capsys):
    code, out = run(capsys, ["validate", "--p", "2", "--r", "1", "--g", "1",
                             "--poly", "1,x,2"])
    assert code == 2
    assert json.loads(out)["error"]["code"] == "bad_poly"
    code, out = run(capsys, ["validate", "--p", "4", "--r", "1", "--g", "1",
                             "--poly", "1,0,4"])
    assert code == 2
    assert json.loads(out)["error"]["code"] == "p_not_prime"


def test_classify_document_shape(capsys):
    code, out = run(capsys, ["classify", "--p", "5", "--r", "1", "--g", "1",
                             "--poly", "1,-2,5", "--no-timing"])
    assert code == 0
    doc = json.loads(out)
    assert doc["summary"] == {
        "total": "2", "cyclic": "1", "not_cyclic": "1", "point_count": "4",
        "index_bound": "3", "completeness": "certified", "indeterminate_pairs": [],
    }
    first, second = doc["classes"]
    assert first["matrix"] == [["0", "-5"], ["1", "2"]]
    assert first["verdict"] == "cyclic"
    assert first["membership_c1"] is True and first["membership_c2"] is False
    assert first["invariant_factors"] == ["1", "4"]
    assert first["group"] == ["4"]
    assert first["oracle_agrees"] is True
    assert second["matrix"] == [["-5", "-10"], ["4", "7"]]
    assert second["verdict"] == "not_cyclic"
    assert second["ideal_basis"] == {"denominator": "1", "rows": [["1", "1"], ["0", "2"]]}
    assert second["group"] == ["2", "2"]
    assert doc["sigma_checks"] == [
        {"ell": "2", "sigma_classes": ["1"], "tau_classes": ["1"], "agree": True}
    ]
    assert "timing" not in doc
    assert_no_bare_ints(doc)


def test_classify_timing_present_by_default(capsys):
    code, out = run(capsys, ["classify", "--p", "2", "--r", "1", "--g", "1",
                             "--poly", "1,1,2"])
    assert code == 0
    assert "seconds" in json.loads(out)["timing"]


def test_classify_byte_determinism(capsys):
    argv = ["classify", "--p", "5", "--r", "1", "--g", "1", "--poly", "1,-2,5",
            "--no-timing"]
    _, first = run(capsys, argv)
    _, second = run(capsys, argv)
    assert first == second


def test_classify_out_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out = run(capsys, ["classify", "--p", "2", "--r", "1", "--g", "1",
                             "--poly", "1,1,2", "--no-timing", "--out", str(target)])
    assert code == 0
    assert out == ""
    doc = json.loads(target.read_text(encoding="utf-8"))
    assert doc["summary"]["total"] == "1"


def test_classify_refusals_exit_1(capsys):
    code, out = run(capsys, ["classify", "--p", "2", "--r", "1", "--g", "1",
                             "--poly", "1,-5,2"])
    assert code == 1
    assert json.loads(out)["error"]["code"] == "not_weil"
    code, out = run(capsys, ["classify", "--p", "2", "--r", "2", "--g", "1",
                             "--poly", "1,-4,4"])
    assert code == 1
    assert json.loads(out)["error"]["code"] == "not_ordinary"


def test_classify_bad_bound_exit_2(capsys):
    code, out = run(capsys, ["classify", "--p", "5", "--r", "1", "--g", "1",
                             "--poly", "1,-2,5", "--index-bound", "0"])
    assert code == 2
    assert json.loads(out)["error"]["code"] == "bad_bound"


def test_convert_matrix_to_ideal(capsys):
    code, out = run(capsys, ["convert", "--p", "5", "--r", "1", "--g", "1",
                             "--poly", "1,-2,5", "--matrix", "0,-5;1,2"])
    assert code == 0
    doc = json.loads(out)
    assert doc["direction"] == "matrix_to_ideal"
    assert doc["ideal"] == {"denominator": "1", "rows": [["1", "0"], ["0", "1"]]}
    assert doc["round_trip"]["status"] == "conjugate"
    assert doc["round_trip"]["matrix"] == [["0", "-5"], ["1", "2"]]
    assert_no_bare_ints(doc)


def test_convert_ideal_to_matrix(capsys):
    code, out = run(capsys, ["convert", "--p", "5", "--r", "1", "--g", "1",
                             "--poly", "1,-2,5", "--ideal", "1,1;0,2"])
    assert code == 0
    doc = json.loads(out)
    assert doc["direction"] == "ideal_to_matrix"
    assert doc["matrix"] == [["-5", "-10"], ["4", "7"]]
    assert doc["round_trip"]["status"] == "equivalent"
    assert doc["round_trip"]["witness"] is not None


def test_convert_direction_validation(capsys):
    base = ["convert", "--p", "5", "--r", "1", "--g", "1", "--poly", "1,-2,5"]
    code, out = run(capsys, base)
    assert code == 2
    assert json.loads(out)["error"]["code"] == "bad_direction"
    code, out = run(capsys, base + ["--matrix", "0,-5;1,2", "--ideal", "1,0;0,1"])
    assert code == 2


def test_convert_charpoly_mismatch_is_a_refusal(capsys):
    code, out = run(capsys, ["convert", "--p", "5", "--r", "1", "--g", "1",
                             "--poly", "1,-2,5", "--matrix", "1,0;0,5"])
    assert code == 1
    assert json.loads(out)["error"]["code"] == "charpoly_mismatch"


def test_sweep_small_field(capsys):
    code, out = run(capsys, ["sweep", "--p", "2", "--r", "1", "--g", "1", "--no-timing"])
    assert code == 0
    doc = json.loads(out)
    assert doc["sweep"] == {"p": "2", "r": "1", "g": "1", "contexts": "2"}
    assert len(doc["reports"]) == 2
    assert doc["failures"] == []
    csv_text = doc["aggregate_csv"]
    assert csv_text.splitlines()[0] == "q,f,classes,cyclic,not_cyclic,completeness"
    assert '2,"1,-1,2",1,1,0,certified' in csv_text
    assert '2,"1,1,2",1,1,0,certified' in csv_text


def test_sweep_with_fixtures_and_outputs(tmp_path, capsys):
    out_dir = tmp_path / "reports"
    csv_path = tmp_path / "agg.csv"
    code, out = run(capsys, ["sweep", "--p", "2", "--r", "1", "--g", "1", "--no-timing",
                             "--fixtures", str(FIXTURE), "--out-dir", str(out_dir),
                             "--csv", str(csv_path)])
    assert code == 0
    assert out == ""
    names = sorted(p.name for p in out_dir.iterdir())
    assert names == ["aggregate.csv", "g1_q2_f_1_1_2.json", "g1_q2_f_1_m1_2.json",
                     "sweep.json"]
    sweep_doc = json.loads((out_dir / "sweep.json").read_text(encoding="utf-8"))
    assert sweep_doc["cross_validation"]["report"]["mismatch_count"] == "0"
    assert sweep_doc["cross_validation"]["rejected_lines"] == []
    assert csv_path.read_text(encoding="utf-8") == (out_dir / "aggregate.csv").read_text(
        encoding="utf-8")
    per_ctx = json.loads((out_dir / "g1_q2_f_1_m1_2.json").read_text(encoding="utf-8"))
    assert per_ctx["context"]["f"] == ["1", "-1", "2"]


def test_sweep_determinism(tmp_path, capsys):
    argv = ["sweep", "--p", "3", "--r", "1", "--g", "1", "--no-timing"]
    _, first = run(capsys, argv)
    _, second = run(capsys, argv)
    assert first == second


def test_sweep_capability_exit_2(capsys):
    code, out = run(capsys, ["sweep", "--p", "2", "--r", "1", "--g", "3"])
    assert code == 2
    assert json.loads(out)["error"]["code"] == "capability"
