import csv
import io
import json
from fractions import Fraction

import jsonschema
import pytest

from dicke_npt.cli import (
    load_schema,
    main,
    parse_rational,
    report_from_dict,
    report_to_dict,
)
from dicke_npt.limits import ENV_DENSE_LIMIT
from dicke_npt.npt_witness import certify


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_certify_json_w_state(capsys):
    code, out, _ = run(capsys, "certify", "--occupation", "1,2")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, load_schema())
    assert doc["verdict"] == "NPT-GME"
    assert doc["schema_version"] == "1.0"
    assert [(r["m"], r["k"]) for r in doc["records"]] == [(2, 1), (3, 1), (3, 2)]
    assert doc["records"][0]["discriminant"] == "-1/9"


def test_certify_separable_exit_code(capsys):
    code, out, _ = run(capsys, "certify", "--occupation", "5,0")
    assert code == 2
    doc = json.loads(out)
    jsonschema.validate(doc, load_schema())
    assert doc["verdict"] == "fully separable" and doc["records"] == []


def test_certify_csv(capsys):
    code, out, _ = run(capsys, "certify", "--occupation", "1,1,1", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["m", "k", "discriminant", "witness_value", "spectral_min", "is_npt"]
    assert [(r[0], r[1]) for r in rows[1:]] == [("2", "1"), ("3", "1"), ("3", "2")]


def test_global_flags_before_subcommand(capsys):
    code, out, _ = run(capsys, "--format", "csv", "certify", "--occupation", "1,2")
    assert code == 0 and out.startswith("m,k,")


def test_csv_and_json_carry_same_numbers(capsys):
    _, js, _ = run(capsys, "certify", "--occupation", "2,0,1,1")
    _, cs, _ = run(capsys, "certify", "--occupation", "2,0,1,1", "--format", "csv")
    records = json.loads(js)["records"]
    rows = list(csv.DictReader(io.StringIO(cs)))
    assert len(rows) == len(records)
    for rec, row in zip(records, rows):
        assert int(row["m"]) == rec["m"] and int(row["k"]) == rec["k"]
        assert parse_rational(row["discriminant"]) == parse_rational(rec["discriminant"])
        assert float(row["witness_value"]) == rec["witness_value"]
        assert float(row["spectral_min"]) == rec["spectral_min"]
        assert (row["is_npt"] == "true") == rec["is_npt"]


def test_report_round_trip():
    report = certify((2, 1, 1))
    doc = json.loads(json.dumps(report_to_dict(report)))
    back = report_from_dict(doc)
    assert back == report
    for r, rec in zip(report.records, doc["records"]):
        assert parse_rational(rec["discriminant"]) == r.discriminant
        assert isinstance(r.discriminant, Fraction)


def test_schema_rejects_float_discriminant():
    doc = report_to_dict(certify((1, 2)))
    doc["records"][0]["discriminant"] = -0.111
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(doc, load_schema())


@pytest.mark.parametrize("occ", ["1,x", "", "1,-2", "0,1"])
def test_certify_input_errors(capsys, occ):
    code, _, err = run(capsys, "certify", "--occupation", occ)
    assert code == 1
    assert "error" in err


def test_usage_error_exit_code(capsys):
    assert run(capsys, "certify")[0] == 1
    assert run(capsys, "frobnicate")[0] == 1


def test_text_format(capsys):
    code, out, _ = run(capsys, "certify", "--occupation", "1,2", "--format", "text")
    assert code == 0
    assert out.splitlines()[0] == "occupation (1,2): NPT-GME"
    assert len(out.splitlines()) == 4


def test_output_file(capsys, tmp_path):
    path = tmp_path / "report.json"
    code, out, _ = run(capsys, "certify", "--occupation", "1,2", "--output", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["verdict"] == "NPT-GME"


def test_reduce(capsys):
    code, out, _ = run(capsys, "reduce", "--occupation", "1,2", "-m", "2")
    assert code == 0
    assert out.strip() == "(1,1): 2/3, (0,2): 1/3"
    code, out, _ = run(capsys, "reduce", "--occupation", "1,2", "-m", "2", "--format", "json")
    assert json.loads(out)["weights"] == [
        {"part": [1, 1], "weight": "2/3"}, {"part": [0, 2], "weight": "1/3"}
    ]


def test_reduce_out_of_range(capsys):
    assert run(capsys, "reduce", "--occupation", "1,2", "-m", "4")[0] == 1


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "-d", "2", "-n", "3")
    assert code == 0
    assert out.splitlines() == ["(3,0)", "(2,1)", "(1,2)", "(0,3)"]
    code, out, _ = run(capsys, "enumerate", "--bound", "7,3", "-m", "6")
    assert out.splitlines() == ["(6,0)", "(5,1)", "(4,2)", "(3,3)"]


def test_ppt(capsys):
    code, out, _ = run(capsys, "ppt", "--occupation", "1,2", "-m", "2", "-k", "1", "--format", "json", "--dense")
    assert code == 0
    doc = json.loads(out)
    assert doc["min"] == pytest.approx((1 - 5**0.5) / 6, abs=1e-12)
    assert doc["dense_spectrum"][0] == pytest.approx(doc["min"], abs=1e-10)


@pytest.mark.parametrize("args", [["-m", "1", "-k", "1"], ["-m", "3", "-k", "3"], ["-m", "4", "-k", "1"]])
def test_ppt_out_of_range(capsys, args):
    assert run(capsys, "ppt", "--occupation", "1,2", *args)[0] == 1


def test_oracle_check_small(capsys):
    code, out, _ = run(capsys, "oracle-check", "--max-n", "4", "--max-d", "3", "--threads", "2")
    assert code == 0
    assert "0 mismatches" in out


def test_oracle_check_default_sweep(capsys):
    code, out, _ = run(capsys, "oracle-check", "--max-n", "6", "--max-d", "3")
    assert code == 0, out


def test_oracle_check_dense_limit_flag(capsys):
    code, _, err = run(capsys, "oracle-check", "--max-n", "6", "--max-d", "3", "--dense-limit", "100")
    assert code == 1
    assert "243" in err and "100" in err


def test_dense_limit_env(capsys, monkeypatch):
    monkeypatch.setenv(ENV_DENSE_LIMIT, "10")
    code, _, err = run(capsys, "ppt", "--occupation", "2,2", "-m", "3", "-k", "1", "--dense")
    assert code == 1 and "16" in err
    # the flag overrides the environment
    code, _, _ = run(capsys, "ppt", "--occupation", "2,2", "-m", "3", "-k", "1", "--dense", "--dense-limit", "16")
    assert code == 0
