import csv
import io
import json

import pytest

from detstat.cli import COMMANDS, HANDLERS, run


def call(*argv, env=None):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def doc(*argv):
    code, out, _ = call(*argv)
    assert code == 0
    return json.loads(out)


def test_every_command_has_a_handler():
    assert set(COMMANDS) == set(HANDLERS)


def test_documented_examples():
    assert doc("count-singular", "--n", "2", "--m", "4")["count"] == 88
    d = doc("expsum", "--n", "2", "--m", "4", "--form", "1,0;0,0")
    assert (d["value_re"], d["value_im"], d["histogram"]) == (8.0, 0.0, [32, 16, 24, 16])
    d = doc("exponents", "--n", "2")
    assert (d["gamma"], d["theta"]) == ("10/19", "8/9")


def test_document_envelope():
    d = doc("count-box", "--n", "2", "--m", "2", "--h", "1")
    assert d["tool"] == "detstat" and "version" in d and "config_hash" in d
    assert d["config"]["command"] == "count-box"
    assert d["count"] == 41 and d["residual"] == "-77/8"
    assert d["wall_time_s"] is None
    assert isinstance(doc("exponents", "--n", "3", "--timing")["wall_time_s"], float)


def test_byte_identical_output():
    argv = ("expsum", "--n", "2", "--d", "6", "--form", "1,2;3,5", "--threads", "3")
    assert call(*argv)[1] == call(*argv)[1]
    single = json.loads(call(*argv[:-2], "--threads", "1")[1])
    multi = json.loads(call(*argv)[1])
    assert single["histogram"] == multi["histogram"]
    assert single["config_hash"] != multi["config_hash"]


def test_crt_fields():
    d = doc("expsum", "--n", "2", "--d", "6", "--form", "1,0;0,0")
    assert d["crt_moduli"] == [2, 3]
    assert d["crt_re"] == pytest.approx(12)


def test_csv_output():
    code, out, _ = call("fixed-det", "--n", "2", "--h", "1,2", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and [r["max_count"] for r in rows] == ["33", "129"]
    code, out, _ = call("phi-sum", "--n", "2", "--h", "2", "--format", "csv")
    assert "4612/15" in out
    code, out, _ = call("expsum", "--n", "2", "--m", "3", "--form", "1,0;0,0", "--format", "csv")
    header = out.splitlines()[0].split(",")
    assert "value_re" in header and "value_im" in header


def test_pipelines_and_reports():
    d = doc("squarefree", "--n", "2", "--h", "4", "--method", "both")
    assert d["agree"] and d["count"] == d["count_sieve"]
    d = doc("fixed-det", "--n", "2", "--h", "1", "--a", "1")
    assert d["count"] == 20
    d = doc("count-box", "--n", "2", "--m", "3", "--bounds", "1,2,3,4")
    assert d["box_size"] == 3 * 5 * 7 * 9
    d = doc("expsum-sweep", "--n", "2", "--m", "3")
    assert d["forms"] == 80
    d = doc("expsum-sweep", "--n", "2", "--m", "2", "--square")
    assert d["modulus"] == 4
    d = doc("constants", "--n", "1", "--prime-limit", "1000")
    assert float(d["S"]["lo"]) < 0.6079271 < float(d["S"]["hi"])
    d = doc("convergence", "--n", "2", "--h", "1,2,5", "--prime-limit", "1000")
    assert [r["squarefree_density"] for r in d["rows"]][:2] == ["16/27", "384/625"]
    d = doc("count-singular", "--n", "2", "--m", "8")
    assert d["source"] == "oracle"


@pytest.mark.parametrize("argv", [
    ("count-singular", "--n", "2"),
    ("count-singular", "--n", "2", "--m", "4", "--bogus"),
    ("nonsense",),
    ("expsum", "--n", "2", "--m", "4", "--form", "1,2;3"),
    ("expsum", "--n", "3", "--m", "4", "--form", "1,0;0,0"),
    ("expsum", "--n", "2", "--d", "4", "--form", "1,0;0,0"),
    ("verify", "--suite", "L9.9"),
    ("count-box", "--n", "2", "--m", "0", "--h", "1"),
    ("squarefree", "--n", "2", "--h", "1,2"),
    ("constants", "--n", "2", "--prime-limit", "0"),
])
def test_invalid_input_exits_1(argv):
    code, out, err = call(*argv)
    assert code == 1 and out == "" and err


def test_budget_refusal_exits_2(monkeypatch):
    assert call("count-singular", "--n", "3", "--m", "8", "--budget", "1000")[0] == 2
    monkeypatch.setenv("DETSTAT_BUDGET", "1000")
    assert call("count-singular", "--n", "3", "--m", "8")[0] == 2
    monkeypatch.setenv("DETSTAT_BUDGET", "many")
    assert call("exponents", "--n", "2")[0] == 1


def test_verify_suite():
    d = doc("verify", "--suite", "L2.2")
    assert d["passed"] and d["failed"] == 0
    assert all(r["passed"] for r in d["results"])


def test_help_exits_zero():
    assert call("--help")[0] == 0
