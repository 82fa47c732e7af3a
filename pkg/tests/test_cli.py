import copy
import csv
import io
import json
import subprocess
import sys
from fractions import Fraction
from importlib import resources

import jsonschema
import pytest

import oracles
from trotterproj import cli
from trotterproj import lacunary_core as lc
from trotterproj.extprec import ext, extended, from_decimal


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


@pytest.fixture(scope="module")
def schema():
    text = resources.files("trotterproj").joinpath("schemas/report.schema.json").read_text()
    return json.loads(text)


@pytest.fixture(scope="module")
def report():
    return cli.report_document()


def validate(doc, schema):
    jsonschema.validate(doc, schema, cls=jsonschema.Draft202012Validator)


# -- cn --------------------------------------------------------------------------


def test_cn_hilbert_4(capsys):
    code, doc = run_json(capsys, "cn", "--model", "hilbert", "--n", "4")
    assert code == 0
    r = doc["record"]
    assert r["n"] == 4 and r["model"] == "hilbert" and r["source"] == "cycle_exact"
    assert abs(from_decimal(r["re"])) <= ext("1e-30")
    with extended():
        assert abs(from_decimal(r["im"]) - ext(Fraction(1, 2))) <= ext("1e-30")


def test_cn_lp_1(capsys):
    code, doc = run_json(capsys, "cn", "--model", "lp", "--n", "1")
    assert code == 0
    with extended():
        assert abs(from_decimal(doc["record"]["re"]) - 1) <= ext("1e-30")


@pytest.mark.parametrize(
    "argv",
    [
        ["cn", "--model", "hilbert", "--n", "0"],
        ["cn", "--model", "hilbert", "--n", "-4"],
        ["cn", "--model", "hilbert", "--n", str(2**51)],
        ["cn", "--model", "banach", "--n", "4"],
        ["cn", "--n", "4"],
        ["scan", "--model", "hilbert", "--subseq", "pow2", "--m", "20..10"],
        ["scan", "--model", "hilbert", "--subseq", "pow2", "--m", "0..3"],
        ["scan", "--model", "hilbert", "--subseq", "pow2", "--m", "ten"],
        ["scan", "--model", "hilbert", "--subseq", "5pow2"],
        ["certify", "--margin", "-1"],
        ["simulate", "--model", "hilbert", "--depth", "30"],
        ["simulate", "--model", "lp", "--modes", "4"],
        ["simulate", "--model", "hilbert", "--t", "0"],
        ["cn", "--model", "hilbert", "--n", "4", "--format", "xml"],
        [],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_cn_csv(capsys):
    code, out, _ = run(capsys, "cn", "--model", "hilbert", "--n", "12", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert tuple(rows[0]) == cli.CSV_HEADER
    assert len(rows) == 2 and rows[1][0] == "12"


# -- scan --------------------------------------------------------------------------


def test_scan_pow2(capsys):
    code, doc = run_json(capsys, "scan", "--model", "hilbert", "--subseq", "pow2", "--m", "10..20")
    assert code == 0
    recs = doc["records"]
    assert [r["n"] for r in recs] == [2**m for m in range(10, 21)]
    with extended():
        assert all(ext("0.00154") < from_decimal(r["power"]) < 1 for r in recs)


def test_scan_3pow2_against_oracle(capsys):
    # the powers approach exp(-(6 + pi^2/6 - pi^4/4536)) from above
    code, doc = run_json(capsys, "scan", "--model", "hilbert", "--subseq", "3pow2", "--m", "10..20")
    assert code == 0
    ub = oracles.upper_bound()
    for r in doc["records"]:
        n = r["n"]
        ref = oracles.power(oracles.cn_hilbert(n), n)
        got = oracles.to_mp(from_decimal(r["power"]))
        assert abs(got - ref) <= 1e-28
        assert got > float(ub)
    # beyond the transient the tolerance band of the asymptotic constant is met
    last = from_decimal(doc["records"][-1]["power"])
    assert oracles.exact(last) <= ub * (1 + Fraction(1, 1000))


def test_scan_lp_single_record(capsys):
    code, doc = run_json(capsys, "scan", "--model", "lp", "--subseq", "pow2", "--m", "1..1")
    assert code == 0 and len(doc["records"]) == 1


def test_scan_aliases_agree(capsys):
    a = run(capsys, "scan", "--model", "lp", "--subseq", "3pow2", "--m", "3..6")[1]
    b = run(capsys, "scan", "--model", "lp", "--subseq", "three_pow2", "--m", "3..6")[1]
    assert a == b


def test_scan_deterministic(capsys):
    argv = ("scan", "--model", "hilbert", "--subseq", "3pow2", "--m", "5..25", "--format", "csv")
    outputs = {run(capsys, *argv)[1] for _ in range(3)}
    assert len(outputs) == 1


def test_subprocess_byte_identical(tmp_path):
    cmd = [sys.executable, "-m", "trotterproj", "certify", "--model", "lp", "--m", "10..14"]
    a = subprocess.run(cmd, capture_output=True, check=False)
    b = subprocess.run(cmd, capture_output=True, check=False)
    assert a.stdout == b.stdout and a.stdout
    assert a.returncode == b.returncode == 0
    c = subprocess.run([sys.executable, "-m", "trotterproj", "cn", "--model", "lp", "--n", "0"],
                       capture_output=True, check=False)
    assert c.returncode == 2 and b"usage" in c.stderr


# -- certify -------------------------------------------------------------------------


def test_certify_hilbert(capsys):
    code, doc = run_json(capsys, "certify", "--model", "hilbert", "--m", "10..40")
    assert code == 0
    assert doc["verdict"] == "diverges"
    assert from_decimal(doc["gap"]) >= ext("5e-4")
    assert cli.verify_certificate_document(doc) == "diverges"
    # no flags reproduces the same document
    code2, doc2 = run_json(capsys, "certify")
    assert code2 == 0 and doc2 == doc


def test_certify_lp(capsys):
    code, doc = run_json(capsys, "certify", "--model", "lp", "--m", "10..40", "--margin", "0.04")
    assert code == 0
    assert doc["verdict"] == "diverges"
    assert all(v["stable"] for v in doc["stability"].values())
    assert cli.verify_certificate_document(doc) == "diverges"


def test_certify_inconclusive(capsys):
    code, doc = run_json(capsys, "certify", "--model", "hilbert", "--m", "2..3", "--margin", "10")
    assert code == 1
    assert doc["verdict"] == "inconclusive"
    assert cli.verify_certificate_document(doc) == "inconclusive"


@pytest.mark.parametrize(
    "tamper",
    [
        lambda d: d["samples"]["pow2"][5].__setitem__("power", "1.0e-4"),
        lambda d: d["samples"]["three_pow2"][-1].__setitem__("power", "0.0016"),
        lambda d: d["samples"]["three_pow2"][3].__setitem__("im", "0.5"),
        lambda d: d["parameters"].__setitem__("margin", "0.5"),
        lambda d: d["samples"]["pow2"].pop(),
    ],
)
def test_verify_catches_tampering(tamper, capsys):
    doc = cli.certificate_document(lc.certify_divergence("hilbert"))
    bad = copy.deepcopy(doc)
    tamper(bad)
    assert cli.verify_certificate_document(bad) == "inconclusive"


# -- simulate ------------------------------------------------------------------------


def test_simulate_hilbert(capsys):
    code, doc = run_json(capsys, "simulate", "--model", "hilbert", "--depth", "16", "--n", "64")
    assert code == 0 and doc["passed"]
    assert from_decimal(doc["delta"]) <= ext(2.5 * 2**-16)
    assert from_decimal(doc["reduction_delta"]) <= ext(1e-12)
    assert [r["source"] for r in doc["records"]] == ["simulator", "cycle_exact"]


def test_simulate_lp(capsys):
    code, doc = run_json(capsys, "simulate", "--model", "lp", "--modes", "40", "--n", "256")
    assert code == 0
    assert from_decimal(doc["delta"]) <= ext(1e-11)


def test_simulate_control(capsys):
    code, doc = run_json(capsys, "simulate", "--model", "control", "--n", "1024")
    assert code == 0
    v = doc["verdict"]
    assert v["kind"] == "converged"
    assert from_decimal(v["limit_error"]) <= ext(1e-8)
    assert float(from_decimal(v["cauchy_table"][-1]["difference"])) < 1e-6


def test_simulate_coarsest_grid_within_bound():
    # even at depth 4 the truncation error stays inside 2.5 * 2^-D
    doc = cli.simulate_document("hilbert", 3, depth=4)
    assert float(from_decimal(doc["delta"])) <= float(from_decimal(doc["bound"]))
    assert cli.exit_code(doc) == (0 if doc["passed"] else 1)


# -- output plumbing -----------------------------------------------------------------


def test_out_file(tmp_path, capsys):
    target = tmp_path / "scan.csv"
    code, out, _ = run(capsys, "scan", "--model", "lp", "--subseq", "pow2", "--m", "1..4",
                       "--format", "csv", "--out", str(target))
    assert code == 0 and out == ""
    rows = list(csv.DictReader(io.StringIO(target.read_text())))
    assert [int(r["n"]) for r in rows] == [2, 4, 8, 16]


def test_csv_header_is_fixed_for_every_command(capsys):
    for argv in (
        ("cn", "--model", "lp", "--n", "5"),
        ("scan", "--model", "hilbert", "--subseq", "pow2", "--m", "3..5"),
        ("certify", "--model", "hilbert", "--m", "5..8"),
        ("simulate", "--model", "hilbert", "--n", "8", "--depth", "8"),
    ):
        _, out, _ = run(capsys, *argv, "--format", "csv")
        assert out.splitlines()[0] == ",".join(cli.CSV_HEADER)


def test_decimal_round_trip():
    for n in (3, 5, 64, 1000, 3 * 2**30, 2**45 + 17):
        sample = lc.cn_hilbert(n)
        r = cli.record_from_sample(sample, "cycle_exact")
        with extended():
            assert abs(from_decimal(r["re"]) - sample.value.real) <= ext("1e-27")
            assert abs(from_decimal(r["im"]) - sample.value.imag) <= ext("1e-27")
            assert abs(from_decimal(r["power"]) - sample.power) <= ext("1e-27")


def test_schema_validates_every_kind(schema, capsys):
    docs = [
        cli.cn_document("hilbert", 4),
        cli.cn_document("lp", 2),  # c_2 = 0 for Hilbert; the L_p value is 15/17
        cli.cn_document("hilbert", 2),
        cli.scan_document("lp", "three_pow2", 1, 5),
        cli.certificate_document(lc.certify_divergence("lp", (10, 20))),
        cli.simulate_document("hilbert", 16, depth=10),
        cli.simulate_document("control", 16),
    ]
    for doc in docs:
        validate(doc, schema)
    with pytest.raises(jsonschema.ValidationError):
        bad = copy.deepcopy(docs[0])
        bad["record"]["re"] = 0.5
        validate(bad, schema)


def test_report(report, schema):
    validate(report, schema)
    assert report["passed"] is True
    assert cli.exit_code(report) == 0
    assert report["probe"]["kind"] == "oscillating"
    recs = cli.document_records(report)
    assert [r["n"] for r in recs] == sorted(r["n"] for r in recs)
    for name, cert in report["certificates"].items():
        assert cli.verify_certificate_document(cert) == "diverges", name


def test_records_sorted_by_n():
    doc = cli.certificate_document(lc.certify_divergence("hilbert", (3, 8)))
    ns = [r["n"] for r in cli.document_records(doc)]
    assert ns == sorted(ns)
    assert ns[:3] == [8, 16, 24]
