"""Command-line interface: output formats, manifests, reproducibility, and
exit codes."""
import csv
import io
import json
import math

import pytest

from luemax import __version__
from luemax.cli import main
from luemax.errors import (ConditioningError, ConvergenceError, DomainError,
                           LuemaxError, PrecisionError)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0][0] == "manifest"
    manifest = json.loads(rows[0][1])
    columns = rows[1]
    records = [dict(zip(columns, row)) for row in rows[2:]]
    return manifest, records


def test_exact_closed_form(capsys):
    code, out, err = run_cli(capsys, "exact", "--n", "1", "--gamma", "0",
                             "--alpha", "0.25")
    assert code == 0 and err == ""
    manifest, records = parse_csv(out)
    assert manifest["subcommand"] == "exact"
    assert manifest["version"] == __version__
    row = records[0]
    assert float(row["t"]) == 1.0
    assert abs(float(row["ln_p"]) - math.log(1.0 - math.exp(-1.0))) < 1e-13
    assert abs(float(row["p"]) - (1.0 - math.exp(-1.0))) < 1e-13


def test_exact_methods_agree(capsys):
    _, out_p, _ = run_cli(capsys, "exact", "--n", "8", "--gamma", "0.5",
                          "--t", "5", "--method", "projection")
    _, out_h, _ = run_cli(capsys, "exact", "--n", "8", "--gamma", "0.5",
                          "--t", "5", "--method", "hankel")
    lnp_p = float(parse_csv(out_p)[1][0]["ln_p"])
    lnp_h = float(parse_csv(out_h)[1][0]["ln_p"])
    assert abs(lnp_p - lnp_h) < 1e-10


def test_exact_small_t_slope(capsys):
    _, out, _ = run_cli(capsys, "exact", "--n", "2", "--gamma", "0",
                        "--t", "1e-4,1e-3", "--method", "hankel")
    _, records = parse_csv(out)
    lnp = [float(r["ln_p"]) for r in records]
    slope = (lnp[1] - lnp[0]) / math.log(10.0)
    assert abs(slope - 4.0) < 1e-2  # n(n+gamma) = 4


def test_exact_requires_exactly_one_grid(capsys):
    code, _, err = run_cli(capsys, "exact", "--n", "2")
    assert code == 2 and "error" in err
    code, _, err = run_cli(capsys, "exact", "--n", "2", "--alpha", "0.5",
                           "--t", "1.0")
    assert code == 2 and "error" in err


def test_asympt_airy_tail(capsys):
    code, out, _ = run_cli(capsys, "asympt", "--formula", "airy-tail",
                           "--s", "10")
    assert code == 0
    _, records = parse_csv(out)
    assert abs(float(records[0]["value"]) - (-83.757696)) < 5e-6
    assert records[0]["remainder"] == "s^-3"


def test_asympt_lemma_value(capsys):
    _, out, _ = run_cli(capsys, "asympt", "--formula", "lemma", "--n", "10",
                        "--gamma", "0", "--alpha", "0.5")
    _, records = parse_csv(out)
    assert abs(float(records[0]["value"]) - (50.0 + 1.0 / 6.0)) < 1e-10
    assert "n^-2" in records[0]["remainder"]


def test_asympt_theorem_and_small_alpha_rows(capsys):
    _, out, _ = run_cli(capsys, "asympt", "--formula", "theorem", "--n", "60",
                        "--gamma", "0", "--alpha", "0.6")
    _, records = parse_csv(out)
    assert "n^-2" in records[0]["remainder"]
    assert float(records[0]["value"]) < 0.0
    _, out, _ = run_cli(capsys, "asympt", "--formula", "small-alpha",
                        "--n", "3", "--gamma", "1", "--alpha", "0.001")
    _, records = parse_csv(out)
    assert records[0]["remainder"] == "n alpha"
    assert float(records[0]["value"]) < 0.0


def test_compare_lemma_convergence_order(capsys):
    code, out, _ = run_cli(capsys, "compare", "--n-list", "20,40,80",
                           "--gamma", "1", "--alpha", "0.5")
    assert code == 0
    _, records = parse_csv(out)
    assert records[0]["order"] == ""
    orders = [float(r["order"]) for r in records[1:]]
    assert all(1.6 < o < 2.4 for o in orders), orders
    diffs = [float(r["abs_diff"]) for r in records]
    assert diffs[0] > diffs[1] > diffs[2]


def test_compare_soft_edge_chain(capsys):
    code, out, _ = run_cli(capsys, "compare", "--n-list", "50,100,200",
                           "--gamma", "0", "--s", "2")
    assert code == 0
    _, records = parse_csv(out)
    refs = {r["airy_logdet"] for r in records}
    assert len(refs) == 1
    diffs = [float(r["abs_diff"]) for r in records]
    assert diffs[0] > diffs[1] > diffs[2]


def test_painleve_residual_table(capsys):
    code, out, _ = run_cli(capsys, "painleve", "--n", "8", "--gamma", "0",
                           "--t", "2,5,10")
    assert code == 0
    _, records = parse_csv(out)
    assert [float(r["t"]) for r in records] == [2.0, 5.0, 10.0]
    for r in records:
        assert float(r["sigma_form_rel"]) < 1e-5
        assert float(r["pv_rel"]) < 1e-4
        assert float(r["bridge_rel"]) < 1e-4


def test_mc_report_and_dump(capsys, tmp_path):
    dump = tmp_path / "samples.csv"
    code, out, _ = run_cli(capsys, "mc", "--n", "3", "--gamma", "0.7",
                           "--samples", "20000", "--seed", "11",
                           "--dump", str(dump))
    assert code == 0
    manifest, records = parse_csv(out)
    assert manifest["seed"] == 11
    row = records[0]
    assert row["within_band"] == "true"
    assert float(row["ks_distance"]) <= float(row["band_99"])
    assert dump.read_text().startswith("# n=3 gamma=0.69999999999999996")


def test_tw_constant_report(capsys):
    code, out, _ = run_cli(capsys, "tw", "--s", "6,8,10")
    assert code == 0
    _, records = parse_csv(out)
    row = records[0]
    assert row["s_values"] == "6,8,10"
    assert abs(float(row["c0"]) - float(row["reference"])) < 1e-2
    assert float(row["abs_error"]) == abs(float(row["c0"])
                                          - float(row["reference"]))


def test_json_format_matches_csv(capsys):
    _, out_csv, _ = run_cli(capsys, "exact", "--n", "2", "--gamma", "0.5",
                            "--t", "1,4")
    _, out_json, _ = run_cli(capsys, "exact", "--n", "2", "--gamma", "0.5",
                             "--t", "1,4", "--format", "json")
    doc = json.loads(out_json)
    assert doc["columns"] == ["alpha", "t", "ln_p", "p"]
    assert doc["manifest"]["subcommand"] == "exact"
    _, records = parse_csv(out_csv)
    for row, record in zip(doc["rows"], records):
        for value, column in zip(row, doc["columns"]):
            assert value == float(record[column])


def test_output_file_reruns_are_byte_identical(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "7")
    first = tmp_path / "a.csv"
    second = tmp_path / "b.csv"
    for target in (first, second):
        code, out, _ = run_cli(capsys, "exact", "--n", "3", "--gamma", "1",
                               "--t", "2,5", "--out", str(target))
        assert code == 0 and out == ""
    assert first.read_bytes() == second.read_bytes()
    manifest, _ = parse_csv(first.read_text())
    assert manifest["timestamp"] == "1970-01-01T00:00:07Z"


def test_thread_pool_preserves_row_order(capsys, monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "7")
    _, serial, _ = run_cli(capsys, "exact", "--n", "4", "--gamma", "0.5",
                           "--t", "1,2,3,4,5,6")
    monkeypatch.setenv("LUEMAX_THREADS", "4")
    _, pooled, _ = run_cli(capsys, "exact", "--n", "4", "--gamma", "0.5",
                           "--t", "1,2,3,4,5,6")
    assert pooled == serial


def test_invalid_thread_count_is_a_domain_error(capsys, monkeypatch):
    monkeypatch.setenv("LUEMAX_THREADS", "abc")
    code, _, err = run_cli(capsys, "exact", "--n", "1", "--t", "1")
    assert code == 2 and "LUEMAX_THREADS" in err


def test_domain_errors_exit_with_code_two(capsys):
    code, _, err = run_cli(capsys, "exact", "--n", "0", "--t", "1")
    assert code == 2 and err.startswith("luemax: error:")
    code, _, err = run_cli(capsys, "exact", "--n", "20", "--t", "1",
                           "--method", "hankel")
    assert code == 2 and "error" in err


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert __version__ in capsys.readouterr().out


def test_error_exit_code_contract():
    assert LuemaxError("x").exit_code == 1
    assert DomainError("x").exit_code == 2
    assert ConditioningError("x").exit_code == 3
    assert PrecisionError("x").exit_code == 3
    assert ConvergenceError("x").exit_code == 4
