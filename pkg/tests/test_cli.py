import csv
import io
import json
import os
import subprocess
import sys

import mpmath
import pytest

from levyint.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return [json.loads(line) for line in text.splitlines()]


def test_eval_cauchy(capsys):
    code, out, _ = run(capsys, "eval", "--alpha", "1", "--z", "1", "--digits", "20")
    assert code == 0
    (rec,) = rows(out)
    assert list(rec) == ["alpha_p", "alpha_q", "arg", "value", "err", "method", "terms"]
    assert rec["value"] == 0.5
    assert (rec["alpha_p"], rec["alpha_q"]) == (1, 1)


def test_eval_gaussian_to_printed_precision(capsys):
    code, out, _ = run(capsys, "eval", "--alpha", "2", "--z", "3", "--digits", "30")
    (line,) = out.splitlines()
    printed = line.split('"value": ')[1].split(",")[0]
    m = mpmath.mp.clone()
    m.dps = 40
    want = m.sqrt(m.pi) / 2 * m.exp(-m.mpf(9) / 4)
    assert abs(m.mpf(printed) - want) <= m.mpf(10) ** -24 * want


def test_asym_and_quad_agree(capsys):
    _, out_a, _ = run(capsys, "eval", "--alpha", "4", "--z", "10", "--method", "asym", "--digits", "20")
    _, out_q, _ = run(capsys, "eval", "--alpha", "4", "--z", "10", "--method", "quad", "--digits", "20")
    a, q = rows(out_a)[0], rows(out_q)[0]
    assert a["method"] == "Asym" and q["method"] == "Quad"
    assert abs(a["value"] - q["value"]) <= a["err"] + q["err"]


def test_decimal_alpha_is_echoed_as_rational(capsys):
    _, out, _ = run(capsys, "eval", "--alpha", "1.5", "--z", "0.5", "--digits", "20")
    rec = rows(out)[0]
    assert (rec["alpha_p"], rec["alpha_q"]) == (3, 2)


def test_json_round_trip_keeps_digits(capsys):
    _, out, _ = run(capsys, "eval", "--alpha", "3", "--z", "2", "--digits", "40")
    text = out.split('"value": ')[1].split(",")[0]
    assert len(text.lstrip("-0.").replace(".", "")) >= 30
    assert json.loads(out)["value"] == float(text)


def test_csv_header_matches_json_keys(capsys):
    _, out, _ = run(capsys, "eval", "--alpha", "3", "--z", "1", "2", "--format", "csv", "--digits", "20")
    table = list(csv.reader(io.StringIO(out)))
    assert table[0] == ["alpha_p", "alpha_q", "arg", "value", "err", "method", "terms"]
    assert len(table) == 3


def test_compare_rows_agree(capsys):
    code, out, _ = run(capsys, "compare", "--alpha", "4", "--z", "1", "9", "--digits", "20")
    assert code == 0
    recs = rows(out)
    assert {r["method"] for r in recs} == {"Quad", "Taylor", "Hyper", "Asym"}
    assert all(r["agree"] for r in recs)


def test_density_ej_moments_asym_table(capsys):
    code, out, _ = run(capsys, "density", "--alpha", "2", "--d", "3", "--r", "0", "--digits", "20")
    assert code == 0 and abs(rows(out)[0]["value"] - (4 * mpmath.pi) ** -1.5) < 1e-14
    code, out, _ = run(capsys, "ej", "--alpha", "2", "--a", "0.5", "--digits", "20")
    assert code == 0 and all(r["agree"] for r in rows(out))
    code, out, _ = run(capsys, "moments", "--alpha", "4", "--m-max", "2", "--digits", "20")
    assert code == 0
    recs = rows(out)
    assert [r["predicted"] for r in recs] == [1, 0, -24]
    code, out, _ = run(capsys, "asym-table", "--alpha", "6", "--z", "14", "--digits", "20")
    assert code == 0 and out


def test_zeros_and_waring(capsys):
    code, out, _ = run(capsys, "zeros", "--alpha", "4", "--z-max", "7", "--digits", "20")
    recs = rows(out)
    assert code == 0 and recs[-1]["positive_zeros"] == 2 and recs[-1]["meets_floor"]
    code, out, _ = run(capsys, "waring", "--k", "2", "--s", "2", "--N", "30", "--counts", "--digits", "20")
    recs = rows(out)
    assert code == 0 and recs[5]["count"] == 8 and recs[25]["count"] == 12 and recs[-1]["pass"]


def test_kernel_grid_csv(capsys):
    code, out, _ = run(capsys, "kernel", "--x", "0", "1", "2", "--y", "-1", "-1", "1", "--format", "csv", "--digits", "20")
    table = list(csv.reader(io.StringIO(out)))
    assert code == 0 and table[0] == ["x", "y", "value"] and len(table) == 3


def test_evaluator_error_exit_code(capsys):
    code, _, err = run(capsys, "eval", "--alpha", "4", "--z", "5", "--method", "asym", "--digits", "20")
    assert code == 2 and "OutsideAsymptoticRegime" in err
    code, _, err = run(capsys, "eval", "--alpha", "1/0", "--z", "1")
    assert code == 2 and "DomainError" in err


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as info:
        main(["eval", "--alpha", "2"])
    assert info.value.code == 2


def test_module_entry_point_env_digits_and_determinism():
    env = dict(os.environ, LEVYINT_DIGITS="18")
    cmd = [sys.executable, "-m", "levyint", "eval", "--alpha", "3/2", "--z", "2"]
    a = subprocess.run(cmd, capture_output=True, env=env, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, env=env, check=True).stdout
    assert a == b
    value = a.decode().split('"value": ')[1].split(",")[0]
    assert len(value.lstrip("-0.").replace(".", "")) == 13


@pytest.mark.parametrize("argv", [["compare", "--alpha", "3", "--z", "2", "12"], ["ej", "--alpha", "3/2", "--a", "1"]])
def test_more_digits_still_passes(capsys, argv):
    for digits in ("20", "40"):
        code, out, _ = run(capsys, *argv, "--digits", digits)
        assert code == 0 and all(r["agree"] for r in rows(out))
