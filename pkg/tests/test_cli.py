"""Command line dispatch, report envelopes, output formats, exit codes."""

import json
import math
import subprocess
import sys

import pytest

from fkdet.cli import main
from fkdet.laurent import GroupRingMatrix, matrix_to_json, parse_polynomial
from fkdet.lehmer_scan import DEFAULT_ONE_THRESHOLD

LEHMER = "z^10 + z^9 - z^7 - z^6 - z^5 - z^4 - z^3 + z + 1"


def run_cli(capsys, *argv):
    # argparse-level usage failures surface as SystemExit(2); handler-level
    # failures return their status, and both carry JSON on stderr
    try:
        code = main(list(argv))
    except SystemExit as exc:
        code = exc.code
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == 0, err
    assert err == ""
    return json.loads(out)


def error_of(capsys, *argv):
    code, out, err = run_cli(capsys, *argv)
    assert out == ""
    return code, json.loads(err)["error"]


# ---------------------------------------------------------------------------
# report envelope


def test_mahler_report_envelope(capsys):
    blob = run_json(capsys, "mahler", "--poly", "z-2")
    assert blob["schema_version"] == 1
    assert blob["tool"]["name"] == "fkdet"
    assert blob["tool"]["version"]
    assert blob["config"]["subcommand"] == "mahler"
    assert blob["config"]["poly"] == "z-2"
    assert blob["config"]["poly_file"] is None
    assert blob["config"]["method"] == "auto"
    result = blob["result"]
    assert result["polynomial"] == "-2 + z"
    assert result["resolved_method"] == "jensen"
    assert result["measure"]["value"] == pytest.approx(2.0, abs=1e-12)


def test_json_reports_are_byte_identical(capsys):
    argv = ("mahler", "--poly", LEHMER)
    code, first, _ = run_cli(capsys, *argv)
    assert code == 0
    code, second, _ = run_cli(capsys, *argv)
    assert code == 0
    assert first == second
    assert json.loads(first)["result"]["measure"]["value"] == pytest.approx(
        1.176280818259917, abs=5e-6
    )


def test_out_file_matches_stdout(capsys, tmp_path):
    argv = ("exact-constants", "--cyclic", "3")
    _, streamed, _ = run_cli(capsys, *argv)
    path = tmp_path / "report.json"
    code, out, _ = run_cli(capsys, *argv, "--out", str(path))
    assert code == 0
    assert out == ""
    assert path.read_text(encoding="utf-8") == streamed


def test_version_flag(capsys):
    code, out, _ = run_cli(capsys, "--version")
    assert code == 0
    assert out.startswith("fkdet ")


# ---------------------------------------------------------------------------
# mahler


def test_mahler_poly_file(capsys, tmp_path):
    path = tmp_path / "lehmer.txt"
    path.write_text(LEHMER, encoding="utf-8")
    blob = run_json(capsys, "mahler", "--poly-file", str(path))
    assert blob["config"]["poly"] is None
    assert blob["config"]["poly_file"] == str(path)
    assert blob["result"]["measure"]["value"] == pytest.approx(
        1.176280818259917, abs=5e-6
    )


def test_mahler_multivariate_methods(capsys):
    auto = run_json(capsys, "mahler", "--poly", "z1 + z2 + 1")
    assert auto["result"]["resolved_method"] == "boyd_lawton"
    assert auto["result"]["measure"]["value"] == pytest.approx(1.3813564445, abs=1e-2)
    quad = run_json(
        capsys, "mahler", "--poly", "z1 + z2 + 1", "--method", "quadrature",
        "--grid", "64",
    )
    assert quad["result"]["measure"]["method"] == "quadrature"
    assert quad["result"]["measure"]["value"] == pytest.approx(1.3813564445, abs=5e-2)


def test_mahler_text_format(capsys):
    code, out, _ = run_cli(capsys, "mahler", "--poly", "z-2", "--format", "text")
    assert code == 0
    assert out.startswith("M = 2.0")


# ---------------------------------------------------------------------------
# fkdet-zd


def test_fkdet_zd_inline(capsys):
    blob = run_json(capsys, "fkdet-zd", "--poly", "z - 2")
    assert blob["result"]["q"] == 0
    assert blob["result"]["value"]["value"] == pytest.approx(2.0, abs=1e-12)
    assert "D1" not in blob["result"]


def test_fkdet_zd_trace_and_kernel_variant(capsys, tmp_path):
    m = GroupRingMatrix(
        [
            [parse_polynomial("z - 2"), parse_polynomial("1")],
            [parse_polynomial("0"), parse_polynomial("z - 3")],
        ]
    )
    path = tmp_path / "matrix.json"
    path.write_text(json.dumps(matrix_to_json(m)), encoding="utf-8")
    blob = run_json(capsys, "fkdet-zd", "--matrix-file", str(path), "--trace")
    assert blob["result"]["q"] == 0
    assert blob["result"]["value"]["value"] == pytest.approx(6.0, abs=1e-9)
    assert "detD1" in blob["result"] and "D2" in blob["result"]
    other = run_json(
        capsys, "fkdet-zd", "--matrix-file", str(path), "--kernel-variant", "reversed"
    )
    assert other["result"]["value"]["value"] == pytest.approx(6.0, abs=1e-9)


# ---------------------------------------------------------------------------
# fkdet-finite


def test_fkdet_finite_element(capsys):
    blob = run_json(capsys, "fkdet-finite", "--cyclic", "2", "--elem", "t+2")
    assert blob["result"]["group"] == {"kind": "cyclic", "order": 2}
    assert blob["result"]["input"]["text"] == "t + 2"
    assert blob["result"]["input"]["coeffs"] == [2, 1]
    assert blob["result"]["kernel_dimension"] == "0"
    assert blob["result"]["value"]["exact"] == {"base": 3, "exponent": "1/2"}


def test_fkdet_finite_coeffs_product_group(capsys):
    # the sum of all four group elements of Z/2 x Z/2: kernel dimension 3/4
    # and Gram pseudo-determinant 16^(1/8) = sqrt(2)
    blob = run_json(capsys, "fkdet-finite", "--cyclic", "2,2", "--coeffs", "1,1,1,1")
    assert blob["result"]["group"]["order"] == 4
    assert blob["result"]["kernel_dimension"] == "3/4"
    assert blob["result"]["value"]["exact"] == {"base": 2, "exponent": "1/2"}


def test_fkdet_finite_matrix_file(capsys, tmp_path):
    path = tmp_path / "row.json"
    path.write_text(
        json.dumps({"rows": 1, "cols": 2, "entries": [[1], [1]]}), encoding="utf-8"
    )
    blob = run_json(capsys, "fkdet-finite", "--cyclic", "1", "--matrix-file", str(path))
    assert blob["result"]["input"]["kind"] == "matrix"
    assert blob["result"]["value"]["exact"] == {"base": 2, "exponent": "1/2"}


def test_fkdet_finite_group_file(capsys, tmp_path):
    path = tmp_path / "z2.json"
    path.write_text(
        json.dumps({"table": [[0, 1], [1, 0]], "identity": 0}), encoding="utf-8"
    )
    blob = run_json(
        capsys, "fkdet-finite", "--group-file", str(path), "--coeffs", "2,1"
    )
    assert blob["result"]["value"]["exact"] == {"base": 3, "exponent": "1/2"}


# ---------------------------------------------------------------------------
# lehmer-scan


def test_scan_cyclic_json(capsys):
    blob = run_json(
        capsys, "lehmer-scan", "--cyclic", "2", "--coeff-bound", "2",
        "--variant", "lambda_w_1",
    )
    assert blob["config"]["one_threshold"] == DEFAULT_ONE_THRESHOLD
    result = blob["result"]
    assert result["infimum_found"]["exact"] == {"base": 3, "exponent": "1/2"}
    assert result["witness"]["text"] == "t + 2"
    assert result["count_examined"] == 8
    assert result["budget_exceeded"] is False


def test_scan_box_golden_ratio(capsys):
    blob = run_json(
        capsys, "lehmer-scan", "--box", "2", "--support", "3",
        "--variant", "lambda_1",
    )
    golden = (1 + math.sqrt(5)) / 2
    assert blob["result"]["infimum_found"]["value"] == pytest.approx(golden, abs=1e-9)
    assert blob["result"]["witness"]["text"] == "1 + z - z^2"


def test_scan_threads_do_not_change_bytes(capsys):
    argv = ("lehmer-scan", "--box", "4", "--variant", "lambda_1")
    _, lone, _ = run_cli(capsys, *argv, "--threads", "1")
    _, pooled, _ = run_cli(capsys, *argv, "--threads", "3")
    lone, pooled = json.loads(lone), json.loads(pooled)
    assert lone["result"] == pooled["result"]


def test_scan_survey_csv(capsys):
    code, out, _ = run_cli(
        capsys, "lehmer-scan", "--cyclic", "3", "--coeff-bound", "2",
        "--variant", "lambda_1", "--survey", "--format", "csv",
    )
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "witness,value"
    assert any(line.startswith('"t + 1"') for line in lines[1:])


def test_scan_text(capsys):
    code, out, _ = run_cli(
        capsys, "lehmer-scan", "--cyclic", "1", "--coeff-bound", "3",
        "--variant", "lambda_w_1", "--format", "text",
    )
    assert code == 0
    assert "infimum = 2.0" in out
    assert "witness = 2" in out


# ---------------------------------------------------------------------------
# approx-chain


def test_chain_range_csv(capsys):
    code, out, _ = run_cli(
        capsys, "approx-chain", "--poly", "z-2", "--chain", "2..6", "--format", "csv"
    )
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "n,value"
    for line in lines[1:]:
        n_text, value_text = line.split(",")
        n = int(n_text)
        assert float(value_text) == pytest.approx((2**n - 1) ** (1 / n), abs=1e-12)


def test_chain_json_flavors(capsys):
    blob = run_json(capsys, "approx-chain", "--poly", "z-2", "--doubling", "2:3")
    assert blob["result"]["chain"]["nested"] is True
    assert blob["result"]["limsup_ok"] is True
    assert blob["result"]["limit_reference"]["value"] == pytest.approx(2.0, abs=1e-12)
    listed = run_json(capsys, "approx-chain", "--poly", "z-2", "--chain", "2,4,8")
    assert listed["result"]["chain"]["nested"] is True
    ragged = run_json(capsys, "approx-chain", "--poly", "z-2", "--chain", "2,3")
    assert ragged["result"]["chain"]["nested"] is False
    primed = run_json(capsys, "approx-chain", "--poly", "z-2", "--primes", "3")
    assert [s["moduli"] for s in primed["result"]["stages"]] == [[2], [3], [5]]


def test_chain_default_is_doubling(capsys):
    blob = run_json(capsys, "approx-chain", "--poly", "z-2")
    assert [s["moduli"] for s in blob["result"]["stages"]] == [
        [2], [4], [8], [16], [32],
    ]
    assert blob["config"]["tolerance"] == 1e-6


# ---------------------------------------------------------------------------
# exact-constants and trace-check


def test_exact_constants_json(capsys):
    blob = run_json(capsys, "exact-constants", "--cyclic", "2", "--torsion-order", "3")
    constants = blob["result"]["constants"]
    assert constants["lambda_w_1"]["exact"] == {"base": 3, "exponent": "1/2"}
    assert constants["lambda"]["lower"] == {"base": 2, "exponent": "1/4"}
    assert blob["result"]["torsion_bound"]["value"] == pytest.approx(2 ** (1 / 3))


def test_trace_check_json(capsys):
    blob = run_json(
        capsys, "trace-check", "--poly", "z + z^-1", "--degree", "2", "--moduli", "5"
    )
    assert blob["result"]["ok"] is True
    assert blob["result"]["traces_zd"] == ["0", "2"]
    assert blob["result"]["norm_bound"] == 2.0
    bad = run_json(
        capsys, "trace-check", "--poly", "z + z^-1", "--degree", "2", "--moduli", "2"
    )
    assert bad["result"]["ok"] is False
    assert bad["result"]["least_multiple"] == [4]


# ---------------------------------------------------------------------------
# exit codes and structured errors


def test_domain_errors_exit_1(capsys, tmp_path):
    code, err = error_of(capsys, "mahler", "--poly", "0")
    assert code == 1
    assert err["kind"] == "domain"
    # unreadable input file
    code, err = error_of(capsys, "fkdet-zd", "--matrix-file", str(tmp_path / "no.json"))
    assert code == 1
    # bad group table
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"table": [[0, 1], [0, 1]], "identity": 0}))
    code, err = error_of(capsys, "fkdet-finite", "--group-file", str(path),
                         "--coeffs", "1,1")
    assert code == 1
    assert "permutation" in err["message"]
    # element text over a non-cyclic table group
    path2 = tmp_path / "z2table.json"
    path2.write_text(json.dumps({"table": [[0, 1], [1, 0]], "identity": 0}))
    code, err = error_of(capsys, "fkdet-finite", "--group-file", str(path2),
                         "--elem", "t+1")
    assert code == 1
    # jensen demanded for a two variable polynomial
    code, err = error_of(capsys, "mahler", "--poly", "z1 + z2", "--method", "jensen")
    assert code == 1
    # moduli arity mismatch
    code, err = error_of(capsys, "trace-check", "--poly", "z", "--degree", "1",
                         "--moduli", "2,3")
    assert code == 1
    # torsion bound needs m >= 3
    code, err = error_of(capsys, "exact-constants", "--cyclic", "2",
                         "--torsion-order", "2")
    assert code == 1


def test_config_errors_exit_2(capsys):
    code, err = error_of(capsys, "mahler", "--poly", "z", "--format", "csv")
    assert code == 2
    assert err["kind"] == "config"
    code, err = error_of(capsys, "lehmer-scan", "--cyclic", "2", "--variant", "lambda",
                         "--format", "csv")
    assert code == 2
    code, err = error_of(capsys, "lehmer-scan", "--cyclic", "2", "--variant", "lambda",
                         "--shape", "1")
    assert code == 2
    code, err = error_of(capsys, "fkdet-finite", "--cyclic", "x", "--coeffs", "1")
    assert code == 2
    code, err = error_of(capsys, "approx-chain", "--poly", "z", "--chain", "2..x")
    assert code == 2


def test_argparse_failures_exit_2(capsys):
    code, err = error_of(capsys, "mahler")  # missing required input
    assert code == 2
    assert err["kind"] == "config"
    code, err = error_of(capsys, "no-such-command")
    assert code == 2
    code, err = error_of(capsys)
    assert code == 2


def test_module_and_script_entry_points(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "fkdet", "mahler", "--poly", "z-2"],
        capture_output=True, text=True, timeout=60,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["measure"]["value"] == 2.0
    script = subprocess.run(
        ["fkdet", "--version"], capture_output=True, text=True, timeout=60
    )
    assert script.returncode == 0
    assert script.stdout.startswith("fkdet ")
