"""CLI: payload shapes, exit codes, and determinism."""

import io
import json

from tropmoduli.cli import EXIT_ENVELOPE, EXIT_OK, EXIT_USAGE, run


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def invoke_json(*argv):
    code, out, err = invoke(*argv)
    return code, json.loads(out), err


def test_enumerate_n3():
    code, report, _ = invoke_json("enumerate", "--n", "3")
    assert code == EXIT_OK
    assert report["schema"] == 1
    assert report["payload"]["f_vector"] == [1]


def test_enumerate_n5_payload():
    code, report, _ = invoke_json("enumerate", "--n", "5")
    assert code == EXIT_OK
    assert report["payload"]["f_vector"] == [1, 10, 15]
    assert report["payload"]["strata"]["1"][0] == [[2, 3]]


def test_enumerate_dim_filter_and_csv():
    code, out, _ = invoke("enumerate", "--n", "4", "--dim", "1", "--format", "csv")
    assert code == EXIT_OK
    assert out.splitlines() == ["dim,splits", "1,2 3", "1,2 4", "1,3 4"]


def test_enumerate_envelope_exit():
    code, _, err = invoke("enumerate", "--n", "9")
    assert code == EXIT_ENVELOPE
    assert "envelope" in err


def test_enumerate_bad_dim_is_usage_error():
    code, _, _ = invoke("enumerate", "--n", "4", "--dim", "7")
    assert code == EXIT_USAGE


def test_bad_usage_exit():
    code, _, _ = invoke("enumerate")
    assert code == EXIT_USAGE
    code, _, _ = invoke("no-such-command")
    assert code == EXIT_USAGE


def test_complex_json():
    code, report, _ = invoke_json("complex", "--n", "4")
    assert code == EXIT_OK
    assert report["payload"]["f_vector"] == [1, 3]
    assert len(report["payload"]["cells"]) == 4


def test_complex_dot():
    code, out, _ = invoke("complex", "--n", "4", "--dot", "hasse")
    assert code == EXIT_OK
    assert out.startswith("digraph hasse {")
    code, out, _ = invoke("complex", "--n", "4", "--dot", "compat")
    assert code == EXIT_OK
    assert out.startswith("graph compat {")


def test_aut_n4():
    code, report, _ = invoke_json("aut", "--n", "4")
    assert code == EXIT_OK
    assert report["verdict"] == "PASS"
    assert report["payload"]["order"] == 6
    assert report["payload"]["expected"] == 6


def test_aut_n5_both_methods():
    code, report, _ = invoke_json("aut", "--n", "5", "--method", "both")
    assert code == EXIT_OK
    payload = report["payload"]
    assert payload["order"] == 120
    assert payload["methods_agree"]
    assert payload["sigma_of_generator"]
    assert all(s is not None for s in payload["sigma_of_generator"])


def test_aut_poset_envelope():
    code, _, _ = invoke("aut", "--n", "7", "--method", "poset")
    assert code == EXIT_ENVELOPE


def test_count_formula():
    code, report, _ = invoke_json("count", "--n", "5", "--check", "formula")
    assert code == EXIT_OK
    assert report["verdict"] == "PASS"
    assert report["payload"]["strata"] == 26
    assert report["payload"]["mismatches"] == []
    assert report["payload"]["star_mismatches"] == []


def test_count_formula_requires_n():
    code, _, _ = invoke("count", "--check", "formula")
    assert code == EXIT_USAGE


def test_count_lemma():
    code, report, _ = invoke_json("count", "--check", "lemma", "--bound", "12")
    assert code == EXIT_OK
    assert report["verdict"] == "PASS"
    assert report["payload"]["violations"] == []
    assert report["payload"]["pairs_checked"] > 0


def test_genus2_verify():
    code, report, _ = invoke_json("genus2", "--verify")
    assert code == EXIT_OK
    payload = report["payload"]
    assert payload["cells"] == 7
    assert payload["aut_order"] == 1
    assert payload["theta_edge_group_order"] == 6
    assert payload["verdict"] == "PASS"
    assert "figure_eight" in payload["swap_rejection"]
    assert "lollipop" in payload["swap_rejection"]


def test_payload_determinism():
    _, first, _ = invoke("enumerate", "--n", "5")
    _, second, _ = invoke("enumerate", "--n", "5")
    a, b = json.loads(first), json.loads(second)
    a.pop("wall_time_s"), b.pop("wall_time_s")
    assert a == b


def test_module_execution():
    import subprocess
    import sys

    proc = subprocess.run(
        [sys.executable, "-m", "tropmoduli", "enumerate", "--n", "4"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == EXIT_OK
    assert json.loads(proc.stdout)["payload"]["f_vector"] == [1, 3]


def test_report_small():
    code, report, err = invoke_json("report", "--max-n", "4")
    assert code == EXIT_OK
    assert report["verdict"] == "PASS"
    names = [c["name"] for c in report["payload"]["checks"]]
    assert "aut n=4" in names and "genus2" in names
    assert all(c["verdict"] == "PASS" for c in report["payload"]["checks"])
    assert "PASS" in err
