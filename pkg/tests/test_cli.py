import csv
import io
import json
import subprocess
import sys

import pytest

from sinefold import cli, digits, equidist, norms, pte, series, signs, trigprod, wallis

SPEC_OPERATIONS = {
    digits: ["bits", "digit_sum", "thue_morse", "signed_digits", "u_value"],
    series: ["product_poly", "sum_poly", "check_corollary", "check_step_identity",
             "check_general_identity"],
    trigprod: ["eval_product", "cos_closed_form_check", "check_identity", "fourier_expansion"],
    norms: ["sup_norm", "x0_witness", "l1_norm", "l2_norm", "admissible", "l1_upper_bound_check",
            "rho_estimate"],
    wallis: ["sin_moment", "central_count", "moment_recurrence_check", "wallis_partial"],
    pte: ["multigrade_residuals", "prouhet_partition", "multigrade_from_weights"],
    equidist: ["nearest_int_norm", "weyl_sum", "product_identity_check", "zero_classifier",
               "pisot_power_norms", "star_discrepancy", "equidist_experiment"],
    signs: ["sign_word_analytic", "morphism_word", "splitting_check"],
}

SMALL_RUNS = [
    ["verify", "--n", "4", "--draws", "3"],
    ["norms", "--n-max", "3"],
    ["norms", "--r", "4", "--n-max", "2"],
    ["norms", "--rho", "--n-min", "6", "--n-max", "9"],
    ["norms", "--lambda", "1,3,9"],
    ["wallis", "--m-max", "3", "--count-max", "4", "--recurrence", "5", "--partials", "10"],
    ["pte", "--lambda", "1,2,4", "--random", "5", "--prouhet-max", "4"],
    ["equidist", "--n", "6", "--terms", "64", "--identity-checks", "5", "--pisot-q-max", "20"],
    ["signs", "--n", "5", "--splitting", "4"],
]


def run_main(argv, capsys):
    status = cli.main(argv)
    return status, capsys.readouterr().out


def test_dispatch_table_lists_every_operation():
    listed = {f for fs in cli.DISPATCH.values() for f in fs}
    for module, names in SPEC_OPERATIONS.items():
        for name in names:
            assert getattr(module, name) in listed, f"{module.__name__}.{name}"
    assert set(cli.DISPATCH) == set(cli.SUBCOMMANDS)


def test_every_operation_is_reached(monkeypatch, capsys):
    called = set()
    for module, names in SPEC_OPERATIONS.items():
        for name in names:
            original = getattr(module, name)

            def wrapper(*a, _orig=original, _key=f"{module.__name__}.{name}", **kw):
                called.add(_key)
                return _orig(*a, **kw)

            monkeypatch.setattr(module, name, wrapper)
    norms._sup_search.cache_clear()
    for argv in SMALL_RUNS:
        status, _ = run_main(argv + ["--json"], capsys)
        assert status == 0, argv
    expected = {f"{m.__name__}.{n}" for m, names in SPEC_OPERATIONS.items() for n in names}
    assert expected - called == set()


@pytest.mark.parametrize("argv", SMALL_RUNS, ids=lambda a: a[0] + ":" + "".join(a[1:3]))
def test_small_runs_pass_and_emit_schema(argv, capsys):
    status, out = run_main(argv + ["--json"], capsys)
    assert status == 0
    payload = json.loads(out)
    assert payload["schema_version"] == 1
    assert payload["passed"] is True


def test_verify_example(capsys):
    status, out = run_main(["verify", "--identity", "all", "--n", "12", "--seed", "7", "--json"],
                           capsys)
    assert status == 0
    rows = json.loads(out)["reports"]
    names = {r["identity"] for r in rows}
    assert set(trigprod.IDENTITIES) <= names
    assert {"step", "general", "corollary_plus", "corollary_minus"} <= names
    assert all(r["samples"] >= 100 for r in rows if r["identity"] in trigprod.IDENTITIES)


def test_rho_example(capsys):
    status, out = run_main(["norms", "--rho", "--n-min", "8", "--n-max", "14", "--json"], capsys)
    assert status == 0
    rho = json.loads(out)["rho"]
    assert norms.RHO_LOW < rho["rho_hat"] < norms.RHO_HIGH


def test_equidist_example(capsys):
    status, out = run_main(["equidist", "--theta", "golden", "--x", "1", "--n", "16", "--json"],
                           capsys)
    assert status == 0
    exp = json.loads(out)["experiment"]
    assert exp["star_discrepancy"] > 0.05
    assert exp["classification"]["verdict"] in {v.value for v in equidist.Verdict}


def test_same_seed_same_bytes(capsys):
    argv = ["verify", "--n", "6", "--draws", "5", "--seed", "99", "--json"]
    _, a = run_main(argv, capsys)
    _, b = run_main(argv, capsys)
    assert a == b
    _, c = run_main(argv[:-2] + ["100", "--json"], capsys)
    assert c != a


def test_thread_count_does_not_change_output(monkeypatch, capsys):
    argv = ["pte", "--random", "20", "--seed", "5", "--json"]
    monkeypatch.setenv("SINEFOLD_THREADS", "1")
    _, a = run_main(argv, capsys)
    monkeypatch.setenv("SINEFOLD_THREADS", "4")
    _, b = run_main(argv, capsys)
    assert a == b
    monkeypatch.setenv("SINEFOLD_THREADS", "junk")
    assert cli.thread_count() >= 1


def test_exit_codes(capsys):
    assert cli.main(["verify", "--bogus"]) == 2
    assert cli.main([]) == 2
    assert cli.main(["verify", "--tol", "-1"]) == 2
    assert cli.main(["equidist", "--theta", "0.5"]) == 2
    assert cli.main(["norms", "--n-max", "25"]) == 3
    assert cli.main(["signs", "--n", "21"]) == 3
    assert cli.main(["verify", "--n", "40"]) == 3
    assert cli.main(["--help"]) == 0
    capsys.readouterr()


def test_check_failure_exit_code(capsys):
    # a tolerance below the attainable rounding error makes the identity checks fail
    assert cli.main(["verify", "--identity", "sin", "--n", "6", "--draws", "5", "--tol", "1e-30"]) == 1
    capsys.readouterr()


def test_csv_and_text_outputs(tmp_path, capsys):
    path = tmp_path / "norms.csv"
    assert cli.main(["norms", "--n-max", "3", "--csv", "-o", str(path)]) == 0
    rows = list(csv.reader(io.StringIO(path.read_text())))
    assert rows[0] == ["n", "sup", "l1", "l2"] and len(rows) == 5
    status, out = run_main(["signs", "--n", "4", "--word", "3", "--text"], capsys)
    assert status == 0 and "+--+-++-" in out
    status, out = run_main(["signs", "--n", "4", "--word", "2", "--csv"], capsys)
    assert out.splitlines() == ["j,sign", "0,1", "1,-1", "2,-1", "3,1"]


def test_run_config_validation():
    with pytest.raises(cli.DomainError):
        cli.RunConfig("nope")
    with pytest.raises(cli.DomainError):
        cli.RunConfig("verify", tolerance=0.0)
    with pytest.raises(cli.DomainError):
        cli.RunConfig("verify", seed=2**64)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "sinefold", "signs", "--n", "3", "--json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["passed"] is True
