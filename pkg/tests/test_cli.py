import json

import pytest

from taaf import registry
from taaf.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestGoldenOutputs:
    def test_eval_example(self, capsys):
        code, out, _ = run(capsys, "eval", "relu", "--z", "1.5")
        assert code == 0
        assert out == "1.5\n"

    def test_table_example(self, capsys):
        code, out, _ = run(capsys, "table", "logistic_sigmoid",
                           "--from", "-1", "--to", "1", "--steps", "3")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "z,value,derivative"
        assert len(lines) == 4
        assert lines[2] == "0,0.5,0.25"

    def test_byte_identical_across_runs(self, capsys):
        examples = [
            ("eval", "relu", "--z", "1.5"),
            ("table", "logistic_sigmoid", "--from", "-1", "--to", "1", "--steps", "3"),
            ("verify", "--all"),
            ("describe", "tanh"),
            ("list",),
        ]
        for argv in examples:
            _, first, _ = run(capsys, *argv)
            _, second, _ = run(capsys, *argv)
            assert first == second, argv

    def test_verify_all_passes(self, capsys):
        code, out, _ = run(capsys, "verify", "--all")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "name,binding,max_abs_diff,worst_z,pass"
        body = lines[1:]
        assert len(body) == 3 * len(registry.builtin_records())
        assert all(line.endswith(",true") for line in body)


class TestExitCodes:
    def test_unknown_id_is_usage_error(self, capsys):
        code, out, err = run(capsys, "eval", "no_such_fn", "--z", "1")
        assert code == 2
        assert out == ""
        assert "no_such_fn" in err

    def test_argparse_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["eval"])  # missing --z
        assert exc.value.code == 2

    def test_verify_failure_exits_1(self, capsys, tmp_path, monkeypatch):
        # a registry with a sign error on the sss translation must fail
        records = list(registry.builtin_records())
        broken = json.loads(registry.records_to_json(records[:1]))
        sss = json.loads(registry.records_to_json([registry.get_record("sss")]))[0]
        sss["gamma"] = "mul(a,b)"  # wrong sign
        broken.append(sss)
        path = tmp_path / "broken.json"
        path.write_text(json.dumps(broken))
        monkeypatch.setenv(registry.REGISTRY_ENV_VAR, str(path))
        code, out, _ = run(capsys, "verify", "--all")
        assert code == 1
        assert any(line.endswith(",false") for line in out.strip().splitlines())

    def test_bad_params_syntax(self, capsys):
        code, _, err = run(capsys, "eval", "lrelu", "--z", "1", "--params", "slope:0.2")
        assert code == 2 and "params" in err


class TestSubcommands:
    def test_list_matches_registry(self, capsys):
        code, out, _ = run(capsys, "list")
        names = out.strip().splitlines()
        assert names == [r.name for r in registry.list_records()]

    def test_list_disputed(self, capsys):
        code, out, _ = run(capsys, "list", "--disputed")
        assert set(out.split()) == {"adaptive_slope_tanh", "pfts"}

    def test_describe_json(self, capsys):
        code, out, _ = run(capsys, "describe", "elu")
        d = json.loads(out)
        assert d["id"] == "elu"
        assert d["kink_rule"] == "0 when a != 1"

    def test_eval_with_params(self, capsys):
        code, out, _ = run(capsys, "eval", "lrelu", "--z", "-2", "--params", "slope=0.5")
        assert code == 0 and out == "-1\n"

    def test_verify_single_record(self, capsys):
        code, out, _ = run(capsys, "verify", "--name", "disrelu")
        lines = out.strip().splitlines()
        assert code == 0 and len(lines) == 4
        assert all(line.startswith("disrelu,") for line in lines[1:])

    def test_verify_json_mode(self, capsys):
        code, out, _ = run(capsys, "verify", "--name", "sss", "--json")
        rows = json.loads(out)
        assert len(rows) == 3 and all(r["pass"] for r in rows)

    def test_gradcheck_single_subject(self, capsys):
        code, out, err = run(capsys, "gradcheck", "--subject", "tanh")
        assert code == 0
        assert "tanh: 201 checks, 0 failures, pass" in out

    def test_gradcheck_json(self, capsys):
        code, out, _ = run(capsys, "gradcheck", "--subject", "relu", "--json")
        reports = json.loads(out)
        assert reports[0]["subject"] == "relu" and reports[0]["passed"]

    def test_gradcheck_custom_grid(self, capsys):
        code, out, _ = run(capsys, "gradcheck", "--subject", "silu",
                           "--grid=-2:2:41")
        assert code == 0 and "41 checks" in out

    def test_fit_smoke(self, capsys, tmp_path):
        loss_path = tmp_path / "loss.csv"
        code, out, _ = run(capsys, "fit", "--inner", "tanh",
                           "--planted", "1.2,0.9,-0.1,0.05",
                           "--n", "128", "--lr", "0.05", "--epochs", "500",
                           "--seed", "3", "--loss-csv", str(loss_path))
        assert code == 0
        report = json.loads(out)
        assert set(report["final_params"]) == {"alpha", "beta", "gamma", "delta"}
        lines = loss_path.read_text().strip().splitlines()
        assert lines[0] == "epoch,mse" and len(lines) == 502

    def test_fit_deterministic(self, capsys):
        argv = ("fit", "--inner", "tanh", "--planted", "1.1,1,0,0",
                "--n", "64", "--lr", "0.05", "--epochs", "50", "--seed", "1")
        _, first, _ = run(capsys, *argv)
        _, second, _ = run(capsys, *argv)
        assert first == second

    def test_bench_csv(self, capsys):
        code, out, err = run(capsys, "bench", "--subjects", "relu,tanh",
                             "--n", "100000", "--repeats", "3")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "subject,n_evals,repeats,median_evals_per_sec,cv"
        assert len(lines) == 3
        assert "checksum" in err  # diagnostics on stderr

    def test_bench_json(self, capsys):
        code, out, _ = run(capsys, "bench", "--subjects", "relu,tanh",
                           "--n", "100000", "--repeats", "3", "--json")
        rows = json.loads(out)
        assert len(rows) == 2

    def test_module_entry_point(self):
        import subprocess
        import sys

        proc = subprocess.run([sys.executable, "-m", "taaf", "eval", "softplus",
                               "--z", "0"], capture_output=True, text=True)
        assert proc.returncode == 0
        assert proc.stdout == "0.6931471805599453\n"
