import json
import math

import pytest

from pclp.cli import EXIT_FAILURE, EXIT_NO_PROOF, EXIT_OK, EXIT_USAGE, main
from pclp.default_config import RunConfig


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ("PCLP_SEED", "PCLP_MODE", "PCLP_DEPTH", "PCLP_ROUNDS", "PCLP_PROPOSAL", "PCLP_COMBINED"):
        monkeypatch.delenv(name, raising=False)


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_enumerate_lists_trees_per_distinct_query(capsys):
    assert main(["enumerate", "--depth", "5"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    headers = [line for line in lines if line.startswith("query\t")]
    assert len(headers) == 2
    assert all(line.endswith("\t1 trees") for line in headers)
    assert any(line.startswith("\t(11 (21) (31))\t") and line.endswith("\t0.25") for line in lines)


def test_eval_passes_on_the_sample(capsys):
    assert main(["eval"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 9
    assert all(line.startswith("PASS\t") for line in lines)


def test_erf_demo_prefers_the_log_linear_model(capsys):
    assert main(["erf-demo", "--depth", "5"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "estimate\t1\t0.666666666667\t0.333333333333\t0.666666666667\t0.333333333333" in out
    assert "likelihood\trenormalized\t0.128" in out
    assert "verdict\tlog-linear likelihood is higher" in out


def test_best_prints_one_line_per_query(capsys):
    assert main(["best", "--depth", "5"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert [line.split("\t")[-1] for line in lines] == ["(11 (21) (31))", "(11 (21) (31))", "(11 (22) (32))"]


def test_best_with_a_model_file(tmp_path, capsys):
    model = write(tmp_path, "model.pclp", "root 0\ntree (q/1.2) 2\n")
    corpus = write(tmp_path, "open.qry", "s(Z)\n")
    assert main(["best", "--depth", "5", "--model", model, "--corpus", corpus]) == EXIT_OK
    assert capsys.readouterr().out.strip().endswith("(11 (22) (32))")


def test_induce_writes_results(tmp_path, capsys):
    out_dir = tmp_path / "run"
    assert main(["induce", "--depth", "5", "--rounds", "1", "--tol", "1e-12", "--out", str(out_dir)]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("round\t1\tbind 1 b\t")
    assert "\nroot " in out
    assert (out_dir / "model.pclp").read_text(encoding="utf-8").startswith("root ")
    assert (out_dir / "rounds.tsv").read_text(encoding="utf-8").splitlines()[0].startswith("round\tproperty")
    summary = json.loads((out_dir / "run_summary.json").read_text(encoding="utf-8"))
    assert summary["rounds"] == 1
    assert summary["queries"] == 3
    assert summary["mode"] == "exact"


def test_sampled_induction_is_reproducible(tmp_path, capsys):
    outputs = []
    for name in ("first", "second"):
        argv = [
            "induce", "--mode", "mc", "--seed", "7", "--samples", "400", "--burnin", "50", "--iters", "3",
            "--depth", "5", "--rounds", "1", "--out", str(tmp_path / name),
        ]
        assert main(argv) == EXIT_OK
        out = capsys.readouterr().out
        outputs.append((out, (tmp_path / name / "rounds.tsv").read_bytes()))
    assert outputs[0] == outputs[1]

    out, rounds = outputs[0]
    first = out.splitlines()[0]
    assert first.startswith("round\t1\tbind 1 b\t")
    exact = float(first.split("\texact-gain ")[1])
    assert exact == pytest.approx(0.5 + math.log(2 / 3), abs=1e-9)
    assert "exact_gain" in rounds.decode("utf-8").splitlines()[0].split("\t")
    summary = json.loads((tmp_path / "first" / "run_summary.json").read_text(encoding="utf-8"))
    assert summary["mode"] == "mc"
    assert summary["combined"] == "joint"


def test_sample_needs_a_seed(capsys):
    assert main(["sample", "--depth", "5", "--samples", "10", "--burnin", "0"]) == EXIT_FAILURE
    assert "seed" in capsys.readouterr().err


def test_sample_with_seed(tmp_path, capsys):
    out_dir = tmp_path / "chains"
    argv = ["sample", "--depth", "5", "--samples", "20", "--burnin", "5", "--seed", "11", "--out", str(out_dir)]
    assert main(argv) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert {line.split("\t")[0] for line in lines} == {"0", "1"}
    dumped = (out_dir / "samples.tsv").read_text(encoding="utf-8").splitlines()
    assert len(dumped) == 40


def test_invalid_configuration_is_a_usage_error(capsys):
    assert main(["enumerate", "--depth", "0"]) == EXIT_USAGE
    assert "invalid configuration" in capsys.readouterr().err
    assert main(["induce", "--mode", "mc"]) == EXIT_USAGE


def test_bad_program_is_a_usage_error(tmp_path, capsys):
    program = write(tmp_path, "bad.pclp", "s(Z) :- p(Z)\n")
    assert main(["enumerate", "--program", program]) == EXIT_USAGE
    assert "line 1" in capsys.readouterr().err


def test_missing_file_is_a_usage_error(tmp_path):
    assert main(["enumerate", "--program", str(tmp_path / "absent.pclp")]) == EXIT_USAGE


def test_strict_mode_fails_on_uncovered_queries(tmp_path, capsys):
    corpus = write(tmp_path, "corpus.qry", "s(Z), Z = a\ns(Z), Z = c\n")
    assert main(["induce", "--depth", "5", "--corpus", corpus, "--strict"]) == EXIT_NO_PROOF
    assert main(["best", "--depth", "5", "--corpus", corpus]) == EXIT_OK
    assert capsys.readouterr().out.splitlines()[-1].endswith("\t-inf\t-")


def test_config_layers_overrides_on_defaults():
    config = RunConfig.from_overrides({"depth": 3, "tol": None, "mode": "mc", "seed": 5})
    assert config.depth == 3
    assert config.mode == "mc"
    assert config.iters == 20
    with pytest.raises(ValueError):
        RunConfig.from_overrides({"proposal": "gibbs"})
