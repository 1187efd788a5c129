import pytest
import json
from discrim.cli import run
from discrim.records import load_records


def lines(capsys):
    return [json.loads(line) for line in capsys.readouterr().out.splitlines() if line.startswith("{")]


@pytest.fixture
def log(tmp_path):
    return tmp_path / "run.jsonl"


def test_help():
    assert run(["--help"]) == 0


def test_delta_compute(capsys):
    assert run(["delta", "compute", "--n", "245"]) == 0
    (record,) = lines(capsys)

    assert record["suite"] == "delta_verify"
    assert record["computed"] == record["expected"] == "567"
    assert record["pass"] is True


def test_delta_compute_single_method(capsys):
    assert run(["--no-numba", "delta", "compute", "--n", "100", "--method", "brute"]) == 0
    assert run(["delta", "compute", "--n", str(3**41 + 2), "--method", "closed"]) == 0
    brute, closed = lines(capsys)

    assert (brute["suite"], brute["computed"]) == ("delta_brute", "243")
    assert (closed["suite"], closed["computed"]) == ("delta_closed", str(7 * 3**40))


def test_delta_verify_and_resume(log):
    assert run(["delta", "verify", "--to", "100", "--out", str(log)]) == 0
    assert len(load_records(log)) == 100

    assert run(["delta", "verify", "--to", "150", "--resume", str(log)]) == 0
    assert [r.params["n"] for r in load_records(log)] == list(range(1, 151))


def without_timing(path):
    return [
        {name: value for name, value in record.to_dict().items() if name not in ("elapsed_us", "worker")}
        for record in load_records(path)
    ]


def cut_off(path, lines_kept):
    # Keeps `lines_kept` full lines and half of the next one
    lines = path.read_text(encoding="utf-8").splitlines(keepends=True)
    partial = lines[lines_kept][: len(lines[lines_kept]) // 2]
    path.write_text("".join(lines[:lines_kept]) + partial, encoding="utf-8")


def test_resume_after_cut_off_last_line(log):
    assert run(["delta", "verify", "--to", "10", "--out", str(log)]) == 0
    log.write_bytes(log.read_bytes()[:-20])

    assert run(["delta", "verify", "--to", "12", "--resume", str(log)]) == 0
    assert run(["report", str(log)]) == 0
    assert [r.params["n"] for r in load_records(log)] == list(range(1, 13))
    assert log.read_text(encoding="utf-8").endswith("\n")


def test_resumed_run_matches_uninterrupted_run(tmp_path, capsys):
    full, interrupted = tmp_path / "full.jsonl", tmp_path / "interrupted.jsonl"
    assert run(["lemma", "verify", "--id", "L43", "--limit", "300", "--out", str(full)]) == 0
    assert run(["lemma", "verify", "--id", "L43", "--limit", "300", "--out", str(interrupted)]) == 0
    cut_off(interrupted, 20)

    assert run(["lemma", "verify", "--id", "L43", "--limit", "300", "--resume", str(interrupted)]) == 0
    capsys.readouterr()
    assert run(["report", str(full)]) == 0
    full_report = capsys.readouterr().out
    assert run(["report", str(interrupted)]) == 0

    assert capsys.readouterr().out == full_report
    assert without_timing(interrupted) == without_timing(full)


def test_runs_are_deterministic(tmp_path):
    logs = [tmp_path / f"run{i}.jsonl" for i in range(3)]
    assert run(["delta", "verify", "--to", "200", "--block-size", "30", "--out", str(logs[0])]) == 0
    assert run(["delta", "verify", "--to", "200", "--block-size", "30", "--out", str(logs[1])]) == 0
    assert run(
        ["delta", "verify", "--to", "200", "--block-size", "30", "--workers", "2", "--out", str(logs[2])]
    ) == 0

    assert without_timing(logs[0]) == without_timing(logs[1]) == without_timing(logs[2])


def test_log_usage_errors(log, tmp_path):
    assert run(["delta", "verify", "--to", "10", "--out", str(log)]) == 0
    assert run(["delta", "verify", "--to", "10", "--out", str(log)]) == 2
    assert run(["delta", "verify", "--to", "10", "--out", str(log), "--resume", str(log)]) == 2
    assert run(["delta", "verify", "--to", "10", "--csv", str(tmp_path / "x.csv")]) == 2


def test_collision_find(capsys):
    assert run(["collision", "find", "--n", "245", "--m", "567"]) == 0
    assert run(["collision", "find", "--n", "8", "--m", "8", "--method", "construct"]) == 0
    none, built = lines(capsys)

    assert none["witness"] is None
    assert built["witness"] == {"a": 1, "b": 2, "route": "power-of-two", "holds": True}


def test_charsum_commands(capsys):
    assert run(["charsum", "ap", "--p", "7", "--delta", "1", "--u", "0", "--form", "direct"]) == 0
    assert run(["charsum", "ap", "--p", "7", "--delta", "1", "--u", "3"]) == 0
    assert run(["charsum", "ell", "--p", "7", "--delta", "1"]) == 0
    assert run(["charsum", "profile", "--p", "7", "--delta", "1"]) == 0
    direct, identity, ell, profile = lines(capsys)

    assert direct["rational"] == -1
    assert identity["suite"] == "ap_identity" and identity["pass"] is True
    assert ell["computed"] == "2" and ell["expected"] == "3"
    assert profile["matches"] is True


def test_charsum_rejects_composite(capsys):
    assert run(["charsum", "ap", "--p", "9", "--delta", "1", "--u", "0"]) == 2
    assert "odd prime" in capsys.readouterr().err


def test_lemma_verify(log, capsys):
    assert run(["lemma", "verify", "--id", "5.1", "--limit", "18", "--out", str(log)]) == 0
    assert len(load_records(log)) == 19
    assert "5.1\ttotal=19\tpassed=19\tnonconforming=0" in capsys.readouterr().out


def test_lemma_verify_inequality_summary(capsys):
    assert run(["lemma", "verify", "--id", "L34", "--limit", "100"]) == 0
    output = capsys.readouterr().out
    summary = json.loads(next(line for line in output.splitlines() if line.startswith("{")))

    assert summary["suite"] == "L34:summary"
    assert summary["computed"] == "19"
    assert "L34\ttotal=23\tpassed=21\tnonconforming=0" in output


def test_lemma_verify_unknown_suite():
    assert run(["lemma", "verify", "--id", "9.9"]) == 2


def test_cases_classify(capsys):
    assert run(["cases", "classify", "--m", "567", "--n", "245"]) == 0
    assert run(["cases", "classify", "--m", "126", "--n", "122"]) == 0
    assert run(["cases", "classify", "--m", "243", "--n", "300", "--no-construct"]) == 0
    exceptional, sixth, power = lines(capsys)

    assert (exceptional["case"], exceptional["params"], exceptional["witness"]) == ("CaseVIII", {"r": 4}, None)
    assert sixth["witness"] == {"a": 3, "b": 57, "route": "seven-twice-three"}
    assert power["case"] == "PowerOfThree" and power["in_window"] is False


def test_counting_commands(capsys):
    assert run(["counting", "N", "--p", "7", "--t", "1", "--delta", "1"]) == 0
    assert run(["counting", "Nstar", "--p", "5", "--t", "2", "--delta", "1"]) == 0
    assert run(["counting", "Tj", "--p", "5", "--t", "2", "--delta", "1", "--j", "1"]) == 0
    n, nstar, tj = lines(capsys)

    assert n["N"] == 0 and n["X"] == 2
    assert nstar["N_star"] > 0
    assert tj["value"] == 5 and tj["closed_form"] == "5"


def test_counting_budget_error():
    assert run(["counting", "N", "--p", "11", "--t", "3", "--delta", "1", "--method", "naive", "--budget", "10"]) == 2
    assert run(["counting", "N", "--p", "7", "--t", "1", "--delta", "4"]) == 2


def test_report(log, tmp_path, capsys):
    assert run(["lemma", "verify", "--id", "C45", "--limit", "10", "--out", str(log)]) == 0
    capsys.readouterr()
    csv_path = tmp_path / "report.csv"

    assert run(["report", str(log), "--csv", str(csv_path)]) == 0
    output = capsys.readouterr().out
    assert "C45:summary" in output
    assert csv_path.read_text(encoding="utf-8").splitlines()[0].endswith("conforming")


def test_report_flags_nonconforming(log):
    log.write_text(
        json.dumps(
            {"suite": "delta_verify", "params": {"n": 5}, "computed": "8", "expected": "9", "pass": False, "elapsed_us": 0, "worker": 0}
        )
        + "\n",
        encoding="utf-8",
    )

    assert run(["report", str(log)]) == 1


def test_config_file_and_environment(tmp_path, log, monkeypatch):
    cfg = tmp_path / "discrim.cfg"
    mirror = tmp_path / "mirror.csv"
    cfg.write_text(f"block_size = 7\ncsv = {mirror}\n", encoding="utf-8")

    assert run(["--config", str(cfg), "delta", "verify", "--to", "20", "--out", str(log)]) == 0
    assert len(mirror.read_text(encoding="utf-8").splitlines()) == 21

    second = tmp_path / "second.jsonl"
    env_mirror = tmp_path / "env.csv"
    monkeypatch.setenv("DISCRIM_CSV", str(env_mirror))
    assert run(["--config", str(cfg), "delta", "verify", "--to", "5", "--out", str(second)]) == 0
    assert env_mirror.exists()


def test_bad_config(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("threads = 3\n", encoding="utf-8")

    assert run(["--config", str(cfg), "delta", "compute", "--n", "5"]) == 2
