import json
import subprocess
import sys

import pytest

from gbcrypt.cli import main, parse_rounds, split_rounds


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def records(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def make_files(tmp_path, cipher, rounds, seed="cli", extra=()):
    p = tmp_path / f"{cipher}-params.json"
    s = tmp_path / f"{cipher}-sample.json"
    assert main(["params", "--cipher", cipher, "--rounds", str(rounds), "--seed", seed, "--out", str(p), *extra]) == 0
    assert main(["sample", "--params", str(p), "--seed", seed, "--out", str(s)]) == 0
    return p, s


def test_parse_rounds():
    assert parse_rounds("8") == [8]
    assert parse_rounds("2..4") == [2, 3, 4]
    assert parse_rounds("3,5") == [3, 5]
    assert split_rounds(7) == (4, 3)


def test_estimate_ciminion(capsys):
    code, out, _ = run(["estimate", "--cipher", "ciminion", "--rounds", "33"], capsys)
    assert code == 0
    (rec,) = records(out)
    assert abs(rec["bits"]["bariant"] - 46.67) <= 0.05
    assert abs(rec["bits"]["eigenvalue"] - 63.09) <= 0.05
    assert abs(rec["bits"]["fully_substituted"] - 130) <= 0.05


def test_estimate_hydra_range(capsys):
    code, out, _ = run(["estimate", "--cipher", "hydra", "--rounds", "30..31"], capsys)
    assert code == 0
    recs = records(out)
    assert [r["rounds"] for r in recs] == [30, 31]
    assert abs(recs[1]["bits"]["fglm"] - 125.91) <= 0.05
    assert abs(recs[1]["bits"]["eigenvalue"] - 119.09) <= 0.05


def test_estimate_table(capsys):
    code, out, _ = run(["estimate", "--table", "hydra"], capsys)
    assert code == 0 and "158.25" in out


def test_usage_errors(capsys):
    code, _, err = run(["estimate", "--cipher", "hydra"], capsys)
    assert code == 2 and "usage" in err
    assert run(["estimate", "--rounds", "x..y"], capsys)[0] == 2
    assert run(["estimate", "--rounds", "8", "--omega", "3"], capsys)[0] == 2
    assert run(["bogus"], capsys)[0] == 2
    assert run(["attack", "--params", "/nonexistent", "--sample", "/nonexistent"], capsys)[0] == 2


def test_every_record_has_provenance(tmp_path, capsys):
    for argv in (["estimate", "--rounds", "5"],
                 ["experiment", "rank-check", "--rounds", "2"],
                 ["experiment", "gb-verify", "--ciminion", "--rounds", "3"]):
        code, out, _ = run(argv, capsys)
        assert code == 0
        for rec in records(out):
            assert {"q", "rounds", "variant", "seed", "version"} <= set(rec)


def test_ciminion_attack(tmp_path, capsys):
    p, s = make_files(tmp_path, "ciminion", 6)
    code, out, _ = run(["attack", "--params", str(p), "--sample", str(s)], capsys)
    assert code == 0
    (rec,) = records(out)
    key = json.loads(s.read_text())["key"]
    assert rec["fixture_key_found"] and key in rec["candidates"]
    assert "timings_s" not in rec


def test_ciminion2_attack(tmp_path, capsys):
    p, s = make_files(tmp_path, "ciminion", 5, extra=("--variant", "ciminion2"))
    code, out, _ = run(["attack", "--params", str(p), "--sample", str(s), "--timings"], capsys)
    assert code == 0
    (rec,) = records(out)
    assert rec["strategy"] == "eigen" and rec["variant"] == "ciminion2" and "timings_s" in rec


def test_hydra_attack_and_no_solution(tmp_path, capsys):
    p, s = make_files(tmp_path, "hydra", 2)
    code, out, _ = run(["attack", "--params", str(p), "--sample", str(s)], capsys)
    assert code == 0 and records(out)[0]["fixture_key_found"]
    other = tmp_path / "other.json"
    assert main(["params", "--cipher", "hydra", "--rounds", "2", "--seed", "else", "--out", str(other)]) == 0
    code, out, _ = run(["attack", "--params", str(other), "--sample", str(s)], capsys)
    assert code == 1 and records(out)[0]["verified"] is False


def test_corrupted_sample(tmp_path, capsys):
    p, s = make_files(tmp_path, "ciminion", 3)
    s.write_text(s.read_text()[:-5])
    assert run(["attack", "--params", str(p), "--sample", str(s)], capsys)[0] == 2
    d = json.loads(make_files(tmp_path, "ciminion", 3)[1].read_text())
    d["c1"] = "not a number"
    s.write_text(json.dumps(d))
    assert run(["attack", "--params", str(p), "--sample", str(s)], capsys)[0] == 2


def test_byte_identical_outputs(tmp_path):
    outs = []
    for k in range(2):
        d = tmp_path / str(k)
        d.mkdir()
        p, s = make_files(d, "ciminion", 5, seed="same")
        a = d / "attack.jsonl"
        assert main(["attack", "--params", str(p), "--sample", str(s), "--out", str(a)]) == 0
        e = d / "exp.jsonl"
        assert main(["experiment", "solve-degree", "--hydra", "--rounds", "2", "--boolean", "--out", str(e)]) == 0
        outs.append([f.read_bytes() for f in (p, s, a, e)])
    assert outs[0] == outs[1]


def test_seed_changes_output(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["params", "--cipher", "ciminion", "--rounds", "4", "--seed", "1", "--out", str(a)])
    main(["params", "--cipher", "ciminion", "--rounds", "4", "--seed", "2", "--out", str(b)])
    assert a.read_bytes() != b.read_bytes()


def test_experiments(capsys):
    code, out, _ = run(["experiment", "rank-check", "--rounds", "2..4"], capsys)
    assert code == 0 and all(r["full_rank"] and r["passed"] for r in records(out))
    code, out, _ = run(["experiment", "gb-verify", "--hydra", "--rounds", "2"], capsys)
    assert code == 0 and records(out)[0]["passed"]
    code, out, _ = run(["experiment", "solve-degree", "--hydra", "--rounds", "3", "--boolean", "--closure"], capsys)
    assert code == 0 and records(out)[-1]["degree"] == 3
    code, _, _ = run(["experiment", "solve-degree", "--ciminion", "--rounds", "3"], capsys)
    assert code == 2


def test_budget_exit_code(capsys):
    code, _, err = run(["experiment", "solve-degree", "--hydra", "--rounds", "4", "--budget-ms", "1"], capsys)
    assert code == 3 and "budget" in err


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "gbcrypt", "estimate", "--rounds", "33"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["rounds"] == 33
