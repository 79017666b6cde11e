import json
import os

import pytest

from synlab.cli import main
from synlab.graded import DimTable


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_syntomic_json(capsys):
    code, out, _ = run(capsys, "syntomic", "--p", "3", "--n", "3", "--k", "1", "--deg-max", "20")
    assert code == 0
    table = DimTable.from_json(out)
    assert table.params == {"p": 3, "n": 3, "k": 1}
    assert table.get(-1, 1) == 1
    # round trip
    assert DimTable.from_json(table.to_json()).entries == table.entries


def test_csv_format(capsys):
    code, out, _ = run(capsys, "tc", "--p", "3", "--n", "3", "--k", "1", "--deg-max", "10", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "stem,line,weight,dim"
    assert all(len(row.split(",")) == 4 for row in lines[1:])


def test_betti_bound(capsys):
    code, out, _ = run(capsys, "betti-bound", "--p", "3", "--d", "3")
    assert code == 0 and out.strip() == "3"


def test_einf_cross_checked(capsys):
    code, out, _ = run(
        capsys, "einf", "--p", "3", "--n", "1", "--ell", "1", "--variant", "hfp",
        "--deg-min", "-4", "--deg-max", "16", "--mode", "both",
    )
    assert code == 0
    obj = json.loads(out)
    assert obj["meta"]["cross_checked"] is True


def test_tr_table(capsys):
    code, out, _ = run(capsys, "tr", "--p", "3", "--ell", "1", "--m", "1", "--deg-min", "0", "--deg-max", "30")
    assert code == 0
    obj = json.loads(out)
    assert obj["entries"] and obj["meta"]["m"] == 1


def test_input_errors_exit_two(capsys):
    code, _, err = run(capsys, "syntomic", "--p", "4", "--n", "3", "--k", "1", "--deg-max", "10")
    assert code == 2 and "error" in err
    code, _, _ = run(capsys, "ktheory", "--p", "3", "--n", "3", "--k", "3", "--deg-max", "10")
    assert code == 2
    code, _, _ = run(capsys, "syntomic", "--p", "3", "--n", "2", "--k", "2", "--deg-max", "10")
    assert code == 2


def test_cache_transparency(tmp_path, capsys):
    args = ["syntomic", "--p", "3", "--n", "3", "--k", "1", "--deg-max", "16"]
    code, plain, _ = run(capsys, *args)
    cached_args = args + ["--cache-dir", str(tmp_path)]
    code1, first, _ = run(capsys, *cached_args)
    code2, second, _ = run(capsys, *cached_args)
    assert code == code1 == code2 == 0
    assert plain == first == second
    assert any(name.endswith(".json") for name in os.listdir(tmp_path))


def test_cache_env_var(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("SYNLAB_CACHE", str(tmp_path))
    code, out, _ = run(capsys, "betti-bound", "--p", "2", "--d", "1")
    assert code == 0 and out.strip() == "4"  # betti-bound is uncached but must not crash
    code, out1, _ = run(capsys, "tc", "--p", "3", "--n", "3", "--k", "1", "--deg-max", "8")
    code, out2, _ = run(capsys, "tc", "--p", "3", "--n", "3", "--k", "1", "--deg-max", "8")
    assert out1 == out2
    assert os.listdir(tmp_path)


def test_out_file(tmp_path, capsys):
    path = tmp_path / "table.json"
    code, out, _ = run(
        capsys, "syntomic", "--p", "3", "--n", "3", "--k", "1", "--deg-max", "12", "--out", str(path)
    )
    assert code == 0 and out == ""
    assert DimTable.from_json(path.read_text()).get(0, 0) == 1


def test_verify_suite_exit_codes(capsys, monkeypatch):
    code, out, err = run(
        capsys, "verify", "--suite", "assembly", "--p", "3", "--two-line-max", "40"
    )
    assert code == 0
    assert json.loads(out)["ok"] is True
    assert "PASS" in err

    import synlab.cli as climod
    from synlab.verify import Check, VerifyReport

    monkeypatch.setattr(climod, "run_suite", lambda *a, **k: VerifyReport([Check("x", "forced", False, "boom")]))
    code, out, err = run(capsys, "verify", "--suite", "einf")
    assert code == 3
    assert json.loads(out)["ok"] is False


def test_verify_einf_small_grid(capsys):
    code, out, _ = run(
        capsys, "verify", "--suite", "einf", "--p", "3", "--n-max", "1", "--deg-max", "30", "--ell-max", "2"
    )
    assert code == 0
    assert json.loads(out)["ok"] is True
