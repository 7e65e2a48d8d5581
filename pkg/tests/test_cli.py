import json
import shutil
from dataclasses import replace

from click.testing import CliRunner

from lch.cli import EXIT_INVALID, EXIT_VERIFY, corpus_dir, main


def run(*args):
    return CliRunner().invoke(main, list(args))


def test_invariants_unknot():
    res = run("invariants", "unknot")
    assert res.exit_code == 0
    assert res.output.splitlines()[0] == "tb=-1 rot=0"


def test_invariants_from_path():
    res = run("invariants", str(corpus_dir() / "5_2.front"), "--json")
    assert res.exit_code == 0
    assert json.loads(res.output)["tb"] == 1


def test_homology_5_2_json():
    res = run("homology", "5_2", "--json")
    assert res.exit_code == 0
    rep = json.loads(res.output)
    assert rep["augmentations"] == [["q1", "q2"]]
    assert rep["polynomials"] == [{"-2": 1, "1": 1, "2": 1}]


def test_dga_text():
    res = run("dga", "5_2")
    assert res.exit_code == 0
    assert "dq8 = 1 + q1 + q1q6q7" in res.output


def test_augmentations_figure8():
    res = run("augmentations", "figure8", "--json")
    assert len(json.loads(res.output)["augmentations"]) == 2


def test_duality_5_2():
    res = run("duality", "5_2")
    assert res.exit_code == 0
    assert res.output.splitlines()[0] == "duality holds; fundamental class q8+q9"


def test_duality_5_2_three_copies():
    res = run("duality", "5_2", "--n", "3", "--json")
    assert res.exit_code == 0
    rep = json.loads(res.output)
    assert rep["holds"] and rep["fundamental_classes"] == [["q8", "q9"]]


def test_missing_file_exits_one():
    assert run("invariants", "no/such/file.front").exit_code == EXIT_INVALID


def test_bad_front_exits_one(tmp_path):
    p = tmp_path / "bad.front"
    p.write_text("L1 X3 R1\n")
    assert run("homology", str(p)).exit_code == EXIT_INVALID


def test_disk_cap_exits_one():
    assert run("dga", "5_2", "--max-disks", "2").exit_code == EXIT_INVALID


def test_rotation_nonzero_skips_duality(tmp_path):
    p = tmp_path / "rot.front"
    p.write_text("L1 X1 X1 X1 R1\n")
    res = run("duality", str(p))
    assert res.exit_code == 0 and "not checked" in res.output


def test_json_is_deterministic():
    for cmd in ("dga", "homology", "duality"):
        assert run(cmd, "5_2", "--json").output == run(cmd, "5_2", "--json").output


def test_atlas_corpus():
    res = run("atlas", "--json")
    assert res.exit_code == 0
    rows = json.loads(res.output)
    assert [r["name"] for r in rows] == sorted(r["name"] for r in rows)
    assert len(rows) == 6
    assert all(r["duality"] is True and r["error"] is None for r in rows)
    assert "seconds" not in rows[0]


def test_atlas_empty_directory(tmp_path):
    res = run("atlas", str(tmp_path), "--json")
    assert res.exit_code == 0
    assert json.loads(res.output) == []


def test_atlas_isolates_corrupt_file(tmp_path):
    for name in ("unknot", "trefoil"):
        shutil.copy(corpus_dir() / f"{name}.front", tmp_path)
    (tmp_path / "broken.front").write_text("L1 X2 R1\n")
    res = run("atlas", str(tmp_path), "--json", "--timing")
    assert res.exit_code == 0
    rows = {r["name"]: r for r in json.loads(res.output)}
    assert rows["broken"]["error"]
    assert rows["unknot"]["duality"] and rows["trefoil"]["duality"]
    assert "seconds" in rows["unknot"]


def test_atlas_csv(tmp_path):
    shutil.copy(corpus_dir() / "unknot.front", tmp_path)
    out = tmp_path / "atlas.csv"
    assert run("atlas", str(tmp_path), "--out", str(out)).exit_code == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("name,front,tb,rot")
    assert lines[1].startswith("unknot,")


def test_atlas_not_a_directory():
    assert run("atlas", "no/such/dir").exit_code == EXIT_INVALID


def test_failed_identity_exits_two(monkeypatch, tmp_path):
    import lch.cli as cli

    real = cli.duality_summary

    def broken(split):
        rep = real(split)
        return replace(rep, holds=False, failures=["forced failure"])

    monkeypatch.setattr(cli, "duality_summary", broken)
    res = run("duality", "trefoil")
    assert res.exit_code == EXIT_VERIFY == 2
    assert "forced failure" in res.output
    shutil.copy(corpus_dir() / "trefoil.front", tmp_path)
    res = run("atlas", str(tmp_path), "--json")
    assert res.exit_code == EXIT_VERIFY
