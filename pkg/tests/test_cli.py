from __future__ import annotations

import json

import pytest

from vkit.cache import Cache, CacheEntry
from vkit.cli import main
from vkit.tangle import ChordSeries, EventSequence, evaluate_corrected


@pytest.fixture
def run(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    cache_dir = str(tmp_path / "cache")

    def go(*argv, cache=True):
        flags = ["--cache-dir", cache_dir] if cache else ["--no-cache"]
        code = main([*argv, *flags])
        out, err = capsys.readouterr()
        return code, out, err

    return go


def column(out, k):
    return [int(line.split("\t")[k]) for line in out.splitlines()[1:]]


def test_dims_tables(run):
    code, out, _ = run("dims", "--to", "5", "--variant", "reduced")
    assert code == 0
    assert column(out, 1) == [1, 0, 1, 1, 3, 4]
    code, out, _ = run("dims", "--to", "5", "--variant", "framed")
    assert column(out, 1) == [1, 1, 2, 3, 6, 10]
    code, out, _ = run("dims", "--to", "0")
    assert out.splitlines()[1] == "0\t1\t1"


def test_dims_json_and_time(run):
    code, out, err = run("dims", "--to", "3", "--json", "--time")
    data = json.loads(out)
    assert [r["framed"] for r in data["rows"]] == [1, 1, 2, 3]
    assert "s" in err and "dims" in err


def test_cold_and_warm_runs_identical(run, tmp_path):
    cold = run("dims", "--to", "5")
    warm = run("dims", "--to", "5")
    assert cold[1] == warm[1]
    a1 = run("assoc", "--degree", "3", "--out", "a1.txt")
    a2 = run("assoc", "--degree", "3", "--out", "a2.txt")
    assert a1[1].replace("a1", "a2") == a2[1]
    assert (tmp_path / "a1.txt").read_text() == (tmp_path / "a2.txt").read_text()


def test_weight(run):
    assert run("weight", "")[1].strip() == "N"
    assert run("weight", "1 1", "--algebra", "gl")[1].strip() == "N^2"
    code, out, _ = run("weight", "1 2 1 2", "--algebra", "so", "--oracle", "3")
    lines = out.splitlines()
    assert lines[0] == "1/4 N^2 - 1/4 N"
    assert lines[1] == "N=3: state sum 3/2, oracle 3/2"
    data = json.loads(run("weight", "1 1", "--json")[1])
    assert data["coefficients"] == {"2": "1/1"}


def test_assoc_export(run, tmp_path):
    code, out, _ = run("assoc", "--degree", "2", "--out", "phi.txt")
    assert code == 0
    lines = (tmp_path / "phi.txt").read_text().splitlines()
    assert "1/24\tt12 t23" in lines and "-1/24\tt23 t12" in lines
    assert "pentagon residual 0" in out.splitlines()
    assert "hexagon+ residual 0" in out.splitlines()


def test_tangle(run):
    code, out, _ = run("tangle", "--events", "trefoil-13slice", "--degree", "2")
    assert code == 0
    assert out.splitlines()[0] == "0\t1/1\t-"
    assert any(line.startswith("2\t") for line in out.splitlines())
    data = json.loads(run("tangle", "--events", "sing2", "--degree", "2", "--json")[1])
    assert data["terms"] == [{"degree": 2, "code": [1, 2, 1, 2], "coef": "1"}]


def test_tangle_json_roundtrip(run):
    data = json.loads(run("tangle", "--events", "trefoil-alt", "--degree", "3", "--json")[1])
    value = ChordSeries.from_json(data)
    assert value == evaluate_corrected(EventSequence.bundled("trefoil-alt"), 3)


def test_tangle_file(run, tmp_path):
    (tmp_path / "u.events").write_text("cup AT .\ncap AT .\n")
    code, out, _ = run("tangle", "--events", "u.events", "--raw")
    assert code == 0 and out.strip() == "0\t1/1\t-"


def test_hutchings(run):
    code, out, _ = run("hutchings", "--degree", "3")
    assert out.splitlines() == ["m, dim_ker_upper, dim_im_3T8T, residual_upper", "3, 4, 2, 2"]


def test_enumerate_and_stu(run, tmp_path):
    assert run("enumerate", "--degree", "2")[1].splitlines() == ["1 1 2 2", "1 2 1 2"]
    (tmp_path / "y.txt").write_text("legs: l1 l2 l3\nv1: e1 e2 e3\nl1 - v1\nl2 - v1\nl3 - v1\n")
    code, out, _ = run("stu-expand", "y.txt", "--json")
    terms = {tuple(t["code"]): t["coef"] for t in json.loads(out)["terms"]}
    assert terms == {(1, 2, 1, 2): "1/1", (1, 1, 2, 2): "-1/1"}


def test_weight_rank(run, tmp_path):
    code, out, _ = run("weight-rank", "--to", "2", "--csv", "r.csv")
    assert (tmp_path / "r.csv").read_text().splitlines()[0] == "m,dim_framed,weight_span_rank"
    assert out.splitlines()[-1] == "2,2,2"


def test_exit_codes(run):
    assert run("tangle", "--events", "nope.events")[0] == 2
    assert run("weight", "1 2 1")[0] == 2
    assert run("dims", "--to", "12")[0] == 3
    assert run("hutchings", "--degree", "9")[0] == 3
    bad = "cup AT .\ncup AT 0\ncap AT .\n"
    with open("bad.events", "w") as fh:
        fh.write(bad)
    code, _, err = run("tangle", "--events", "bad.events")
    assert code == 2 and "event" in err


def test_cache_inspect_clear(run, tmp_path):
    run("dims", "--to", "2")
    code, out, _ = run("cache", "inspect", "--json")
    entries = json.loads(out)["entries"]
    assert entries and all(e["valid"] for e in entries)
    code, out, _ = run("cache", "clear")
    assert out.startswith(f"removed {len(entries)} entries")
    assert json.loads(run("cache", "inspect", "--json")[1])["entries"] == []


def test_corrupt_entry_dropped(tmp_path):
    c = Cache(tmp_path)
    c.put("dims", {"m": 1}, "payload")
    assert c.get("dims", {"m": 1}) == "payload"
    (path,) = [p for p, _ in c.entries()]
    data = json.loads(path.read_text())
    data["payload"] = "tampered"
    path.write_text(json.dumps(data))
    assert c.get("dims", {"m": 1}) is None
    assert not path.exists()


def test_cache_entry_roundtrip():
    e = CacheEntry("assoc", {"D": 2}, "x")
    assert CacheEntry.from_json(e.to_json()) == e
    bad = json.loads(e.to_json())
    bad["checksum"] = "0" * 64
    with pytest.raises(ValueError):
        CacheEntry.from_json(json.dumps(bad))


def test_stale_version_dropped(tmp_path):
    c = Cache(tmp_path)
    c.put("assoc", {"D": 2}, "x")
    (path,) = [p for p, _ in c.entries()]
    old = CacheEntry("assoc", {"D": 2}, "x", version=0)
    path.write_text(old.to_json())
    assert c.get("assoc", {"D": 2}) is None
    assert not path.exists()
