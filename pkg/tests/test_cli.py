import json
import subprocess
import sys

import pytest

from belitskii import cli
from belitskii.catalog import get_template, instantiate
from belitskii.reduction import SystemTriple, apply_group
from belitskii.sampling import random_group_element
from belitskii.serialize import dumps, system_to_dict

EXAMPLE_121 = SystemTriple.build([[0, 1], [0, 0]], [[0], [1]], [[1, 5]])


def write(tmp_path, name, s):
    path = tmp_path / name
    path.write_text(dumps(system_to_dict(s)) if isinstance(s, SystemTriple) else s, encoding="utf-8")
    return str(path)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_canon_trace(tmp_path, capsys):
    path = write(tmp_path, "ex.json", SystemTriple.build([[0, 1], [0, 0]], [[7], [3]], [[2, 1]]))
    code, out, _ = run(capsys, "canon", path, "--trace")
    assert code == 0
    assert "A = [0 1; 0 0]" in out
    assert "B = [0; 1]" in out
    assert "sigma: 2 1 1 1 0" in out
    assert "total: 5" in out


def test_canon_json_witness(tmp_path, capsys):
    path = write(tmp_path, "ex.json", SystemTriple.build([[3]], [[5]], [[7]]))
    code, out, _ = run(capsys, "canon", path, "--json", "--witness")
    assert code == 0
    rep = json.loads(out)
    assert rep["canonical"]["B"] == [["1"]]
    assert rep["witness"] == {"X": [["1"]], "Y": [["1/5"]], "Z": [["1/35"]]}


@pytest.mark.parametrize("content, code", [
    ('{"m": 1}', 2),
    (SystemTriple.build([[0, 1], [2, 0]], [[1], [0]], [[0, 1]]), 3),
    ('{"m": 1, "n": 0, "l": 1, "A": [], "B": [], "C": [[]]}', 4),
])
def test_exit_codes(tmp_path, capsys, content, code):
    path = write(tmp_path, "bad.json", content)
    got, _, err = run(capsys, "canon", path)
    assert got == code
    assert err.startswith("error:")


def test_json_error_document(tmp_path, capsys):
    path = write(tmp_path, "bad.json", "[")
    code, out, _ = run(capsys, "canon", path, "--json")
    assert code == 2
    assert json.loads(out)["exit"] == 2


def test_equiv(tmp_path, capsys, rng):
    g = random_group_element(rng, *EXAMPLE_121.d)
    a = write(tmp_path, "a.json", EXAMPLE_121)
    b = write(tmp_path, "b.json", apply_group(g, EXAMPLE_121))
    c = write(tmp_path, "c.json", SystemTriple.build([[0, 1], [0, 0]], [[0], [1]], [[1, 4]]))
    code, out, _ = run(capsys, "equiv", a, b, "--witness")
    assert code == 0 and out.startswith("EQUIVALENT")
    code, out, _ = run(capsys, "equiv", a, c)
    assert code == 1 and out.strip() == "NOT EQUIVALENT"
    d = write(tmp_path, "d.json", SystemTriple.build([[3]], [[1]], [[1]]))
    code, _, _ = run(capsys, "equiv", a, d)
    assert code == 5


def test_orbit_dim_oracle(tmp_path, capsys):
    path = write(tmp_path, "ex.json", EXAMPLE_121)
    code, out, _ = run(capsys, "orbit-dim", path, "--oracle")
    assert code == 0
    assert "dim_orbit 5" in out
    assert "oracle 5 AGREE" in out


def test_decompose_finds_two_entries(tmp_path, capsys, rng):
    s = instantiate(get_template("d111-01"), {"λ": 3}).direct_sum(instantiate(get_template("d120-02"), {"λ": 2}))
    g = random_group_element(rng, *s.d)
    path = write(tmp_path, "sum.json", apply_group(g, s))
    out_dir = tmp_path / "parts"
    code, out, _ = run(capsys, "decompose", path, "--json", "--out", str(out_dir))
    assert code == 0
    rep = json.loads(out)
    assert sorted(e["template"] for e in rep["summands"]) == ["d111-01", "d120-02"]
    assert sorted(p.name for p in out_dir.iterdir()) == ["sum.summand1.json", "sum.summand2.json"]


def test_catalog_listing(capsys):
    code, out, _ = run(capsys, "catalog", "--dim", "4")
    assert code == 0
    assert out.strip().endswith("31 templates")
    code, out, _ = run(capsys, "catalog", "--dim", "3", "--json")
    assert json.loads(out)["count"] == 9
    code, _, _ = run(capsys, "catalog", "--dim", "5")
    assert code == 2


def test_catalog_verify(capsys):
    code, out, _ = run(capsys, "catalog", "--verify", "40", "--seed", "1")
    assert code == 0
    assert out.strip().endswith("PASS")


def test_batch(tmp_path, capsys):
    src = tmp_path / "in"
    src.mkdir()
    write(src, "good.json", EXAMPLE_121)
    write(src, "bad.json", SystemTriple.build([[0, 1], [2, 0]], [[1], [0]], [[0, 1]]))
    out_dir = tmp_path / "out"
    code, out, _ = run(capsys, "orbit-dim", "--batch", str(src), "--out", str(out_dir), "--json")
    assert code == 3
    rep = json.loads(out)["files"]
    assert rep["good.json"]["exit"] == 0 and rep["bad.json"]["exit"] == 3
    assert json.loads((out_dir / "good.orbit-dim.json").read_text())["dim_orbit"] == 5


def test_max_dim_env(tmp_path, capsys, monkeypatch):
    path = write(tmp_path, "ex.json", EXAMPLE_121)
    monkeypatch.setenv("BELITSKII_MAX_DIM", "3")
    code, _, err = run(capsys, "canon", path)
    assert code == 2 and "BELITSKII_MAX_DIM" in err
    monkeypatch.setenv("BELITSKII_MAX_DIM", "4")
    assert run(capsys, "canon", path)[0] == 0


def test_missing_path(capsys):
    assert run(capsys, "canon")[0] == 2


def test_module_entry_point(tmp_path):
    path = write(tmp_path, "ex.json", EXAMPLE_121)
    proc = subprocess.run([sys.executable, "-m", "belitskii", "orbit-dim", path], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "dim_orbit 5"
