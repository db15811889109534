import json

import pytest

from graphdiff import experiments as ex
from graphdiff.cli import main
from graphdiff.graphs import path_graph, random_bernoulli_graph, write_edge_list


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, g in {"pa2": path_graph(2), "pa3": path_graph(3),
                    "a": random_bernoulli_graph(9, 0.5, seed=1)}.items():
        paths[name] = tmp_path / f"{name}.el"
        write_edge_list(g, paths[name])
    bad = tmp_path / "bad.el"
    bad.write_text("3\n0 one\n")
    paths["bad"] = bad
    return paths


def _json(capsys):
    out = capsys.readouterr().out
    assert out.count("\n") == 1
    return json.loads(out)


def test_dist_self_is_zero(files, capsys):
    assert main(["dist", str(files["a"]), str(files["a"]), "--variant", "linear"]) == 0
    d = _json(capsys)
    assert d["value"] == 0.0
    assert set(d) == {"value", "t_star", "alpha_star", "matching", "variant", "work"}


def test_dist_fixed_alpha(files, capsys):
    assert main(["dist", str(files["pa2"]), str(files["pa3"]), "--variant", "linear-fixed", "--alpha", "1"]) == 0
    d = _json(capsys)
    assert d["value"] == pytest.approx(1.0) and d["variant"] == "linear-fixed"


def test_dist_squared_and_out(files, tmp_path, capsys):
    out = tmp_path / "d.json"
    code = main(["dist", str(files["pa2"]), str(files["pa3"]), "--variant", "exp-fixed",
                 "--squared", "--out", str(out)])
    assert code == 0 and capsys.readouterr().out == ""
    d = json.loads(out.read_text())
    assert d["t_star"] > 0 and d["value"] > 0


def test_parse_failure_exits_2(files, tmp_path):
    assert main(["dist", str(files["bad"]), str(files["a"])]) == 2
    assert main(["dist", str(tmp_path / "missing.el"), str(files["a"])]) == 2
    assert main(["dist", str(files["a"])]) == 2
    assert main(["dist", str(files["a"]), str(files["a"]), "--alpha-window", "2:1"]) == 2


@pytest.mark.parametrize("extra", [
    ["--variant", "hammond"],
    ["--variant", "linear-fixed"],
    ["--variant", "tsgdd"],
    ["--variant", "linear", "--alpha", "2"],
    ["--variant", "linear-fixed", "--alpha", "-1"],
])
def test_invalid_combinations_exit_3(files, extra):
    assert main(["dist", str(files["pa2"]), str(files["pa3"]), *extra]) == 3


def test_triplets_csv(tmp_path):
    out = tmp_path / "t.csv"
    args = ["triplets", "--count", "4", "--variant", "tsgdd", "--r", "1", "--seed", "5",
            "--orderings", "123,321", "--out", str(out)]
    assert main(args) == 0
    text = out.read_text()
    assert text.startswith(ex.CSV_VERSION)
    rows = ex.read_csv(text)
    assert len(rows) == 8
    assert all(float(r["disc"]) <= 1 + 1e-9 for r in rows if r["ordering"] == "123")
    assert main(args[:-2] + ["--out", str(tmp_path / "u.csv")]) == 0
    assert (tmp_path / "u.csv").read_text() == text
    assert main(["triplets", "--count", "2", "--orderings", "132"]) == 3
    assert main(["triplets", "--count", "2", "--variant", "hammond"]) == 3


def test_converge_and_product_bound(capsys):
    assert main(["converge", "--families", "path,cycle", "--n-range", "5:6"]) == 0
    rows = ex.read_csv(capsys.readouterr().out)
    assert [r["n"] for r in rows] == ["5", "6"]
    assert main(["product-bound", "--n-range", "3:3"]) == 0
    rows = ex.read_csv(capsys.readouterr().out)
    assert float(rows[0]["bound"]) >= float(rows[0]["direct"])
    assert main(["converge", "--families", "path"]) == 3


def test_lineage_table_command(capsys):
    assert main(["lineage-table", "--index-range", "2:3", "--families", "path,cycle", "--squared"]) == 0
    rows = ex.read_csv(capsys.readouterr().out)
    assert [r["row"] for r in rows] == ["path", "cycle"]
    assert main(["lineage-table", "--families", "path,tree"]) == 3


def test_baseline_command(capsys):
    assert main(["baseline", "--count", "2"]) == 0
    rows = ex.read_csv(capsys.readouterr().out)
    assert len(rows) == 2 and all(float(r["speedup"]) > 0 for r in rows)
    assert main(["baseline", "--count", "2", "--variant", "exp"]) == 3
