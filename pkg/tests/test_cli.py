from __future__ import annotations

import json

import pytest

from rankmatch.cli import main
from rankmatch.graph import parse_graph, serialize_graph, serialize_matching
from rankmatch.instances import gen_gadget_chain

MANIFEST_KEYS = {"command", "parameters", "seed", "tool_version", "timestamp", "graph_source", "opt_provenance"}


@pytest.fixture
def gadget_files(tmp_path):
    def write(copies: int):
        g, opt = gen_gadget_chain(copies)
        gp, op = tmp_path / f"g{copies}.txt", tmp_path / f"g{copies}.opt"
        gp.write_text(serialize_graph(g))
        op.write_text(serialize_matching(opt))
        return str(gp), str(op)

    return write


def run_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    assert code == 0, out
    report = json.loads(out)
    assert set(report) == {"manifest", "result"}
    assert set(report["manifest"]) == MANIFEST_KEYS
    return report


def test_run_deterministic(capsys, gadget_files):
    g, _ = gadget_files(1)
    a = run_json(capsys, ["run", "--graph", g, "--seed", "5"])["result"]
    b = run_json(capsys, ["run", "--graph", g, "--seed", "5"])["result"]
    assert a == b
    assert a["valid"] and a["maximal"]
    assert sorted(a["permutation"]) == [0, 1, 2, 3]


def test_run_empty_graph(capsys, tmp_path):
    path = tmp_path / "empty.txt"
    path.write_text("3 0\n")
    res = run_json(capsys, ["run", "--graph", str(path)])["result"]
    assert res["size"] == 0 and res["matching"] == []


def test_run_malformed_reports_line(capsys, tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("4 2\n0 1\n1 x\n")
    assert main(["run", "--graph", str(path)]) == 2
    assert "line 3" in capsys.readouterr().err


def test_run_missing_file(capsys, tmp_path):
    assert main(["run", "--graph", str(tmp_path / "nope.txt")]) == 2


def test_estimate_perfect_only(capsys, tmp_path):
    # Disjoint edges: every order matches all of them.
    path = tmp_path / "pm.txt"
    path.write_text("6 3\n0 1\n2 3\n4 5\n")
    res = run_json(capsys, ["estimate", "--graph", str(path), "--samples", "500", "--threads", "1"])["result"]
    assert res["mean_ratio"] == 1.0
    assert res["ci95"] == [1.0, 1.0]


def test_estimate_seed_reproducible(capsys, gadget_files):
    g, _ = gadget_files(1)
    argv = ["estimate", "--graph", g, "--samples", "3000", "--seed", "11", "--threads", "1"]
    assert run_json(capsys, argv)["result"] == run_json(capsys, argv)["result"]


def test_estimate_rejects_zero_samples(capsys, gadget_files):
    g, _ = gadget_files(1)
    assert main(["estimate", "--graph", g, "--samples", "0"]) == 2


def test_exhaustive_gadget(capsys, gadget_files):
    g, opt = gadget_files(1)
    res = run_json(capsys, ["exhaustive", "--graph", g, "--opt", opt, "--k", "1", "--threads", "1"])["result"]
    assert res["expected_ratio"] == "7/8"
    assert res["kwis"] == [{"k": 1, "expected_kwis": "1/4", "upper_bound": "3/4", "upper_bound_holds": True}]
    assert res["size_histogram"] == {"1": 6, "2": 18}


def test_exhaustive_two_gadgets(capsys, gadget_files):
    g, opt = gadget_files(2)
    res = run_json(capsys, ["exhaustive", "--graph", g, "--opt", opt, "--k", "2", "--threads", "2"])["result"]
    assert res["kwis"][0]["expected_kwis"] == "1/16"


def test_exhaustive_rationals_are_strings(capsys, gadget_files):
    g, opt = gadget_files(1)
    res = run_json(capsys, ["exhaustive", "--graph", g, "--opt", opt, "--k", "1", "--c", "0"])["result"]

    def walk(x):
        assert not isinstance(x, float)
        if isinstance(x, dict):
            for v in x.values():
                walk(v)
        elif isinstance(x, list):
            for v in x:
                walk(v)

    walk(res)
    assert res["counting_chain"]["chain_holds"]


def test_exhaustive_cap(capsys, gadget_files):
    g, _ = gadget_files(3)
    assert main(["exhaustive", "--graph", g]) == 3
    assert "cap" in capsys.readouterr().err


def test_exhaustive_non_maximum_opt(capsys, tmp_path, gadget_files):
    g, _ = gadget_files(1)
    bad = tmp_path / "bad.opt"
    bad.write_text("1 2\n")
    assert main(["exhaustive", "--graph", g, "--opt", str(bad)]) == 2


def test_exhaustive_csv(capsys, gadget_files):
    g, _ = gadget_files(1)
    assert main(["exhaustive", "--graph", g, "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "histogram,key,count"
    assert "size,1,6" in lines and "size,2,18" in lines


def test_csv_rejected_elsewhere(capsys):
    assert main(["bounds", "--c", "0.005", "--format", "csv"]) == 1


def test_verify_claim(capsys, gadget_files):
    g, opt = gadget_files(2)
    res = run_json(capsys, ["verify-claim", "--graph", g, "--opt", opt, "--set", "0,3,4,7"])["result"]
    assert res["probability"] == "1/16" and res["probability_holds"]
    assert res["counterpart_violations"] == res["aug3_bound_violations"] == 0
    assert all(v["holds"] for v in res["distinct_kwis"].values())


def test_verify_claim_odd_set(capsys, gadget_files):
    g, opt = gadget_files(1)
    assert main(["verify-claim", "--graph", g, "--opt", opt, "--set", "0,1,2"]) == 2


@pytest.mark.parametrize("c, verdict", [("0.005", "negative"), ("1/100", "positive")])
def test_bounds(capsys, c, verdict):
    res = run_json(capsys, ["bounds", "--c", c])["result"]
    assert res["verdict"] == verdict


def test_bounds_out_of_range(capsys):
    assert main(["bounds", "--c", "1/6"]) == 2


def test_bounds_bad_rational(capsys):
    assert main(["bounds", "--c", "abc"]) == 1


def test_usage_errors(capsys):
    assert main(["frobnicate"]) == 1
    assert main(["run"]) == 1
    assert main(["bounds", "--c", "0.005", "--threads", "0"]) == 1


def test_gen_gadget_chain(capsys, tmp_path):
    out = tmp_path / "chain.txt"
    assert main(["gen", "gadget-chain:5", "--out", str(out)]) == 0
    g = parse_graph(out.read_text())
    assert g.n == 20
    assert (tmp_path / "chain.txt.opt").exists()


def test_gen_replicate(capsys, tmp_path, gadget_files):
    g, opt = gadget_files(1)
    out = tmp_path / "rep.txt"
    assert main(["gen", "replicate:b=2", "--graph", g, "--opt", opt, "--out", str(out)]) == 0
    assert parse_graph(out.read_text()).n == 16


def test_gen_replicate_needs_graph(capsys):
    assert main(["gen", "replicate:b=2"]) == 1


def test_gen_unknown(capsys):
    assert main(["gen", "mystery:3"]) == 2


def test_gen_same_seed_same_files(capsys, tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for path in (a, b):
        assert main(["gen", "random-planted:n=12,p=0.3", "--seed", "9", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "a.txt.opt").read_bytes() == (tmp_path / "b.txt.opt").read_bytes()


def test_out_writes_report_and_prints_summary(capsys, tmp_path, gadget_files):
    g, _ = gadget_files(1)
    out = tmp_path / "report.json"
    assert main(["exhaustive", "--graph", g, "--out", str(out)]) == 0
    assert "expected_ratio" in capsys.readouterr().out
    assert json.loads(out.read_text())["result"]["expected_ratio"] == "7/8"


@pytest.mark.parametrize(
    "argv",
    [
        ["estimate", "--samples", "20000", "--seed", "4"],
        ["exhaustive", "--k", "1,2"],
        ["run", "--seed", "3"],
    ],
)
def test_replay_identical_across_threads(capsys, tmp_path, gadget_files, argv):
    g, opt = gadget_files(2)
    report = tmp_path / "r.json"
    assert main([*argv, "--graph", g, "--opt", opt, "--threads", "1", "--out", str(report)]) == 0
    capsys.readouterr()
    assert main(["replay", str(report), "--threads", "2"]) == 0
    assert "identical" in capsys.readouterr().err


def test_replay_detects_tampering(capsys, tmp_path, gadget_files):
    g, _ = gadget_files(1)
    report = tmp_path / "r.json"
    assert main(["exhaustive", "--graph", g, "--out", str(report)]) == 0
    data = json.loads(report.read_text())
    data["result"]["expected_ratio"] = "1/2"
    report.write_text(json.dumps(data))
    assert main(["replay", str(report)]) == 2
