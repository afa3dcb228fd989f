import json
import os

import pytest

from hampack.cli import main
from hampack.constructions import complete_hypergraph
from hampack.hypercore import write_hypergraph
from hampack.reduction import HamiltonCycle, write_cycle


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_complete_then_count(tmp_path, capsys):
    path = str(tmp_path / "k4.json")
    code, _, _ = run(capsys, "gen", "--complete", "--n", "4", "--k", "3", "--out", path)
    assert code == 0
    code, out, _ = run(capsys, "count", "--input", path, "--ell", "1")
    assert code == 0
    assert json.loads(out)["exact_count"] == 6


def test_gen_random_deterministic(capsys):
    code1, out1, _ = run(capsys, "gen", "--random", "--n", "10", "--k", "3",
                         "--p", "0.5", "--seed", "3")
    code2, out2, _ = run(capsys, "gen", "--random", "--n", "10", "--k", "3",
                         "--p", "0.5", "--seed", "3")
    assert code1 == code2 == 0 and out1 == out2


def test_gen_parity_certify(tmp_path, capsys):
    path = str(tmp_path / "parity.json")
    code, _, _ = run(capsys, "gen", "--parity", "--n", "12", "--k", "3",
                     "--certify", "1", "--out", path)
    assert code == 0
    cert = json.loads(open(path + ".certificate.json").read())
    assert cert["no_factor"] is True
    assert cert["exhaustive_pm_count"] == 0
    # the hypergraph file keeps the exact schema
    doc = json.loads(open(path).read())
    assert set(doc) == {"n", "k", "edges"}


def test_degrees(tmp_path, capsys):
    path = str(tmp_path / "h.json")
    write_hypergraph(complete_hypergraph(6, 3), path)
    code, out, _ = run(capsys, "degrees", "--input", path, "--d", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["min_degree"] == doc["max_degree"] == 4


def test_bound(capsys):
    code, out, _ = run(capsys, "bound", "--n", "6", "--k", "3", "--ell", "1",
                       "--alpha", "0.75", "--p", "0")
    assert code == 0
    doc = json.loads(out)
    assert doc["log_expected"] is None and doc["note"] == "no cycles expected"
    assert doc["log_lower_bound"] == pytest.approx(5.7162, abs=1e-3)


def test_reduce_then_factor(tmp_path, capsys):
    hpath = str(tmp_path / "h.json")
    write_hypergraph(complete_hypergraph(8, 3), hpath)
    gpath = str(tmp_path / "aux.json")
    code, _, _ = run(capsys, "reduce", "--input", hpath, "--ell", "1",
                     "--seed", "5", "--out", gpath)
    assert code == 0
    assert os.path.exists(gpath + ".scheme.json")
    code, out, _ = run(capsys, "factor", "--input", gpath)
    assert code == 0
    assert json.loads(out)["r_star"] == 4  # complete aux graph


def test_factor_fixed_r_with_gale_ryser(tmp_path, capsys):
    gpath = str(tmp_path / "g.json")
    from hampack.bifactor import complete_bipartite, write_bipartite
    write_bipartite(complete_bipartite(3), gpath)
    code, out, _ = run(capsys, "factor", "--input", gpath, "--r", "2")
    doc = json.loads(out)
    assert code == 0 and doc["exists"] and doc["gale_ryser"]["holds"]


def test_pack_byte_identical(tmp_path, capsys):
    hpath = str(tmp_path / "h.json")
    write_hypergraph(complete_hypergraph(12, 3), hpath)
    outs = []
    for name in ("a.json", "b.json"):
        opath = str(tmp_path / name)
        code, _, _ = run(capsys, "pack", "--input", hpath, "--theorem", "2",
                         "--ell", "1", "--r", "2", "--seed", "7", "--out", opath)
        assert code == 0
        outs.append(open(opath, "rb").read())
        assert os.path.exists(opath + ".partitions.csv")
        assert os.path.exists(opath + ".manifest.json")
    assert outs[0] == outs[1]


def test_pack_near_regular_cli(tmp_path, capsys):
    hpath = str(tmp_path / "h.json")
    write_hypergraph(complete_hypergraph(12, 3), hpath)
    code, out, _ = run(capsys, "pack", "--input", hpath, "--theorem", "3",
                       "--ell", "1", "--r", "2", "--seed", "7",
                       "--epsilon", "0.05", "--delta-target", "0.5")
    assert code == 0
    assert json.loads(out)["coverage_ratio"] > 0


def test_mc_factor(tmp_path, capsys):
    opath = str(tmp_path / "mc.json")
    code, _, _ = run(capsys, "mc-factor", "--complete-bipartite", "12",
                     "--rho", "0.8", "--p", "0.9", "--epsilon", "0.5",
                     "--trials", "5", "--seed", "5", "--min-successes", "5",
                     "--out", opath)
    assert code == 0
    doc = json.loads(open(opath).read())
    assert doc["successes"] == 5 and doc["target"] == 4
    csv_lines = open(opath + ".trials.csv").read().strip().splitlines()
    assert csv_lines[0] == "seed,r_star,target,success"
    assert len(csv_lines) == 6


def test_mc_factor_threshold_failure(capsys):
    code, _, err = run(capsys, "mc-factor", "--complete-bipartite", "10",
                       "--rho", "1.0", "--p", "0.2", "--epsilon", "0.0",
                       "--trials", "3", "--seed", "1", "--min-successes", "3")
    assert code == 2
    assert "FAIL" in err


def test_mc_partition_aux(tmp_path, capsys):
    hpath = str(tmp_path / "h.json")
    write_hypergraph(complete_hypergraph(12, 3), hpath)
    code, out, _ = run(capsys, "mc-partition", "--input", hpath,
                       "--kind", "aux-degrees", "--ell", "1",
                       "--delta", "0.6", "--epsilon", "0.2",
                       "--trials", "5", "--seed", "3", "--min-successes", "5")
    assert code == 0
    assert json.loads(out)["successes"] == 5


def test_mc_partition_parts(tmp_path, capsys):
    hpath = str(tmp_path / "h.json")
    write_hypergraph(complete_hypergraph(12, 3), hpath)
    code, out, _ = run(capsys, "mc-partition", "--input", hpath,
                       "--kind", "part-degrees", "--sizes", "6,6",
                       "--delta", "0.5", "--epsilon", "0.2",
                       "--trials", "5", "--seed", "3")
    assert code == 0
    assert json.loads(out)["successes"] == 5


def test_verify_valid_and_invalid(tmp_path, capsys):
    hpath = str(tmp_path / "h.json")
    write_hypergraph(complete_hypergraph(6, 3), hpath)
    cpath = str(tmp_path / "c.json")
    write_cycle(HamiltonCycle(k=3, ell=1, arrangement=(0, 1, 2, 3, 4, 5)), cpath)
    code, out, _ = run(capsys, "verify", "--input", hpath, "--cycle", cpath)
    assert code == 0 and json.loads(out)["ok"] is True
    bad = str(tmp_path / "bad.json")
    write_cycle(HamiltonCycle(k=3, ell=1, arrangement=(0, 1, 2, 3, 4, 4)), bad)
    code, out, _ = run(capsys, "verify", "--input", hpath, "--cycle", bad)
    assert code == 2 and json.loads(out)["ok"] is False


def test_unknown_flag_exit_1(capsys):
    code, _, _ = run(capsys, "count", "--nonsense")
    assert code == 1


def test_count_size_limit_exit_1(tmp_path, capsys):
    hpath = str(tmp_path / "big.json")
    write_hypergraph(complete_hypergraph(12, 3), hpath)
    code, _, err = run(capsys, "count", "--input", hpath, "--ell", "1")
    assert code == 1 and "n=12" in err


def test_verify_wrong_overlap_exit_2(tmp_path, capsys):
    hpath = str(tmp_path / "h.json")
    write_hypergraph(complete_hypergraph(6, 3), hpath)
    cpath = str(tmp_path / "c.json")
    write_cycle(HamiltonCycle(k=3, ell=2, arrangement=(0, 1, 2, 3, 4, 5)), cpath)
    code, out, _ = run(capsys, "verify", "--input", hpath, "--cycle", cpath)
    assert code == 2 and json.loads(out)["failure"] == "ell-out-of-range"


def test_missing_input_exit_1(tmp_path, capsys):
    code, _, err = run(capsys, "degrees", "--input", str(tmp_path / "nope.json"), "--d", "1")
    assert code == 1


def test_invalid_file_no_partial_output(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    opath = str(tmp_path / "out.json")
    code, _, _ = run(capsys, "degrees", "--input", str(bad), "--d", "1", "--out", opath)
    assert code == 1
    assert not os.path.exists(opath)


def test_manifest_contents(tmp_path, capsys):
    hpath = str(tmp_path / "h.json")
    write_hypergraph(complete_hypergraph(6, 3), hpath)
    opath = str(tmp_path / "deg.json")
    run(capsys, "degrees", "--input", hpath, "--d", "2", "--out", opath)
    manifest = json.loads(open(opath + ".manifest.json").read())
    assert manifest["command"] == "degrees"
    assert hpath in manifest["input_digests"]
    assert opath in manifest["outputs"]
    assert manifest["artifact_version"]


def test_manifest_replay_reproduces(tmp_path, capsys):
    hpath = str(tmp_path / "h.json")
    write_hypergraph(complete_hypergraph(12, 3), hpath)
    o1, o2 = str(tmp_path / "r1.json"), str(tmp_path / "r2.json")
    run(capsys, "pack", "--input", hpath, "--ell", "1", "--r", "2", "--seed", "9",
        "--out", o1)
    manifest = json.loads(open(o1 + ".manifest.json").read())
    params = manifest["parameters"]
    run(capsys, "pack", "--input", hpath, "--ell", "1", "--r", str(params["r"]),
        "--seed", str(manifest["master_seed"]), "--out", o2)
    assert open(o1).read() == open(o2).read()
