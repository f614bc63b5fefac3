import json

from tightcycles.cli import main


def run_cli(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_gen_complete(capsys):
    code, out, err = run_cli(capsys, ["gen", "--complete", "-k", "3", "-n", "6"])
    assert code == 0
    obj = json.loads(out)
    assert len(obj["edges"]) == 20
    manifest = json.loads(err.strip().splitlines()[-1])
    assert manifest["subcommand"] == "gen"
    assert len(manifest["output_sha256"]) == 64


def test_gen_deterministic_bytes(capsys):
    argv = ["gen", "--random", "-k", "3", "-n", "8", "--seed", "11"]
    _, out1, err1 = run_cli(capsys, argv)
    _, out2, err2 = run_cli(capsys, argv)
    assert out1 == out2
    digest1 = json.loads(err1.strip().splitlines()[-1])["output_sha256"]
    digest2 = json.loads(err2.strip().splitlines()[-1])["output_sha256"]
    assert digest1 == digest2


def test_extremal_verify_exit_zero(capsys):
    code, out, _ = run_cli(capsys, ["extremal-verify", "-k", "3", "-n", "2", "-i", "0"])
    assert code == 0
    assert json.loads(out)["mono_cycle"] is None


def test_pipe_gen_into_components(tmp_path, capsys):
    path = tmp_path / "g.json"
    run_cli(capsys, ["gen", "--extremal", "-k", "3", "-n", "2", "--out", str(path)])
    code, out, _ = run_cli(capsys, ["components", "--in", str(path)])
    assert code == 0
    comps = json.loads(out)["components"]
    assert {(c["color"], c["size"]) for c in comps} == {("R", 10), ("B", 10)}


def test_cycle_budget_exit_code(tmp_path, capsys):
    path = tmp_path / "g.json"
    run_cli(capsys, ["gen", "--complete", "-k", "3", "-n", "7", "--out", str(path)])
    code, out, _ = run_cli(
        capsys,
        ["cycle", "--in", str(path), "--length", "7", "--budget-nodes", "2"],
    )
    assert code == 3
    assert json.loads(out)["status"] == "budget-exhausted"


def test_invalid_input_exit_code(capsys):
    code, _, _ = run_cli(capsys, ["gen", "--complete", "-k", "3", "-n", "2"])
    assert code == 2


def test_matching_lp_on_colored_graph(tmp_path, capsys):
    path = tmp_path / "g.json"
    run_cli(
        capsys,
        ["gen", "--random", "-k", "3", "-n", "6", "--p-red", "1", "--out", str(path)],
    )
    code, out, _ = run_cli(
        capsys,
        ["matching", "--in", str(path), "--method", "lp", "--components", "R:0"],
    )
    assert code == 0
    assert json.loads(out)["value"] == "2"


def test_pipeline_cli_with_config_and_trace(tmp_path, capsys):
    gpath = tmp_path / "g.json"
    run_cli(
        capsys,
        ["gen", "--random", "-k", "3", "-n", "30", "--p-red", "1", "--out", str(gpath)],
    )
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"eta": "1/10", "seed": 0}))
    trace = tmp_path / "trace.jsonl"
    code, out, _ = run_cli(
        capsys,
        [
            "pipeline", "--in", str(gpath), "--config", str(cfg),
            "--trace", str(trace),
        ],
    )
    assert code == 0
    obj = json.loads(out)
    assert obj["weight1"] == "10"
    lines = [json.loads(line) for line in trace.read_text().splitlines()]
    assert lines and all("outcome" in rec for rec in lines)


def test_ramsey_csv_output(capsys):
    code, out, _ = run_cli(
        capsys,
        ["ramsey", "--pattern", "path", "-k", "3", "-m", "3", "--n-max", "5",
         "--format", "csv"],
    )
    assert code == 0
    header, row = out.strip().splitlines()
    assert header.split(",")[:2] == ["pattern", "value"]
    assert row.split(",")[1] == "3"


def test_density_csv_levels(tmp_path, capsys):
    path = tmp_path / "g.json"
    run_cli(capsys, ["gen", "--complete", "-k", "3", "-n", "6", "--out", str(path)])
    code, out, _ = run_cli(
        capsys,
        ["density", "--in", str(path), "--mu", "1", "--alpha", "0", "--format", "csv"],
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 3  # header + levels 1, 2


def test_mu_cli(capsys):
    code, out, _ = run_cli(capsys, ["mu", "-k", "3", "-n", "4", "--beta", "1/6"])
    assert code == 0
    assert json.loads(out)["value"] == "1"


def test_walk_cli(tmp_path, capsys):
    path = tmp_path / "g.json"
    run_cli(capsys, ["gen", "--complete", "-k", "3", "-n", "5", "--out", str(path)])
    code, out, _ = run_cli(
        capsys,
        ["walk", "--in", str(path), "--edge-from", "0,1,2", "--edge-to", "2,3,4"],
    )
    assert code == 0
    obj = json.loads(out)
    assert obj["found"] and len(obj["walk"]) == 3


def test_blowup_cli_build_and_convert(tmp_path, capsys):
    gpath = tmp_path / "g.json"
    run_cli(
        capsys,
        ["gen", "--random", "-k", "3", "-n", "4", "--p-red", "1", "--out", str(gpath)],
    )
    code, out, _ = run_cli(capsys, ["blowup", "--in", str(gpath), "-r", "2"])
    assert code == 0
    assert json.loads(out)["blown_edges"] == 32
    wpath = tmp_path / "phi.json"
    wpath.write_text(json.dumps({"weights": [{"edge": [0, 1, 2], "num": 1, "den": 2}]}))
    code, out, _ = run_cli(
        capsys,
        ["blowup", "--in", str(gpath), "-r", "2", "--convert", "up",
         "--rprime", "1", "--weights", str(wpath)],
    )
    assert code == 0
    assert json.loads(out)["weight"] == "1"
    code, out, _ = run_cli(
        capsys, ["blowup", "--in", str(gpath), "-r", "2", "--density", "1/10,1/10"]
    )
    assert code == 0
    assert json.loads(out)["mu"] == "4/5"
