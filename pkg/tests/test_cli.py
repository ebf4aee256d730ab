import json

import pytest

from cli.app import EXIT_INPUT, EXIT_OK, EXIT_QUALITY, run


async def _json_output(capsys, argv):
    code = await run(argv)
    return code, json.loads(capsys.readouterr().out)


async def test_channel_probs_json(capsys):
    code, data = await _json_output(capsys, ["channel-probs", "--builtin", "perfect", "--n", "2"])
    assert code == EXIT_OK
    assert data["type"] == "pauli_channel"
    assert data["probs"] == {"00": 1.0}
    assert data["entropy"] == 0.0
    assert data["entanglement_fidelity"] == 1.0

    code, data = await _json_output(capsys, ["channel-probs", "--builtin", "mixed", "--n", "1"])
    assert abs(data["entropy"] - 2.0) < 1e-12
    assert len(data["probs"]) == 4


async def test_channel_probs_phase_gate(capsys):
    argv = ["channel-probs", "--builtin", "phasegate", "--theta", "3.14159265", "--n", "2"]
    code, data = await _json_output(capsys, argv)
    assert code == EXIT_OK
    assert sorted(data["probs"]) == ["00", "03", "30", "33"]
    assert all(abs(p - 0.25) < 1e-8 for p in data["probs"].values())


async def test_channel_probs_csv(tmp_path, capsys):
    out = tmp_path / "probs.csv"
    code = await run(["channel-probs", "--builtin", "phasegate:0:3", "--format", "csv", "--out", str(out)])
    assert code == EXIT_OK
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[:4] == ["# n=3", "# entropy=0", "# entanglement_fidelity=1", "word,probability"]
    assert lines[4:] == ["000,1"]


async def test_fig2_writes_table_and_curve(tmp_path, capsys):
    out = tmp_path / "fig2.csv"
    argv = ["fig2", "--theta-grid", "0,0.5", "--n-min", "3", "--n-max", "5", "--tolerance", "1", "--out", str(out)]
    assert await run(argv) == EXIT_OK
    table = out.read_text(encoding="utf-8").splitlines()
    assert table[0] == "theta,n,rate,converged_gap"
    assert len(table) == 7
    curve = (tmp_path / "fig2.plotdata").read_text(encoding="utf-8").splitlines()
    assert curve[1].split() == ["0", "1"]
    assert "converged" in capsys.readouterr().out


async def test_fig2_reports_non_convergence(capsys):
    argv = ["fig2", "--theta-grid", "0.5,1", "--n-min", "4", "--n-max", "7", "--format", "json"]
    code, data = await _json_output(capsys, argv)
    assert code == EXIT_QUALITY
    assert data["converged"] is False


async def test_fig2_rejects_bad_ranges(capsys):
    assert await run(["fig2", "--n-min", "8", "--n-max", "8"]) == EXIT_INPUT
    assert await run(["fig2", "--n-min", "10", "--n-max", "30"]) == EXIT_INPUT
    assert await run(["cv-bound", "--format", "csv"]) == EXIT_INPUT


async def test_cv_bound(capsys):
    code, data = await _json_output(capsys, ["cv-bound", "--builtin", "thermal:2"])
    assert code == EXIT_OK
    assert data["bound_per_mode"] == 0.0

    bounds = []
    for r in ("1", "2", "3"):
        _, data = await _json_output(capsys, ["cv-bound", "--builtin", "epr", "--r-medium", r])
        bounds.append(data["bound_per_mode"])
    assert bounds[0] < bounds[1] < bounds[2]
    assert data["medium"] == "epr"
    assert data["convergence_gap"] is not None


async def test_cv_bound_rejects_malformed_file(tmp_path, capsys):
    path = tmp_path / "cm.json"
    path.write_text('{"modes": 2, "layout": "qqpp-ABinterleaved", "matrix": [[1, 0], [0, 1]]}', encoding="utf-8")
    assert await run(["cv-bound", "--resource-file", str(path)]) == EXIT_INPUT
    assert "error" in capsys.readouterr().err


async def test_simulate(tmp_path, capsys):
    argv = ["simulate", "--builtin", "perfect", "--n", "1", "--input", "random", "--trials", "10000", "--seed", "5"]
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    assert await run(argv + ["--out", str(first)]) == EXIT_OK
    assert await run(argv + ["--out", str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()

    report = json.loads(first.read_text(encoding="utf-8"))
    assert report["trace_distance"] < 0.02
    assert report["seed"] == 5
    assert report["generator"] == "PCG64"
    assert "trace distance" in capsys.readouterr().out


async def test_simulate_rejects_bad_input(capsys):
    assert await run(["simulate", "--builtin", "perfect", "--trials", "0"]) == EXIT_INPUT
    assert await run(["simulate", "--builtin", "perfect", "--input", "sideways"]) == EXIT_INPUT


async def test_perm_bound(capsys):
    code = await run(["perm-bound", "--n-max", "8"])
    assert code == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "resource,n,rate,converged_gap"
    assert [line.split(",")[1] for line in lines[1:]] == ["2", "4", "6", "8"]


async def test_unknown_builtin_and_command(capsys):
    assert await run(["channel-probs", "--builtin", "teapot"]) == EXIT_INPUT
    assert await run(["channel-probs"]) == EXIT_INPUT
    with pytest.raises(SystemExit):
        await run(["no-such-command"])


async def test_seed_must_fit_the_archive(capsys):
    argv = ["simulate", "--builtin", "perfect", "--trials", "10", "--seed"]
    assert await run(argv + [str(2 ** 63)]) == EXIT_INPUT
    assert await run(argv + [str(2 ** 63 - 1)]) == EXIT_OK


async def test_archive_flag_only_where_results_are_stored():
    with pytest.raises(SystemExit):
        await run(["cv-bound", "--archive"])
    with pytest.raises(SystemExit):
        await run(["channel-probs", "--builtin", "perfect", "--archive"])


async def test_cv_bound_at_strong_squeezing(capsys):
    code, data = await _json_output(capsys, ["cv-bound", "--builtin", "epr", "--r-medium", "8", "--r-src", "8", "--r-probe", "8"])
    assert code == EXIT_OK
    assert 21.0 < data["bound_per_mode"] < 22.0
    assert data["convergence_gap"] is not None
