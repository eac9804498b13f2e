import json

import numpy as np
import pytest

from helirod import io as hio
from helirod.cli import main
from helirod.geometry import ReferenceConfig, preset, section_properties
from helirod.metrics import rmse_paired


def run(args):
    return main(args)


class TestSection:
    def test_prototype1_report(self, capsys):
        assert run(["section", "--preset", "prototype1"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["r_na"] == pytest.approx(0.4652, abs=5e-4)

    def test_prototype3_neutral_axis_length(self, capsys):
        assert run(["section", "--preset", "prototype3"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["L_na"] == pytest.approx(63.476, abs=1e-3)

    def test_invalid_geometry_exit_code(self, tmp_path, capsys):
        cfg = tmp_path / "bad.json"
        cfg.write_text('{"preset": "prototype1", "psi": 0.0}')
        assert run(["section", "--config", str(cfg)]) == 2

    def test_csv_format(self, capsys):
        assert run(["section", "--preset", "prototype1", "--format", "csv"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("quantity,value")
        assert "r_na," in out


class TestSolve:
    def test_unloaded_emits_reference_helix(self, tmp_path, warm_solver, capsys):
        out = tmp_path / "run"
        assert run([
            "solve", "--preset", "prototype1", "--tau", "0",
            "--gravity", "off", "--out", str(out),
        ]) == 0
        traj = hio.read_trajectory_csv(str(out / "solution.csv"))
        geom = preset("prototype1")
        props = section_properties(geom)
        ref = ReferenceConfig.from_geometry(geom)
        helix = np.array([ref.p_star(s) for s in np.linspace(0, props.L_na, len(traj))])
        from helirod.metrics import Trajectory

        assert rmse_paired(traj, Trajectory(helix)) < 1e-6

    def test_gravity_shifts_tip(self, tmp_path, warm_solver, capsys):
        out_off = tmp_path / "off"
        out_on = tmp_path / "on"
        run(["solve", "--preset", "prototype1", "--tau", "0.7", "--out", str(out_off)])
        run(["solve", "--preset", "prototype1", "--tau", "0.7", "--gravity", "on",
             "--out", str(out_on)])
        off = hio.read_trajectory_csv(str(out_off / "solution.csv"))
        on = hio.read_trajectory_csv(str(out_on / "solution.csv"))
        assert on.points[-1][0] < off.points[-1][0]

    def test_progressive_arclength(self, tmp_path, warm_solver, capsys):
        out = tmp_path / "half"
        assert run([
            "solve", "--preset", "prototype1", "--tau", "0.45", "--eta", "0.5",
            "--out", str(out),
        ]) == 0
        traj = hio.read_trajectory_csv(str(out / "solution.csv"))
        props = section_properties(preset("prototype1"))
        assert traj.total_arclength == pytest.approx(0.5 * props.L_na, rel=1e-3)


class TestMetrics:
    def test_file_vs_itself(self, tmp_path, warm_solver, capsys):
        out = tmp_path / "run"
        run(["solve", "--preset", "prototype1", "--tau", "0.2", "--out", str(out)])
        capsys.readouterr()
        assert run(["metrics", str(out / "solution.csv"), str(out / "solution.csv")]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["rmse"] == 0.0
        assert doc["med"] == 0.0
        assert doc["nearest_point_rmse"] == 0.0

    def test_shifted_copy(self, tmp_path, capsys):
        from helirod.metrics import Trajectory

        z = np.linspace(0.0, 10.0, 40)
        a = Trajectory(np.column_stack([np.zeros(40), np.zeros(40), z]))
        b = Trajectory(a.points + [0.75, 0.0, 0.0])
        hio.write_trajectory_csv(a, str(tmp_path / "a.csv"))
        hio.write_trajectory_csv(b, str(tmp_path / "b.csv"))
        assert run(["metrics", str(tmp_path / "a.csv"), str(tmp_path / "b.csv")]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["rmse"] == pytest.approx(0.75, rel=1e-9)
        assert doc["med"] == pytest.approx(0.75, rel=1e-9)

    def test_parse_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("s,px,py,pz\n0,zero,0,0\n1,1,1,1\n")
        good = tmp_path / "good.csv"
        good.write_text("s,px,py,pz\n0,0,0,0\n1,1,1,1\n")
        assert run(["metrics", str(bad), str(good)]) == 2


class TestFtlCommand:
    def test_outputs_and_determinism(self, tmp_path, warm_solver, capsys):
        args = ["ftl", "--preset", "prototype1", "--tau-des", "0.45",
                "--delta-eta", "0.25", "--gravity", "on", "--fit"]
        out1, out2 = tmp_path / "r1", tmp_path / "r2"
        assert run(args + ["--out", str(out1)]) == 0
        assert run(args + ["--out", str(out2)]) == 0
        for name in ("plan.json", "plan.csv", "reference.csv", "tension_fit.json"):
            b1 = (out1 / name).read_bytes()
            b2 = (out2 / name).read_bytes()
            assert b1 == b2, f"{name} not byte-identical"
        doc = json.loads((out1 / "plan.json").read_text())
        assert doc["failures"] == []

    def test_replay_writes_report(self, tmp_path, warm_solver, capsys):
        out = tmp_path / "replay"
        assert run([
            "ftl", "--preset", "prototype1", "--tau-des", "0.45",
            "--delta-eta", "0.25", "--out", str(out),
            "--replay-polynomial", "0,0,0.45",
        ]) == 0
        doc = json.loads((out / "replay.json").read_text())
        assert doc["tip_rmse"] < 0.05
        assert (out / "replay_tips.csv").exists()

    def test_bad_polynomial_arg(self, tmp_path, warm_solver, capsys):
        assert run([
            "ftl", "--preset", "prototype1", "--tau-des", "0.45",
            "--delta-eta", "0.25", "--out", str(tmp_path / "x"),
            "--replay-polynomial", "a,b",
        ]) == 2
