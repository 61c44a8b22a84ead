import json

import numpy as np
import pytest

from tenscomp.cli import main
from tenscomp.dtf import load_tensor, save_tensor
from tenscomp.experiment import CompletionReport, ExperimentConfig, run_experiment
from tenscomp.solver import SolverConfig, generate_mask
from tenscomp.synthetic import bundled_fixture_path, low_tubal_rank
from tenscomp.tensor_ops import project_mask

REPORT_KEYS = {
    "psnr",
    "ssim",
    "ergas",
    "rel_error",
    "iterations",
    "wall_time_s",
    "config",
    "trace_path",
}


@pytest.fixture
def truth_file(tmp_path):
    path = tmp_path / "truth.dtf"
    save_tensor(low_tubal_rank((16, 16, 5), 2, seed=3), path)
    return path


def complete_args(tmp_path, truth_file, **extra):
    args = [
        "complete",
        "--input", str(truth_file),
        "--truth", str(truth_file),
        "--rate", "0.5",
        "--seed", "7",
        "--method", "bemcp",
        "--out", str(tmp_path / "out.dtf"),
        "--report", str(tmp_path / "report.json"),
    ]
    for flag, value in extra.items():
        args += [f"--{flag}", str(value)]
    return args


class TestCompleteCommand:
    def test_end_to_end_writes_artifacts(self, tmp_path, truth_file):
        rc = main(complete_args(tmp_path, truth_file, trace=tmp_path / "trace.csv"))
        assert rc == 0
        report = json.loads((tmp_path / "report.json").read_text())
        assert set(report) == REPORT_KEYS
        assert report["rel_error"] <= 1e-2
        assert report["iterations"] >= 1

        lines = (tmp_path / "trace.csv").read_text().strip().splitlines()
        assert lines[0] == "iter,inf_norm_diff,elapsed_s,psnr"
        assert len(lines) == report["iterations"] + 1
        last = lines[-1].split(",")
        assert float(last[1]) <= report["config"]["solver"]["eps"]

        completed = load_tensor(tmp_path / "out.dtf")
        truth = load_tensor(truth_file)
        mask = generate_mask(truth.shape, 0.5, 7)
        assert np.array_equal(completed[mask], truth[mask])

    def test_deterministic_output_bytes(self, tmp_path, truth_file):
        assert main(complete_args(tmp_path, truth_file)) == 0
        first = (tmp_path / "out.dtf").read_bytes()
        assert main(complete_args(tmp_path, truth_file)) == 0
        assert (tmp_path / "out.dtf").read_bytes() == first

    def test_full_rate_caps_psnr(self, tmp_path, truth_file):
        rc = main(complete_args(tmp_path, truth_file, rate=1.0))
        assert rc == 0
        report = json.loads((tmp_path / "report.json").read_text())
        assert report["psnr"] == 999.0
        assert report["iterations"] == 0

    def test_methods_produce_distinct_converged_reports(self, tmp_path, truth_file):
        outs = {}
        for method in ("nmcp", "emcp", "bemcp"):
            rc = main(complete_args(tmp_path, truth_file, method=method))
            assert rc == 0
            report = json.loads((tmp_path / "report.json").read_text())
            assert report["rel_error"] is not None
            outs[method] = (tmp_path / "out.dtf").read_bytes()
        assert outs["nmcp"] != outs["bemcp"]

    def test_mask_file_source(self, tmp_path, truth_file):
        truth = load_tensor(truth_file)
        mask = generate_mask(truth.shape, 0.5, 21)
        mask_path = tmp_path / "mask.dtf"
        save_tensor(mask.astype(float), mask_path)
        rc = main(
            [
                "complete",
                "--input", str(truth_file),
                "--truth", str(truth_file),
                "--mask", str(mask_path),
                "--out", str(tmp_path / "out.dtf"),
                "--report", str(tmp_path / "report.json"),
            ]
        )
        assert rc == 0
        completed = load_tensor(tmp_path / "out.dtf")
        assert np.array_equal(completed[mask], truth[mask])

    def test_config_file_with_flag_override(self, tmp_path, truth_file):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(
            json.dumps(
                {
                    "input_path": str(truth_file),
                    "truth_path": str(truth_file),
                    "rate": 0.5,
                    "out_path": str(tmp_path / "out.dtf"),
                    "report_path": str(tmp_path / "report.json"),
                    "solver": {"method": "nmcp", "max_iter": 30, "seed": 7},
                }
            )
        )
        rc = main(["complete", "--config", str(cfg_path), "--method", "bemcp"])
        assert rc == 0
        report = json.loads((tmp_path / "report.json").read_text())
        assert report["config"]["solver"]["method"] == "bemcp"  # flag wins
        assert report["config"]["solver"]["max_iter"] == 30  # file value kept

    def test_error_exits_nonzero(self, tmp_path, capsys):
        rc = main(
            [
                "complete",
                "--input", str(tmp_path / "missing.dtf"),
                "--rate", "0.5",
                "--seed", "1",
                "--out", str(tmp_path / "out.dtf"),
                "--report", str(tmp_path / "report.json"),
            ]
        )
        assert rc == 1
        assert "error" in capsys.readouterr().err

    def test_both_mask_sources_rejected(self, tmp_path, truth_file):
        rc = main(
            complete_args(tmp_path, truth_file, mask=truth_file)
        )
        assert rc == 1

    def test_missing_required_setting(self, tmp_path, truth_file):
        rc = main(
            [
                "complete",
                "--input", str(truth_file),
                "--rate", "0.5",
                "--out", str(tmp_path / "out.dtf"),
            ]
        )
        assert rc == 1


class TestRankCommand:
    def test_prints_rank_vector(self, tmp_path, capsys):
        t = low_tubal_rank((10, 10, 4), 2, seed=5)
        path = tmp_path / "t.dtf"
        save_tensor(t, path)
        assert main(["rank", "--input", str(path)]) == 0
        out = capsys.readouterr().out.split()
        assert len(out) == 3
        assert int(out[0]) == 2


class TestMaskCommand:
    def test_generates_expected_mask(self, tmp_path):
        out = tmp_path / "mask.dtf"
        rc = main(
            ["mask", "--shape", "6,5,4", "--rate", "0.25", "--seed", "9",
             "--out", str(out)]
        )
        assert rc == 0
        mask = load_tensor(out)
        assert mask.shape == (6, 5, 4)
        assert set(np.unique(mask)) <= {0.0, 1.0}
        assert mask.sum() == round(0.25 * 120)
        assert np.array_equal(mask.astype(bool), generate_mask((6, 5, 4), 0.25, 9))


class TestExperimentApi:
    def test_without_truth_reports_null_metrics(self, tmp_path):
        truth = low_tubal_rank((10, 10, 3), 2, seed=8)
        mask = generate_mask(truth.shape, 0.6, 1)
        observed = project_mask(truth, mask)
        obs_path = tmp_path / "obs.dtf"
        mask_path = tmp_path / "mask.dtf"
        save_tensor(observed, obs_path)
        save_tensor(mask.astype(float), mask_path)
        cfg = ExperimentConfig(
            input_path=str(obs_path),
            out_path=str(tmp_path / "out.dtf"),
            report_path=str(tmp_path / "report.json"),
            mask_path=str(mask_path),
            solver=SolverConfig(max_iter=50),
        )
        report = run_experiment(cfg)
        assert report.psnr is None and report.rel_error is None
        assert report.iterations >= 1
        parsed = json.loads((tmp_path / "report.json").read_text())
        assert parsed["psnr"] is None

    def test_report_json_round_trip(self, tmp_path):
        report = CompletionReport(
            psnr=31.5,
            ssim=0.9,
            ergas=12.0,
            rel_error=0.01,
            iterations=42,
            wall_time_s=1.25,
            config={"solver": {"method": "bemcp"}},
            trace_path=None,
        )
        again = CompletionReport.from_json(report.to_json())
        assert again == report

    def test_config_validation(self, tmp_path):
        with pytest.raises(ValueError, match="mask source"):
            ExperimentConfig(
                input_path="a", out_path="b", report_path="c"
            )
        with pytest.raises(ValueError, match="rate"):
            ExperimentConfig(
                input_path="a", out_path="b", report_path="c", rate=1.5
            )

    def test_config_dict_round_trip(self):
        cfg = ExperimentConfig(
            input_path="in.dtf",
            out_path="out.dtf",
            report_path="rep.json",
            rate=0.3,
            solver=SolverConfig(method="emcp", max_iter=10),
        )
        again = ExperimentConfig.from_dict(cfg.to_dict())
        assert again == cfg


class TestBundledFixture:
    def test_fixture_loads_and_has_low_rank_first_unfolding(self):
        from tenscomp.tsvd import n_tubal_rank

        t = load_tensor(str(bundled_fixture_path()))
        assert t.shape == (20, 20, 5)
        assert n_tubal_rank(t)[0] == 2
        assert np.array_equal(t, low_tubal_rank((20, 20, 5), 2, seed=0))
