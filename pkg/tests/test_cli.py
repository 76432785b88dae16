import csv
import json
import os
from pathlib import Path

import numpy as np
import pytest

from bcnsim.cli import main

DATA = Path(__file__).parent / "data"

GOLDEN_CONFIG = {
    "num_bns": 2,
    "num_antennas": 2,
    "horizon": 5,
    "replicas": 2,
    "seed": 3,
    "v_param": 100000.0,
    "sweep": {"utility": ["sum", "common"]},
}


def _write_cfg(tmp_path, doc):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(doc))
    return str(path)


class TestRunCommand:
    def test_outputs_written(self, tmp_path):
        cfg = _write_cfg(tmp_path, {"num_bns": 2, "num_antennas": 2, "horizon": 4})
        out = tmp_path / "out"
        assert main(["run", cfg, "--out", str(out)]) == 0
        assert (out / "summary.json").exists()
        assert (out / "slots.csv").exists()
        assert (out / "sweep.csv").exists()

    def test_golden_slots_csv(self, tmp_path):
        # byte-for-byte reproducibility of the per-slot CSV for a fixed seed
        cfg = _write_cfg(tmp_path, GOLDEN_CONFIG)
        out = tmp_path / "out"
        assert main(["run", cfg, "--out", str(out)]) == 0
        got = (out / "slots.csv").read_bytes()
        want = (DATA / "golden_slots.csv").read_bytes()
        assert got == want

    def test_summary_json_shape(self, tmp_path):
        cfg = _write_cfg(tmp_path, GOLDEN_CONFIG)
        out = tmp_path / "out"
        main(["run", cfg, "--out", str(out)])
        doc = json.loads((out / "summary.json").read_text())
        assert len(doc) == 2  # one entry per sweep point
        for entry in doc:
            assert entry["config"]["num_bns"] == 2
            assert entry["aggregate"]["replicas"] == 2
            assert len(entry["replicas"]) == 2
            agg = entry["aggregate"]
            assert {"mean", "se"} <= set(agg["avg_utility"])

    def test_sweep_csv_columns(self, tmp_path):
        cfg = _write_cfg(tmp_path, GOLDEN_CONFIG)
        out = tmp_path / "out"
        main(["run", cfg, "--out", str(out)])
        with open(out / "sweep.csv") as fh:
            rows = list(csv.reader(fh))
        assert rows[0][0] == "utility"
        assert [r[0] for r in rows[1:]] == ["sum", "common"]

    def test_seed_override_changes_output(self, tmp_path):
        cfg = _write_cfg(tmp_path, {"num_bns": 2, "num_antennas": 2, "horizon": 4})
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        main(["run", cfg, "--out", str(out_a), "--seed", "1"])
        main(["run", cfg, "--out", str(out_b), "--seed", "2"])
        assert (out_a / "slots.csv").read_bytes() != (out_b / "slots.csv").read_bytes()

    def test_emit_subset(self, tmp_path):
        cfg = _write_cfg(
            tmp_path,
            {"num_bns": 2, "num_antennas": 2, "horizon": 3, "emit": ["summary_json"]},
        )
        out = tmp_path / "out"
        main(["run", cfg, "--out", str(out)])
        assert (out / "summary.json").exists()
        assert not (out / "slots.csv").exists()
        assert not (out / "sweep.csv").exists()

    def test_bad_config_exit_code(self, tmp_path, capsys):
        cfg = _write_cfg(tmp_path, {"num_bns": 0})
        assert main(["run", cfg]) == 2
        assert "num_bns" in capsys.readouterr().err

    def test_unknown_key_exit_code(self, tmp_path):
        cfg = _write_cfg(tmp_path, {"not_a_field": 1})
        assert main(["run", cfg]) == 2


class TestPresetCommand:
    def test_preset_with_overrides_runs(self, tmp_path):
        out = tmp_path / "out"
        rc = main([
            "preset", "fig9_fbl_range",
            "--override", "horizon=3",
            "--override", "num_bns=2",
            "--override", "num_antennas=2",
            "--replicas", "1",
            "--out", str(out),
        ])
        assert rc == 0
        assert (out / "sweep.csv").exists()
        with open(out / "sweep.csv") as fh:
            rows = list(csv.reader(fh))
        assert len(rows) == 5  # header + 4 blocklength points

    def test_unknown_preset_rejected(self, capsys):
        with pytest.raises(SystemExit):
            main(["preset", "fig99"])

    def test_bad_override_rejected(self, capsys):
        with pytest.raises(SystemExit):
            main(["preset", "fig9_fbl_range", "--override", "no_equals_sign"])


class TestVerifyCommand:
    def test_fbl_suite_passes(self, capsys):
        assert main(["verify", "fbl"]) == 0
        out = capsys.readouterr().out
        assert "[PASS]" in out and "[FAIL]" not in out

    def test_admission_suite_passes(self, capsys):
        assert main(["verify", "admission_oracle"]) == 0
        assert "[PASS]" in capsys.readouterr().out

    def test_unknown_suite_rejected(self):
        with pytest.raises(SystemExit):
            main(["verify", "nonsense"])
