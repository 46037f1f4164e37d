import json
import math
import subprocess
import sys

import numpy as np
import pytest


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "qwire", *args],
        capture_output=True,
        text=True,
    )


def parse_csv(text):
    lines = text.strip().split("\n")
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return header, rows


class TestDispersionCommand:
    def test_ring_d6(self):
        proc = run_cli("dispersion", "--topology", "ring", "--d", "6", "--A", "1")
        assert proc.returncode == 0
        header, rows = parse_csv(proc.stdout)
        assert header == ["j", "k_b", "energy", "eigenvalue", "deviation"]
        assert len(rows) == 6
        energies = sorted(float(r[2]) for r in rows)
        assert np.allclose(energies, [-2, -1, -1, 1, 1, 2], atol=1e-12)

    def test_line_with_offsets(self):
        proc = run_cli("dispersion", "--topology", "line", "--d", "13",
                       "--E0", "2", "--A", "0.5")
        assert proc.returncode == 0
        _, rows = parse_csv(proc.stdout)
        assert len(rows) == 13
        assert all(float(r[4]) <= 1e-10 for r in rows)

    def test_small_d_rejected(self):
        proc = run_cli("dispersion", "--topology", "ring", "--d", "1")
        assert proc.returncode == 2
        assert "d must be >= 2" in proc.stderr

    def test_csv_round_trips(self):
        proc = run_cli("dispersion", "--topology", "ring", "--d", "5")
        _, rows = parse_csv(proc.stdout)
        for row in rows:
            for cell in row[1:]:
                assert repr(float(cell)) == cell

    def test_json_format(self):
        proc = run_cli("dispersion", "--topology", "ring", "--d", "4", "--format", "json")
        payload = json.loads(proc.stdout)
        assert payload["max_deviation"] <= 1e-10
        assert len(payload["rows"]) == 4


class TestWeylCheckCommand:
    def test_d8_report(self):
        proc = run_cli("weyl-check", "--d", "8")
        assert proc.returncode == 0
        payload = json.loads(proc.stdout)
        assert list(payload) == [
            "d", "phase_re", "phase_im", "shift_pow_residual", "clock_pow_residual",
            "commutation_residual", "global_phase_re", "global_phase_im",
            "residual", "holds",
        ]
        assert abs(payload["phase_re"] - math.cos(2 * math.pi / 8)) <= 1e-12
        assert abs(payload["phase_im"] + math.sin(2 * math.pi / 8)) <= 1e-12
        assert payload["holds"] is True

    def test_d2_anticommuting_pair(self):
        payload = json.loads(run_cli("weyl-check", "--d", "2").stdout)
        assert abs(payload["phase_re"] + 1.0) <= 1e-12
        assert abs(payload["phase_im"]) <= 1e-12

    def test_d1_rejected(self):
        proc = run_cli("weyl-check", "--d", "1")
        assert proc.returncode == 2


class TestPstCommand:
    def test_transfer_chain(self, tmp_path):
        out = tmp_path / "curve.csv"
        proc = run_cli("pst", "--d", "8", "--vartheta", "1", "--t-max", "3.2",
                       "--samples", "400", "--output", str(out))
        assert proc.returncode == 0
        summary = json.loads(proc.stdout)
        assert list(summary) == ["d", "vartheta", "t_star", "peak_fidelity",
                                 "period", "uniform"]
        assert summary["peak_fidelity"] >= 1 - 1e-8
        assert abs(summary["t_star"] - math.pi / 2) <= 1e-12
        header, rows = parse_csv(out.read_text())
        assert header == ["t", "fidelity"]
        assert len(rows) == 400
        # the sampled curve peaks next to the reported crossing time
        best = max(rows, key=lambda r: float(r[1]))
        assert abs(float(best[0]) - summary["t_star"]) <= 3.2 / 399

    def test_uniform_contrast_still_exits_zero(self, tmp_path):
        out = tmp_path / "uniform.csv"
        proc = run_cli("pst", "--d", "8", "--vartheta", "1", "--t-max", "20",
                       "--samples", "500", "--uniform", "--output", str(out))
        assert proc.returncode == 0
        summary = json.loads(proc.stdout)
        assert summary["uniform"] is True
        assert summary["peak_fidelity"] < 1.0

    def test_two_site_peak_at_quarter_period(self, tmp_path):
        out = tmp_path / "d2.csv"
        proc = run_cli("pst", "--d", "2", "--vartheta", "1", "--t-max", "3.2",
                       "--samples", "400", "--output", str(out))
        summary = json.loads(proc.stdout)
        assert abs(summary["t_star"] - math.pi / 2) <= 1e-12

    def test_bad_samples_rejected(self):
        proc = run_cli("pst", "--d", "4", "--samples", "1")
        assert proc.returncode == 2
        assert "samples" in proc.stderr


class TestSectorCheckCommand:
    def test_uniform_chain(self):
        proc = run_cli("sector-check", "--n", "6")
        assert proc.returncode == 0
        payload = json.loads(proc.stdout)
        assert list(payload) == ["n", "pst", "max_deviation", "holds"]
        assert payload["max_deviation"] <= 1e-12

    def test_transfer_profile(self):
        proc = run_cli("sector-check", "--n", "4", "--pst")
        assert proc.returncode == 0
        payload = json.loads(proc.stdout)
        assert payload["pst"] is True
        assert payload["holds"] is True

    def test_n1_rejected(self):
        assert run_cli("sector-check", "--n", "1").returncode == 2

    def test_cap_exceeded(self):
        proc = run_cli("sector-check", "--n", "11")
        assert proc.returncode == 3
        assert "cap" in proc.stderr


class TestOptimizeCommand:
    def test_recovers_profile(self, tmp_path):
        out = tmp_path / "opt.json"
        proc = run_cli("optimize", "--d", "4", "--t-target", "1.5707963",
                       "--init", "uniform", "--seed", "7", "--output", str(out))
        assert proc.returncode == 0
        payload = json.loads(out.read_text())
        assert list(payload) == ["d", "couplings", "fidelity", "iterations", "converged"]
        assert payload["converged"] is True
        assert payload["fidelity"] >= 0.999
        target = np.array([math.sqrt(3), 2.0, math.sqrt(3)]) / 2.0
        recovered = np.abs(payload["couplings"])
        assert np.all(np.abs(recovered - target) <= 0.02 * target)

    def test_two_site_coupling_after_gauge_fix(self):
        proc = run_cli("optimize", "--d", "2", "--t-target", "1.5707963267948966",
                       "--init", "random", "--seed", "5")
        payload = json.loads(proc.stdout)
        assert abs(payload["couplings"][0]) == 1.0

    def test_seed_reproducibility(self, tmp_path):
        args = ("optimize", "--d", "3", "--t-target", "2.0", "--init", "random",
                "--seed", "11")
        first = tmp_path / "a.json"
        second = tmp_path / "b.json"
        run_cli(*args, "--output", str(first))
        run_cli(*args, "--output", str(second))
        assert first.read_bytes() == second.read_bytes()

    def test_bad_t_target_rejected(self):
        proc = run_cli("optimize", "--d", "4", "--t-target", "-1")
        assert proc.returncode == 2


class TestExitCodesAndDeterminism:
    CASES = [
        ("dispersion", "--topology", "ring", "--d", "6"),
        ("weyl-check", "--d", "5"),
        ("pst", "--d", "4", "--t-max", "3.2", "--samples", "50"),
        ("sector-check", "--n", "4"),
        ("optimize", "--d", "3", "--t-target", "1.6", "--seed", "2",
         "--max-iters", "200"),
    ]

    @pytest.mark.parametrize("args", CASES, ids=lambda a: a[0])
    def test_byte_identical_across_runs(self, args):
        first = run_cli(*args)
        second = run_cli(*args)
        assert first.stdout == second.stdout
        assert first.stderr == second.stderr
        assert first.returncode == second.returncode

    def test_unknown_command_is_usage_error(self):
        assert run_cli("frobnicate").returncode == 2

    def test_missing_required_flag_is_usage_error(self):
        assert run_cli("weyl-check").returncode == 2
