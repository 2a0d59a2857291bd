"""Validation suite plumbing and the command-line surface."""

import json
import math
import subprocess
import sys

import numpy as np
import pytest

from casimir_cavity import (
    AtomSpec,
    Constraint,
    ForceResult,
    run_validation,
    wall_force_fixed_position,
    wall_force_fixed_ratio,
)
from casimir_cavity.cli import main, parse_angular, parse_grid


class TestValidation:
    def test_fast_groups_pass(self):
        rep = run_validation(seed=3, n_sets=2,
                             groups=("specfun", "sum_rule", "term_identity",
                                     "mirror"))
        assert rep["passed"], rep["failed"]

    def test_deterministic_reports(self):
        a = run_validation(seed=11, n_sets=1, groups=("specfun", "sum_rule"))
        b = run_validation(seed=11, n_sets=1, groups=("specfun", "sum_rule"))
        assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)

    def test_injected_sign_flip_is_caught(self):
        # flip the sign of the symmetry-breaking series in the
        # fixed-position wall force; the FD reconciliation must fail
        def flipped(cavity, atom, model, ctl):
            base = wall_force_fixed_ratio(cavity, atom, model, ctl)
            full = wall_force_fixed_position(cavity, atom, model, ctl)
            term2 = full.value - base.value
            return ForceResult(base.value - term2, full.error_bound,
                               Constraint.FIXED_POSITION)

        rep = run_validation(seed=5, n_sets=2, groups=("fd",),
                             analytic_overrides={Constraint.FIXED_POSITION: flipped})
        failed = [n for n in rep["failed"] if "fixed-position" in n]
        assert failed, "the sign flip went undetected"

    def test_clean_fd_has_no_suspects(self):
        rep = run_validation(seed=7, n_sets=2, groups=("fd",))
        assert rep["passed"]
        assert rep["suspect_analytic_forces"] == []


class TestParsers:
    @pytest.mark.parametrize("text,want", [
        ("2pi", 2 * math.pi),
        ("pi", math.pi),
        ("4pi", 4 * math.pi),
        ("2pi*3", 6 * math.pi),
        ("2*pi", 2 * math.pi),
        ("6.28", 6.28),
        ("0.5pi", 0.5 * math.pi),
    ])
    def test_angular(self, text, want):
        assert parse_angular(text) == pytest.approx(want, rel=1e-15)

    def test_grid_count(self):
        g = parse_grid("5", 0.0, 1.0)
        assert np.allclose(g, [0, 0.25, 0.5, 0.75, 1.0])

    def test_grid_explicit(self):
        assert np.allclose(parse_grid("0,0.3,0.9", 0, 1), [0, 0.3, 0.9])
        assert np.allclose(parse_grid("0.5", 0, 1), [0.5])


class TestCli:
    def _read_csv(self, path):
        rows = []
        header = None
        for line in open(path):
            if line.startswith("#"):
                continue
            if header is None:
                header = line.strip().split(",")
            else:
                rows.append(line.strip().split(","))
        return header, rows

    def test_energy_command(self, tmp_path):
        out = tmp_path / "e.csv"
        rc = main(["energy", "--x-grid", "0,0.5", "--out", str(out)])
        assert rc == 0
        header, rows = self._read_csv(out)
        assert header == ["x_d", "energy", "error_bound", "path"]
        assert float(rows[0][1]) == 0.0        # Dirichlet wall
        assert float(rows[1][1]) == pytest.approx(-5.0660591821e-10, rel=1e-9)
        manifest = json.loads((tmp_path / "e.csv.manifest.json").read_text())
        assert manifest["command"] == "energy"
        assert str(out) in manifest["outputs"]
        assert manifest["tool_version"]

    def test_energy_closed_form_path(self, tmp_path):
        out = tmp_path / "e.csv"
        rc = main(["energy", "--x-grid", "0.3", "--use-closed-form",
                   "--out", str(out)])
        assert rc == 0
        _, rows = self._read_csv(out)
        assert rows[0][3] == "closed_form"

    def test_energy_wall_error_row_is_nan(self, tmp_path):
        out = tmp_path / "e.csv"
        rc = main(["energy", "--x-grid", "0,0.4", "--use-closed-form",
                   "--out", str(out)])
        assert rc == 0
        _, rows = self._read_csv(out)
        assert rows[0][3] == "error" and math.isnan(float(rows[0][1]))

    def test_force_csv_deterministic_and_threaded(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        argv = ["force", "--constraint", "fixed-position", "--x-grid", "9"]
        assert main(argv + ["--out", str(a)]) == 0
        assert main(argv + ["--out", str(b), "--threads", "4"]) == 0

        def data(p):
            return [ln for ln in p.read_text().splitlines()
                    if not ln.startswith("#")]

        # identical data rows regardless of thread count / output path
        assert data(a) == data(b)
        c = tmp_path / "a2.csv"
        a.rename(c)
        assert main(argv + ["--out", str(a)]) == 0
        assert a.read_bytes() == c.read_bytes()

    def test_force_alpha_sweep_manifest(self, tmp_path):
        out = tmp_path / "alpha.csv"
        rc = main(["force", "--sweep", "alpha", "--coupling", "smeared",
                   "--alpha-grid", "21", "--x", "0.1", "--out", str(out)])
        assert rc == 0
        man = json.loads((tmp_path / "alpha.csv.manifest.json").read_text())
        assert 0.0 < float(man["parameters"]["alpha_star"]) < 1.0

    def test_force_atom_center_zero_row(self, tmp_path):
        out = tmp_path / "f.csv"
        rc = main(["force", "--constraint", "atom", "--x-grid", "0.5",
                   "--out", str(out)])
        assert rc == 0
        _, rows = self._read_csv(out)
        assert float(rows[0][1]) == 0.0

    def test_medium_zero_table(self, tmp_path):
        out = tmp_path / "m.csv"
        rc = main(["medium", "--N-max", "0", "--out", str(out)])
        assert rc == 0
        _, rows = self._read_csv(out)
        assert len(rows) == 1 and float(rows[0][1]) == 0.0

    def test_medium_si_columns(self, tmp_path):
        out = tmp_path / "m.csv"
        rc = main(["medium", "--N-max", "3", "--si", "--L-meters", "0.5",
                   "--out", str(out)])
        assert rc == 0
        header, rows = self._read_csv(out)
        assert header == ["N", "medium_force", "empty_casimir", "total"]
        assert float(rows[0][2]) == pytest.approx(-1.65537e-26, rel=1e-5)

    def test_medium_pair_sweep_positive(self, tmp_path):
        out = tmp_path / "p.csv"
        rc = main(["medium", "--pair", "--symmetric-sweep", "6",
                   "--out", str(out)])
        assert rc == 0
        _, rows = self._read_csv(out)
        assert len(rows) == 6
        assert all(float(r[1]) > 0 for r in rows)

    def test_medium_find_critical_no_crossing(self, tmp_path):
        out = tmp_path / "m.csv"
        rc = main(["medium", "--find-critical", "--N-max", "50",
                   "--lambda", "0.0", "--out", str(out)])
        assert rc == 0
        man = json.loads((tmp_path / "m.csv.manifest.json").read_text())
        assert "no_crossing" in man["parameters"]

    def test_medium_find_critical_crossing(self, tmp_path):
        out = tmp_path / "m.csv"
        rc = main(["medium", "--find-critical", "--N-max", "2000",
                   "--lambda", "0.2", "--out", str(out)])
        assert rc == 0
        man = json.loads((tmp_path / "m.csv.manifest.json").read_text())
        assert float(man["parameters"]["N_star"]) > 1

    def test_convert_output(self, capsys):
        rc = main(["convert", "--value", "-0.13089969", "--unit", "force",
                   "--L-meters", "0.5"])
        assert rc == 0
        out = capsys.readouterr().out
        assert out.split()[1] == "N"
        assert float(out.split()[0]) == pytest.approx(-1.65537e-26, rel=1e-5)

    def test_usage_error_exit_code(self):
        proc = subprocess.run(
            [sys.executable, "-m", "casimir_cavity.cli", "energy",
             "--boundary", "periodic"],
            capture_output=True)
        assert proc.returncode == 2

    def test_env_thread_override(self, tmp_path, monkeypatch):
        monkeypatch.setenv("CASIMIR_CAVITY_THREADS", "2")
        out = tmp_path / "e.csv"
        assert main(["energy", "--x-grid", "4", "--out", str(out)]) == 0
