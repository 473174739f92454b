"""
Tests for the omegapy command line.

The verify tests replace run_suite with canned reports; the full suite
runs in test_acceptance.py.
"""

import csv

import pytest

from omegapy import ConfigError, VerificationReport
from omegapy.cli import (
    EXIT_ERROR, EXIT_FAILED, EXIT_OK, FIGURE_POINTS, SUMMARY_HEADER, RunConfig, build_parser,
    format_reports, main, write_summary,
)

pytestmark = pytest.mark.cli


def _read_csv(path):
    with open(path, newline="") as handle:
        return list(csv.reader(handle))


class TestRunConfig:
    """Test cases for RunConfig validation."""

    def test_defaults(self):
        config = RunConfig()
        assert config.grid_n == 20001 and config.seed == 42 and config.samples == 100_000

    @pytest.mark.parametrize("kwargs", [
        {"grid_n": 999},
        {"h_grid_n": 10},
        {"delta_star_tol": 0.0},
        {"delta_star_tol": 1e-3},
        {"samples": 0},
        {"ac_trials": 0},
        {"workers": 0},
    ])
    def test_rejects(self, kwargs):
        with pytest.raises(ConfigError):
            RunConfig(**kwargs)


class TestEval:
    """Test cases for the eval command."""

    @pytest.mark.parametrize("argv,expected", [
        (["eval", "f1", "0.25"], "0.333333333333333"),
        (["eval", "g", "7"], "7"),
        (["eval", "f", "0"], "0"),
        (["eval", "h", "1"], "1"),
    ])
    def test_values(self, capsys, argv, expected):
        assert main(argv) == EXIT_OK
        assert capsys.readouterr().out.strip() == expected

    def test_outside_domain(self, capsys):
        """Test a domain error exits with 2 and a message on stderr."""
        assert main(["eval", "g", "8"]) == EXIT_ERROR
        assert "error" in capsys.readouterr().err

    def test_unknown_name(self):
        """Test argparse rejects names outside the gallery."""
        with pytest.raises(SystemExit) as info:
            main(["eval", "nope", "0.5"])
        assert info.value.code == 2


class TestModulus:
    """Test cases for the modulus command."""

    def test_closed_form_to_stdout(self, capsys):
        assert main(["modulus", "g", "--closed-form", "--grid-n", "1001"]) == EXIT_OK
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "delta,omega"
        assert lines[1] == "0,0"
        assert lines[-1] == "7,7"
        assert len(lines) == 1002

    def test_grid_to_file(self, tmp_path):
        out = tmp_path / "h.csv"
        assert main(["modulus", "h", "--grid-n", "1001", "--out", str(out)]) == EXIT_OK
        rows = _read_csv(out)
        assert rows[0] == ["delta", "omega"]
        assert len(rows) == 1002
        assert float(rows[-1][0]) == 2.0

    def test_closed_form_only_for_g(self, capsys):
        assert main(["modulus", "f", "--closed-form", "--grid-n", "1001"]) == EXIT_ERROR
        assert "closed form" in capsys.readouterr().err

    def test_small_grid_rejected(self, capsys):
        assert main(["modulus", "g", "--grid-n", "500"]) == EXIT_ERROR
        assert "grid_n" in capsys.readouterr().err

    def test_unwritable_output(self, tmp_path):
        """Test an I/O error exits with 2."""
        out = tmp_path / "missing" / "table.csv"
        assert main(["modulus", "h", "--grid-n", "1001", "--out", str(out)]) == EXIT_ERROR


class TestFigures:
    """Test cases for the figures command."""

    def test_files(self, tmp_path):
        assert main(["figures", "--out-dir", str(tmp_path), "--grid-n", "1001"]) == EXIT_OK

        fig1 = _read_csv(tmp_path / "fig1_f_g.csv")
        assert fig1[0] == ["x", "f", "g"]
        assert len(fig1) == FIGURE_POINTS + 1
        assert fig1[-1] == ["7", "7", "7"]
        # f is flat at 2.5 while g follows the identity
        x, f, g = (float(v) for v in min(fig1[1:], key=lambda r: abs(float(r[0]) - 2.5)))
        assert f == pytest.approx(2.5, abs=1e-2)
        assert g == pytest.approx(x, abs=1e-12)

        fig2 = _read_csv(tmp_path / "fig2_omega.csv")
        assert fig2[0] == ["delta", "omega_closed", "omega_grid"]
        assert len(fig2) == 1002
        assert float(fig2[-1][1]) == pytest.approx(7.0)

        fig3 = _read_csv(tmp_path / "fig3_h.csv")
        assert fig3[0] == ["x", "h"]
        by_x = {float(r[0]): float(r[1]) for r in fig3[1:]}
        assert by_x[1.0] == pytest.approx(1.0)
        assert by_x[2.0] == pytest.approx(0.0, abs=1e-12)


def _canned_reports():
    return [
        VerificationReport("endpoints", 4, 0.0, 1e-12),
        VerificationReport("closed_form", 1001, 2.5e-3, 5e-3),
    ]


class TestVerify:
    """Test cases for the verify command with a stubbed suite."""

    def test_all_passed(self, monkeypatch, tmp_path, capsys):
        monkeypatch.setattr("omegapy.cli.run_suite", lambda **kwargs: _canned_reports())
        summary = tmp_path / "summary.csv"
        assert main(["verify", "--grid-n", "1001", "--summary", str(summary)]) == EXIT_OK

        out = capsys.readouterr().out
        assert out.startswith("delta* = 0.17")
        assert "closed_form" in out
        assert out.strip().endswith("2/2 checks passed")

        lines = summary.read_text().splitlines()
        assert lines[0] == SUMMARY_HEADER
        assert lines[1] == "endpoints,4,0,1e-12,true"
        assert lines[2] == "closed_form,1001,0.0025,0.005,true"

    def test_failure_exit_code(self, monkeypatch, tmp_path, capsys):
        failing = _canned_reports() + [VerificationReport("h_modulus", 10, 1.0, 5e-3)]
        monkeypatch.setattr("omegapy.cli.run_suite", lambda **kwargs: failing)
        assert main(["verify", "--summary", str(tmp_path / "s.csv")]) == EXIT_FAILED
        assert "2/3 checks passed" in capsys.readouterr().out

    def test_arguments_reach_the_suite(self, monkeypatch, tmp_path):
        seen = {}

        def fake_suite(**kwargs):
            seen.update(kwargs)
            return _canned_reports()

        monkeypatch.setattr("omegapy.cli.run_suite", fake_suite)
        main(["--workers", "3", "verify", "--grid-n", "1500", "--seed", "9", "--samples", "77",
              "--summary", ""])
        assert seen["grid_n"] == 1500 and seen["seed"] == 9 and seen["samples"] == 77
        assert seen["workers"] == 3

    def test_format_reports(self):
        table = format_reports(_canned_reports())
        assert "endpoints" in table.get_string()
        assert len(table.rows) == 2

    def test_write_summary(self, tmp_path):
        path = tmp_path / "out.csv"
        write_summary(str(path), [])
        assert path.read_text() == SUMMARY_HEADER + "\n"


def test_version(capsys):
    with pytest.raises(SystemExit):
        build_parser().parse_args(["--version"])
    assert "omegapy" in capsys.readouterr().out


def test_command_required():
    with pytest.raises(SystemExit):
        main([])
