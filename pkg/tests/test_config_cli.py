import math
import subprocess
import sys

import pytest

from mmwave_norm import Alignment, ConfigError, PatternMode, PdfMode
from mmwave_norm.cli import main
from mmwave_norm.config import dump_config, parse_config
from mmwave_norm.csvio import COVERAGE_SCHEMA, MC_SCHEMA, format_cell, render_csv

from conftest import DEG

TWO_TIER_DOC = """
tiers:
  - {power_w: 1.0, density: 1/200}
  - {power_w: 5.0, density: 1/500}
antenna: {mode: explicit, beamwidth_deg: 20, main_gain_db: 10, side_gain_db: -10}
blockage: {los_fraction: 0.117, los_radius_m: 200}
steering_sigma_deg: 4
"""


def test_two_tier_document():
    run = parse_config(TWO_TIER_DOC)
    net = run.network
    assert [t.density for t in net.tiers] == [1 / 200, 1 / 500]
    assert net.bs_pattern.main_gain == pytest.approx(10.0) and net.bs_pattern.side_gain == pytest.approx(0.1)
    assert net.ue_pattern == net.bs_pattern
    assert net.steering_sigma == pytest.approx(4 * DEG)
    assert run.mode is PdfMode.PAPER_LITERAL and run.alignment is Alignment.WITH_ERRORS


def test_derived_antenna_document():
    run = parse_config("antenna: {mode: derived, beamwidth_deg: 20, sidelobe_db: -10}\n")
    assert run.network.bs_pattern.mode is PatternMode.DERIVED
    assert run.network.bs_pattern.main_gain == pytest.approx(16.3, rel=1e-12)


def test_round_trip():
    run = parse_config(TWO_TIER_DOC + "coverage: {mode: rigorous}\nmc: {seed: 42}\n")
    text = dump_config(run)
    again = parse_config(text)
    assert again == run
    assert dump_config(again) == text


@pytest.mark.parametrize(
    "text, field",
    [
        ("channel: {alpha_los: 4, alpha_nlos: 2}\n", "channel"),
        ("fooo: 1\n", "fooo"),
        ("blockage: {los_fraction: 0.1, radius: 3}\n", "blockage.radius"),
        ("tiers: [{power_w: 1, density: abc}]\n", "tiers[0].density"),
        ("antenna: {mode: derived, beamwidth_deg: 20, main_gain_db: 3}\n", "antenna"),
        ("coverage: {mode: exact}\n", "coverage.mode"),
        ("mc: {trials: 0}\n", "mc"),
    ],
)
def test_config_errors_name_field(text, field):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert info.value.field == field
    assert str(info.value).startswith(f"{field}: ")


def test_alpha_order_message():
    with pytest.raises(ConfigError, match="alpha_los must be < alpha_nlos"):
        parse_config("channel: {alpha_los: 4, alpha_nlos: 2}\n")


def test_yaml_syntax_error_location():
    with pytest.raises(ConfigError) as info:
        parse_config("tiers:\n  - {power_w: 1, density: [1\n")
    assert info.value.line is not None and info.value.column is not None
    assert "line" in str(info.value)


def test_format_cell():
    assert format_cell(1 / 3) == "0.333333333"
    assert format_cell(1.0) == "1"
    assert format_cell(1e-20) == "1e-20"
    assert format_cell(math.nan) == "nan"
    assert format_cell(True) == "true" and format_cell(None) == "" and format_cell(7) == "7"


def test_render_csv():
    assert render_csv([], MC_SCHEMA) == ",".join(MC_SCHEMA) + "\n"
    text = render_csv([(0.0, 0.1, 0.2, 0.3, 0.6, "rigorous/perfect")], COVERAGE_SCHEMA)
    assert text.endswith("\n") and text.count("\n") == 2
    with pytest.raises(ValueError):
        render_csv([(1, 2)], COVERAGE_SCHEMA)


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize(
    "argv, header",
    [
        (["densities"], "profile,j,segment_start_m,segment_end_m,density_per_m2,prefactor"),
        (["coverage", "--thresholds-db", "0", "10"], ",".join(COVERAGE_SCHEMA)),
        (["mc", "--trials", "2000", "--thresholds-db", "0"], ",".join(MC_SCHEMA)),
        (["sweep-threshold", "--thresholds-db", "0", "10"], ",".join(COVERAGE_SCHEMA)),
        (["sweep-beamwidth", "--beamwidths-deg", "10", "20"], "beamwidth_deg," + ",".join(COVERAGE_SCHEMA)),
        (["validate", "--trials", "20000", "--thresholds-db", "0", "10"],
         "threshold_db,analytic_rigorous,mc_mean,mc_std_error,z_score,within_3se"),
    ],
)
def test_cli_headers(capsys, argv, header):
    code, out, _ = _run(capsys, *argv)
    assert code == 0
    assert out.splitlines()[0] == header


def test_cli_opt_beamwidth(tmp_path, capsys):
    cfg = tmp_path / "derived.yaml"
    cfg.write_text("antenna: {mode: derived, beamwidth_deg: 20, sidelobe_db: -10}\n")
    code, out, _ = _run(capsys, "--config", str(cfg), "opt-beamwidth", "--thresholds-db", "0")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "threshold_db,beamwidth_deg,p_cov,method,boundary"
    assert lines[1].endswith(",")  # interior optimum: empty boundary cell


def test_cli_output_file(tmp_path, capsys):
    out = tmp_path / "cov.csv"
    code, stdout, _ = _run(capsys, "coverage", "--out", str(out), "--mode", "rigorous")
    assert code == 0 and stdout == ""
    assert "rigorous/with-errors" in out.read_text()


def test_cli_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.yaml"
    bad.write_text("fooo: 1\n")
    code, _, err = _run(capsys, "--config", str(bad), "coverage")
    assert code == 2 and err.startswith("error[config]: fooo")
    assert _run(capsys, "coverage", "--alignment", "sideways")[0] == 2
    assert _run(capsys, "opt-beamwidth")[0] == 2  # explicit default antenna
    assert _run(capsys, "--config", str(tmp_path / "missing.yaml"), "coverage")[0] == 4
    assert _run(capsys, "coverage", "--out", str(tmp_path / "no" / "dir.csv"))[0] == 4


def test_cli_validate_failure_exit(monkeypatch, capsys):
    import mmwave_norm.cli as cli

    real = cli.branch_mirror_curve

    def skewed(sim, thresholds):
        return [type(e)(e.threshold, e.mean + 0.5, e.std_error, e.trials) for e in real(sim, thresholds)]

    monkeypatch.setattr(cli, "branch_mirror_curve", skewed)
    code, out, err = _run(capsys, "validate", "--trials", "2000", "--thresholds-db", "0")
    assert code == 3 and "false" in out and err.startswith("error[numeric]")


def _cli(*argv):
    return subprocess.run(
        [sys.executable, "-m", "mmwave_norm.cli", *argv], capture_output=True, check=True
    ).stdout


@pytest.mark.parametrize(
    "argv",
    [
        ["mc", "--trials", "30000", "--seed", "5"],
        ["mc", "--kind", "physical", "--trials", "3000", "--seed", "5"],
        ["sweep-threshold"],
        ["sweep-beamwidth"],
    ],
)
def test_cli_byte_identical(argv):
    first = _cli(*argv, "--workers", "1")
    assert _cli(*argv, "--workers", "1") == first
    assert _cli(*argv, "--workers", "4") == first
