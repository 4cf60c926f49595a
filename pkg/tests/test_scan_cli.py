import json
import math

import pytest

import cavimode.scan
from cavimode import (
    ConfigError,
    MembraneSpec,
    NoRootInWindowError,
    PRESET_NAMES,
    ScanRequest,
    parse_request,
    preset,
    render_csv,
    render_json,
    render_request,
    run_scan,
    strong_coupling_report,
)
from cavimode.cli import main

from conftest import make_config


def small_request(**kwargs):
    defaults = dict(kind="shift-1d", config=make_config(rm=0.5),
                    a_start=-0.2, a_stop=0.2, a_points=11,
                    methods=("exact", "zeroth"))
    defaults.update(kwargs)
    return ScanRequest(**defaults)


def test_row_count_matches_grid():
    res = run_scan(small_request(a_points=101), threads=1)
    assert len(res.records) == 101
    res2 = run_scan(small_request(rm_values=(0.2, 0.5), a_points=7))
    assert len(res2.records) == 14


def test_rows_in_sweep_order_and_columns_fixed():
    res = run_scan(small_request(a_points=5))
    txt = render_csv(res)
    lines = txt.splitlines()
    assert lines[0] == "a,q_m,Q_m,Rm,dk_exact,dk_zeroth,dk_first,Tc_max,converged"
    a_values = [float(line.split(",")[0]) for line in lines[1:]]
    assert a_values == sorted(a_values)
    assert len(lines) == 6


def test_threaded_and_serial_outputs_identical():
    req = small_request(rm_values=(0.3, 0.6, 0.9), a_points=9)
    serial = render_csv(run_scan(req, threads=1))
    threaded = render_csv(run_scan(req, threads=8))
    assert serial == threaded


def test_failed_points_are_flagged_not_dropped(monkeypatch):
    real = cavimode.scan.exact_shift

    def flaky(cfg, m, near_k=None):
        if cfg.separation_m > 1.12e-05:
            raise NoRootInWindowError("synthetic failure")
        return real(cfg, m, near_k=near_k)

    monkeypatch.setattr(cavimode.scan, "exact_shift", flaky)
    res = run_scan(small_request(a_points=11), threads=1)
    assert len(res.records) == 11
    failed = [r for r in res.records if not r.converged]
    assert failed and all(r.error == "no-root" for r in failed)
    assert res.summary["failed_points"] == len(failed)
    assert "no-root" in res.summary["errors"]


def test_presets_round_trip_through_serialization():
    for name in PRESET_NAMES:
        req = preset(name)
        assert parse_request(render_request(req)) == req


def test_preset_parameters_match_recipes():
    fig2b = preset("fig2b")
    assert fig2b.config.mirror_reflectivity == 0.9999
    assert fig2b.config.length_m == 0.01
    assert fig2b.config.wavelength_m == 1064e-9
    assert fig2b.config.com_offset_m == 0.0
    assert fig2b.config.membrane.phase == 0.0
    assert fig2b.rm_values == (0.5, 0.8, 0.95)
    assert fig2b.a_points == 201

    fig3a = preset("fig3a")
    assert fig3a.config.membrane.phase == pytest.approx(math.pi / 6)
    assert fig3a.config.com_offset_m == pytest.approx(100 * 1064e-9)
    assert fig3a.config.membrane.reflectivity == 0.2

    fig4 = preset("fig4")
    assert fig4.config.membrane.reflectivity == 0.999
    assert fig4.config.mirror_reflectivity == 0.9999
    assert fig4.kind == "finesse-scan"

    fig2c = preset("fig2c")
    assert fig2c.rm_values == tuple(1 - t for t in (2e-3, 1e-3, 1e-4, 1e-5, 1e-6))


def test_unknown_preset_and_bad_config_rejected():
    with pytest.raises(ConfigError):
        preset("fig9")
    with pytest.raises(ConfigError):
        parse_request("separation_m = 1e-5\nbogus_key = 3\n")
    with pytest.raises(ConfigError):
        parse_request("kind = shift-1d\n")  # missing separation


def test_config_file_overrides(tmp_path):
    req = small_request()
    path = tmp_path / "run.cfg"
    path.write_text(render_request(req))
    parsed = parse_request(path.read_text(), {"methods": "exact"})
    assert parsed.methods == ("exact",)


def test_json_rendering_parses_back():
    res = run_scan(small_request(a_points=5))
    data = json.loads(render_json(res))
    assert data["columns"][0] == "a"
    assert len(data["rows"]) == 5
    assert data["summary"]["failed_points"] == 0


def test_strong_coupling_report_contents():
    report = strong_coupling_report(preset("strong-coupling-report"))
    assert report["enhancement_L_over_2q"] == pytest.approx(500.0, rel=1e-12)
    assert report["finesse"] == 6e4
    assert report["cooperativity"] == pytest.approx(1.0e6, rel=0.5)
    assert json.dumps(report)  # json-serializable, no NaN leaks


def test_report_requires_mechanics():
    req = small_request(kind="coupling-report")
    with pytest.raises(ConfigError):
        strong_coupling_report(req)


def test_invalid_sweep_bounds_rejected():
    with pytest.raises(ConfigError):
        small_request(a_start=-20.0, a_stop=0.0)  # q goes negative
    with pytest.raises(ConfigError):
        small_request(a_points=1)
    with pytest.raises(ConfigError):
        small_request(methods=("exact", "imaginary"))
    with pytest.raises(ConfigError):
        small_request(kind="spiral")


def test_cli_scan_writes_csv(tmp_path, capsys):
    out = tmp_path / "out.csv"
    cfg_file = tmp_path / "run.cfg"
    cfg_file.write_text(render_request(small_request(a_points=5)))
    code = main(["scan", "--config", str(cfg_file), "--method", "zeroth",
                 "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 6
    row = lines[1].split(",")
    assert row[4] == ""      # exact not requested
    assert row[5] != ""      # zeroth present


def test_cli_json_format(tmp_path):
    out = tmp_path / "out.json"
    code = main(["scan", "--preset", "fig4", "--format", "json",
                 "--out", str(out)])
    assert code == 0
    data = json.loads(out.read_text())
    assert data["summary"]["kind"] == "finesse-scan"
    assert len(data["rows"]) == 100


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["scan", "--preset", "not-a-preset", "--out", "-"]) == 2
    bad = tmp_path / "bad.cfg"
    bad.write_text("separation_m = banana\n")
    assert main(["scan", "--config", str(bad), "--out", "-"]) == 2
    assert main(["scan", "--preset", "fig4",
                 "--out", str(tmp_path / "no" / "dir" / "x.csv")]) == 3
    capsys.readouterr()


def test_cli_report_prints_figures(capsys):
    assert main(["report", "strong-coupling"]) == 0
    out = capsys.readouterr().out
    assert "g_over_kappa" in out
    assert "cooperativity" in out


def test_cli_presets_listing(capsys):
    assert main(["presets"]) == 0
    names = capsys.readouterr().out.split()
    assert set(PRESET_NAMES) <= set(names)
    assert main(["presets", "--show", "fig2b"]) == 0
    shown = capsys.readouterr().out
    assert "rm_values" in shown
