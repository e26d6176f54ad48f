"""Tests for the command-line runs, their configuration and output artifacts."""

import json
import logging
import os

import pytest

from src.cli.app import run
from src.cli.output import format_value, render_csv, worker_count
from src.cli.run_config import config_keys, load_run_config
from src.cli.selftest import CHECKS, SelfTester
from src.utils.constants import CSV_HEADER
from src.utils.errors import ConfigError


def _rows(path):
    lines = path.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    header = lines[1].split(",")
    return [dict(zip(header, line.split(","))) for line in lines[2:]]


def test_reduce_prints_json(capsys):
    assert run(["reduce", "--raw", "2.7"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["alpha"] == pytest.approx(0.7)
    assert payload["ell"] == 1
    assert payload["conjugated"] is False


def test_reduce_writes_json(tmp_path):
    path = tmp_path / "flux.json"
    assert run(["--output", str(path), "reduce", "--raw=-0.3"]) == 0
    payload = json.loads(path.read_text())
    assert payload == {"alpha": pytest.approx(0.3), "conjugated": True, "ell": 0}


def test_reduce_rejects_integer_flux():
    assert run(["reduce", "--raw", "2"]) == 2


def test_norms_table(tmp_path):
    path = tmp_path / "norms.csv"
    assert run(["--output", str(path), "norms", "--alphas", "0.3,0.6", "--ks", "0,-1"]) == 0
    rows = _rows(path)
    assert len(rows) == 4
    assert all(float(row["rel_err"]) < 1e-7 for row in rows)
    reference = [row for row in rows if row["alpha"] == "0.29999999999999999"
                 and row["k"] == "-1"]
    assert float(reference[0]["closed"]) == pytest.approx(8.53966, abs=1e-5)


@pytest.mark.parametrize("argv", [
    ["norms", "--alpha", "0.4", "--lambdas", "0.5,2"],
    ["boundstates", "--alpha", "0.4", "--b00", "-20", "--b11", "-15", "--b01-re", "3",
     "--b01-im", "-1", "--bracket", "0.001", "50"],
])
def test_runs_are_byte_identical(tmp_path, argv):
    first, second = tmp_path / "first.csv", tmp_path / "second.csv"
    assert run(["--output", str(first)] + argv) == 0
    assert run(["--output", str(second)] + argv) == 0
    assert first.read_bytes() == second.read_bytes()


def test_boundstates_table(tmp_path):
    path = tmp_path / "states.csv"
    argv = ["--output", str(path), "boundstates", "--alpha", "0.5",
            "--b00", "-9.869604401089358", "--b11", "9.869604401089358"]
    assert run(argv) == 0
    rows = _rows(path)
    assert len(rows) == 1
    assert float(rows[0]["lambda"]) == pytest.approx(1.0, abs=1e-8)
    assert float(rows[0]["energy"]) == pytest.approx(-1.0, abs=1e-8)


def test_spectrum_allows_zero_flux(tmp_path):
    path = tmp_path / "spectrum.csv"
    argv = ["--output", str(path), "spectrum", "--alpha", "0", "--field", "homogeneous",
            "--count", "2"]
    assert run(argv) == 0
    values = [float(row["value"]) for row in _rows(path)]
    assert values == [pytest.approx(1.0, abs=1e-3), pytest.approx(3.0, abs=1e-3)]


def test_green_table(tmp_path):
    path = tmp_path / "green.csv"
    argv = ["--output", str(path), "green", "--alpha", "0.5", "--radii", "0.01,1"]
    assert run(argv) == 0
    rows = _rows(path)
    assert [row["r"] for row in rows] == ["0.01", "1"]
    assert rows[1]["asymptotic"] == "nan"
    assert all(float(row["residual"]) < 1e-7 for row in rows)


@pytest.mark.parametrize("argv", [
    ["norms", "--alpha", "1.5"],
    ["norms", "--alpha", "0"],
    ["green", "--k", "1"],
    ["spectrum", "--n", "50"],
    ["resolvent", "--z", "1"],
    ["boundstates", "--bracket", "5", "1"],
    ["xi", "--a", "2", "--b", "1"],
])
def test_validation_errors_exit_with_two(tmp_path, argv):
    assert run(["--output", str(tmp_path / "out.csv")] + argv) == 2
    assert not (tmp_path / "out.csv").exists()


def test_spectrum_needs_an_azimuthal_field(tmp_path):
    assert run(["--output", str(tmp_path / "s.csv"), "spectrum", "--field", "stream"]) == 2


def test_unknown_flag_exits_with_two():
    assert run(["norms", "--frobnicate"]) == 2


def test_config_file(tmp_path):
    config = tmp_path / "run.ini"
    config.write_text("[flux]\nalpha = 0.25\nk = -1\n\n[lambda]\nvalues = 0.5, 1.0\n")
    path = tmp_path / "norms.csv"
    assert run(["--config", str(config), "--output", str(path), "norms"]) == 0
    rows = _rows(path)
    assert [row["lambda"] for row in rows] == ["0.5", "1"]
    assert all(row["k"] == "-1" for row in rows)


@pytest.mark.parametrize("flag,expected", [("true", logging.DEBUG), ("false", logging.WARNING)])
def test_verbose_key_sets_log_level(tmp_path, flag, expected):
    config = tmp_path / "run.ini"
    config.write_text(f"[flux]\nalpha = 0.5\n\n[output]\nverbose = {flag}\n")
    path = tmp_path / "norms.csv"
    assert run(["--config", str(config), "--output", str(path), "norms"]) == 0
    assert logging.getLogger().level == expected


def test_flags_override_config_file(tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"flux": {"alpha": 0.25}, "lambda": {"value": 2.0}}))
    loaded = load_run_config("norms", str(config), {"flux.alpha": 0.75})
    assert loaded.alpha == 0.75
    assert loaded.lam == 2.0


def test_unknown_config_key(tmp_path):
    config = tmp_path / "bad.ini"
    config.write_text("[flux]\nalpah = 0.3\n")
    with pytest.raises(ConfigError) as info:
        load_run_config("norms", str(config))
    assert info.value.key == "flux.alpah"
    assert run(["--config", str(config), "norms"]) == 2


def test_missing_config_file(tmp_path):
    assert run(["--config", str(tmp_path / "absent.ini"), "norms"]) == 2


def test_tolerance_overrides(tmp_path):
    config = tmp_path / "tol.ini"
    config.write_text("[tolerances]\nresolvent_residual = 1e-9\n")
    assert load_run_config("resolvent", str(config)).tolerances.resolvent_residual == 1e-9
    config.write_text("[tolerances]\nsharpness = 1\n")
    with pytest.raises(ConfigError):
        load_run_config("resolvent", str(config))


def test_config_keys_cover_every_section():
    keys = config_keys()
    assert {"flux", "field", "cutoff", "beta", "lambda", "grid", "trial", "output",
            "tolerances"} <= set(keys)
    assert "resolvent_residual" in keys["tolerances"]


def test_value_formatting():
    assert format_value(0.1) == "0.10000000000000001"
    assert format_value(3) == "3"
    assert format_value(True) == "true"
    assert format_value(float("inf")) == "inf"
    text = render_csv(("a", "b"), [(1, 0.5)])
    assert text == f"{CSV_HEADER}\na,b\n1,0.5\n"
    with pytest.raises(ValueError):
        render_csv(("a", "b"), [(1,)])


def test_worker_count_from_environment(monkeypatch):
    monkeypatch.setenv("ABQ_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("ABQ_THREADS", "0")
    with pytest.raises(ConfigError):
        worker_count()
    monkeypatch.delenv("ABQ_THREADS")
    assert worker_count() >= 1


def test_sweeps_do_not_depend_on_thread_count(tmp_path, monkeypatch):
    argv = ["norms", "--alphas", "0.2,0.4,0.6", "--lambdas", "1,2"]
    monkeypatch.setenv("ABQ_THREADS", "1")
    assert run(["--output", str(tmp_path / "serial.csv")] + argv) == 0
    monkeypatch.setenv("ABQ_THREADS", "4")
    assert run(["--output", str(tmp_path / "pooled.csv")] + argv) == 0
    assert (tmp_path / "serial.csv").read_bytes() == (tmp_path / "pooled.csv").read_bytes()


def test_selftest_passes():
    lines = []
    assert SelfTester(lines.append).run()
    assert lines


def test_selftest_covers_every_module():
    names = [name for name, _ in CHECKS]
    modules = {name.split(":")[0] for name in names}
    assert modules == {"specfun", "fields", "greens", "forms", "extensions", "spectral"}
    for topic in ("divergence", "cutoff", "recovery profile", "orthogonality", "Xi",
                  "invariance", "coercivity", "singular part", "crossover"):
        assert any(topic in name for name in names), topic


def test_shipped_config_loads():
    path = os.path.join(os.path.dirname(__file__), "config.ini")
    config = load_run_config("spectrum", path)
    assert config.alphas == (0.2, 0.1, 0.05, 0.025, 0.0125)
    assert config.build_field().name == "homogeneous"
    assert config.tolerances.resolvent_residual == 1e-10
