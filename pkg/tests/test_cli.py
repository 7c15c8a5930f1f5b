"""End-to-end command-line checks: exit codes, outputs, config validation."""

import numpy as np

from ewinlse.cli import main
from ewinlse.experiments import CSV_COLUMNS, read_field, write_field

FREE_SOLVE = """\
scheme = "ewi_efp"
tau = 0.05
N = 16

[problem]
T = 0.2
datum = "plane_wave"
amplitude = 1.0
mode = 2
"""

MINI_STUDY = """\
label = "mini"
schemes = ["ewi_efp"]
bands = ["slope:ewi_efp:L2:0.8:1.2"]

[problem]
T = 0.2
potential = "constant"
value = 1.5
nonlinearity = "power"
lambda = -1.0
sigma = 1.0
datum = "plane_wave"
amplitude = 1.0
mode = 2

[sweep]
kind = "tau"
values = [0.05, 0.025, 0.0125]

[reference]
scheme = "strang"
tau = 1e-3
h = 2.0
"""


def run_cli(tmp_path, *argv):
    out = tmp_path / "out"
    cache = tmp_path / "cache"
    return main([*argv, "--out", str(out), "--cache", str(cache)]), out


def write_config(tmp_path, text, name="cfg.toml"):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestSolve:
    def test_free_plane_wave_conserves_mass(self, tmp_path, capsys):
        cfg = write_config(tmp_path, FREE_SOLVE)
        code, out = run_cli(tmp_path, "solve", "--config", str(cfg))
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        masses = [float(l.split(":")[1]) for l in lines if l.startswith("mass")]
        assert len(masses) == 2
        assert abs(masses[1] - masses[0]) <= 1e-12 * masses[0]

    def test_snapshot_round_trip_byte_identical(self, tmp_path):
        cfg = write_config(tmp_path, FREE_SOLVE)
        code, out = run_cli(tmp_path, "solve", "--config", str(cfg))
        assert code == 0
        snap = out / "cfg.ref"
        field, meta = read_field(snap)
        resaved = tmp_path / "resaved.ref"
        write_field(resaved, field, T=meta["T"], scheme=meta["scheme"], tau=meta["tau"])
        assert snap.read_bytes() == resaved.read_bytes()

    def test_field_csv_columns(self, tmp_path):
        cfg = write_config(tmp_path, FREE_SOLVE)
        code, out = run_cli(tmp_path, "solve", "--config", str(cfg))
        rows = (out / "cfg_field.csv").read_text().splitlines()
        assert rows[0] == "x,re,im,density"
        assert len(rows) == 1 + 16 + 1  # header + N+1 nodes

    def test_missing_tau_names_the_key(self, tmp_path, capsys):
        cfg = write_config(tmp_path, FREE_SOLVE.replace("tau = 0.05\n", ""))
        code, _ = run_cli(tmp_path, "solve", "--config", str(cfg))
        assert code == 2
        assert "tau" in capsys.readouterr().err

    def test_unknown_key_is_hard_error(self, tmp_path, capsys):
        cfg = write_config(tmp_path, FREE_SOLVE + "\ntyop = 3\n")
        code, _ = run_cli(tmp_path, "solve", "--config", str(cfg))
        assert code == 2
        assert "tyop" in capsys.readouterr().err

    def test_blow_up_exit_code(self, tmp_path, capsys):
        text = FREE_SOLVE.replace('amplitude = 1.0', 'amplitude = 1e80')
        text += '\n'
        text = text.replace('[problem]\nT = 0.2\n',
                            '[problem]\nT = 0.2\nnonlinearity = "power"\nlambda = -1.0\nsigma = 1.0\n')
        cfg = write_config(tmp_path, text)
        code, _ = run_cli(tmp_path, "solve", "--config", str(cfg))
        assert code == 3
        assert "step" in capsys.readouterr().err

    def test_section_52_setup_smoke(self, tmp_path, capsys):
        # box potential, cubic defocusing term, H^2 datum at production size
        cfg = write_config(tmp_path, """\
scheme = "ewi_efp"
tau = 1e-4
N = 4096
label = "box_cubic"

[problem]
T = 1.0
potential = "box"
depth = -4.0
left = -2.0
right = 2.0
nonlinearity = "power"
lambda = -1.0
sigma = 1.0
datum = "type1_h2"
""")
        code, out = run_cli(tmp_path, "solve", "--config", str(cfg))
        assert code == 0
        field, _ = read_field(out / "box_cubic.ref")
        assert np.all(np.isfinite(field.coeffs))
        masses = [float(l.split(":")[1])
                  for l in capsys.readouterr().out.splitlines() if l.startswith("mass")]
        assert all(np.isfinite(m) and m > 0 for m in masses)


class TestSelfTest:
    def test_synthetic_orders_pass(self, tmp_path, capsys):
        code, _ = run_cli(tmp_path, "convergence", "--self-test")
        assert code == 0
        text = capsys.readouterr().out
        assert "L2 slope 1.0000000000" in text
        assert "H1 slope 2.0000000000" in text

    def test_unachievable_band_fails(self, tmp_path, capsys):
        cfg = write_config(tmp_path, 'bands = ["slope:synthetic:L2:3.0:3.5"]\n')
        code, _ = run_cli(tmp_path, "convergence", "--self-test", "--config", str(cfg))
        assert code == 4


class TestConvergence:
    def test_mini_study_passes_band(self, tmp_path, capsys):
        cfg = write_config(tmp_path, MINI_STUDY)
        code, out = run_cli(tmp_path, "convergence", "--config", str(cfg))
        assert code == 0
        csv = (out / "cfg.csv").read_text().splitlines()
        assert csv[0] == ",".join(CSV_COLUMNS)
        assert "pass" in capsys.readouterr().out

    def test_unachievable_band_exits_4(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path, MINI_STUDY.replace("slope:ewi_efp:L2:0.8:1.2",
                                         "slope:ewi_efp:L2:3.0:3.5"))
        code, out = run_cli(tmp_path, "convergence", "--config", str(cfg))
        assert code == 4
        assert (out / "cfg.csv").exists()  # CSV still written

    def test_error_floor_flagged_on_free_problem(self, tmp_path, capsys):
        text = MINI_STUDY.replace('potential = "constant"\nvalue = 1.5\n', "")
        text = text.replace('nonlinearity = "power"\nlambda = -1.0\nsigma = 1.0\n', "")
        text = text.replace('bands = ["slope:ewi_efp:L2:0.8:1.2"]\n', "")
        cfg = write_config(tmp_path, text)
        code, _ = run_cli(tmp_path, "convergence", "--config", str(cfg))
        assert code == 0  # no bands demanded, floor is reported not fatal
        assert "floor" in capsys.readouterr().out

    def test_bad_threads_value(self, tmp_path, capsys):
        cfg = write_config(tmp_path, MINI_STUDY)
        code = main(["convergence", "--config", str(cfg), "--threads", "many",
                     "--out", str(tmp_path / "o"), "--cache", str(tmp_path / "c")])
        assert code == 2


class TestPresetRun:
    def test_fig52_preset_emits_schema_csv(self, tmp_path, ref_cache_dir, capsys):
        # end-to-end preset run against the shared reference cache; the CSV
        # this produces is the input contract of the plotting frontend
        out = tmp_path / "out"
        code = main(["convergence", "--preset", "fig52",
                     "--out", str(out), "--cache", str(ref_cache_dir)])
        assert code == 0
        rows = (out / "fig52.csv").read_text().splitlines()
        assert rows[0] == ",".join(CSV_COLUMNS)
        # two sigma studies x 4 taus x 2 norms
        assert len(rows) == 1 + 16
        assert "pass" in capsys.readouterr().out


class TestCompare:
    def test_two_schemes_side_by_side(self, tmp_path, capsys):
        text = MINI_STUDY.replace('schemes = ["ewi_efp"]',
                                  'schemes = ["ewi_efp", "lie_trotter"]')
        cfg = write_config(tmp_path, text)
        code, out = run_cli(tmp_path, "compare", "--config", str(cfg))
        assert code == 0
        body = (out / "cfg.csv").read_text()
        assert "lie_trotter" in body and "ewi_efp" in body

    def test_single_scheme_rejected(self, tmp_path, capsys):
        cfg = write_config(tmp_path, MINI_STUDY)
        code, _ = run_cli(tmp_path, "compare", "--config", str(cfg))
        assert code == 2

    def test_duplicate_scheme_rejected(self, tmp_path, capsys):
        text = MINI_STUDY.replace('schemes = ["ewi_efp"]',
                                  'schemes = ["ewi_efp", "ewi_efp"]')
        cfg = write_config(tmp_path, text)
        code, _ = run_cli(tmp_path, "compare", "--config", str(cfg))
        assert code == 2
        assert "duplicate" in capsys.readouterr().err
