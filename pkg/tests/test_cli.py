import csv

import pytest
import yaml

from nvinit.cli import main

SEG1_SEQUENCE = """\
pulses:
  - {kind: mw_pi, pair: [[0, -1], [-1, -1]]}
  - {kind: rf_pi, pair: [[-1, -1], [-1, 0]]}
  - {kind: laser, duration_us: 0.5}
"""


def read_rows(path):
    with open(path, newline="", encoding="utf-8") as handle:
        return list(csv.reader(handle))


class TestTransitions:
    def test_table(self, tmp_path, capsys):
        assert main(["transitions", "--out", str(tmp_path)]) == 0
        out = capsys.readouterr().out
        assert out.startswith("wrote ") and "transitions.csv" in out
        rows = read_rows(tmp_path / "transitions.csv")
        assert rows[0] == ["pair", "kind", "computed_mhz",
                           "reference_mhz", "deviation_mhz"]
        assert len(rows) == 5
        assert rows[1] == ["(0,-1)<->(-1,-1)", "MW", "2697.04", "2696", "1.04"]
        kinds = [r[1] for r in rows[1:]]
        assert kinds == ["MW", "MW", "RF", "RF"]

    def test_pair_field_survives_csv_quoting(self, tmp_path):
        main(["transitions", "--out", str(tmp_path)])
        text = (tmp_path / "transitions.csv").read_text()
        assert '"(0,-1)<->(-1,-1)"' in text


class TestSweep:
    def test_seg1_defaults(self, tmp_path):
        assert main(["sweep", "seg1", "--out", str(tmp_path)]) == 0
        rows = read_rows(tmp_path / "sweep_seg1.csv")
        assert rows[0] == ["duration_us", "p0", "p1", "p2", "p3", "p4", "p5",
                           "a_minus1", "a_plus1", "a_zero", "total_ms0"]
        data = [[float(v) for v in r] for r in rows[1:]]
        assert len(data) == 201
        assert data[0][0] == 0.0 and data[-1][0] == 4.0
        # t=0 row is the swapped initialized state
        first = data[0]
        assert first[1] == pytest.approx(0.0, abs=1e-6)
        assert first[2] == pytest.approx(1 / 3, abs=1e-6)
        assert first[3] == pytest.approx(1 / 3, abs=1e-6)
        assert first[6] == pytest.approx(1 / 3, abs=1e-6)
        # frozen value at t=0.5
        at_half = data[25]
        assert at_half[0] == 0.5
        assert at_half[3] == pytest.approx(0.550350240244, abs=1e-6)
        # pumping completes by the end of the sweep
        assert data[-1][10] >= 0.99

    def test_seg1_a_zero_peak_location(self, tmp_path):
        main(["sweep", "seg1", "--out", str(tmp_path)])
        rows = read_rows(tmp_path / "sweep_seg1.csv")[1:]
        best = max(rows, key=lambda r: float(r[9]))
        assert float(best[0]) == pytest.approx(0.78, abs=1e-9)
        assert float(best[9]) == pytest.approx(0.5254621, abs=1e-6)

    def test_seg2_start_and_frozen_point(self, tmp_path):
        assert main(["sweep", "seg2", "--out", str(tmp_path)]) == 0
        rows = read_rows(tmp_path / "sweep_seg2.csv")
        data = [[float(v) for v in r] for r in rows[1:]]
        assert data[0][1:7] == pytest.approx([0.07, 0.0, 0.55, 0.0, 0.05, 0.33],
                                             abs=1e-12)
        assert data[0][7:10] == pytest.approx([0.07, -0.05, 0.22], abs=1e-12)
        at_t2 = data[23]
        assert at_t2[0] == 0.46
        assert at_t2[3] == pytest.approx(0.7059690847074123, abs=1e-8)

    def test_custom_grid(self, tmp_path):
        main(["sweep", "seg1", "--out", str(tmp_path), "--t-max", "1", "--steps", "3"])
        rows = read_rows(tmp_path / "sweep_seg1.csv")[1:]
        assert [float(r[0]) for r in rows] == [0.0, 0.5, 1.0]

    def test_step_validation(self, tmp_path, capsys):
        assert main(["sweep", "seg1", "--out", str(tmp_path), "--steps", "1"]) == 1
        err = capsys.readouterr().err
        assert err == "error: steps must be at least 2, got 1\n"
        assert main(["sweep", "seg1", "--out", str(tmp_path), "--t-max", "0"]) == 1
        assert capsys.readouterr().err.startswith("error: t-max must be positive")

    def test_unknown_segment_is_a_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["sweep", "seg3"])
        assert exc.value.code == 2
        err = capsys.readouterr().err
        assert err.startswith("error:") and err.count("\n") == 1


class TestSpectrum:
    def test_published_state(self, tmp_path, capsys):
        rc = main(["spectrum", "--out", str(tmp_path),
                   "--state", "0.07,0.33,0.55,0,0,0.05"])
        assert rc == 0
        doc = yaml.safe_load(capsys.readouterr().out)
        assert doc["state"] == [0.07, 0.33, 0.55, 0.0, 0.0, 0.05]
        assert doc["model_amplitudes"] == {"a_minus1": 0.07, "a_plus1": 0.33,
                                           "a_zero": 0.5}
        got = doc["extracted_amplitudes"]
        assert got["a_minus1"] == pytest.approx(0.0773553693, abs=1e-9)
        assert got["a_plus1"] == pytest.approx(0.329863136, abs=1e-9)
        assert got["a_zero"] == pytest.approx(0.495894622, abs=1e-9)
        assert doc["line_frequencies_mhz"] == {"mi_minus1": 6.16,
                                               "mi_plus1": 1.84, "mi_zero": 4.0}
        assert doc["fid_params"]["n_samples"] == 2048
        assert doc["fid_params"]["padded_length"] == 8192
        assert "zero frequency centered" in doc["fft_convention"]
        fid_rows = read_rows(tmp_path / "fid.csv")
        assert len(fid_rows) == 2049
        assert float(fid_rows[1][1]) == pytest.approx(0.9, abs=1e-9)
        assert float(fid_rows[1][2]) == 0.0
        spec_rows = read_rows(tmp_path / "spectrum.csv")
        assert len(spec_rows) == 8193

    def test_default_state_extracts_thirds(self, tmp_path, capsys):
        assert main(["spectrum", "--out", str(tmp_path)]) == 0
        doc = yaml.safe_load(capsys.readouterr().out)
        for value in doc["extracted_amplitudes"].values():
            assert value == pytest.approx(1 / 3, abs=1e-6)

    def test_state_argument_validation(self, tmp_path, capsys):
        assert main(["spectrum", "--out", str(tmp_path), "--state", "0.1,0.2"]) == 1
        assert "six comma-separated numbers" in capsys.readouterr().err
        assert main(["spectrum", "--out", str(tmp_path),
                     "--state", "0.5,0.6,0,0,0,0.1"]) == 1
        err = capsys.readouterr().err
        assert err.startswith("error:") and err.count("\n") == 1


class TestOptimize:
    def test_default_schedule(self, tmp_path, capsys):
        assert main(["optimize", "--out", str(tmp_path)]) == 0
        doc = yaml.safe_load(capsys.readouterr().out)
        assert doc["strategy"] == "interleaved"
        assert doc["objective"] == "p00"
        assert doc["n_cycles"] == 3
        assert doc["final_purity"] == pytest.approx(0.727032533, abs=1e-9)
        assert len(doc["cycles"]) == 3
        assert doc["cycles"][0]["t1_us"] == 0.5
        assert doc["cycles"][0]["purity_after_seg2"] == pytest.approx(0.705969085,
                                                                     abs=1e-9)
        rows = read_rows(tmp_path / "schedule.csv")
        assert rows[0] == ["cycle", "t1_us", "purity_after_seg1",
                           "t2_us", "purity_after_seg2"]
        assert rows[1][:2] == ["1", "0.5"]
        on_disk = yaml.safe_load((tmp_path / "schedule.yaml").read_text())
        assert on_disk == doc

    def test_single_cycle_config(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.yaml"
        cfg.write_text("optimizer:\n  n_cycles: 1\n")
        assert main(["optimize", "--config", str(cfg), "--out", str(tmp_path)]) == 0
        doc = yaml.safe_load(capsys.readouterr().out)
        assert doc["n_cycles"] == 1
        assert doc["final_purity"] == pytest.approx(0.705969085, abs=1e-9)

    def test_blocked_config(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.yaml"
        cfg.write_text("optimizer:\n  strategy: blocked\n")
        assert main(["optimize", "--config", str(cfg), "--out", str(tmp_path)]) == 0
        doc = yaml.safe_load(capsys.readouterr().out)
        assert doc["strategy"] == "blocked"
        assert doc["final_purity"] == pytest.approx(0.7083015097, abs=1e-9)
        assert doc["final_purity"] <= 0.727032533 + 1e-9

    def test_reruns_are_byte_identical(self, tmp_path, capsys):
        a, b = tmp_path / "a", tmp_path / "b"
        main(["optimize", "--out", str(a)])
        main(["optimize", "--out", str(b)])
        capsys.readouterr()
        assert (a / "schedule.csv").read_bytes() == (b / "schedule.csv").read_bytes()
        assert (a / "schedule.yaml").read_bytes() == (b / "schedule.yaml").read_bytes()


class TestSimulate:
    def test_seg1_from_default_state(self, tmp_path, capsys):
        seq = tmp_path / "seq.yaml"
        seq.write_text(SEG1_SEQUENCE)
        assert main(["simulate", str(seq)]) == 0
        doc = yaml.safe_load(capsys.readouterr().out)
        assert len(doc["trace"]) == 3
        assert [r["step"] for r in doc["trace"]] == [0, 1, 2]
        descriptions = " ".join(r["pulse"] for r in doc["trace"])
        assert "MW" in descriptions and "RF" in descriptions
        assert "laser" in descriptions
        assert doc["final_state"][2] == pytest.approx(0.550350240244, abs=5e-9)
        assert doc["trace"][-1]["state"] == doc["final_state"]

    def test_explicit_initial_state(self, tmp_path, capsys):
        seq = tmp_path / "seq.yaml"
        seq.write_text("initial_state: [0.07, 0.33, 0.55, 0.0, 0.0, 0.05]\n"
                       + SEG1_SEQUENCE)
        assert main(["simulate", str(seq)]) == 0
        doc = yaml.safe_load(capsys.readouterr().out)
        assert doc["initial_state"] == [0.07, 0.33, 0.55, 0.0, 0.0, 0.05]
        # after the two swaps the laser pumps from (0, .33, .55, .05, 0, .07)
        assert doc["trace"][1]["state"] == [0.0, 0.33, 0.55, 0.05, 0.0, 0.07]
        assert doc["final_state"][2] == pytest.approx(0.5350503744232245, abs=1e-9)

    def test_empty_sequence_echoes_state(self, tmp_path, capsys):
        seq = tmp_path / "seq.yaml"
        seq.write_text("initial_state: [0, 0, 1, 0, 0, 0]\n")
        assert main(["simulate", str(seq)]) == 0
        doc = yaml.safe_load(capsys.readouterr().out)
        assert doc["trace"] == []
        assert doc["final_state"] == doc["initial_state"] == [0, 0, 1, 0, 0, 0]

    def test_missing_file(self, tmp_path, capsys):
        assert main(["simulate", str(tmp_path / "nope.yaml")]) == 1
        assert capsys.readouterr().err.startswith("error: cannot read sequence")

    def test_bad_pulse_kind(self, tmp_path, capsys):
        seq = tmp_path / "seq.yaml"
        seq.write_text("pulses:\n  - {kind: ramsey}\n")
        assert main(["simulate", str(seq)]) == 1
        err = capsys.readouterr().err
        assert err.startswith("error:") and "ramsey" in err


class TestGlobalFlags:
    def test_config_before_or_after_subcommand(self, tmp_path, monkeypatch, capsys):
        monkeypatch.chdir(tmp_path)
        cfg = tmp_path / "cfg.yaml"
        cfg.write_text("output_dir: fromcfg\n")
        assert main(["--config", str(cfg), "transitions"]) == 0
        assert (tmp_path / "fromcfg" / "transitions.csv").exists()
        assert main(["transitions", "--config", str(cfg)]) == 0
        capsys.readouterr()

    def test_out_flag_overrides_config(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.yaml"
        cfg.write_text("output_dir: fromcfg\n")
        dest = tmp_path / "flag"
        assert main(["transitions", "--config", str(cfg), "--out", str(dest)]) == 0
        capsys.readouterr()
        assert (dest / "transitions.csv").exists()
        assert not (tmp_path / "fromcfg").exists()

    def test_seed_flag_is_accepted(self, tmp_path, capsys):
        assert main(["--seed", "3", "transitions", "--out", str(tmp_path)]) == 0
        capsys.readouterr()

    def test_bad_config_file_reports_cleanly(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.yaml"
        cfg.write_text("rates:\n  ks: 2\n")
        assert main(["transitions", "--config", str(cfg),
                     "--out", str(tmp_path)]) == 1
        err = capsys.readouterr().err
        assert err.startswith("error:") and "rates.ks" in err

    def test_missing_subcommand_is_a_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2
        assert capsys.readouterr().err.startswith("error:")

    def test_unknown_flag_is_a_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["transitions", "--frequency", "2"])
        assert exc.value.code == 2
        err = capsys.readouterr().err
        assert err.count("\n") == 1
