import numpy as np
import pytest

from stbc.decoder import complexity_account, constellation, full_symbol_matrix
from stbc.coding_gain import default_encoder
from stbc.designs import build_rate1_4group, codeword, extend_full_rate
from stbc.errors import IntractableError
from stbc.sim import (
    SimConfig,
    SimRecord,
    emit_csv,
    parse_config_file,
    parse_layer_scalar,
    parse_records_csv,
    parse_snr_spec,
    run_error_sweep,
    uncoded_siso_sweep,
    verify_all,
)


def silver_cfg(**overrides):
    base = dict(
        design=extend_full_rate(build_rate1_4group(1), 2),
        n_r=2,
        constellation="4qam",
        snr_db=(8.0,),
        trials=200,
        seed=77,
        decoder="auto",
    )
    base.update(overrides)
    return SimConfig(**base)


class TestErrorSweep:
    def test_deterministic_records(self):
        r1 = run_error_sweep(silver_cfg())
        r2 = run_error_sweep(silver_cfg())
        assert [(a.cer, a.ser, a.codeword_errors) for a in r1] == [
            (b.cer, b.ser, b.codeword_errors) for b in r2
        ]

    def test_error_rates_in_open_interval_at_moderate_snr(self):
        rec = run_error_sweep(silver_cfg(snr_db=(6.0,), trials=400))[0]
        assert 0.0 < rec.ser < 1.0
        assert 0.0 < rec.cer < 1.0

    def test_noiseless_gives_zero_cer(self):
        rec = run_error_sweep(silver_cfg(noise_scale=0.0, trials=100))[0]
        assert rec.cer == 0.0 and rec.ser == 0.0

    def test_counter_matches_account(self):
        cfg = silver_cfg(trials=50)
        rec = run_error_sweep(cfg)[0]
        acc = complexity_account(cfg.design, constellation("4qam"))
        assert rec.mean_evals == acc.conditional_evaluations

    def test_symbol_errors_bounded_by_codeword_errors(self):
        cfg = silver_cfg(snr_db=(0.0,), trials=300)
        rec = run_error_sweep(cfg)[0]
        k = cfg.design.k
        assert rec.codeword_errors <= rec.symbol_errors <= k * rec.codeword_errors
        assert rec.ser <= rec.cer <= 1.0

    def test_intractable_guard(self):
        d = extend_full_rate(build_rate1_4group(3), 2)
        cfg = SimConfig(design=d, n_r=2, snr_db=(10.0,), trials=10**6)
        with pytest.raises(IntractableError):
            run_error_sweep(cfg)

    def test_oracle_decoder_choice(self):
        cfg = silver_cfg(decoder="oracle", trials=20)
        rec = run_error_sweep(cfg)[0]
        assert rec.mean_evals == 4**4

    def test_energy_normalization(self):
        d = extend_full_rate(build_rate1_4group(2), 2)
        cons = constellation("4qam")
        b = full_symbol_matrix(d, default_encoder(d, cons.pam))
        rng = np.random.default_rng(5)
        energies = []
        for _ in range(10_000):
            levels = rng.integers(0, 2, size=d.n_real_symbols)
            s = b @ cons.pam[levels]
            energies.append(
                np.linalg.norm(d.energy_scale * codeword(d, s)) ** 2
            )
        assert abs(np.mean(energies) / (d.n_t * d.T) - 1.0) < 0.01


class TestSisoBaseline:
    def test_noiseless_perfect(self):
        rec = uncoded_siso_sweep("4qam", (10.0,), 200, seed=3, noise_scale=0.0)[0]
        assert rec.ser == 0.0

    def test_deterministic(self):
        r1 = uncoded_siso_sweep("4qam", (5.0,), 500, seed=4)[0]
        r2 = uncoded_siso_sweep("4qam", (5.0,), 500, seed=4)[0]
        assert r1.ser == r2.ser

    def test_moderate_snr_errors_present(self):
        rec = uncoded_siso_sweep("4qam", (5.0,), 500, seed=4)[0]
        assert 0.0 < rec.ser < 0.5


class TestCsv:
    def _records(self):
        return [
            SimRecord(0.0, 100, 30, 55, 0.3, 0.1375, 128.0, 1.5),
            SimRecord(4.0, 100, 12, 20, 0.12, 0.05, 128.0, 1.25),
        ]

    def test_roundtrip(self, tmp_path):
        path = tmp_path / "out.csv"
        emit_csv(self._records(), path)
        rows = parse_records_csv(path)
        for rec, row in zip(self._records(), rows):
            assert row["snr_db"] == rec.snr_db
            assert row["trials"] == rec.trials
            assert row["cer"] == rec.cer
            assert row["ser"] == rec.ser
            assert row["mean_evals"] == rec.mean_evals
            assert row["wall_time_s"] == 0.0  # timing suppressed by default

    def test_timing_opt_in(self, tmp_path):
        path = tmp_path / "out.csv"
        emit_csv(self._records(), path, timing=True)
        rows = parse_records_csv(path)
        assert rows[0]["wall_time_s"] == 1.5

    def test_header_only_for_empty(self, tmp_path):
        path = tmp_path / "empty.csv"
        emit_csv([], path)
        assert path.read_text() == "snr_db,trials,cer,ser,mean_evals,wall_time_s\n"

    def test_byte_identical_reruns(self, tmp_path):
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        emit_csv(run_error_sweep(silver_cfg(trials=60)), p1)
        emit_csv(run_error_sweep(silver_cfg(trials=60)), p2)
        assert p1.read_bytes() == p2.read_bytes()


class TestParsing:
    def test_config_file(self, tmp_path):
        path = tmp_path / "cfg.txt"
        path.write_text(
            "# comment line\n"
            "a = 1\n"
            "layers = 2\n"
            "trials=50  # inline comment\n"
            "snr_db = 0:8:4\n"
        )
        cfg = parse_config_file(path)
        assert cfg == {"a": "1", "layers": "2", "trials": "50", "snr_db": "0:8:4"}

    def test_config_rejects_garbage(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("this is not a key value line\n")
        with pytest.raises(ValueError):
            parse_config_file(path)

    def test_snr_specs(self):
        assert parse_snr_spec("0:20:5") == (0.0, 5.0, 10.0, 15.0, 20.0)
        assert parse_snr_spec("1,2.5,7") == (1.0, 2.5, 7.0)
        with pytest.raises(ValueError):
            parse_snr_spec("0:10:0")

    def test_layer_scalar(self):
        assert parse_layer_scalar("1") == 1.0 + 0j
        got = parse_layer_scalar("pi/4")
        assert abs(got - np.exp(1j * np.pi / 4)) < 1e-15
        with pytest.raises(ValueError):
            parse_layer_scalar("2.0+0.0i")

    def test_config_validation(self):
        with pytest.raises(ValueError):
            silver_cfg(trials=0)
        with pytest.raises(ValueError):
            silver_cfg(snr_db=())
        with pytest.raises(ValueError):
            silver_cfg(decoder="magic")


class TestVerifyAll:
    @pytest.mark.parametrize("a,layers", [(1, 2), (2, 1)])
    def test_passes(self, a, layers):
        report = verify_all(a, layers)
        assert report.passed, report.summary()

    def test_summary_lines(self):
        report = verify_all(1, 1)
        text = report.summary()
        assert "PASS" in text and "FAIL" not in text
