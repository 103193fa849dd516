"""File formats: exact CSV round trips, graymaps, configuration parsing."""

import numpy as np
import pytest

import pacavity as pv
from pacavity import io as pio

from helpers import smooth_random_field


class TestFieldFiles:
    def test_zero_field_round_trip(self, tmp_path):
        g = pv.Grid2D(17)
        path = tmp_path / "zero.csv"
        pio.write_field(path, pv.ScalarField.zeros(g))
        back = pio.read_field(path)
        assert back.grid.n == 17
        assert np.array_equal(back.values, np.zeros((17, 17)))

    def test_random_field_round_trip_bit_identical(self, tmp_path):
        g = pv.Grid2D(33)
        rng = np.random.default_rng(0)
        f = pv.ScalarField(g, rng.standard_normal((33, 33)) * 10.0 ** rng.integers(-8, 8, (33, 33)))
        path = tmp_path / "field.csv"
        pio.write_field(path, f)
        back = pio.read_field(path)
        assert np.array_equal(back.values, f.values)

    def test_graymap_constant_field(self, tmp_path):
        g = pv.Grid2D(9)
        path = tmp_path / "const.pgm"
        pio.write_field(path, pv.ScalarField.constant(g, 4.2))
        data = path.read_bytes()
        assert data.startswith(b"P5")
        pixels = np.frombuffer(data[data.index(b"65535\n") + 6:], dtype=">u2")
        assert pixels.size == 81
        assert np.all(pixels == pixels[0])

    def test_graymap_deterministic(self, tmp_path):
        g = pv.Grid2D(17)
        f = smooth_random_field(g, np.random.default_rng(1))
        pio.write_field(tmp_path / "a.pgm", f)
        pio.write_field(tmp_path / "b.pgm", f)
        assert (tmp_path / "a.pgm").read_bytes() == (tmp_path / "b.pgm").read_bytes()

    def test_malformed_csv_reports_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("# pacavity field v1\n# n = 3\n1.0,2.0,3.0\n1.0,oops,3.0\n0,0,0\n")
        with pytest.raises(pio.ParseError, match=r":4"):
            pio.read_field(path)

    def test_unknown_extension(self, tmp_path):
        g = pv.Grid2D(9)
        with pytest.raises(pv.ConfigError):
            pio.write_field(tmp_path / "f.npy", pv.ScalarField.zeros(g))
        with pytest.raises(pv.ConfigError):
            pio.read_field(tmp_path / "f.pgm")


class TestTraceFiles:
    def test_empty_trace_header_only(self, tmp_path):
        g = pv.Grid2D(9)
        empty = pv.BoundaryTrace(g, g.dt, np.zeros((0, pv.boundary_count(9))))
        path = tmp_path / "empty.csv"
        pio.write_trace(path, empty)
        lines = [ln for ln in path.read_text().splitlines() if not ln.startswith("#")]
        assert lines == ["t," + ",".join(f"node_{b}" for b in range(32))]
        back = pio.read_trace(path)
        assert back.samples.shape == (0, 32)

    def test_synthesized_trace_round_trip(self, tmp_path):
        g = pv.Grid2D(17)
        bs = pv.BoundarySpec.left_bottom(g)
        f = smooth_random_field(g, np.random.default_rng(2))
        trace = pv.synthesize_data(f, bs, 1.0, g.dt)
        path = tmp_path / "trace.csv"
        pio.write_trace(path, trace)
        back = pio.read_trace(path)
        assert back.dt == trace.dt
        assert np.array_equal(back.samples, trace.samples)
        # writing again reproduces the file byte for byte
        pio.write_trace(tmp_path / "again.csv", back)
        assert (tmp_path / "again.csv").read_bytes() == path.read_bytes()

    def test_wrong_column_count_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        cols = ",".join(f"node_{b}" for b in range(7))
        path.write_text(f"t,{cols}\n" + "0.0," + ",".join(["0"] * 7) + "\n")
        with pytest.raises(pio.ParseError, match="4n-4"):
            pio.read_trace(path)

    def test_ragged_row_rejected(self, tmp_path):
        g = pv.Grid2D(9)
        trace = pv.BoundaryTrace(g, g.dt, np.ones((2, 32)))
        path = tmp_path / "trace.csv"
        pio.write_trace(path, trace)
        text = path.read_text().splitlines()
        text[2] = text[2].rsplit(",", 1)[0]
        path.write_text("\n".join(text) + "\n")
        with pytest.raises(pio.ParseError, match=r":3"):
            pio.read_trace(path)


class TestConfig:
    def test_empty_file_gives_defaults(self, tmp_path):
        path = tmp_path / "empty.cfg"
        path.write_text("# nothing here\n\n")
        cfg = pio.parse_config(path)
        assert cfg.n == 257
        assert cfg.dt_factor == 0.5
        assert cfg.T == 5.0
        assert cfg.gamma == "full"
        assert cfg.lambda_value == 1.0
        assert cfg.phantom == "paper-six"
        assert cfg.noise == 0.0
        assert cfg.iterations == 1
        assert cfg.subspace == "H1"
        assert cfg.snap_time is False

    def test_partial_preset(self, tmp_path):
        path = tmp_path / "c.cfg"
        path.write_text("gamma = left_bottom\n")
        assert pio.parse_config(path).gamma == "left_bottom"

    def test_node_list_gamma(self, tmp_path):
        path = tmp_path / "c.cfg"
        path.write_text("gamma = 0, 1, 2, 5\n")
        cfg = pio.parse_config(path)
        assert cfg.gamma == [0, 1, 2, 5]
        bs = cfg.make_bspec(pv.Grid2D(9))
        assert bs.gamma_mask.sum() == 4

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "c.cfg"
        path.write_text("gamm = full\n")
        with pytest.raises(pv.ConfigError, match="gamm"):
            pio.parse_config(path)

    def test_out_of_range_n(self, tmp_path):
        path = tmp_path / "c.cfg"
        path.write_text("n = -5\n")
        with pytest.raises(pv.ConfigError, match="'n'"):
            pio.parse_config(path)

    def test_type_mismatch_names_key(self, tmp_path):
        path = tmp_path / "c.cfg"
        path.write_text("T = soon\n")
        with pytest.raises(pv.ConfigError, match="'T'"):
            pio.parse_config(path)

    def test_duplicate_key_rejected(self, tmp_path):
        path = tmp_path / "c.cfg"
        path.write_text("n = 65\nn = 129\n")
        with pytest.raises(pv.ConfigError, match="duplicate"):
            pio.parse_config(path)

    def test_bumps_parse_and_validate(self, tmp_path):
        path = tmp_path / "c.cfg"
        path.write_text("bumps = 0.1,0.2,0.15,1.0; -0.3,-0.3,0.2,0.5\n")
        cfg = pio.parse_config(path)
        assert len(cfg.bumps) == 2
        bad = tmp_path / "bad.cfg"
        bad.write_text("bumps = 0.95,0.0,0.2,1.0\n")
        with pytest.raises(pv.ConfigError, match="bump 0"):
            pio.parse_config(bad)

    def test_snap_time_resolution(self, tmp_path):
        path = tmp_path / "c.cfg"
        path.write_text("n = 257\nT = 1.6\nsnap_time = true\n")
        cfg = pio.parse_config(path)
        grid = cfg.make_grid()
        assert cfg.resolve_T(grid.dt) == 410 * grid.dt
        cfg.snap_time = False
        with pytest.raises(pv.ConfigError):
            cfg.resolve_T(grid.dt)
