import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sphere_nse.config import ConfigError, parse_config
from sphere_nse.snapshot import (CorruptSnapshotError, SnapshotVersionError, decode_snapshot,
                                 encode_snapshot, load_snapshot, save_snapshot)
from sphere_nse.validation import random_real_coeffs


def test_example2_defaults():
    cfg = parse_config("experiment = example2\nN = 16")
    assert cfg.nu == 1e-4 and cfg.omega == 1.0
    assert cfg.N1 == 12 and cfg.seed == 0


def test_range_and_required_errors():
    with pytest.raises(ConfigError, match="N must be"):
        parse_config("N = 0")
    with pytest.raises(ConfigError, match="experiment required"):
        parse_config("")
    with pytest.raises(ConfigError, match="rtol"):
        parse_config("experiment = example1\nN = 4\nrtol = -1")
    with pytest.raises(ConfigError, match="N1"):
        parse_config("experiment = example1\nN = 4\nN1 = 5")
    with pytest.raises(ConfigError, match="t_end"):
        parse_config("experiment = example2\nN = 4\nt_end = 0")


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ConfigError, match="line 3: unknown key"):
        parse_config("experiment = example1\n# comment\nviscosity = 1\n")
    with pytest.raises(ConfigError, match="line 2: expected"):
        parse_config("experiment = example1\nN 4\n")
    with pytest.raises(ConfigError, match="line 2: bad value for N"):
        parse_config("experiment = example1\nN = four\n")
    with pytest.raises(ConfigError, match="line 3: duplicate"):
        parse_config("experiment = example1\nN = 4\nN = 5\n")


def test_full_config():
    text = """
    # Example 1 at low resolution
    experiment = example1   # manufactured solution
    N = 8
    N0 = 6
    nu = 0.05
    omega = 2
    t_end = 1.5
    rtol = 1e-5
    atol = 1e-9
    output_times = 0.5, 1.0, 1.5
    output_dir = out
    dump_grid = true
    """
    cfg = parse_config(text)
    assert (cfg.N, cfg.N0, cfg.nu, cfg.omega, cfg.t_end) == (8, 6, 0.05, 2.0, 1.5)
    assert cfg.output_times == (0.5, 1.0, 1.5)
    assert cfg.dump_grid and cfg.output_dir == "out"
    assert cfg.N1 == 6


def test_custom_needs_restart():
    with pytest.raises(ConfigError, match="restart"):
        parse_config("experiment = custom\nN = 4")
    cfg = parse_config("experiment = custom\nN = 4\nrestart = a.bin\nforcing = example2")
    assert cfg.forcing == "example2"
    with pytest.raises(ConfigError):
        parse_config("experiment = example2\nN = 4\nforcing = none")


def test_digest_ignores_output_dir():
    a = parse_config("experiment = example2\nN = 4\noutput_dir = x")
    b = parse_config("experiment = example2\nN = 4\noutput_dir = y")
    c = parse_config("experiment = example2\nN = 4\nseed = 1")
    assert a.digest() == b.digest() != c.digest()


@given(st.integers(1, 20), st.integers(0, 2 ** 32 - 1), st.floats(0, 1e3))
def test_snapshot_round_trip(N, seed, t):
    alpha = random_real_coeffs(N, np.random.default_rng(seed))
    back, meta = decode_snapshot(encode_snapshot(alpha, t, "example2", b"\x01" * 32))
    # the payload stores m >= 0; negative orders are rebuilt bit-exactly from the reality condition
    np.testing.assert_array_equal(back, alpha)
    assert meta.N == N and meta.t == t and meta.experiment == "example2"
    assert meta.config_hash == b"\x01" * 32


def test_snapshot_payload_length(tmp_path):
    alpha = random_real_coeffs(5, np.random.default_rng(0))
    blob = encode_snapshot(alpha, 0.0)
    assert len(blob) == 72 + 16 * sum(L + 1 for L in range(1, 6))
    path = tmp_path / "s.bin"
    save_snapshot(path, alpha, 1.25, "example1")
    back, meta = load_snapshot(path)
    np.testing.assert_array_equal(back, alpha)
    assert meta.M == 18


def test_snapshot_corruption_and_version():
    blob = encode_snapshot(random_real_coeffs(4, np.random.default_rng(1)), 0.5)
    with pytest.raises(CorruptSnapshotError):
        decode_snapshot(blob[:-8])
    with pytest.raises(CorruptSnapshotError):
        decode_snapshot(blob[:20])
    with pytest.raises(CorruptSnapshotError):
        decode_snapshot(b"XXXX" + blob[4:])
    bumped = blob[:4] + (2).to_bytes(4, "little") + blob[8:]
    with pytest.raises(SnapshotVersionError):
        decode_snapshot(bumped)
