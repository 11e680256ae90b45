import math

import numpy as np
import pytest

import conesq


def test_plancherel_round_trip():
    g = conesq.GridSpec(2, 32, 2.0)
    rng = np.random.default_rng(0)
    v = rng.normal(size=(32, 32)) + 1j * rng.normal(size=(32, 32))
    f = conesq.Field(g, conesq.Side.physical, v)
    F = conesq.forward_transform(f)
    assert conesq.lp_norm(F, 2) == pytest.approx(conesq.lp_norm(f, 2), rel=1e-12)
    back = conesq.inverse_transform(F)
    assert np.allclose(back.values, v, atol=1e-12)


def test_field_file_round_trip(tmp_path):
    g = conesq.GridSpec(3, 8, 1.0)
    v = np.arange(512, dtype=complex).reshape(8, 8, 8)
    f = conesq.Field(g, conesq.Side.frequency, v, "f_tau")
    path = str(tmp_path / "a.field")
    conesq.write_field(f, path)
    r = conesq.read_field(path)
    assert r.role == "f_tau"
    assert r.side == conesq.Side.frequency
    assert np.array_equal(r.values, v)


def test_geometry_and_errors():
    assert len(conesq.cone_planks(1 / 16)) == 25
    assert len(conesq.separated_caps(2, 2 * math.pi / 16)) == 16
    with pytest.raises(ValueError):
        conesq.cone_planks(0.1)
    with pytest.raises(ValueError):
        conesq.GridSpec(2, 48, 1.0)


def test_fit_and_exponents():
    pts = [(2.0**-k, 2.0 ** (k / 2)) for k in range(3, 9)]
    alpha, pref, res = conesq.fit_exponent(pts)
    assert alpha == pytest.approx(0.5)
    assert res < 1e-12
    assert conesq.expected_exponent("cone_L8_A2", 3, 16) == pytest.approx(0.125)
    assert conesq.parse_deltas("2^-4:2^-6") == [1 / 16, 1 / 32, 1 / 64]


def test_extremizer_and_sweep():
    ex = conesq.extremizer("cone_L8_A2", delta=1 / 64, p=16)
    assert ex["dilation"] == 8
    assert len(ex["tubes"]) == len(ex["pieces"]) >= 2
    assert ex["overlap_ratio"] > 0
    cfg = "experiment = cone_l8\np = 16\nengine = overlap\ndeltas = 2^-4:2^-10\n"
    (s,) = conesq.run_sweep(cfg)
    assert s["expected_alpha"] == pytest.approx(0.125)
    assert abs(s["alpha"] - 0.125) <= 0.05
    csv = conesq.sweep_csv(cfg)
    assert csv.splitlines()[0].startswith("experiment,n,p,delta")
    assert csv == conesq.sweep_csv(cfg)


def test_acceptance_entry_point():
    ok, line = conesq.accept(7)
    assert ok
    assert line.startswith("AC7 PASS")
