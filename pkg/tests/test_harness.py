import math

import numpy as np
import pytest

from dsm_vlc.channel import RoomConfig
from dsm_vlc.harness import (
    CSV_HEADER,
    BerCurve,
    SimConfig,
    compare_curves,
    emit_outputs,
    load_sim_config,
    read_ber_csv,
    run_ber_sweep,
    run_complexity_report,
    write_complexity_csv,
)


def small(detector="ml", **kw):
    base = dict(detector=detector, snr_start=100, snr_stop=110, snr_step=5, blocks=50, seed=3)
    base.update(kw)
    return SimConfig(**base)


@pytest.mark.parametrize("detector", ["ml", "vc_omp", "omp_ga"])
@pytest.mark.parametrize("mod", [2, 4])
def test_noiseless_ber_zero(detector, mod):
    curve = run_ber_sweep(small(detector, modulation=mod, noiseless=True, blocks=200))
    assert all(p[1] == 0 for p in curve.points)


def test_bits_accounting():
    cfg = small(modulation=4, blocks=37, room=RoomConfig.default(4, 4))
    curve = run_ber_sweep(SimConfig(**{**cfg.__dict__, "snr_start": 120, "snr_stop": 120}))
    (_, errs, total, ber), = curve.points
    assert total == 37 * (4 * 2 + 4)
    assert ber == errs / total


@pytest.mark.parametrize("detector", ["ml", "omp_ga"])
def test_deterministic(detector):
    a = run_ber_sweep(small(detector))
    b = run_ber_sweep(small(detector))
    assert a.points == b.points
    assert a.metadata == b.metadata


def test_seed_changes_result():
    a = run_ber_sweep(small(snr_start=110, snr_stop=110, blocks=300))
    b = run_ber_sweep(small(snr_start=110, snr_stop=110, blocks=300, seed=4))
    assert a.points != b.points


def test_swamped_detector_is_coin_flip():
    cfg = small("vc_omp", snr_start=-50, snr_stop=-50, blocks=4000)
    (_, _, total, ber), = run_ber_sweep(cfg).points
    assert total >= 10_000
    assert 0.4 <= ber <= 0.6


def test_worker_count_irrelevant():
    cfg = small("omp_ga", snr_stop=115)
    assert run_ber_sweep(cfg, workers=1).points == run_ber_sweep(cfg, workers=2).points


def test_snr_grid():
    assert small().snr_grid() == [100.0, 105.0, 110.0]
    assert SimConfig().snr_grid() == [80.0 + 5 * k for k in range(9)]


@pytest.mark.parametrize("kw", [dict(snr_step=0), dict(blocks=0), dict(detector="zf"), dict(modulation=3),
                                dict(snr_start=10, snr_stop=5)])
def test_config_validation(kw):
    with pytest.raises(ValueError):
        small(**kw)


def test_load_sim_config(tmp_path):
    p = tmp_path / "sim.cfg"
    p.write_text("nt = 4\nmod = qpsk\ndetector = omp-ga\ngenerations = 5\nblocks = 9\n")
    cfg = load_sim_config(p, {"seed": 11, "blocks": None})
    assert (cfg.nt, cfg.nr, cfg.modulation, cfg.detector) == (4, 4, 4, "omp_ga")
    assert cfg.ga.generations == 5 and cfg.blocks == 9 and cfg.seed == 11


def test_load_sim_config_rejects_unknown(tmp_path):
    p = tmp_path / "sim.cfg"
    p.write_text("snr = 3\n")
    with pytest.raises(ValueError, match="unknown config keys"):
        load_sim_config(p)


def test_csv_round_trip(tmp_path):
    curve = BerCurve(points=[(80.0, 12, 3000, 0.004), (85.0, 0, 3000, 0.0), (90.5, 1, 7, 1 / 7)])
    paths = emit_outputs(curve, tmp_path, "c")
    assert read_ber_csv(paths["csv"]) == curve.points
    assert paths["plot"].exists() and paths["meta"].exists()
    compile(paths["plot"].read_text(), str(paths["plot"]), "exec")


def test_empty_curve_header_only(tmp_path):
    paths = emit_outputs(BerCurve(), tmp_path, "empty")
    assert paths["csv"].read_text() == ",".join(CSV_HEADER) + "\n"


def test_no_clobbering(tmp_path):
    p1 = emit_outputs(BerCurve(points=[(1.0, 1, 2, 0.5)]), tmp_path, "same")
    p2 = emit_outputs(BerCurve(points=[(2.0, 0, 2, 0.0)]), tmp_path, "same")
    assert p1["csv"] != p2["csv"]
    assert read_ber_csv(p1["csv"]) == [(1.0, 1, 2, 0.5)]


def test_emit_outputs_unwritable(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OSError, match="file"):
        emit_outputs(BerCurve(), blocker / "sub")


def test_complexity_report(tmp_path):
    rows = run_complexity_report([(2, 2)])
    by = {r["scheme"]: r for r in rows}
    assert by["ml"]["reduction_vs_ml_pct"] == 0
    assert by["vc_omp"]["flops_per_block"] < by["ml"]["flops_per_block"]
    path = write_complexity_csv(rows, tmp_path / "x" / "complexity.csv")
    assert path.read_text().splitlines()[0] == "scheme,nt,nr,m_order,flops_per_block,reduction_vs_ml_pct"


def test_compare_curves():
    ml = BerCurve(points=[(100.0, 10, 100, 0.1), (105.0, 0, 100, 0.0)])
    a = BerCurve(points=[(100.0, 5, 100, 0.05), (105.0, 0, 100, 0.0)])
    rows = compare_curves({"ml": ml, "vc_omp": a})
    assert rows[0]["improvement_vc_omp_pct"] == 50.0
    assert math.isnan(rows[1]["improvement_vc_omp_pct"])
