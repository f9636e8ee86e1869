import json

import numpy as np
import pytest

from noscodec import (
    SweepConfig,
    ebn0_to_n0,
    emit_results,
    new_params,
    random_codebook,
    run_per_sweep,
    run_trial,
    save,
)
from noscodec.harness import CSV_HEADER, _partition

DESK = new_params(3, 16, 16, 11)


@pytest.fixture(scope="module")
def desk_codebook():
    return random_codebook(DESK, seed=0)


def test_run_trial_noiseless_succeeds():
    # interference-free codebook: the noiseless decision is exact in both modes
    from noscodec import orthogonal_codebook

    cb = orthogonal_codebook(new_params(3, 16, 64, 11))
    for mode in ("one-shot", "kbest-crc"):
        for t in range(20):
            err, bit_errors = run_trial(cb, 0.0, 8, mode, t, master_seed=1)
            assert not err
            assert bit_errors == 0


def test_run_trial_deterministic(desk_codebook):
    n0 = ebn0_to_n0(4.0, DESK)
    a = [run_trial(desk_codebook, n0, 8, "kbest-crc", t, 7) for t in range(50)]
    b = [run_trial(desk_codebook, n0, 8, "kbest-crc", t, 7) for t in range(50)]
    assert a == b
    c = [run_trial(desk_codebook, n0, 8, "kbest-crc", t, 8) for t in range(50)]
    assert a != c


def test_list_decoding_never_worse_paired(desk_codebook):
    n0 = ebn0_to_n0(6.0, DESK)
    worse = 0
    for t in range(2000):
        one, _ = run_trial(desk_codebook, n0, 16, "one-shot", t, 3)
        kb, _ = run_trial(desk_codebook, n0, 16, "kbest-crc", t, 3)
        worse += int(kb and not one)
    assert worse == 0


def test_run_trial_rejects_unknown_mode(desk_codebook):
    with pytest.raises(ValueError, match="mode"):
        run_trial(desk_codebook, 1.0, 8, "magic", 0, 0)


def test_partition_covers_range():
    assert _partition(10, 20, 3) == [(10, 13), (13, 16), (16, 20)]
    assert _partition(0, 2, 5) == [(0, 1), (1, 2)]
    joined = []
    for a, b in _partition(5, 47, 4):
        joined.extend(range(a, b))
    assert joined == list(range(5, 47))


def test_sweep_early_stop_and_fields(desk_codebook):
    cfg = SweepConfig(
        codebook=desk_codebook,
        ebn0_grid=[0.0],
        k=8,
        mode="one-shot",
        max_trials=4000,
        target_errors=20,
        seed=5,
        chunk_size=100,
    )
    curve = run_per_sweep(cfg)
    (pt,) = curve.points
    assert pt.trials % 100 == 0 or pt.trials == 4000
    assert pt.packet_errors >= 20 or pt.trials == 4000
    assert pt.per == pt.packet_errors / pt.trials
    assert 0.0 <= pt.per <= 1.0
    assert pt.ber == pt.bit_errors / (pt.trials * DESK.total_bits)
    assert pt.ci95 == pytest.approx(
        1.96 * np.sqrt(pt.per * (1 - pt.per) / pt.trials)
    )


def test_sweep_deterministic_across_workers(tmp_path, desk_codebook):
    path = tmp_path / "cb.nosc"
    save(desk_codebook, path)
    outs = []
    for workers in (1, 3):
        cfg = SweepConfig(
            codebook=str(path),
            ebn0_grid=[2.0, 6.0],
            k=8,
            mode="kbest-crc",
            max_trials=600,
            target_errors=1000,
            seed=9,
            workers=workers,
            chunk_size=128,
        )
        curve = run_per_sweep(cfg)
        out = tmp_path / f"res_{workers}.csv"
        emit_results(curve, out, "csv")
        out_json = tmp_path / f"res_{workers}.json"
        emit_results(curve, out_json, "json")
        outs.append((out.read_bytes(), out_json.read_bytes()))
    assert outs[0] == outs[1]


def test_emit_csv_shape(tmp_path, desk_codebook):
    cfg = SweepConfig(
        codebook=desk_codebook, ebn0_grid=[0.0, 3.0, 6.0], k=8,
        mode="one-shot", max_trials=200, target_errors=5, seed=1,
    )
    curve = run_per_sweep(cfg)
    path = tmp_path / "out.csv"
    emit_results(curve, path, "csv")
    lines = path.read_text().strip().split("\n")
    assert lines[0] == CSV_HEADER
    assert len(lines) == 1 + 3
    row = lines[1].split(",")
    assert float(row[4]) == int(row[2]) / int(row[1])


def test_emit_json_roundtrip(tmp_path, desk_codebook):
    cfg = SweepConfig(
        codebook=desk_codebook, ebn0_grid=[4.0], k=8, mode="kbest-crc",
        max_trials=300, target_errors=10, seed=2,
    )
    curve = run_per_sweep(cfg)
    path = tmp_path / "out.json"
    emit_results(curve, path, "json")
    data = json.loads(path.read_text())
    (pt,) = curve.points
    rec = data["points"][0]
    assert rec["ebn0_db"] == pt.ebn0_db
    assert rec["trials"] == pt.trials
    assert rec["packet_errors"] == pt.packet_errors
    assert rec["per"] == pt.per
    assert rec["ber"] == pt.ber
    assert rec["ci95"] == pt.ci95
    assert data["config"]["seed"] == 2
    assert "workers" not in data["config"]  # execution detail, not statistics


def test_emit_rejects_unknown_format(tmp_path, desk_codebook):
    cfg = SweepConfig(codebook=desk_codebook, ebn0_grid=[0.0], max_trials=1,
                      target_errors=1)
    curve = run_per_sweep(cfg)
    with pytest.raises(ValueError, match="format"):
        emit_results(curve, tmp_path / "x", "xml")


def test_sweep_config_validation(desk_codebook):
    with pytest.raises(ValueError, match="grid"):
        SweepConfig(codebook=desk_codebook, ebn0_grid=[])
    with pytest.raises(ValueError, match="mode"):
        SweepConfig(codebook=desk_codebook, ebn0_grid=[0.0], mode="guess")
    with pytest.raises(ValueError, match="max_trials"):
        SweepConfig(codebook=desk_codebook, ebn0_grid=[0.0], max_trials=0)
    with pytest.raises(ValueError, match="convention"):
        SweepConfig(codebook=desk_codebook, ebn0_grid=[0.0], eb_convention="x")


def test_sweep_missing_codebook_file():
    cfg = SweepConfig(codebook="/nonexistent/cb.nosc", ebn0_grid=[0.0])
    with pytest.raises(FileNotFoundError):
        run_per_sweep(cfg)
