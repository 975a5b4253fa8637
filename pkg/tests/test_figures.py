import os
import sys
import json
import logging
import tempfile
from pathlib import Path

import numpy as np
import pytest
from dotenv import load_dotenv

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from ssnmbounds.errors import ConfigError, DimensionMismatch
from ssnmbounds.experiments.analysis import level_crossing_db, transition_fraction_db, transition_midpoint_db
from ssnmbounds.experiments.figures import (FIG1_GRID_DB, FIG34_GRID_DB, generate_fig2_parameters, run_fig1,
                                            run_fig2, run_fig3, run_fig4)
from ssnmbounds.experiments.sweep import SweepResult, build_metadata, run_timestamp
from ssnmbounds.model.problem import ProblemConfig
from ssnmbounds.model.sampling import make_rng

load_dotenv()
logging.basicConfig(level=logging.INFO)


def test_default_grids():
    assert FIG1_GRID_DB.size == 41 and FIG1_GRID_DB[0] == -30.0 and FIG1_GRID_DB[-1] == 10.0
    assert FIG34_GRID_DB.size == 41 and FIG34_GRID_DB[0] == -20.0 and FIG34_GRID_DB[-1] == 20.0


def test_fig1_plateaus_and_ordering():
    """Low-SNR plateau near N sigma^2, HCRB near S sigma^2 at 10 dB, lower bounds below BB'_c"""
    result = run_fig1(snr_grid_db=[-30.0, -10.0, 0.0, 10.0], threads=2)
    assert result.column_names == ["snr_db", "hcrb", "hcrb_v", "bb_c", "bb_c_prime"]
    for name in ("hcrb", "hcrb_v", "bb_c", "bb_c_prime"):
        assert 3.8 <= result.column(name)[0] <= 5.2
    assert abs(result.column("hcrb")[-1] - 1.0) <= 0.05
    assert abs(result.column("hcrb_v")[-1] - 1.0) <= 0.05
    assert np.all(result.column("hcrb") <= result.column("bb_c_prime") + 1e-6)
    assert np.all(result.column("hcrb_v") <= result.column("bb_c_prime") + 1e-6)
    assert np.all(result.column("hcrb") <= result.column("bb_c") + 1e-9)
    assert result.meta["figure"] == "fig1" and result.meta["Q"] == 20


def test_fig2_parameter_generation():
    config = ProblemConfig(N=10, S=4, sigma2=1.0)
    params = generate_fig2_parameters(config, 9.0, 25, make_rng(3))
    assert len(params) == 25
    for x in params:
        assert x.l0 == 4
        assert abs(x.xi - 3.0) < 1e-12
        assert np.all(x.values >= 0.0)


def test_fig2_spread_and_determinism():
    """Spread across random vectors shrinks as xi grows; same seed, same table"""
    first = run_fig2(snr_ratios=(4.0, 25.0), n_vectors=15, seed=7)
    second = run_fig2(snr_ratios=(4.0, 25.0), n_vectors=15, seed=7, threads=3)
    assert first.to_csv() == second.to_csv()
    assert first.column_names == ["snr_db", "snr_ratio", "vector_index", "mse_ml", "mse_ml_mean", "mse_ml_std"]
    ratio = first.column("snr_ratio")
    std_low = first.column("mse_ml_std")[ratio == 4.0][0]
    std_high = first.column("mse_ml_std")[ratio == 25.0][0]
    assert std_high < std_low
    assert abs(first.column("mse_ml")[ratio == 25.0].std() - std_high) < 1e-12
    other = run_fig2(snr_ratios=(4.0,), n_vectors=15, seed=8)
    assert not np.array_equal(other.column("mse_ml"), first.column("mse_ml")[ratio == 4.0])


def test_fig3_threshold_region():
    """Biased estimators beat the unbiased bounds at low SNR and converge later"""
    result = run_fig3(threads=2)
    snr = result.snr_db
    hcrb, bb_c = result.column("hcrb"), result.column("bb_c")
    mse_ml, mse_ht = result.column("mse_ml"), result.column("mse_ht")
    np.testing.assert_array_equal(result.column("crb"), 4.0)
    assert mse_ml[0] < hcrb[0] and mse_ht[0] < hcrb[0]
    assert abs(mse_ml[-1] - 4.0) <= 0.4
    assert np.all(hcrb <= bb_c + 1e-9)

    bound_mid = [transition_midpoint_db(snr, curve) for curve in (hcrb, bb_c)]
    for mid in bound_mid:
        assert -5.0 <= mid <= 5.0
    for curve in (mse_ml, mse_ht):
        assert transition_midpoint_db(snr, curve) > max(bound_mid)


def test_fig4_ratio_ordering():
    result = run_fig4(snr_grid_db=[-20.0, -10.0, 0.0, 5.0, 10.0, 20.0, 30.0])
    r, r2, r3 = (result.column(name) for name in ("ratio_r", "ratio_r2", "ratio_r3"))
    for curve in (r, r2, r3):
        assert np.all(curve >= 1.0 - 1e-12)
        assert abs(curve[-1] - 1.0) <= 0.01
    assert np.all(r >= r2 - 1e-9)
    assert np.all(r >= r3 - 1e-9)


def test_sweep_result_output(tmp_path):
    config = ProblemConfig(N=3, S=1)
    result = SweepResult(config=config, snr_db=[-1.0, 0.5],
                         columns={"hcrb": [2.0, 1.0 / 3.0]}, meta=build_metadata(config, seed=4))
    assert result.to_csv() == "snr_db,hcrb\n-1,2\n0.5,0.33333333333333331\n"
    payload = json.loads(result.to_json())
    assert list(payload) == ["meta", "columns"]
    assert payload["columns"]["hcrb"] == [2.0, 1.0 / 3.0]
    assert payload["meta"]["seed"] == 4 and payload["meta"]["N"] == 3
    assert {"git_describe", "timestamp", "package_version"} <= set(payload["meta"])

    path = result.write(str(tmp_path / "out" / "table.csv"))
    with open(path, encoding="utf-8") as f:
        assert f.read() == result.to_csv()
    with open(path + ".meta.json", encoding="utf-8") as f:
        assert json.load(f)["seed"] == 4
    json_path = result.write(str(tmp_path / "table.json"), "json")
    assert not os.path.exists(json_path + ".meta.json")

    with pytest.raises(ConfigError):
        result.render("xml")
    with pytest.raises(DimensionMismatch):
        SweepResult(config=config, snr_db=[0.0, 1.0], columns={"hcrb": [1.0]})


def test_source_date_epoch():
    previous = os.environ.get("SOURCE_DATE_EPOCH")
    os.environ["SOURCE_DATE_EPOCH"] = "0"
    try:
        assert run_timestamp() == "1970-01-01T00:00:00+00:00"
    finally:
        if previous is None:
            del os.environ["SOURCE_DATE_EPOCH"]
        else:
            os.environ["SOURCE_DATE_EPOCH"] = previous


def test_transition_analysis():
    snr = [0.0, 1.0, 2.0, 3.0]
    values = [10.0, 8.0, 4.0, 2.0]
    assert level_crossing_db(snr, values, 6.0) == 1.5
    assert level_crossing_db(snr, values, 20.0) == 0.0
    assert level_crossing_db(snr, values, 1.0) == 3.0
    assert transition_midpoint_db(snr, values) == 1.5
    assert transition_fraction_db(snr, values, 0.25) == 1.0
    # a bump above the starting value moves the peak
    assert abs(transition_midpoint_db(snr, [6.0, 10.0, 4.0, 2.0]) - (1.0 + 2.0 / 3.0)) < 1e-12
    with pytest.raises(ConfigError):
        transition_fraction_db(snr, values, 1.0)


if __name__ == "__main__":
    print("\n====== TEST: FIGURES ======")
    test_default_grids()
    test_fig1_plateaus_and_ordering()
    test_fig2_parameter_generation()
    test_fig2_spread_and_determinism()
    test_fig3_threshold_region()
    test_fig4_ratio_ordering()
    test_sweep_result_output(Path(tempfile.mkdtemp()))
    test_source_date_epoch()
    test_transition_analysis()
    print("All figure tests passed")
