from fractions import Fraction

import numpy as np
import pytest

from resqueeze import (
    LOSSLESS,
    ConfigInvalid,
    DivergenceDetected,
    DriveConfig,
    MixingSimConfig,
    ResonatorParams,
    ToneNotResolved,
    predicted_tones,
    simulate_mixing,
)
from resqueeze.errors import NumericalInstability

SCALED = ResonatorParams(f0=1.0, q_unloaded=LOSSLESS, q_feedline=100.0)
DELTA = SCALED.linewidth_hz / 20


def drive(xi_q=0.5, kerr=0.1, delta=DELTA):
    return DriveConfig(f_pump=1.0, delta_f=delta, xi=xi_q / SCALED.q_loaded, kerr_shift=kerr)


@pytest.fixture(scope="module")
def kerr_run():
    return simulate_mixing(SCALED, drive())


def test_literal_comb_is_exact():
    d = DriveConfig(f_pump=3_710_000_000, delta_f=800, xi=0.0)
    tones = predicted_tones(d, max_order=2)
    assert [t.frequency for t in tones] == [3_710_000_000 + k for k in (-1600, -800, 0, 800, 1600)]
    assert all(isinstance(t.frequency, int) for t in tones)
    assert d.f_m == 7_420_000_800


def test_fraction_inputs_stay_exact():
    d = DriveConfig(f_pump=Fraction(1), delta_f=Fraction(1, 2000), xi=0.0)
    assert predicted_tones(d, 1)[0].frequency == Fraction(1999, 2000)


def test_zero_offset_collapses_onto_pump():
    d = DriveConfig(f_pump=3.71e9, delta_f=0.0, xi=0.0)
    assert {t.frequency for t in predicted_tones(d, 3)} == {3.71e9}


def test_mixing_identities():
    d = DriveConfig(f_pump=3_710_000_000, delta_f=800, xi=0.0)
    by_n = {t.n: t for t in predicted_tones(d, 2)}
    assert by_n[1].identity == "f_m - f_pump"
    assert by_n[-1].identity == "3 f_pump - f_m"
    assert by_n[0].identity == "f_pump"
    assert by_n[2].identity == "2 f_m - 3 f_pump"
    assert by_n[-2].identity == "5 f_pump - 2 f_m"
    assert d.f_m - d.f_pump == d.f_pump + d.delta_f
    assert 3 * d.f_pump - d.f_m == by_n[-1].frequency
    assert [by_n[n].mixing_order for n in (-2, -1, 0, 1, 2)] == [7, 4, 1, 2, 5]


def test_scaled_run_detects_full_comb(kerr_run):
    assert kerr_run.detected_orders == [-2, -1, 0, 1, 2]
    for n in (-1, 1):
        assert kerr_run.tone(n).above_floor_db >= 40
    bin_of = np.round(kerr_run.frequency / kerr_run.bin_hz).astype(int)
    for tone in kerr_run.tones:
        k = int(round(tone.frequency / kerr_run.bin_hz))
        assert tone.frequency == kerr_run.frequency[k]
        assert tone.frequency == pytest.approx(1.0 + tone.n * DELTA, rel=1e-12)
        assert bin_of[k] == k


def test_first_order_beats_second_order(kerr_run):
    for sign in (-1, 1):
        assert kerr_run.tone(sign).relative_power_db > kerr_run.tone(2 * sign).relative_power_db
    assert kerr_run.tone(0).relative_power_db == 0.0


def test_linear_model_only_produces_idler():
    spec = simulate_mixing(SCALED, drive(kerr=0.0))
    assert spec.detected_orders == [0, 1]


def test_no_modulation_leaves_pump_only():
    spec = simulate_mixing(SCALED, drive(xi_q=0.0, kerr=0.0))
    assert spec.detected_orders == [0]
    spec = simulate_mixing(SCALED, drive(xi_q=0.0, kerr=0.1))
    assert spec.detected_orders == [0]


def test_idler_power_scales_with_depth_squared():
    p1 = simulate_mixing(SCALED, drive(xi_q=0.1)).tone(1).relative_power_db
    p2 = simulate_mixing(SCALED, drive(xi_q=0.2)).tone(1).relative_power_db
    assert p2 - p1 == pytest.approx(20 * np.log10(2), abs=1.0)


def test_above_threshold_diverges_without_kerr():
    with pytest.raises(DivergenceDetected):
        simulate_mixing(SCALED, drive(xi_q=1.5, kerr=0.0))


def test_unresolvable_offsets():
    with pytest.raises(ToneNotResolved):
        simulate_mixing(SCALED, drive(delta=0.0))
    with pytest.raises(ToneNotResolved):
        simulate_mixing(SCALED, drive(delta=DELTA * 1.37))


def test_step_and_budget_limits():
    with pytest.raises(NumericalInstability):
        simulate_mixing(SCALED, drive(), MixingSimConfig(steps_per_period=8))
    with pytest.raises(ConfigInvalid):
        simulate_mixing(SCALED, drive(), MixingSimConfig(max_steps=1000))
    with pytest.raises(ConfigInvalid):
        MixingSimConfig(analysis_beats=1)


def test_wide_offset_warns():
    with pytest.warns(UserWarning, match="linewidth"):
        simulate_mixing(SCALED, drive(delta=SCALED.linewidth_hz / 4),
                        MixingSimConfig(analysis_beats=2, burn_in_beats=4))


@pytest.mark.parametrize("kwargs", [dict(f_pump=0.0), dict(delta_f=-1.0), dict(xi=-0.1),
                                    dict(kerr_shift=-1.0), dict(pump_amplitude=0.0)])
def test_drive_validation(kwargs):
    base = dict(f_pump=1.0, delta_f=DELTA, xi=0.0)
    base.update(kwargs)
    with pytest.raises(ConfigInvalid):
        DriveConfig(**base)
