import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from resqueeze import (
    LOSSLESS,
    BathTemperatures,
    ConfigInvalid,
    EmptyGrid,
    ResonatorParams,
    SpectrumRequest,
    ThresholdViolation,
    Variant,
    homodyne_spectrum,
    offset_grid,
    s_pm,
    squeezing_check,
    sweep,
)
from resqueeze.core import HBAR, K_B

mpmath.mp.dps = 50

S_MINUS_EXAMPLE = 0.20759737556374985
S_PLUS_EXAMPLE = 6668079.7452557234


def subtractive_formula(f0, qu, qf, t_d, xi, omega):
    """Subtractive form with a single thermal factor, at 50 digits."""
    f0, qf, t_d, xi, omega = (mpmath.mpf(v) for v in (f0, qf, t_d, xi, omega))
    iqu = mpmath.mpf(0) if math.isinf(qu) else 1 / mpmath.mpf(qu)
    w0 = 2 * mpmath.pi * f0
    if t_d == 0:
        a = mpmath.mpf(1) / 2
    else:
        a = mpmath.coth(mpmath.mpf(HBAR) * w0 / (2 * mpmath.mpf(K_B) * t_d)) / 2
    w = 2 * omega / w0
    iq = iqu + 1 / qf
    out = []
    for sign in (+1, -1):
        d = w**2 + (iq - sign * xi) ** 2
        out.append(a * (1 - 4 * (iqu - sign * xi) / (qf * d)) + a * 4 * iqu / (qf * d))
    return float(out[0]), float(out[1])


def example_request(**kw):
    base = dict(
        resonator=ResonatorParams(5e9, 2e4, 100.0),
        baths=BathTemperatures(0.01, 10.0),
        xi=0.01,
        omega_grid=np.zeros(1),
        variant=Variant.AS_PRINTED,
    )
    base.update(kw)
    return SpectrumRequest(**base)


def test_worked_example():
    sp = s_pm(example_request())
    assert 0.200 <= sp.s_minus[0] <= 0.215
    assert sp.s_minus[0] == pytest.approx(S_MINUS_EXAMPLE, rel=1e-12)
    assert sp.s_plus[0] == pytest.approx(S_PLUS_EXAMPLE, rel=1e-12)
    report = squeezing_check(sp)
    assert report.any_squeezed
    assert report.margin[0] == pytest.approx(0.292, abs=1e-3)


def test_two_bath_example_barely_moves_squeezed_quadrature():
    a = s_pm(example_request()).s_minus[0]
    b = s_pm(example_request(variant=Variant.TWO_BATH)).s_minus[0]
    assert abs(a - b) < 0.01 * a


def test_lossless_closed_form_point():
    req = SpectrumRequest(
        ResonatorParams(5e9, LOSSLESS, 100.0), BathTemperatures(0.0, 0.0), xi=1 / 300
    )
    sp = s_pm(req)
    assert sp.s_minus[0] == pytest.approx(0.125, rel=1e-14)
    assert sp.s_plus[0] == pytest.approx(2.0, rel=1e-14)


def test_threshold_is_hard_error():
    for xi_q in (1.0, 1.5):
        req = example_request(xi=xi_q / ResonatorParams(5e9, 2e4, 100.0).q_loaded)
        with pytest.raises(ThresholdViolation):
            s_pm(req)


def test_request_validation():
    with pytest.raises(ConfigInvalid):
        example_request(xi=-0.1)
    with pytest.raises(ConfigInvalid):
        example_request(omega_grid=np.array([0.0, np.nan]))
    with pytest.raises(ValueError):
        example_request(variant="bogus")


qu_st = st.one_of(st.just(LOSSLESS), st.floats(min_value=50.0, max_value=1e6))
qf_st = st.floats(min_value=5.0, max_value=1e4)
frac_st = st.floats(min_value=0.0, max_value=0.999)
temp_st = st.floats(min_value=0.0, max_value=50.0)
offset_st = st.floats(min_value=-50.0, max_value=50.0)


@settings(max_examples=60, deadline=None)
@given(qu_st, qf_st, frac_st, temp_st, offset_st)
def test_matches_subtractive_formula_oracle(qu, qf, frac, t_d, halfwidths):
    res = ResonatorParams(5e9, qu, qf)
    xi = frac / res.q_loaded
    omega = halfwidths * 0.5 * res.kappa
    sp = s_pm(example_request(resonator=res, xi=xi, baths=BathTemperatures(0.0, t_d),
                              omega_grid=np.array([omega])))
    plus, minus = subtractive_formula(5e9, qu, qf, t_d, xi, omega)
    assert sp.s_plus[0] == pytest.approx(plus, rel=1e-11)
    # the subtractive form loses digits near S- = 0; compare absolutely there
    assert sp.s_minus[0] == pytest.approx(minus, rel=1e-11, abs=1e-13 * sp.s_plus[0])


@settings(max_examples=60, deadline=None)
@given(qu_st, qf_st, frac_st, temp_st, temp_st, st.sampled_from(list(Variant)))
def test_even_and_ordered(qu, qf, frac, t_f, t_d, variant):
    # with two baths the ordering needs the internal bath at least as hot as the feedline
    t_f, t_d = sorted((t_f, t_d))
    res = ResonatorParams(5e9, qu, qf)
    grid = offset_grid(res, 20.0, 101)
    sp = s_pm(SpectrumRequest(res, BathTemperatures(t_f, t_d), frac / res.q_loaded, grid, variant))
    np.testing.assert_array_equal(sp.s_plus, sp.s_plus[::-1])
    np.testing.assert_array_equal(sp.s_minus, sp.s_minus[::-1])
    assert np.all(sp.s_plus >= sp.s_minus)


def test_two_bath_ordering_fails_with_hot_feedline():
    res = ResonatorParams(5e9, 50.0, 85.0)
    req = SpectrumRequest(res, BathTemperatures(17.0, 0.0), 0.5 / res.q_loaded,
                          variant=Variant.TWO_BATH)
    sp = s_pm(req)
    assert sp.s_plus[0] < sp.s_minus[0]


def test_offset_grid_symmetry():
    res = ResonatorParams(5e9, 2e4, 100.0)
    for n in (1, 2, 7, 10):
        g = offset_grid(res, 5.0, n)
        assert g.size == n
        np.testing.assert_array_equal(g, -g[::-1])
    assert 0.0 in offset_grid(res, 5.0, 11)
    assert offset_grid(res, 5.0, 11)[-1] == pytest.approx(2.5 * res.kappa)
    with pytest.raises(ConfigInvalid):
        offset_grid(res, 5.0, 0)


@pytest.mark.parametrize("variant", list(Variant))
def test_high_frequency_limit(variant):
    res = ResonatorParams(5e9, 2e4, 100.0)
    xi = 0.5 / res.q_loaded
    w_min = 1e3 * max(1 / res.q_loaded, xi)
    omega = np.array([1.01, 3.0, 100.0]) * w_min * res.omega0 / 2
    req = SpectrumRequest(res, BathTemperatures(0.5, 10.0), xi, omega, variant)
    a_f, _ = req.noise_factors()
    sp = s_pm(req)
    for s in (sp.s_plus, sp.s_minus):
        assert np.all(np.abs(s / a_f - 1) < 1e-3)


@pytest.mark.parametrize("variant", list(Variant))
@pytest.mark.parametrize("temp", [0.0, 0.1, 10.0])
def test_equilibrium_flatness(variant, temp):
    res = ResonatorParams(5e9, 2e4, 100.0)
    grid = offset_grid(res, 2000.0, 2001)
    req = SpectrumRequest(res, BathTemperatures(temp, temp), 0.0, grid, variant)
    a, _ = req.noise_factors()
    sp = s_pm(req)
    assert np.max(np.abs(sp.s_plus / a - 1)) < 1e-12
    assert np.max(np.abs(sp.s_minus / a - 1)) < 1e-12


@pytest.mark.parametrize("temp", [0.0, 0.3, 10.0])
def test_minimum_uncertainty_lossless(temp):
    res = ResonatorParams(5e9, LOSSLESS, 100.0)
    for xi in np.linspace(0.0, 0.999 / 100.0, 200):
        req = SpectrumRequest(res, BathTemperatures(temp, temp), float(xi))
        a, _ = req.noise_factors()
        sp = s_pm(req)
        assert abs(sp.s_plus[0] * sp.s_minus[0] / a**2 - 1) < 1e-12


def test_perfect_squeezing_limit_monotone():
    res = ResonatorParams(5e9, LOSSLESS, 100.0)
    xis = np.linspace(0.0, 1.0, 500, endpoint=False) / 100.0
    xis = np.append(xis, (1 - 1e-6) / 100.0)
    vals = [s_pm(SpectrumRequest(res, BathTemperatures(0, 0), float(x))).s_minus[0] for x in xis]
    assert np.all(np.diff(vals) < 0)
    assert vals[0] == 0.5
    assert vals[-1] < 1e-12


def test_homodyne_extrema_and_period():
    req = example_request(omega_grid=offset_grid(ResonatorParams(5e9, 2e4, 100.0), 4.0, 41))
    sp = s_pm(req)
    phi = np.linspace(0, math.pi, 721)
    h = homodyne_spectrum(req, phi)
    assert h.shape == (phi.size, 41)
    np.testing.assert_allclose(h.max(axis=0), sp.s_plus, rtol=1e-12)
    np.testing.assert_allclose(h.min(axis=0), sp.s_minus, rtol=1e-12)
    np.testing.assert_allclose(homodyne_spectrum(req, 0.3 + math.pi), homodyne_spectrum(req, 0.3),
                               rtol=1e-12)
    np.testing.assert_allclose(homodyne_spectrum(req, math.pi / 4), 0.5 * (sp.s_plus + sp.s_minus),
                               rtol=1e-12)
    np.testing.assert_allclose(homodyne_spectrum(req, math.pi / 2), sp.s_minus, rtol=1e-12)


def test_squeezing_check_passive_cases():
    res = ResonatorParams(5e9, 2e4, 100.0)
    cold = s_pm(SpectrumRequest(res, BathTemperatures(0, 0), 0.0))
    assert cold.s_minus[0] == 0.5
    assert not squeezing_check(cold).any_squeezed
    hot = s_pm(SpectrumRequest(res, BathTemperatures(0.01, 10.0), 0.0))
    assert hot.s_minus[0] == pytest.approx(41.675, abs=1e-3)
    assert not squeezing_check(hot).any_squeezed


def test_sweep_single_point():
    result = sweep(example_request(), {"xi": [0.01]})
    assert result.argmin["xi"] == 0.01
    assert result.argmin["s_minus"] == pytest.approx(S_MINUS_EXAMPLE, rel=1e-12)
    assert result.n_excluded == 0


def test_sweep_feedline_coupling_monotone_two_bath():
    base = example_request(xi=0.001, variant=Variant.TWO_BATH)
    qf = np.linspace(400.0, 50.0, 15)
    result = sweep(base, {"q_feedline": qf})
    s = result.columns["s_minus"]
    assert np.all(np.diff(s) < 0)
    assert result.argmin["q_feedline"] == 50.0


def test_sweep_excludes_above_threshold_corner():
    base = example_request()
    result = sweep(base, {"xi": [0.001, 0.005, 0.008], "q_feedline": [100.0, 200.0]})
    # only xi = 0.008 with Q ~ 198 reaches threshold (xi*Q ~ 1.58)
    assert result.n_excluded == 1
    assert result.excluded == [{"xi": 0.008, "q_feedline": 200.0}]
    assert result.columns["s_minus"].size == 5


def test_sweep_with_omega_axis_and_threads():
    base = example_request()
    axes = {"t_damping": [0.1, 1.0, 10.0], "omega": offset_grid(base.resonator, 3.0, 9)}
    serial = sweep(base, axes, threads=1)
    parallel = sweep(base, axes, threads=4)
    for key in serial.columns:
        np.testing.assert_array_equal(serial.columns[key], parallel.columns[key])
    assert serial.columns["s_minus"].size == 27
    assert serial.argmin["t_damping"] == 0.1 and serial.argmin["omega"] == 0.0


def test_sweep_errors():
    base = example_request()
    with pytest.raises(EmptyGrid):
        sweep(base, {"xi": [0.02, 0.05]})
    with pytest.raises(ConfigInvalid):
        sweep(base, {"f0": [1.0]})
    with pytest.raises(ConfigInvalid):
        sweep(base, {"xi": []})
    with pytest.raises(ConfigInvalid):
        sweep(base, {"xi": [0.0], "q_feedline": [1.0], "t_damping": [1.0]})
