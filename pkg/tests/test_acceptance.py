"""End-to-end checks that pin the toolkit's headline numbers.

Each test is one acceptance line: bundled-table reproduction, route
equivalences, fit recovery statistics, switch-network anchors, control
protocol safety, thermometry oracles, and the full CLI pipeline. Seeds
are fixed so every line is reproducible bit for bit.
"""

from __future__ import annotations

import json
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.constants import h as PLANCK
from scipy.constants import k as BOLTZMANN

from cryomux import chain as ch
from cryomux import resonator
from cryomux.cli import main
from cryomux.errors import InputError, SelectionError
from cryomux.fitkit import (
    PowerSweepPoint,
    StarkContext,
    fit_power_sweep,
    fit_spectrum,
    stark_forward,
    stark_invert,
)
from cryomux.muxsim import (
    ControlState,
    MuxConfig,
    PowerTable,
    T_CLK_DEFAULT,
    dissipated_power,
    latch,
    mux_s_params,
    parallel_write,
    programming_time,
    rise_time,
    serial_clock,
    set_lines,
)
from cryomux.resonator import (
    TWO_PI,
    CavityLerSystem,
    LorentzianParams,
    purcell,
)
from tests.synth_helpers import lorentzian_trace

BUNDLED_SYSTEM = CavityLerSystem(
    omega_c=TWO_PI * 6.979e9,
    omega_r=TWO_PI * 4.779e9,
    g=TWO_PI * 1.075408e7,
    kappa_i=TWO_PI * 2.0e6,
    kappa_o=TWO_PI * 2.0e6,
    gamma_c=TWO_PI * 1.0e4,
    gamma_r=TWO_PI * 587.128,
)


def test_c01_bundled_loss_table_reproduction(capsys):
    code = main(["loss-budget"])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    expected_totals = {
        "hf_stripped": 2.41e-7,
        "native_oxide": 4.98e-7,
        "sinx_capped": 5.00e-6,
        "standard_si": 8.37e-5,
    }
    for name, expected in expected_totals.items():
        total = report["samples"][name]["total_loss"]
        assert abs(total - expected) <= 0.02 * expected
    worst = report["samples"]["standard_si"]
    assert abs(worst["q_factor"] - 1.19e4) <= 0.02 * 1.19e4
    assert "1.20e3" in worst["note"]


def test_c02_photon_routes_agree_on_symmetric_systems():
    rng = np.random.default_rng(20260)
    for _ in range(1000):
        kappa = TWO_PI * 10.0 ** rng.uniform(5.0, 6.5)
        system = CavityLerSystem(
            omega_c=TWO_PI * rng.uniform(6.8e9, 7.2e9),
            omega_r=TWO_PI * rng.uniform(4.4e9, 5.6e9),
            g=TWO_PI * 10.0 ** rng.uniform(6.7, 7.6),
            kappa_i=kappa,
            kappa_o=kappa,
            gamma_c=TWO_PI * 10.0 ** rng.uniform(3.0, 4.5),
            gamma_r=TWO_PI * 10.0 ** rng.uniform(2.0, 5.5),
        )
        rates = purcell(system)
        gamma = system.gamma_r
        p_in = 10.0 ** rng.uniform(-20.0, -14.0)
        half = 0.5 * (rates.kappa_pur + gamma)
        peak = math.sqrt(rates.kappa_pur_i * rates.kappa_pur_o) / half
        q_loaded = rates.omega_r_dressed / (rates.kappa_pur + gamma)
        from_rates = resonator.mean_photons_from_rates(
            rates, gamma, p_in, rates.omega_r_dressed
        )
        measurable = resonator.mean_photons_measurable(
            peak, q_loaded, p_in, rates.omega_r_dressed
        )
        assert_allclose(from_rates, measurable, rtol=1e-12)


ARCHETYPES = (
    LorentzianParams(1.0, 0.30 + 0.10j, 5.569e9, 1.2e4, 2.3e5, 0.15),
    LorentzianParams(1.0, 0.20 + 0.05j, 6.100e9, 2.0e5, 8.0e5, -0.10),
    LorentzianParams(1.0, 0.10 + 0.02j, 4.200e9, 1.5e6, 3.0e6, 0.08),
    LorentzianParams(1.0, 0.05 + 0.02j, 4.779e9, 7.0e6, 5.0e7, 0.05),
)


def test_c03_spectrum_fits_recover_archetypes_at_30db_snr():
    for archetype in ARCHETYPES:
        width = archetype.f_r / archetype.q_loaded
        hits = 0
        for seed in range(100):
            rng = np.random.default_rng(3000 + seed)
            trace = lorentzian_trace(archetype, snr_db=30.0, rng=rng)
            result = fit_spectrum(trace)
            if not result.converged:
                continue
            q_ok = (
                abs(result.params["q_loaded"] - archetype.q_loaded)
                <= 0.05 * archetype.q_loaded
            )
            f_ok = abs(result.params["f_r"] - archetype.f_r) <= 0.1 * width
            hits += q_ok and f_ok
        assert hits >= 95, f"q_loaded {archetype.q_loaded:g}: {hits}/100"


def test_c04_physics_trace_fit_matches_rate_quality_factor():
    rates = purcell(BUNDLED_SYSTEM)
    q_true = rates.omega_r_dressed / (rates.kappa_pur + BUNDLED_SYSTEM.gamma_r)
    nu = rates.omega_r_dressed / TWO_PI
    width = nu / q_true
    grid = ch.FrequencyGrid.linspace(nu - 10 * width, nu + 10 * width, 801)
    trace = ch.ComplexTrace(grid, resonator.s21_physics(BUNDLED_SYSTEM, grid.omega))
    result = fit_spectrum(trace)
    assert result.converged
    assert_allclose(result.params["q_loaded"], q_true, rtol=1e-3)


def test_c05_power_sweep_recovers_saturation_model():
    pd, n_c, beta, q0 = 8.34e-5, 1.0, 0.5, 1.0e6
    n = np.logspace(-1.0, 6.0, 25)
    clean_q = 1.0 / (pd / (1.0 + n / n_c) ** beta + 1.0 / q0)
    hits = 0
    for seed in range(100):
        rng = np.random.default_rng(2000 + seed)
        q = clean_q * (1.0 + 0.02 * rng.standard_normal(n.size))
        points = [
            PowerSweepPoint(nk, qk, 0.02 * qk) for nk, qk in zip(n, q)
        ]
        result = fit_power_sweep(points)
        if not result.converged:
            continue
        ok = all(
            abs(result.params[key] - truth) <= 0.15 * truth
            for key, truth in (
                ("p_tan_delta", pd),
                ("n_c", n_c),
                ("beta", beta),
                ("q0", q0),
            )
        )
        if ok:
            q_single = result.params["q_single_photon_limit"]
            ok = 1.0e4 <= q_single <= 1.4e4
        hits += ok
    assert hits >= 95, f"{hits}/100"


def test_c06_switch_network_db_anchors():
    cfg = MuxConfig()
    grid = ch.FrequencyGrid.linspace(4.0e9, 8.0e9, 401)
    state = parallel_write(
        ControlState.initial(cfg.n_ports, "parallel"), d0=0, d1=0, le_pulse=True
    )
    responses = mux_s_params(cfg, state, 0.9, grid)
    i6 = 200
    assert math.isclose(grid.points[i6], 6.0e9)

    il_db = -20.0 * np.log10(np.abs(responses[0].s21))
    assert abs(il_db[i6] - 1.6) <= 0.5
    assert np.all((il_db >= 1.0) & (il_db <= 3.0))

    for port in (1, 2, 3):
        iso_db = -20.0 * np.log10(np.abs(responses[port].s21))
        assert abs(iso_db[i6] - 34.0) <= 3.0
        assert np.all((iso_db >= 30.0) & (iso_db <= 40.0))
        assert 5.0 <= iso_db[0] - iso_db[-1] <= 15.0

    unpowered = mux_s_params(cfg, state, 0.0, grid)
    for port in range(4):
        s21_db = 20.0 * np.log10(np.abs(unpowered[port].s21[i6]))
        assert abs(s21_db - (-21.4)) <= 2.0


def test_c07_control_protocol_one_hot_safety_and_equivalence():
    rng = np.random.default_rng(70)
    ops = rng.integers(0, 6, size=100_000)
    bits = rng.integers(0, 2, size=(100_000, 2))
    state = ControlState.initial(4, "serial")
    multi_hot_rejections = 0
    mode_rejections = 0
    for op, (b0, b1) in zip(ops, bits):
        try:
            if op == 0:
                state = serial_clock(state, int(b0))
            elif op == 1:
                state = latch(state)
            elif op == 2:
                state = parallel_write(state, int(b0), int(b1), le_pulse=True)
            elif op == 3:
                state = parallel_write(state, int(b0), int(b1), le_pulse=False)
            elif op == 4:
                state = set_lines(state, ps=int(b0))
            else:
                state = serial_clock(state, 1)
        except SelectionError:
            multi_hot_rejections += 1
        except InputError:
            mode_rejections += 1
        weight = sum(state.shift_register)
        assert weight <= 1
        if weight == 1:
            assert state.latched_selection == state.shift_register.index(1)
        else:
            assert state.latched_selection is None
    assert multi_hot_rejections > 0
    assert mode_rejections > 0

    cfg = MuxConfig()
    grid = ch.FrequencyGrid.linspace(4.0e9, 8.0e9, 41)
    for port in range(4):
        par = parallel_write(
            ControlState.initial(4, "parallel"),
            d0=port & 1,
            d1=(port >> 1) & 1,
            le_pulse=True,
        )
        ser = ControlState.initial(4, "serial")
        for i in range(4):
            ser = serial_clock(ser, 1 if i == port else 0)
        ser = latch(ser)
        assert par.latched_selection == ser.latched_selection == port
        s_par = mux_s_params(cfg, par, 0.9, grid)
        s_ser = mux_s_params(cfg, ser, 0.9, grid)
        for a, b in zip(s_par, s_ser):
            assert np.array_equal(a.s21, b.s21)

    assert programming_time(4, T_CLK_DEFAULT, "serial") == 4 * T_CLK_DEFAULT


def test_c08_supply_power_and_settling_anchors():
    assert dissipated_power(PowerTable(), 0.9) == 3.62e-5
    assert_allclose(rise_time(0.4e-9), 1.2e-9, rtol=0.01)
    assert_allclose(rise_time(0.6e-9), 1.8e-9, rtol=0.01)


def test_c09_thermal_shift_oracles_and_round_trip():
    ctx = StarkContext(chi=-2.0e6, nu_r=5.569e9, nu_q=6.58e9)
    for temperature in np.linspace(0.05, 5.0, 40):
        x = math.exp(-PLANCK * ctx.nu_r / (BOLTZMANN * temperature))
        closed = 2.0 * ctx.chi * x / (1.0 - x)
        summed = stark_forward(ctx, temperature, truncation=20000)
        assert_allclose(summed, closed, rtol=1e-12)

    n_mean, t_res = stark_invert(ctx, -7.7e6)
    assert_allclose(n_mean, 1.925, atol=1e-12)
    assert abs(n_mean - 2.2) <= 0.2 * 2.2
    _, t_qubit = stark_invert(ctx, -7.7e6, convention="qubit")
    assert 0.75 <= t_qubit <= 0.85

    for temperature in (0.1, 0.3, 0.713, 1.5, 3.0):
        shift = stark_forward(ctx, temperature)
        _, back = stark_invert(ctx, shift)
        assert_allclose(back, temperature, rtol=1e-9)
    assert t_res < t_qubit


def test_c10_cli_pipeline_reports_single_photon(tmp_path):
    chain = ch.load_chain_spec(ch.example_chain_path())
    sweep = ch.load_sweep_spec(ch.example_sweep_path())
    f_center = float(np.median(sweep.grid.points))
    loss_db = -ch.dbm_from_watts(ch.power_at_sample(chain, 0.0, f_center))
    sweep_dict = json.loads(open(ch.example_sweep_path()).read())
    sweep_dict["instrument_power_dbm"] = -163.0 + loss_db
    sweep_path = tmp_path / "sweep.json"
    sweep_path.write_text(json.dumps(sweep_dict))

    trace_path = tmp_path / "trace.csv"
    code = main(
        ["simulate", ch.example_chain_path(), str(sweep_path), "-o", str(trace_path)]
    )
    assert code == 0
    report_path = tmp_path / "report.json"
    code = main(
        [
            "fit-spectrum",
            str(trace_path),
            "--power-dbm-at-sample",
            "-163.0",
            "-o",
            str(report_path),
        ]
    )
    assert code == 0
    report = json.loads(report_path.read_text())
    assert report["converged"] is True
    assert abs(report["n_photons"] - 1.0) <= 0.1


def test_c11_cli_runs_are_byte_identical(tmp_path):
    paths = []
    for name in ("a", "b"):
        trace = tmp_path / f"trace_{name}.csv"
        report = tmp_path / f"report_{name}.json"
        sparams = tmp_path / f"sparams_{name}.csv"
        assert (
            main(
                [
                    "simulate",
                    ch.example_chain_path(),
                    ch.example_sweep_path(),
                    "-o",
                    str(trace),
                ]
            )
            == 0
        )
        assert main(["fit-spectrum", str(trace), "-o", str(report)]) == 0
        assert (
            main(
                ["mux-program", "--mode", "serial", "--port", "2", "-o", str(sparams)]
            )
            == 0
        )
        paths.append((trace, report, sparams))
    for first, second in zip(*paths):
        assert first.read_bytes() == second.read_bytes()
