import math
from dataclasses import replace

import numpy as np
import pytest

import saradc as sa
from saradc.capdac import (build_cap_array, build_split_array, compare_topologies,
                           conventional_energy, conversion_energy, initial_state,
                           inl_from_steps, monotonic_energy_oracle, ron_schedule,
                           splitcap_energy, step_voltage, switch_bit,
                           transfer_thresholds)


def _decisions(code, bits):
    return [1 if (code >> (bits - 1 - k)) & 1 else -1 for k in range(bits)]


# ---------------------------------------------------------------------------
# array construction

def test_no_mismatch_binary_weights(ideal_cfg):
    arr = build_cap_array(ideal_cfg, np.random.default_rng(0))
    u = ideal_cfg.c_dac / 512
    for i in range(1, 10):
        assert math.isclose(arr.c_bits_p[i - 1], 2 ** (9 - i) * u, rel_tol=1e-12)
    assert math.isclose(arr.c_total_p, ideal_cfg.c_dac, rel_tol=1e-12)
    assert math.isclose(arr.c_total_n, ideal_cfg.c_dac, rel_tol=1e-12)
    assert np.all(arr.dev_p == 0.0)


def test_construction_quantum_close_to_physical_unit(ideal_cfg):
    arr = build_cap_array(ideal_cfg, np.random.default_rng(0))
    assert abs(arr.c_unit_eff - ideal_cfg.c_unit) / ideal_cfg.c_unit < 0.02


def test_mismatch_sqrt_unit_count_scaling(ref_cfg):
    # the MSB capacitor aggregates 256 units, so its relative spread is
    # sigma_u / 16; check over many draws
    cfg = replace(ref_cfg, sigma_u=0.01)
    rng = np.random.default_rng(5)
    devs = np.array([build_cap_array(cfg, rng).dev_p[0] for _ in range(4000)])
    expect = 0.01 / math.sqrt(256)
    assert abs(devs.std() / expect - 1.0) < 0.05
    assert abs(devs.mean()) < 3 * expect / math.sqrt(len(devs))


def test_all_caps_positive_under_extreme_mismatch(ref_cfg):
    cfg = replace(ref_cfg, sigma_u=0.3)
    arr = build_cap_array(cfg, np.random.default_rng(11))
    assert np.all(arr.c_bits_p > 0) and np.all(arr.c_bits_n > 0)
    assert arr.c_term_p > 0 and arr.c_term_n > 0


# ---------------------------------------------------------------------------
# step ladder

def test_step_voltage_examples(ideal_cfg, ideal_array):
    d = sa.derived_constants(ideal_cfg)
    assert math.isclose(step_voltage(1, ideal_array), d.v_fs_net / 2, rel_tol=1e-12)
    assert math.isclose(step_voltage(1, ideal_array), 0.7879, rel_tol=1e-3)
    assert math.isclose(step_voltage(9, ideal_array), d.v_fs_net / 512, rel_tol=1e-12)
    assert math.isclose(step_voltage(9, ideal_array), 3.078e-3, rel_tol=1e-3)
    with pytest.raises(ValueError):
        step_voltage(10, ideal_array)


def test_applied_corrections_telescope_to_one_lsb(ideal_cfg, ideal_array):
    # binary search: after all corrections the worst residue is one LSB
    d = sa.derived_constants(ideal_cfg)
    applied = [step_voltage(i, ideal_array) / 2 for i in range(1, 10)]
    worst = d.v_fs_net / 2 - sum(applied)
    assert 0 < worst <= d.delta + 1e-15


def test_ron_schedule_constant_tau(ref_cfg):
    cfg = replace(ref_cfg, c_dac=1.28e-12, t_phic_low=1e-9, n_settle=10.0)
    arr = build_cap_array(sa.ideal_config(cfg), np.random.default_rng(0))
    r = ron_schedule(arr, cfg)
    assert math.isclose(r[0], 156.25, rel_tol=1e-9)          # 640 fF bit
    assert math.isclose(r[1], 2 * r[0], rel_tol=1e-12)       # half the cap
    c_nom = cfg.c_dac / 2.0 ** np.arange(1, 10)
    assert np.allclose(r * c_nom, cfg.t_phic_low / 10.0, rtol=1e-12)


def test_ron_schedule_settling_below_lsb_bound(ref_cfg):
    cfg = replace(ref_cfg, n_settle=10.0)
    d = sa.derived_constants(cfg)
    residual = math.exp(-cfg.n_settle)
    assert math.isclose(residual, 4.54e-5, rel_tol=1e-2)
    assert residual < d.delta / (2 * d.v_fs_net)


def test_ron_schedule_printed_form_flag(ref_cfg, ideal_array):
    r = ron_schedule(ideal_array, ref_cfg, printed_form=True)
    c_nom = ref_cfg.c_dac / 2.0 ** np.arange(1, 10)
    expect = 1.0 / (ref_cfg.n_settle * c_nom * ref_cfg.t_phic_low)
    assert np.allclose(r, expect, rtol=1e-12)


def test_explicit_ron_list_used(ref_cfg, ideal_array):
    cfg = replace(ref_cfg, ron_dac=tuple(float(i) for i in range(1, 10)))
    assert np.allclose(ron_schedule(ideal_array, cfg), np.arange(1.0, 10.0))


# ---------------------------------------------------------------------------
# switching

def test_switch_preserves_common_mode_exactly(ideal_cfg, ideal_array):
    state = initial_state(0.9, 0.5)
    cm0 = state.v_cm
    for i, d in enumerate([1, -1, 1, 1, -1, -1, 1, -1, 1], start=1):
        state = switch_bit(state, i, d, 1e-6, ideal_array, ideal_cfg)
    assert abs(state.v_cm - cm0) < 1e-12 * ideal_cfg.v_dd


def test_switch_applies_half_ladder_weight(ideal_cfg, ideal_array):
    state = initial_state(0.7, 0.7)
    s1 = step_voltage(1, ideal_array)
    new = switch_bit(state, 1, 1, 1e-6, ideal_array, ideal_cfg)
    assert math.isclose(new.v_diff, -s1 / 2, rel_tol=1e-12)


def test_switch_settling_residual(ref_cfg, ideal_array):
    # tau per bit is r_i * C_i; dt of ten tau leaves exp(-10) of the step
    cfg = replace(sa.ideal_config(ref_cfg), n_settle=10.0)
    state = initial_state(0.7, 0.7)
    new = switch_bit(state, 1, 1, cfg.t_phic_low, ideal_array, cfg)
    applied = step_voltage(1, ideal_array) / 2
    residual = abs((new.target_p - new.v_p) - (new.target_n - new.v_n))
    assert math.isclose(residual, applied * math.exp(-10.0), rel_tol=1e-9)


def test_switch_rejects_bad_calls(ideal_cfg, ideal_array):
    state = initial_state(0.7, 0.7)
    with pytest.raises(ValueError, match="settle window"):
        switch_bit(state, 1, 1, 0.0, ideal_array, ideal_cfg)
    state = switch_bit(state, 1, 1, 1e-9, ideal_array, ideal_cfg)
    with pytest.raises(ValueError, match="already switched"):
        switch_bit(state, 1, -1, 1e-9, ideal_array, ideal_cfg)
    with pytest.raises(ValueError, match="decision"):
        switch_bit(state, 2, 0, 1e-9, ideal_array, ideal_cfg)


def test_each_capacitor_fires_at_most_once(ideal_cfg, ideal_array):
    # the one-way discipline: a full conversion touches each bit exactly once
    state = initial_state(0.7, 0.7)
    for i, d in enumerate(_decisions(389, 10)[:9], start=1):
        state = switch_bit(state, i, d, 1e-9, ideal_array, ideal_cfg)
    assert sorted(state.switched) == list(range(1, 10))
    assert len(set(state.switched)) == 9


# ---------------------------------------------------------------------------
# energy

def test_energy_matches_independent_oracle(ideal_cfg, ideal_array):
    for code in (0, 1, 511, 512, 682, 1023, 341):
        e_inc = conversion_energy(code, ideal_array, ideal_cfg)
        e_ora = monotonic_energy_oracle(_decisions(code, 10), ideal_array)
        assert math.isclose(e_inc, e_ora, rel_tol=1e-12)


def test_energy_oracle_with_mismatch(ref_cfg):
    cfg = replace(ref_cfg, sigma_u=0.02)
    arr = build_cap_array(cfg, np.random.default_rng(9))
    for code in (5, 700, 1023):
        e_inc = conversion_energy(code, arr, cfg)
        e_ora = monotonic_energy_oracle(_decisions(code, 10), arr)
        assert math.isclose(e_inc, e_ora, rel_tol=1e-12)


def test_every_event_nonnegative(ideal_cfg, ideal_array):
    for code in (0, 1023, 341, 682, 512):
        state = initial_state(0.7, 0.7)
        for i, d in enumerate(_decisions(code, 10)[:9], start=1):
            new = switch_bit(state, i, d, 1e-9, ideal_array, ideal_cfg)
            assert new.energy >= state.energy
            state = new


def test_monotonic_cheaper_than_conventional_all_codes(ideal_cfg, ideal_array):
    u = ideal_cfg.c_dac / 1024 * ideal_cfg.v_ref ** 2
    for code in range(1024):
        e_mono = conversion_energy(code, ideal_array, ideal_cfg)
        e_conv = (conventional_energy(code, 10)
                  + conventional_energy(1023 - code, 10)) * u
        assert e_mono < e_conv


def test_conventional_two_bit_hand_enumeration():
    # hand-walked: initial top-weight charge costs 1.0, a kept trial 0.25,
    # a rejected trial 1.25 (all in units of C_unit * V_ref^2)
    assert math.isclose(conventional_energy(3, 2), 1.25, rel_tol=1e-12)
    assert math.isclose(conventional_energy(2, 2), 1.25, rel_tol=1e-12)
    assert math.isclose(conventional_energy(1, 2), 2.25, rel_tol=1e-12)
    assert math.isclose(conventional_energy(0, 2), 2.25, rel_tol=1e-12)


def test_splitcap_two_bit_hand_enumeration():
    # the recycling reject is a single small discharge costing 0.25
    assert math.isclose(splitcap_energy(3, 2), 1.25, rel_tol=1e-12)
    assert math.isclose(splitcap_energy(1, 2), 1.25, rel_tol=1e-12)


def test_recycling_never_worse_per_code():
    for code in range(1024):
        assert splitcap_energy(code, 10) <= conventional_energy(code, 10) + 1e-12


# ---------------------------------------------------------------------------
# static transfer

def test_ideal_thresholds_are_uniform(ideal_cfg, ideal_array):
    d = sa.derived_constants(ideal_cfg)
    steps = np.array([step_voltage(i, ideal_array) / 2 for i in range(1, 10)])
    t = transfer_thresholds(steps, 10)
    ideal = (np.arange(1, 1024) - 512) * d.delta
    assert np.max(np.abs(t - ideal)) < 1e-12
    inl = inl_from_steps(steps, 10, d.delta)
    assert np.max(np.abs(inl)) < 1e-9


def test_split_ladder_matches_binary_without_parasitics(ref_cfg):
    cfg = replace(sa.ideal_config(ref_cfg), c_p=0.0)
    split = build_split_array(cfg, np.random.default_rng(0))
    s1 = step_voltage(1, split)
    assert math.isclose(s1, 0.8, rel_tol=1e-12)
    for i in range(2, 10):
        assert math.isclose(step_voltage(i, split), s1 / 2 ** (i - 1), rel_tol=1e-9)


def test_split_parasitic_breaks_linearity(ref_cfg):
    cfg = sa.ideal_config(ref_cfg)   # keeps c_p = 20 fF, no mismatch
    split = build_split_array(cfg, np.random.default_rng(0))
    steps = np.array([step_voltage(i, split) / 2 for i in range(1, 10)])
    delta = steps[0] / 256
    inl = inl_from_steps(steps, 10, delta)
    assert np.max(np.abs(inl)) > 0.5


# ---------------------------------------------------------------------------
# trade study

@pytest.fixture(scope="module")
def trade(ref_cfg):
    return compare_topologies(ref_cfg, np.random.default_rng(5))


def test_trade_energy_saving_near_three_eighths(trade):
    assert abs(trade.energy_saving - 0.375) < 0.05


def test_trade_binary_row_matches_exhaustive_switching(ref_cfg, trade):
    rng = np.random.default_rng(5)
    arr = build_cap_array(replace(ref_cfg, topology="binary"), rng)
    total = sum(conversion_energy(c, arr, ref_cfg) for c in range(1024))
    assert math.isclose(trade.binary.e_avg_conversion, total / 1024, rel_tol=1e-12)


def test_trade_noise_follows_capacitance_scaling(trade, ref_cfg):
    # kT/C law: sixteen times less capacitance means four times the noise
    from saradc.capdac import _sigma_ktc_diff
    c = ref_cfg.c_dac + ref_cfg.c_p
    assert math.isclose(_sigma_ktc_diff(c / 16.0, 300.0),
                        4.0 * _sigma_ktc_diff(c, 300.0), rel_tol=1e-12)
    # and the realized split array is substantially noisier than binary
    assert trade.split.sigma_ktc / trade.binary.sigma_ktc > 2.5


def test_trade_split_reduces_capacitance(trade):
    assert trade.c_reduction > 8.0
    assert trade.split.c_total_side < trade.binary.c_total_side / 8.0


def test_trade_split_inl_worse_paired_seed(ref_cfg):
    a = compare_topologies(ref_cfg, np.random.default_rng(17))
    assert a.split.inl_max > a.binary.inl_max


def test_trade_report_serializes(trade):
    csv = trade.to_csv()
    assert csv.splitlines()[0].startswith("topology,")
    assert len(csv.splitlines()) == 3
    d = trade.to_json_dict()
    assert {"rows", "energy_saving_ideal_accounting", "capacitance_reduction"} <= set(d)
