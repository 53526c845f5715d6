"""Acceptance gate: one test per criterion, each at its stated tolerance.

A PASS/FAIL line per criterion is printed in the pytest terminal summary
(section "acceptance criteria"); running this file directly prints the same.
"""

import numpy as np
import pytest

from qfgur import bounds, oracle
from qfgur.families import fig2_family, gellmann_148, pauli_zx
from qfgur.functionals import LinearInequalitySpec, linear_steering_bound, werner_s_q, werner_thresholds

R2 = 1 / np.sqrt(2)
SQ5 = np.sqrt(5)
P_GRID = np.linspace(0.0, 1.0, 101)


def note(record_property, text):
    record_property("detail", text)
    print(text)


def test_criterion_1_qubit_werner(record_property):
    s = bounds.s_sequence(pauli_zx())
    s_err = np.max(np.abs(s - [1, 1 + R2, 2, 2]))
    sq_err = max(abs(werner_s_q("qubit", p) - (1 + p)) for p in P_GRID)
    t = werner_thresholds("qubit")
    steer, ent = t["steering"]["closed_form"], t["entanglement"]["closed_form"]
    note(record_property, f"qubit s err {s_err:.1e}, S_Q err {sq_err:.1e}, thresholds {steer:.7f} / {ent:.7f}")
    assert s_err <= 1e-9
    assert sq_err <= 1e-9
    assert abs(steer - 0.7071068) <= 1e-6 and abs(t["steering"]["bisection"] - 0.7071068) <= 1e-6
    assert abs(ent - 0.5857864) <= 1e-6 and abs(t["entanglement"]["bisection"] - 0.5857864) <= 1e-6


def test_criterion_2_qutrit_werner(record_property):
    mset = gellmann_148()
    s = bounds.s_sequence(mset)
    s_err = np.max(np.abs(s - ([1, 2, (3 + SQ5) / 2] + [3] * 6)))
    sq_err = max(abs(werner_s_q("qutrit", p) - (1 + 2 * p)) for p in P_GRID)
    t = werner_thresholds("qutrit")
    steer, ent = t["steering"]["closed_form"], t["entanglement"]["closed_form"]
    rut = bounds.rutkowski_bound(mset)
    note(
        record_property,
        f"qutrit s err {s_err:.1e}, S_Q err {sq_err:.1e}, thresholds {steer:.7f} / {ent:.7f}, overlap bound {rut:.12f}",
    )
    assert s_err <= 1e-9
    assert sq_err <= 1e-9
    assert abs(steer - 0.809017) <= 1e-6 and abs(t["steering"]["bisection"] - 0.809017) <= 1e-6
    assert abs(ent - 0.763932) <= 1e-6 and abs(t["entanglement"]["bisection"] - 0.763932) <= 1e-6
    assert abs(rut - 3.0) <= 1e-9
    assert t["rutkowski"]["closed_form"] is None


def test_criterion_3_fig2_sweep(record_property):
    worst_low, worst_high = np.inf, np.inf
    for theta in np.linspace(0.0, np.pi / 2, 100):
        m = fig2_family(theta)
        steer, ent, rut = bounds.steering_bound(m), bounds.entanglement_bound(m, m), bounds.rutkowski_bound(m)
        worst_low = min(worst_low, steer - ent)
        worst_high = min(worst_high, rut - steer)
    anchor = bounds.steering_bound(fig2_family(0.0))
    note(
        record_property,
        f"100-point sweep: min(steer-ent) {worst_low:.3e}, min(overlap-steer) {worst_high:.3e}, steer(0) {anchor:.12f}",
    )
    assert worst_low >= -1e-9 and worst_high >= -1e-9
    assert abs(anchor - 3.0) <= 1e-9


def test_criterion_4_linear_inequality(record_property):
    value = linear_steering_bound(LinearInequalitySpec([1, 1], [1, -1]), pauli_zx())
    note(record_property, f"linear two-setting bound {value:.12f} (1/sqrt2 = {R2:.12f})")
    assert abs(value - R2) <= 1e-9


def test_criterion_5_steering_property_suite(record_property):
    rep = oracle.steering_suite(oracle.OracleConfig(seed=42, samples=1000))
    sat = {k: v["bound"] - v["aligned_max"] for k, v in rep["sets"].items()}
    note(
        record_property,
        f"{rep['samples']} LHS models + extremal enumeration: {rep['violations']} violations, "
        f"saturation gaps {', '.join(f'{k} {v:.1e}' for k, v in sat.items())}",
    )
    assert rep["violations"] == 0
    assert set(sat) == {"pauli-zx", "gellmann-148"}
    assert all(gap <= 1e-6 for gap in sat.values())


def test_criterion_6_entanglement_property_suite(record_property):
    rep = oracle.entanglement_suite(oracle.OracleConfig(seed=42, samples=1000))
    note(record_property, f"{rep['samples']} separable ensembles: {rep['violations']} violations, worst margin {rep['worst_margin']:.3e}")
    assert rep["violations"] == 0


def test_criterion_7_majorization_suites(record_property):
    cfg = oracle.OracleConfig(seed=42, samples=10_000)
    reports = [oracle.appendix_a_suite(cfg)] + [
        oracle.sample_majorization_suite(cfg, m) for m in (pauli_zx(), gellmann_148())
    ]
    total = sum(r["violations"] for r in reports)
    note(
        record_property,
        f"10000 dot-product triples + 2x10000 states: {total} violations, worst margin "
        f"{min(r['worst_margin'] for r in reports):.1e}",
    )
    assert total == 0


def test_criterion_8_fine_grained_monotonicity(record_property):
    rep = oracle.zeta_suite(oracle.OracleConfig(seed=42, samples=200), grid_checks=50)
    note(
        record_property,
        f"200 tuples sep<=quantum, 50 qubit grid checks: {rep['violations']} violations, "
        f"grid margin {rep['grid_worst_margin']:.1e}",
    )
    assert rep["violations"] == 0
    assert rep["grid_checks"] == 50


def test_criterion_9_oracle_equivalence(record_property):
    rng = np.random.default_rng(42)
    sets = [pauli_zx(), gellmann_148()]
    sets += [oracle.random_projective_set(int(rng.integers(2, 4)), int(rng.integers(1, 4)), rng) for _ in range(20)]
    worst = 0.0
    for mset in sets:
        for k in range(1, len(mset.pool) + 1):
            worst = max(worst, abs(oracle.brute_subset_norm(mset, k) - bounds.subset_norm(mset, k)[0]))
    note(record_property, f"{len(sets)} sets, every k: max |brute - ladder| = {worst:.1e}")
    assert worst <= 1e-10


def test_criterion_10_fig2_curve_not_tabulated(record_property):
    # the curves are only checked through the ordering and theta = 0 anchor of criterion 3
    m0 = fig2_family(0.0)
    anchors_hold = abs(bounds.steering_bound(m0) - 3.0) <= 1e-9 and abs(bounds.rutkowski_bound(m0) - 3.0) <= 1e-9
    note(record_property, "no reference curve values exist; ordering + theta=0 anchor substitute (see criterion 3)")
    assert anchors_hold


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
