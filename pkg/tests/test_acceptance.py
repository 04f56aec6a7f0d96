"""End-to-end acceptance gate; each test prints one PASS/FAIL line."""

import time

import numpy as np
import pytest

from risd2d import (GaParams, ImpairmentParams, McParams, PhaseConfig,
                    SystemConfig, asymptotic_rate, cascaded_second_moment,
                    ergodic_rate_mc, exhaustive_search, ga_optimize, gamma_tilde,
                    moment_oracle, optimal_single_pair_phases, random_geometry,
                    random_phases, rate_general, rate_no_ris_hwi)

from conftest import make_config


def report(num, name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {num} ({name}): {status} {detail}")
    assert ok, f"criterion {num} ({name}) failed: {detail}"


def test_criterion_1_closed_form_fidelity():
    geom = random_geometry(16, 6, seed=7)
    worst = 0.0
    worst_point = None
    for snr_db in (-10.0, 0.0, 10.0, 20.0):
        t0 = time.perf_counter()
        cfg = SystemConfig(geometry=geom, alpha_a=1, alpha_b=1, rician_a=10,
                           rician_b=10, power=10 ** (snr_db / 10), noise=1,
                           impairments=ImpairmentParams(0.05, 0.05, 4.0),
                           phase_bits=2)
        phases = ga_optimize(cfg, "general", 2, GaParams(seed=5)).phases
        closed = rate_general(cfg, phases).sum_rate
        mc = ergodic_rate_mc(cfg, phases, McParams(n_channel_draws=50_000, seed=3))
        rel = abs(closed - mc.sum_rate) / mc.sum_rate
        elapsed = time.perf_counter() - t0
        if rel > worst:
            worst, worst_point = rel, snr_db
        assert elapsed < 120, f"SNR {snr_db} dB point took {elapsed:.1f}s"
    report(1, "closed-form fidelity", worst < 0.05,
           f"worst rel error {worst:.4f} at SNR {worst_point} dB")


def test_criterion_2_moment_oracle():
    rng = np.random.default_rng(101)
    failures = []
    cells = 0
    for n_el in (4, 9, 16):
        for eps in (0.0, 1.0, 10.0):
            for beta in (0.0, 1.0, 10.0):
                for kappa_phase in (0.0, 4.0, 1e9):
                    cells += 1
                    cfg = make_config(n_elements=n_el, n_pairs=1, rician_a=eps,
                                      rician_b=beta, kappa_phase=kappa_phase)
                    theta = PhaseConfig(rng.uniform(0, 2 * np.pi, n_el))
                    est = moment_oracle(cfg, theta, 0, 0,
                                        McParams(n_channel_draws=40_000,
                                                 seed=int(rng.integers(1 << 30))))
                    closed = cascaded_second_moment(theta, cfg.chi, 0, 0, cfg)
                    se = est.half_width / 1.959963984540054
                    if abs(est.mean - closed) > 3 * max(se, 1e-12):
                        failures.append((n_el, eps, beta, kappa_phase))
    report(2, "moment oracle", cells >= 36 and not failures,
           f"{cells} cells, failures: {failures}")


def test_criterion_3_ga_optimality():
    cfg = make_config(n_elements=9, n_pairs=2, phase_bits=2, angle_seed=11)
    t0 = time.perf_counter()
    exact = exhaustive_search(cfg, "general", 2)
    exhaustive_s = time.perf_counter() - t0
    assert exact.n_evaluations == 1 << 18
    ga = ga_optimize(cfg, "general", 2, GaParams(seed=5))
    gap = (exact.sum_rate - ga.sum_rate) / exact.sum_rate
    ok = 0 <= gap < 0.01 and exhaustive_s < 300
    report(3, "GA optimality", ok,
           f"gap {gap:.5f}, exhaustive {exhaustive_s:.1f}s over {exact.n_evaluations} points")


def test_criterion_4_analytic_optimum():
    cfg = make_config(n_elements=16, n_pairs=1)
    theta = optimal_single_pair_phases(cfg.geometry)
    coherence = gamma_tilde(theta, 1.0, 0, 0, cfg.geometry)
    analytic_rate = rate_general(cfg, theta).sum_rate
    rng = np.random.default_rng(17)
    violations = sum(
        rate_general(cfg, random_phases(16, None, rng)).sum_rate > analytic_rate
        for _ in range(1000))
    ok = abs(coherence - 256.0) < 1e-8 and violations == 0
    report(4, "analytic optimum", ok,
           f"coherence {coherence:.10f}, random-draw violations {violations}")


def test_criterion_5_asymptotic_limit():
    limit = asymptotic_rate("nris", "eu_over_l", e_u=1.0, alpha_a=1, alpha_b=1,
                            rician_a=10, rician_b=10, kappa_t=0.05, kappa_r=0.05)
    errors = []
    for n_el in (16, 64, 144, 400):
        cfg = make_config(n_elements=n_el, n_pairs=1, power=1.0 / n_el)
        theta = optimal_single_pair_phases(cfg.geometry)
        errors.append(abs(rate_no_ris_hwi(cfg, theta).sum_rate - limit) / limit)
    monotone = all(b < a for a, b in zip(errors, errors[1:]))
    report(5, "asymptotic limit", errors[-1] < 0.02 and monotone,
           f"errors over L=(16,64,144,400): {[f'{e:.4f}' for e in errors]}")


def test_criterion_6_uniform_phase_noise_degeneracy():
    cfg = make_config(n_elements=16, n_pairs=2, kappa_phase=0.0, phase_bits=None)
    rng = np.random.default_rng(23)
    theta_a = PhaseConfig(rng.uniform(0, 2 * np.pi, 16))
    theta_b = PhaseConfig(rng.uniform(0, 2 * np.pi, 16))
    closed_a = rate_general(cfg, theta_a).per_pair
    closed_b = rate_general(cfg, theta_b).per_pair
    bit_identical = np.array_equal(closed_a, closed_b)

    ga_phases = ga_optimize(cfg, "general", None,
                            GaParams(generations=30, seed=5)).phases
    mc_ga = ergodic_rate_mc(cfg, ga_phases, McParams(n_channel_draws=30_000, seed=3))
    mc_rand = ergodic_rate_mc(cfg, theta_a, McParams(n_channel_draws=30_000, seed=4))
    overlap = (abs(mc_ga.sum_rate - mc_rand.sum_rate)
               <= mc_ga.sum_ci_half_width + mc_rand.sum_ci_half_width)
    report(6, "uniform-phase-noise degeneracy", bit_identical and overlap,
           f"bit-identical={bit_identical}, mc gap "
           f"{abs(mc_ga.sum_rate - mc_rand.sum_rate):.4f} vs CI "
           f"{mc_ga.sum_ci_half_width + mc_rand.sum_ci_half_width:.4f}")


def test_criterion_7_quantization_sufficiency():
    rates = {}
    for bits in (1, 2, 3, 4, 5):
        cfg = make_config(n_elements=16, n_pairs=2, power=100.0, phase_bits=bits,
                          angle_seed=11)
        res = ga_optimize(cfg, "general", bits,
                          GaParams(population_size=80, generations=200, seed=5))
        rates[bits] = rate_general(cfg, res.phases).sum_rate
    gap = abs(rates[3] - rates[5]) / rates[5]
    report(7, "quantization sufficiency", gap < 0.02,
           f"rates per bit {[f'{rates[b]:.4f}' for b in sorted(rates)]}, "
           f"B3-vs-B5 gap {gap:.4f}")


def test_criterion_8_impairment_monotonicity():
    theta = PhaseConfig(np.random.default_rng(2).uniform(0, 2 * np.pi, 16))
    rates = []
    for kappa in (0.0, 0.02, 0.05, 0.1):
        cfg = make_config(n_elements=16, n_pairs=3, kappa_t=kappa, kappa_r=kappa)
        rates.append(rate_general(cfg, theta).sum_rate)
    monotone = all(b <= a + 1e-12 for a, b in zip(rates, rates[1:]))
    report(8, "impairment monotonicity", monotone,
           f"sum rates over kappa grid: {[f'{r:.4f}' for r in rates]}")


def test_criterion_9_special_case_algebra():
    from risd2d import rate_no_transceiver_hwi
    rng = np.random.default_rng(31)
    worst_k0 = worst_chi1 = 0.0
    for _ in range(100):
        n_el = int(rng.choice([4, 9, 16]))
        n_pairs = int(rng.integers(1, 5))
        geom = random_geometry(n_el, n_pairs, seed=int(rng.integers(1 << 30)))
        common = dict(
            geometry=geom,
            alpha_a=rng.uniform(0.1, 2, n_pairs), alpha_b=rng.uniform(0.1, 2, n_pairs),
            rician_a=rng.uniform(0, 20, n_pairs), rician_b=rng.uniform(0, 20, n_pairs),
            power=rng.uniform(0.1, 100, n_pairs), noise=rng.uniform(0.5, 2, n_pairs),
        )
        theta = PhaseConfig(rng.uniform(0, 2 * np.pi, n_el))

        cfg_k0 = SystemConfig(**common, impairments=ImpairmentParams(0, 0, 4.0))
        a = rate_general(cfg_k0, theta).per_pair
        b = rate_no_transceiver_hwi(cfg_k0, theta).per_pair
        worst_k0 = max(worst_k0, float(np.max(np.abs(a - b) / np.abs(b))))

        cfg_chi1 = SystemConfig(
            **common, impairments=ImpairmentParams(0.05, 0.05, float("inf")))
        c = rate_general(cfg_chi1, theta).per_pair
        d = rate_no_ris_hwi(cfg_chi1, theta).per_pair
        worst_chi1 = max(worst_chi1, float(np.max(np.abs(c - d) / np.abs(d))))
    ok = worst_k0 < 1e-12 and worst_chi1 < 1e-12
    report(9, "special-case algebra", ok,
           f"worst rel dev: kappa=0 {worst_k0:.2e}, chi=1 {worst_chi1:.2e}")
